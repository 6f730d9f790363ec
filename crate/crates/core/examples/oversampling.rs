//! Every oversampler on a two-moons problem: class counts and the first
//! provenance lines of each.

use rebalance::samplers::{self, AdasynConfig, BorderlineConfig, MixupConfig, SmoteConfig, SvmSmoteConfig};
use rebalance::synth::two_moons;

fn main() -> rebalance::Result<()> {
    let data = two_moons(20, 180, 0.15, 1);
    let rows = data.all_rows();
    println!("before: {:?}", data.class_counts(&rows));
    let runs = [
        ("smote", samplers::smote(&data, &rows, &SmoteConfig::default())?),
        ("borderline", samplers::borderline_smote(&data, &rows, &BorderlineConfig::default())?),
        ("svm_smote", samplers::svm_smote(&data, &rows, &SvmSmoteConfig::default())?),
        ("adasyn", samplers::adasyn(&data, &rows, &AdasynConfig::default())?),
        ("mixup", samplers::mixup_oversample(&data, &rows, &MixupConfig::default())?),
    ];
    for (name, out) in &runs {
        println!("{name:>10}: {:?}, {} synthetic", out.class_counts(), out.synthetic_count());
        for rec in out.provenance.iter().take(2) {
            println!("            {}", rec.log_line());
        }
        for w in &out.warnings {
            println!("            warning: {w}");
        }
    }
    Ok(())
}
