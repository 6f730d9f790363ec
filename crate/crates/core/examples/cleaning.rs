//! ENN, Tomek links and the hybrid pipelines, including STEM.

use rebalance::cleaners::{self, EnnScope};
use rebalance::samplers::{MixupConfig, SmoteConfig};
use rebalance::synth::two_moons;

fn main() -> rebalance::Result<()> {
    let data = two_moons(40, 160, 0.3, 5);
    let rows = data.all_rows();

    let links = cleaners::find_tomek_links(&data, &rows)?;
    println!("{} Tomek links, e.g. {:?}", links.len(), links.first());
    let (kept, report) = cleaners::enn(&data, &rows, EnnScope::AllRows)?;
    println!("ENN keeps {} of {} rows: {:?} -> {:?}", kept.len(), rows.len(), report.before, report.after);

    let smote = SmoteConfig { seed: 1, ..Default::default() };
    for (name, out) in [
        ("smote_tomek", cleaners::smote_tomek(&data, &rows, &smote, false)?),
        ("smote_enn", cleaners::smote_enn(&data, &rows, &smote)?),
        ("stem", cleaners::stem(&data, &rows, &smote, &MixupConfig { seed: 1, ..Default::default() })?),
    ] {
        let stages: Vec<String> = out.cleaning.iter().map(|c| format!("{} -{}", c.stage, c.removed.len())).collect();
        println!("{name:>11}: final {:?}, stages [{}]", out.class_counts(), stages.join(", "));
    }
    Ok(())
}
