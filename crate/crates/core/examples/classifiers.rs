//! The six-family zoo and top-3 majority voting on a held-out split.

use rebalance::classify::{self, ClassifierKind};
use rebalance::metrics;
use rebalance::synth::{two_gaussians, TwoGaussians};
use rebalance::tabular::{stratified_split, SplitFractions};

fn main() -> rebalance::Result<()> {
    let data = two_gaussians(&TwoGaussians {
        rows: 600,
        positive_fraction: 0.25,
        dim: 4,
        separation: 2.5,
        seed: 9,
    });
    let split = stratified_split(&data, SplitFractions::default(), 9)?;
    let models = ClassifierKind::defaults()
        .iter()
        .map(|k| classify::train(k, &data, &split.train, 9))
        .collect::<rebalance::Result<Vec<_>>>()?;
    let (ensemble, scores) = classify::select_top3(models, &data, &split.validation)?;
    for s in &scores {
        println!("{:<12} validation AUC {:.4}  F1 {:.4}", s.family.name(), s.auc, s.f1);
    }
    let labels: Vec<u8> = split.holdout.iter().map(|&r| data.label(r)).collect();
    let votes = split.holdout.iter().map(|&r| ensemble.vote(data.row(r))).collect::<rebalance::Result<Vec<_>>>()?;
    let probs = split.holdout.iter().map(|&r| ensemble.proba(data.row(r))).collect::<rebalance::Result<Vec<_>>>()?;
    let row = metrics::MetricRow::from_matrix(&metrics::confusion(&labels, &votes)?, metrics::auc(&labels, &probs)?)?;
    println!("ensemble {}: {row:?}", ensemble.code());
    Ok(())
}
