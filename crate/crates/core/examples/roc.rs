//! Confusion-matrix metrics and a tied-score ROC curve.

use rebalance::metrics;

fn main() -> rebalance::Result<()> {
    let labels = [1, 1, 0, 1, 0, 0, 1, 0];
    let scores = [0.9, 0.7, 0.7, 0.6, 0.4, 0.4, 0.4, 0.1];
    let roc = metrics::roc_auc(&labels, &scores)?;
    for ((fpr, tpr), t) in roc.points.iter().zip(&roc.thresholds) {
        println!("threshold {t:>4}: fpr {fpr:.3} tpr {tpr:.3}");
    }
    println!("AUC {:.4} (rank statistic {:.4})", roc.auc, metrics::auc_mann_whitney(&labels, &scores)?);

    let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
    let cm = metrics::confusion(&labels, &preds)?;
    println!("{cm:?}");
    println!("{:?}", metrics::MetricRow::from_matrix(&cm, roc.auc)?);
    Ok(())
}
