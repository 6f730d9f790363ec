//! Confusion matrices, accuracy / precision / recall / F1, ROC and AUC.
//!
//! Class 1 is positive. Ratios with a zero denominator evaluate to 0 and set
//! [`Score::zero_division`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub t_pos: u64,
    pub t_neg: u64,
    pub f_pos: u64,
    pub f_neg: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.t_pos + self.t_neg + self.f_pos + self.f_neg
    }
}

pub fn confusion(labels: &[u8], predictions: &[u8]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() {
        return Err(Error::LengthMismatch(labels.len(), predictions.len()));
    }
    if labels.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut cm = ConfusionMatrix::default();
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y == 1, p == 1) {
            (true, true) => cm.t_pos += 1,
            (false, false) => cm.t_neg += 1,
            (false, true) => cm.f_pos += 1,
            (true, false) => cm.f_neg += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub zero_division: bool,
}

fn ratio(num: u64, den: u64) -> Score {
    if den == 0 {
        Score {
            value: 0.0,
            zero_division: true,
        }
    } else {
        Score {
            value: num as f64 / den as f64,
            zero_division: false,
        }
    }
}

fn nonempty(cm: &ConfusionMatrix) -> Result<()> {
    if cm.total() == 0 {
        Err(Error::EmptyMatrix)
    } else {
        Ok(())
    }
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    nonempty(cm)?;
    Ok((cm.t_pos + cm.t_neg) as f64 / cm.total() as f64)
}

pub fn precision(cm: &ConfusionMatrix) -> Result<Score> {
    nonempty(cm)?;
    Ok(ratio(cm.t_pos, cm.t_pos + cm.f_pos))
}

pub fn recall(cm: &ConfusionMatrix) -> Result<Score> {
    nonempty(cm)?;
    Ok(ratio(cm.t_pos, cm.t_pos + cm.f_neg))
}

/// Harmonic mean of precision and recall; flagged when either input was
/// flagged or both are zero.
pub fn f1(cm: &ConfusionMatrix) -> Result<Score> {
    let p = precision(cm)?;
    let r = recall(cm)?;
    let sum = p.value + r.value;
    if sum == 0.0 {
        return Ok(Score {
            value: 0.0,
            zero_division: true,
        });
    }
    Ok(Score {
        value: 2.0 * p.value * r.value / sum,
        zero_division: p.zero_division || r.zero_division,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub accuracy: f64,
    pub auc: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    pub zero_division: bool,
}

impl MetricRow {
    pub fn from_matrix(cm: &ConfusionMatrix, auc: f64) -> Result<Self> {
        let (p, r, f) = (precision(cm)?, recall(cm)?, f1(cm)?);
        Ok(MetricRow {
            accuracy: accuracy(cm)?,
            auc,
            recall: r.value,
            precision: p.value,
            f1: f.value,
            zero_division: p.zero_division || r.zero_division || f.zero_division,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`, one point per distinct
    /// threshold in descending order.
    pub points: Vec<(f64, f64)>,
    /// Thresholds aligned with `points`; the first is `+inf`.
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

fn class_totals(labels: &[u8], scores: &[f64]) -> Result<(u64, u64)> {
    if labels.len() != scores.len() {
        return Err(Error::LengthMismatch(labels.len(), scores.len()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("NaN score".into()));
    }
    let pos = labels.iter().filter(|&&y| y == 1).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedAuc);
    }
    Ok((pos, neg))
}

/// Mann-Whitney AUC with midranks for tied scores.
pub fn auc_mann_whitney(labels: &[u8], scores: &[f64]) -> Result<f64> {
    let (pos, neg) = class_totals(labels, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // doubled ranks keep midranks integral
    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let doubled_mid = (i + 1 + j + 1) as u128;
        for &k in &order[i..=j] {
            if labels[k] == 1 {
                rank_sum2 += doubled_mid;
            }
        }
        i = j + 1;
    }
    let u2 = rank_sum2 - u128::from(pos) * u128::from(pos + 1);
    Ok(u2 as f64 / (2.0 * pos as f64 * neg as f64))
}

/// ROC by sweeping distinct thresholds downward; AUC is the trapezoidal
/// area, checked against [`auc_mann_whitney`].
pub fn roc_auc(labels: &[u8], scores: &[f64]) -> Result<RocCurve> {
    let (pos, neg) = class_totals(labels, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = vec![f64::INFINITY];
    let (mut tp, mut fp) = (0u64, 0u64);
    // twice the area in units of one (positive, negative) cell
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let t = scores[order[i]];
        let (tp_prev, fp_prev) = (tp, fp);
        while i < order.len() && scores[order[i]] == t {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += u128::from(fp - fp_prev) * u128::from(tp_prev + tp);
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
        thresholds.push(t);
    }
    let auc = area2 as f64 / (2.0 * pos as f64 * neg as f64);
    let check = auc_mann_whitney(labels, scores)?;
    assert!((auc - check).abs() <= 1e-12, "trapezoid {auc} vs rank statistic {check}");
    Ok(RocCurve { points, thresholds, auc })
}

pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64> {
    Ok(roc_auc(labels, scores)?.auc)
}
