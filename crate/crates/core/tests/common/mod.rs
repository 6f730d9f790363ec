//! Brute-force reference implementations and random instance generators
//! shared by the integration tests and the acceptance gate. Nothing here
//! calls into the code it checks.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebalance::{ColumnKind, Dataset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random binary dataset. `grid` draws integer coordinates from a small
/// range so that distance ties are common; `nominal` adds two nominal
/// columns with three categories each.
pub fn random_dataset(r: &mut ChaCha8Rng, n: usize, dim: usize, grid: bool, nominal: bool) -> Dataset {
    let mut kinds = vec![ColumnKind::Continuous; dim];
    if nominal {
        kinds.extend([ColumnKind::Nominal, ColumnKind::Nominal]);
    }
    let minority = r.random_range(2..=n / 2);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = u8::from(i < minority);
        let shift = if label == 1 { 1.0 } else { 0.0 };
        let mut row: Vec<f64> = (0..dim)
            .map(|_| {
                if grid {
                    r.random_range(0..6) as f64 + shift
                } else {
                    r.random::<f64>() * 4.0 + shift
                }
            })
            .collect();
        if nominal {
            row.push(r.random_range(0..3) as f64);
            row.push(r.random_range(0..3) as f64);
        }
        rows.push(row);
        labels.push(label);
    }
    Dataset::new(rows, labels, kinds).unwrap()
}

fn population_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// Mismatch penalty for nominal columns: the median over continuous columns
/// of their population standard deviation.
pub fn nominal_penalty(d: &Dataset, rows: &[usize]) -> f64 {
    let mut stds: Vec<f64> = (0..d.n_cols())
        .filter(|&c| d.kinds()[c] == ColumnKind::Continuous)
        .map(|c| population_std(&rows.iter().map(|&r| d.row(r)[c]).collect::<Vec<_>>()))
        .collect();
    stds.sort_by(f64::total_cmp);
    let m = stds.len();
    if m == 0 {
        0.0
    } else if m % 2 == 1 {
        stds[m / 2]
    } else {
        0.5 * (stds[m / 2 - 1] + stds[m / 2])
    }
}

/// Squared distance, summed column by column.
pub fn dist2(d: &Dataset, penalty: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for c in 0..a.len() {
        s += match d.kinds()[c] {
            ColumnKind::Continuous => (a[c] - b[c]) * (a[c] - b[c]),
            ColumnKind::Nominal if a[c] != b[c] => penalty * penalty,
            ColumnKind::Nominal => 0.0,
        };
    }
    s
}

/// Full `rows.len()²` squared-distance matrix.
pub fn distance_matrix(d: &Dataset, rows: &[usize]) -> Vec<Vec<f64>> {
    let penalty = nominal_penalty(d, rows);
    rows.iter().map(|&a| rows.iter().map(|&b| dist2(d, penalty, d.row(a), d.row(b))).collect()).collect()
}

/// Exhaustive k-NN of `rows[i]` among the other rows: sort everything by
/// (squared distance, row index) and take the first `k`.
pub fn knn_oracle(rows: &[usize], dm: &[Vec<f64>], i: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = (0..rows.len()).filter(|&j| j != i).map(|j| (dm[i][j], rows[j])).collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    all.into_iter().take(k).map(|(_, r)| r).collect()
}

/// Rows that ENN (k = 3, all rows tested) deletes.
pub fn enn_oracle(d: &Dataset, rows: &[usize], dm: &[Vec<f64>], only_label: Option<u8>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (i, &r) in rows.iter().enumerate() {
        if only_label.is_some_and(|l| d.label(r) != l) {
            continue;
        }
        let ones = knn_oracle(rows, dm, i, 3).iter().filter(|&&n| d.label(n) == 1).count();
        let vote = u8::from(ones >= 2);
        if vote != d.label(r) {
            out.insert(r);
        }
    }
    out
}

/// Tomek links by definition: a cross-class pair `(a, b)` such that no
/// third row is strictly closer to `a` or to `b` than they are to each
/// other. Returned as `(minority row, majority row)`.
pub fn tomek_oracle(d: &Dataset, rows: &[usize], dm: &[Vec<f64>], minority: u8) -> BTreeSet<(usize, usize)> {
    let n = rows.len();
    let mut out = BTreeSet::new();
    for a in 0..n {
        if d.label(rows[a]) != minority {
            continue;
        }
        for b in 0..n {
            if d.label(rows[b]) == minority {
                continue;
            }
            let dab = dm[a][b];
            let blocked = (0..n).any(|c| c != a && c != b && (dm[a][c] < dab || dm[b][c] < dab));
            if !blocked {
                out.insert((rows[a], rows[b]));
            }
        }
    }
    out
}

/// `(accuracy, precision, recall, f1)` straight from predictions, with 0
/// for undefined ratios.
pub fn direct_metrics(labels: &[u8], preds: &[u8]) -> (f64, f64, f64, f64) {
    let n = labels.len() as f64;
    let correct = labels.iter().zip(preds).filter(|(a, b)| a == b).count() as f64;
    let predicted_pos = preds.iter().filter(|&&p| p == 1).count() as f64;
    let actual_pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let hits = labels.iter().zip(preds).filter(|(a, b)| **a == 1 && **b == 1).count() as f64;
    let precision = if predicted_pos > 0.0 { hits / predicted_pos } else { 0.0 };
    let recall = if actual_pos > 0.0 { hits / actual_pos } else { 0.0 };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    (correct / n, precision, recall, f1)
}

/// Fraction of (positive, negative) pairs ordered correctly, ties half.
pub fn pair_auc(labels: &[u8], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &yi) in labels.iter().enumerate() {
        if yi != 1 {
            continue;
        }
        for (j, &yj) in labels.iter().enumerate() {
            if yj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Mean logistic loss with an L2 term on the weights (not the bias);
/// `params` holds the weights then the bias.
pub fn logistic_loss(params: &[f64], xs: &[&[f64]], ys: &[u8], l2: f64) -> f64 {
    let d = params.len() - 1;
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z: f64 = params[..d].iter().zip(*x).map(|(w, v)| w * v).sum::<f64>() + params[d];
        // log(1 + e^z) - y z, written to avoid overflow
        let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
        loss += softplus - f64::from(y) * z;
    }
    loss / xs.len() as f64 + 0.5 * l2 * params[..d].iter().map(|w| w * w).sum::<f64>()
}

/// Central finite differences of `f` at `p`.
pub fn numeric_gradient(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    (0..p.len())
        .map(|i| {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Angle between two vectors, in degrees.
pub fn angle_degrees(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (norm(a) * norm(b))).clamp(-1.0, 1.0).acos().to_degrees()
}
