use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{check_target_ratio, clamp_k, minority_neighbors, Algorithm, ClassRoles, Generator, Resampled};
use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::rng;
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmSmoteConfig {
    /// Neighbourhood size of the majority-density test.
    pub m: usize,
    /// Generation neighbours.
    pub k: usize,
    /// Soft-margin constant C.
    pub svm_regularization: f64,
    pub svm_epochs: usize,
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for SvmSmoteConfig {
    fn default() -> Self {
        SvmSmoteConfig {
            m: 10,
            k: 5,
            svm_regularization: 1.0,
            svm_epochs: 200,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

/// Linear decision function `w . x + b`; positive means minority.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub minority: u8,
}

impl LinearSvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    /// `y * f(x)` with `y = +1` for the minority class.
    pub fn margin(&self, x: &[f64], label: u8) -> f64 {
        let y = if label == self.minority { 1.0 } else { -1.0 };
        y * self.decision(x)
    }
}

/// Soft-margin linear SVM, `1/2 |w|^2 + C * sum(hinge)`, trained with the
/// Pegasos stochastic subgradient method (`lambda = 1 / (C n)`, step
/// `1 / (lambda t)`, seeded per-epoch shuffles). The bias is learned as the
/// weight of a constant feature. The returned weights average the iterates of
/// the second half of training.
pub fn fit_linear_svm(data: &Dataset, rows: &[usize], cfg: &SvmSmoteConfig) -> Result<LinearSvm> {
    if cfg.svm_regularization <= 0.0 || cfg.svm_epochs == 0 {
        return Err(Error::InvalidInput("svm_regularization must be > 0 and svm_epochs >= 1".into()));
    }
    let roles = ClassRoles::of(data, rows)?;
    let d = data.n_cols();
    let n = rows.len();
    let lambda = 1.0 / (cfg.svm_regularization * n as f64);
    let mut rng = rng::stream(cfg.seed, "linear_svm");
    let mut w = vec![0.0; d + 1];
    let mut avg = vec![0.0; d + 1];
    let mut averaged = 0usize;
    let mut order: Vec<usize> = rows.to_vec();
    let mut t = 0usize;
    let half = cfg.svm_epochs / 2;
    for epoch in 0..cfg.svm_epochs {
        order.shuffle(&mut rng);
        for &r in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let x = data.row(r);
            let y = if data.label(r) == roles.minority { 1.0 } else { -1.0 };
            let score = w[..d].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + w[d];
            let shrink = 1.0 - eta * lambda;
            for wi in w.iter_mut() {
                *wi *= shrink;
            }
            if y * score < 1.0 {
                for (wi, xi) in w[..d].iter_mut().zip(x) {
                    *wi += eta * y * xi;
                }
                w[d] += eta * y;
            }
            if epoch >= half {
                for (a, wi) in avg.iter_mut().zip(&w) {
                    *a += wi;
                }
                averaged += 1;
            }
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::SvmDiverged);
        }
    }
    for a in avg.iter_mut() {
        *a /= averaged as f64;
    }
    if avg.iter().any(|v| !v.is_finite()) {
        return Err(Error::SvmDiverged);
    }
    let bias = avg.pop().expect("bias slot");
    Ok(LinearSvm {
        weights: avg,
        bias,
        minority: roles.minority,
    })
}

/// SVM-SMOTE with a linear kernel.
///
/// Minority rows with margin `<= 1` are the sources. A source whose `m`
/// nearest training neighbours are less than half majority extrapolates
/// away from a random minority neighbour (`x + d (x - n)`); otherwise it
/// interpolates towards one. Sources are used round-robin.
pub fn svm_smote(data: &Dataset, train_rows: &[usize], cfg: &SvmSmoteConfig) -> Result<Resampled> {
    check_target_ratio(cfg.target_ratio)?;
    if cfg.m == 0 || cfg.k == 0 {
        return Err(Error::InvalidInput("m and k must be at least 1".into()));
    }
    let roles = ClassRoles::of(data, train_rows)?;
    if roles.majority_count() < 2 {
        return Err(Error::ClassTooSmall {
            class: 1 - roles.minority,
            count: roles.majority_count(),
            needed: 2,
        });
    }
    let mut out = Resampled::from_rows(data, train_rows);
    let needed = roles.needed(cfg.target_ratio);
    if needed == 0 {
        return Ok(out);
    }
    let svm = fit_linear_svm(data, train_rows, cfg)?;
    let neighbors = minority_neighbors(data, &roles, train_rows, DistanceKind::Euclidean, cfg.k, &mut out)?;
    let mut sources: Vec<usize> = (0..roles.minority_rows.len())
        .filter(|&i| svm.margin(data.row(roles.minority_rows[i]), roles.minority) <= 1.0)
        .collect();
    if sources.is_empty() {
        out.warn("no minority support vectors; using every minority row as a source".into());
        sources = (0..roles.minority_rows.len()).collect();
    }

    let m = clamp_k(cfg.m, train_rows.len() - 1, "m", &mut out);
    let index = build_index(data, train_rows, DistanceKind::Euclidean, None)?;
    let extrapolate: Vec<bool> = sources
        .iter()
        .map(|&i| {
            let c = index
                .knn_of_row(roles.minority_rows[i], m)?
                .iter()
                .filter(|n| data.label(n.row) != roles.minority)
                .count();
            Ok(2 * c < m)
        })
        .collect::<Result<_>>()?;

    let mut rng = rng::stream(cfg.seed, "svm_smote");
    let mut generator = Generator::new(data, Algorithm::SvmSmote, roles.minority);
    for t in 0..needed {
        let j = t % sources.len();
        let i = sources[j];
        generator.step(data, roles.minority_rows[i], &neighbors[i], extrapolate[j], &mut rng, &mut out);
    }
    Ok(out)
}
