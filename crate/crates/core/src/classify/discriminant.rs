use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use super::sigmoid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LdaParams {
    /// Ridge added to the pooled covariance, relative to `trace / d`.
    pub ridge: f64,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams { ridge: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QdaParams {
    /// Weight of the (ridged) pooled covariance in each class covariance.
    pub shrinkage: f64,
    pub ridge: f64,
}

impl Default for QdaParams {
    fn default() -> Self {
        QdaParams {
            shrinkage: 0.1,
            ridge: 1e-6,
        }
    }
}

/// `p = sigmoid(w . x + b)`.
#[derive(Debug, Clone)]
pub(crate) struct Linear {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Linear {
    pub fn proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }
}

struct ClassStats {
    means: [DVector<f64>; 2],
    scatter: [DMatrix<f64>; 2],
    counts: [usize; 2],
}

fn class_stats(xs: &[&[f64]], ys: &[u8]) -> ClassStats {
    let d = xs[0].len();
    let mut means = [DVector::zeros(d), DVector::zeros(d)];
    let mut counts = [0usize; 2];
    for (x, &y) in xs.iter().zip(ys) {
        means[y as usize] += DVector::from_column_slice(x);
        counts[y as usize] += 1;
    }
    for c in 0..2 {
        means[c] /= counts[c] as f64;
    }
    let mut scatter = [DMatrix::zeros(d, d), DMatrix::zeros(d, d)];
    for (x, &y) in xs.iter().zip(ys) {
        let diff = DVector::from_column_slice(x) - &means[y as usize];
        scatter[y as usize].ger(1.0, &diff, &diff, 1.0);
    }
    ClassStats { means, scatter, counts }
}

/// Pooled maximum-likelihood covariance plus `ridge * trace / d` on the
/// diagonal (plain `ridge` when the trace is zero).
fn pooled_ridged(stats: &ClassStats, ridge: f64) -> DMatrix<f64> {
    let n = (stats.counts[0] + stats.counts[1]) as f64;
    let mut cov = (&stats.scatter[0] + &stats.scatter[1]) / n;
    let d = cov.nrows() as f64;
    let trace = cov.trace();
    let scale = if trace > 0.0 { trace / d } else { 1.0 };
    for i in 0..cov.nrows() {
        cov[(i, i)] += ridge * scale;
    }
    cov
}

fn factor(cov: DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllConditioned(format!("{what} has non-finite entries")));
    }
    cov.cholesky()
        .ok_or_else(|| Error::IllConditioned(format!("{what} is not positive definite")))
}

fn check_params(ridge: f64) -> Result<()> {
    if ridge.is_finite() && ridge >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("ridge must be >= 0, got {ridge}")))
    }
}

/// Fisher discriminant with empirical priors:
/// `w = S^-1 (mu1 - mu0)`, `b = -w . (mu0 + mu1) / 2 + ln(pi1 / pi0)`.
pub(crate) fn fit_lda(xs: &[&[f64]], ys: &[u8], params: &LdaParams) -> Result<Linear> {
    check_params(params.ridge)?;
    let stats = class_stats(xs, ys);
    let chol = factor(pooled_ridged(&stats, params.ridge), "pooled covariance")?;
    let diff = &stats.means[1] - &stats.means[0];
    let w = chol.solve(&diff);
    let mid = (&stats.means[0] + &stats.means[1]) * 0.5;
    let prior = (stats.counts[1] as f64 / stats.counts[0] as f64).ln();
    Ok(Linear {
        bias: -w.dot(&mid) + prior,
        weights: w.iter().copied().collect(),
    })
}

#[derive(Debug, Clone)]
pub(crate) struct Quadratic {
    means: [DVector<f64>; 2],
    factors: [Cholesky<f64, Dyn>; 2],
    /// `ln pi_c - ln|S_c| / 2`.
    offsets: [f64; 2],
}

impl Quadratic {
    fn score(&self, c: usize, x: &DVector<f64>) -> f64 {
        let diff = x - &self.means[c];
        let z = self.factors[c].l().solve_lower_triangular(&diff).expect("cholesky factor is non-singular");
        self.offsets[c] - 0.5 * z.norm_squared()
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        sigmoid(self.score(1, &v) - self.score(0, &v))
    }
}

/// Gaussian class models with `S_c = (1 - s) Cov_c + s Pooled`.
pub(crate) fn fit_qda(xs: &[&[f64]], ys: &[u8], params: &QdaParams) -> Result<Quadratic> {
    check_params(params.ridge)?;
    if !(0.0..=1.0).contains(&params.shrinkage) {
        return Err(Error::InvalidInput(format!("shrinkage must be in [0, 1], got {}", params.shrinkage)));
    }
    let stats = class_stats(xs, ys);
    let pooled = pooled_ridged(&stats, params.ridge);
    let n = xs.len() as f64;
    let fit = |c: usize| -> Result<(Cholesky<f64, Dyn>, f64)> {
        let own = &stats.scatter[c] / stats.counts[c] as f64;
        let cov = own * (1.0 - params.shrinkage) + &pooled * params.shrinkage;
        let chol = factor(cov, "class covariance")?;
        let log_det: f64 = chol.l().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
        if !log_det.is_finite() {
            return Err(Error::IllConditioned("class covariance determinant".into()));
        }
        Ok((chol, (stats.counts[c] as f64 / n).ln() - 0.5 * log_det))
    };
    let (f0, o0) = fit(0)?;
    let (f1, o1) = fit(1)?;
    Ok(Quadratic {
        means: stats.means.clone(),
        factors: [f0, f1],
        offsets: [o0, o1],
    })
}
