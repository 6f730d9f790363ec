use serde::{Deserialize, Serialize};

use super::discriminant::Linear;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticParams {
    pub rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            rate: 0.1,
            epochs: 500,
            l2: 1e-4,
        }
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean cross-entropy plus `l2 / 2 * |w|^2` and its gradient.
///
/// `params` holds the weights followed by the bias; the bias is not
/// penalised.
pub fn logistic_loss_and_grad(params: &[f64], xs: &[&[f64]], ys: &[u8], l2: f64) -> (f64, Vec<f64>) {
    let d = params.len() - 1;
    let n = xs.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; d + 1];
    for (x, &y) in xs.iter().zip(ys) {
        let z = params[..d].iter().zip(*x).map(|(w, v)| w * v).sum::<f64>() + params[d];
        // -[y ln s(z) + (1 - y) ln(1 - s(z))]
        loss += if y == 1 { softplus(-z) } else { softplus(z) };
        let r = super::sigmoid(z) - f64::from(y);
        for (g, v) in grad[..d].iter_mut().zip(*x) {
            *g += r * v;
        }
        grad[d] += r;
    }
    loss /= n;
    for g in grad.iter_mut() {
        *g /= n;
    }
    for (g, w) in grad[..d].iter_mut().zip(&params[..d]) {
        *g += l2 * w;
    }
    loss += 0.5 * l2 * params[..d].iter().map(|w| w * w).sum::<f64>();
    (loss, grad)
}

/// Full-batch gradient descent from zero for `epochs` steps.
pub(crate) fn fit(xs: &[&[f64]], ys: &[u8], p: &LogisticParams) -> Result<Linear> {
    if !(p.rate > 0.0 && p.rate.is_finite()) || p.epochs == 0 || !(p.l2 >= 0.0) {
        return Err(Error::InvalidInput("logistic needs rate > 0, epochs >= 1, l2 >= 0".into()));
    }
    let d = xs[0].len();
    let mut params = vec![0.0; d + 1];
    for epoch in 0..p.epochs {
        let (loss, grad) = logistic_loss_and_grad(&params, xs, ys, p.l2);
        if !loss.is_finite() {
            return Err(Error::Diverged(format!("logistic loss at epoch {epoch}")));
        }
        for (w, g) in params.iter_mut().zip(&grad) {
            *w -= p.rate * g;
        }
    }
    if params.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged("logistic weights".into()));
    }
    let bias = params.pop().expect("bias slot");
    Ok(Linear { weights: params, bias })
}
