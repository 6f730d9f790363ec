use serde::{Deserialize, Serialize};

use super::sigmoid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdaBoostParams {
    pub rounds: usize,
}

impl Default for AdaBoostParams {
    fn default() -> Self {
        AdaBoostParams { rounds: 100 }
    }
}

/// `h(x) = polarity` if `x[feature] >= threshold`, else `-polarity`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Stump {
    feature: usize,
    threshold: f64,
    polarity: f64,
    alpha: f64,
}

impl Stump {
    fn vote(&self, x: &[f64]) -> f64 {
        if x[self.feature] >= self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// Discrete AdaBoost; `p = sigmoid(2 F(x))` with `F = sum alpha_t h_t`.
#[derive(Debug, Clone)]
pub(crate) struct Stumps {
    stumps: Vec<Stump>,
}

impl Stumps {
    pub fn proba(&self, x: &[f64]) -> f64 {
        sigmoid(2.0 * self.stumps.iter().map(|s| s.alpha * s.vote(x)).sum::<f64>())
    }
}

const MIN_ERROR: f64 = 1e-10;

/// Lowest weighted-error stump over every feature and every midpoint
/// between consecutive distinct values (plus one below the minimum).
fn best_stump(xs: &[&[f64]], y: &[f64], w: &[f64], sorted: &[Vec<usize>]) -> (Stump, f64) {
    let total_pos: f64 = y.iter().zip(w).filter(|(t, _)| **t > 0.0).map(|(_, w)| w).sum();
    let total: f64 = w.iter().sum();
    let mut best = (
        Stump {
            feature: 0,
            threshold: f64::NEG_INFINITY,
            polarity: 1.0,
            alpha: 0.0,
        },
        f64::INFINITY,
    );
    for (feature, order) in sorted.iter().enumerate() {
        // error of "predict +1 when x >= t" with t below everything
        let mut err_plus = total - total_pos;
        let consider = |threshold: f64, err_plus: f64, best: &mut (Stump, f64)| {
            for (polarity, err) in [(1.0, err_plus), (-1.0, total - err_plus)] {
                if err < best.1 {
                    *best = (
                        Stump {
                            feature,
                            threshold,
                            polarity,
                            alpha: 0.0,
                        },
                        err,
                    );
                }
            }
        };
        consider(f64::NEG_INFINITY, err_plus, &mut best);
        let mut i = 0;
        while i < order.len() {
            let v = xs[order[i]][feature];
            while i < order.len() && xs[order[i]][feature] == v {
                let r = order[i];
                // r moves to the "below threshold" side, predicted -1
                err_plus += if y[r] > 0.0 { w[r] } else { -w[r] };
                i += 1;
            }
            if i < order.len() {
                let next = xs[order[i]][feature];
                consider(v + (next - v) / 2.0, err_plus, &mut best);
            }
        }
    }
    best
}

pub(crate) fn fit(xs: &[&[f64]], ys: &[u8], params: &AdaBoostParams) -> Result<Stumps> {
    if params.rounds == 0 {
        return Err(Error::InvalidInput("adaboost needs at least one round".into()));
    }
    let n = xs.len();
    let d = xs[0].len();
    let y: Vec<f64> = ys.iter().map(|&c| if c == 1 { 1.0 } else { -1.0 }).collect();
    let sorted: Vec<Vec<usize>> = (0..d)
        .map(|f| {
            let mut o: Vec<usize> = (0..n).collect();
            o.sort_by(|&a, &b| xs[a][f].total_cmp(&xs[b][f]).then(a.cmp(&b)));
            o
        })
        .collect();
    let mut w = vec![1.0 / n as f64; n];
    let mut stumps = Vec::new();
    for _ in 0..params.rounds {
        let (mut stump, err) = best_stump(xs, &y, &w, &sorted);
        let err = err.clamp(MIN_ERROR, 1.0 - MIN_ERROR);
        if err >= 0.5 {
            break;
        }
        stump.alpha = 0.5 * ((1.0 - err) / err).ln();
        let mut z = 0.0;
        for i in 0..n {
            w[i] *= (-stump.alpha * y[i] * stump.vote(xs[i])).exp();
            z += w[i];
        }
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Diverged("adaboost weights".into()));
        }
        for wi in w.iter_mut() {
            *wi /= z;
        }
        stumps.push(stump);
        if err <= MIN_ERROR {
            break;
        }
    }
    Ok(Stumps { stumps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stump_search_matches_brute_force() {
        let pts = [[3.0, 1.0], [1.0, 5.0], [2.0, 2.0], [2.0, 4.0], [5.0, 0.0], [4.0, 3.0]];
        let xs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let y = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let w = [0.1, 0.3, 0.2, 0.1, 0.2, 0.1];
        let sorted: Vec<Vec<usize>> = (0..2)
            .map(|f| {
                let mut o: Vec<usize> = (0..6).collect();
                o.sort_by(|&a, &b| xs[a][f].total_cmp(&xs[b][f]));
                o
            })
            .collect();
        let (_, err) = best_stump(&xs, &y, &w, &sorted);
        let mut oracle = f64::INFINITY;
        for f in 0..2 {
            for t in [-1.0, 0.5, 1.5, 2.5, 3.5, 4.5, 5.5] {
                for pol in [1.0, -1.0] {
                    let e: f64 = (0..6)
                        .filter(|&i| (if xs[i][f] >= t { pol } else { -pol }) != y[i])
                        .map(|i| w[i])
                        .sum();
                    oracle = oracle.min(e);
                }
            }
        }
        assert!((err - oracle).abs() < 1e-12);
    }

    #[test]
    fn perfect_stump_stops_early() {
        let pts: Vec<[f64; 1]> = (0..10).map(|i| [i as f64]).collect();
        let xs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let ys: Vec<u8> = (0..10).map(|i| u8::from(i >= 4)).collect();
        let m = fit(&xs, &ys, &AdaBoostParams::default()).unwrap();
        assert_eq!(m.stumps.len(), 1);
        assert!(m.proba(&[9.0]) > 0.99 && m.proba(&[0.0]) < 0.01);
    }
}
