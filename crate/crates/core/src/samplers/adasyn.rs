use serde::{Deserialize, Serialize};

use super::{clamp_k, minority_neighbors, Algorithm, ClassRoles, Generator, Resampled};
use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::rng;
use crate::tabular::{apportion, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdasynConfig {
    pub k: usize,
    /// Balance level: `G = (majority - minority) * beta` rows are generated.
    pub beta: f64,
    pub seed: u64,
}

impl Default for AdasynConfig {
    fn default() -> Self {
        AdasynConfig {
            k: 5,
            beta: 1.0,
            seed: 0,
        }
    }
}

/// Per-minority-row allocation computed by ADASYN.
#[derive(Debug, Clone, PartialEq)]
pub struct AdasynPlan {
    /// Minority rows in training order.
    pub rows: Vec<usize>,
    /// Majority count among each row's k nearest training neighbours.
    pub majority_neighbors: Vec<usize>,
    /// Synthetic rows allocated to each minority row.
    pub allocation: Vec<usize>,
}

/// Difficulty-weighted allocation: `r_i = Delta_i / k`, normalised, times
/// `G`, rounded by largest remainder so the total is `round(G)`. Uniform when
/// no minority row has a majority neighbour.
pub fn adasyn_plan(data: &Dataset, train_rows: &[usize], cfg: &AdasynConfig, out: &mut Resampled) -> Result<AdasynPlan> {
    if cfg.k == 0 || !(cfg.beta > 0.0 && cfg.beta <= 1.0) {
        return Err(Error::InvalidInput("adasyn needs k >= 1 and beta in (0, 1]".into()));
    }
    let roles = ClassRoles::of(data, train_rows)?;
    let k = clamp_k(cfg.k, train_rows.len() - 1, "k", out);
    let index = build_index(data, train_rows, DistanceKind::Euclidean, None)?;
    let majority_neighbors: Vec<usize> = roles
        .minority_rows
        .iter()
        .map(|&r| {
            Ok(index
                .knn_of_row(r, k)?
                .iter()
                .filter(|n| data.label(n.row) != roles.minority)
                .count())
        })
        .collect::<Result<_>>()?;

    let g = roles.majority_count().saturating_sub(roles.minority_count()) as f64 * cfg.beta;
    let total = g.round() as usize;
    let ratios: Vec<f64> = majority_neighbors.iter().map(|&c| c as f64 / k as f64).collect();
    let sum: f64 = ratios.iter().sum();
    let quotas: Vec<f64> = if sum > 0.0 {
        ratios.iter().map(|r| r / sum * g).collect()
    } else {
        if total > 0 {
            out.warn("no minority row has majority neighbours; allocating uniformly".into());
        }
        vec![g / ratios.len() as f64; ratios.len()]
    };
    Ok(AdasynPlan {
        rows: roles.minority_rows,
        majority_neighbors,
        allocation: apportion(&quotas, total),
    })
}

/// ADASYN: more synthetic rows for minority rows with more majority
/// neighbours, each generated by the SMOTE step.
pub fn adasyn(data: &Dataset, train_rows: &[usize], cfg: &AdasynConfig) -> Result<Resampled> {
    let roles = ClassRoles::of(data, train_rows)?;
    let mut out = Resampled::from_rows(data, train_rows);
    let plan = adasyn_plan(data, train_rows, cfg, &mut out)?;
    let neighbors = minority_neighbors(data, &roles, train_rows, DistanceKind::Euclidean, cfg.k, &mut out)?;
    let mut rng = rng::stream(cfg.seed, "adasyn");
    let mut generator = Generator::new(data, Algorithm::Adasyn, roles.minority);
    for (i, &count) in plan.allocation.iter().enumerate() {
        for _ in 0..count {
            generator.step(data, plan.rows[i], &neighbors[i], false, &mut rng, &mut out);
        }
    }
    Ok(out)
}
