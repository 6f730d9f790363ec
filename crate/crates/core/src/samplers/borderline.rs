use serde::{Deserialize, Serialize};

use super::{check_target_ratio, clamp_k, minority_neighbors, Algorithm, ClassRoles, Generator, Resampled};
use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::rng;
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BorderlineConfig {
    /// Neighbourhood size of the danger test.
    pub m: usize,
    /// Interpolation neighbours.
    pub k: usize,
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for BorderlineConfig {
    fn default() -> Self {
        BorderlineConfig {
            m: 10,
            k: 5,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

/// Minority rows whose `m` nearest training neighbours contain `c` majority
/// rows with `m/2 <= c < m`. Returns the danger rows and every minority
/// row's majority count (aligned with the minority rows of `train_rows`).
pub fn danger_set(data: &Dataset, train_rows: &[usize], m: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let roles = ClassRoles::of(data, train_rows)?;
    let index = build_index(data, train_rows, DistanceKind::for_dataset(data, train_rows), None)?;
    let mut danger = Vec::new();
    let mut counts = Vec::with_capacity(roles.minority_rows.len());
    for &r in &roles.minority_rows {
        let c = index
            .knn_of_row(r, m)?
            .iter()
            .filter(|n| data.label(n.row) != roles.minority)
            .count();
        if 2 * c >= m && c < m {
            danger.push(r);
        }
        counts.push(c);
    }
    Ok((danger, counts))
}

/// Borderline-SMOTE (borderline-1): only danger-set rows act as sources,
/// interpolating towards their k nearest minority neighbours. Falls back to
/// all minority rows when the danger set is empty.
pub fn borderline_smote(data: &Dataset, train_rows: &[usize], cfg: &BorderlineConfig) -> Result<Resampled> {
    check_target_ratio(cfg.target_ratio)?;
    if cfg.m < 2 {
        return Err(Error::InvalidInput(format!("m must be at least 2, got {}", cfg.m)));
    }
    let roles = ClassRoles::of(data, train_rows)?;
    let mut out = Resampled::from_rows(data, train_rows);
    let m = clamp_k(cfg.m, train_rows.len() - 1, "m", &mut out);
    let (danger, _) = danger_set(data, train_rows, m)?;
    let distance = DistanceKind::for_dataset(data, train_rows);
    if distance != DistanceKind::Euclidean {
        return Err(Error::DistanceMismatch);
    }
    let neighbors = minority_neighbors(data, &roles, train_rows, distance, cfg.k, &mut out)?;

    let sources: Vec<usize> = if danger.is_empty() {
        out.warn("danger set is empty; falling back to plain SMOTE sources".into());
        (0..roles.minority_rows.len()).collect()
    } else {
        danger
            .iter()
            .map(|r| roles.minority_rows.binary_search(r).expect("danger rows are minority rows"))
            .collect()
    };
    let needed = roles.needed(cfg.target_ratio);
    let mut rng = rng::stream(cfg.seed, "borderline_smote");
    let mut generator = Generator::new(data, Algorithm::BorderlineSmote, roles.minority);
    for t in 0..needed {
        let i = sources[t % sources.len()];
        generator.step(data, roles.minority_rows[i], &neighbors[i], false, &mut rng, &mut out);
    }
    Ok(out)
}
