use serde::{Deserialize, Serialize};

use super::{check_target_ratio, minority_neighbors, Algorithm, ClassRoles, Generator, Resampled};
use crate::error::{Error, Result};
use crate::neighbors::{median_continuous_std, DistanceKind};
use crate::rng;
use crate::tabular::{ColumnKind, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoteConfig {
    pub k: usize,
    /// Desired minority / majority count ratio after oversampling.
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        SmoteConfig {
            k: 5,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

/// Round-robin over the minority rows; each step interpolates towards a
/// random one of the source's k nearest minority neighbours.
pub fn smote(data: &Dataset, train_rows: &[usize], cfg: &SmoteConfig) -> Result<Resampled> {
    check_target_ratio(cfg.target_ratio)?;
    let roles = ClassRoles::of(data, train_rows)?;
    let mut out = Resampled::from_rows(data, train_rows);
    let neighbors = minority_neighbors(data, &roles, train_rows, DistanceKind::Euclidean, cfg.k, &mut out)?;
    let needed = roles.needed(cfg.target_ratio);
    let mut rng = rng::stream(cfg.seed, "smote");
    let mut generator = Generator::new(data, Algorithm::Smote, roles.minority);
    for t in 0..needed {
        let i = t % roles.minority_rows.len();
        generator.step(data, roles.minority_rows[i], &neighbors[i], false, &mut rng, &mut out);
    }
    Ok(out)
}

/// SMOTE for mixed continuous/nominal data.
///
/// Neighbours use the heterogeneous distance with the median minority-class
/// standard deviation of the continuous columns as the nominal penalty.
/// Continuous coordinates are interpolated; each nominal coordinate takes the
/// most frequent value among the source's k nearest minority neighbours,
/// ties going to the value held by the nearest of them.
pub fn smote_nc(data: &Dataset, train_rows: &[usize], cfg: &SmoteConfig) -> Result<Resampled> {
    check_target_ratio(cfg.target_ratio)?;
    if data.continuous_columns().is_empty() {
        return Err(Error::AllNominal);
    }
    let roles = ClassRoles::of(data, train_rows)?;
    let mut out = Resampled::from_rows(data, train_rows);
    let distance = DistanceKind::Heterogeneous {
        nominal_penalty: median_continuous_std(data, &roles.minority_rows),
    };
    let neighbors = minority_neighbors(data, &roles, train_rows, distance, cfg.k, &mut out)?;
    let nominal: Vec<usize> = (0..data.n_cols())
        .filter(|&c| data.kinds()[c] == ColumnKind::Nominal)
        .collect();
    let modes: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|list| nominal.iter().map(|&c| modal_value(data, list, c)).collect())
        .collect();

    let needed = roles.needed(cfg.target_ratio);
    let mut rng = rng::stream(cfg.seed, "smote_nc");
    let mut generator = Generator::new(data, Algorithm::SmoteNc, roles.minority);
    for t in 0..needed {
        let i = t % roles.minority_rows.len();
        generator.step(data, roles.minority_rows[i], &neighbors[i], false, &mut rng, &mut out);
        let last = out.data.n_rows() - 1;
        out.data.set_values(last, &nominal, &modes[i]);
    }
    Ok(out)
}

/// Most frequent value of column `col` over `rows` (ordered nearest first);
/// ties resolve to the value appearing first.
fn modal_value(data: &Dataset, rows: &[usize], col: usize) -> f64 {
    let values: Vec<f64> = rows.iter().map(|&r| data.row(r)[col]).collect();
    let count = |v: f64| values.iter().filter(|&&w| w == v).count();
    let best = values.iter().map(|&v| count(v)).max().unwrap_or(0);
    values.iter().copied().find(|&v| count(v) == best).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tabular::RowOrigin;
    use rand::{Rng, SeedableRng};

    fn four_plus_two() -> Dataset {
        Dataset::continuous(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 1.0],
                vec![5.0, 0.0],
                vec![5.0, 1.0],
                vec![6.0, 0.0],
                vec![6.0, 1.0],
            ],
            vec![1, 1, 0, 0, 0, 0],
        )
        .unwrap()
    }

    #[test]
    fn forced_collinear_pair() {
        let d = four_plus_two();
        let out = smote(&d, &d.all_rows(), &SmoteConfig { k: 1, target_ratio: 1.0, seed: 9 }).unwrap();
        assert_eq!(out.class_counts(), [4, 4]);
        for r in 6..8 {
            let p = out.data.row(r);
            assert_eq!(p[0], p[1]);
            assert!((0.0..=1.0).contains(&p[0]));
        }
    }

    #[test]
    fn zero_delta_reproduces_source() {
        let kinds = [ColumnKind::Continuous; 2];
        assert_eq!(super::super::interpolate(&kinds, &[0.3, -2.0], &[9.0, 9.0], 0.0), vec![0.3, -2.0]);
    }

    #[test]
    fn k_is_clamped_with_warning() {
        let d = four_plus_two();
        let out = smote(&d, &d.all_rows(), &SmoteConfig { k: 5, ..Default::default() }).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.class_counts(), [4, 4]);
    }

    #[test]
    fn minority_of_one_is_rejected() {
        let d = Dataset::continuous(vec![vec![0.0], vec![1.0], vec![2.0]], vec![1, 0, 0]).unwrap();
        assert!(matches!(smote(&d, &d.all_rows(), &SmoteConfig::default()), Err(Error::MinorityTooSmall(1))));
        assert!(matches!(smote(&d, &[], &SmoteConfig::default()), Err(Error::EmptyRows)));
    }

    #[test]
    fn thirty_vs_three_hundred_is_collinear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..330 {
            let pos = i < 30;
            let shift = if pos { 1.5 } else { 0.0 };
            rows.push(vec![rng.random::<f64>() + shift, rng.random::<f64>(), rng.random::<f64>()]);
            labels.push(u8::from(pos));
        }
        let d = Dataset::continuous(rows, labels).unwrap();
        let out = smote(&d, &d.all_rows(), &SmoteConfig { seed: 4, ..Default::default() }).unwrap();
        assert_eq!(out.synthetic_count(), 270);
        for (rec, r) in out.provenance.iter().zip(330..) {
            let (RowOrigin::Original(s), RowOrigin::Original(n)) = (rec.source, rec.neighbor) else {
                panic!("smote parents must be original rows");
            };
            assert_eq!(d.label(s), 1);
            assert_eq!(d.label(n), 1);
            assert!((0.0..=1.0).contains(&rec.coefficient));
            let (s, n, p) = (d.row(s), d.row(n), out.data.row(r));
            for c in 0..3 {
                assert!((s[c] + rec.coefficient * (n[c] - s[c]) - p[c]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn smote_rejects_nominal_data() {
        let d = Dataset::new(
            vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 1.0]],
            vec![1, 1, 0, 0],
            vec![ColumnKind::Continuous, ColumnKind::Nominal],
        )
        .unwrap();
        assert!(matches!(smote(&d, &d.all_rows(), &SmoteConfig::default()), Err(Error::DistanceMismatch)));
    }

    #[test]
    fn nominal_mode_of_three_neighbors() {
        // source at 0; neighbours at 1, 2, 3 carry categories A, A, B
        let d = Dataset::new(
            vec![
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![2.0, 0.0],
                vec![3.0, 1.0],
                vec![50.0, 1.0],
                vec![51.0, 1.0],
                vec![52.0, 1.0],
                vec![53.0, 1.0],
                vec![54.0, 1.0],
                vec![55.0, 1.0],
            ],
            vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
            vec![ColumnKind::Continuous, ColumnKind::Nominal],
        )
        .unwrap();
        let out = smote_nc(&d, &d.all_rows(), &SmoteConfig { k: 3, target_ratio: 1.0, seed: 2 }).unwrap();
        let first = out.provenance.iter().position(|r| r.source == RowOrigin::Original(0)).unwrap();
        assert_eq!(out.data.row(10 + first)[1], 0.0);
    }

    #[test]
    fn all_nominal_is_rejected() {
        let d = Dataset::new(
            vec![vec![0.0], vec![1.0], vec![1.0], vec![0.0]],
            vec![1, 1, 0, 0],
            vec![ColumnKind::Nominal],
        )
        .unwrap();
        assert!(matches!(smote_nc(&d, &d.all_rows(), &SmoteConfig::default()), Err(Error::AllNominal)));
    }

    #[test]
    fn modal_value_tie_goes_to_nearest() {
        let d = Dataset::new(
            vec![vec![2.0], vec![3.0], vec![3.0], vec![2.0]],
            vec![0, 0, 1, 1],
            vec![ColumnKind::Nominal],
        )
        .unwrap();
        assert_eq!(modal_value(&d, &[0, 1, 2, 3], 0), 2.0);
        assert_eq!(modal_value(&d, &[1, 0, 2], 0), 3.0);
    }
}
