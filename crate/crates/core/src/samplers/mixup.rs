use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::{check_target_ratio, Algorithm, ClassRoles, Generator, Resampled};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::tabular::{ColumnKind, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixupConfig {
    /// Shape of the symmetric Beta(alpha, alpha) mixing distribution.
    pub alpha: f64,
    /// Rows generated per class; `None` means the current class size.
    pub pairs_per_class: Option<usize>,
    /// Only same-class mixing is implemented.
    pub same_class_only: bool,
    /// Final minority / majority ratio for the balancing entry points
    /// ([`mixup_oversample`] and the Mixup stage of STEM).
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for MixupConfig {
    fn default() -> Self {
        MixupConfig {
            alpha: 0.2,
            pairs_per_class: None,
            same_class_only: true,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

impl MixupConfig {
    fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidInput(format!("mixup alpha must be > 0, got {}", self.alpha)));
        }
        if !self.same_class_only {
            return Err(Error::InvalidInput("only same-class mixup is implemented".into()));
        }
        check_target_ratio(self.target_ratio)
    }
}

/// `lambda * x_i + (1 - lambda) * x_j`, elementwise.
///
/// Each coordinate is clamped to the interval spanned by its two inputs, so
/// float rounding can never leave the segment.
pub fn mixup_pair(x_i: &[f64], x_j: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if x_i.len() != x_j.len() {
        return Err(Error::DimensionMismatch {
            expected: x_i.len(),
            found: x_j.len(),
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda must be in [0, 1], got {lambda}")));
    }
    Ok(x_i.iter().zip(x_j).map(|(&a, &b)| mix(a, b, lambda)).collect())
}

fn mix(a: f64, b: f64, lambda: f64) -> f64 {
    (lambda * a + (1.0 - lambda) * b).clamp(a.min(b), a.max(b))
}

/// Mixup on continuous columns; nominal columns take the value of the parent
/// with the larger weight (`x_i` when `lambda >= 0.5`).
pub(crate) fn combine(kinds: &[ColumnKind], x_i: &[f64], x_j: &[f64], lambda: f64) -> Vec<f64> {
    x_i.iter()
        .zip(x_j)
        .zip(kinds)
        .map(|((&a, &b), kind)| match kind {
            ColumnKind::Continuous => mix(a, b, lambda),
            ColumnKind::Nominal if lambda >= 0.5 => a,
            ColumnKind::Nominal => b,
        })
        .collect()
}

/// One Beta(alpha, alpha) draw as `X / (X + Y)` with `X, Y ~ Gamma(alpha, 1)`.
pub fn sample_beta(gamma: &Gamma<f64>, rng: &mut StreamRng) -> f64 {
    loop {
        let x = gamma.sample(rng);
        let y = gamma.sample(rng);
        let s = x + y;
        if s > 0.0 && s.is_finite() {
            return (x / s).clamp(0.0, 1.0);
        }
    }
}

/// Appends `counts[c]` same-class Mixup rows for each class `c` of `rows`.
///
/// Each row mixes two distinct members of one class with `lambda ~
/// Beta(alpha, alpha)` and keeps that class label.
pub fn mixup_augment_counts(data: &Dataset, rows: &[usize], counts: [usize; 2], cfg: &MixupConfig) -> Result<Resampled> {
    cfg.check()?;
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let gamma = Gamma::new(cfg.alpha, 1.0).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut out = Resampled::from_rows(data, rows);
    let mut rng = rng::stream(cfg.seed, "mixup");
    let mut generator = Generator::new(data, Algorithm::Mixup, 0);
    for class in 0..2u8 {
        let wanted = counts[class as usize];
        if wanted == 0 {
            continue;
        }
        let members = data.rows_of_class(rows, class);
        if members.len() < 2 {
            return Err(Error::ClassTooSmall {
                class,
                count: members.len(),
                needed: 2,
            });
        }
        generator.label = class;
        for _ in 0..wanted {
            let a = rng.random_range(0..members.len());
            let mut b = rng.random_range(0..members.len() - 1);
            if b >= a {
                b += 1;
            }
            let lambda = sample_beta(&gamma, &mut rng);
            let (i, j) = (members[a], members[b]);
            let values = combine(data.kinds(), data.row(i), data.row(j), lambda);
            generator.push(data, i, j, lambda, values, &mut out);
        }
    }
    Ok(out)
}

/// Same-class Mixup adding the same number of rows to each class:
/// `pairs_per_class`, or each class's own size when unset (doubling it).
pub fn mixup_augment(data: &Dataset, rows: &[usize], cfg: &MixupConfig) -> Result<Resampled> {
    let present = data.class_counts(rows);
    let counts = match cfg.pairs_per_class {
        Some(p) => present.map(|c| if c > 0 { p } else { 0 }),
        None => present,
    };
    mixup_augment_counts(data, rows, counts, cfg)
}

/// Mixup used as a plain oversampler: minority-only same-class rows until
/// minority / majority reaches `target_ratio`.
pub fn mixup_oversample(data: &Dataset, train_rows: &[usize], cfg: &MixupConfig) -> Result<Resampled> {
    cfg.check()?;
    let roles = ClassRoles::of(data, train_rows)?;
    let mut counts = [0usize; 2];
    counts[roles.minority as usize] = roles.needed(cfg.target_ratio);
    mixup_augment_counts(data, train_rows, counts, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn endpoints_and_midpoint() {
        let a = [0.3, -7.25, 1e10];
        let b = [4.0, 2.0, -3.0];
        assert_eq!(mixup_pair(&a, &b, 1.0).unwrap(), a.to_vec());
        assert_eq!(mixup_pair(&a, &b, 0.0).unwrap(), b.to_vec());
        assert_eq!(mixup_pair(&[0.0, 2.0], &[2.0, 0.0], 0.5).unwrap(), vec![1.0, 1.0]);
        assert!(mixup_pair(&[0.0], &[0.0, 1.0], 0.5).is_err());
        assert!(mixup_pair(&[0.0], &[1.0], 1.5).is_err());
    }

    #[test]
    fn coordinates_stay_between_parents() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a: Vec<f64> = (0..4).map(|_| rng.random_range(-100.0..100.0)).collect();
            let b: Vec<f64> = (0..4).map(|_| rng.random_range(-100.0..100.0)).collect();
            let lambda: f64 = rng.random();
            let p = mixup_pair(&a, &b, lambda).unwrap();
            for c in 0..4 {
                assert!(p[c] >= a[c].min(b[c]) && p[c] <= a[c].max(b[c]));
            }
        }
    }

    #[test]
    fn zero_pairs_is_identity() {
        let d = Dataset::continuous(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]], vec![0, 0, 1, 1]).unwrap();
        let out = mixup_augment(&d, &d.all_rows(), &MixupConfig { pairs_per_class: Some(0), ..Default::default() }).unwrap();
        assert_eq!(out.data, d);
    }

    #[test]
    fn two_member_class_stays_on_its_segment() {
        let d = Dataset::continuous(
            vec![vec![0.0, 0.0], vec![2.0, 4.0], vec![9.0, 9.0], vec![9.0, 8.0], vec![7.0, 9.0]],
            vec![1, 1, 0, 0, 0],
        )
        .unwrap();
        let out = mixup_augment(&d, &d.all_rows(), &MixupConfig { pairs_per_class: Some(50), seed: 3, ..Default::default() }).unwrap();
        assert_eq!(out.class_counts(), [53, 52]);
        for r in 5..out.data.n_rows() {
            let p = out.data.row(r);
            if out.data.label(r) == 1 {
                assert!((p[1] - 2.0 * p[0]).abs() < 1e-12 && (0.0..=2.0).contains(&p[0]));
            }
        }
    }

    #[test]
    fn class_with_one_member_is_rejected() {
        let d = Dataset::continuous(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 0, 1]).unwrap();
        assert!(matches!(
            mixup_augment(&d, &d.all_rows(), &MixupConfig::default()),
            Err(Error::ClassTooSmall { class: 1, .. })
        ));
    }

    #[test]
    fn beta_one_one_is_uniform() {
        let gamma = Gamma::new(1.0, 1.0).unwrap();
        let mut rng = rng::stream(5, "beta");
        let n = 100_000;
        let mut draws: Vec<f64> = (0..n).map(|_| sample_beta(&gamma, &mut rng)).collect();
        draws.sort_by(f64::total_cmp);
        let ks = draws
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let lo = x - i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64 - x;
                lo.max(hi)
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS statistic {ks}");
    }
}
