//! Oversamplers: SMOTE, SMOTE-NC, Borderline-SMOTE, SVM-SMOTE, ADASYN and
//! same-class Mixup.
//!
//! Every sampler takes the full dataset plus the training row indices and
//! returns a [`Resampled`]: a copy of the training rows followed by synthetic
//! rows, and one [`SyntheticRecord`] per synthetic row. A record names the
//! two parent rows and the coefficient used, so every generated point can be
//! recomputed from the log.

mod adasyn;
mod borderline;
mod mixup;
mod smote;
mod svm;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use adasyn::{adasyn, AdasynConfig};
pub use borderline::{borderline_smote, BorderlineConfig};
pub use mixup::{mixup_augment, mixup_augment_counts, mixup_oversample, mixup_pair, sample_beta, MixupConfig};
pub use smote::{smote, smote_nc, SmoteConfig};
pub use svm::{fit_linear_svm, svm_smote, LinearSvm, SvmSmoteConfig};

use crate::cleaners::CleanReport;
use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::rng::StreamRng;
use crate::tabular::{minority_class, ColumnKind, Dataset, RowOrigin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Smote,
    SmoteNc,
    BorderlineSmote,
    SvmSmote,
    Adasyn,
    Mixup,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Smote => "smote",
            Algorithm::SmoteNc => "smote_nc",
            Algorithm::BorderlineSmote => "borderline_smote",
            Algorithm::SvmSmote => "svm_smote",
            Algorithm::Adasyn => "adasyn",
            Algorithm::Mixup => "mixup",
        }
    }
}

/// Recipe of one synthetic row.
///
/// For the SMOTE family the continuous coordinates are
/// `source + coefficient * (neighbor - source)`; a negative coefficient is an
/// SVM-SMOTE extrapolation away from the neighbour. For Mixup they are
/// `coefficient * source + (1 - coefficient) * neighbor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticRecord {
    pub id: u64,
    pub algorithm: Algorithm,
    pub label: u8,
    pub source: RowOrigin,
    pub neighbor: RowOrigin,
    pub coefficient: f64,
}

impl SyntheticRecord {
    /// Recomputes the continuous coordinates; nominal entries are copied from
    /// `source` and must be checked separately.
    pub fn reconstruct(&self, kinds: &[ColumnKind], source: &[f64], neighbor: &[f64]) -> Vec<f64> {
        match self.algorithm {
            Algorithm::Mixup => mixup::combine(kinds, source, neighbor, self.coefficient),
            _ => interpolate(kinds, source, neighbor, self.coefficient),
        }
    }

    /// `row_id,algorithm,source_idx,neighbor_idx,coefficient`
    pub fn log_line(&self) -> String {
        format!(
            "s{},{},{},{},{:?}",
            self.id,
            self.algorithm.name(),
            self.source,
            self.neighbor,
            self.coefficient
        )
    }
}

/// Output of a sampler or cleaning pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub data: Dataset,
    /// Records of the synthetic rows present in `data`.
    pub provenance: Vec<SyntheticRecord>,
    pub cleaning: Vec<CleanReport>,
    pub warnings: Vec<String>,
}

impl Resampled {
    pub(crate) fn from_rows(data: &Dataset, rows: &[usize]) -> Self {
        Resampled {
            data: data.subset(rows),
            provenance: Vec::new(),
            cleaning: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn class_counts(&self) -> [usize; 2] {
        self.data.class_counts(&self.data.all_rows())
    }

    pub fn synthetic_count(&self) -> usize {
        self.data.origins().iter().filter(|o| o.is_synthetic()).count()
    }

    /// Feature vector behind `origin`: original rows are looked up in `root`
    /// (the dataset the pipeline started from), synthetic ones in the output.
    pub fn resolve<'a>(&'a self, root: &'a Dataset, origin: RowOrigin) -> Option<&'a [f64]> {
        match origin {
            RowOrigin::Original(i) => (i < root.n_rows()).then(|| root.row(i)),
            RowOrigin::Synthetic(_) => self
                .data
                .origins()
                .iter()
                .position(|&o| o == origin)
                .map(|p| self.data.row(p)),
        }
    }

    pub(crate) fn warn(&mut self, message: String) {
        log::warn!("{message}");
        self.warnings.push(message);
    }
}

/// `source + coefficient * (neighbor - source)` on continuous columns.
pub(crate) fn interpolate(kinds: &[ColumnKind], source: &[f64], neighbor: &[f64], coefficient: f64) -> Vec<f64> {
    source
        .iter()
        .zip(neighbor)
        .zip(kinds)
        .map(|((&s, &n), kind)| match kind {
            ColumnKind::Continuous => s + coefficient * (n - s),
            ColumnKind::Nominal => s,
        })
        .collect()
}

pub(crate) fn check_target_ratio(target_ratio: f64) -> Result<()> {
    if target_ratio > 0.0 && target_ratio <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("target_ratio must be in (0, 1], got {target_ratio}")))
    }
}

/// Class roles within the training rows.
#[derive(Debug, Clone)]
pub(crate) struct ClassRoles {
    pub minority: u8,
    pub minority_rows: Vec<usize>,
    pub counts: [usize; 2],
}

impl ClassRoles {
    pub fn of(data: &Dataset, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyRows);
        }
        let counts = data.class_counts(rows);
        let minority = minority_class(counts);
        let minority_rows = data.rows_of_class(rows, minority);
        if minority_rows.len() < 2 {
            return Err(Error::MinorityTooSmall(minority_rows.len()));
        }
        Ok(ClassRoles {
            minority,
            minority_rows,
            counts,
        })
    }

    pub fn majority_count(&self) -> usize {
        self.counts[1 - self.minority as usize]
    }

    pub fn minority_count(&self) -> usize {
        self.counts[self.minority as usize]
    }

    /// Synthetic rows needed so that minority / majority = `target_ratio`.
    pub fn needed(&self, target_ratio: f64) -> usize {
        let target = (target_ratio * self.majority_count() as f64).round() as usize;
        target.saturating_sub(self.minority_count())
    }
}

/// k nearest minority neighbours of every minority row, with `k` clamped to
/// `minority - 1`.
pub(crate) fn minority_neighbors(
    data: &Dataset,
    roles: &ClassRoles,
    train_rows: &[usize],
    distance: DistanceKind,
    k: usize,
    out: &mut Resampled,
) -> Result<Vec<Vec<usize>>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let available = roles.minority_rows.len() - 1;
    let k_eff = if k > available {
        out.warn(format!("k = {k} exceeds minority size - 1; clamped to {available}"));
        available
    } else {
        k
    };
    let index = build_index(data, train_rows, distance, Some(roles.minority))?;
    roles
        .minority_rows
        .iter()
        .map(|&r| Ok(index.knn_of_row(r, k_eff)?.into_iter().map(|n| n.row).collect()))
        .collect()
}

/// Clamps a whole-training-set neighbourhood size to what exists.
pub(crate) fn clamp_k(k: usize, available: usize, what: &str, out: &mut Resampled) -> usize {
    if k > available {
        out.warn(format!("{what} = {k} exceeds available neighbours; clamped to {available}"));
        available
    } else {
        k
    }
}

/// One SMOTE-style generation step.
pub(crate) struct Generator {
    next_id: u64,
    pub algorithm: Algorithm,
    pub label: u8,
}

impl Generator {
    pub fn new(data: &Dataset, algorithm: Algorithm, label: u8) -> Self {
        Generator {
            next_id: data.max_synthetic_id().map_or(0, |m| m + 1),
            algorithm,
            label,
        }
    }

    /// Picks a random neighbour of `source` and a fresh coefficient in
    /// `[0, 1)`, negated when `extrapolate`, and appends the row.
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &mut self,
        data: &Dataset,
        source: usize,
        neighbors: &[usize],
        extrapolate: bool,
        rng: &mut StreamRng,
        out: &mut Resampled,
    ) -> usize {
        let neighbor = neighbors[rng.random_range(0..neighbors.len())];
        let delta: f64 = rng.random();
        let coefficient = if extrapolate { -delta } else { delta };
        let values = interpolate(data.kinds(), data.row(source), data.row(neighbor), coefficient);
        self.push(data, source, neighbor, coefficient, values, out);
        neighbor
    }

    pub fn push(
        &mut self,
        data: &Dataset,
        source: usize,
        neighbor: usize,
        coefficient: f64,
        values: Vec<f64>,
        out: &mut Resampled,
    ) {
        let id = self.next_id;
        self.next_id += 1;
        out.data.push_row(&values, self.label, RowOrigin::Synthetic(id));
        out.provenance.push(SyntheticRecord {
            id,
            algorithm: self.algorithm,
            label: self.label,
            source: data.origin(source),
            neighbor: data.origin(neighbor),
            coefficient,
        });
    }
}
