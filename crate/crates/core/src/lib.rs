//! Resampling and evaluation toolkit for imbalanced binary classification.
//!
//! The crate is organised bottom-up:
//!
//! - [`tabular`]: the [`Dataset`] model, CSV ingestion, stratified splitting
//!   and z-score standardisation.
//! - [`neighbors`]: exact brute-force k-nearest-neighbour queries.
//! - [`samplers`]: SMOTE, SMOTE-NC, Borderline-SMOTE, SVM-SMOTE, ADASYN and
//!   same-class Mixup.
//! - [`cleaners`]: ENN, Tomek links, SMOTE-ENN, SMOTE-Tomek and the STEM
//!   pipeline (SMOTE, then ENN, then same-class Mixup).
//! - [`texture`]: PGM images, median filtering, Otsu background suppression,
//!   overlapping tri-segmentation, GLCM and 13 Haralick features.
//! - [`classify`]: a from-scratch classifier zoo with top-3 majority voting.
//! - [`metrics`]: confusion matrices, accuracy/precision/recall/F1, ROC and AUC.
//! - [`experiment`]: the config-driven runner behind the `rebalance` binary.
//!
//! Every random choice flows from a master seed through [`rng`], so a run is
//! reproducible bit for bit.

pub mod classify;
pub mod cleaners;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod neighbors;
pub mod rng;
pub mod samplers;
pub mod synth;
pub mod tabular;
pub mod texture;

pub use error::{Error, Result};
pub use tabular::{ColumnKind, Dataset, RowOrigin};
