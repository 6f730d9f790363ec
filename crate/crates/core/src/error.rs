use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("non-numeric value `{value}` in continuous column `{column}` (row {row})")]
    NonNumeric {
        column: String,
        row: usize,
        value: String,
    },
    #[error("label column must hold exactly two classes, found {0}")]
    NotBinary(usize),
    #[error("class {class} has {count} rows, need at least {needed}")]
    ClassTooSmall {
        class: u8,
        count: usize,
        needed: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty row selection")]
    EmptyRows,
    #[error("euclidean distance requested on a dataset with nominal columns")]
    DistanceMismatch,
    #[error("requested {requested} neighbours but only {available} candidates exist")]
    NotEnoughNeighbors { requested: usize, available: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("minority class has {0} rows, need at least 2")]
    MinorityTooSmall(usize),
    #[error("SMOTE-NC needs at least one continuous column")]
    AllNominal,
    #[error("linear SVM training diverged")]
    SvmDiverged,
    #[error("degenerate result: {0}")]
    Degenerate(String),
    #[error("need at least {needed} rows, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("operation needs both classes present")]
    SingleClass,
    #[error("median window must be odd and at least 3, got {0}")]
    InvalidWindow(usize),
    #[error("image too small: {0}")]
    ImageTooSmall(String),
    #[error("GLCM has no co-occurrences")]
    EmptyGlcm,
    #[error("GLCM is not normalized")]
    NotNormalized,
    #[error("malformed PGM: {0}")]
    Pgm(String),
    #[error("ill-conditioned covariance: {0}")]
    IllConditioned(String),
    #[error("training diverged: {0}")]
    Diverged(String),
    #[error("need at least 3 candidate models, got {0}")]
    TooFewModels(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("AUC undefined: labels contain a single class")]
    UndefinedAuc,
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("leakage: {0}")]
    Leakage(String),
    #[error("no label for image `{0}`")]
    MissingLabel(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
