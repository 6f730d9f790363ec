//! Config-driven experiment runner.
//!
//! A run splits the dataset once per repetition (stratified, seeded), fits a
//! standardiser on the training part, and for every sampler rebalances the
//! training part only. All configured classifiers are trained on the result,
//! the three best by validation AUC form a majority-vote ensemble, and the
//! ensemble is scored on the holdout part. Cells of the sampler × repetition
//! grid run on a bounded thread pool and fail independently.
//!
//! Sub-seeds are derived from the master seed by label:
//! `split/{r}`, `sampler/{name}/{r}` and `classifier/{family}/{r}`.

mod config;
mod extract;
mod report;
mod run;

pub use config::{DatasetSource, ExperimentConfig, RunSettings, SamplerChoice};
pub use extract::{extract_texture_dataset, list_images, read_labels, write_texture_csv, SetupMode, TextureRow};
pub use report::{markdown_report, markdown_table, results_csv, roc_csv, write_outputs, write_report, CSV_HEADER, TABLE_HEADER};
pub use run::{
    apply_sampler, check_leakage, run_experiment, summarize, CellRecord, CellResult, CellSeeds, CellTiming, DatasetSummary, MeanMetrics,
    RepetitionRecord, ResultRow, RunManifest, RunOptions, RunOutput, Timings, THREADS_ENV,
};
