use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SamplerChoice};
use crate::classify::{self, Family, ModelScore};
use crate::cleaners::{self, CleanReport};
use crate::error::{Error, Result};
use crate::metrics::{self, ConfusionMatrix, MetricRow};
use crate::rng::subseed;
use crate::samplers::{self, Resampled};
use crate::tabular::{fit_standardizer, stratified_split, Dataset, RowOrigin, SplitIndices};

/// Environment variable bounding the worker pool.
pub const THREADS_ENV: &str = "REBALANCE_THREADS";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` reads `REBALANCE_THREADS`, then falls back to
    /// the number of available cores.
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn resolved_threads(&self) -> usize {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub rows: usize,
    pub columns: usize,
    pub class_names: [String; 2],
    pub class_counts: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub split_seed: u64,
    /// Class counts of the train, validation and holdout parts.
    pub train: [usize; 2],
    pub validation: [usize; 2],
    pub holdout: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSeeds {
    pub split: u64,
    pub sampler: u64,
    pub classifiers: BTreeMap<Family, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub counts_before: [usize; 2],
    pub counts_after: [usize; 2],
    pub synthetic_rows: usize,
    pub cleaning: Vec<CleanReport>,
    /// One `SyntheticRecord::log_line` per surviving synthetic row.
    pub provenance: Vec<String>,
    pub warnings: Vec<String>,
    /// Validation scores of every candidate, in config order.
    pub candidates: Vec<ModelScore>,
    /// Ensemble members by descending validation AUC.
    pub ensemble: Vec<Family>,
    pub code: String,
    pub holdout: ConfusionMatrix,
    pub metrics: MetricRow,
    pub roc: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub sampler: String,
    pub repetition: usize,
    pub seeds: CellSeeds,
    pub result: Option<CellResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub accuracy: f64,
    pub auc: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub approach: String,
    pub sampler: String,
    /// Means over successful repetitions; `None` when every cell failed.
    pub metrics: Option<MeanMetrics>,
    /// Most frequent ensemble code; ties go to the lexicographically smaller.
    pub code: Option<String>,
    pub succeeded: usize,
    pub failed: usize,
}

/// Everything needed to audit and re-run an experiment. Contains no
/// timings, so equal inputs serialise to equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub repetitions: Vec<RepetitionRecord>,
    pub cells: Vec<CellRecord>,
    pub results: Vec<ResultRow>,
}

impl RunManifest {
    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn row(&self, sampler: &str) -> Option<&ResultRow> {
        self.results.iter().find(|r| r.sampler == sampler)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub sampler: String,
    pub repetition: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub threads: usize,
    pub total_seconds: f64,
    pub cells: Vec<CellTiming>,
}

pub struct RunOutput {
    pub manifest: RunManifest,
    pub timings: Timings,
}

fn sampler_seed(master: u64, choice: &SamplerChoice, rep: usize) -> u64 {
    subseed(master, &format!("sampler/{}/{rep}", choice.key()))
}

fn classifier_seed(master: u64, family: Family, rep: usize) -> u64 {
    subseed(master, &format!("classifier/{}/{rep}", family.name()))
}

/// Runs `choice` on `train` rows, with every seed field replaced by `seed`.
pub fn apply_sampler(choice: &SamplerChoice, data: &Dataset, train: &[usize], seed: u64) -> Result<Resampled> {
    match *choice {
        SamplerChoice::None => Ok(Resampled::from_rows(data, train)),
        SamplerChoice::Smote(c) => samplers::smote(data, train, &samplers::SmoteConfig { seed, ..c }),
        SamplerChoice::SmoteNc(c) => samplers::smote_nc(data, train, &samplers::SmoteConfig { seed, ..c }),
        SamplerChoice::Borderline(c) => samplers::borderline_smote(data, train, &samplers::BorderlineConfig { seed, ..c }),
        SamplerChoice::SvmSmote(c) => samplers::svm_smote(data, train, &samplers::SvmSmoteConfig { seed, ..c }),
        SamplerChoice::Adasyn(c) => samplers::adasyn(data, train, &samplers::AdasynConfig { seed, ..c }),
        SamplerChoice::SmoteTomek { smote, remove_both } => {
            cleaners::smote_tomek(data, train, &samplers::SmoteConfig { seed, ..smote }, remove_both)
        }
        SamplerChoice::SmoteEnn(c) => cleaners::smote_enn(data, train, &samplers::SmoteConfig { seed, ..c }),
        SamplerChoice::Mixup(c) => samplers::mixup_oversample(data, train, &samplers::MixupConfig { seed, ..c }),
        SamplerChoice::Stem { smote, mixup } => cleaners::stem(
            data,
            train,
            &samplers::SmoteConfig { seed, ..smote },
            &samplers::MixupConfig { seed, ..mixup },
        ),
    }
}

/// Every original row in `out`, and every original parent in its
/// provenance, must belong to `train`.
pub fn check_leakage(out: &Resampled, train: &[usize]) -> Result<()> {
    let allowed: BTreeSet<usize> = train.iter().copied().collect();
    let bad = |o: RowOrigin| matches!(o, RowOrigin::Original(i) if !allowed.contains(&i));
    if let Some(o) = out.data.origins().iter().copied().find(|&o| bad(o)) {
        return Err(Error::Leakage(format!("row {o} is outside the training part")));
    }
    for rec in &out.provenance {
        if bad(rec.source) || bad(rec.neighbor) {
            return Err(Error::Leakage(format!("synthetic row s{} has a parent outside the training part", rec.id)));
        }
    }
    Ok(())
}

struct Prepared {
    split: SplitIndices,
    data: Dataset,
}

fn prepare(raw: &Dataset, cfg: &ExperimentConfig, split_seed: u64) -> Result<Prepared> {
    let split = stratified_split(raw, cfg.split, split_seed)?;
    let data = fit_standardizer(raw, &split.train)?.transform(raw)?;
    Ok(Prepared { split, data })
}

fn run_cell(cfg: &ExperimentConfig, choice: &SamplerChoice, prepared: &Prepared, seeds: &CellSeeds) -> Result<CellResult> {
    let Prepared { split, data } = prepared;
    let out = apply_sampler(choice, data, &split.train, seeds.sampler)?;
    check_leakage(&out, &split.train)?;
    let rows = out.data.all_rows();
    let models = cfg
        .classifiers
        .iter()
        .map(|k| classify::train(k, &out.data, &rows, seeds.classifiers[&k.family()]))
        .collect::<Result<Vec<_>>>()?;
    let (ensemble, candidates) = classify::select_top3(models, data, &split.validation)?;
    let labels: Vec<u8> = split.holdout.iter().map(|&r| data.label(r)).collect();
    let mut votes = Vec::with_capacity(labels.len());
    let mut scores = Vec::with_capacity(labels.len());
    for &r in &split.holdout {
        votes.push(ensemble.vote(data.row(r))?);
        scores.push(ensemble.proba(data.row(r))?);
    }
    let holdout = metrics::confusion(&labels, &votes)?;
    let roc = metrics::roc_auc(&labels, &scores)?;
    Ok(CellResult {
        counts_before: data.class_counts(&split.train),
        counts_after: out.class_counts(),
        synthetic_rows: out.synthetic_count(),
        cleaning: out.cleaning.clone(),
        provenance: out.provenance.iter().map(|r| r.log_line()).collect(),
        warnings: out.warnings.clone(),
        candidates,
        ensemble: ensemble.members.iter().map(|m| m.family()).collect(),
        code: ensemble.code(),
        metrics: MetricRow::from_matrix(&holdout, roc.auc)?,
        holdout,
        roc: roc.points,
    })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs the sampler × repetition grid. Cell failures are recorded, not
/// propagated; only config and dataset loading errors abort the run.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let raw = cfg.dataset.load()?;
    let master = cfg.run.seed;
    let reps = cfg.run.repetitions;

    let split_seeds: Vec<u64> = (0..reps).map(|r| subseed(master, &format!("split/{r}"))).collect();
    let prepared: Vec<std::result::Result<Prepared, String>> = split_seeds
        .iter()
        .map(|&s| prepare(&raw, cfg, s).map_err(|e| e.to_string()))
        .collect();
    let repetitions = prepared
        .iter()
        .zip(&split_seeds)
        .enumerate()
        .map(|(repetition, (p, &split_seed))| {
            let counts = |rows: &[usize]| raw.class_counts(rows);
            let (train, validation, holdout) = match p {
                Ok(p) => (counts(&p.split.train), counts(&p.split.validation), counts(&p.split.holdout)),
                Err(_) => ([0; 2], [0; 2], [0; 2]),
            };
            RepetitionRecord {
                repetition,
                split_seed,
                train,
                validation,
                holdout,
            }
        })
        .collect();

    let grid: Vec<(usize, usize)> = (0..cfg.samplers.len()).flat_map(|s| (0..reps).map(move |r| (s, r))).collect();
    let threads = opts.resolved_threads();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let finished: Vec<(CellRecord, f64)> = pool.install(|| {
        grid.par_iter()
            .map(|&(s, r)| {
                let t0 = Instant::now();
                let choice = &cfg.samplers[s];
                let seeds = CellSeeds {
                    split: split_seeds[r],
                    sampler: sampler_seed(master, choice, r),
                    classifiers: cfg.classifiers.iter().map(|k| (k.family(), classifier_seed(master, k.family(), r))).collect(),
                };
                let outcome = match &prepared[r] {
                    Err(e) => Err(format!("split: {e}")),
                    Ok(p) => match catch_unwind(AssertUnwindSafe(|| run_cell(cfg, choice, p, &seeds))) {
                        Ok(Ok(res)) => Ok(res),
                        Ok(Err(e)) => Err(e.to_string()),
                        Err(panic) => Err(format!("panic: {}", panic_message(panic))),
                    },
                };
                if let Err(e) = &outcome {
                    log::warn!("cell {}/{r} failed: {e}", choice.key());
                }
                let (result, error) = match outcome {
                    Ok(res) => (Some(res), None),
                    Err(e) => (None, Some(e)),
                };
                let record = CellRecord {
                    sampler: choice.key().to_string(),
                    repetition: r,
                    seeds,
                    result,
                    error,
                };
                (record, t0.elapsed().as_secs_f64())
            })
            .collect()
    });

    let timings = Timings {
        threads,
        total_seconds: started.elapsed().as_secs_f64(),
        cells: finished
            .iter()
            .map(|(c, secs)| CellTiming {
                sampler: c.sampler.clone(),
                repetition: c.repetition,
                seconds: *secs,
            })
            .collect(),
    };
    let cells: Vec<CellRecord> = finished.into_iter().map(|(c, _)| c).collect();
    let results = summarize(&cfg.samplers, &cells);
    let all = raw.all_rows();
    let manifest = RunManifest {
        format_version: 1,
        config: cfg.clone(),
        dataset: DatasetSummary {
            rows: raw.n_rows(),
            columns: raw.n_cols(),
            class_names: raw.class_names().clone(),
            class_counts: raw.class_counts(&all),
        },
        repetitions,
        cells,
        results,
    };
    Ok(RunOutput { manifest, timings })
}

/// Aggregates cells into one row per sampler, in config order.
pub fn summarize(samplers: &[SamplerChoice], cells: &[CellRecord]) -> Vec<ResultRow> {
    samplers
        .iter()
        .map(|choice| {
            let mine: Vec<&CellRecord> = cells.iter().filter(|c| c.sampler == choice.key()).collect();
            let ok: Vec<&CellResult> = mine.iter().filter_map(|c| c.result.as_ref()).collect();
            let n = ok.len() as f64;
            let mean = |f: fn(&MetricRow) -> f64| ok.iter().map(|c| f(&c.metrics)).sum::<f64>() / n;
            let metrics = (!ok.is_empty()).then(|| MeanMetrics {
                accuracy: mean(|m| m.accuracy),
                auc: mean(|m| m.auc),
                recall: mean(|m| m.recall),
                precision: mean(|m| m.precision),
                f1: mean(|m| m.f1),
            });
            let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
            for c in &ok {
                *freq.entry(c.code.as_str()).or_default() += 1;
            }
            // BTreeMap iterates in ascending key order, so max_by_key on the
            // reversed sequence keeps the smallest code among equal counts.
            let code = freq.iter().rev().max_by_key(|(_, n)| **n).map(|(c, _)| c.to_string());
            ResultRow {
                approach: choice.display_name().to_string(),
                sampler: choice.key().to_string(),
                metrics,
                code,
                succeeded: ok.len(),
                failed: mine.len() - ok.len(),
            }
        })
        .collect()
}
