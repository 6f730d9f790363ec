use std::path::Path;
use std::process::Command;

use rebalance::classify::{self, ClassifierKind, Family};
use rebalance::experiment::{self, DatasetSource, ExperimentConfig, RunManifest, RunOptions, RunSettings, SamplerChoice, SetupMode};
use rebalance::synth::{phantom_image, TwoGaussians};
use rebalance::tabular::{load_csv, CsvSchema};
use rebalance::texture::{write_pgm, TextureConfig};

const BIN: &str = env!("CARGO_BIN_EXE_rebalance");

fn separable(samplers: Vec<SamplerChoice>, repetitions: usize) -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSource::TwoGaussians(TwoGaussians {
            rows: 400,
            positive_fraction: 0.5,
            dim: 3,
            separation: 10.0,
            seed: 2,
        }),
        split: Default::default(),
        run: RunSettings {
            seed: 1,
            repetitions,
            out_dir: None,
        },
        samplers,
        classifiers: ClassifierKind::defaults(),
    }
}

#[test]
fn no_resampling_on_separable_data_is_near_perfect() {
    let m = experiment::run_experiment(&separable(vec![SamplerChoice::None], 3), &RunOptions::default()).unwrap().manifest;
    let row = m.row("none").unwrap();
    assert!(row.metrics.as_ref().unwrap().auc >= 0.99);
    assert_eq!(row.succeeded, 3);
    for cell in &m.cells {
        let res = cell.result.as_ref().unwrap();
        assert_eq!(res.counts_before, res.counts_after);
        assert!(res.provenance.is_empty());
        assert_eq!(res.ensemble.len(), 3);
    }
}

#[test]
fn ensemble_code_uses_member_initials() {
    let d = rebalance::synth::two_gaussians(&TwoGaussians {
        rows: 120,
        positive_fraction: 0.5,
        separation: 4.0,
        ..Default::default()
    });
    let rows = d.all_rows();
    let members: Vec<_> = [
        ClassifierKind::ExtraTrees(Default::default()),
        ClassifierKind::Lda(Default::default()),
        ClassifierKind::Qda(Default::default()),
    ]
    .iter()
    .map(|k| classify::train(k, &d, &rows, 0).unwrap())
    .collect();
    let e = classify::Ensemble::from_members(members).unwrap();
    assert_eq!(e.families(), vec![Family::Lda, Family::Qda, Family::ExtraTrees]);
    assert_eq!(e.code(), "LdQE");
}

#[test]
fn results_csv_matches_manifest_exactly() {
    let m = experiment::run_experiment(&separable(vec![SamplerChoice::None, SamplerChoice::Smote(Default::default())], 2), &RunOptions::default())
        .unwrap()
        .manifest;
    let text = experiment::results_csv(&m).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    for (rec, row) in r.records().zip(&m.results) {
        let rec = rec.unwrap();
        let x = row.metrics.as_ref().unwrap();
        assert_eq!(&rec[0], row.approach);
        let parsed: Vec<f64> = (1..6).map(|i| rec[i].parse().unwrap()).collect();
        assert_eq!(parsed, vec![x.accuracy, x.auc, x.recall, x.precision, x.f1]);
        assert_eq!(Some(&rec[6]), row.code.as_deref());
    }
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("exp.toml");
    std::fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = r#"
[dataset]
source = "two_gaussians"
rows = 200
positive_fraction = 0.2
separation = 3.0

[run]
repetitions = 2

[[sampler]]
name = "none"

[[sampler]]
name = "stem"
"#;

#[test]
fn cli_run_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let status = Command::new(BIN)
        .args(["run", "--config", cfg.to_str().unwrap(), "--seed", "9", "--out", out.to_str().unwrap()])
        .env("REBALANCE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.starts_with(experiment::TABLE_HEADER));
    for f in ["manifest.json", "timings.json", "results.md", "results.csv", "roc.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let manifest_path = out.join("manifest.json");
    let m = RunManifest::from_json(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(m.config.run.seed, 9);
    let timings: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("timings.json")).unwrap()).unwrap();
    assert_eq!(timings["threads"], 2);

    let report = Command::new(BIN).args(["report", "--manifest", manifest_path.to_str().unwrap()]).output().unwrap();
    assert_eq!(report.status.code(), Some(0));
    assert_eq!(String::from_utf8(report.stdout).unwrap(), std::fs::read_to_string(out.join("results.md")).unwrap());

    // the manifest doubles as a config and reproduces itself
    let again = tmp.path().join("again");
    let rerun = Command::new(BIN)
        .args(["run", "--config", manifest_path.to_str().unwrap(), "--out", again.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(rerun.status.code(), Some(0));
    assert_eq!(std::fs::read(&manifest_path).unwrap(), std::fs::read(again.join("manifest.json")).unwrap());
}

#[test]
fn cli_partial_failure_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let body = format!("{SMALL}\n[[sampler]]\nname = \"smote\"\ntarget_ratio = 2.0\n");
    let cfg = write_config(tmp.path(), &body);
    let out = Command::new(BIN)
        .args(["run", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("| SMOTE | n/a |"));
    assert!(table.contains("| STEM | 0."));
}

#[test]
fn cli_rejects_bad_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[dataset]\nsource = \"two_gaussians\"\n");
    let out = Command::new(BIN).args(["run", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampler"));
}

fn texture_corpus(dir: &Path, per_class: usize) -> std::path::PathBuf {
    let mut labels = String::from("image_id,label\n");
    for i in 0..2 * per_class {
        let textured = i % 2 == 0;
        let id = format!("im{i:03}");
        write_pgm(&phantom_image(40, 54, textured, 100 + i as u64), dir.join(format!("{id}.pgm"))).unwrap();
        labels.push_str(&format!("{id},{}\n", if textured { "textured" } else { "flat" }));
    }
    let path = dir.join("labels.csv");
    std::fs::write(&path, labels).unwrap();
    path
}

#[test]
fn cli_extract_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let labels = texture_corpus(tmp.path(), 2);
    for (mode, rows) in [("F", 4), ("S", 12)] {
        let out = tmp.path().join(format!("{mode}.csv"));
        let status = Command::new(BIN)
            .args([
                "extract",
                "--images",
                tmp.path().to_str().unwrap(),
                "--labels",
                labels.to_str().unwrap(),
                "--mode",
                mode,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        let mut schema = CsvSchema::new("label");
        schema.ignore_columns = vec!["image_id".into(), "segment".into()];
        let d = load_csv(&out, &schema).unwrap();
        assert_eq!((d.n_rows(), d.n_cols()), (rows, 52));
    }
}

#[test]
fn flat_versus_textured_images_are_separable_downstream() {
    let tmp = tempfile::tempdir().unwrap();
    let labels = texture_corpus(tmp.path(), 40);
    let rows = experiment::extract_texture_dataset(tmp.path(), &labels, SetupMode::F, &TextureConfig::default()).unwrap();
    let csv_path = tmp.path().join("features.csv");
    experiment::write_texture_csv(&rows, &csv_path).unwrap();
    let mut schema = CsvSchema::new("label");
    schema.ignore_columns = vec!["image_id".into(), "segment".into()];
    let cfg = ExperimentConfig {
        dataset: DatasetSource::Csv { path: csv_path, schema },
        split: Default::default(),
        run: RunSettings {
            seed: 3,
            repetitions: 3,
            out_dir: None,
        },
        samplers: vec![SamplerChoice::None],
        classifiers: ClassifierKind::defaults(),
    };
    let m = experiment::run_experiment(&cfg, &RunOptions::default()).unwrap().manifest;
    assert_eq!(m.dataset.rows, 80);
    let auc = m.row("none").unwrap().metrics.as_ref().unwrap().auc;
    assert!(auc > 0.9, "holdout AUC {auc}");
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::from_file(&path).unwrap();
        if let DatasetSource::Csv { path: data, .. } = &cfg.dataset {
            assert!(data.is_absolute() && data.exists(), "{}", data.display());
        }
    }
}
