use std::fmt::Write as _;
use std::path::Path;

use super::run::{ResultRow, RunManifest, RunOutput};
use crate::error::{Error, Result};

pub const TABLE_HEADER: &str = "| Approach | Acc | AUC | Rec | Pre | F1 | CL |";
pub const CSV_HEADER: [&str; 9] = ["approach", "acc", "auc", "rec", "pre", "f1", "cl", "succeeded", "failed"];

fn cl_cell(row: &ResultRow) -> String {
    let code = row.code.as_deref().unwrap_or("-");
    if row.failed == 0 {
        code.to_string()
    } else {
        format!("{code} ({} of {} failed)", row.failed, row.failed + row.succeeded)
    }
}

/// Results table, values to four decimals.
pub fn markdown_table(manifest: &RunManifest) -> String {
    let mut s = String::new();
    s.push_str(TABLE_HEADER);
    s.push('\n');
    s.push_str("|---|---|---|---|---|---|---|\n");
    for row in &manifest.results {
        match &row.metrics {
            Some(m) => writeln!(
                s,
                "| {} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {} |",
                row.approach,
                m.accuracy,
                m.auc,
                m.recall,
                m.precision,
                m.f1,
                cl_cell(row)
            ),
            None => writeln!(s, "| {} | n/a | n/a | n/a | n/a | n/a | {} |", row.approach, cl_cell(row)),
        }
        .expect("writing to a String");
    }
    s
}

/// Table plus a footer describing how the numbers were obtained.
pub fn markdown_report(manifest: &RunManifest) -> String {
    let reps = manifest.config.run.repetitions;
    let mut s = markdown_table(manifest);
    writeln!(
        s,
        "\nValues are means of holdout metrics over {reps} seeded repetitions (master seed {}). \
         CL is the ensemble chosen most often by this run's own classifier zoo: \
         Ld = LDA, Q = QDA, E = Extra Trees, A = AdaBoost, K = kNN, Lr = logistic regression.",
        manifest.config.run.seed
    )
    .expect("writing to a String");
    s
}

/// Machine-readable results. Floats use the shortest representation that
/// parses back to the same value.
pub fn results_csv(manifest: &RunManifest) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in &manifest.results {
        let nums: Vec<String> = match &row.metrics {
            Some(m) => [m.accuracy, m.auc, m.recall, m.precision, m.f1].iter().map(|v| v.to_string()).collect(),
            None => vec![String::new(); 5],
        };
        let mut rec = vec![row.approach.clone()];
        rec.extend(nums);
        rec.push(row.code.clone().unwrap_or_default());
        rec.push(row.succeeded.to_string());
        rec.push(row.failed.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `approach,repetition,fpr,tpr`, one line per ROC point of each
/// successful cell.
pub fn roc_csv(manifest: &RunManifest) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["approach", "repetition", "fpr", "tpr"])?;
    for cell in &manifest.cells {
        let Some(res) = &cell.result else { continue };
        let approach = manifest
            .results
            .iter()
            .find(|r| r.sampler == cell.sampler)
            .map_or(cell.sampler.as_str(), |r| r.approach.as_str());
        for (fpr, tpr) in &res.roc {
            w.write_record([approach, &cell.repetition.to_string(), &fpr.to_string(), &tpr.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

/// Writes `results.md`, `results.csv` and `roc.csv` into `dir`.
pub fn write_report(manifest: &RunManifest, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(dir, "results.md", &markdown_report(manifest))?;
    write(dir, "results.csv", &results_csv(manifest)?)?;
    write(dir, "roc.csv", &roc_csv(manifest)?)
}

/// Report files plus `manifest.json` and `timings.json`.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<()> {
    write_report(&out.manifest, dir)?;
    write(dir, "manifest.json", &out.manifest.to_json()?)?;
    write(dir, "timings.json", &(serde_json::to_string_pretty(&out.timings)? + "\n"))
}
