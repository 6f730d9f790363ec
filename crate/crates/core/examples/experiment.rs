//! A short WBC grid run through the library API; the `rebalance run`
//! binary does the same from `configs/wbc.toml`.

use std::path::Path;

use rebalance::experiment::{self, ExperimentConfig, RunOptions};

fn main() -> rebalance::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/wbc.toml");
    let mut cfg = ExperimentConfig::from_file(path)?;
    cfg.run.repetitions = 2;
    let out = experiment::run_experiment(&cfg, &RunOptions::default())?;
    print!("{}", experiment::markdown_report(&out.manifest));
    let cell = &out.manifest.cells[out.manifest.cells.len() - 1];
    if let Some(res) = &cell.result {
        println!("\n{} rep {}: {:?} -> {:?}, ensemble {:?}", cell.sampler, cell.repetition, res.counts_before, res.counts_after, res.ensemble);
    }
    println!("{:.2}s on {} threads", out.timings.total_seconds, out.timings.threads);
    Ok(())
}
