use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rebalance::experiment::{self, ExperimentConfig, RunManifest, RunOptions, SetupMode};
use rebalance::texture::TextureConfig;

#[derive(Parser)]
#[command(name = "rebalance", version, about = "Resampling experiments for imbalanced binary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// One row per top, mid and bottom segment.
    #[value(name = "S")]
    S,
    /// One row per whole image.
    #[value(name = "F")]
    F,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sampler x repetition grid from a TOML config (or a manifest).
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `run.out_dir`; defaults to `./out`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a directory of PGM images into a Haralick feature CSV.
    Extract {
        #[arg(long)]
        images: PathBuf,
        /// CSV with `image_id,label` columns.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Re-render the results tables of a finished run.
    Report {
        #[arg(long)]
        manifest: PathBuf,
        /// Directory for results.md/csv and roc.csv; stdout only if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> rebalance::Result<ExitCode> {
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(s) = seed {
                cfg.run.seed = s;
            }
            let dir = out.or_else(|| cfg.run.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
            cfg.run.out_dir = None;
            let output = experiment::run_experiment(&cfg, &RunOptions::default())?;
            experiment::write_outputs(&output, &dir)?;
            print!("{}", experiment::markdown_report(&output.manifest));
            let failed = output.manifest.failed_cells();
            log::info!("wrote {} ({:.1}s on {} threads)", dir.display(), output.timings.total_seconds, output.timings.threads);
            if failed > 0 {
                eprintln!("{failed} of {} grid cells failed; see manifest.json", output.manifest.cells.len());
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extract {
            images,
            labels,
            mode,
            out,
            levels,
        } => {
            let mode = match mode {
                Mode::S => SetupMode::S,
                Mode::F => SetupMode::F,
            };
            let cfg = TextureConfig { levels, ..Default::default() };
            let rows = experiment::extract_texture_dataset(&images, &labels, mode, &cfg)?;
            experiment::write_texture_csv(&rows, &out)?;
            eprintln!("{} rows written to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { manifest, out } => {
            let text = std::fs::read_to_string(&manifest).map_err(|e| rebalance::Error::InvalidInput(format!("{}: {e}", manifest.display())))?;
            let m = RunManifest::from_json(&text)?;
            if let Some(dir) = out {
                experiment::write_report(&m, &dir)?;
            }
            print!("{}", experiment::markdown_report(&m));
            Ok(if m.failed_cells() > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
