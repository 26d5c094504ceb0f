use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use qlearn::{run, ConfigOverrides, ExperimentKind, LearnerKind, OutputFormat};

/// Quantum versus classical query-complexity experiments.
#[derive(Debug, Parser)]
#[command(name = "qlearn", version)]
struct Cli {
    kind: ExperimentKind,
    /// Class spec such as `parity:n=6`, or `file:PATH` for a JSON class.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, value_enum)]
    learner: Option<LearnerKind>,
    /// Number of partition pieces.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Where `partition` writes the partition and memo tables as JSON.
    #[arg(long)]
    partition_out: Option<PathBuf>,
    /// JSON file with the same keys; flags given here win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("qlearn: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("qlearn: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => ConfigOverrides::from_json_file(path)?,
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        kind: Some(cli.kind),
        class: cli.class,
        learner: cli.learner,
        k: cli.k,
        m: cli.m,
        l: cli.l,
        trials: cli.trials,
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
        partition_out: cli.partition_out,
    };
    let config = flags.over(file).resolve()?;
    let report = run(&config)?;
    match &config.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            report.write(config.format, &mut w)?;
            w.flush()?;
        }
        None => report.write(config.format, io::stdout().lock())?,
    }
    Ok(report.passed())
}
