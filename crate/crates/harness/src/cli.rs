use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{cmd_discovery, cmd_e2e, cmd_simulate, cmd_walk};
use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::report::{Attachments, Report};

#[derive(Debug, Parser)]
#[command(name = "welded", version, about = "Welded-tree simulation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON experiment config; defaults apply to anything missing.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report path. Existing files are never overwritten.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "WELDED_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, ValueEnum)]
pub enum Command {
    /// Quantum walk sweep against the classical walker.
    Walk,
    /// Fresh-label guessing experiment.
    Discovery,
    /// Simulators against the exact executor.
    Simulate,
    /// Walker, walk and simulators together.
    E2e,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Walk => "walk",
            Command::Discovery => "discovery",
            Command::Simulate => "simulate",
            Command::E2e => "e2e",
        }
    }
}

pub fn execute(command: Command, cfg: &ExperimentConfig) -> Result<(Report, Attachments), HarnessError> {
    match command {
        Command::Walk => cmd_walk(cfg),
        Command::Discovery => cmd_discovery(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::E2e => cmd_e2e(cfg),
    }
}

/// `report.json` plus suffix `walk-n4.csv` gives `report.walk-n4.csv`.
pub fn attachment_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn create_new(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let mut f = OpenOptions::new().write(true).create_new(true).open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::AlreadyExists {
            HarnessError::Exists(path.to_path_buf())
        } else {
            HarnessError::Io(path.to_path_buf(), e.to_string())
        }
    })?;
    f.write_all(contents.as_bytes()).map_err(|e| HarnessError::Io(path.to_path_buf(), e.to_string()))
}

/// Writes the report and its attachments, refusing if any target exists.
pub fn write_outputs(out: &Path, report: &Report, attachments: &Attachments) -> Result<(), HarnessError> {
    let targets: Vec<PathBuf> = attachments.iter().map(|(s, _)| attachment_path(out, s)).collect();
    if let Some(p) = std::iter::once(out).chain(targets.iter().map(PathBuf::as_path)).find(|p| p.exists()) {
        return Err(HarnessError::Exists(p.to_path_buf()));
    }
    for (path, (_, body)) in targets.iter().zip(attachments) {
        create_new(path, body)?;
    }
    create_new(out, &report.to_json())
}

/// Loads the config, applies flag overrides and runs the command on a pool
/// of `jobs` threads.
pub fn run(cli: &Cli) -> Result<Report, HarnessError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    if cli.jobs == Some(0) {
        return Err(HarnessError::Config("--jobs must be positive".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    let (report, attachments) = pool.install(|| execute(cli.command, &cfg))?;
    match &cfg.out {
        Some(out) => write_outputs(out, &report, &attachments)?,
        None => print!("{}", report.to_json()),
    }
    Ok(report)
}

/// Exit code 0 when every hard check holds and no statistical check is
/// beyond five sigma, 1 otherwise, 2 on errors.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let failed: Vec<&str> = report.checks.iter().filter(|c| c.fatal).map(|c| c.name.as_str()).collect();
            let off = report.checks.iter().filter(|c| !c.pass).count();
            eprintln!(
                "{}: {} checks, {} outside 3 sigma or failed, {} fatal",
                cli.command.name(),
                report.checks.len(),
                off,
                failed.len()
            );
            for name in &failed {
                eprintln!("  failed: {name}");
            }
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
