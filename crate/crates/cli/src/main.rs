use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use irsfb_core::sim::{self, selftest, ConfigFile, ExperimentConfig, ExperimentKind, Workers};

mod plot;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Rank-one factorized IRS phase-shift feedback experiments.
#[derive(Debug, Parser)]
#[command(name = "irsfb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Payload ratio of every configured factorization (pure arithmetic).
    PayloadRatio(RunArgs),
    /// Mean ADR versus Rician factor for the baseline and each factorization.
    AdrVsK(RunArgs),
    /// Mean ADR when the whole feedback must fit a fixed bit budget.
    FixedBudget(RunArgs),
    /// Quick internal consistency checks.
    Selftest {
        #[arg(long, default_value_t = sim::config::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML file overriding the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    /// Use the N = 1024 (32×32) surface instead of the 16×16 desk-scale one.
    #[arg(long)]
    full_scale: bool,
    /// Also write an SVG chart next to the CSV.
    #[arg(long)]
    plot: bool,
    /// Worker threads (1 = serial, 0 = one per core).
    #[arg(long, env = sim::WORKERS_ENV, default_value_t = 0)]
    workers: usize,
}

enum Failure {
    Config(String),
    Numerical(String),
    Other(anyhow::Error),
}

impl From<irsfb_core::Error> for Failure {
    fn from(e: irsfb_core::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Selftest { seed } => {
            let checks = selftest::run_selftest(seed);
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Numerical("self-test failed".into()))
            }
        }
        Command::PayloadRatio(args) => {
            let cfg = load_config(ExperimentKind::PayloadRatio, &args)?;
            let csv = sim::run_payload_sweep(&cfg)?;
            emit(&cfg, &args, &csv, |csv| plot::payload_chart(csv).to_svg())
        }
        Command::AdrVsK(args) => {
            let cfg = load_config(ExperimentKind::AdrVsK, &args)?;
            let sweep = sim::run_adr_vs_k(&cfg, Workers::from_count(args.workers))?;
            let title = format!("ADR vs K, N = {}, {} trials", cfg.n(), cfg.trials);
            emit(&cfg, &args, &sweep.to_csv(), |csv| {
                plot::adr_chart(csv, &title).to_svg()
            })
        }
        Command::FixedBudget(args) => {
            let cfg = load_config(ExperimentKind::FixedBudget, &args)?;
            let sweep = sim::run_fixed_budget(&cfg, Workers::from_count(args.workers))?;
            let title = format!(
                "ADR under a {}-bit budget, N = {}",
                cfg.budget_bits.unwrap_or_default(),
                cfg.n()
            );
            emit(&cfg, &args, &sweep.to_csv(), |csv| {
                plot::adr_chart(csv, &title).to_svg()
            })
        }
    }
}

fn load_config(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::defaults(kind, args.full_scale);
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: ConfigFile = toml::from_str(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        cfg.apply(file)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(
    cfg: &ExperimentConfig,
    args: &RunArgs,
    csv: &str,
    chart: impl FnOnce(&str) -> String,
) -> Result<(), Failure> {
    match &cfg.output {
        Some(path) => write(path, csv)?,
        None => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = stdout
                .write_all(csv.as_bytes())
                .and_then(|()| stdout.flush())
            {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(anyhow::Error::from(e).context("writing to stdout").into());
                }
            }
        }
    }
    if args.plot {
        let svg_path = cfg
            .output
            .as_ref()
            .map(|p| p.with_extension("svg"))
            .unwrap_or_else(|| PathBuf::from(format!("{}.svg", cfg.kind.name())));
        write(&svg_path, &chart(csv))?;
    }
    Ok(())
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
