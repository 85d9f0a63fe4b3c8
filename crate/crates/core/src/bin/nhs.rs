//! `nhs` – run figure presets or flat config files and write CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nhs_core::config::{ConfigError, ExperimentConfig};
use nhs_core::experiment;
use nhs_core::Engine;

#[derive(Parser)]
#[command(name = "nhs", version, about = "WPT-NOMA / BAC-NOMA outage simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write CSV.
    Run(RunArgs),
    /// Check a config file and list every violation.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// One of fig1a, fig1b, fig2a, fig2b, fig3, fig4.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trials per point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (default: `output_path` from the config, else
    /// `<preset>.csv` / `out.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn load(args: &RunArgs) -> Result<(ExperimentConfig, PathBuf), Failure> {
    let cfg_err = |e: ConfigError| Failure::Config(e.to_string());
    let (mut cfg, default_out) = match (&args.preset, &args.config) {
        (Some(name), _) => (ExperimentConfig::preset(name).map_err(cfg_err)?, PathBuf::from(format!("{name}.csv"))),
        (None, Some(path)) => (ExperimentConfig::from_file(path).map_err(cfg_err)?, PathBuf::from("out.csv")),
        (None, None) => return Err(Failure::Config("either --preset or --config is required".into())),
    };
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output_path.clone())
        .unwrap_or(default_out);
    let violations = cfg.validate();
    if !violations.is_empty() {
        return Err(Failure::Config(ConfigError::Invalid(violations).to_string()));
    }
    Ok((cfg, out))
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let (cfg, out) = load(&args)?;
    let engine = Engine::from_env().map_err(|e| Failure::Config(e.to_string()))?;
    let rows = experiment::run(&cfg, &engine).map_err(|e| Failure::Runtime(e.to_string()))?;
    experiment::write_csv(&rows, &out).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", out.display())))?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn validate(path: PathBuf) -> Result<(), Failure> {
    let cfg = ExperimentConfig::from_file(&path).map_err(|e| Failure::Config(e.to_string()))?;
    let violations = cfg.validate();
    if violations.is_empty() {
        println!("{}: ok", path.display());
        Ok(())
    } else {
        for v in &violations {
            println!("{v}");
        }
        Err(Failure::Config(format!("{} violation(s)", violations.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Validate { config } => validate(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
