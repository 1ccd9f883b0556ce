use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod commands;
mod config;
mod plot;

use config::RunConfig;

/// Invalid or inconsistent configuration (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Number of failed self-checks (exit code 4).
#[derive(Debug)]
pub struct OracleFailure(pub usize);

impl fmt::Display for OracleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} oracle check(s) failed", self.0)
    }
}

impl std::error::Error for OracleFailure {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Propagate one radical pair and write t, trace, p_S, C.
    Simulate,
    /// Singlet yield over the field angle and the figure of merit δY_S.
    Sweep,
    /// Random-parameter study of δY_S and the mean coherence.
    Ensemble,
    /// Correlations, histograms and exchange bins of an ensemble CSV.
    Analyze,
    /// Compare the numerics against closed-form results.
    Oracle,
}

/// Radical-pair spin dynamics and singlet-triplet coherence.
#[derive(Parser, Debug)]
#[command(name = "radpair", version)]
struct Cli {
    mode: Mode,
    /// TOML config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the ensemble (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated dephasing rates for the ensemble.
    #[arg(long, value_delimiter = ',')]
    kd: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    nphi: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Ensemble CSV for `analyze`.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl Cli {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = &self.kd {
            cfg.kd = v.clone();
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.nphi {
            cfg.n_phi = v;
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = Some(v);
        }
        if let Some(v) = &self.input {
            cfg.input = Some(v.clone());
        }
        Ok(cfg)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use radpair::Error as E;
    if err.downcast_ref::<OracleFailure>().is_some() {
        return 4;
    }
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::Numerical(_)
            | E::Normalization(_)
            | E::DegenerateState(_)
            | E::KrausCompleteness(_)
            | E::UndefinedMeasure(_),
        ) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = cli.config()?;
    match cli.mode {
        Mode::Simulate => commands::simulate(&cfg),
        Mode::Sweep => commands::sweep(&cfg),
        Mode::Ensemble => commands::ensemble(&cfg),
        Mode::Analyze => commands::analyze(&cfg),
        Mode::Oracle => commands::oracle(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
