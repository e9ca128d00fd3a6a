//! Command-line front end: TOML run configuration, subcommands for each
//! experiment and plot-ready CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Format, RunConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cavmag", version, about = "Cavity-enhanced spinor-BEC magnetometer simulator")]
pub struct Cli {
    /// TOML run configuration; defaults are used for missing keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans, ensembles and repetitions.
    #[arg(long, global = true, env = "CAVMAG_THREADS")]
    pub threads: Option<usize>,
    /// Time-series format (overrides the config).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Ramsey,
    Rabi,
    SingleMode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Deterministic evolution from the configured initial state.
    Simulate,
    /// Ramsey experiment(s) and B∥ estimates.
    Ramsey,
    /// Rabi experiment and B⊥ estimate.
    Rabi,
    /// Stochastic trajectory ensemble with measurement back-action.
    Trajectories,
    /// Deterministic evolution over the values of the `[scan]` section.
    Scan {
        /// Parameter to scan (overrides the config).
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated values (overrides the config).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
    /// Closed-form sensitivity bound.
    Sensitivity {
        #[arg(long, value_enum, default_value = "ramsey")]
        scheme: SchemeArg,
    },
    /// Effective couplings from the four-level parameters.
    DeriveParams {
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        omega1: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta1: f64,
        #[arg(long, requires_all = ["omega2", "delta2"])]
        g2: Option<f64>,
        #[arg(long)]
        omega2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta2: Option<f64>,
        /// Bare splitting of the second ground state.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega_g2: f64,
    },
    /// Photon-response regime of Rabi drives, optionally measured.
    Regimes {
        /// Drive frequencies in recoil units (default 0.1, 1, 3 × |Δc|).
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        /// Also extract lag and amplitude from the dynamics.
        #[arg(long)]
        simulate: bool,
        /// Periods analysed per drive when simulating.
        #[arg(long, default_value_t = 10.0)]
        periods: f64,
    },
}

/// Resolves the configuration from file and flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Command::Scan { param, values } = &cli.command {
        if param.is_some() || values.is_some() {
            let mut scan = cfg.scan.clone().unwrap_or(config::ScanSection {
                param: String::new(),
                values: Vec::new(),
            });
            if let Some(p) = param {
                scan.param = p.clone();
            }
            if let Some(v) = values {
                scan.values = v.clone();
            }
            cfg.scan = Some(scan);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one invocation; returns the files written.
pub fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    if let Some(n) = cli.threads {
        // A second initialisation in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Simulate => commands::simulate(&cfg),
        Command::Ramsey => commands::ramsey(&cfg),
        Command::Rabi => commands::rabi(&cfg),
        Command::Trajectories => commands::trajectories(&cfg),
        Command::Scan { .. } => commands::scan(&cfg),
        Command::Sensitivity { scheme } => commands::sensitivity(&cfg, *scheme),
        Command::DeriveParams { g1, omega1, delta1, g2, omega2, delta2, omega_g2 } => {
            let second = g2.map(|g| (g, omega2.unwrap_or(0.0), delta2.unwrap_or(0.0)));
            commands::derive_params(&cfg, (*g1, *omega1, *delta1), second, *omega_g2)
        }
        Command::Regimes { omega, simulate, periods } => {
            commands::regimes(&cfg, omega.as_deref(), *simulate, *periods)
        }
    }
}
