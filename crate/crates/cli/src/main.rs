mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Backend, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input text.
    Usage(String),
    Core(epistrict_core::Error),
    Io(std::io::Error),
}

impl From<epistrict_core::Error> for CliError {
    fn from(e: epistrict_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "epistrict", version, about = "Epistricted quadrature theories, their qudit counterparts and a discretized Moyal product")]
struct Cli {
    /// Config file; defaults to ./epistrict.json when present.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Field {
    /// Odd prime local dimension.
    #[arg(long)]
    d: Option<u64>,
    /// Number of modes.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every pure epistemic state.
    EnumerateStates {
        #[command(flatten)]
        field: Field,
    },
    /// Projectors of a quadrature observable.
    Pvm {
        /// Functional such as `q`, `q+2p` or `q1 - p2`.
        #[arg(long)]
        f: String,
        #[command(flatten)]
        field: Field,
    },
    /// Wigner table of a quantized epistemic state.
    Wigner {
        /// State as JSON, e.g. '{"V":"q","v":0}'.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        field: Field,
    },
    /// Epistricted and quantum measurement of a state.
    Measure {
        #[arg(long)]
        state: String,
        /// Functional spanning the measured set; repeat for joint measurements.
        #[arg(long = "observable", required = true)]
        observables: Vec<String>,
        #[command(flatten)]
        field: Field,
    },
    /// Equivalence checks between the two theories.
    Verify {
        #[command(flatten)]
        field: Field,
        /// Every pure state against every Lagrangian measurement.
        #[arg(long)]
        exhaustive: bool,
        /// Random covariance cases.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        /// Shorthand for `--format csv`.
        #[arg(long)]
        csv: bool,
    },
    /// Continuum star-product checks.
    Moyal {
        #[arg(long, value_enum, default_value_t = Demo::Gaussians)]
        demo: Demo,
        /// Points per grid axis.
        #[arg(long = "N")]
        grid_n: Option<usize>,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Pair-groupoid axioms and the cotangent chart.
    GroupoidCheck {
        #[arg(long)]
        n: Option<usize>,
        /// Random composable triples.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Field size when the backend is prime_field.
        #[arg(long)]
        d: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Demo {
    Gaussians,
}

impl Field {
    fn apply(self, cfg: &mut RunConfig) {
        if let Some(d) = self.d {
            cfg.d = d;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
    }
}

/// A rendered result and whether every check in it passed.
pub struct Report {
    pub body: String,
    pub pass: bool,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(b) = cli.backend {
        cfg.backend = Some(b);
    }
    if cli.format.is_some() {
        cfg.output.format = cli.format;
    }
    if cli.output.is_some() {
        cfg.output.path = cli.output;
    }
    match cli.command {
        Command::EnumerateStates { field } => {
            field.apply(&mut cfg);
            commands::enumerate_states(&cfg)
        }
        Command::Pvm { f, field } => {
            field.apply(&mut cfg);
            commands::pvm(&cfg, &f)
        }
        Command::Wigner { state, field } => {
            field.apply(&mut cfg);
            commands::wigner(&cfg, &state)
        }
        Command::Measure { state, observables, field } => {
            field.apply(&mut cfg);
            commands::measure(&cfg, &state, &observables)
        }
        Command::Verify { field, exhaustive, cases, csv } => {
            field.apply(&mut cfg);
            if csv {
                cfg.output.format = Some(Format::Csv);
            }
            commands::verify(&cfg, exhaustive, cases)
        }
        Command::Moyal { demo: Demo::Gaussians, grid_n, hbar } => {
            if let Some(n) = grid_n {
                cfg.grid.n = n;
            }
            if let Some(h) = hbar {
                cfg.grid.hbar = h;
            }
            commands::moyal(&cfg)
        }
        Command::GroupoidCheck { n, samples, d } => {
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(d) = d {
                cfg.d = d;
            }
            commands::groupoid_check(&cfg, samples)
        }
    }
    .and_then(|report| emit(&cfg, report))
}

fn emit(cfg: &RunConfig, report: Report) -> Result<Report, CliError> {
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &report.body)?,
        None => std::io::stdout().write_all(report.body.as_bytes())?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) if report.pass => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
