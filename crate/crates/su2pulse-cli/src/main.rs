//! `su2pulse`: composite-pulse simulations of SU(2)-symmetric N-level systems.
//!
//! Subcommands: `simulate` (time-resolved populations), `profile`
//! (robustness scans over pulse-area errors), `majorana` (sphere-point
//! tracks with optional SVG rendering), `solve-phases` (composite phase
//! schedules). Exit codes: 0 success, 2 usage, 3 numeric failure, 4 I/O.

mod config;
mod csv;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use su2pulse::PhaseCache;

use config::{load_config_file, resolve, GridSpec, PartialConfig};
use csv::write_atomic;

const CACHE_ENV: &str = "SU2PULSE_CACHE";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError::Numeric(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<su2pulse::Error> for CliError {
    fn from(e: su2pulse::Error) -> Self {
        use su2pulse::Error::*;
        match e {
            NumericDomain { .. }
            | Eigendecomposition { .. }
            | SolverDidNotConverge { .. }
            | RootsDidNotConverge { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "su2pulse",
    version,
    about = "Composite-pulse population transfer in SU(2)-symmetric N-level systems",
    after_help = "Solved phase schedules are cached in ./su2pulse-phases.json; \
                  set SU2PULSE_CACHE to relocate the cache file."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-resolved level populations (CSV: time,pop_1..pop_N)
    Simulate(RunArgs),
    /// 1→N transfer probability over a grid of area errors (CSV: delta,probability)
    Profile(RunArgs),
    /// Majorana sphere-point tracks (CSV: time,point_index,theta,phi; optional SVG)
    Majorana(RunArgs),
    /// Solve a composite phase schedule and update the cache (CSV: k,phase)
    SolvePhases(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Number of levels N (spin j = (N−1)/2)
    #[arg(long)]
    levels: Option<usize>,
    /// Excitation scheme: single, nmr, broadband, narrowband, passband
    #[arg(long)]
    scheme: Option<String>,
    /// Pulse count M (0 = idle run: free evolution over one time unit)
    #[arg(long)]
    pulses: Option<usize>,
    /// Systematic pulse-area error δ in radians; areas scale by (π+δ)/π
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Pulse envelope: rectangular or gaussian
    #[arg(long)]
    envelope: Option<String>,
    /// Initial basis level (1-based)
    #[arg(long)]
    initial_level: Option<usize>,
    /// Trajectory samples per pulse
    #[arg(long)]
    samples: Option<usize>,
    /// Profile grid MIN:MAX:COUNT in radians over [-pi, pi]
    #[arg(long, value_name = "MIN:MAX:COUNT", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output CSV path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Companion SVG path (majorana subcommand)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// JSON config file; command-line flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit
    #[arg(long)]
    show_config: bool,
}

impl RunArgs {
    fn to_partial(&self) -> Result<PartialConfig, CliError> {
        let grid = match &self.grid {
            Some(text) => Some(GridSpec::parse(text)?),
            None => None,
        };
        Ok(PartialConfig {
            levels: self.levels,
            scheme: self.scheme.clone(),
            pulses: self.pulses,
            delta: self.delta,
            envelope: self.envelope.clone(),
            initial_level: self.initial_level,
            samples: self.samples,
            grid,
            out: self.out.clone(),
            svg: self.svg.clone(),
        })
    }
}

fn cache_path() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("su2pulse-phases.json"))
}

fn emit(contents: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, contents)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let args = match &command {
        Command::Simulate(a) | Command::Profile(a) | Command::Majorana(a)
        | Command::SolvePhases(a) => a,
    };

    let mut partial = PartialConfig::default();
    if let Some(path) = &args.config {
        partial = partial.overridden_by(load_config_file(path)?);
    }
    partial = partial.overridden_by(args.to_partial()?);
    let cfg = resolve(partial)?;

    if args.show_config {
        let text = serde_json::to_string_pretty(&cfg)
            .map_err(|e| CliError::numeric(format!("config serialization failed: {e}")))?;
        println!("{text}");
        return Ok(());
    }

    let cache = PhaseCache::at(cache_path());
    match command {
        Command::Simulate(_) => {
            let doc = run::run_simulate(&cfg, &cache)?;
            emit(&doc.to_csv_string(), cfg.out.as_ref())
        }
        Command::Profile(_) => {
            let doc = run::run_profile(&cfg, &cache)?;
            emit(&doc.to_csv_string(), cfg.out.as_ref())
        }
        Command::Majorana(_) => {
            let (doc, svg_text) = run::run_majorana(&cfg, &cache)?;
            emit(&doc.to_csv_string(), cfg.out.as_ref())?;
            if let (Some(svg_path), Some(text)) = (cfg.svg.as_ref(), svg_text) {
                write_atomic(svg_path, &text).map_err(|e| {
                    CliError::io(format!("cannot write {}: {e}", svg_path.display()))
                })?;
            }
            Ok(())
        }
        Command::SolvePhases(_) => {
            let doc = run::run_solve_phases(&cfg, &cache)?;
            emit(&doc.to_csv_string(), cfg.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports help/version on stdout with code 0 and usage
            // problems on stderr with code 2.
            e.exit();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
