//! The `holonomy-lab` command line: argument grammar, configuration and the
//! subcommand implementations. `main.rs` only maps the outcome to an exit code.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod format;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{Overrides, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unparsable input; exit code 1.
    Usage(String),
    /// Input was read but failed validation or verification; exit code 2.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failure(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<holonomy::Error> for CliError {
    fn from(e: holonomy::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// What a command produced. A command can print a full report and still
/// fail, as `npc verify` does on a violation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub failed: bool,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            ..Default::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "holonomy-lab",
    version,
    about = "Bargmann invariants, geometric phases, null phase curves and Majorana stars"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags below override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for the randomized self-test.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Samples per generated curve.
    #[arg(long, global = true, value_name = "N")]
    pub grid: Option<usize>,
    /// Points of the verification subgrid.
    #[arg(long, global = true, value_name = "M")]
    pub subgrid: Option<usize>,
    /// Degeneracy threshold for overlaps.
    #[arg(long = "tol-deg", global = true, value_name = "TOL")]
    pub tol_deg: Option<f64>,
    /// Largest accepted relative imaginary part on a null phase curve.
    #[arg(long = "tol-npc", global = true, value_name = "TOL")]
    pub tol_npc: Option<f64>,
    /// Relative size below which top Majorana coefficients count as zero.
    #[arg(long = "tol-lead", global = true, value_name = "TOL")]
    pub tol_lead: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            samples: self.grid,
            subgrid: self.subgrid,
            tol_deg: self.tol_deg,
            tol_npc: self.tol_npc,
            tol_lead: self.tol_lead,
            output: self.output.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    N2,
    N3,
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    N2,
    N3,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bargmann invariant and its phase for a JSON array of states.
    Bi { input: Option<PathBuf> },
    /// The six intrinsic angles of a triad.
    Angles { input: Option<PathBuf> },
    /// Build a canonical triad (or coherent labels) from free parameters.
    Reconstruct {
        #[arg(long, value_enum)]
        space: Space,
        input: Option<PathBuf>,
    },
    /// Closed-form geometric phase from canonical parameters.
    Phase {
        #[arg(long, value_enum)]
        formula: Formula,
        input: Option<PathBuf>,
    },
    /// Majorana roots, stars and reconstruction.
    #[command(subcommand)]
    Majorana(MajoranaCommand),
    /// Null phase curves: generate, verify, loop phase.
    #[command(subcommand)]
    Npc(NpcCommand),
    /// Canonical reduction, Bargmann factors and solid angles of a triad.
    Decompose { input: Option<PathBuf> },
    /// Majorana star pairs along a three-dimensional curve CSV.
    Stars { input: Option<PathBuf> },
    /// Run the acceptance criteria and golden fixtures.
    Selftest {
        /// Only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        /// Skip the golden fixtures.
        #[arg(long)]
        no_golden: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MajoranaCommand {
    /// State JSON to its Majorana representation.
    Roots { input: Option<PathBuf> },
    /// State JSON to star rows `x,y,z`.
    Stars { input: Option<PathBuf> },
    /// Majorana representation JSON back to a normalized state.
    Rebuild { input: Option<PathBuf> },
}

#[derive(Debug, Subcommand)]
pub enum NpcCommand {
    /// Sample a null phase curve as curve CSV.
    Generate {
        /// End point separation θ₀ for the standard frame.
        #[arg(long, required_unless_present = "pair")]
        theta0: Option<f64>,
        /// Deformation strength; 0 gives the geodesic.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// JSON array of two states to connect instead of the standard frame.
        #[arg(long, conflicts_with_all = ["theta0", "dim"])]
        pair: Option<PathBuf>,
    },
    /// Check every three-point Bargmann invariant of a curve CSV on a subgrid.
    Verify { input: Option<PathBuf> },
    /// Geometric phase of a closed loop of curve CSV segments.
    Phase {
        #[arg(required = true)]
        segments: Vec<PathBuf>,
    },
}

/// Reads a file, or stdin for `None` and `-`.
pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn run(cli: &Cli) -> Result<(Outcome, RunConfig), CliError> {
    let cfg = RunConfig::load(cli.global.config.as_deref(), &cli.global.overrides())?;
    let outcome = commands::dispatch(&cli.command, &cfg)?;
    Ok((outcome, cfg))
}
