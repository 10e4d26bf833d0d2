//! The `sdr` command-line interface.
//!
//! Standard output carries machine-readable JSON only; diagnostics and
//! progress go to standard error. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal error |
//! | 2 | bad input: missing or malformed file, bad flag, database integrity |
//! | 3 | dot budget unreachable |
//! | 4 | hardware constraint violated (spacing, atom count, basis size) |
//! | 5 | norm drift abort during evolution |
//! | 6 | empty database |
//! | 7 | database build produced zero entries |

mod commands;
pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::SdrError;
use crate::evolution::Method;
use crate::matching::MatchMode;
use crate::pipeline::Thinning;
use crate::rydberg::BasisMode;

pub use config::{Config, CONFIG_ENV};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_HARDWARE: i32 = 4;
pub const EXIT_NORM_DRIFT: i32 = 5;
pub const EXIT_EMPTY_DB: i32 = 6;
pub const EXIT_NO_ENTRIES: i32 = 7;

/// Exit code and short category for an error.
pub fn classify(e: &SdrError) -> (i32, &'static str) {
    match e {
        SdrError::BudgetUnreachable { .. } => (EXIT_BUDGET, "budget"),
        SdrError::Hardware(_) | SdrError::CoincidentAtoms(..) | SdrError::BasisTooLarge(_) => {
            (EXIT_HARDWARE, "hardware")
        }
        SdrError::NormDrift { .. } => (EXIT_NORM_DRIFT, "norm_drift"),
        SdrError::EmptyDatabase => (EXIT_EMPTY_DB, "empty_database"),
        SdrError::NoEntries { .. } => (EXIT_NO_ENTRIES, "no_entries"),
        _ => (EXIT_INPUT, "input"),
    }
}

#[derive(Debug, Parser)]
#[command(name = "sdr", version, about = "Sparse-dot image encoding, Rydberg simulation and Chamfer matching")]
pub struct Cli {
    /// JSON config file (defaults to $SDR_CONFIG when set).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for bitstring sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Machine JSON only: no human text, errors as JSON on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image to dot cloud.
    Encode(EncodeArgs),
    /// Dot cloud to evolved register.
    Simulate(SimulateArgs),
    /// Rank a database against a query.
    Match(MatchArgs),
    /// Build a match database from a directory of images.
    DbBuild(DbBuildArgs),
    /// Validate a database's manifest and checksums.
    DbVerify(DbVerifyArgs),
}

#[derive(Debug, Args, Default)]
pub struct EncodeFlags {
    /// Maximum number of dots.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Relative edge threshold in (0, 1].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Absolute Sobel magnitude threshold (overrides --threshold).
    #[arg(long)]
    pub absolute_threshold: Option<f64>,
    /// Resampling spacing in pixels.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Lower end of the RDP tolerance search, pixels.
    #[arg(long)]
    pub eps_min: Option<f64>,
    /// Upper end of the RDP tolerance search, pixels.
    #[arg(long)]
    pub eps_max: Option<f64>,
    /// Edge thinning before tracing: non_maxima, zhang_suen or none.
    #[arg(long)]
    pub thinning: Option<Thinning>,
}

#[derive(Debug, Args, Default)]
pub struct ProfileFlags {
    /// Usable area width, µm.
    #[arg(long)]
    pub area_width: Option<f64>,
    /// Usable area height, µm.
    #[arg(long)]
    pub area_height: Option<f64>,
    /// Minimum atom spacing, µm.
    #[arg(long)]
    pub min_spacing: Option<f64>,
    #[arg(long)]
    pub max_atoms: Option<usize>,
    /// Van der Waals coefficient, rad/µs·µm⁶.
    #[arg(long)]
    pub c6: Option<f64>,
    /// Peak Rabi frequency, rad/µs.
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Detuning bound, rad/µs.
    #[arg(long)]
    pub delta_abs_max: Option<f64>,
    /// Longest schedule, µs.
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SimulateFlags {
    /// Evolution time, µs.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Time step, µs.
    #[arg(long)]
    pub dt: Option<f64>,
    /// krylov or rk4.
    #[arg(long)]
    pub method: Option<Method>,
    /// full or blockade.
    #[arg(long)]
    pub basis: Option<BasisMode>,
    /// Uniform local-detuning weight in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fail on spacing violations instead of merging atoms.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// PGM or PNG image.
    #[arg(long)]
    pub input: PathBuf,
    /// Dot cloud JSON to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG scatter plot of the dots.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub encode: EncodeFlags,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Dot cloud JSON.
    #[arg(long)]
    pub dots: PathBuf,
    /// Evolved result JSON to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Waveform set JSON (default: adiabatic ramp and sweep).
    #[arg(long)]
    pub waveforms: Option<PathBuf>,
    /// SVG of atoms shaded by Rydberg density.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Atom register JSON to write.
    #[arg(long)]
    pub register_out: Option<PathBuf>,
    /// Binary dump of the final state vector.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
    /// Bitstring samples to draw from the final state (uses --seed).
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
    #[command(flatten)]
    pub simulate: SimulateFlags,
    #[command(flatten)]
    pub profile: ProfileFlags,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Dot cloud or evolved result JSON.
    #[arg(long)]
    pub query: PathBuf,
    /// Database directory.
    #[arg(long)]
    pub db: PathBuf,
    /// Number of ranked entries to print.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    /// geometry or density_weighted.
    #[arg(long)]
    pub mode: Option<MatchMode>,
}

#[derive(Debug, Args)]
pub struct DbBuildArgs {
    /// Directory of PGM/PNG images.
    #[arg(long)]
    pub images: PathBuf,
    /// Database directory to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also evolve every entry so density-weighted matching works.
    #[arg(long)]
    pub evolve: bool,
    #[command(flatten)]
    pub encode: EncodeFlags,
    #[command(flatten)]
    pub simulate: SimulateFlags,
    #[command(flatten)]
    pub profile: ProfileFlags,
}

#[derive(Debug, Args)]
pub struct DbVerifyArgs {
    /// Database directory.
    #[arg(long)]
    pub db: PathBuf,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            if json {
                commands::emit_error_json(EXIT_INPUT, "usage", &e.to_string());
            }
            eprint!("{e}");
            return EXIT_INPUT;
        }
    };
    commands::dispatch(cli)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
