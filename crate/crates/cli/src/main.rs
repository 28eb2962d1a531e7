//! Batch CLI for multicore-fiber true time delay design and simulation.
//!
//! `mcf-ttdl <kind> --config <file> [--out <dir>]` runs one job and writes
//! its output files into the directory. Exactly one line goes to stderr:
//! `<kind>: <summary>` on success or `<kind>: <error>` on failure.
//!
//! Exit codes: 0 success, 1 a requested validation failed (the report file
//! is still written), 2 bad input (flags, config, or engine rejection),
//! 3 I/O trouble. `MCF_TTDL_THREADS` caps worker threads (0 = all cores;
//! unset = serial).

mod config;
mod emit;
mod fixtures;
mod jobs;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jobs::CliError;

#[derive(Parser)]
#[command(
    name = "mcf-ttdl",
    version,
    about = "Multicore-fiber true time delay toolbox"
)]
struct Cli {
    #[command(subcommand)]
    kind: Kind,
}

#[derive(Args)]
struct CommonArgs {
    /// Config file for this job kind.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Directory for output files (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Write the bundled example configs into --out and exit.
    #[arg(long)]
    fixtures: bool,
}

#[derive(Subcommand)]
enum Kind {
    /// Synthesize the RF magnitude/phase response of a tap set.
    SimulateFilter(CommonArgs),
    /// Tap set of an FBG multicavity device, wavelength or spatial mode.
    TapsFbg(CommonArgs),
    /// Tap set of a dispersion-ramp multicore link at a readout wavelength.
    TapsHetero(CommonArgs),
    /// Check a dispersion-ramp link against operability tolerances.
    ValidateHetero(CommonArgs),
    /// Check an inscription plan against manufacturability limits.
    ValidateInscription(CommonArgs),
    /// Grating spacing that realizes a target free spectral range.
    DesignSpacing(CommonArgs),
    /// Readout wavelength that realizes a target free spectral range.
    DesignWavelength(CommonArgs),
    /// Fit a trench-assisted profile to dispersion targets.
    DesignProfile(CommonArgs),
    /// Solve one profile for effective index and dispersion.
    SolveDispersion(CommonArgs),
}

impl Kind {
    fn split(&self) -> (&'static str, &CommonArgs) {
        match self {
            Kind::SimulateFilter(a) => ("simulate-filter", a),
            Kind::TapsFbg(a) => ("taps-fbg", a),
            Kind::TapsHetero(a) => ("taps-hetero", a),
            Kind::ValidateHetero(a) => ("validate-hetero", a),
            Kind::ValidateInscription(a) => ("validate-inscription", a),
            Kind::DesignSpacing(a) => ("design-spacing", a),
            Kind::DesignWavelength(a) => ("design-wavelength", a),
            Kind::DesignProfile(a) => ("design-profile", a),
            Kind::SolveDispersion(a) => ("solve-dispersion", a),
        }
    }
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var("MCF_TTDL_THREADS") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Input(format!(
                "MCF_TTDL_THREADS must be a non-negative integer (0 = all cores), got '{v}'"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(CliError::Input(format!("MCF_TTDL_THREADS: {e}"))),
    }
}

fn run(kind: &str, args: &CommonArgs) -> Result<String, CliError> {
    let threads = threads_from_env()?;

    if args.out.exists() && !args.out.is_dir() {
        return Err(CliError::Io(format!(
            "--out {} exists and is not a directory",
            args.out.display()
        )));
    }
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", args.out.display())))?;

    if args.fixtures {
        if args.config.is_some() {
            return Err(CliError::Input(
                "pass either --config or --fixtures, not both".into(),
            ));
        }
        let n = fixtures::write_all(&args.out)?;
        return Ok(format!(
            "ok wrote {n} fixture configs to {}",
            args.out.display()
        ));
    }

    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Input("missing --config <file> (or use --fixtures)".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    jobs::run(kind, &text, &args.out, threads)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.kind.split();
    match run(kind, args) {
        Ok(summary) => {
            eprintln!("{kind}: {summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{kind}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
