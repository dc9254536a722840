use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;

mod commands;
mod error;
mod output;
mod report;

use error::CliError;

#[derive(Parser)]
#[command(name = "emosc", version, about = "Charged anisotropic oscillator in static fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels with their decomposition.
    Spectrum(SpectrumArgs),
    /// Normal-mode frequencies and eigenvectors.
    Modes(SystemArgs),
    /// Ground-state Gaussian parameters and uncertainties.
    Groundstate(SystemArgs),
    /// Planar wave function samples on a grid.
    Wavefunction(WavefunctionArgs),
    /// Coherent-state centers and squeezed-state widths over time.
    Evolve(EvolveArgs),
    /// Analytic vs finite-difference report for a named fixture.
    Oracle(OracleArgs),
    /// Analytic vs finite-difference report for a system file; exits 1 on failure.
    Compare(CompareArgs),
}

#[derive(Args)]
pub struct SystemArgs {
    /// System file with `key = value` lines.
    #[arg(long)]
    pub system: PathBuf,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: SystemArgs,
    /// A single level `n1,n2[,n3[,k]]` instead of a listing.
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<Levels>,
    /// Number of lowest levels to list.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub common: SystemArgs,
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<Levels>,
    /// `nx,ny,Lx,Ly`: points and half-widths around the equilibrium.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridArg>,
}

#[derive(Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: SystemArgs,
    /// Coherent amplitudes of the two modes, `re,im re,im`.
    #[arg(long, num_args = 2, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<Vec<C64>>,
    /// Squeezing parameters of the two modes, `re,im re,im`.
    #[arg(long, num_args = 2, value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeta: Option<Vec<C64>>,
    /// Mode occupations `n1,n2` of the squeezed state.
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<Levels>,
    /// `T,N`: duration and number of samples. Defaults to one slow-mode period.
    #[arg(long, value_parser = parse_time)]
    pub time: Option<(f64, usize)>,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Fixture name.
    #[arg(long)]
    pub fixture: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridArg>,
}

#[derive(Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: SystemArgs,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridArg>,
    /// Only `k` (the fourth entry) is used: the conserved momentum of a
    /// tilted field or the Landau plane wave.
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<Levels>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Levels {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn count(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

fn parse_levels(s: &str) -> Result<Levels, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if !(2..=4).contains(&parts.len()) {
        return Err("expected n1,n2[,n3[,k]]".into());
    }
    let q = |i: usize| -> Result<u32, String> {
        parts.get(i).map_or(Ok(0), |p| p.trim().parse().map_err(|_| format!("`{p}` is not a quantum number")))
    };
    Ok(Levels {
        n1: q(0)?,
        n2: q(1)?,
        n3: q(2)?,
        k: parts.get(3).map_or(Ok(0.0), |p| finite(p))?,
    })
}

fn parse_grid(s: &str) -> Result<GridArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected nx,ny,Lx,Ly".into());
    }
    Ok(GridArg {
        nx: count(parts[0])?,
        ny: count(parts[1])?,
        lx: finite(parts[2])?,
        ly: finite(parts[3])?,
    })
}

fn parse_complex(s: &str) -> Result<C64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(finite(re)?, finite(im)?)),
        None => Err("expected re,im".into()),
    }
}

fn parse_time(s: &str) -> Result<(f64, usize), String> {
    match s.split_once(',') {
        Some((t, n)) => Ok((finite(t)?, count(n)?)),
        None => Err("expected T,N".into()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Modes(a) => commands::modes(&a),
        Command::Groundstate(a) => commands::groundstate(&a),
        Command::Wavefunction(a) => commands::wavefunction(&a),
        Command::Evolve(a) => commands::evolve(&a),
        Command::Oracle(a) => report::oracle(&a),
        Command::Compare(a) => report::compare(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("emosc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
