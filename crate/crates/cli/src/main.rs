//! `covhalg`: build groups from description files, list characters and
//! invariant characters, and run the covariant-algebra checks.

mod bench;
mod continuum;
mod groupspec;
mod listing;
mod output;
mod verify;
mod wh;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use crate::continuum::ContinuumGroup;
use crate::output::Format;
use crate::verify::{RunArgs, VerifyRequest};
use crate::wh::{OracleArgs, WhParams};

#[derive(Parser, Debug)]
#[command(name = "covhalg", version, about = "Covariant convolution algebras of invariant characters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Io {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file, written atomically; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every character of N.
    Characters {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        io: Io,
    },
    /// List the G-invariant characters of N and cross-check two criteria.
    Invariant {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        io: Io,
    },
    /// Run the identity suite; exits 1 if any property fails.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Only the character at this position of Gamma(G,N).
        #[arg(long)]
        xi: Option<usize>,
        /// Use a character that is not invariant (negative control).
        #[arg(long)]
        corrupt_xi: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weyl–Heisenberg closed forms.
    Wh {
        #[command(subcommand)]
        command: WhCommand,
    },
    /// Quadrature checks on continuous groups.
    Continuum {
        #[command(subcommand)]
        command: ContinuumCommand,
    },
    /// Time covariant convolutions on finite Heisenberg groups or a given group.
    Bench {
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Heisenberg sizes M, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [2usize, 4, 8])]
        sizes: Vec<usize>,
        /// Convolutions per timed run.
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Timed runs per size, for the spread.
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct WhArgs {
    #[arg(long = "M")]
    m: usize,
    /// Degree of the character z -> z^n.
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Use N = L^ x T with the character (ω, z) -> ω(y) z^n.
    #[arg(long)]
    y: Option<usize>,
}

impl From<WhArgs> for WhParams {
    fn from(a: WhArgs) -> Self {
        WhParams { m: a.m, n: a.n, y: a.y }
    }
}

#[derive(Subcommand, Debug)]
enum WhCommand {
    /// Random covariant data in the CSV layout.
    Random {
        #[command(flatten)]
        p: WhArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form convolution of two CSV inputs.
    Convolve {
        #[command(flatten)]
        p: WhArgs,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form involution of a CSV input.
    Involve {
        #[command(flatten)]
        p: WhArgs,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant characters (y, n) with |n| <= nmax.
    Gamma {
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        nmax: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Closed-form centre convolution against circle quadrature.
    Oracle {
        #[arg(long = "M")]
        m: usize,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Degree of the random trigonometric polynomials.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Quadrature points on the circle.
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ContinuumCommand {
    /// Refinement table at resolution/4, resolution/2 and resolution.
    Verify {
        #[arg(long, value_enum)]
        group: ContinuumGroup,
        /// Reference intervals per axis (default 64 for h1, 256 for affine).
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Io,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("COVHALG_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("COVHALG_THREADS={v} is not a number"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Characters { spec, io } => listing::characters(&spec, io.format, io.out.as_deref()).map(|_| true),
        Command::Invariant { spec, io } => listing::invariant(&spec, io.format, io.out.as_deref()),
        Command::Verify { spec, run, xi, corrupt_xi, format, out } => verify::verify(VerifyRequest {
            spec: &spec,
            run,
            xi,
            corrupt_xi,
            format,
            out: out.as_deref(),
        }),
        Command::Wh { command } => match command {
            WhCommand::Random { p, seed, out } => wh::random(p.into(), seed, out.as_deref()).map(|_| true),
            WhCommand::Convolve { p, psi, phi, out } => wh::convolve(p.into(), &psi, &phi, out.as_deref()).map(|_| true),
            WhCommand::Involve { p, psi, out } => wh::involve(p.into(), &psi, out.as_deref()).map(|_| true),
            WhCommand::Gamma { m, nmax, io } => wh::gamma(m, nmax, io.format, io.out.as_deref()).map(|_| true),
            WhCommand::Oracle { m, n, degree, points, trials, seed, out } => wh::oracle(
                OracleArgs { m, n, degree, points, trials, seed },
                out.as_deref(),
            ),
        },
        Command::Continuum { command } => match command {
            ContinuumCommand::Verify { group, resolution, seed, io } => {
                continuum::verify(group, resolution, seed, io.format, io.out.as_deref())
            }
        },
        Command::Bench { spec, sizes, reps, repeats, io } => bench::bench(
            bench::BenchArgs { spec: spec.as_deref(), sizes, reps, repeats },
            io.format,
            io.out.as_deref(),
        )
        .map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
