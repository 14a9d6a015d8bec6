//! `cflab` command-line front end.
//!
//! Every command writes one JSON report (schema `cf-lab/1`) to stdout or to
//! `--out`, optionally mirrored as `path,value` CSV rows with `--csv`.
//! Exit codes: 0 success, 2 infeasible or violated result, 1 error, 64 usage.

mod commands;
mod config;
mod input;
mod repro;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Settings;

#[derive(Parser, Debug)]
#[command(name = "cflab", version, about = "Finite-dimensional operator theory experiments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// TOML file with defaults; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for grid sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the report as `path,value` CSV rows.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long = "tol-algebraic", global = true)]
    pub tol_algebraic: Option<f64>,
    #[arg(long = "tol-spectral", global = true)]
    pub tol_spectral: Option<f64>,
    #[arg(long = "tol-grid", global = true)]
    pub tol_grid: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One-variable Carathéodory–Fejér problem for a₁z + a₂z².
    Cf1 {
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        /// Unimodular continuation angle; radial scaling when absent.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Two-variable problem with coefficients a10,a01,a20,a11,a02.
    Cf2 {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long = "max-degree", default_value_t = 4)]
        max_degree: usize,
    },
    /// Hankel bracket for the distance from a symbol to H₁.
    Nehari {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    #[command(subcommand)]
    Bounds(BoundsCommand),
    #[command(subcommand)]
    Opspace(OpspaceCommand),
    /// Operator norm of a matrix or sup norm of a polynomial on the torus.
    Norm {
        #[arg(long, conflicts_with = "poly")]
        matrix: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Compares ‖p(T)‖ with sup |p| for a commuting tuple.
    VerifyVn {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// JSON array of square matrices.
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Runs the acceptance suite.
    Repro {
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Ratios ‖p_V(T)‖/‖p_V‖ for type I triples.
    C2,
    /// Minimal Σ⟨xᵢ, xⱼ⟩ over m unit vectors in ℝⁿ.
    Minips {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Largest ℓ∞→ℓ¹ norm of Hessians of sampled maps.
    D2probe {
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// ℓ∞→ℓ¹ norm of a matrix.
    L1norm {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum OpspaceCommand {
    /// Tensor norm against MIN norm for the two reflections.
    Demo,
    /// Scalars that no finite angle set norms isometrically.
    Refute {
        #[arg(long)]
        thetas: PathBuf,
    },
    /// MIN norm of Σ eᵢ ⊗ Aᵢ.
    Minnorm {
        #[arg(long)]
        matrices: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let settings = Settings::resolve(&cli.global)?;
    if let Some(n) = settings.threads {
        cflab::configure_threads(n)?;
    }
    let report = match cli.command {
        Command::Cf1 { a1, a2, theta } => commands::cf1(&settings, &a1, &a2, theta)?,
        Command::Cf2 { coeffs, max_degree } => commands::cf2(&settings, &coeffs, max_degree)?,
        Command::Nehari { symbol, budget } => commands::nehari(&settings, &symbol, budget)?,
        Command::Bounds(b) => match b {
            BoundsCommand::C2 => commands::bounds_c2(&settings)?,
            BoundsCommand::Minips { m, n, restarts } => commands::bounds_minips(&settings, m, n, restarts)?,
            BoundsCommand::D2probe { samples } => commands::bounds_d2probe(&settings, samples)?,
            BoundsCommand::L1norm { matrix } => commands::bounds_l1norm(&settings, &matrix)?,
        },
        Command::Opspace(o) => match o {
            OpspaceCommand::Demo => commands::opspace_demo(&settings)?,
            OpspaceCommand::Refute { thetas } => commands::opspace_refute(&settings, &thetas)?,
            OpspaceCommand::Minnorm { matrices } => commands::opspace_minnorm(&settings, &matrices)?,
        },
        Command::Norm { matrix, poly } => commands::norm(&settings, matrix.as_deref(), poly.as_deref())?,
        Command::VerifyVn { poly, tuple } => commands::verify_vn(&settings, &poly, &tuple)?,
        Command::Repro { suite } => repro::run(&settings, &suite)?,
    };
    report.emit(&settings)?;
    Ok(report.exit_code())
}
