use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rexi_harness::commands::approx::{cmd_approx, ApproxArgs};
use rexi_harness::commands::compare::cmd_compare;
use rexi_harness::commands::eig::cmd_eig;
use rexi_harness::commands::stability::{cmd_stability, Grid, StabilityArgs};
use rexi_harness::commands::tunnel::cmd_tunnel;
use rexi_harness::Result;

#[derive(Parser)]
#[command(
    name = "rexi",
    version,
    about = "Faber-CF REXI experiments for the 1D Schroedinger equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Faber-CF approximation of exp on i[-R1, R1] and write it as JSON.
    Approx {
        #[arg(long)]
        r1: f64,
        #[arg(long, default_value_t = 16)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stabilize: Option<f64>,
        #[arg(long, default_value_t = rexi_core::approx::faber::DEFAULT_CONTOUR_RHO)]
        contour_rho: f64,
        #[arg(long, default_value_t = rexi_core::approx::faber::DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Sample |r(z)| - 1 on a grid and along the imaginary axis.
    Stability {
        #[arg(long)]
        approx: PathBuf,
        /// reLo,reHi,imLo,imHi,nRe,nIm
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 20001)]
        axis_samples: usize,
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Run the tunneling experiment and write density snapshots.
    Tunnel {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare propagators against a reference solution.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "rexi,chebyshev")]
        methods: String,
        #[arg(long, default_value = "fine")]
        reference: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Estimate the spectral radius of M and the largest admissible step.
    Eig {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Approx {
            r1,
            degree,
            out: path,
            stabilize,
            contour_rho,
            truncation,
        } => {
            let args = ApproxArgs {
                r1,
                degree,
                out: path,
                stabilize,
                contour_rho,
                truncation,
            };
            cmd_approx(&args, &mut out).map(|_| ())
        }
        Command::Stability {
            approx,
            grid,
            axis_samples,
            out_prefix,
        } => {
            let args = StabilityArgs {
                approx,
                grid: grid.parse::<Grid>()?,
                axis_samples,
                out_prefix,
            };
            cmd_stability(&args, &mut out).map(|_| ())
        }
        Command::Tunnel {
            config,
            out_dir,
            workers,
        } => cmd_tunnel(&config, &out_dir, workers, &mut out).map(|_| ()),
        Command::Compare {
            config,
            methods,
            reference,
            out: path,
            workers,
        } => cmd_compare(&config, &methods, &reference, &path, workers, &mut out).map(|_| ()),
        Command::Eig { config } => cmd_eig(&config, &mut out).map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
