use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use hypersc_cli::commands::{
    self, CertifyArgs, CheckDerivativesArgs, FieldChoice, MebArgs, NewtonDemoArgs, OracleMebArgs,
};

#[derive(Parser)]
#[command(
    name = "hypersc",
    version,
    about = "Geodesically convex optimization on hyperbolic space: derivative checks, \
             self-concordance certification, Newton demos, and minimum enclosing balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    Sqdist,
    BallBarrier,
    MebBarrier,
}

#[derive(Subcommand)]
enum Command {
    /// Verify closed-form derivatives against finite-difference oracles.
    CheckDerivatives {
        /// Manifold dimension (>= 2).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Maximum allowed relative error.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Curvature magnitude.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
    /// Certify self-concordance constants by sampling plus analytic probes.
    CertifySc {
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Largest sampled unit-sheet arc to the pole.
        #[arg(long, default_value_t = 50.0)]
        lmax: f64,
        /// Ball radius; a comma-separated list runs the tightness scan.
        #[arg(long, value_delimiter = ',', default_value = "4.0")]
        radius: Vec<f64>,
        /// Points file for the meb-barrier field (defaults to a built-in
        /// five-point instance).
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Minimize a ball barrier with damped/full Newton and emit the trace.
    NewtonDemo {
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        lambda_target: f64,
        /// Write the per-iteration CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve a minimum-enclosing-ball instance by path following.
    Meb {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 1e-5)]
        epsilon: f64,
        /// Write the per-iteration CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the result JSON here (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance with the farthest-point iteration oracle.
    OracleMeb {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        iters: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::CheckDerivatives {
            dim,
            samples,
            seed,
            tol,
            kappa,
        } => commands::run_check_derivatives(&CheckDerivativesArgs {
            dim,
            samples,
            seed,
            tol,
            kappa,
        }),
        Command::CertifySc {
            field,
            kappa,
            dim,
            samples,
            seed,
            lmax,
            radius,
            points,
        } => {
            let field = match field {
                FieldArg::Sqdist => FieldChoice::Sqdist,
                FieldArg::BallBarrier => FieldChoice::BallBarrier,
                FieldArg::MebBarrier => FieldChoice::MebBarrier,
            };
            commands::run_certify(&CertifyArgs {
                field,
                kappa,
                dim,
                samples,
                seed,
                lmax,
                radius,
                points,
                threads: commands::threads_from_env(),
            })
        }
        Command::NewtonDemo {
            kappa,
            radius,
            dim,
            seed,
            lambda_target,
            trace,
        } => commands::run_newton_demo(&NewtonDemoArgs {
            kappa,
            radius,
            dim,
            seed,
            lambda_target,
            trace,
        }),
        Command::Meb {
            points,
            epsilon,
            trace,
            out,
        } => commands::run_meb(&MebArgs {
            points,
            epsilon,
            trace,
            out,
        }),
        Command::OracleMeb { points, iters, out } => {
            commands::run_oracle_meb(&OracleMebArgs { points, iters, out })
        }
    };
    std::process::exit(code);
}
