mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use report::{config_header, render, Format, Status};
use schurcert::acceptance::DEFAULT_SEED;

/// Certificates and checks for Schur multipliers on Schatten classes.
#[derive(Debug, Parser)]
#[command(name = "schurcert", version)]
struct Cli {
    /// Seed of every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Defaults to csv, or text for `certify`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ‖T_m − T_{m−1}‖_p in closed form, its bound and ‖uT_m − vT_{m−1}‖_p.
    Tkdiff(commands::TkdiffArgs),
    /// Cartan invariants of an exact matrix.
    Cartan(commands::CartanArgs),
    /// Increment path from λ^m to λ^{m+1}.
    Path(commands::PathArgs),
    /// Obstruction certificate for a function given on polygons.
    Certify(commands::CertifyArgs),
    /// ‖aT_0 − bT_δ‖_p from the Legendre series.
    LegendreNorm(commands::LegendreNormArgs),
    /// Fitted exponent of ‖T_0 − T_δ‖_p over δ = 2^{−k}.
    Scaling(commands::ScalingArgs),
    /// Decay bound along the chain D(u,u), D(2v−u, 2u−v), D(v,v).
    RealDecay(commands::RealDecayArgs),
    /// Bounds on the multiplier norm of a symbol on S^p.
    Multnorm(commands::MultnormArgs),
    /// Factorization norm of a symbol.
    Gamma2(commands::Gamma2Args),
    /// Runs every acceptance check and prints a pass/fail table.
    Selftest(commands::SelftestArgs),
}

#[derive(Serialize)]
struct Echo<'a, T: Serialize> {
    seed: u64,
    format: Format,
    #[serde(flatten)]
    args: &'a T,
}

impl Cli {
    fn format(&self) -> Format {
        match (self.format, &self.command) {
            (Some(f), _) => f,
            (None, Command::Certify(_)) => Format::Text,
            (None, _) => Format::Csv,
        }
    }
}

fn echo<T: Serialize>(cli: &Cli, args: &T) -> serde_json::Value {
    serde_json::to_value(Echo {
        seed: cli.seed,
        format: cli.format(),
        args,
    })
    .expect("arguments serialize")
}

fn configure_threads() {
    if let Some(n) = std::env::var("SCHURCERT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool built earlier in the process wins, which is harmless here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let seed = cli.seed;
    let (name, params, result) = match &cli.command {
        Command::Tkdiff(a) => ("tkdiff", echo(&cli, a), commands::tkdiff(a)),
        Command::Cartan(a) => ("cartan", echo(&cli, a), commands::cartan(a)),
        Command::Path(a) => ("path", echo(&cli, a), commands::path(a)),
        Command::Certify(a) => ("certify", echo(&cli, a), commands::certify(a)),
        Command::LegendreNorm(a) => ("legendre-norm", echo(&cli, a), commands::legendre_norm(a)),
        Command::Scaling(a) => ("scaling", echo(&cli, a), commands::scaling(a)),
        Command::RealDecay(a) => ("real-decay", echo(&cli, a), commands::real_decay(a)),
        Command::Multnorm(a) => ("multnorm", echo(&cli, a), commands::multnorm(a, seed)),
        Command::Gamma2(a) => ("gamma2", echo(&cli, a), commands::gamma2(a)),
        Command::Selftest(a) => ("selftest", echo(&cli, a), commands::selftest(a, seed)),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("schurcert {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let bytes = match render(&config_header(name, &params), &report, cli.format()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("schurcert {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)
        }
    };
    if let Err(e) = written {
        eprintln!("schurcert {name}: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if report.status != Status::Pass {
        eprintln!("schurcert {name}: {}", match report.status {
            Status::CheckFailed => "a check failed",
            _ => "not converged; partial results written",
        });
    }
    ExitCode::from(report.status.exit_code())
}
