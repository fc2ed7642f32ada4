use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twofluid::checks::CheckOptions;
use twofluid_cli::commands::{self, RiemannOptions, Side};
use twofluid_cli::CliError;

/// Two-fluid compressible two-phase flow solver and analysis tools.
#[derive(Debug, Parser)]
#[command(name = "twofluid", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a scenario and write snapshots, diagnostics and a summary.
    Run {
        config: PathBuf,
        /// Output directory (overrides [output] dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenstructure and symmetrizer report for one state.
    Eigen {
        config: PathBuf,
        /// Which initial state to analyse.
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        /// Explicit state `alpha1,rho1,u1,p1,rho2,u2,p2` (fluids from the config).
        #[arg(long, allow_hyphen_values = true)]
        state: Option<String>,
    },
    /// Riemann invariants, jump conditions and admissibility across one wave.
    Riemann {
        config: PathBuf,
        /// Wave family, e.g. interface, contact-1, acoustic-2-minus.
        #[arg(long)]
        wave: String,
        /// Discontinuity speed; defaults to the mass-flux speed.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        /// Construct the right state on the shock curve at this pressure.
        #[arg(long, allow_hyphen_values = true)]
        hugoniot: Option<f64>,
    },
    /// Run the full property suite.
    Check {
        #[arg(long, default_value_t = CheckOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = CheckOptions::default().samples)]
        samples: usize,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let value = std::env::var("TWOFLUID_THREADS").ok();
    if let Some(n) = commands::thread_limit(value.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| twofluid_cli::ConfigError::new(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Run { config, out: dir } => commands::cmd_run(&config, dir.as_deref(), &mut out),
        Command::Eigen { config, side, state } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            commands::cmd_eigen(&config, side, state.as_deref(), &mut out)
        }
        Command::Riemann {
            config,
            wave,
            sigma,
            hugoniot,
        } => commands::cmd_riemann(
            &config,
            &RiemannOptions {
                wave: &wave,
                sigma,
                hugoniot_pressure: hugoniot,
            },
            &mut out,
        ),
        Command::Check { seed, samples } => commands::cmd_check(&CheckOptions { seed, samples }, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
