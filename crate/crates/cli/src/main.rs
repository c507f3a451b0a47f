//! `anneal-emu`: seeded experiments over QAOA and clipped-polynomial
//! annealing schedules.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 violated emulation
//! guarantee, 3 optimizer failure.

mod commands;
mod out;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use anneal_emu::optimize::Method;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] anneal_emu::Error),
    #[error("emulation guarantee violated: {0}")]
    Guarantee(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Guarantee(_) => 2,
            CliError::Core(e) => match e {
                anneal_emu::Error::Optimizer(_) | anneal_emu::Error::NonFiniteObjective { .. } => 3,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "anneal-emu", version, about = "QAOA and polynomial-schedule emulation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write every connected graph on n nodes (up to isomorphism) as an edge list.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bootstrap QAOA depth by depth and write the schedules.
    QaoaOpt {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OptionalOut,
    },
    /// Optimize a clipped polynomial schedule with 2p coefficients at fixed time.
    PolyOpt {
        #[command(flatten)]
        run: RunArgs,
        /// Annealing time.
        #[arg(long)]
        tf: f64,
        #[command(flatten)]
        out: OptionalOut,
    },
    /// Emulation factor of the depth-p QAOA schedule.
    Emulate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OptionalOut,
    },
    /// Mean and spread of polynomial approximation ratios over ER(n, 0.7) instances.
    Sweep {
        /// JSON file with optional axes `n`, `p`, `t_f`, `method` and
        /// `instances`; missing or empty axes fall back to n=5, p=2, t_f=1.2,
        /// powell, 10 instances.
        spec: Option<PathBuf>,
        #[arg(long, env = "ANNEAL_EMU_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Worker threads across instances.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: OptionalOut,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Product-formula steps for polynomial schedules.
    #[arg(long, default_value_t = 1001)]
    steps: usize,
    /// Falls back to ANNEAL_EMU_SEED.
    #[arg(long, env = "ANNEAL_EMU_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = Method::Powell)]
    method: Method,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Optimizer function tolerance; for `emulate`, the majorization slack.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long)]
    out: PathBuf,
    /// Write into a non-empty output directory.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct OptionalOut {
    /// Output directory; results go to stdout only when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Enumerate { n, out } => commands::enumerate(n, &out.out, out.force),
        Command::QaoaOpt { run, out } => commands::qaoa_opt(&run, out.out.as_deref(), out.force),
        Command::PolyOpt { run, tf, out } => commands::poly_opt(&run, tf, out.out.as_deref(), out.force),
        Command::Emulate { run, out } => commands::emulate(&run, out.out.as_deref(), out.force),
        Command::Sweep {
            spec,
            seed,
            steps,
            restarts,
            tol,
            jobs,
            out,
        } => sweep::run(
            spec.as_deref(),
            &sweep::SweepSettings {
                seed: seed.ok_or_else(|| CliError::Usage("sweep needs --seed or ANNEAL_EMU_SEED".into()))?,
                steps,
                restarts,
                tol,
                jobs,
            },
            out.out.as_deref(),
            out.force,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("anneal-emu: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
