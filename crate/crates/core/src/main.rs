use clap::{Parser, Subcommand};
use robustl::cli;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "robustl",
    about = "STL monitoring and temporally-robust policy synthesis on grid MDPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a Q-learning policy and write qtable.txt, curve.csv, run.json.
    Train {
        /// Run configuration (JSON; a run.json from a previous run also works).
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a stored Q-table with greedy rollouts.
    Eval {
        /// Q-table written by `train`.
        #[arg(long)]
        qtable: PathBuf,
        /// Run configuration the table was trained under.
        #[arg(long)]
        config: PathBuf,
        /// Number of rollouts.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Report path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-trajectory records as JSON Lines.
        #[arg(long)]
        traces: Option<PathBuf>,
    },
    /// Monitor a CSV signal against a formula at time zero.
    Monitor {
        /// Formula text.
        #[arg(long)]
        formula: String,
        /// Signal CSV (one row per step, one column per dimension).
        #[arg(long)]
        signal: PathBuf,
        /// Delay budget for the robustness indicator.
        #[arg(long, default_value_t = 0)]
        delta: u32,
        /// Config supplying region definitions for `in(...)` atoms.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Cross-check a freshly trained policy against the exact solvers.
    OracleCheck {
        /// Run configuration; the instance must fit the enumeration guards.
        #[arg(long)]
        config: PathBuf,
        /// Evaluation rollouts for the Monte-Carlo comparison.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train { config, out, seed } => cli::cmd_train(&config, &out, seed),
        Command::Eval {
            qtable,
            config,
            n,
            out,
            traces,
        } => cli::cmd_eval(&qtable, &config, n, out.as_deref(), traces.as_deref()),
        Command::Monitor {
            formula,
            signal,
            delta,
            config,
        } => cli::cmd_monitor(&formula, &signal, delta, config.as_deref()),
        Command::OracleCheck { config, n } => cli::cmd_oracle_check(&config, n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
