use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qstein::divergence::Family;
use qstein::experiments::{
    cmd_divergence, cmd_net, cmd_oracle, cmd_sweep, run_verify, DeltaChoice, ExperimentConfig, VerifyConfig,
};
use qstein::hermitian::DEFAULT_DIM_CAP;

/// Exit status for invalid input (files, flags, numeric preconditions).
const EXIT_INPUT: u8 = 2;
/// Exit status when a verification property fails.
const EXIT_VERIFY: u8 = 1;

#[derive(Parser)]
#[command(name = "qstein", version, about = "Composite quantum hypothesis testing: divergences, Stein bounds, exact oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one divergence between two operator files.
    Divergence {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value = "umegaki")]
        family: Family,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Bound sweep over n as CSV.
    Sweep(InstanceArgs),
    /// Exact optimal type-II error for each n as CSV.
    Oracle(InstanceArgs),
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Extra operator files that must load and round-trip exactly.
        #[arg(long = "pool", num_args = 1..)]
        fixtures: Vec<PathBuf>,
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a trace-norm net over a pool of states.
    Net {
        #[arg(long, num_args = 1.., required = true)]
        pool: Vec<PathBuf>,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Null-hypothesis state files; omit together with --sigma for a random qubit instance.
    #[arg(long, num_args = 1..)]
    pool: Vec<PathBuf>,
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Also compute the exact value from the oracle.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Net radius: a number, `auto` for the ε/(2n²) schedule, or `finite` (pool is the whole family).
    #[arg(long, default_value = "finite")]
    delta: DeltaChoice,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest tensor-power dimension for the exact oracle.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP as u64)]
    cap: u64,
}

impl InstanceArgs {
    fn config(self) -> ExperimentConfig {
        ExperimentConfig {
            pool: self.pool,
            sigma: self.sigma,
            epsilon: self.epsilon,
            n_min: self.n_min,
            n_max: self.n_max,
            with_exact: self.exact,
            seed: self.seed,
            delta: self.delta,
            out: self.out,
            cap: usize::try_from(self.cap).unwrap_or(usize::MAX),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Divergence {
            rho,
            sigma,
            family,
            alpha,
        } => {
            let value = cmd_divergence(&rho, &sigma, family, alpha).map_err(|e| e.to_string())?;
            println!("{value}");
        }
        Command::Sweep(args) => {
            let config = args.config();
            let out = cmd_sweep(&config).map_err(|e| e.to_string())?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            emit(&out.csv, config.out.as_ref())?;
        }
        Command::Oracle(args) => {
            let config = args.config();
            let csv = cmd_oracle(&config).map_err(|e| e.to_string())?;
            emit(&csv, config.out.as_ref())?;
        }
        Command::Verify {
            seed,
            trials,
            mut fixtures,
            rho,
            sigma,
            out,
        } => {
            if trials == 0 {
                return Err("--trials must be at least 1".to_string());
            }
            fixtures.extend(rho);
            fixtures.extend(sigma);
            let report = run_verify(&VerifyConfig { seed, trials, fixtures });
            emit(&report.render(), out.as_ref())?;
            if !report.all_passed() {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        Command::Net { pool, delta, out } => {
            let summary = cmd_net(&pool, delta).map_err(|e| e.to_string())?;
            emit(&summary, out.as_ref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
