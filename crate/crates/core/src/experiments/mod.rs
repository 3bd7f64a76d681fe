//! File-driven experiments behind the command-line tool: bound sweeps,
//! oracle runs, net construction and the property-verification suite.
//!
//! Every command returns its output as a string so callers decide where it
//! goes; nothing here prints.

mod format;
pub mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::covering_net::{build_net, cardinality_bound};
use crate::divergence::{divergence, Family};
use crate::error::Error;
use crate::hermitian::{load_operator, random_state_with_rng, seeded_rng, FormatError, State, DEFAULT_DIM_CAP};
use crate::np_oracle::beta_tensor_power;
use crate::stein_bounds::{bound_sweep_with_delta, BoundReport, HypothesisInstance};

pub use format::{format_ext, format_number, SCIENTIFIC_ABOVE, SCIENTIFIC_BELOW, SIGNIFICANT_DIGITS};
pub use verify::{run_verify, PropertyResult, VerifyConfig, VerifyReport};

/// Column order of the sweep CSV.
pub const CSV_HEADER: &str = "n,lower,upper_raw,upper_clamped,exact,d1,kappa_max,net_size,schedule_flag";

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type ExperimentResult<T> = std::result::Result<T, ExperimentError>;

/// Loads an operator file and requires it to be a density operator.
pub fn load_state(path: impl AsRef<Path>) -> ExperimentResult<State<f64>> {
    let path = path.as_ref();
    let op = load_operator::<f64>(path)?;
    State::new(op).map_err(|source| {
        FormatError::Invalid {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

fn load_pool(paths: &[PathBuf]) -> ExperimentResult<Vec<State<f64>>> {
    paths.iter().map(load_state).collect()
}

/// Where the per-`n` net radius comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaChoice {
    /// The pool is the whole (finite) null family; `δ_n = 0`.
    Finite,
    /// The pool samples a continuum family; `δ_n = ε/(2n²)`.
    Schedule,
    /// The pool samples a continuum family; `δ_n` fixed for every `n`.
    Fixed(f64),
}

impl std::str::FromStr for DeltaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "finite" => Ok(DeltaChoice::Finite),
            "auto" | "schedule" => Ok(DeltaChoice::Schedule),
            other => other
                .parse::<f64>()
                .map(DeltaChoice::Fixed)
                .map_err(|_| format!("expected a number, `auto` or `finite`, got `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Null pool files; empty means a random qubit instance drawn from `seed`.
    pub pool: Vec<PathBuf>,
    pub sigma: Option<PathBuf>,
    pub epsilon: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub with_exact: bool,
    pub seed: u64,
    pub delta: DeltaChoice,
    pub out: Option<PathBuf>,
    /// Largest tensor-power dimension handed to the exact oracle.
    pub cap: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pool: Vec::new(),
            sigma: None,
            epsilon: 0.05,
            n_min: 1,
            n_max: 8,
            with_exact: false,
            seed: 0,
            delta: DeltaChoice::Finite,
            out: None,
            cap: DEFAULT_DIM_CAP,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> ExperimentResult<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidEpsilon(self.epsilon).into());
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(ExperimentError::Config(format!(
                "n range {}..={} must be non-empty and start at 1 or above",
                self.n_min, self.n_max
            )));
        }
        if self.pool.is_empty() != self.sigma.is_none() {
            return Err(ExperimentError::Config(
                "--pool and --sigma must be given together".to_string(),
            ));
        }
        if let DeltaChoice::Fixed(d) = self.delta {
            if !(d >= 0.0) {
                return Err(Error::NegativeDelta(d).into());
            }
        }
        Ok(())
    }

    pub fn n_list(&self) -> Vec<usize> {
        (self.n_min..=self.n_max).collect()
    }

    /// The configured instance, or a seeded random qubit instance when no files are given.
    pub fn instance(&self) -> ExperimentResult<HypothesisInstance<f64>> {
        self.validate()?;
        let finite = self.delta == DeltaChoice::Finite;
        let (pool, sigma) = match &self.sigma {
            Some(sigma) => (load_pool(&self.pool)?, load_state(sigma)?),
            None => random_instance(self.seed),
        };
        Ok(HypothesisInstance::new(pool, sigma, self.epsilon, finite)?)
    }
}

/// Two random null states and a random alternative, all full-rank qubits.
pub fn random_instance(seed: u64) -> (Vec<State<f64>>, State<f64>) {
    let mut rng = seeded_rng(seed);
    let pool = (0..2).map(|_| random_state_with_rng(2, &mut rng)).collect();
    (pool, random_state_with_rng(2, &mut rng))
}

/// Sweep CSV plus warnings about rows whose exact value was skipped.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub csv: String,
    pub warnings: Vec<String>,
}

pub fn cmd_sweep(config: &ExperimentConfig) -> ExperimentResult<SweepOutput> {
    let instance = config.instance()?;
    let delta = match config.delta {
        DeltaChoice::Fixed(d) => Some(d),
        _ => None,
    };
    let reports = bound_sweep_with_delta(&instance, &config.n_list(), config.with_exact, config.cap, delta)?;
    Ok(render_sweep(&reports))
}

pub fn render_sweep(reports: &[BoundReport<f64>]) -> SweepOutput {
    let mut csv = String::with_capacity(64 * (reports.len() + 1));
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    let mut warnings = Vec::new();
    for r in reports {
        let exact = r.exact.map(format_number).unwrap_or_default();
        if r.cap_exceeded {
            warnings.push(format!("n={}: tensor-power dimension exceeds the cap, exact left blank", r.n));
        } else if r.exact.is_some() && !r.exact_certified {
            warnings.push(format!("n={}: duality gap not closed, exact is the recovered test's value", r.n));
        }
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            format_number(r.lower),
            format_number(r.upper_raw),
            format_number(r.upper_clamped),
            exact,
            format_number(r.d1),
            format_number(r.kappa_max),
            r.net_size,
            if r.schedule_feasible { "feasible" } else { "heuristic" },
        );
    }
    SweepOutput { csv, warnings }
}

/// Prints one divergence value, `INF` for the `+∞` branch.
pub fn cmd_divergence(rho: &Path, sigma: &Path, family: Family, alpha: f64) -> ExperimentResult<String> {
    let rho = load_operator::<f64>(rho)?;
    let sigma = load_operator::<f64>(sigma)?;
    let value = divergence(family, &rho, &sigma, alpha)?;
    Ok(format_ext(value.finite()))
}

pub fn cmd_net(pool: &[PathBuf], delta: f64) -> ExperimentResult<String> {
    let states = load_pool(pool)?;
    let net = build_net(&states, delta)?;
    let bound = cardinality_bound(states[0].dim(), delta, states.len());
    let members: Vec<String> = net.member_indices.iter().map(|i| i.to_string()).collect();
    Ok(format!(
        "pool_size: {}\nnet_size: {}\nachieved_radius: {}\ncardinality_bound: {}\nmembers: {}\n",
        net.pool_size,
        net.len(),
        format_number(net.achieved_radius),
        format_number(bound),
        members.join(" ")
    ))
}

/// Column order of the oracle CSV.
pub const ORACLE_HEADER: &str = "n,beta,dual_value,gap,alpha_worst,certified,iterations";

/// Exact `β_ε` for each `n` of the configured range.
pub fn cmd_oracle(config: &ExperimentConfig) -> ExperimentResult<String> {
    let instance = config.instance()?;
    let mut out = String::from(ORACLE_HEADER);
    out.push('\n');
    for n in config.n_list() {
        let sol = beta_tensor_power(instance.null_pool(), instance.sigma(), config.epsilon, n, config.cap)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            n,
            format_number(sol.primal_value),
            format_number(sol.dual_value),
            format_number(sol.gap),
            format_number(sol.primal_alpha),
            sol.certified,
            sol.iterations
        );
    }
    Ok(out)
}
