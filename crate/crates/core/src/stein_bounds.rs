//! Finite-size bounds on the optimal type-II error exponent.
//!
//! For a composite null `𝒩`, alternative `σ` and type-I threshold `ε`,
//!
//! ```text
//! (1/n) log β_ε(𝒩‖σ^{⊗n}) ∈ [stein_lower(n), stein_upper(n)],
//! ```
//!
//! both converging to `-D₁(𝒩‖σ) = -min_ρ D₁(ρ‖σ)`. The single-pair bounds
//! `amv_upper`/`amv_lower` are the ingredients of the composite ones.

use rayon::prelude::*;

use crate::covering_net::{build_net, delta_schedule};
use crate::divergence::{binary_entropy, d_old, d_umegaki, kappa};
use crate::error::{Error, Result};
use crate::hermitian::{support_leq, State};
use crate::np_oracle::beta_tensor_power;
use crate::scalar::{from_usize, lit, to_f64, tol, Real};

/// A composite null pool, an alternative and a type-I threshold.
#[derive(Clone, Debug)]
pub struct HypothesisInstance<T> {
    null_pool: Vec<State<T>>,
    sigma: State<T>,
    epsilon: T,
    is_finite_family: bool,
    relative_entropies: Vec<T>,
    kappas: Vec<T>,
}

impl<T: Real> HypothesisInstance<T> {
    /// Fails unless every pool state is supported inside `supp σ`.
    pub fn new(null_pool: Vec<State<T>>, sigma: State<T>, epsilon: T, is_finite_family: bool) -> Result<Self> {
        if null_pool.is_empty() {
            return Err(Error::EmptyPool);
        }
        check_epsilon(epsilon)?;
        for rho in &null_pool {
            if rho.dim() != sigma.dim() {
                return Err(Error::DimensionMismatch {
                    expected: sigma.dim(),
                    found: rho.dim(),
                });
            }
            if !support_leq(rho, &sigma)? {
                return Err(Error::SupportViolation);
            }
        }
        let relative_entropies = null_pool
            .iter()
            .map(|rho| d_umegaki(rho, &sigma).map(|d| d.to_real()))
            .collect::<Result<Vec<_>>>()?;
        let kappas = null_pool
            .iter()
            .map(|rho| kappa(rho, &sigma))
            .collect::<Result<Vec<_>>>()?;
        let instance = Self {
            null_pool,
            sigma,
            epsilon,
            is_finite_family,
            relative_entropies,
            kappas,
        };
        let (k, bound) = (instance.kappa_max(), instance.kappa_bound());
        if k > bound + tol::<T>(1e-9) * bound.max(T::one()) {
            return Err(Error::KappaBound {
                kappa: to_f64(k),
                bound: to_f64(bound),
            });
        }
        Ok(instance)
    }

    pub fn null_pool(&self) -> &[State<T>] {
        &self.null_pool
    }

    pub fn sigma(&self) -> &State<T> {
        &self.sigma
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn is_finite_family(&self) -> bool {
        self.is_finite_family
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    /// `D₁(𝒩‖σ) = min_ρ D₁(ρ‖σ)` over the pool.
    pub fn d1_inf(&self) -> T {
        self.relative_entropies.iter().copied().fold(T::infinity(), T::min)
    }

    /// `max_ρ κ(ρ, σ)` over the pool.
    pub fn kappa_max(&self) -> T {
        self.kappas.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// `log(2 + Tr σ^{-1/2})`, an upper bound on `κ` for any state in `supp σ`.
    pub fn kappa_bound(&self) -> T {
        let inv_sqrt = self
            .sigma
            .psd_eig()
            .map(|e| e.trace_on_support(|x| x.powf(lit(-0.5))))
            .unwrap_or(T::infinity());
        (lit::<T>(2.0) + inv_sqrt).ln()
    }
}

fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidEpsilon(to_f64(epsilon)));
    }
    Ok(())
}

/// `D₁(𝒩‖σ)`; see [`HypothesisInstance::d1_inf`].
pub fn d1_inf<T: Real>(instance: &HypothesisInstance<T>) -> T {
    instance.d1_inf()
}

/// `κ_max`; see [`HypothesisInstance::kappa_max`].
pub fn kappa_max<T: Real>(instance: &HypothesisInstance<T>) -> T {
    instance.kappa_max()
}

/// Upper bound on `log β_ε(ρ‖σ)` for one copy:
/// `-D_α(ρ‖σ) + α/(1-α) log ε⁻¹ - h₂(α)/(1-α)` with the traditional `D_α`.
pub fn amv_upper<T: Real>(rho: &State<T>, sigma: &State<T>, epsilon: T, alpha: T) -> Result<T> {
    check_epsilon(epsilon)?;
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidAlpha(to_f64(alpha)));
    }
    let d = d_old(rho, sigma, alpha)?.to_real();
    let one_minus = T::one() - alpha;
    Ok(-d + alpha / one_minus * (-epsilon.ln()) - binary_entropy(alpha) / one_minus)
}

/// Lower bound on `(1/n) log β_ε(ρ^{⊗n}‖σ^{⊗n})`:
/// `-D₁(ρ‖σ) - 4√2 κ log(1-ε)⁻¹ / √n`.
pub fn amv_lower<T: Real>(rho: &State<T>, sigma: &State<T>, epsilon: T, n: usize) -> Result<T> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    let k = kappa(rho, sigma)?;
    let d1 = d_umegaki(rho, sigma)?.to_real();
    Ok(-d1 - correction(k, epsilon, n))
}

/// `4√2 κ log(1-ε)⁻¹ / √n`.
fn correction<T: Real>(kappa: T, epsilon: T, n: usize) -> T {
    lit::<T>(4.0) * T::SQRT_2() * kappa * (-(T::one() - epsilon).ln()) / from_usize::<T>(n).sqrt()
}

/// Parameters of the upper-bound derivation at a given `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleParams<T> {
    /// `L = log(2|𝒩_δ| ε⁻¹)`.
    pub log_term: T,
    pub c: T,
    pub cosh_c: T,
    pub a_star: T,
    /// `a*/√n`, the step the derivation needs to be at most `min(1/2, c/(2κ_max))`.
    pub ratio: T,
    pub limit: T,
}

impl<T: Real> ScheduleParams<T> {
    pub fn feasible(&self) -> bool {
        self.ratio <= self.limit
    }
}

/// Computes `c` from `cosh c = 2 + L/n` and
/// `a* = √L [4κ_max² cosh c + log d + D₁]^{-1/2}`; the result is returned
/// whether or not the feasibility conditions hold.
pub fn schedule_params_unchecked<T: Real>(
    n: usize,
    net_size: T,
    epsilon: T,
    kappa_max: T,
    log_dim: T,
    d1: T,
) -> Result<ScheduleParams<T>> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    if !(net_size >= T::one()) {
        return Err(Error::EmptyPool);
    }
    let two = lit::<T>(2.0);
    let log_term = (two * net_size / epsilon).ln();
    let nf = from_usize::<T>(n);
    let cosh_c = two + log_term / nf;
    let c = cosh_c.acosh();
    let a_star = log_term.sqrt() / (lit::<T>(4.0) * kappa_max * kappa_max * cosh_c + log_dim + d1).sqrt();
    Ok(ScheduleParams {
        log_term,
        c,
        cosh_c,
        a_star,
        ratio: a_star / nf.sqrt(),
        limit: (T::one() / two).min(c / (two * kappa_max)),
    })
}

/// [`schedule_params_unchecked`] for an instance, failing when `a*/√n` exceeds its limit.
pub fn schedule_params<T: Real>(instance: &HypothesisInstance<T>, n: usize, net_size: usize) -> Result<ScheduleParams<T>> {
    let p = schedule_params_unchecked(
        n,
        from_usize(net_size),
        instance.epsilon,
        instance.kappa_max(),
        from_usize::<T>(instance.dim()).ln(),
        instance.d1_inf(),
    )?;
    if !p.feasible() {
        return Err(Error::ScheduleInfeasible {
            ratio: to_f64(p.ratio),
            limit: to_f64(p.limit),
        });
    }
    Ok(p)
}

/// `-D₁ + √(L/n)·2[8κ_max² + log d + D₁]^{1/2} + (L/n)·4κ_max` with `L = log(2|𝒩_δ|ε⁻¹)`.
pub fn stein_upper_formula<T: Real>(d1: T, kappa_max: T, log_dim: T, epsilon: T, n: usize, net_size: T) -> T {
    let two = lit::<T>(2.0);
    let l = (two * net_size / epsilon).ln() / from_usize::<T>(n);
    -d1 + l.sqrt() * two * (lit::<T>(8.0) * kappa_max * kappa_max + log_dim + d1).sqrt()
        + l * lit::<T>(4.0) * kappa_max
}

/// Upper bound at one `n`, raw and clamped at 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBound<T> {
    pub raw: T,
    pub clamped: T,
    pub net_size: usize,
    /// False when the derivation's step conditions fail at this `n`; the value is then heuristic.
    pub schedule_feasible: bool,
}

/// Net size entering the bound: the deduplicated pool for a finite family,
/// otherwise a `δ_n`-net of the pool.
pub fn net_size<T: Real>(instance: &HypothesisInstance<T>, delta_n: T) -> Result<usize> {
    let delta = if instance.is_finite_family { T::zero() } else { delta_n };
    Ok(build_net(&instance.null_pool, delta)?.len())
}

pub fn stein_upper<T: Real>(instance: &HypothesisInstance<T>, n: usize, delta_n: T) -> Result<UpperBound<T>> {
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    if delta_n < T::zero() || delta_n.is_nan() {
        return Err(Error::NegativeDelta(to_f64(delta_n)));
    }
    let max = instance.epsilon / (lit::<T>(2.0) * from_usize::<T>(n));
    if delta_n > max {
        return Err(Error::DeltaOutOfRange {
            delta: to_f64(delta_n),
            max: to_f64(max),
        });
    }
    let size = net_size(instance, delta_n)?;
    let schedule_feasible = match schedule_params(instance, n, size) {
        Ok(_) => true,
        Err(Error::ScheduleInfeasible { .. }) => false,
        Err(e) => return Err(e),
    };
    let raw = stein_upper_formula(
        instance.d1_inf(),
        instance.kappa_max(),
        from_usize::<T>(instance.dim()).ln(),
        instance.epsilon,
        n,
        from_usize(size),
    );
    Ok(UpperBound {
        raw,
        clamped: raw.min(T::zero()),
        net_size: size,
        schedule_feasible,
    })
}

/// `-D₁(𝒩‖σ) - 4√2 log(1-ε)⁻¹ κ_max / √n`.
pub fn stein_lower<T: Real>(instance: &HypothesisInstance<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    Ok(-instance.d1_inf() - correction(instance.kappa_max(), instance.epsilon, n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub n: usize,
    pub lower: T,
    pub upper_raw: T,
    pub upper_clamped: T,
    /// `(1/n) log β_ε` over the pool, when requested and within the memory cap.
    pub exact: Option<T>,
    /// Whether the exact value carries a closed duality gap.
    pub exact_certified: bool,
    /// Set when `exact` was requested but `dim^n` exceeded the cap.
    pub cap_exceeded: bool,
    pub d1: T,
    pub kappa_max: T,
    pub net_size: usize,
    pub schedule_feasible: bool,
}

/// One report per `n`, evaluated in parallel and returned in input order.
pub fn bound_sweep<T: Real>(
    instance: &HypothesisInstance<T>,
    n_list: &[usize],
    with_exact: bool,
    cap: usize,
) -> Result<Vec<BoundReport<T>>> {
    bound_sweep_with_delta(instance, n_list, with_exact, cap, None)
}

/// [`bound_sweep`] with `δ_n` fixed to `delta` for every `n` instead of the default schedule.
pub fn bound_sweep_with_delta<T: Real>(
    instance: &HypothesisInstance<T>,
    n_list: &[usize],
    with_exact: bool,
    cap: usize,
    delta: Option<T>,
) -> Result<Vec<BoundReport<T>>> {
    n_list
        .par_iter()
        .map(|&n| bound_report(instance, n, with_exact, cap, delta))
        .collect()
}

fn bound_report<T: Real>(
    instance: &HypothesisInstance<T>,
    n: usize,
    with_exact: bool,
    cap: usize,
    delta: Option<T>,
) -> Result<BoundReport<T>> {
    let delta = match delta {
        Some(d) => d,
        None => delta_schedule(instance.epsilon, n, instance.is_finite_family)?,
    };
    let upper = stein_upper(instance, n, delta)?;
    let lower = stein_lower(instance, n)?;
    let (mut exact, mut exact_certified, mut cap_exceeded) = (None, false, false);
    if with_exact {
        match beta_tensor_power(&instance.null_pool, &instance.sigma, instance.epsilon, n, cap) {
            Ok(sol) => {
                exact = Some(sol.beta().ln() / from_usize::<T>(n));
                exact_certified = sol.certified;
            }
            Err(Error::DimensionCap { .. }) => cap_exceeded = true,
            Err(e) => return Err(e),
        }
    }
    Ok(BoundReport {
        n,
        lower,
        upper_raw: upper.raw,
        upper_clamped: upper.clamped,
        exact,
        exact_certified,
        cap_exceeded,
        d1: instance.d1_inf(),
        kappa_max: instance.kappa_max(),
        net_size: upper.net_size,
        schedule_feasible: upper.schedule_feasible,
    })
}
