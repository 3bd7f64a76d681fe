//! Quantum Rényi divergences.
//!
//! Two families are provided for non-zero positive semidefinite `ρ`, `σ` and
//! `α ∈ (0, ∞) \ {1}`:
//!
//! | family | core quantity `Q_α(ρ‖σ)` |
//! |--------|--------------------------|
//! | [`Family::Old`] (Petz) | `Tr ρ^α σ^{1-α}` |
//! | [`Family::New`] (sandwiched) | `Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α` |
//!
//! with `D_α = (log Q_α - log Tr ρ) / (α - 1)` when `α < 1` or
//! `supp ρ ⊆ supp σ`, and `+∞` otherwise. Both converge to the Umegaki
//! relative entropy as `α → 1`. All logarithms are natural.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{graded_eigenvalues, support_leq, HermitianOperator, Matrix};
use crate::scalar::{lit, to_f64, Real};

/// Which divergence family a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Old,
    New,
    Umegaki,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Old => "old",
            Family::New => "new",
            Family::Umegaki => "umegaki",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "old" => Ok(Family::Old),
            "new" => Ok(Family::New),
            "umegaki" => Ok(Family::Umegaki),
            other => Err(format!("unknown divergence family `{other}` (expected old, new or umegaki)")),
        }
    }
}

/// Extended real: a finite value or the `+∞` branch of the definitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal<T> {
    Finite(T),
    PosInfinity,
}

impl<T: Real> ExtReal<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInfinity)
    }

    /// Floating representation, mapping the sentinel to `T::infinity()`.
    pub fn to_real(self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceValue<T> {
    pub value: ExtReal<T>,
    pub alpha: T,
    pub family: Family,
}

impl<T: Real> DivergenceValue<T> {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    pub fn finite(&self) -> Option<T> {
        self.value.finite()
    }

    pub fn to_real(&self) -> T {
        self.value.to_real()
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || alpha == T::one() || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(to_f64(alpha)));
    }
    Ok(())
}

fn check_pair<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// `Tr ρ^α σ^{1-α}` with powers on supports.
///
/// Evaluated as `Σ λ_i^α μ_j^{1-α} |⟨u_i|v_j⟩|²` over both supports: the
/// overlap error enters squared, whereas a product of reconstructed powers
/// would multiply an absolute error in `ρ^α` by `‖σ^{1-α}‖`.
pub fn q_old<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    check_pair(rho, sigma)?;
    let re = rho.psd_eig()?;
    let se = sigma.psd_eig()?;
    let weighted = |e: &crate::hermitian::EigenDecomposition<T>, power: T| -> Vec<(T, Vec<Complex<T>>)> {
        let t = e.support_threshold();
        (0..e.dim())
            .filter(|&j| e.eigenvalues[j] > t)
            .map(|j| (e.eigenvalues[j].powf(power), e.eigenvector(j)))
            .collect()
    };
    let left = weighted(&re, alpha);
    let right = weighted(&se, T::one() - alpha);
    let mut total = T::zero();
    for (a, u) in &left {
        for (b, v) in &right {
            let overlap: Complex<T> = u.iter().zip(v).map(|(x, y)| x.conj() * *y).sum();
            total = total + *a * *b * overlap.norm_sqr();
        }
    }
    Ok(total)
}

/// `Tr (σ^{(1-α)/2α} ρ σ^{(1-α)/2α})^α` with powers on supports.
///
/// In the eigenbasis of `σ` the sandwiched operator is `G R G` with `G`
/// diagonal and `R` the compression of `ρ` to `supp σ`. Its eigenvalues reach
/// down to about `λ_min^{1/α}`, so they are computed by graded Jacobi, and
/// the rank of `R` (which is well scaled) decides how many are kept.
pub fn q_new<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    check_pair(rho, sigma)?;
    let two = T::one() + T::one();
    let exponent = (T::one() - alpha) / (two * alpha);
    let se = sigma.psd_eig()?;
    let threshold = se.support_threshold();
    let support: Vec<usize> = (0..se.dim()).filter(|&j| se.eigenvalues[j] > threshold).collect();
    let basis: Vec<Vec<Complex<T>>> = support.iter().map(|&j| se.eigenvector(j)).collect();
    let images: Vec<Vec<Complex<T>>> = basis.iter().map(|w| rho.matrix().mul_vec(w)).collect();
    let inner = |u: &[Complex<T>], v: &[Complex<T>]| -> Complex<T> {
        u.iter().zip(v).map(|(a, b)| a.conj() * *b).sum()
    };
    let r = support.len();
    let compressed = Matrix::from_fn(r, |i, j| inner(&basis[i], &images[j]));
    let rank = {
        let e = HermitianOperator::symmetrized(compressed.clone()).psd_eig()?;
        let t = e.support_threshold();
        e.eigenvalues.iter().filter(|v| **v > t).count()
    };
    let g: Vec<T> = support.iter().map(|&j| se.eigenvalues[j].powf(exponent)).collect();
    let graded = HermitianOperator::symmetrized(Matrix::from_fn(r, |i, j| compressed[(i, j)] * (g[i] * g[j])));
    let mut values = graded_eigenvalues(graded.matrix());
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values.iter().take(rank).map(|v| v.max(T::zero()).powf(alpha)).sum())
}

fn renyi_from_q<T: Real>(q: T, trace: T, alpha: T) -> ExtReal<T> {
    // log 0 = -∞ and 1/(α-1) < 0 for α < 1, so a vanishing core quantity is +∞.
    if !(q > T::zero()) {
        return ExtReal::PosInfinity;
    }
    ExtReal::Finite((q.ln() - trace.ln()) / (alpha - T::one()))
}

fn divergence_with<T: Real>(
    rho: &HermitianOperator<T>,
    sigma: &HermitianOperator<T>,
    alpha: T,
    family: Family,
    q: impl FnOnce() -> Result<T>,
) -> Result<DivergenceValue<T>> {
    check_alpha(alpha)?;
    check_pair(rho, sigma)?;
    let finite_branch = alpha < T::one() || support_leq(rho, sigma)?;
    let value = if finite_branch {
        renyi_from_q(q()?, rho.trace(), alpha)
    } else {
        ExtReal::PosInfinity
    };
    Ok(DivergenceValue { value, alpha, family })
}

/// Traditional (Petz) Rényi divergence.
pub fn d_old<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>, alpha: T) -> Result<DivergenceValue<T>> {
    divergence_with(rho, sigma, alpha, Family::Old, || q_old(rho, sigma, alpha))
}

/// Sandwiched Rényi divergence.
pub fn d_new<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>, alpha: T) -> Result<DivergenceValue<T>> {
    divergence_with(rho, sigma, alpha, Family::New, || q_new(rho, sigma, alpha))
}

/// Umegaki relative entropy `Tr ρ(log ρ - log σ) / Tr ρ`, `+∞` unless `supp ρ ⊆ supp σ`.
pub fn d_umegaki<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>) -> Result<DivergenceValue<T>> {
    check_pair(rho, sigma)?;
    let value = if support_leq(rho, sigma)? {
        let rho_eig = rho.psd_eig()?;
        let self_term = rho_eig.trace_on_support(|x| x * x.ln());
        let cross = rho.trace_product(&sigma.log_on_support()?);
        ExtReal::Finite((self_term - cross) / rho.trace())
    } else {
        ExtReal::PosInfinity
    };
    Ok(DivergenceValue {
        value,
        alpha: T::one(),
        family: Family::Umegaki,
    })
}

/// Dispatches on `family`; `α = 1` is routed to the Umegaki relative entropy
/// for the two Rényi families.
pub fn divergence<T: Real>(
    family: Family,
    rho: &HermitianOperator<T>,
    sigma: &HermitianOperator<T>,
    alpha: T,
) -> Result<DivergenceValue<T>> {
    match family {
        Family::Umegaki => d_umegaki(rho, sigma),
        _ if alpha == T::one() => d_umegaki(rho, sigma),
        Family::Old => d_old(rho, sigma, alpha),
        Family::New => d_new(rho, sigma, alpha),
    }
}

/// Rényi entropy `(log Tr ρ^α - log Tr ρ) / (1 - α)`.
pub fn renyi_entropy<T: Real>(rho: &HermitianOperator<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let e = rho.psd_eig()?;
    let tr_pow = e.trace_on_support(|x| x.powf(alpha));
    Ok((tr_pow.ln() - rho.trace().ln()) / (T::one() - alpha))
}

/// `κ = log(1 + Tr ρ^{3/2} σ^{-1/2} + Tr ρ^{1/2} σ^{1/2})`.
pub fn kappa<T: Real>(rho: &HermitianOperator<T>, sigma: &HermitianOperator<T>) -> Result<T> {
    check_pair(rho, sigma)?;
    if !support_leq(rho, sigma)? {
        return Err(Error::SupportViolation);
    }
    let rho_eig = rho.psd_eig()?;
    let sigma_eig = sigma.psd_eig()?;
    let half = lit::<T>(0.5);
    let t1 = rho_eig
        .power_on_support(lit(1.5))
        .trace_product(&sigma_eig.power_on_support(-half));
    let t2 = rho_eig
        .power_on_support(half)
        .trace_product(&sigma_eig.power_on_support(half));
    Ok((T::one() + t1 + t2).ln())
}

/// Binary entropy `-a log a - (1-a) log(1-a)`, zero at the endpoints.
pub fn binary_entropy<T: Real>(a: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.ln() } else { T::zero() };
    term(a) + term(T::one() - a)
}
