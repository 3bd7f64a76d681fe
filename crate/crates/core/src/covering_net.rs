//! Trace-norm δ-nets over finite pools of states.
//!
//! Nets are built by greedy farthest-point insertion (Gonzalez order): start
//! from the first pool element and repeatedly add the element farthest from
//! the current members until every element is within `delta`. The insertion
//! order does not depend on `delta`, so a smaller `delta` yields a superset.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::State;
use crate::scalar::{from_usize, lit, tol, Real};

/// Distance below which two pool elements are considered identical when `delta = 0`.
pub const DEDUP_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct CoveringNet<T> {
    pub delta: T,
    pub members: Vec<State<T>>,
    /// Pool positions of the members, in insertion order.
    pub member_indices: Vec<usize>,
    /// `max_pool min_member ‖ρ - ρ'‖₁`.
    pub achieved_radius: T,
    pub pool_size: usize,
}

impl<T: Real> CoveringNet<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `‖ρ - ρ'‖₁` for every pair of the pool, row-major.
pub fn distance_matrix<T: Real>(pool: &[State<T>]) -> Vec<Vec<T>> {
    let n = pool.len();
    let upper: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j <= i {
                        T::zero()
                    } else {
                        (pool[i].operator() - pool[j].operator()).trace_norm()
                    }
                })
                .collect()
        })
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| if j >= i { upper[i][j] } else { upper[j][i] }).collect())
        .collect()
}

pub fn build_net<T: Real>(pool: &[State<T>], delta: T) -> Result<CoveringNet<T>> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if delta < T::zero() || delta.is_nan() {
        return Err(Error::NegativeDelta(crate::scalar::to_f64(delta)));
    }
    let dim = pool[0].dim();
    if let Some(bad) = pool.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let dist = distance_matrix(pool);
    let threshold = delta.max(tol::<T>(DEDUP_TOL));

    let mut members = vec![0usize];
    let mut nearest: Vec<T> = dist[0].clone();
    loop {
        // farthest element, lowest index on ties
        let (far, radius) = nearest
            .iter()
            .enumerate()
            .fold((0usize, T::zero()), |(bi, bd), (i, d)| if *d > bd { (i, *d) } else { (bi, bd) });
        if radius <= threshold {
            return Ok(CoveringNet {
                delta,
                members: members.iter().map(|&i| pool[i].clone()).collect(),
                member_indices: members,
                achieved_radius: radius,
                pool_size: pool.len(),
            });
        }
        members.push(far);
        for (n, d) in nearest.iter_mut().zip(&dist[far]) {
            *n = n.min(*d);
        }
    }
}

/// Real parameter count `D = (d + 1) d / 2` of the cardinality bound.
pub fn parameter_count(dim: usize) -> usize {
    (dim + 1) * dim / 2
}

/// `min{|pool|, (1 + 2/δ)^D}`; `δ = 0` gives the pool size.
pub fn cardinality_bound<T: Real>(dim: usize, delta: T, pool_size: usize) -> T {
    let pool = from_usize::<T>(pool_size);
    if delta <= T::zero() {
        return pool;
    }
    let base = T::one() + lit::<T>(2.0) / delta;
    let d = from_usize::<T>(parameter_count(dim));
    pool.min(base.powf(d))
}

/// `(1 + 2/δ)^D` alone, the covering-number estimate for a continuum family.
pub fn continuum_net_size<T: Real>(dim: usize, delta: T) -> T {
    let base = T::one() + lit::<T>(2.0) / delta;
    base.powf(from_usize::<T>(parameter_count(dim)))
}

/// `0` for finite families, `ε / (2n²)` otherwise.
pub fn delta_schedule<T: Real>(epsilon: T, n: usize, is_finite_family: bool) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidEpsilon(crate::scalar::to_f64(epsilon)));
    }
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    if is_finite_family {
        Ok(T::zero())
    } else {
        let n = from_usize::<T>(n);
        Ok(epsilon / (lit::<T>(2.0) * n * n))
    }
}

/// Both sides of `‖ρ^{⊗n} - ρ'^{⊗n}‖₁ <= n ‖ρ - ρ'‖₁`.
pub fn tensor_distance_check<T: Real>(
    rho: &State<T>,
    rho_prime: &State<T>,
    n: usize,
    cap: usize,
) -> Result<(T, T)> {
    let a = rho.kron_power(n, cap)?;
    let b = rho_prime.kron_power(n, cap)?;
    let lhs = (a.operator() - b.operator()).trace_norm();
    let rhs = from_usize::<T>(n) * (rho.operator() - rho_prime.operator()).trace_norm();
    debug_assert!(lhs <= rhs + tol::<T>(1e-9), "tensor distance {lhs} > {rhs}");
    Ok((lhs, rhs))
}
