//! Exact optimal type-II error for composite-null hypothesis testing.
//!
//! For null states `ω_1..ω_k`, alternative `σ` and threshold `ε`,
//!
//! ```text
//! β_ε = min { Tr σ T : 0 <= T <= I, Tr ω_i (I - T) <= ε  ∀i }.
//! ```
//!
//! Dualizing the type-I constraints with multipliers `λ >= 0` leaves an inner
//! minimization over `0 <= T <= I` whose value is `-Tr(σ - Σ λ_i ω_i)_-`, so
//!
//! ```text
//! g(λ) = Σ λ_i (Tr ω_i - ε) - Tr(σ - Σ λ_i ω_i)_-
//! ```
//!
//! is a concave lower bound on `β_ε` for every `λ >= 0` and equals it at the
//! maximizer (Slater: `T = (1-η)I` is strictly feasible). Both searches use
//! the supergradient `(Tr ω_i - ε) - Tr ω_i P_-`: one multiplier by bisection
//! on its sign, several by the central-cut ellipsoid method.
//!
//! A primal test is recovered by pinching every operator in the eigenbasis
//! of `σ - Σ λ_i ω_i` and solving the resulting classical problem exactly;
//! the weights define a feasible `T`, so `[dual_value, primal_value]` always
//! brackets `β_ε`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{EigenDecomposition, HermitianOperator, State};
use crate::scalar::{from_usize, lit, to_f64, tol, Real};

/// Duality gap at which a solution counts as certified.
pub const GAP_TOL: f64 = 1e-7;
/// Iteration cap of the multiplier search.
pub const MAX_ITERATIONS: usize = 100_000;
/// Slack allowed on the type-I constraint of a recovered test.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Acceptance operator `T(0)` of a binary POVM `(T(0), I - T(0))`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryTest<T> {
    t0: HermitianOperator<T>,
}

impl<T: Real> BinaryTest<T> {
    /// Requires `0 <= T(0) <= I` within `1e-9`.
    pub fn new(t0: HermitianOperator<T>) -> Result<Self> {
        let (lo, hi) = t0.eigenvalue_range();
        let slack = tol::<T>(1e-9);
        if lo < -slack {
            return Err(Error::InvalidTest { eigenvalue: to_f64(lo) });
        }
        if hi > T::one() + slack {
            return Err(Error::InvalidTest { eigenvalue: to_f64(hi) });
        }
        Ok(Self { t0 })
    }

    pub fn accept_all(dim: usize) -> Self {
        Self {
            t0: HermitianOperator::identity(dim),
        }
    }

    pub fn reject_all(dim: usize) -> Self {
        Self {
            t0: HermitianOperator::zeros(dim),
        }
    }

    pub fn t0(&self) -> &HermitianOperator<T> {
        &self.t0
    }

    pub fn t1(&self) -> HermitianOperator<T> {
        &HermitianOperator::identity(self.t0.dim()) - &self.t0
    }
}

/// Multipliers, dual bound, recovered test and the resulting bracket on `β_ε`.
#[derive(Clone, Debug)]
pub struct DualSolution<T> {
    pub lambdas: Vec<T>,
    pub dual_value: T,
    pub primal_test: BinaryTest<T>,
    pub primal_value: T,
    /// `primal_value - dual_value`.
    pub gap: T,
    /// Worst type-I error of `primal_test`.
    pub primal_alpha: T,
    /// `gap <= GAP_TOL`; otherwise only the bracket is certified.
    pub certified: bool,
    pub iterations: usize,
}

impl<T: Real> DualSolution<T> {
    /// The achieved type-II error of the recovered test.
    pub fn beta(&self) -> T {
        self.primal_value
    }
}

fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidEpsilon(to_f64(epsilon)));
    }
    Ok(())
}

fn check_nulls<T: Real>(nulls: &[HermitianOperator<T>], sigma: &HermitianOperator<T>) -> Result<()> {
    if nulls.is_empty() {
        return Err(Error::EmptyPool);
    }
    for w in nulls {
        if w.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: sigma.dim(),
                found: w.dim(),
            });
        }
    }
    Ok(())
}

/// `(Tr A v_j v_j^†)_j` for every eigenvector index in `indices`.
fn expectations<T: Real>(eig: &EigenDecomposition<T>, op: &HermitianOperator<T>, indices: &[usize]) -> Vec<T> {
    let n = eig.dim();
    let m = op.matrix();
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];
    indices
        .iter()
        .map(|&j| {
            for (r, vr) in v.iter_mut().enumerate() {
                *vr = eig.eigenvectors[(r, j)];
            }
            let mut acc = T::zero();
            for r in 0..n {
                let row = m.row(r);
                let av = row
                    .iter()
                    .zip(&v)
                    .fold(Complex::new(T::zero(), T::zero()), |s, (a, x)| s + *a * *x);
                acc = acc + (v[r].conj() * av).re;
            }
            acc
        })
        .collect()
}

struct Evaluation<T> {
    value: T,
    supergradient: Vec<T>,
    eig: EigenDecomposition<T>,
}

fn residual<T: Real>(lambdas: &[T], nulls: &[HermitianOperator<T>], sigma: &HermitianOperator<T>) -> HermitianOperator<T> {
    nulls
        .iter()
        .zip(lambdas)
        .fold(sigma.clone(), |acc, (w, l)| if l.is_zero() { acc } else { acc.add_scaled(-*l, w) })
}

fn evaluate<T: Real>(
    lambdas: &[T],
    nulls: &[HermitianOperator<T>],
    sigma: &HermitianOperator<T>,
    epsilon: T,
) -> Evaluation<T> {
    let eig = residual(lambdas, nulls, sigma).eig();
    let negative: Vec<usize> = (0..eig.dim()).filter(|&j| eig.eigenvalues[j] < T::zero()).collect();
    let neg_sum: T = negative.iter().map(|&j| eig.eigenvalues[j]).sum();
    let mut value = neg_sum;
    let mut supergradient = Vec::with_capacity(nulls.len());
    for (w, l) in nulls.iter().zip(lambdas) {
        let base = w.trace() - epsilon;
        value = value + *l * base;
        let overlap: T = expectations(&eig, w, &negative).into_iter().sum();
        supergradient.push(base - overlap);
    }
    Evaluation {
        value,
        supergradient,
        eig,
    }
}

/// Lagrangian dual `Σ λ_i (Tr ω_i - ε) - Tr(σ - Σ λ_i ω_i)_-`, a lower bound on `β_ε`.
pub fn dual_value<T: Real>(
    lambdas: &[T],
    nulls: &[HermitianOperator<T>],
    sigma_n: &HermitianOperator<T>,
    epsilon: T,
) -> Result<T> {
    check_epsilon(epsilon)?;
    check_nulls(nulls, sigma_n)?;
    if lambdas.len() != nulls.len() {
        return Err(Error::MultiplierLength {
            expected: nulls.len(),
            found: lambdas.len(),
        });
    }
    if let Some((index, value)) = lambdas.iter().enumerate().find(|(_, l)| **l < T::zero()) {
        return Err(Error::NegativeMultiplier {
            index,
            value: to_f64(*value),
        });
    }
    let x = residual(lambdas, nulls, sigma_n);
    let tr: T = nulls
        .iter()
        .zip(lambdas)
        .map(|(w, l)| *l * (w.trace() - epsilon))
        .sum();
    Ok(tr - x.negative_part_trace())
}

/// Worst type-I error `max_i Tr ω_i (I - T(0))` and type-II error `Tr σ T(0)`.
pub fn type_errors<T: Real>(
    test: &BinaryTest<T>,
    nulls: &[HermitianOperator<T>],
    sigma_n: &HermitianOperator<T>,
) -> Result<(T, T)> {
    check_nulls(nulls, sigma_n)?;
    if test.t0.dim() != sigma_n.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma_n.dim(),
            found: test.t0.dim(),
        });
    }
    let t1 = test.t1();
    let alpha = nulls
        .iter()
        .map(|w| w.trace_product(&t1))
        .fold(T::neg_infinity(), T::max);
    Ok((alpha, sigma_n.trace_product(&test.t0)))
}

/// Solution of the classical problem: optimal acceptance weights per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalSolution<T> {
    pub beta: T,
    pub weights: Vec<T>,
}

/// Exact `β_ε` for commuting hypotheses given as (sub)probability vectors.
///
/// A single null is solved by likelihood-ratio sorting with randomization at
/// the threshold outcome; several nulls by a linear program.
pub fn classical_np<T: Real>(p_list: &[Vec<T>], q: &[T], epsilon: T) -> Result<ClassicalSolution<T>> {
    check_epsilon(epsilon)?;
    if p_list.is_empty() {
        return Err(Error::EmptyPool);
    }
    for p in p_list {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
    }
    let weights = if p_list.len() == 1 {
        likelihood_ratio_weights(&p_list[0], q, epsilon)
    } else {
        lp_weights(p_list, q, epsilon)?
    };
    let beta = weights.iter().zip(q).map(|(w, x)| *w * *x).sum();
    Ok(ClassicalSolution { beta, weights })
}

fn likelihood_ratio_weights<T: Real>(p: &[T], q: &[T], epsilon: T) -> Vec<T> {
    let mut need = p.iter().copied().sum::<T>() - epsilon;
    let mut weights = vec![T::zero(); p.len()];
    let mut order: Vec<usize> = (0..p.len()).filter(|&j| p[j] > T::zero()).collect();
    // ascending q/p, compared as q_a p_b < q_b p_a to avoid division
    order.sort_by(|&a, &b| {
        (q[a] * p[b])
            .partial_cmp(&(q[b] * p[a]))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for j in order {
        if need <= T::zero() {
            break;
        }
        let w = (need / p[j]).min(T::one());
        weights[j] = w;
        need = need - w * p[j];
    }
    weights
}

fn lp_weights<T: Real>(p_list: &[Vec<T>], q: &[T], epsilon: T) -> Result<Vec<T>> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = q
        .iter()
        .map(|x| problem.add_var(to_f64(*x), (0.0, 1.0)))
        .collect();
    let eps = to_f64(epsilon);
    for p in p_list {
        let need = p.iter().map(|x| to_f64(*x)).sum::<f64>() - eps;
        if need <= 0.0 {
            continue;
        }
        let expr: Vec<_> = vars.iter().zip(p).map(|(v, x)| (*v, to_f64(*x))).collect();
        problem.add_constraint(expr.as_slice(), ComparisonOp::Ge, need);
    }
    let solution = problem
        .solve()
        .map_err(|e| Error::LinearProgram(e.to_string()))?;
    Ok(vars
        .iter()
        .map(|v| lit::<T>(solution[*v].clamp(0.0, 1.0)))
        .collect())
}

/// Optimal multipliers of the classical dual
/// `max Σλ_i(Σp_i - ε) - Σ_j (Σλ_i p_ij - q_j)_+` over `λ >= 0`.
fn lp_multipliers<T: Real>(p_list: &[Vec<T>], q: &[T], epsilon: T) -> Result<Vec<T>> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let eps = to_f64(epsilon);
    let lambdas: Vec<_> = p_list
        .iter()
        .map(|p| problem.add_var(p.iter().map(|x| to_f64(*x)).sum::<f64>() - eps, (0.0, f64::INFINITY)))
        .collect();
    for (j, qj) in q.iter().enumerate() {
        let excess = problem.add_var(-1.0, (0.0, f64::INFINITY));
        let mut expr: Vec<_> = lambdas.iter().zip(p_list).map(|(v, p)| (*v, -to_f64(p[j]))).collect();
        expr.push((excess, 1.0));
        problem.add_constraint(expr.as_slice(), ComparisonOp::Ge, -to_f64(*qj));
    }
    let solution = problem
        .solve()
        .map_err(|e| Error::LinearProgram(e.to_string()))?;
    Ok(lambdas.iter().map(|v| lit::<T>(solution[*v].max(0.0))).collect())
}

/// Exact `β_ε(ω_1..ω_k ‖ σ_n)` with a duality certificate.
pub fn beta_exact<T: Real>(
    nulls: &[HermitianOperator<T>],
    sigma_n: &HermitianOperator<T>,
    epsilon: T,
) -> Result<DualSolution<T>> {
    check_epsilon(epsilon)?;
    check_nulls(nulls, sigma_n)?;
    let mut search = Search::new(nulls, sigma_n, epsilon);
    if nulls.len() == 1 {
        bisection(&mut search)?;
    } else {
        ellipsoid(&mut search)?;
    }
    let Some((test, primal_value, primal_alpha)) = search.primal else {
        unreachable!("accept-all is always feasible");
    };
    let dual = search.best_value;
    let gap = primal_value - dual;
    Ok(DualSolution {
        lambdas: search.best_lambdas,
        dual_value: dual,
        primal_test: test,
        primal_value,
        gap,
        primal_alpha,
        certified: gap <= tol::<T>(GAP_TOL) && primal_alpha <= epsilon + tol::<T>(FEASIBILITY_TOL),
        iterations: search.iterations,
    })
}

/// Convenience wrapper: nulls `ρ^{⊗n}` against `σ^{⊗n}`.
pub fn beta_tensor_power<T: Real>(
    nulls: &[State<T>],
    sigma: &State<T>,
    epsilon: T,
    n: usize,
    cap: usize,
) -> Result<DualSolution<T>> {
    let powers = nulls
        .iter()
        .map(|r| r.operator().kron_power(n, cap))
        .collect::<Result<Vec<_>>>()?;
    let sigma_n = sigma.operator().kron_power(n, cap)?;
    beta_exact(&powers, &sigma_n, epsilon)
}

/// Best dual point and best feasible test seen so far.
struct Search<'a, T> {
    nulls: &'a [HermitianOperator<T>],
    sigma: &'a HermitianOperator<T>,
    epsilon: T,
    best_lambdas: Vec<T>,
    best_value: T,
    best_eig: EigenDecomposition<T>,
    primal: Option<(BinaryTest<T>, T, T)>,
    iterations: usize,
}

impl<'a, T: Real> Search<'a, T> {
    fn new(nulls: &'a [HermitianOperator<T>], sigma: &'a HermitianOperator<T>, epsilon: T) -> Self {
        let zero = vec![T::zero(); nulls.len()];
        let origin = evaluate(&zero, nulls, sigma, epsilon);
        let accept_all = BinaryTest::accept_all(sigma.dim());
        Self {
            nulls,
            sigma,
            epsilon,
            best_lambdas: zero,
            best_value: origin.value,
            best_eig: origin.eig,
            primal: Some((accept_all, sigma.trace(), T::zero())),
            iterations: 1,
        }
    }

    fn evaluate(&mut self, lambdas: &[T]) -> Evaluation<T> {
        self.iterations += 1;
        evaluate(lambdas, self.nulls, self.sigma, self.epsilon)
    }

    fn offer(&mut self, lambdas: &[T], eval: Evaluation<T>) {
        if eval.value > self.best_value {
            self.best_value = eval.value;
            self.best_lambdas = lambdas.to_vec();
            self.best_eig = eval.eig;
        }
    }

    /// Recovers a test from `eig` and keeps it if feasible and better.
    fn try_primal(&mut self, eig: &EigenDecomposition<T>) -> Result<()> {
        let (mut test, mut value) = recover_primal(eig, self.nulls, self.sigma, self.epsilon)?;
        let (mut alpha, _) = type_errors(&test, self.nulls, self.sigma)?;
        if alpha > self.epsilon + tol::<T>(FEASIBILITY_TOL) {
            return Ok(());
        }
        if alpha > self.epsilon {
            // LP round-off: blend with accept-all so the test is exactly feasible
            let keep = self.epsilon / alpha;
            let t0 = test.t0.scale(keep).add_scaled(T::one() - keep, &HermitianOperator::identity(self.sigma.dim()));
            test = BinaryTest { t0 };
            (alpha, value) = type_errors(&test, self.nulls, self.sigma)?;
        }
        if self.primal.as_ref().is_none_or(|(_, v, _)| value < *v) {
            self.primal = Some((test, value, alpha));
        }
        Ok(())
    }

    /// Offers the exact multipliers of the problem pinched to `eig`'s basis;
    /// they are optimal when everything commutes with that basis.
    fn try_pinched_dual(&mut self, eig: &EigenDecomposition<T>) -> Result<()> {
        let all: Vec<usize> = (0..eig.dim()).collect();
        let q = expectations(eig, self.sigma, &all);
        let p_list: Vec<Vec<T>> = self.nulls.iter().map(|w| expectations(eig, w, &all)).collect();
        let lambdas = lp_multipliers(&p_list, &q, self.epsilon)?;
        let radius = multiplier_radius(self.sigma, self.epsilon);
        let total: T = lambdas.iter().copied().sum();
        if total > radius || lambdas.iter().any(|x| !x.is_finite()) {
            return Ok(());
        }
        let eval = self.evaluate(&lambdas);
        let eig = eval.eig.clone();
        self.offer(&lambdas, eval);
        self.try_primal(&eig)
    }

    fn gap(&self) -> T {
        self.primal.as_ref().map_or(T::infinity(), |(_, v, _)| *v) - self.best_value
    }
}

fn multiplier_radius<T: Real>(sigma: &HermitianOperator<T>, epsilon: T) -> T {
    // g(λ) <= Tr σ - ε Σλ_i and g(λ*) >= g(0) = 0
    sigma.trace().max(T::min_positive_value()) / epsilon
}

/// Bisection on the sign of the (monotone) derivative of the one-multiplier dual.
///
/// Comparing function values would only locate a smooth maximum to about the
/// square root of machine precision; the derivative sign has no such limit.
fn bisection<T: Real>(search: &mut Search<'_, T>) -> Result<()> {
    let mut lo = T::zero();
    let mut hi = multiplier_radius(search.sigma, search.epsilon);
    let width_tol = tol::<T>(1e-15) * hi;
    let origin = search.evaluate(&[lo]);
    if origin.supergradient[0] <= T::zero() {
        search.try_primal(&origin.eig)?;
        search.offer(&[lo], origin);
        return Ok(());
    }
    let mut lo_eig = origin.eig.clone();
    search.offer(&[lo], origin);
    let mut hi_eig = None;
    while hi - lo > width_tol && search.iterations < MAX_ITERATIONS {
        let mid = (lo + hi) / lit::<T>(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let e = search.evaluate(&[mid]);
        let slope = e.supergradient[0];
        if slope > T::zero() {
            lo = mid;
            lo_eig = e.eig.clone();
        } else {
            hi = mid;
            hi_eig = Some(e.eig.clone());
        }
        search.offer(&[mid], e);
    }
    search.try_primal(&lo_eig)?;
    if let Some(eig) = hi_eig {
        search.try_primal(&eig)?;
    }
    Ok(())
}

/// Central-cut ellipsoid method on `{λ >= 0, Σ λ_i <= R}`.
///
/// Runs until the dual upper estimate meets the best dual value; from then on
/// each center is also used for primal recovery until the duality gap closes,
/// since the recovered test is only as accurate as the multipliers.
fn ellipsoid<T: Real>(search: &mut Search<'_, T>) -> Result<()> {
    let k = search.nulls.len();
    let kf = from_usize::<T>(k);
    let radius = multiplier_radius(search.sigma, search.epsilon);

    let mut center = vec![radius / (kf + T::one()); k];
    let mut shape = vec![vec![T::zero(); k]; k];
    for (i, row) in shape.iter_mut().enumerate() {
        row[i] = radius * radius;
    }
    let mut upper = T::infinity();
    let stop = tol::<T>(1e-11) * T::one().max(search.sigma.trace());
    let gap_target = tol::<T>(GAP_TOL) * lit::<T>(1e-2);
    let expand = kf * kf / (kf * kf - T::one());
    let step = T::one() / (kf + T::one());
    let two = T::one() + T::one();
    let mut dual_converged = false;

    while search.iterations < MAX_ITERATIONS {
        // `cut` is a subgradient h of the convex objective -g (or of a violated
        // constraint); the retained half-space is {x : h·(x - c) <= 0}.
        let cut: Vec<T> = if let Some(i) = (0..k).find(|&i| center[i] < T::zero()) {
            search.iterations += 1;
            (0..k).map(|j| if j == i { -T::one() } else { T::zero() }).collect()
        } else if center.iter().copied().sum::<T>() > radius {
            search.iterations += 1;
            vec![T::one(); k]
        } else {
            let eval = search.evaluate(&center);
            let s = eval.supergradient.clone();
            let ps = mat_vec(&shape, &s);
            let spread = dot(&s, &ps).max(T::zero()).sqrt();
            upper = upper.min(eval.value + spread);
            if dual_converged {
                search.try_primal(&eval.eig)?;
            }
            search.offer(&center, eval);
            if !dual_converged && (upper - search.best_value <= stop || spread.is_zero()) {
                dual_converged = true;
                let best = search.best_eig.clone();
                search.try_primal(&best)?;
            }
            if dual_converged && search.gap() <= gap_target {
                break;
            }
            if spread.is_zero() {
                break;
            }
            s.iter().map(|x| -*x).collect()
        };
        let ph = mat_vec(&shape, &cut);
        let hph = dot(&cut, &ph);
        if !(hph > T::zero()) {
            break;
        }
        let norm = hph.sqrt();
        let g: Vec<T> = ph.iter().map(|x| *x / norm).collect();
        for (c, gi) in center.iter_mut().zip(&g) {
            *c = *c - step * *gi;
        }
        for i in 0..k {
            for j in 0..k {
                shape[i][j] = expand * (shape[i][j] - two * step * g[i] * g[j]);
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let avg = (shape[i][j] + shape[j][i]) / two;
                shape[i][j] = avg;
                shape[j][i] = avg;
            }
        }
        let width = (0..k).map(|i| shape[i][i]).fold(T::zero(), T::max).sqrt();
        if width <= tol::<T>(1e-15) * radius {
            break;
        }
    }
    if !dual_converged {
        let best = search.best_eig.clone();
        search.try_primal(&best)?;
    }
    // On a flat face or at a kink of the dual the ellipsoid degenerates along
    // the gradient before the best point is optimal.
    if search.gap() > gap_target {
        let best = search.best_eig.clone();
        search.try_pinched_dual(&best)?;
    }
    for _ in 0..POLISH_ROUNDS {
        if search.gap() <= gap_target || search.iterations >= MAX_ITERATIONS {
            break;
        }
        let ray = search.best_lambdas.clone();
        line_search(search, &ray, radius)?;
        for i in 0..k {
            let axis: Vec<T> = (0..k).map(|j| if j == i { T::one() } else { T::zero() }).collect();
            line_search(search, &axis, radius)?;
        }
    }
    Ok(())
}

const POLISH_ROUNDS: usize = 3;

/// Maximizes the dual along `best + t·dir` inside `{λ >= 0, Σλ <= R}` by
/// bisection on the sign of the directional supergradient.
fn line_search<T: Real>(search: &mut Search<'_, T>, dir: &[T], radius: T) -> Result<()> {
    let base = search.best_lambdas.clone();
    let at = |t: T| -> Vec<T> { base.iter().zip(dir).map(|(b, d)| *b + t * *d).collect() };
    let (mut lo, mut hi) = (-T::infinity(), T::infinity());
    for (b, d) in base.iter().zip(dir) {
        if *d > T::zero() {
            lo = lo.max(-*b / *d);
        } else if *d < T::zero() {
            hi = hi.min(-*b / *d);
        }
    }
    let total: T = dir.iter().copied().sum();
    let room = radius - base.iter().copied().sum::<T>();
    if total > T::zero() {
        hi = hi.min(room / total);
    } else if total < T::zero() {
        lo = lo.max(room / total);
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Ok(());
    }
    let slope = |e: &Evaluation<T>| dot(&e.supergradient, dir);
    let start = search.evaluate(&base);
    let s0 = slope(&start);
    if s0 > T::zero() {
        lo = T::zero();
    } else if s0 < T::zero() {
        hi = T::zero();
    } else {
        return Ok(());
    }
    let width_tol = tol::<T>(1e-15) * (hi - lo).max(radius);
    let (mut lo_eig, mut hi_eig) = (None, None);
    while hi - lo > width_tol && search.iterations < MAX_ITERATIONS {
        let mid = (lo + hi) / lit::<T>(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let point = at(mid);
        let e = search.evaluate(&point);
        if slope(&e) > T::zero() {
            lo = mid;
            lo_eig = Some(e.eig.clone());
        } else {
            hi = mid;
            hi_eig = Some(e.eig.clone());
        }
        search.offer(&point, e);
    }
    for eig in [lo_eig, hi_eig].into_iter().flatten() {
        search.try_primal(&eig)?;
    }
    Ok(())
}

fn mat_vec<T: Real>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Pinches `σ` and every `ω_i` in the eigenbasis of the residual, solves the
/// classical problem on the diagonals and lifts the weights back.
fn recover_primal<T: Real>(
    eig: &EigenDecomposition<T>,
    nulls: &[HermitianOperator<T>],
    sigma: &HermitianOperator<T>,
    epsilon: T,
) -> Result<(BinaryTest<T>, T)> {
    let all: Vec<usize> = (0..eig.dim()).collect();
    let q: Vec<T> = expectations(eig, sigma, &all)
        .into_iter()
        .map(|x| x.max(T::zero()))
        .collect();
    let p_list: Vec<Vec<T>> = nulls
        .iter()
        .map(|w| {
            expectations(eig, w, &all)
                .into_iter()
                .map(|x| x.max(T::zero()))
                .collect()
        })
        .collect();
    let solution = classical_np(&p_list, &q, epsilon)?;
    let t0 = eig.weighted_projector_sum(&solution.weights);
    let value = sigma.trace_product(&t0);
    Ok((BinaryTest { t0 }, value))
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::hermitian::{random_diagonal_state, random_state_with_rng, seeded_rng};

    fn diag(d: &[f64]) -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(d).unwrap()
    }

    fn diag_of(s: &State<f64>) -> Vec<f64> {
        (0..s.dim()).map(|i| s.entry(i, i).re).collect()
    }

    #[test]
    fn dual_value_at_zero_is_zero() {
        let s = diag(&[0.3, 0.7]);
        assert_eq!(dual_value(&[0.0], &[diag(&[1.0, 0.0])], &s, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn dual_value_scalar_case() {
        let sigma = diag(&[0.4, 0.6]);
        let eps = 0.2;
        for lambda in [0.0, 0.3, 0.9, 1.0, 1.4, 3.0] {
            let got = dual_value(&[lambda], std::slice::from_ref(&sigma), &sigma, eps).unwrap();
            let want = lambda * (1.0 - eps) - (lambda - 1.0f64).max(0.0);
            assert_relative_eq!(got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn dual_value_rejects_bad_multipliers() {
        let s = diag(&[0.5, 0.5]);
        assert!(matches!(
            dual_value(&[-0.1], std::slice::from_ref(&s), &s, 0.1),
            Err(Error::NegativeMultiplier { index: 0, .. })
        ));
        assert!(matches!(
            dual_value(&[0.1, 0.2], std::slice::from_ref(&s), &s, 0.1),
            Err(Error::MultiplierLength { .. })
        ));
    }

    #[test]
    fn beta_of_identical_hypotheses() {
        let mut rng = seeded_rng(3);
        let s = random_state_with_rng::<f64>(3, &mut rng);
        for eps in [0.05, 0.3, 0.8] {
            let sol = beta_exact(&[s.operator().clone()], &s, eps).unwrap();
            assert_relative_eq!(sol.primal_value, 1.0 - eps, epsilon = 1e-9);
            assert_relative_eq!(sol.dual_value, 1.0 - eps, epsilon = 1e-9);
            assert!(sol.certified);
        }
    }

    #[test]
    fn beta_diagonal_hand_example() {
        let sol = beta_exact(&[diag(&[1.0, 0.0])], &diag(&[0.5, 0.5]), 0.1).unwrap();
        assert_relative_eq!(sol.primal_value, 0.45, epsilon = 1e-9);
        assert!(sol.gap.abs() <= GAP_TOL);
        assert!(sol.primal_test.t0().frobenius_distance(&diag(&[0.9, 0.0])) < 1e-8);
    }

    #[test]
    fn beta_orthogonal_pure_states() {
        for eps in [0.01, 0.5] {
            let sol = beta_exact(&[diag(&[1.0, 0.0])], &diag(&[0.0, 1.0]), eps).unwrap();
            assert!(sol.primal_value.abs() < 1e-12);
            assert!(sol.certified);
        }
    }

    #[test]
    fn classical_examples() {
        let s = classical_np(&[vec![1.0, 0.0]], &[0.5, 0.5], 0.1).unwrap();
        assert_relative_eq!(s.beta, 0.45, epsilon = 1e-15);
        let s = classical_np(&[vec![0.2, 0.3, 0.5]], &[0.2, 0.3, 0.5], 0.25).unwrap();
        assert_relative_eq!(s.beta, 0.75, epsilon = 1e-15);
        // accepting only the outcome σ never produces meets α = 1/2 with β = 0
        let s = classical_np(&[vec![0.5, 0.5]], &[1.0, 0.0], 0.5).unwrap();
        assert_eq!(s.beta, 0.0);
        assert_eq!(s.beta, brute_force_single(&[0.5, 0.5], &[1.0, 0.0], 0.5));
    }

    /// Enumerates tests that are 0/1 except on one outcome, which covers
    /// every vertex of the single-null feasible region.
    fn brute_force_single(p: &[f64], q: &[f64], eps: f64) -> f64 {
        let d = p.len();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << d) {
            for frac in 0..=d {
                let mut w: Vec<f64> = (0..d).map(|j| ((mask >> j) & 1) as f64).collect();
                if frac < d {
                    let rest: f64 = (0..d).filter(|&j| j != frac).map(|j| w[j] * p[j]).sum();
                    let need = 1.0 - eps - rest;
                    if p[frac] <= 0.0 {
                        continue;
                    }
                    w[frac] = (need / p[frac]).clamp(0.0, 1.0);
                }
                let alpha: f64 = (0..d).map(|j| (1.0 - w[j]) * p[j]).sum();
                if alpha <= eps + 1e-12 {
                    best = best.min((0..d).map(|j| w[j] * q[j]).sum());
                }
            }
        }
        best
    }

    #[test]
    fn likelihood_ratio_matches_enumeration() {
        let mut rng = seeded_rng(77);
        for dim in 2..7 {
            for eps in [0.05, 0.2, 0.6] {
                let p = diag_of(&random_diagonal_state(dim, &mut rng));
                let q = diag_of(&random_diagonal_state(dim, &mut rng));
                let got = classical_np(std::slice::from_ref(&p), &q, eps).unwrap().beta;
                assert_relative_eq!(got, brute_force_single(&p, &q, eps), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn lp_matches_sorting_on_duplicated_null() {
        let mut rng = seeded_rng(78);
        for dim in 2..7 {
            let p = diag_of(&random_diagonal_state(dim, &mut rng));
            let q = diag_of(&random_diagonal_state(dim, &mut rng));
            let one = classical_np(std::slice::from_ref(&p), &q, 0.1).unwrap().beta;
            let two = classical_np(&[p.clone(), p.clone()], &q, 0.1).unwrap().beta;
            assert_relative_eq!(one, two, epsilon = 1e-9);
        }
    }

    #[test]
    fn commuting_multi_null_agrees_with_lp() {
        let mut rng = seeded_rng(9);
        for dim in [2usize, 4, 6] {
            for k in [2usize, 3] {
                let nulls: Vec<State<f64>> = (0..k).map(|_| random_diagonal_state(dim, &mut rng)).collect();
                let sigma = random_diagonal_state::<f64>(dim, &mut rng);
                let ops: Vec<_> = nulls.iter().map(|s| s.operator().clone()).collect();
                let sol = beta_exact(&ops, &sigma, 0.1).unwrap();
                let p: Vec<_> = nulls.iter().map(diag_of).collect();
                let want = classical_np(&p, &diag_of(&sigma), 0.1).unwrap().beta;
                assert!(sol.certified, "gap {}", sol.gap);
                assert!((sol.dual_value - want).abs() <= 1e-7, "{} vs {want}", sol.dual_value);
            }
        }
    }

    #[test]
    fn mixture_of_nulls_equal_to_sigma_closes_the_gap() {
        // σ lies in the convex hull of the nulls, so β = 1 - ε at a kink of the dual
        let nulls = [
            diag(&[0.4276612352036251, 0.572338764796375]),
            diag(&[0.8411429470771977, 0.15885705292280233]),
            diag(&[0.4745061649313912, 0.5254938350686089]),
        ];
        let sigma = diag(&[0.5086183692086479, 0.49138163079135205]);
        let sol = beta_exact(&nulls, &sigma, 0.3).unwrap();
        assert!(sol.certified, "gap {}", sol.gap);
        assert_relative_eq!(sol.dual_value, 0.7, epsilon = 1e-9);
    }

    #[test]
    fn type_errors_examples() {
        let nulls = [diag(&[1.0, 0.0])];
        let sigma = diag(&[0.5, 0.5]);
        assert_eq!(type_errors(&BinaryTest::accept_all(2), &nulls, &sigma).unwrap(), (0.0, 1.0));
        assert_eq!(type_errors(&BinaryTest::reject_all(2), &nulls, &sigma).unwrap(), (1.0, 0.0));
        let t = BinaryTest::new(diag(&[0.9, 0.0])).unwrap();
        let (a, b) = type_errors(&t, &nulls, &sigma).unwrap();
        assert_relative_eq!(a, 0.1, epsilon = 1e-15);
        assert_relative_eq!(b, 0.45, epsilon = 1e-15);
    }

    #[test]
    fn binary_test_validation() {
        assert!(BinaryTest::new(diag(&[1.2, 0.0])).is_err());
        assert!(BinaryTest::new(diag(&[0.5, -0.1])).is_err());
        assert!(BinaryTest::new(diag(&[1.0, 0.0])).is_ok());
    }

    #[test]
    fn noncommuting_qubits_certified() {
        let mut rng = seeded_rng(12);
        for k in [1usize, 2, 3] {
            for _ in 0..4 {
                let nulls: Vec<_> = (0..k)
                    .map(|_| random_state_with_rng::<f64>(2, &mut rng).into_operator())
                    .collect();
                let sigma = random_state_with_rng::<f64>(2, &mut rng).into_operator();
                let sol = beta_exact(&nulls, &sigma, 0.1).unwrap();
                assert!(sol.certified, "k={k} gap={} alpha={}", sol.gap, sol.primal_alpha);
            }
        }
    }

    #[test]
    fn weak_duality_against_random_feasible_tests() {
        let mut rng = seeded_rng(31);
        let nulls: Vec<_> = (0..2)
            .map(|_| random_state_with_rng::<f64>(3, &mut rng).into_operator())
            .collect();
        let sigma = random_state_with_rng::<f64>(3, &mut rng).into_operator();
        let eps = 0.2;
        for i in 0..20 {
            // T = (1-η)I is feasible for η <= ε
            let eta = eps * (i as f64) / 20.0;
            let test = BinaryTest::new(HermitianOperator::identity(3).scale(1.0 - eta)).unwrap();
            let (alpha, beta) = type_errors(&test, &nulls, &sigma).unwrap();
            assert!(alpha <= eps + 1e-12);
            let l = [0.3 * i as f64, 0.1 * (20 - i) as f64];
            assert!(dual_value(&l, &nulls, &sigma, eps).unwrap() <= beta + 1e-12);
        }
    }
}
