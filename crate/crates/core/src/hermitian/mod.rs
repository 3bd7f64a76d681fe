//! Dense complex Hermitian operators.
//!
//! Every operator in the crate (states, the alternative hypothesis, tensor
//! powers, Lagrangian residuals) is a [`HermitianOperator`]. Construction
//! validates Hermiticity and then symmetrizes the entries exactly, so every
//! downstream spectral routine sees a matrix that is Hermitian to the bit.
//!
//! Matrix powers follow the support convention: for a positive semidefinite
//! `A = Σ λ_i P_i`, `A^α := Σ_{λ_i > 0} λ_i^α P_i` for every real `α`, so
//! `A^0` is the support projector and negative powers are pseudo-inverses.

mod io;
mod jacobi;
mod matrix;
mod random;
mod tridiagonal;

use std::ops::{Add, Deref, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

pub(crate) use jacobi::graded_eigenvalues;
pub use io::{load_operator, parse_operator, save_operator, write_operator, FormatError, OperatorFile};
pub use matrix::Matrix;
pub use random::{
    random_diagonal_state, random_hermitian, random_psd, random_pure_state, random_state,
    random_state_with_rng, random_unitary, seeded_rng, StateRng,
};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, tol, Real};

/// Relative Hermiticity tolerance (times the largest entry modulus).
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues in `(-PSD_CLIP_TOL, 0)` are rounding noise and get clipped.
pub const PSD_CLIP_TOL: f64 = 1e-10;
/// Eigenvalues `<= dim * SUPPORT_REL_TOL * λ_max` are treated as zero.
pub const SUPPORT_REL_TOL: f64 = 1e-12;
/// Trace tolerance of a state.
pub const STATE_TRACE_TOL: f64 = 1e-10;
/// Default cap on `dim^n` for dense tensor powers.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Largest dimension handled by the Jacobi iteration in [`HermitianOperator::eig`].
pub const JACOBI_MAX_DIM: usize = 32;

/// Dense complex Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: Matrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    /// Builds an operator from row-major entries, rejecting matrices whose
    /// asymmetry exceeds `1e-12 * max|a_ij|`.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape {
                dim,
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_matrix(Matrix::from_raw(dim, entries))
    }

    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::EmptyDimension);
        }
        let asym = matrix.max_asymmetry();
        let scale = matrix.max_abs();
        if asym > tol::<T>(HERMITICITY_TOL) * scale || asym.is_nan() {
            return Err(Error::NotHermitian {
                asymmetry: to_f64(asym),
            });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// `(M + M^†) / 2` without any check.
    pub(crate) fn symmetrized(mut matrix: Matrix<T>) -> Self {
        let n = matrix.dim();
        let half = lit::<T>(0.5);
        for i in 0..n {
            let d = matrix[(i, i)].re;
            matrix[(i, i)] = Complex::new(d, T::zero());
            for j in (i + 1)..n {
                let z = (matrix[(i, j)] + matrix[(j, i)].conj()) * half;
                matrix[(i, j)] = z;
                // `+ 0` drops the sign of a zero imaginary part so files round-trip byte for byte
                matrix[(j, i)] = Complex::new(z.re, -z.im + T::zero());
            }
        }
        Self { matrix }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let n = diag.len();
        let mut m = Matrix::zeros(n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(*d, T::zero());
        }
        Ok(Self { matrix: m })
    }

    /// Real symmetric operator from rows.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape {
                    dim: n,
                    expected: n * n,
                    found: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend(row.iter().map(|x| Complex::new(*x, T::zero())));
        }
        Self::new(n, entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: Matrix::zeros(dim),
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` (not normalized).
    pub fn outer(psi: &[Complex<T>]) -> Self {
        let m = Matrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj());
        Self::symmetrized(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `Re Tr(A B)`; exact trace of the product for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "trace_product dimension mismatch");
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                // Tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij)
                let z = self.matrix[(i, j)] * other.matrix[(i, j)].conj();
                acc = acc + z.re;
            }
        }
        acc
    }

    /// `B A B` for Hermitian `B`.
    pub fn sandwich(&self, outer: &Self) -> Self {
        let m = outer.matrix.matmul(&self.matrix).matmul(&outer.matrix);
        Self::symmetrized(m)
    }

    /// `U A U^†` for a unitary `U`.
    pub fn conjugate_by(&self, unitary: &Matrix<T>) -> Self {
        let m = unitary.matmul(&self.matrix).matmul(&unitary.adjoint());
        Self::symmetrized(m)
    }

    pub fn scale(&self, factor: T) -> Self {
        let mut m = self.matrix.clone();
        for z in m.as_mut_slice() {
            *z = *z * factor;
        }
        Self { matrix: m }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: T, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "add_scaled dimension mismatch");
        let mut m = self.matrix.clone();
        for (z, w) in m.as_mut_slice().iter_mut().zip(other.matrix.as_slice()) {
            *z = *z + *w * factor;
        }
        Self { matrix: m }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `A^{⊗n}`, materialized densely; fails when `dim^n > cap`.
    pub fn kron_power(&self, n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroCopies);
        }
        let total = (self.dim() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::DimensionCap { dim: total, cap });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.kron(self);
        }
        Ok(acc)
    }

    /// Frobenius distance, used for deduplication and diagnostics.
    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.matrix.distance(&other.matrix)
    }

    /// Full spectral decomposition with ascending eigenvalues.
    ///
    /// Small operators use cyclic Jacobi rotations; above
    /// [`JACOBI_MAX_DIM`] the Householder/QL route is faster.
    pub fn eig(&self) -> EigenDecomposition<T> {
        if self.dim() <= JACOBI_MAX_DIM {
            self.eig_jacobi()
        } else {
            self.eig_tridiagonal()
        }
    }

    pub fn eig_jacobi(&self) -> EigenDecomposition<T> {
        let (values, vectors) = jacobi::jacobi_eigen(&self.matrix);
        EigenDecomposition::sorted(values, vectors)
    }

    pub fn eig_tridiagonal(&self) -> EigenDecomposition<T> {
        let (values, vectors) = tridiagonal::tridiagonal_eigen(&self.matrix);
        EigenDecomposition::sorted(values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.eig().eigenvalues
    }

    /// Spectral decomposition of a positive semidefinite operator with
    /// eigenvalues in `(-1e-10, 0)` clipped to zero.
    pub fn psd_eig(&self) -> Result<EigenDecomposition<T>> {
        let mut e = self.eig();
        let clip = tol::<T>(PSD_CLIP_TOL) * T::one().max(e.max_abs_eigenvalue());
        for v in e.eigenvalues.iter_mut() {
            if *v < T::zero() {
                if *v < -clip {
                    return Err(Error::NotPositive {
                        min_eigenvalue: to_f64(*v),
                    });
                }
                *v = T::zero();
            }
        }
        Ok(e)
    }

    /// `Σ_{λ_i > 0} λ_i^α P_i`; `α = 0` gives the support projector.
    pub fn power_on_support(&self, alpha: T) -> Result<Self> {
        Ok(self.psd_eig()?.power_on_support(alpha))
    }

    pub fn support_projector(&self) -> Result<Self> {
        Ok(self.psd_eig()?.support_projector())
    }

    /// Natural logarithm on the support (zero on the kernel).
    pub fn log_on_support(&self) -> Result<Self> {
        Ok(self.psd_eig()?.log_on_support())
    }

    /// `Σ max(0, -λ_i)`.
    pub fn negative_part_trace(&self) -> T {
        self.eigenvalues()
            .into_iter()
            .filter(|v| *v < T::zero())
            .map(|v| -v)
            .sum()
    }

    /// `‖A‖₁ = Σ |λ_i|`.
    pub fn trace_norm(&self) -> T {
        self.eigenvalues().into_iter().map(|v| v.abs()).sum()
    }

    /// Spectral norm `max |λ_i|`.
    pub fn operator_norm(&self) -> T {
        self.eig().max_abs_eigenvalue()
    }

    pub fn is_psd(&self) -> bool {
        self.psd_eig().is_ok()
    }

    /// Partial order check used to validate tests: `0 <= A <= I`.
    pub fn eigenvalue_range(&self) -> (T, T) {
        let ev = self.eigenvalues();
        (ev[0], ev[ev.len() - 1])
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// `supp A ⊆ supp B` for positive semidefinite `A`, `B`, tested as
/// `‖(I - B⁰) A (I - B⁰)‖ <= 1e-9 ‖A‖`.
pub fn support_leq<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<bool> {
    a.check_dim(b)?;
    let a_eig = a.psd_eig()?;
    let complement = HermitianOperator::identity(b.dim()).add_scaled(-T::one(), &b.support_projector()?);
    let leak = a.sandwich(&complement).operator_norm();
    Ok(leak <= tol::<T>(1e-9) * a_eig.max_abs_eigenvalue().max(T::min_positive_value()))
}

impl<T: Real> Add for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn add(self, rhs: Self) -> HermitianOperator<T> {
        self.add_scaled(T::one(), rhs)
    }
}

impl<T: Real> Sub for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn sub(self, rhs: Self) -> HermitianOperator<T> {
        self.add_scaled(-T::one(), rhs)
    }
}

impl<T: Real> Mul<T> for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn mul(self, rhs: T) -> HermitianOperator<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn neg(self) -> HermitianOperator<T> {
        self.scale(-T::one())
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    fn sorted(values: Vec<T>, vectors: Matrix<T>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = Matrix::from_fn(n, |r, c| vectors[(r, order[c])]);
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs_eigenvalue(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Column `j` of the eigenvector matrix.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(j)
    }

    /// Eigenvalues `<= dim * 1e-12 * λ_max` count as zero.
    pub fn support_threshold(&self) -> T {
        let top = self
            .eigenvalues
            .last()
            .copied()
            .unwrap_or(T::zero())
            .max(T::zero());
        from_usize::<T>(self.dim()) * tol::<T>(SUPPORT_REL_TOL) * top
    }

    /// `Σ_j f(λ_j) v_j v_j^†`, skipping terms where `f` returns zero.
    pub fn map(&self, f: impl Fn(T) -> T) -> HermitianOperator<T> {
        let weights: Vec<T> = self.eigenvalues.iter().map(|v| f(*v)).collect();
        self.weighted_projector_sum(&weights)
    }

    pub fn weighted_projector_sum(&self, weights: &[T]) -> HermitianOperator<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let active: Vec<usize> = (0..n).filter(|&j| !weights[j].is_zero()).collect();
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for c in r..n {
                let mut acc = Complex::zero();
                for &j in &active {
                    acc = acc + v[(r, j)] * v[(c, j)].conj() * weights[j];
                }
                out[(r, c)] = acc;
                out[(c, r)] = acc.conj();
            }
        }
        HermitianOperator::symmetrized(out)
    }

    pub fn reconstruct(&self) -> HermitianOperator<T> {
        self.map(|v| v)
    }

    pub fn power_on_support(&self, alpha: T) -> HermitianOperator<T> {
        let thr = self.support_threshold();
        self.map(|v| if v > thr { v.powf(alpha) } else { T::zero() })
    }

    pub fn support_projector(&self) -> HermitianOperator<T> {
        let thr = self.support_threshold();
        self.map(|v| if v > thr { T::one() } else { T::zero() })
    }

    pub fn log_on_support(&self) -> HermitianOperator<T> {
        let thr = self.support_threshold();
        self.map(|v| if v > thr { v.ln() } else { T::zero() })
    }

    /// `Tr f(A)` summed over the support only.
    pub fn trace_on_support(&self, f: impl Fn(T) -> T) -> T {
        let thr = self.support_threshold();
        self.eigenvalues.iter().filter(|v| **v > thr).map(|v| f(*v)).sum()
    }

    /// `‖V^† V - I‖_F`.
    pub fn orthonormality_error(&self) -> T {
        let v = &self.eigenvectors;
        v.adjoint().matmul(v).distance(&Matrix::identity(self.dim()))
    }
}

/// A density operator: positive semidefinite with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct State<T> {
    op: HermitianOperator<T>,
}

impl<T: Real> State<T> {
    pub fn new(op: HermitianOperator<T>) -> Result<Self> {
        let trace = op.trace();
        if (trace - T::one()).abs() > tol::<T>(STATE_TRACE_TOL) {
            return Err(Error::NotNormalized {
                trace: to_f64(trace),
            });
        }
        let min = op.eigenvalues()[0];
        if min < -tol::<T>(PSD_CLIP_TOL) {
            return Err(Error::NotPositive {
                min_eigenvalue: to_f64(min),
            });
        }
        Ok(Self { op })
    }

    /// Normalizes a non-zero positive semidefinite operator.
    pub fn normalized(op: HermitianOperator<T>) -> Result<Self> {
        op.psd_eig()?;
        let tr = op.trace();
        if tr <= T::zero() {
            return Err(Error::ZeroOperator);
        }
        Self::new(op.scale(T::one() / tr))
    }

    pub fn from_diagonal(probabilities: &[T]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probabilities)?)
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / from_usize::<T>(dim);
        Self {
            op: HermitianOperator::identity(dim).scale(w),
        }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        Self::normalized(HermitianOperator::outer(psi))
    }

    pub fn operator(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator<T> {
        self.op
    }

    pub fn kron_power(&self, n: usize, cap: usize) -> Result<Self> {
        Ok(Self {
            op: self.op.kron_power(n, cap)?,
        })
    }

    /// `U ρ U^†`.
    pub fn conjugate_by(&self, unitary: &Matrix<T>) -> Self {
        Self {
            op: self.op.conjugate_by(unitary),
        }
    }

    /// Convex combination `Σ γ_i ρ_i`; weights must be a probability vector.
    pub fn mixture(states: &[Self], weights: &[T]) -> Result<Self> {
        let first = states.first().ok_or(Error::EmptyPool)?;
        let mut acc = HermitianOperator::zeros(first.dim());
        for (s, w) in states.iter().zip(weights) {
            first.op.check_dim(&s.op)?;
            acc = acc.add_scaled(*w, &s.op);
        }
        Self::new(acc)
    }
}

impl<T> Deref for State<T> {
    type Target = HermitianOperator<T>;

    fn deref(&self) -> &HermitianOperator<T> {
        &self.op
    }
}

impl<T> AsRef<HermitianOperator<T>> for State<T> {
    fn as_ref(&self) -> &HermitianOperator<T> {
        &self.op
    }
}

#[cfg(test)]
mod tests;
