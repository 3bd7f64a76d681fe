//! Cyclic Jacobi eigenvalue iteration for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real symmetric Jacobi rotation, so
//! the combined 2x2 unitary is
//!
//! ```text
//! V = [[ c,            s          ],
//!      [ -s e^{-iφ},   c e^{-iφ}  ]]      a_pq = |a_pq| e^{iφ}
//! ```

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::{tol, Real};

const MAX_SWEEPS: usize = 100;

/// Returns unsorted eigenvalues and the unitary whose columns are the
/// corresponding eigenvectors.
pub(crate) fn jacobi_eigen<T: Real>(input: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = tol::<T>(1e-13) * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, true);
            }
        }
    }

    let eigenvalues = (0..n).map(|i| a[(i, i)].re).collect();
    (eigenvalues, v)
}

/// Eigenvalues of a positive semidefinite `D A D` (diagonal `D`) to high
/// relative accuracy, provided `A` scaled to unit diagonal is well conditioned.
///
/// A pivot is annihilated until `|a_pq| <= eps sqrt(a_pp a_qq)`, so tiny
/// eigenvalues are not swamped by the largest one.
pub(crate) fn graded_eigenvalues<T: Real>(input: &Matrix<T>) -> Vec<T> {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let r = a[(p, q)].norm();
                let scale = (a[(p, p)].re * a[(q, q)].re).abs().sqrt();
                if r > eps * scale {
                    rotate(&mut a, &mut v, p, q, false);
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize, shortcut: bool) {
    let b = a[(p, q)];
    let r = b.norm();
    if r.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Pivots far below the diagonal spacing are already converged.
    let spread = app.abs() + aqq.abs();
    if shortcut && spread > T::zero() && r <= T::epsilon() * T::epsilon() * spread {
        a[(p, q)] = Complex::zero();
        a[(q, p)] = Complex::zero();
        return;
    }

    let two = T::one() + T::one();
    let theta = (aqq - app) / (two * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let phase = Complex::new(b.re / r, -b.im / r); // e^{-iφ}

    let vpp = Complex::new(c, T::zero());
    let vpq = Complex::new(s, T::zero());
    let vqp = phase * (-s);
    let vqq = phase * c;

    let n = a.dim();
    // A <- A V (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    // A <- V^† A (rows p, q)
    let (cpp, cpq, cqp, cqq) = (vpp.conj(), vpq.conj(), vqp.conj(), vqq.conj());
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = cpp * apk + cqp * aqk;
        a[(q, k)] = cpq * apk + cqq * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}
