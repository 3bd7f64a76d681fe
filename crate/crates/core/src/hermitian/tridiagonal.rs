//! Householder reduction of a Hermitian matrix to real symmetric tridiagonal
//! form followed by implicit QL iteration with Wilkinson-style shifts.
//! O(n^3) with a small constant; used for the larger tensor-power operators.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::Real;

const MAX_QL_ITERATIONS: usize = 60;

pub(crate) fn tridiagonal_eigen<T: Real>(input: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = input.dim();
    let mut a = input.clone();
    let mut q = Matrix::identity(n);
    let two = T::one() + T::one();

    let mut v = vec![Complex::<T>::zero(); n];
    let mut p = vec![Complex::<T>::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x_norm = (k + 1..n)
            .map(|i| a[(i, k)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if x_norm.is_zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let x0_abs = x0.norm();
        let unit = if x0_abs.is_zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0_abs
        };
        let alpha = unit * (-x_norm);

        // v = (x - alpha e1) / |x - alpha e1|
        let v_norm = (two * x_norm * (x_norm + x0_abs)).sqrt();
        let v = &mut v[..m];
        for (idx, i) in (k + 1..n).enumerate() {
            v[idx] = a[(i, k)];
        }
        v[0] = unit * (x0_abs + x_norm);
        for z in v.iter_mut() {
            *z = *z / v_norm;
        }

        // p = B v on the trailing block, K = v^† p, w = p - K v
        let p = &mut p[..m];
        for (r, i) in (k + 1..n).enumerate() {
            let row = &a.row(i)[k + 1..];
            p[r] = row
                .iter()
                .zip(v.iter())
                .fold(Complex::zero(), |s, (b, vj)| s + *b * *vj);
        }
        let kk = v
            .iter()
            .zip(p.iter())
            .fold(Complex::<T>::zero(), |s, (vi, pi)| s + vi.conj() * *pi)
            .re;
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi = *pi - *vi * kk;
        }
        // B <- B - 2 (v w^† + w v^†)
        for r in 0..m {
            let (vr, wr) = (v[r], p[r]);
            let row = k + 1 + r;
            for c in 0..m {
                let col = k + 1 + c;
                let upd = vr * p[c].conj() + wr * v[c].conj();
                a[(row, col)] = a[(row, col)] - upd * two;
            }
        }
        for i in k + 1..n {
            a[(i, k)] = Complex::zero();
            a[(k, i)] = Complex::zero();
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();

        // Q <- Q H on columns k+1..n
        for i in 0..n {
            let qv = (0..m).fold(Complex::<T>::zero(), |s, c| s + q[(i, k + 1 + c)] * v[c]);
            for c in 0..m {
                let col = k + 1 + c;
                q[(i, col)] = q[(i, col)] - qv * v[c].conj() * two;
            }
        }
    }

    let mut d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    // JAMA convention: e[i] couples rows i-1 and i, e[0] = 0.
    let mut e = vec![T::zero(); n];
    let mut phase = Complex::new(T::one(), T::zero());
    for i in 0..n {
        if i > 0 {
            let sub = a[(i, i - 1)];
            let mag = sub.norm();
            e[i] = mag;
            if !mag.is_zero() {
                phase = phase * (sub / mag);
            }
        }
        if i > 0 {
            for r in 0..n {
                q[(r, i)] = q[(r, i)] * phase;
            }
        }
    }

    // Rotations act on eigenvector columns; work on the transpose so each
    // rotation touches two contiguous rows.
    let mut zt = q.adjoint();
    for z in zt.as_mut_slice() {
        *z = z.conj();
    }
    tql2(&mut d, &mut e, &mut zt);
    let mut z = zt.adjoint();
    for x in z.as_mut_slice() {
        *x = x.conj();
    }
    (d, z)
}

/// Implicit QL on the real symmetric tridiagonal (d, e), accumulating the
/// rotations into the rows of `zt` (the transposed eigenvector matrix).
fn tql2<T: Real>(d: &mut [T], e: &mut [T], zt: &mut Matrix<T>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::one() + T::one();
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (head, tail) = zt.as_mut_slice().split_at_mut((i + 1) * n);
                    let row_i = &mut head[i * n..];
                    let row_next = &mut tail[..n];
                    for (zk, zk1) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let (a, b) = (*zk, *zk1);
                        *zk1 = a * s + b * c;
                        *zk = a * c - b * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter >= MAX_QL_ITERATIONS {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }
}
