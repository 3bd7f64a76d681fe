//! Seeded test-instance generation.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{HermitianOperator, Matrix, State};
use crate::scalar::{lit, Real};

pub type StateRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real>(rng: &mut impl Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re), lit(im))
}

fn ginibre<T: Real>(dim: usize, rng: &mut impl Rng) -> Matrix<T> {
    Matrix::from_fn(dim, |_, _| gaussian(rng))
}

/// Full-rank state `G G^† / Tr(G G^†)` for a seeded complex Gaussian `G`.
pub fn random_state<T: Real>(dim: usize, seed: u64) -> State<T> {
    random_state_with_rng(dim, &mut seeded_rng(seed))
}

pub fn random_state_with_rng<T: Real>(dim: usize, rng: &mut impl Rng) -> State<T> {
    assert!(dim >= 1, "state dimension must be at least 1");
    if dim == 1 {
        return State::maximally_mixed(1);
    }
    State::normalized(random_psd(dim, rng)).expect("Gram matrix is a non-zero PSD operator")
}

/// Unnormalized full-rank PSD operator `G G^†`.
pub fn random_psd<T: Real>(dim: usize, rng: &mut impl Rng) -> HermitianOperator<T> {
    let g = ginibre::<T>(dim, rng);
    HermitianOperator::symmetrized(g.matmul(&g.adjoint()))
}

/// `(G + G^†) / 2`.
pub fn random_hermitian<T: Real>(dim: usize, rng: &mut impl Rng) -> HermitianOperator<T> {
    HermitianOperator::symmetrized(ginibre::<T>(dim, rng))
}

/// Haar-like unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<T: Real>(dim: usize, rng: &mut impl Rng) -> Matrix<T> {
    let g = ginibre::<T>(dim, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for u in &cols {
            let proj = u
                .iter()
                .zip(&v)
                .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * *b);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi = *vi - *ui * proj;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for vi in v.iter_mut() {
            *vi = *vi / norm;
        }
        cols.push(v);
    }
    Matrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_pure_state<T: Real>(dim: usize, rng: &mut impl Rng) -> State<T> {
    let psi: Vec<Complex<T>> = (0..dim).map(|_| gaussian(rng)).collect();
    State::pure(&psi).expect("Gaussian vector is non-zero")
}

/// Diagonal state with exponentially distributed weights (uniform on the simplex).
pub fn random_diagonal_state<T: Real>(dim: usize, rng: &mut impl Rng) -> State<T> {
    let w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<T> = w.iter().map(|x| lit(x / total)).collect();
    State::normalized(HermitianOperator::from_real_diagonal(&p).expect("non-empty")).expect("positive weights")
}
