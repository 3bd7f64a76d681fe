//! Writes the operator fixtures used by the test suites into `fixtures/`.

use std::path::PathBuf;

use num_complex::Complex;
use qstein::hermitian::{save_operator, HermitianOperator, Matrix, State};

/// Real rotation by `theta` acting on a qubit.
pub fn rotation(theta: f64) -> Matrix<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let r = [[c, -s], [s, c]];
    Matrix::from_fn(2, |i, j| Complex::new(r[i][j], 0.0))
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let diag = |d: &[f64]| HermitianOperator::from_real_diagonal(d).unwrap();
    let skewed = State::from_diagonal(&[0.9, 0.1]).unwrap();
    let rotated = skewed.conjugate_by(&rotation(std::f64::consts::PI / 8.0));
    let plus = State::pure(&[Complex::new(0.5f64.sqrt(), 0.0), Complex::new(0.0, 0.5f64.sqrt())]).unwrap();
    let files: Vec<(&str, HermitianOperator<f64>)> = vec![
        ("rho_skewed.json", skewed.into_operator()),
        ("rho_skewed_rotated.json", rotated.into_operator()),
        ("sigma_mixed.json", diag(&[0.5, 0.5])),
        ("pure_zero.json", diag(&[1.0, 0.0])),
        ("pure_one.json", diag(&[0.0, 1.0])),
        ("pure_plus_i.json", plus.into_operator()),
    ];
    for (name, op) in files {
        save_operator(&op, dir.join(name)).unwrap();
    }
}
