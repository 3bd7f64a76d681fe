use approx::assert_relative_eq;
use num_complex::Complex;
use proptest::prelude::*;

use super::*;

fn diag(d: &[f64]) -> HermitianOperator<f64> {
    HermitianOperator::from_real_diagonal(d).unwrap()
}

fn real(rows: &[&[f64]]) -> HermitianOperator<f64> {
    HermitianOperator::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn assert_op_close(a: &HermitianOperator<f64>, b: &HermitianOperator<f64>, eps: f64) {
    let d = a.frobenius_distance(b);
    assert!(d <= eps, "operators differ by {d:e}\n{a:?}\n{b:?}");
}

fn check_decomposition(a: &HermitianOperator<f64>, e: &EigenDecomposition<f64>) {
    let norm = a.matrix().frobenius_norm();
    assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!(e.reconstruct().frobenius_distance(a) <= 1e-9 * (1.0 + norm));
    assert!(e.orthonormality_error() <= 1e-10);
}

#[test]
fn eig_diagonal_is_sorted() {
    let e = diag(&[1.0, -2.0]).eig();
    assert_eq!(e.eigenvalues, vec![-2.0, 1.0]);
}

#[test]
fn eig_pauli_x() {
    let e = real(&[&[0.0, 1.0], &[1.0, 0.0]]).eig();
    assert_relative_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
    assert_relative_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
}

#[test]
fn eig_identity() {
    let e = HermitianOperator::<f64>::identity(3).eig();
    assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
}

#[test]
fn eig_pauli_y_complex_entries() {
    let i = Complex::new(0.0, 1.0);
    let z = Complex::new(0.0, 0.0);
    let y = HermitianOperator::new(2, vec![z, -i, i, z]).unwrap();
    let e = y.eig();
    assert_relative_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
    assert_relative_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
    check_decomposition(&y, &e);
}

#[test]
fn non_hermitian_rejected_with_asymmetry() {
    let c = |x: f64| Complex::new(x, 0.0);
    let err = HermitianOperator::new(2, vec![c(1.0), c(2.0), c(0.5), c(1.0)]).unwrap_err();
    match err {
        Error::NotHermitian { asymmetry } => assert_relative_eq!(asymmetry, 1.5),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn jacobi_and_tridiagonal_agree_on_random_matrices() {
    let mut rng = seeded_rng(11);
    for dim in [1usize, 2, 3, 5, 8, 17, 40] {
        let a = random_hermitian::<f64>(dim, &mut rng);
        let j = a.eig_jacobi();
        let t = a.eig_tridiagonal();
        check_decomposition(&a, &j);
        check_decomposition(&a, &t);
        for (x, y) in j.eigenvalues.iter().zip(&t.eigenvalues) {
            assert!((x - y).abs() < 1e-10, "dim {dim}: {x} vs {y}");
        }
    }
}

#[test]
fn degenerate_spectrum_from_tensor_power() {
    let rho = random_state::<f64>(2, 3);
    let big = rho.kron_power(6, DEFAULT_DIM_CAP).unwrap();
    let e = big.eig();
    check_decomposition(&big, &e);
    let single = rho.eigenvalues();
    // eigenvalue p0^6 appears once, p0^5 p1 six times
    let top = single[1].powi(6);
    assert_relative_eq!(e.eigenvalues[63], top, epsilon = 1e-12);
    let second = single[1].powi(5) * single[0];
    let count = e
        .eigenvalues
        .iter()
        .filter(|v| (**v - second).abs() < 1e-12)
        .count();
    assert_eq!(count, 6);
}

#[test]
fn power_on_support_examples() {
    assert_op_close(&diag(&[4.0, 0.0]).power_on_support(0.5).unwrap(), &diag(&[2.0, 0.0]), 1e-14);
    assert_op_close(&diag(&[3.0, 0.0]).power_on_support(0.0).unwrap(), &diag(&[1.0, 0.0]), 1e-14);
    assert_op_close(
        &diag(&[2.0, 8.0]).power_on_support(-0.5).unwrap(),
        &diag(&[2f64.powf(-0.5), 8f64.powf(-0.5)]),
        1e-14,
    );
    // negative power on a singular operator leaves the kernel at zero
    assert_op_close(&diag(&[4.0, 0.0]).power_on_support(-1.0).unwrap(), &diag(&[0.25, 0.0]), 1e-14);
}

#[test]
fn psd_clipping_and_rejection() {
    let tiny = diag(&[1.0, -5e-11]);
    assert_op_close(&tiny.power_on_support(1.0).unwrap(), &diag(&[1.0, 0.0]), 1e-14);
    let bad = diag(&[1.0, -1e-6]);
    assert!(matches!(bad.power_on_support(0.5), Err(Error::NotPositive { .. })));
}

#[test]
fn negative_part_and_trace_norm_examples() {
    assert_relative_eq!(diag(&[1.0, -2.0]).negative_part_trace(), 2.0);
    assert_eq!(diag(&[0.3, 0.7]).negative_part_trace(), 0.0);
    assert_relative_eq!(real(&[&[0.0, 1.0], &[1.0, 0.0]]).negative_part_trace(), 1.0, epsilon = 1e-14);

    let d = &diag(&[1.0, 0.0]) - &diag(&[0.5, 0.5]);
    assert_relative_eq!(d.trace_norm(), 1.0, epsilon = 1e-14);
    assert_eq!(HermitianOperator::<f64>::zeros(3).trace_norm(), 0.0);
    assert_relative_eq!(random_state::<f64>(4, 9).trace_norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn kron_power_examples() {
    let mixed = diag(&[0.5, 0.5]);
    assert_op_close(&mixed.kron_power(2, DEFAULT_DIM_CAP).unwrap(), &diag(&[0.25; 4]), 0.0);

    let a = random_hermitian::<f64>(3, &mut seeded_rng(1));
    assert_eq!(a.kron_power(1, DEFAULT_DIM_CAP).unwrap(), a);

    let mut want = vec![0.0; 8];
    want[0] = 1.0;
    assert_op_close(&diag(&[1.0, 0.0]).kron_power(3, DEFAULT_DIM_CAP).unwrap(), &diag(&want), 0.0);
}

#[test]
fn kron_power_trace_and_cap() {
    let a = random_psd::<f64>(3, &mut seeded_rng(2));
    let p = a.kron_power(4, DEFAULT_DIM_CAP).unwrap();
    assert_relative_eq!(p.trace(), a.trace().powi(4), max_relative = 1e-12);
    assert!(matches!(
        a.kron_power(8, DEFAULT_DIM_CAP),
        Err(Error::DimensionCap { dim: 6561, cap: 4096 })
    ));
    assert!(matches!(a.kron_power(0, DEFAULT_DIM_CAP), Err(Error::ZeroCopies)));
}

#[test]
fn random_state_contract() {
    let one = random_state::<f64>(1, 42);
    assert_eq!(one.entry(0, 0), Complex::new(1.0, 0.0));
    assert_eq!(random_state::<f64>(3, 5), random_state::<f64>(3, 5));
    assert_ne!(random_state::<f64>(3, 5), random_state::<f64>(3, 6));
    let s = random_state::<f64>(2, 7);
    assert_relative_eq!(s.trace(), 1.0, epsilon = 1e-12);
    assert!(s.eigenvalues()[0] > 0.0);
}

#[test]
fn support_leq_examples() {
    let pure = diag(&[1.0, 0.0]);
    let mixed = diag(&[0.5, 0.5]);
    assert!(support_leq(&pure, &mixed).unwrap());
    assert!(!support_leq(&mixed, &pure).unwrap());
    let full = random_state::<f64>(3, 1);
    assert!(support_leq(&full, &full).unwrap());
}

#[test]
fn support_leq_rotated_rank_one() {
    let mut rng = seeded_rng(4);
    let u = random_unitary::<f64>(3, &mut rng);
    let a = diag(&[1.0, 0.0, 0.0]).conjugate_by(&u);
    let b = diag(&[0.3, 0.7, 0.0]).conjugate_by(&u);
    let c = diag(&[0.0, 0.4, 0.6]).conjugate_by(&u);
    assert!(support_leq(&a, &b).unwrap());
    assert!(!support_leq(&a, &c).unwrap());
}

#[test]
fn state_validation() {
    assert!(matches!(
        State::new(diag(&[0.5, 0.6])),
        Err(Error::NotNormalized { .. })
    ));
    assert!(matches!(
        State::new(diag(&[1.5, -0.5])),
        Err(Error::NotPositive { .. })
    ));
    assert!(State::new(diag(&[0.25, 0.75])).is_ok());
}

#[test]
fn single_precision_is_supported() {
    let a = random_hermitian::<f32>(6, &mut seeded_rng(3));
    let e = a.eig();
    let err = e.reconstruct().frobenius_distance(&a);
    assert!(err < 1e-4, "f32 reconstruction {err}");
    let s = random_state::<f32>(3, 1);
    assert!((s.trace_norm() - 1.0).abs() < 1e-5);
}

#[test]
fn operator_file_round_trip_is_exact() {
    let op = random_hermitian::<f64>(3, &mut seeded_rng(8));
    let text = write_operator(&op);
    let back: HermitianOperator<f64> = parse_operator(&text, "mem").unwrap();
    assert_eq!(back, op);
}

#[test]
fn operator_file_rejects_bad_documents() {
    let asym = r#"{"dim": 2, "re": [[1, 2], [0, 1]], "im": [[0, 0], [0, 0]]}"#;
    let err = parse_operator::<f64>(asym, "asym.json").unwrap_err();
    assert!(err.to_string().contains("asym.json"));
    assert!(err.to_string().contains("not Hermitian"));

    let short = r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]}"#;
    let err = parse_operator::<f64>(short, "short.json").unwrap_err();
    assert!(err.to_string().contains("`re`"));

    let extra = r#"{"dim": 1, "re": [[1]], "im": [[0]], "foo": 1}"#;
    assert!(parse_operator::<f64>(extra, "x").is_err());
}

fn hermitian_strategy() -> impl Strategy<Value = HermitianOperator<f64>> {
    (1usize..7, any::<u64>()).prop_map(|(d, seed)| random_hermitian(d, &mut seeded_rng(seed)))
}

fn psd_strategy() -> impl Strategy<Value = HermitianOperator<f64>> {
    (1usize..6, any::<u64>()).prop_map(|(d, seed)| random_psd(d, &mut seeded_rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(a in hermitian_strategy()) {
        let e = a.eig();
        let norm = a.matrix().frobenius_norm();
        prop_assert!(e.reconstruct().frobenius_distance(&a) <= 1e-9 * (1.0 + norm));
        prop_assert!(e.orthonormality_error() <= 1e-10);
    }

    #[test]
    fn power_one_is_identity_map(a in psd_strategy()) {
        let p = a.power_on_support(1.0).unwrap();
        prop_assert!(p.frobenius_distance(&a) <= 1e-10 * (1.0 + a.matrix().frobenius_norm()));
    }

    #[test]
    fn power_round_trip(a in psd_strategy(), half in any::<bool>()) {
        let alpha = if half { 0.5 } else { 2.0 };
        let back = a.power_on_support(alpha).unwrap().power_on_support(1.0 / alpha).unwrap();
        prop_assert!(back.frobenius_distance(&a) <= 1e-9 * (1.0 + a.matrix().frobenius_norm()));
    }

    #[test]
    fn trace_norm_multiplicative(a in hermitian_strategy(), seed in any::<u64>()) {
        let b = random_hermitian::<f64>(2, &mut seeded_rng(seed));
        let lhs = a.kron(&b).trace_norm();
        let rhs = a.trace_norm() * b.trace_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn trace_power_subadditive(seed in any::<u64>(), dim in 1usize..5, k in 1usize..10) {
        let alpha = k as f64 / 10.0;
        let mut rng = seeded_rng(seed);
        let a = random_psd::<f64>(dim, &mut rng);
        let b = random_psd::<f64>(dim, &mut rng);
        let sum = (&a + &b).psd_eig().unwrap().trace_on_support(|x| x.powf(alpha));
        let sep = a.psd_eig().unwrap().trace_on_support(|x| x.powf(alpha))
            + b.psd_eig().unwrap().trace_on_support(|x| x.powf(alpha));
        prop_assert!(sum <= sep + 1e-9 * sep.max(1.0));
    }
}

#[test]
fn symmetrization_leaves_no_negative_zero() {
    let a = diag(&[0.0, 1.0]);
    for z in a.matrix().as_slice() {
        assert!(z.im.is_sign_positive() && z.re.is_sign_positive());
    }
    assert_eq!(write_operator(&a), write_operator(&parse_operator::<f64>(&write_operator(&a), "x").unwrap()));
}
