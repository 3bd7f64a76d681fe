//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Three criteria cannot hold as stated (see README, "Known failures"). For
//! those the harness still prints FAIL, then checks that the failure is the
//! analyzed one and nothing else. The process exits nonzero on any other
//! failure, or when a known failure changes shape.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex;
use qstein::covering_net::{build_net, cardinality_bound, continuum_net_size, tensor_distance_check};
use qstein::divergence::{d_new, d_old, d_umegaki, kappa, q_new, q_old};
use qstein::experiments::{cmd_sweep, DeltaChoice, ExperimentConfig};
use qstein::hermitian::{
    parse_operator, random_diagonal_state, random_state_with_rng, random_unitary, seeded_rng, write_operator,
    HermitianOperator, Matrix, State, DEFAULT_DIM_CAP,
};
use qstein::np_oracle::{beta_exact, classical_np, GAP_TOL};
use qstein::stein_bounds::{amv_lower, amv_upper, bound_sweep, stein_upper_formula, HypothesisInstance};
use rand::Rng;

const SLACK: f64 = -1e-9;

/// Worst slack per named inequality.
#[derive(Default)]
struct Slacks(BTreeMap<&'static str, (usize, f64)>);

impl Slacks {
    fn add(&mut self, name: &'static str, slack: f64) {
        let e = self.0.entry(name).or_insert((0, f64::INFINITY));
        e.0 += 1;
        if !(slack >= e.1) {
            e.1 = slack;
        }
    }

    fn failing(&self, floor: f64) -> Vec<&'static str> {
        self.0.iter().filter(|(_, v)| !(v.1 >= floor)).map(|(k, _)| *k).collect()
    }

    fn summary(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={:.3e} ({})", v.1, v.0)).collect();
        parts.join(", ")
    }
}

struct Verdict {
    pass: bool,
    detail: String,
    /// For criteria known to be unattainable: whether the failure matches the analysis.
    known: Option<(bool, &'static str)>,
}

impl Verdict {
    fn plain(pass: bool, detail: String) -> Self {
        Verdict { pass, detail, known: None }
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> State<f64> {
    let text = std::fs::read_to_string(fixtures().join(name)).unwrap();
    State::new(parse_operator(&text, name).unwrap()).unwrap()
}

fn rotation(theta: f64) -> Matrix<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let r = [[c, -s], [s, c]];
    Matrix::from_fn(2, |i, j| Complex::new(r[i][j], 0.0))
}

fn within(elapsed: Duration, limit: u64) -> bool {
    elapsed <= Duration::from_secs(limit)
}

fn tr_pow(op: &HermitianOperator<f64>, a: f64) -> f64 {
    op.psd_eig().unwrap().trace_on_support(|x| x.powf(a))
}

fn divergence_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded_rng(101);
    let below: Vec<f64> = (11..=19).map(|i| i as f64 * 0.05).collect();
    let above: Vec<f64> = (11..=20).map(|i| i as f64 * 0.1).collect();
    let grid: Vec<f64> = below.iter().chain(&above).copied().collect();
    let mut s = Slacks::default();
    for i in 0..200 {
        let dim = 2 + i % 2;
        let rho = random_state_with_rng::<f64>(dim, &mut rng);
        let sigma = random_state_with_rng::<f64>(dim, &mut rng);
        let log_d = (dim as f64).ln();
        let norm = sigma.operator_norm();
        let half = rho.power_on_support(0.5).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for &a in &grid {
            let old = d_old(&rho, &sigma, a).unwrap().to_real();
            let new = d_new(&rho, &sigma, a).unwrap().to_real();
            s.add("monotone_in_alpha", old - prev);
            prev = old;
            let qo = q_old(&rho, &sigma, a).unwrap();
            let mid = tr_pow(&sigma.power_on_support((1.0 - a) / a).unwrap().sandwich(&half), a);
            let far = norm.powf((1.0 - a) * (1.0 - a)) * tr_pow(&rho, a).powf(1.0 - a) * qo.powf(a);
            let scaled = a * old - (a - 1.0).abs() * log_d;
            if a < 1.0 {
                s.add("chain.first.below_one", mid - qo);
                s.add("chain.second.below_one", far - mid);
                s.add("old_ge_new.below_one", old - new);
                s.add("new_ge_scaled_old.below_one", new - scaled);
                // power bound on the full-rank state and on a rank-deficient operator
                s.add("power_bound", (dim as f64).powf(1.0 - a) - tr_pow(&rho, a));
            } else {
                s.add("chain.first.above_one", qo - mid);
                s.add("chain.second.above_one", mid - far);
                s.add("old_ge_new.above_one", old - new);
                s.add("new_ge_scaled_old.above_one", new - scaled);
            }
        }
        let rank = rng.gen_range(1..=dim);
        let w: Vec<f64> = (0..dim).map(|j| if j < rank { rng.gen_range(0.05..2.0) } else { 0.0 }).collect();
        let psd = HermitianOperator::from_real_diagonal(&w).unwrap().conjugate_by(&random_unitary(dim, &mut rng));
        for &a in &below {
            s.add("power_bound", (rank as f64).powf(1.0 - a) * psd.trace().powf(a) - tr_pow(&psd, a));
        }
    }
    let elapsed = start.elapsed();
    let failing = s.failing(SLACK);
    let pass = failing.is_empty() && within(elapsed, 10);
    let analyzed = failing == ["chain.second.above_one", "new_ge_scaled_old.above_one"] && within(elapsed, 10);
    Verdict {
        pass,
        detail: format!("{:.2}s; {}", elapsed.as_secs_f64(), s.summary()),
        known: Some((
            analyzed,
            "the reversed second link and new >= a*old - |a-1| log d are false for a > 1",
        )),
    }
}

fn tcr_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded_rng(202);
    let mut s = Slacks::default();
    for i in 0..100 {
        let dim = 2 + i % 2;
        let rho = random_state_with_rng::<f64>(dim, &mut rng);
        let sigma = random_state_with_rng::<f64>(dim, &mut rng);
        let d1 = d_umegaki(&rho, &sigma).unwrap().to_real();
        let k = kappa(&rho, &sigma).unwrap();
        s.add("kappa_above_one", if k > 1.0 { 0.0 } else { -1.0 });
        for c in [0.5, 1.0, 2.0f64] {
            let delta = 0.5f64.min(c / (2.0 * k));
            let slack = |a: f64| 4.0 * (a - 1.0).abs() * k * k * c.cosh();
            for _ in 0..5 {
                let lo = 1.0 - delta * rng.gen_range(0.01..0.99);
                let hi = 1.0 + delta * rng.gen_range(0.01..0.99);
                let dl = d_old(&rho, &sigma, lo).unwrap().to_real();
                let dh = d_old(&rho, &sigma, hi).unwrap().to_real();
                s.add("below_one.upper", d1 - dl);
                s.add("below_one.lower", dl - (d1 - slack(lo)));
                s.add("above_one.lower", dh - d1);
                s.add("above_one.upper", d1 + slack(hi) - dh);
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = s.failing(SLACK).is_empty() && within(elapsed, 10);
    Verdict::plain(pass, format!("{:.2}s; {}", elapsed.as_secs_f64(), s.summary()))
}

fn mixture_suite() -> Verdict {
    let mut rng = seeded_rng(303);
    let mut s = Slacks::default();
    for i in 0..100 {
        let dim = 2 + i % 2;
        let r = [2, 3, 4][i % 3];
        let sigma = random_state_with_rng::<f64>(dim, &mut rng);
        let parts: Vec<State<f64>> = (0..r).map(|_| random_state_with_rng(dim, &mut rng)).collect();
        let mut gamma: Vec<f64> = (0..r).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = gamma.iter().sum();
        gamma.iter_mut().for_each(|g| *g /= total);
        let mix = State::mixture(&parts, &gamma).unwrap();
        let gmin = gamma.iter().copied().fold(f64::INFINITY, f64::min);
        for a in [0.3, 0.5, 0.7, 0.9] {
            let qs: Vec<f64> = parts.iter().map(|p| q_new(p, &sigma, a).unwrap()).collect();
            let qm = q_new(&mix, &sigma, a).unwrap();
            let avg: f64 = gamma.iter().zip(&qs).map(|(g, q)| g * q).sum();
            let sub: f64 = gamma.iter().zip(&qs).map(|(g, q)| g.powf(a) * q).sum();
            s.add("concavity", qm - avg);
            s.add("subadditivity", sub - qm);
            let ds: Vec<f64> = parts.iter().map(|p| d_new(p, &sigma, a).unwrap().to_real()).collect();
            let dm = d_new(&mix, &sigma, a).unwrap().to_real();
            let dmin = ds.iter().copied().fold(f64::INFINITY, f64::min);
            let davg: f64 = gamma.iter().zip(&ds).map(|(g, d)| g * d).sum();
            s.add("superadditivity.lower", dm - (dmin + gmin.ln()));
            s.add("superadditivity.upper", davg - dm);
        }
    }
    Verdict::plain(s.failing(SLACK).is_empty(), s.summary())
}

fn diagonal(state: &State<f64>) -> Vec<f64> {
    (0..state.dim()).map(|i| state.entry(i, i).re).collect()
}

fn oracle_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded_rng(404);
    let eps_grid = [0.05, 0.1, 0.3];
    let (mut worst_diff, mut worst_gap, mut failures) = (0.0f64, 0.0f64, 0);
    for i in 0..50 {
        let dim = 2 + i % 7;
        let eps = eps_grid[i % 3];
        let k = 1 + (i / 7) % 3;
        let nulls: Vec<State<f64>> = (0..k).map(|_| random_diagonal_state(dim, &mut rng)).collect();
        let sigma = random_diagonal_state::<f64>(dim, &mut rng);
        let ops: Vec<_> = nulls.iter().map(|n| n.operator().clone()).collect();
        let sol = beta_exact(&ops, sigma.operator(), eps).unwrap();
        let p: Vec<Vec<f64>> = nulls.iter().map(diagonal).collect();
        let classical = classical_np(&p, &diagonal(&sigma), eps).unwrap();
        let diff = (sol.beta() - classical.beta).abs();
        worst_diff = worst_diff.max(diff);
        worst_gap = worst_gap.max(sol.gap);
        if !(diff <= 1e-7 && sol.gap <= GAP_TOL) {
            failures += 1;
        }
    }
    let mut worst_noncommuting = 0.0f64;
    for i in 0..50 {
        let eps = eps_grid[i % 3];
        let k = 1 + i % 3;
        let nulls: Vec<_> = (0..k).map(|_| random_state_with_rng::<f64>(2, &mut rng).into_operator()).collect();
        let sigma = random_state_with_rng::<f64>(2, &mut rng);
        let sol = beta_exact(&nulls, sigma.operator(), eps).unwrap();
        worst_noncommuting = worst_noncommuting.max(sol.gap);
        // the dual value and the recovered test's value bracket beta; its width is the gap
        if !(sol.gap <= 1e-7 || (sol.primal_alpha <= eps + 1e-8 && sol.gap <= 1e-5)) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    Verdict::plain(
        failures == 0 && within(elapsed, 60),
        format!(
            "{:.2}s; commuting |diff|<={worst_diff:.2e} gap<={worst_gap:.2e}; qubit gap<={worst_noncommuting:.2e}",
            elapsed.as_secs_f64()
        ),
    )
}

fn fixture_instance() -> HypothesisInstance<f64> {
    let pool = vec![fixture("rho_skewed.json"), fixture("rho_skewed_rotated.json")];
    HypothesisInstance::new(pool, fixture("sigma_mixed.json"), 0.05, true).unwrap()
}

fn bracket_suite() -> Verdict {
    let start = Instant::now();
    let instance = fixture_instance();
    let ns: Vec<usize> = (1..=8).collect();
    let reports = bound_sweep(&instance, &ns, true, DEFAULT_DIM_CAP).unwrap();
    let d1 = instance.d1_inf();
    let kmax = instance.kappa_max();
    let mut bracket = true;
    let mut exacts = Vec::new();
    for r in &reports {
        let e = r.exact.unwrap_or(f64::NAN);
        exacts.push(format!("{e:.4}"));
        bracket &= r.exact_certified && r.lower - 1e-6 <= e && e <= r.upper_clamped.min(0.0) + 1e-6;
    }
    let window = 4.0 * 2f64.sqrt() * kmax * (1.0 / (1.0 - instance.epsilon())).ln() / 8f64.sqrt();
    let e8 = reports[7].exact.unwrap_or(f64::NAN);
    let near = (e8 + d1).abs() <= window;
    let elapsed = start.elapsed();
    let in_time = within(elapsed, 300);
    Verdict {
        pass: bracket && near && in_time,
        detail: format!(
            "{:.1}s; bracket {}; |exact(8)+D1| = {:.4} vs window {window:.4}; D1 {d1:.4} kappa_max {kmax:.4}; exact [{}]",
            elapsed.as_secs_f64(),
            if bracket { "holds" } else { "violated" },
            (e8 + d1).abs(),
            exacts.join(", ")
        ),
        // exact(8) sits above -D1 + window: the lower bound is one-sided and says nothing about that side
        known: Some((bracket && in_time && e8 > -d1 + window, "exact(8) is above the one-sided window")),
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0.ln()).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    sxy / sxx
}

fn rate_suite() -> Verdict {
    let instance = fixture_instance();
    let (d1, kmax, eps) = (instance.d1_inf(), instance.kappa_max(), instance.epsilon());
    let log_d = (instance.dim() as f64).ln();
    let ns = [4usize, 8, 16, 32, 64];
    let fit = |size: &dyn Fn(usize) -> f64| {
        let pts: Vec<(f64, f64)> =
            ns.iter().map(|&n| (n as f64, stein_upper_formula(d1, kmax, log_d, eps, n, size(n)) + d1)).collect();
        slope(&pts)
    };
    let finite = fit(&|_| instance.null_pool().len() as f64);
    let infinite = fit(&|n| continuum_net_size(instance.dim(), eps / (2.0 * (n * n) as f64)));
    let in_band = (-0.6..=-0.4).contains(&finite);
    let shallower = infinite > finite;
    Verdict {
        pass: in_band && shallower,
        detail: format!("finite slope {finite:.4}; infinite-family slope {infinite:.4}"),
        // the 4 kappa L / n term still weighs in over n = 4..64
        known: Some((
            shallower && finite < -0.6 && finite > -0.7,
            "the O(1/n) term steepens the fit below -0.6 at these n",
        )),
    }
}

fn amv_suite() -> Verdict {
    let mut rng = seeded_rng(707);
    let mut s = Slacks::default();
    for _ in 0..50 {
        let rho = random_state_with_rng::<f64>(2, &mut rng);
        let sigma = random_state_with_rng::<f64>(2, &mut rng);
        let sol = beta_exact(&[rho.operator().clone()], sigma.operator(), 0.1).unwrap();
        let log_beta = sol.beta().ln();
        for i in 2..=9 {
            let a = i as f64 / 10.0;
            s.add("upper", amv_upper(&rho, &sigma, 0.1, a).unwrap() - log_beta);
        }
        s.add("lower", log_beta - amv_lower(&rho, &sigma, 0.1, 1).unwrap());
    }
    Verdict::plain(s.failing(-1e-8).is_empty(), s.summary())
}

fn net_suite() -> Verdict {
    let mut rng = seeded_rng(808);
    let mut s = Slacks::default();
    for _ in 0..50 {
        let size = rng.gen_range(1..=20);
        let pool: Vec<State<f64>> = (0..size).map(|_| random_state_with_rng(2, &mut rng)).collect();
        for delta in [0.0, 0.05, 0.2, 0.5, 1.0, 2.5] {
            let net = build_net(&pool, delta).unwrap();
            let radius = pool
                .iter()
                .map(|p| {
                    net.members
                        .iter()
                        .map(|m| (p.operator() - m.operator()).trace_norm())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            s.add("covering", delta.max(1e-12) - radius);
            s.add("cardinality", cardinality_bound(2, delta, size) - net.len() as f64);
        }
        let other = random_state_with_rng::<f64>(2, &mut rng);
        for n in 1..=4 {
            let (lhs, rhs) = tensor_distance_check(&pool[0], &other, n, DEFAULT_DIM_CAP).unwrap();
            s.add("tensor", rhs - lhs);
        }
    }
    Verdict::plain(s.failing(SLACK).is_empty(), s.summary())
}

fn interface_suite() -> Verdict {
    let mut notes = Vec::new();
    let files = ["rho_skewed.json", "rho_skewed_rotated.json"].map(|f| fixtures().join(f));
    let configs = [
        ExperimentConfig { seed: 9, n_max: 4, with_exact: true, ..ExperimentConfig::default() },
        ExperimentConfig {
            pool: files.to_vec(),
            sigma: Some(fixtures().join("sigma_mixed.json")),
            n_max: 4,
            with_exact: true,
            delta: DeltaChoice::Schedule,
            ..ExperimentConfig::default()
        },
    ];
    let mut deterministic = true;
    for c in &configs {
        let (a, b) = (cmd_sweep(c).unwrap(), cmd_sweep(c).unwrap());
        deterministic &= a.csv == b.csv && a.csv.lines().count() == 5;
    }
    notes.push(format!("sweep deterministic {deterministic}"));

    let mut exact = true;
    let mut entries: Vec<_> = std::fs::read_dir(fixtures()).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in &entries {
        let text = std::fs::read_to_string(path).unwrap();
        let op = parse_operator::<f64>(&text, &path.display().to_string()).unwrap();
        let again = parse_operator::<f64>(&write_operator(&op), "rewritten").unwrap();
        let ok = write_operator(&op) == text && again == op;
        if !ok {
            notes.push(format!("{} not bit-exact", path.display()));
        }
        exact &= ok;
    }
    let rotated = State::from_diagonal(&[0.9, 0.1]).unwrap().conjugate_by(&rotation(std::f64::consts::PI / 8.0));
    let same = fixture("rho_skewed_rotated.json") == rotated;
    exact &= same;
    notes.push(format!("{} fixtures bit-exact {exact}; rotation matches {same}", entries.len()));
    Verdict::plain(deterministic && exact, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("1 divergence inequalities", divergence_suite),
        ("2 TCR", tcr_suite),
        ("3 mixtures", mixture_suite),
        ("4 oracle cross-validation", oracle_suite),
        ("5 fixture bracket", bracket_suite),
        ("6 rate order", rate_suite),
        ("7 single-pair bounds", amv_suite),
        ("8 nets", net_suite),
        ("9 determinism and file format", interface_suite),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (name, run) in criteria {
        let v = run();
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if v.pass {
            continue;
        }
        match v.known {
            Some((true, why)) => {
                known += 1;
                println!("     known failure, matches analysis: {why}");
            }
            Some((false, why)) => {
                unexpected += 1;
                println!("     known failure changed shape (expected: {why})");
            }
            None => unexpected += 1,
        }
    }
    println!("acceptance: {} passed, {known} known failures, {unexpected} unexpected", 9 - known - unexpected);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
