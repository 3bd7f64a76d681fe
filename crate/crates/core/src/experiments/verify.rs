//! Randomized verification of the library's mathematical properties.
//!
//! Each property is evaluated as a margin that must be non-negative up to its
//! tolerance. A run is fully determined by its seed and trial count.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::Rng;

use crate::covering_net::{build_net, cardinality_bound, tensor_distance_check};
use crate::divergence::{d_new, d_old, d_umegaki, kappa, q_new, q_old};
use crate::hermitian::{
    load_operator, parse_operator, random_diagonal_state, random_hermitian, random_psd, random_state_with_rng,
    random_unitary, seeded_rng, write_operator, HermitianOperator, State, StateRng, DEFAULT_DIM_CAP,
};
use crate::np_oracle::{beta_exact, classical_np, dual_value, type_errors, BinaryTest};
use crate::stein_bounds::{amv_lower, amv_upper, bound_sweep, stein_upper_formula, HypothesisInstance};

use super::format_number;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Operator files that must load and round-trip exactly.
    pub fixtures: Vec<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 3,
            fixtures: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Smallest margin seen; negative beyond tolerance means a failure.
    pub worst_margin: f64,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerifyReport {
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn render(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let _ = writeln!(
                out,
                "{} {:width$} cases={} failures={} worst_margin={}",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.cases,
                r.failures,
                format_number(r.worst_margin),
            );
            if let Some(msg) = &r.first_failure {
                let _ = writeln!(out, "     first failure: {msg}");
            }
        }
        let failed = self.failing().count();
        let _ = writeln!(
            out,
            "{} properties, {} passed, {} failed",
            self.results.len(),
            self.results.len() - failed,
            failed
        );
        out
    }

    fn record(&mut self, name: &str, margin: f64, tolerance: f64, context: impl FnOnce() -> String) {
        let idx = match self.results.iter().position(|r| r.name == name) {
            Some(i) => i,
            None => {
                self.results.push(PropertyResult {
                    name: name.to_string(),
                    cases: 0,
                    failures: 0,
                    worst_margin: f64::INFINITY,
                    first_failure: None,
                });
                self.results.len() - 1
            }
        };
        let r = &mut self.results[idx];
        r.cases += 1;
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        r.worst_margin = r.worst_margin.min(m);
        if m < -tolerance {
            r.failures += 1;
            if r.first_failure.is_none() {
                r.first_failure = Some(format!("margin {} ({})", format_number(m), context()));
            }
        }
    }

    fn fail(&mut self, name: &str, message: String) {
        self.record(name, f64::NEG_INFINITY, 0.0, || message);
    }
}

/// Runs every property `trials` times from `seed`.
pub fn run_verify(config: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut rng = seeded_rng(config.seed);
    for path in &config.fixtures {
        check_fixture(&mut report, path);
    }
    for trial in 0..config.trials.max(1) {
        let suite_seed: u64 = rng.gen();
        let mut rng = seeded_rng(suite_seed);
        hermitian_properties(&mut report, &mut rng);
        divergence_properties(&mut report, &mut rng);
        covering_properties(&mut report, &mut rng);
        oracle_properties(&mut report, &mut rng);
        bound_properties(&mut report, &mut rng, trial);
    }
    report
}

fn check_fixture(report: &mut VerifyReport, path: &PathBuf) {
    let name = format!("fixture {}", path.display());
    let op = match load_operator::<f64>(path) {
        Ok(op) => op,
        Err(e) => return report.fail(&name, e.to_string()),
    };
    report.record(&name, 0.0, 0.0, String::new);
    let text = write_operator(&op);
    let back = parse_operator::<f64>(&text, &name);
    let exact = matches!(&back, Ok(b) if b == &op);
    report.record("fixture.round_trip_bit_exact", if exact { 0.0 } else { -1.0 }, 0.0, || {
        path.display().to_string()
    });
}

fn alpha_grid() -> Vec<f64> {
    let below = (11..=19).map(|i| i as f64 * 0.05);
    let above = (11..=20).map(|i| i as f64 * 0.1);
    below.chain(above).collect()
}

fn hermitian_properties(report: &mut VerifyReport, rng: &mut StateRng) {
    for dim in [2usize, 3, 5, 8, 40] {
        let a = random_hermitian::<f64>(dim, rng);
        let e = a.eig();
        let norm = a.operator_norm();
        let err = e.reconstruct().frobenius_distance(&a);
        report.record("eig.reconstruction", 1e-9 * (1.0 + norm) - err, 0.0, || format!("dim {dim}"));
        report.record("eig.orthonormality", 1e-10 - e.orthonormality_error(), 0.0, || format!("dim {dim}"));
    }
    for dim in [2usize, 3, 4] {
        let a = random_psd::<f64>(dim, rng);
        let p1 = a.power_on_support(1.0).unwrap();
        report.record("power.identity_exponent", 1e-10 - p1.frobenius_distance(&a), 0.0, || format!("dim {dim}"));
        for alpha in [0.5, 2.0] {
            let round = a
                .power_on_support(alpha)
                .and_then(|p| p.power_on_support(1.0 / alpha))
                .unwrap();
            let err = round.frobenius_distance(&a);
            report.record("power.round_trip", 1e-9 * (1.0 + a.operator_norm()) - err, 0.0, || {
                format!("dim {dim} alpha {alpha}")
            });
        }
        let b = random_hermitian::<f64>(2, rng);
        let lhs = a.kron(&b).trace_norm();
        let rhs = a.trace_norm() * b.trace_norm();
        report.record("trace_norm.multiplicative", 1e-9 - (lhs - rhs).abs(), 0.0, || format!("dim {dim}"));
        let c = random_psd::<f64>(dim, rng);
        for i in 1..=9 {
            let alpha = i as f64 / 10.0;
            let f = |x: &HermitianOperator<f64>| x.psd_eig().unwrap().trace_on_support(|v| v.powf(alpha));
            let margin = f(&a) + f(&c) - f(&(&a + &c));
            report.record("trace_power.subadditive", margin, 1e-9, || format!("dim {dim} alpha {alpha}"));
        }
    }
}

fn pair(rng: &mut StateRng) -> (State<f64>, State<f64>, usize) {
    let dim = if rng.gen_bool(0.5) { 2 } else { 3 };
    (random_state_with_rng(dim, rng), random_state_with_rng(dim, rng), dim)
}

fn dold(r: &State<f64>, s: &State<f64>, a: f64) -> f64 {
    d_old(r, s, a).unwrap().to_real()
}

fn dnew(r: &State<f64>, s: &State<f64>, a: f64) -> f64 {
    d_new(r, s, a).unwrap().to_real()
}

fn umegaki(r: &State<f64>, s: &State<f64>) -> f64 {
    d_umegaki(r, s).unwrap().to_real()
}

/// `Tr(ρ^{1/2} σ^{(1-α)/α} ρ^{1/2})^α`.
fn alt_middle(r: &State<f64>, s: &State<f64>, alpha: f64) -> f64 {
    let half = r.power_on_support(0.5).unwrap();
    let inner = s.power_on_support((1.0 - alpha) / alpha).unwrap().sandwich(&half);
    inner.psd_eig().unwrap().trace_on_support(|x| x.powf(alpha))
}

fn divergence_properties(report: &mut VerifyReport, rng: &mut StateRng) {
    let (rho, sigma, dim) = pair(rng);
    let ctx = |a: f64| move || format!("dim {dim} alpha {a}");
    let log_d = (dim as f64).ln();

    let mut prev = f64::NEG_INFINITY;
    for &a in &alpha_grid() {
        let v = dold(&rho, &sigma, a);
        report.record("divergence.monotone_in_alpha", v - prev, 1e-9, ctx(a));
        prev = v;
    }

    let d1 = umegaki(&rho, &sigma);
    for a in [1.0 - 1e-4, 1.0 + 1e-4] {
        report.record("divergence.limit_at_one.old", 1e-2 - (dold(&rho, &sigma, a) - d1).abs(), 0.0, ctx(a));
        report.record("divergence.limit_at_one.new", 1e-2 - (dnew(&rho, &sigma, a) - d1).abs(), 0.0, ctx(a));
    }

    let k = kappa(&rho, &sigma).unwrap();
    report.record("divergence.kappa_above_one", k - 1.0, 0.0, || format!("dim {dim}"));
    for c in [0.5, 1.0, 2.0] {
        let delta = (0.5f64).min(c / (2.0 * k));
        for f in [0.1, 0.5, 0.9] {
            let below = 1.0 - f * delta;
            let above = 1.0 + f * delta;
            let slack = |a: f64| 4.0 * (a - 1.0).abs() * k * k * c.cosh();
            let (lo, hi) = (dold(&rho, &sigma, below), dold(&rho, &sigma, above));
            report.record("tcr.below_one.upper", d1 - lo, 1e-9, ctx(below));
            report.record("tcr.below_one.lower", lo - (d1 - slack(below)), 1e-9, ctx(below));
            report.record("tcr.above_one.lower", hi - d1, 1e-9, ctx(above));
            report.record("tcr.above_one.upper", d1 + slack(above) - hi, 1e-9, ctx(above));
        }
    }

    let rank = rng.gen_range(1..=dim);
    let u = random_unitary::<f64>(dim, rng);
    let w: Vec<f64> = (0..dim).map(|i| if i < rank { rng.gen_range(0.05..2.0) } else { 0.0 }).collect();
    let psd = HermitianOperator::from_real_diagonal(&w).unwrap().conjugate_by(&u);
    for a in [0.2, 0.5, 0.8] {
        let e = psd.psd_eig().unwrap();
        let lhs = e.trace_on_support(|x| x.powf(a));
        let rhs = (rank as f64).powf(1.0 - a) * psd.trace().powf(a);
        report.record("trace_power.rank_bound", rhs - lhs, 1e-9, ctx(a));
    }

    let norm = sigma.operator_norm();
    for &a in &alpha_grid() {
        let qo = q_old(&rho, &sigma, a).unwrap();
        let mid = alt_middle(&rho, &sigma, a);
        let tr_pow = rho.psd_eig().unwrap().trace_on_support(|x| x.powf(a));
        let far = norm.powf((1.0 - a) * (1.0 - a)) * tr_pow.powf(1.0 - a) * qo.powf(a);
        let (old, new) = (dold(&rho, &sigma, a), dnew(&rho, &sigma, a));
        let weak = a * old - (a - 1.0).abs() * log_d;
        if a < 1.0 {
            report.record("old_new_chain.first.below_one", mid - qo, 1e-9, ctx(a));
            report.record("old_new_chain.second.below_one", far - mid, 1e-9, ctx(a));
            report.record("old_new.old_ge_new.below_one", old - new, 1e-9, ctx(a));
            report.record("old_new.new_ge_scaled_old.below_one", new - weak, 1e-9, ctx(a));
        } else {
            report.record("old_new_chain.first.above_one", qo - mid, 1e-9, ctx(a));
            report.record("old_new_chain.second.above_one", mid - far, 1e-9, ctx(a));
            report.record("old_new.old_ge_new.above_one", old - new, 1e-9, ctx(a));
            report.record("old_new.new_ge_scaled_old.above_one", new - weak, 1e-9, ctx(a));
        }
    }

    let r = rng.gen_range(2..=4);
    let parts: Vec<State<f64>> = (0..r).map(|_| random_state_with_rng(dim, rng)).collect();
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
        report.record("mixture.concavity", qm - avg, 1e-9, ctx(a));
        report.record("mixture.subadditivity", sub - qm, 1e-9, ctx(a));
        let ds: Vec<f64> = parts.iter().map(|p| dnew(p, &sigma, a)).collect();
        let dm = dnew(&mix, &sigma, a);
        let dmin = ds.iter().copied().fold(f64::INFINITY, f64::min);
        let davg: f64 = gamma.iter().zip(&ds).map(|(g, d)| g * d).sum();
        report.record("mixture.new_divergence.lower", dm - (dmin + gmin.ln()), 1e-9, ctx(a));
        report.record("mixture.new_divergence.upper", davg - dm, 1e-9, ctx(a));
    }

    let a = [0.5, 0.8, 1.5][rng.gen_range(0..3)];
    let rr = rho.kron(&rho);
    let ss = sigma.kron(&sigma);
    let two = d_new(&rr, &ss, a).unwrap().to_real();
    report.record("divergence.new_additive", 1e-8 - (two - 2.0 * dnew(&rho, &sigma, a)).abs(), 0.0, ctx(a));

    for a in [0.5, 2.0] {
        report.record("divergence.nonnegative.old", dold(&rho, &sigma, a), 1e-10, ctx(a));
        report.record("divergence.nonnegative.new", dnew(&rho, &sigma, a), 1e-10, ctx(a));
        report.record("divergence.zero_on_diagonal", 1e-10 - dold(&rho, &rho, a).abs().max(dnew(&rho, &rho, a).abs()), 0.0, ctx(a));
    }
}

fn covering_properties(report: &mut VerifyReport, rng: &mut StateRng) {
    let size = rng.gen_range(1..=20);
    let pool: Vec<State<f64>> = (0..size).map(|_| random_state_with_rng(2, rng)).collect();
    let mut last = usize::MAX;
    for delta in [0.0, 0.05, 0.2, 0.5, 1.0, 2.5] {
        let net = match build_net(&pool, delta) {
            Ok(n) => n,
            Err(e) => return report.fail("net.covering", e.to_string()),
        };
        let radius = pool
            .iter()
            .map(|p| {
                net.members
                    .iter()
                    .map(|m| (p.operator() - m.operator()).trace_norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let ctx = || format!("pool {size} delta {delta}");
        report.record("net.covering", delta.max(1e-12) - radius, 1e-12, ctx);
        let bound = cardinality_bound(2, delta, pool.len());
        report.record("net.cardinality_bound", bound - net.len() as f64, 0.0, ctx);
        report.record("net.monotone_in_delta", last as f64 - net.len() as f64, 0.0, ctx);
        last = net.len();
    }
    let (a, b) = (&pool[0], &random_state_with_rng(2, rng));
    for n in 1..=4 {
        let (lhs, rhs) = tensor_distance_check(a, b, n, DEFAULT_DIM_CAP).unwrap();
        report.record("net.tensor_distance", rhs - lhs, 1e-9, || format!("n {n}"));
    }
}

fn probabilities(s: &State<f64>) -> Vec<f64> {
    (0..s.dim()).map(|i| s.entry(i, i).re).collect()
}

fn oracle_properties(report: &mut VerifyReport, rng: &mut StateRng) {
    let eps = [0.05, 0.1, 0.3][rng.gen_range(0..3)];

    // commuting instance against the classical oracle
    let dim = rng.gen_range(2..=8);
    let k = rng.gen_range(1..=3);
    let nulls: Vec<State<f64>> = (0..k).map(|_| random_diagonal_state(dim, rng)).collect();
    let sigma = random_diagonal_state::<f64>(dim, rng);
    let ops: Vec<HermitianOperator<f64>> = nulls.iter().map(|s| s.operator().clone()).collect();
    let ctx = || format!("dim {dim} k {k} eps {eps}");
    match beta_exact(&ops, &sigma, eps) {
        Ok(sol) => {
            let p: Vec<Vec<f64>> = nulls.iter().map(probabilities).collect();
            let classical = classical_np(&p, &probabilities(&sigma), eps).unwrap().beta;
            report.record("oracle.classical_agreement", 1e-7 - (sol.primal_value - classical).abs(), 0.0, ctx);
            report.record("oracle.strong_duality", 1e-7 - sol.gap, 0.0, ctx);
            report.record("oracle.gap_nonnegative", sol.gap, 1e-9, ctx);
            report.record("oracle.primal_feasible", eps - sol.primal_alpha, 1e-8, ctx);
            for _ in 0..3 {
                let lambdas: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..3.0)).collect();
                let dual = dual_value(&lambdas, &ops, &sigma, eps).unwrap();
                report.record("oracle.weak_duality", classical - dual, 1e-9, ctx);
            }
        }
        Err(e) => report.fail("oracle.strong_duality", e.to_string()),
    }

    // non-commuting qubit powers
    let n = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=2);
    let base: Vec<State<f64>> = (0..k).map(|_| random_state_with_rng(2, rng)).collect();
    let sigma1 = random_state_with_rng::<f64>(2, rng);
    let nulls: Vec<HermitianOperator<f64>> = base.iter().map(|s| s.operator().kron_power(n, DEFAULT_DIM_CAP).unwrap()).collect();
    let sigma_n = sigma1.operator().kron_power(n, DEFAULT_DIM_CAP).unwrap();
    let ctx = || format!("qubit n {n} k {k} eps {eps}");
    let Ok(full) = beta_exact(&nulls, &sigma_n, eps) else {
        return report.fail("oracle.strong_duality", ctx());
    };
    report.record("oracle.strong_duality", 1e-7 - full.gap, 0.0, ctx);
    report.record("oracle.primal_feasible", eps - full.primal_alpha, 1e-8, ctx);
    for eta in [0.0, 0.5 * eps, eps] {
        let test = BinaryTest::new(HermitianOperator::identity(sigma_n.dim()).scale(1.0 - eta)).unwrap();
        let (_, beta) = type_errors(&test, &nulls, &sigma_n).unwrap();
        let lambdas: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..3.0)).collect();
        let dual = dual_value(&lambdas, &nulls, &sigma_n, eps).unwrap();
        report.record("oracle.weak_duality", beta - dual, 1e-9, ctx);
    }
    let larger = beta_exact(&nulls, &sigma_n, (eps * 1.5).min(0.9)).unwrap();
    report.record("oracle.monotone_in_epsilon", full.dual_value - larger.primal_value, 1e-7, ctx);
    let subset = beta_exact(&nulls[..1], &sigma_n, eps).unwrap();
    report.record("oracle.monotone_in_nulls", full.primal_value - subset.dual_value, 1e-7, ctx);
    let weights = vec![1.0 / k as f64; k];
    let powers: Vec<State<f64>> = nulls.iter().map(|w| State::new(w.clone()).unwrap()).collect();
    let mixture = State::mixture(&powers, &weights).unwrap();
    let mixed = beta_exact(&[mixture.into_operator()], &sigma_n, eps / k as f64).unwrap();
    report.record("oracle.mixture_reduction", mixed.primal_value - full.dual_value, 1e-7, ctx);

    // single pair against the single-copy bounds
    let (rho, sig) = (&base[0], &sigma1);
    let single = beta_exact(&[rho.operator().clone()], sig, 0.1).unwrap();
    for i in 2..=9 {
        let a = i as f64 / 10.0;
        let up = amv_upper(rho, sig, 0.1, a).unwrap();
        report.record("oracle.single_copy_upper", up - single.primal_value.ln(), 1e-8, || format!("alpha {a}"));
    }
    let one = beta_exact(&[rho.operator().kron_power(n, DEFAULT_DIM_CAP).unwrap()], &sigma_n, 0.1).unwrap();
    let low = amv_lower(rho, sig, 0.1, n).unwrap();
    report.record("oracle.single_copy_lower", one.dual_value.ln() / n as f64 - low, 1e-8, || format!("n {n}"));
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0.ln()).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    sxy / sxx
}

fn bound_properties(report: &mut VerifyReport, rng: &mut StateRng, trial: usize) {
    let eps = [0.05, 0.1, 0.3][trial % 3];
    let k = rng.gen_range(1..=2);
    let pool: Vec<State<f64>> = (0..k).map(|_| random_state_with_rng(2, rng)).collect();
    let sigma = random_state_with_rng::<f64>(2, rng);
    let instance = match HypothesisInstance::new(pool, sigma, eps, true) {
        Ok(i) => i,
        Err(e) => return report.fail("bounds.bracket", e.to_string()),
    };
    let ns: Vec<usize> = (1..=5).collect();
    let reports = match bound_sweep(&instance, &ns, true, DEFAULT_DIM_CAP) {
        Ok(r) => r,
        Err(e) => return report.fail("bounds.bracket", e.to_string()),
    };
    let d1 = instance.d1_inf();
    let kmax = instance.kappa_max();
    for r in &reports {
        let exact = r.exact.unwrap_or(f64::NAN);
        let ctx = || format!("n {} eps {eps} k {k}", r.n);
        report.record("bounds.bracket.lower", exact - r.lower, 1e-6, ctx);
        report.record("bounds.bracket.upper", r.upper_clamped - exact, 1e-6, ctx);
        report.record("bounds.lower_le_upper", r.upper_raw - r.lower, 0.0, ctx);
        let sn = (r.n as f64).sqrt();
        let scaled = sn * (exact + d1);
        let l = (2.0 * r.net_size as f64 / eps).ln();
        let lo = -4.0 * 2f64.sqrt() * kmax * (1.0 / (1.0 - eps)).ln();
        let hi = 2.0 * l.sqrt() * (8.0 * kmax * kmax + 2f64.ln() + d1).sqrt() + 4.0 * kmax * l / sn;
        report.record("bounds.second_order.lower", scaled - lo, 1e-6, ctx);
        report.record("bounds.second_order.upper", hi - scaled, 1e-6, ctx);
    }
    let last = reports.last().unwrap();
    let exact = last.exact.unwrap_or(f64::NAN);
    report.record("bounds.stein_consistency.bracket", (exact - last.lower).min(last.upper_raw - exact), 1e-6, || {
        format!("n {}", last.n)
    });
    let mid = 0.5 * (last.lower + last.upper_raw);
    let half = 0.5 * (last.upper_raw - last.lower);
    report.record("bounds.stein_consistency.midpoint", half - (mid + d1).abs(), 1e-12, || format!("n {}", last.n));

    let wide = [4usize, 8, 16, 32, 64];
    let widths = bound_sweep(&instance, &wide, false, DEFAULT_DIM_CAP).unwrap();
    for pair in widths.windows(2) {
        let a = pair[0].upper_raw - pair[0].lower;
        let b = pair[1].upper_raw - pair[1].lower;
        report.record("bounds.width_decreasing", a - b, 0.0, || format!("n {} -> {}", pair[0].n, pair[1].n));
    }
    let pts: Vec<(f64, f64)> = widths.iter().map(|r| (r.n as f64, r.upper_raw - r.lower)).collect();
    let exponent = -log_log_slope(&pts);
    report.record("bounds.width_rate", (exponent - 0.4).min(0.6 - exponent), 0.0, || {
        format!("fitted exponent {exponent:.4}")
    });
    let upper_pts: Vec<(f64, f64)> = wide
        .iter()
        .map(|&n| {
            let u = stein_upper_formula(d1, kmax, 2f64.ln(), eps, n, instance.null_pool().len() as f64);
            (n as f64, u + d1)
        })
        .collect();
    let far = upper_pts.last().unwrap().1;
    report.record("bounds.upper_tends_to_d1", upper_pts[0].1 - far, 0.0, String::new);
}
