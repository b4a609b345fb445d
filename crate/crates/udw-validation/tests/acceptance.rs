//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them. Lines are written straight to stderr so
//! they appear whether or not the harness captures output.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use udw_core::closed::{pp_inertial, pp_uad, qq_uad};
use udw_core::mode::{q_a, response_kernel, response_kernel_dot};
use udw_core::model::{derive_params, retarded_kinematics, trajectory_position, SpacetimePoint};
use udw_core::oracle::{inertial_oracle, KappaRange};
use udw_core::special::{digamma, gamma0, hyp_f};
use udw_core::{CorrelatorOptions, DetectorParams, Observable, QuadratureConfig, Trajectory};
use udw_runner::config::{ObservableSpec, RunConfig};
use udw_runner::figures::{figure_curves, FigureId};
use udw_runner::run::run_compare;

/// Relative tolerance of every reference-value comparison.
const REFERENCE_REL_TOL: f64 = 5e-3;
/// Oracle–closed-form criterion: |Δ| ≤ max(ABS, REL·|oracle|).
const COMPARE_ABS_TOL: f64 = 2e-4;
const COMPARE_REL_TOL: f64 = 1e-3;
/// Runtime budget of the master comparison.
const MASTER_BUDGET_SECONDS: f64 = 180.0;
/// Inertial full-line bound and half-line threshold.
const FULL_LINE_BOUND: f64 = 1e-6;
const HALF_LINE_THRESHOLD: f64 = 0.1;
/// Mode-function and kernel ODE residual bound.
const ODE_REL_TOL: f64 = 1e-5;
/// Kinematics residual bound.
const KINEMATICS_REL_TOL: f64 = 1e-10;
/// Special-function bounds.
const GAMMA0_AT_ONE: f64 = 0.219383934;
const GAMMA0_TOL: f64 = 1e-9;
const DIGAMMA_TOL: f64 = 1e-12;
/// Required suppression factor of |neg_v2|/|v1| for the improper damping.
const SUPPRESSION_FACTOR: f64 = 5.0;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report(n: usize, title: &str, o: &Outcome) {
    let line = format!(
        "acceptance criterion {n:>2}: {} | {title} | {}\n",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

fn rel(x: f64, want: f64) -> f64 {
    (x - want).abs() / want.abs()
}

fn c1_parameter_derivation() -> Outcome {
    let weak = derive_params(0.1, 1.0, 1.0, 1.0).unwrap().gamma;
    let strong = derive_params(0.3, 1.0, 1.0, 1.0).unwrap().gamma;
    let (rw, rs) = (rel(weak, 0.000398), rel(strong, 0.00358));
    outcome(
        rw <= REFERENCE_REL_TOL && rs <= REFERENCE_REL_TOL,
        format!("gamma(0.1)={weak:.5e} (rel {rw:.1e}), gamma(0.3)={strong:.5e} (rel {rs:.1e})"),
    )
}

fn c2_master_comparison() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig { master_grid: true, ..RunConfig::default() };
    assert_eq!(cfg.tolerance.abs_tol, COMPARE_ABS_TOL);
    assert_eq!(cfg.tolerance.rel_tol, COMPARE_REL_TOL);
    let r = run_compare(&cfg).expect("master grid runs");
    let s = r.overall.unwrap();
    let secs = start.elapsed().as_secs_f64();
    // Piecewise breakdown: how many rows fail on v1 and on neg_v2.
    let (mut v1_bad, mut v2_bad) = (0, 0);
    for t in &r.tables {
        for row in &t.rows {
            let o = row.oracle.unwrap();
            let ok = |c: f64, o: f64| (c - o).abs() <= COMPARE_ABS_TOL.max(COMPARE_REL_TOL * o.abs());
            v1_bad += usize::from(!ok(row.v1, o.oracle_v1));
            v2_bad += usize::from(!ok(row.neg_v2, o.oracle_neg_v2));
        }
    }
    let exact_cfg = RunConfig { variant: udw_core::ClosedFormVariant::Exact, ..cfg };
    let e = run_compare(&exact_cfg).expect("master grid runs").overall.unwrap();
    outcome(
        s.pass && secs < MASTER_BUDGET_SECONDS,
        format!(
            "published forms: {}/{} points fail (v1 fails {v1_bad}, neg_v2 fails {v2_bad}), max rel diff {:.3e}, {secs:.1}s; \
             exact half-line variant for reference: {}/{} fail, max rel diff {:.1e}",
            s.failed_points, s.points, s.max_rel_diff, e.failed_points, e.points, e.max_rel_diff
        ),
    )
}

fn c3_reference_values() -> Outcome {
    let opts = CorrelatorOptions::default();
    let qq = |l: f64, w: f64, a: f64, eta: f64| qq_uad(&DetectorParams::natural(l, w).unwrap(), a, eta, &opts).unwrap().total;
    let pp = |l: f64, w: f64, a: f64, eta: f64| pp_uad(&DetectorParams::natural(l, w).unwrap(), a, eta, &opts).unwrap().total;
    // (label, computed, reference)
    let q_cases = [
        ("QQ eta=30 a=0.1", qq(0.3, 1.0, 0.1, 30.0), 1.24589),
        ("QQ eta=30 a=0.001", qq(0.3, 1.0, 0.001, 30.0), 1.24588),
        ("QQ eta=5000 l=0.3", qq(0.3, 1.0, 0.1, 5000.0), 1.24772),
        ("QQ eta=5000 w=2.3", qq(0.1, 2.3, 0.001, 5000.0), 0.543429),
        ("QQ eta=5000 w=1.0", qq(0.1, 1.0, 0.001, 5000.0), 1.24974),
    ];
    let p_cases = [
        ("PP eta=11 a=0.1", pp(0.1, 1.0, 0.1, 11.0), 0.497442),
        ("PP eta=11 a=0.001", pp(0.1, 1.0, 0.001, 11.0), 0.497442),
        ("PP eta=7000 a=0.1", pp(0.1, 1.0, 0.1, 7000.0), 0.250765),
        ("PP eta=7000 a=0.001", pp(0.1, 1.0, 0.001, 7000.0), 0.250765),
        ("PP eta=20 gamma=0.00358", pp(0.3, 1.0, 0.1, 20.0), 0.462788),
        ("PP eta=20 gamma=0.000398", pp(0.1, 1.0, 0.1, 20.0), 0.4956),
        ("PP eta=8000 gamma=0.000398", pp(0.1, 1.0, 0.1, 8000.0), 0.250238),
        ("PP eta=8000 gamma=0.00358", pp(0.3, 1.0, 0.1, 8000.0), 0.248185),
    ];
    let direct_fail: Vec<String> = q_cases
        .iter()
        .chain(p_cases.iter())
        .filter(|(_, v, want)| rel(*v, *want) > REFERENCE_REL_TOL)
        .map(|(label, v, want)| format!("{label}: {v:.6} vs {want} ({:.1}%)", 100.0 * rel(*v, *want)))
        .collect();
    let ratio_fail = |cases: &[(&str, f64, f64)]| -> usize {
        let mut bad = 0;
        for i in 0..cases.len() {
            for j in i + 1..cases.len() {
                if rel(cases[i].1 / cases[j].1, cases[i].2 / cases[j].2) > REFERENCE_REL_TOL {
                    bad += 1;
                }
            }
        }
        bad
    };
    let (rq, rp) = (ratio_fail(&q_cases), ratio_fail(&p_cases));
    let direct_ok = direct_fail.is_empty();
    let ratio_ok = rq == 0 && rp == 0;
    outcome(
        direct_ok || ratio_ok,
        format!(
            "{} of 13 reference values outside 0.5%{}; ratio fallback: {rq} QQ and {rp} PP pairs outside 0.5%",
            direct_fail.len(),
            if direct_ok { String::new() } else { format!(" [{}]", direct_fail.join("; ")) }
        ),
    )
}

fn c4_inertial_zero_variance() -> Outcome {
    let lambda0 = DetectorParams::lambda0_for_gamma(0.000398, 1.0);
    let p = DetectorParams::natural(lambda0, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    let full = inertial_oracle(&p, Observable::Qq, 10.0, KappaRange::Full, &cfg).unwrap().value;
    let half = inertial_oracle(&p, Observable::Qq, 10.0, KappaRange::Positive, &cfg).unwrap().value;
    outcome(
        full.abs() <= FULL_LINE_BOUND && half > HALF_LINE_THRESHOLD,
        format!("full line {full:.2e} (bound {FULL_LINE_BOUND:e}), half line {half:.6} (threshold {HALF_LINE_THRESHOLD})"),
    )
}

fn c5_split_identity() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut runner = TestRunner::deterministic();
    let strategy = (0.05f64..0.4, 0.5f64..2.5, 0.5f64..100.0, proptest::bool::ANY);
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for _ in 0..10 {
        let (l, w, eta, pp) = sample(&mut runner, &strategy);
        let p = DetectorParams::natural(l, w).unwrap();
        let obs = if pp { Observable::Pp } else { Observable::Qq };
        let pos = inertial_oracle(&p, obs, eta, KappaRange::Positive, &cfg).unwrap().value;
        let neg = inertial_oracle(&p, obs, eta, KappaRange::Negative, &cfg).unwrap().value;
        let full = inertial_oracle(&p, obs, eta, KappaRange::Full, &cfg).unwrap().value;
        let tol = 10.0 * cfg.abs_tol.max(cfg.rel_tol * pos.abs());
        let gap = (pos - (full - neg)).abs();
        worst = worst.max(gap / tol);
        bad += usize::from(gap > tol);
    }
    outcome(bad == 0, format!("{bad}/10 configurations violate; worst gap = {worst:.2e} x allowed"))
}

fn c6_trend_contrast() -> Outcome {
    let opts = CorrelatorOptions::default();
    let mut uad_diffs = Vec::new();
    for c in figure_curves(FigureId::APb) {
        assert_eq!(c.config.observable, ObservableSpec::Pp);
        let p = c.config.detector_params().unwrap();
        let a = c.config.trajectory.a.unwrap();
        let d = pp_uad(&p, a, 5000.0, &opts).unwrap().total - pp_uad(&p, a, 50.0, &opts).unwrap().total;
        uad_diffs.push(d);
    }
    let vd = &figure_curves(FigureId::VdPb)[0].config;
    let p = vd.detector_params().unwrap();
    let inertial = pp_inertial(&p, 5000.0, &opts).unwrap() - pp_inertial(&p, 50.0, &opts).unwrap();
    let uad_ok = uad_diffs.iter().all(|d| *d < 0.0);
    outcome(
        uad_ok && inertial > 0.0,
        format!(
            "UAD PP(5000)-PP(50) = [{}] (want < 0); inertial = {inertial:+.4e} (want > 0)",
            uad_diffs.iter().map(|d| format!("{d:+.4e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c7_mode_functions() -> Outcome {
    let p = DetectorParams::natural(0.3, 1.0).unwrap();
    let exact_one = q_a(&p, 0.0) == Complex64::new(1.0, 0.0);
    let target = Complex64::new(0.0, -p.omega_r);
    let fd = |h: f64| ((q_a(&p, h) - q_a(&p, -h)) / (2.0 * h) - target).norm();
    let (e1, e2) = (fd(1e-2), fd(5e-3));
    let order = (e1 / e2).log2();
    let second_order = (order - 2.0).abs() < 0.2;
    let mut runner = TestRunner::deterministic();
    let strategy = (0.05f64..0.5, 0.5f64..3.0, -20.0f64..20.0, 0.1f64..100.0);
    let mut worst_q: f64 = 0.0;
    let mut worst_k: f64 = 0.0;
    for _ in 0..100 {
        let (l, w, kappa, eta) = sample(&mut runner, &strategy);
        let p = DetectorParams::natural(l, w).unwrap();
        let h = 1e-3;
        let q = |t: f64| q_a(&p, t);
        let qd = (q(eta + h) - q(eta - h)) / (2.0 * h);
        let qdd = (q(eta + h) - 2.0 * q(eta) + q(eta - h)) / (h * h);
        let r = qdd + 2.0 * p.gamma * qd + p.omega_r * p.omega_r * q(eta);
        worst_q = worst_q.max(r.norm() / (p.omega_r * p.omega_r * q(eta)).norm().max(qdd.norm()));
        let hk = 1e-4 / kappa.abs().max(1.0);
        let kdd = (response_kernel_dot(&p, kappa, eta + hk) - response_kernel_dot(&p, kappa, eta - hk)) / (2.0 * hk);
        let k = response_kernel(&p, kappa, eta);
        let r = kdd + 2.0 * p.gamma * response_kernel_dot(&p, kappa, eta) + p.omega_r * p.omega_r * k
            - Complex64::new(0.0, -kappa * eta).exp();
        worst_k = worst_k.max(r.norm() / kdd.norm().max((p.omega_r * p.omega_r * k).norm()).max(1.0));
    }
    outcome(
        exact_one && second_order && worst_q < ODE_REL_TOL && worst_k < ODE_REL_TOL,
        format!(
            "q_a(0)==1: {exact_one}; FD order {order:.2}; worst ODE residual q_a {worst_q:.1e}, kernel {worst_k:.1e} (bound {ODE_REL_TOL:e})"
        ),
    )
}

fn c8_kinematics() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = (0.01f64..0.99, -3.0f64..3.0, 0.01f64..20.0, 0.0f64..3.1, 0.0f64..std::f64::consts::TAU);
    let (mut worst_h, mut worst_l): (f64, f64) = (0.0, 0.0);
    let mut n = 0;
    while n < 1000 {
        let (a, atau, r, theta, phi) = sample(&mut runner, &strategy);
        if theta.cos() <= -0.999 {
            continue;
        }
        n += 1;
        let traj = Trajectory::UniformAcceleration { a };
        let z = trajectory_position(&traj, atau / a).unwrap();
        worst_h = worst_h.max(((z.x1 * z.x1 - z.t * z.t) * a * a - 1.0).abs());
        let x = SpacetimePoint::new(
            z.t + r,
            z.x1 + r * theta.cos(),
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
        );
        let k = retarded_kinematics(&x, a).unwrap();
        let e = trajectory_position(&traj, k.tau_minus).unwrap();
        let (dt, dx) = (x.t - e.t, x.x1 - e.x1);
        let rho2 = x.x2 * x.x2 + x.x3 * x.x3;
        worst_l = worst_l.max((-dt * dt + dx * dx + rho2).abs() / (dt * dt + dx * dx + rho2));
    }
    outcome(
        worst_h <= KINEMATICS_REL_TOL && worst_l <= KINEMATICS_REL_TOL,
        format!("1000 points: worst hyperbola residual {worst_h:.1e}, light-cone residual {worst_l:.1e}"),
    )
}

fn c9_special_functions() -> Outcome {
    let g = gamma0(Complex64::new(1.0, 0.0)).unwrap();
    let g_ok = (g.re - GAMMA0_AT_ONE).abs() <= GAMMA0_TOL && g.im == 0.0;
    let mut runner = TestRunner::deterministic();
    let pi = std::f64::consts::PI;
    let mut worst_rec: f64 = 0.0;
    let mut worst_ref: f64 = 0.0;
    for _ in 0..200 {
        let (re, im) = sample(&mut runner, &(-5.0f64..5.0, 0.05f64..5.0));
        let z = Complex64::new(re, im);
        let lhs = digamma(z + 1.0).unwrap();
        worst_rec = worst_rec.max((lhs - digamma(z).unwrap() - z.inv()).norm() / lhs.norm().max(1.0));
        let refl = pi * (pi * z).cos() / (pi * z).sin();
        let lhs = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
        worst_ref = worst_ref.max((lhs - refl).norm() / refl.norm().max(1.0));
    }
    let mut hyp_bad = 0;
    for _ in 0..200 {
        let (yr, yi, r, th) = sample(&mut runner, &(-3.0f64..3.0, 0.01f64..3.0, 0.0f64..0.95, -3.1f64..3.1));
        let y = Complex64::new(yr, yi);
        let z = Complex64::from_polar(r, th);
        let full = hyp_f(y, z).unwrap();
        let n = 40;
        let mut partial = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        for k in 0..n {
            partial += zn / (k as f64 + 1.0 + y);
            zn *= z;
        }
        partial *= 1.0 + y;
        let bound = (1.0 + y).norm() * r.powi(n) / ((1.0 - r) * (n as f64 + 1.0 + y).norm());
        hyp_bad += usize::from((full - partial).norm() > bound * (1.0 + 1e-9) + 1e-13 * full.norm());
    }
    outcome(
        g_ok && worst_rec <= DIGAMMA_TOL && worst_ref <= DIGAMMA_TOL && hyp_bad == 0,
        format!(
            "gamma0(1) = {:.10}; digamma recurrence {worst_rec:.1e}, reflection {worst_ref:.1e}; hyp_f tail-bound violations {hyp_bad}/200",
            g.re
        ),
    )
}

fn c10_improper_gamma() -> Outcome {
    let opts = CorrelatorOptions::default();
    let curves = figure_curves(FigureId::Impro);
    let ratio = |cfg: &RunConfig| {
        let p = cfg.detector_params().unwrap();
        let v = qq_uad(&p, cfg.trajectory.a.unwrap(), 50.0, &opts).unwrap();
        (p.gamma, (v.neg_v2 / v.v1).abs())
    };
    let (g_bad, r_bad) = ratio(&curves[0].config);
    let (g_ok, r_ok) = ratio(&curves[1].config);
    outcome(
        r_bad * SUPPRESSION_FACTOR <= r_ok,
        format!(
            "|neg_v2|/|v1| at eta=50: gamma={g_bad:.4} -> {r_bad:.4}, gamma={g_ok:.6} -> {r_ok:.4} (factor {:.1}, need >= {SUPPRESSION_FACTOR})",
            r_ok / r_bad
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("parameter derivation", c1_parameter_derivation),
        ("oracle vs closed form, master grid", c2_master_comparison),
        ("figure reference values", c3_reference_values),
        ("inertial full line vanishes, half line > 0.1", c4_inertial_zero_variance),
        ("half-line split identity", c5_split_identity),
        ("late-time trend contrast", c6_trend_contrast),
        ("mode functions and kernel ODE", c7_mode_functions),
        ("Rindler kinematics", c8_kinematics),
        ("special functions", c9_special_functions),
        ("improper damping suppresses neg_v2", c10_improper_gamma),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        report(i + 1, title, &o);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "acceptance criteria failing: {failed:?}");
}
