//! Property-based invariants of the special functions, kinematics, mode
//! functions and kernels.

use num_complex::Complex64;
use proptest::prelude::*;

use udw_core::mode::{q_a, response_kernel, response_kernel_dot};
use udw_core::model::{retarded_kinematics, trajectory_position, SpacetimePoint};
use udw_core::special::{digamma, e1_continued_fraction, e1_series, gamma0, hyp_f};
use udw_core::{DetectorParams, Trajectory};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma0_conjugation_symmetry(r in 0.05f64..40.0, th in -3.0f64..3.0) {
        let z = Complex64::from_polar(r, th);
        let lhs = gamma0(z.conj()).unwrap();
        let rhs = gamma0(z).unwrap().conj();
        prop_assert!(rel(lhs, rhs) < 1e-13, "z={z}: {lhs} vs {rhs}");
    }

    #[test]
    fn e1_series_and_fraction_overlap(r in 1.0f64..4.0, th in -0.9f64..0.9) {
        let z = Complex64::from_polar(r, th * std::f64::consts::PI);
        let s = e1_series(z).unwrap();
        let f = e1_continued_fraction(z).unwrap();
        prop_assert!((s - f).norm() <= 1e-10 * s.norm().max(1.0), "z={z}: {s} vs {f}");
    }

    #[test]
    fn digamma_recurrence(re in -20.0f64..20.0, im in 0.1f64..20.0) {
        let z = c(re, im);
        let lhs = digamma(z + 1.0).unwrap();
        let rhs = digamma(z).unwrap() + z.inv();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "z={z}");
    }

    #[test]
    fn digamma_reflection(re in -5.0f64..5.0, im in 0.05f64..5.0) {
        let z = c(re, im);
        let pi = std::f64::consts::PI;
        let lhs = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
        let rhs = pi * (pi * z).cos() / (pi * z).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0), "z={z}");
    }

    #[test]
    fn digamma_conjugation(re in -10.0f64..10.0, im in 0.01f64..10.0) {
        let z = c(re, im);
        prop_assert!(rel(digamma(z.conj()).unwrap(), digamma(z).unwrap().conj()) < 1e-14);
    }

    #[test]
    fn q_a_solves_free_oscillator(l in 0.05f64..0.5, w in 0.5f64..3.0, eta in 0.1f64..200.0) {
        let p = DetectorParams::natural(l, w).unwrap();
        let h = 1e-3;
        let q = |t: f64| q_a(&p, t);
        let qd = (q(eta + h) - q(eta - h)) / (2.0 * h);
        let qdd = (q(eta + h) - 2.0 * q(eta) + q(eta - h)) / (h * h);
        let res = qdd + 2.0 * p.gamma * qd + p.omega_r * p.omega_r * q(eta);
        let scale = (p.omega_r * p.omega_r * q(eta)).norm().max(qdd.norm()).max(1e-300);
        prop_assert!(res.norm() / scale < 1e-5, "residual {} at eta={eta}", res.norm() / scale);
    }
}

/// Samples of hyp_f against its own partial sums: the difference after N
/// terms must stay below the geometric tail bound |1+y|·|z|^N/((1−|z|)·min|n+1+y|).
#[test]
fn hyp_f_partial_sum_identity_200_samples() {
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config { cases: 200, ..Config::default() });
    let strategy = (-3.0f64..3.0, -3.0f64..3.0, 0.0f64..0.95, -3.1f64..3.1);
    runner
        .run(&strategy, |(yr, yi, r, th)| {
            let y = c(yr, yi + 0.01);
            let z = Complex64::from_polar(r, th);
            let full = hyp_f(y, z).unwrap();
            let n = 40usize;
            let mut partial = c(0.0, 0.0);
            let mut zn = c(1.0, 0.0);
            let mut min_den = f64::INFINITY;
            for k in 0..n {
                partial += zn / (k as f64 + 1.0 + y);
                zn *= z;
            }
            for k in n..n + 1000 {
                min_den = min_den.min((k as f64 + 1.0 + y).norm());
            }
            partial *= 1.0 + y;
            let bound = (1.0 + y).norm() * r.powi(n as i32) / ((1.0 - r) * min_den);
            let diff = (full - partial).norm();
            prop_assert!(diff <= bound * (1.0 + 1e-9) + 1e-13 * full.norm(), "y={y} z={z}: {diff} > {bound}");
            Ok(())
        })
        .unwrap();
}

/// Points on the Rindler hyperbola and on null rays out of it.
#[test]
fn kinematics_on_1000_points() {
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config { cases: 1000, ..Config::default() });
    let strategy = (0.01f64..0.99, -3.0f64..3.0, 0.01f64..20.0, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU);
    runner
        .run(&strategy, |(a, atau, r, theta, phi)| {
            let tau = atau / a;
            let traj = Trajectory::UniformAcceleration { a };
            let z = trajectory_position(&traj, tau).unwrap();
            let hyper = z.x1 * z.x1 - z.t * z.t;
            prop_assert!((hyper * a * a - 1.0).abs() <= 1e-10, "hyperbola residual {}", hyper * a * a - 1.0);
            // A future-directed null ray from z(τ), avoiding directions
            // parallel to the horizon.
            let n = (theta.cos(), theta.sin() * phi.cos(), theta.sin() * phi.sin());
            prop_assume!(n.0 > -0.999);
            let x = SpacetimePoint::new(z.t + r, z.x1 + r * n.0, r * n.1, r * n.2);
            let k = retarded_kinematics(&x, a).unwrap();
            let e = trajectory_position(&traj, k.tau_minus).unwrap();
            let (dt, dx) = (x.t - e.t, x.x1 - e.x1);
            let interval = -dt * dt + dx * dx + x.x2 * x.x2 + x.x3 * x.x3;
            let scale = dt * dt + dx * dx + x.x2 * x.x2 + x.x3 * x.x3;
            prop_assert!(interval.abs() <= 1e-10 * scale, "light-cone residual {}", interval / scale);
            prop_assert!(dt > 0.0);
            prop_assert!((k.tau_minus - tau).abs() <= 1e-8 * tau.abs().max(1.0 / a));
            Ok(())
        })
        .unwrap();
}

/// K̈ + 2γK̇ + Ω_r²K = e^{−iκη}, with K̈ from a central difference of the
/// analytic K̇, at 100 sampled (κ, η).
#[test]
fn response_kernel_ode_residual_100_points() {
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config { cases: 100, ..Config::default() });
    let strategy = (0.05f64..0.5, 0.5f64..3.0, -20.0f64..20.0, 0.1f64..100.0);
    runner
        .run(&strategy, |(l, w, kappa, eta)| {
            let p = DetectorParams::natural(l, w).unwrap();
            let h = 1e-4 / kappa.abs().max(1.0);
            let kdd = (response_kernel_dot(&p, kappa, eta + h) - response_kernel_dot(&p, kappa, eta - h)) / (2.0 * h);
            let k = response_kernel(&p, kappa, eta);
            let kd = response_kernel_dot(&p, kappa, eta);
            let drive = c(0.0, -kappa * eta).exp();
            let res = kdd + 2.0 * p.gamma * kd + p.omega_r * p.omega_r * k - drive;
            let scale = kdd.norm().max((p.omega_r * p.omega_r * k).norm()).max(1.0);
            prop_assert!(res.norm() / scale < 1e-5, "residual {} at kappa={kappa} eta={eta}", res.norm() / scale);
            Ok(())
        })
        .unwrap();
}

#[test]
fn kernel_conjugation_symmetry() {
    let p = DetectorParams::natural(0.3, 1.0).unwrap();
    for kappa in [0.1, 0.9, 1.0, 1.1, 7.5, 300.0] {
        for eta in [0.5, 11.0, 5000.0] {
            let a = response_kernel(&p, -kappa, eta);
            let b = response_kernel(&p, kappa, eta).conj();
            assert!((a - b).norm() <= 1e-15 * b.norm().max(1e-300), "kappa={kappa} eta={eta}");
        }
    }
}
