//! Complex special functions used by the closed-form correlators.
//!
//! All logarithms use the principal branch, arguments in (−π, π], with the
//! cut on the negative real axis. A signed zero imaginary part is normalised
//! to +0 so that negative reals always land on the upper lip of the cut.

use num_complex::Complex64;

use crate::error::{finite_c, Error, Result};

/// Euler–Mascheroni constant γ_E.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const E1_SERIES_RADIUS: f64 = 2.5;
const E1_MAX_ITER: usize = 100_000;
const HYP_MAX_TERMS: usize = 1_000_000;

#[inline]
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Principal logarithm, arg in (−π, π]; `-0.0` imaginary parts count as `+0.0`.
pub fn plog(z: Complex64) -> Complex64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    c(z.norm().ln(), im.atan2(z.re))
}

/// Upper incomplete gamma function Γ(0, z) = E₁(z) on the principal branch.
///
/// Uses the power series near the origin (and close to the negative real
/// axis, where it suffers no cancellation) and a modified-Lentz continued
/// fraction elsewhere. Γ(0, 0) is a logarithmic singularity and is rejected.
pub fn gamma0(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("gamma0: logarithmic singularity at z = 0".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma0: non-finite argument {z}")));
    }
    let r = z.norm();
    let value = if r < E1_SERIES_RADIUS || (r + z.re < E1_SERIES_RADIUS && r < 600.0) {
        e1_series(z)?
    } else {
        e1_continued_fraction(z)?
    };
    finite_c(value, "gamma0")
}

/// Power series E₁(z) = −γ_E − Log z − Σ_{k≥1} (−z)^k / (k·k!).
pub fn e1_series(z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("e1_series: z = 0".into()));
    }
    let mut term = c(1.0, 0.0);
    let mut sum = c(0.0, 0.0);
    for k in 1..E1_MAX_ITER {
        let kf = k as f64;
        term *= -z / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.norm() <= EPS * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(-EULER_GAMMA - plog(z) - sum);
        }
    }
    Err(Error::Convergence(format!("e1_series: no convergence at z = {z}")))
}

/// Continued fraction E₁(z) = e^{−z} / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …))),
/// evaluated with the modified Lentz algorithm.
pub fn e1_continued_fraction(z: Complex64) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut cc = c(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..E1_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        let mut den = an * d + b;
        if den.norm() < TINY {
            den = c(TINY, 0.0);
        }
        d = den.inv();
        cc = b + an / cc;
        if cc.norm() < TINY {
            cc = c(TINY, 0.0);
        }
        let del = cc * d;
        h *= del;
        if (del - 1.0).norm() < EPS {
            return Ok(h * (-z).exp());
        }
    }
    Err(Error::Convergence(format!("e1_continued_fraction: no convergence at z = {z}")))
}

/// Cosine integral Ci(x) = −Re E₁(ix) for x > 0.
pub fn cos_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("cos_integral: x = {x} must be > 0")));
    }
    Ok(-gamma0(c(0.0, x))?.re)
}

/// Sine integral Si(x) = π/2 + Im E₁(ix) for x > 0.
pub fn sin_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("sin_integral: x = {x} must be > 0")));
    }
    Ok(std::f64::consts::FRAC_PI_2 + gamma0(c(0.0, x))?.im)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Digamma function ψ(z) for complex z.
///
/// Reflection ψ(z) = ψ(1−z) − π cot(πz) for Re z < ½, recurrence shift to
/// Re z ≥ 8, then an eight-term asymptotic (Bernoulli) expansion.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("digamma: pole at {}", z.re)));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("digamma: non-finite argument {z}")));
    }
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        let refl = pi * cot(pi * z)?;
        return finite_c(digamma_right(1.0 - z) - refl, "digamma");
    }
    finite_c(digamma_right(z), "digamma")
}

/// ψ(z) for Re z ≥ ½.
fn digamma_right(mut z: Complex64) -> Complex64 {
    // B_{2k} / (2k) for k = 1..8.
    const COEF: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
        -3617.0 / 8160.0,
    ];
    let mut shift = c(0.0, 0.0);
    while z.re < 8.0 {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = c(0.0, 0.0);
    let mut pow = inv2;
    for coef in COEF {
        series += coef * pow;
        pow *= inv2;
    }
    plog(z) - 0.5 * inv - series - shift
}

/// Hyperbolic cotangent, stable for large |Re z| (no overflow).
pub fn coth(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("coth: non-finite argument {z}")));
    }
    let (q, sign) = if z.re >= 0.0 {
        ((-2.0 * z).exp(), 1.0)
    } else {
        ((2.0 * z).exp(), -1.0)
    };
    let den = 1.0 - q;
    if den.norm() <= 4.0 * f64::EPSILON {
        return Err(Error::Pole(format!("coth: pole at {z}")));
    }
    Ok(sign * (1.0 + q) / den)
}

/// Trigonometric cotangent via cot z = i·coth(iz).
pub fn cot(z: Complex64) -> Result<Complex64> {
    let i = c(0.0, 1.0);
    coth(i * z).map(|v| i * v)
}

/// Hypergeometric family F_y(z) = ₂F₁(1+y, 1; 2+y; z) = Σ_{n≥0} (1+y) zⁿ / (n+1+y).
///
/// Direct series with a geometric tail bound; |z| < 1 is required for
/// convergence. Combined with the prefactor z/(1+y) it yields Σ_{n≥1} zⁿ/(n+y).
pub fn hyp_f(y: Complex64, z: Complex64) -> Result<Complex64> {
    if y.im == 0.0 && y.re <= -1.0 && y.re == y.re.round() {
        return Err(Error::Pole(format!("hyp_f: 1+y = {} is a non-positive integer", 1.0 + y.re)));
    }
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::Convergence(format!("hyp_f: |z| = {r} is outside the disc of convergence")));
    }
    let one_plus_y = 1.0 + y;
    let tail_factor = 1.0 / (1.0 - r);
    let mut zn = c(1.0, 0.0);
    let mut sum = c(0.0, 0.0);
    for n in 0..HYP_MAX_TERMS {
        let term = zn / (n as f64 + one_plus_y);
        sum += term;
        let past_minimum = (n as f64) + 1.0 + y.re > 0.0;
        if past_minimum && term.norm() * r * tail_factor <= EPS * sum.norm() {
            return finite_c(one_plus_y * sum, "hyp_f");
        }
        zn *= z;
        if zn.norm() == 0.0 {
            return finite_c(one_plus_y * sum, "hyp_f");
        }
    }
    Err(Error::Convergence(format!(
        "hyp_f: series not converged after {HYP_MAX_TERMS} terms (|z| = {r})"
    )))
}
