//! Unequal-time building blocks of the accelerated-detector correlator.
//!
//! ⟨Q(η)Q(η″)⟩_v1 = Re{P₁ + P₂ + P₃ + P₄} collects the thermal full-line
//! κ-integral against the four exponentials
//! e₁ = e^{−iκ(τ₀−τ₀″)+w_j(τ−τ₀)+w*_{j′}(τ″−τ₀″)}, e₂ = −e^{w_j(τ−τ₀)+iκ(τ″−τ₀)},
//! e₃ = −e^{w*_{j′}(τ″−τ₀″)−iκ(τ−τ₀″)}, e₄ = e^{iκ(τ″−τ)};
//! −⟨Q(η)Q(η″)⟩_v2 = −Re{P̃₁ + P̃₂ + P̃₃ + P̃₄} is the same against the
//! half line κ ≤ 0 without the thermal weight.
//!
//! The expressions are evaluated literally, term by term. In particular the
//! combinations log(w) + log(t) − log(wt) are kept: under the principal
//! branch they are multiples of 2πi, not zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{finite_c, Error, Result};
use crate::mode::oscillator_constants;
use crate::model::DetectorParams;
use crate::special::{gamma0, hyp_f, plog};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Thermal (v1) unequal-time blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixV1Terms {
    pub p1: Complex64,
    pub p2: Complex64,
    pub p3: Complex64,
    pub p4: Complex64,
}

impl AppendixV1Terms {
    /// Re{P₁ + P₂ + P₃ + P₄}.
    pub fn correlator(&self) -> f64 {
        (self.p1 + self.p2 + self.p3 + self.p4).re
    }
}

/// Half-line (v2) unequal-time blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixV2Terms {
    pub p1t: Complex64,
    pub p2t: Complex64,
    pub p3t: Complex64,
    pub p4t: Complex64,
}

impl AppendixV2Terms {
    /// −Re{P̃₁ + P̃₂ + P̃₃ + P̃₄}, the value of −⟨QQ⟩_v2.
    pub fn neg_v2(&self) -> f64 {
        -(self.p1t + self.p2t + self.p3t + self.p4t).re
    }
}

/// λ₀²ħ / (2 m₀² (2π)²).
fn prefactor(p: &DetectorParams) -> f64 {
    p.lambda0 * p.lambda0 * p.hbar / (8.0 * PI * PI * p.m0 * p.m0)
}

struct Consts {
    /// w₊, w₋
    w: [Complex64; 2],
    /// c_j c*_{j′} / (w_j + w*_{j′}), indexed [j][j′]
    cc: [[Complex64; 2]; 2],
}

fn consts(p: &DetectorParams) -> Consts {
    let k = oscillator_constants(p);
    let w = [k.w_plus, k.w_minus];
    let c = [k.c_plus, k.c_minus];
    let mut cc = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        for l in 0..2 {
            cc[j][l] = c[j] * c[l].conj() / (w[j] + w[l].conj());
        }
    }
    Consts { w, cc }
}

/// F_w(z) = ₂F₁(1 + w/a, 1; 2 + w/a; z).
fn f_w(w: Complex64, a: f64, z: f64) -> Result<Complex64> {
    hyp_f(w / a, Complex64::new(z, 0.0))
}

fn positive_gap(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("time ordering requires {name} > 0 (got {value})")))
    }
}

/// Bracket shared by P₁ and P₄ (with the residue coefficient `w_res`).
fn bracket_p1(wj: Complex64, wks: Complex64, w_res: Complex64, a: f64, d: f64) -> Result<Complex64> {
    let z = (-a * d).exp();
    Ok(wj * z / (1.0 + wj / a) * f_w(wj, a, z)? + wks * z / (1.0 - wks / a) * f_w(-wks, a, z)?
        - 2.0 * PI * I * w_res * (wj * d).exp() / (1.0 - (-2.0 * PI * I * wj / a).exp()))
}

fn p2_block(k: &Consts, a: f64, tau: f64, tau2: f64, tau0: f64) -> Result<Complex64> {
    let s = positive_gap("tau'' - tau0", tau2 - tau0)?;
    let z = (-a * s).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..2 {
        for l in 0..2 {
            let wj = k.w[j];
            let wks = k.w[l].conj();
            let br = wj * z / (1.0 - wj / a) * f_w(-wj, a, z)?
                + wks * z / (1.0 + wks / a) * f_w(wks, a, z)?
                + 2.0 * PI * I * wks * (wks * s).exp() / (1.0 - (2.0 * PI * I * wks / a).exp());
            acc -= k.cc[j][l] * (wj * (tau - tau0)).exp() * br;
        }
    }
    Ok(acc)
}

/// P₁…P₄ at proper times (τ, τ″) with switch-on times (τ₀, τ₀″).
///
/// Requires τ > τ₀, τ″ > τ₀″, and τ₀ > τ₀″ together with τ″ > τ₀ and
/// τ > τ₀″ so that every hypergeometric argument lies inside the unit disc.
/// P₄ is evaluated as printed, with the residue coefficient w_{j′}.
pub fn appendix_terms_uad_v1(
    p: &DetectorParams,
    a: f64,
    tau: f64,
    tau2: f64,
    tau0: f64,
    tau02: f64,
) -> Result<AppendixV1Terms> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("proper acceleration must satisfy 0 < a < 1 (got {a})")));
    }
    positive_gap("tau - tau0", tau - tau0)?;
    positive_gap("tau'' - tau0''", tau2 - tau02)?;
    let d = positive_gap("tau0 - tau0''", tau0 - tau02)?;
    let k = consts(p);
    let mut p1 = Complex64::new(0.0, 0.0);
    let mut p4 = Complex64::new(0.0, 0.0);
    for j in 0..2 {
        for l in 0..2 {
            let wj = k.w[j];
            let wks = k.w[l].conj();
            let env = (wj * (tau - tau0) + wks * (tau2 - tau02)).exp();
            p1 += k.cc[j][l] * env * bracket_p1(wj, wks, wj, a, d)?;
            p4 += k.cc[j][l] * bracket_p1(wj, wks, k.w[l], a, d)?;
        }
    }
    let p2 = p2_block(&k, a, tau, tau2, tau0)?;
    // P₃ is P₂* with τ ↔ τ″ and τ₀ ↔ τ₀″.
    let p3 = p2_block(&k, a, tau2, tau, tau02)?.conj();
    let pf = prefactor(p);
    Ok(AppendixV1Terms {
        p1: finite_c(pf * p1, "P1")?,
        p2: finite_c(pf * p2, "P2")?,
        p3: finite_c(pf * p3, "P3")?,
        p4: finite_c(pf * p4, "P4")?,
    })
}

fn g0(z: Complex64) -> Result<Complex64> {
    gamma0(z)
}

fn l(z: Complex64) -> Complex64 {
    plog(z)
}

fn lr(x: f64) -> Complex64 {
    plog(Complex64::new(x, 0.0))
}

/// P̃₁…P̃₄ at proper times (τ, τ″) with switch-on times (τ₀, τ₀″).
///
/// The time differences τ₀−τ₀″, τ″−τ₀, τ−τ₀″ and τ″−τ may have either sign
/// but must be non-zero (Γ(0,0) and log 0 belong to the renormalization
/// constants). No acceleration enters.
pub fn appendix_terms_uad_v2(p: &DetectorParams, tau: f64, tau2: f64, tau0: f64, tau02: f64) -> Result<AppendixV2Terms> {
    positive_gap("tau - tau0", tau - tau0)?;
    positive_gap("tau'' - tau0''", tau2 - tau02)?;
    let d = tau0 - tau02;
    let s = tau2 - tau0;
    let u = tau - tau02;
    let v = tau2 - tau;
    for (name, x) in [("tau0 - tau0''", d), ("tau'' - tau0", s), ("tau - tau0''", u), ("tau'' - tau", v)] {
        if x == 0.0 || !x.is_finite() {
            return Err(Error::Domain(format!("{name} must be non-zero and finite (got {x})")));
        }
    }
    let k = consts(p);
    let [wp, wm] = k.w;
    let (wps, wms) = (wp.conj(), wm.conj());
    let cc = |j: usize, l: usize| k.cc[j][l];
    let (pl, mi) = (0usize, 1usize);
    let ex = |z: Complex64| z.exp();
    let two_pi_i = 2.0 * PI * I;

    let p1 = (cc(pl, pl) * wp * ex(wp * (tau - tau02) + wps * (tau2 - tau02))
        + cc(pl, mi) * wp * ex(wp * (tau - tau02) + wms * (tau2 - tau02)))
        * (-two_pi_i - g0(wp * d)? + l(wp) + lr(d) - l(wp * d))
        + (cc(mi, pl) * wm * ex(wm * (tau - tau02) + wps * (tau2 - tau02))
            + cc(mi, mi) * wm * ex(wm * (tau - tau02) + wms * (tau2 - tau02)))
            * (-g0(wm * d)? + l(wm) + lr(d) - l(wm * d))
        - (cc(pl, pl) * wps * ex(wp * (tau - tau0) + wps * (tau2 - tau0))
            + cc(mi, pl) * wps * ex(wm * (tau - tau0) + wps * (tau2 - tau0)))
            * (g0(-wps * d)? + l(-1.0 / wps) - lr(d) + l(-wps * d))
        - (cc(pl, mi) * wms * ex(wp * (tau - tau0) + wms * (tau2 - tau0))
            + cc(mi, mi) * wms * ex(wm * (tau - tau0) + wms * (tau2 - tau0)))
            * (g0(-wms * d)? + l(-1.0 / wms) - lr(d) + l(-wms * d));

    let p2 = -(-(cc(pl, pl) + cc(pl, mi)) * wp * ex(wp * (tau - tau2)) * (g0(-wp * s)? + l(-1.0 / wp) + l(-wp * s) - lr(s))
        - (cc(mi, pl) + cc(mi, mi)) * wm * ex(wm * (tau - tau2)) * (g0(-wm * s)? + l(-1.0 / wm) + l(-wm * s) - lr(s))
        + (cc(pl, pl) * wps * ex(wp * (tau - tau0)) + cc(mi, pl) * wps * ex(wm * (tau - tau0)))
            * ex(wps * s)
            * (two_pi_i - g0(wps * s)? + l(wps) - l(wps * s) + lr(s))
        - (cc(pl, mi) * wms * ex(wp * (tau - tau0)) + cc(mi, mi) * wms * ex(wm * (tau - tau0)))
            * ex(wms * s)
            * (g0(wms * s)? - l(wms) + l(wms * s) - lr(s)));

    let p3 = -(-ex(wp * u)
        * (cc(pl, pl) * wp * ex(wps * (tau2 - tau02)) + cc(pl, mi) * wp * ex(wms * (tau2 - tau02)))
        * (-two_pi_i + g0(wp * u)? - l(wp) - lr(u) + l(wp * u))
        - ex(wm * u)
            * (cc(mi, pl) * wm * ex(wps * (tau2 - tau02)) + cc(mi, mi) * wm * ex(wms * (tau2 - tau02)))
            * (g0(wm * u)? - l(wm) - lr(u) + l(wm * u))
        - (cc(pl, pl) + cc(mi, pl)) * wps * ex(wps * (tau2 - tau)) * (g0(-wps * u)? + l(-1.0 / wps) - lr(u) + l(-wps * u))
        - (cc(pl, mi) + cc(mi, mi)) * wms * ex(wms * (tau2 - tau)) * (g0(-wms * u)? + l(-1.0 / wms) - lr(u) + l(-wms * u)));

    let p4 = -(cc(pl, pl) + cc(pl, mi)) * wp * ex(-wp * v) * (g0(-wp * v)? + l(-1.0 / wp) - lr(v) + l(-wp * v))
        - (cc(mi, pl) + cc(mi, mi)) * wm * ex(-wm * v) * (g0(-wm * v)? + l(-1.0 / wm) - lr(v) + l(-wm * v))
        + (cc(pl, pl) + cc(mi, pl)) * wps * ex(wps * v) * (two_pi_i - g0(wps * v)? + l(wps) + lr(v) - l(wps * v))
        - (cc(pl, mi) + cc(mi, mi)) * wms * ex(wms * v) * (g0(wms * v)? - l(wms) - lr(v) + l(wms * v));

    let pf = prefactor(p);
    Ok(AppendixV2Terms {
        p1t: finite_c(pf * p1, "P1~")?,
        p2t: finite_c(pf * p2, "P2~")?,
        p3t: finite_c(pf * p3, "P3~")?,
        p4t: finite_c(pf * p4, "P4~")?,
    })
}
