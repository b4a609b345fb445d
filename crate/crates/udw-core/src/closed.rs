//! Closed-form equal-time correlators.
//!
//! For the uniformly accelerated detector the variance splits into a thermal
//! full-line piece `v1` and a half-line piece `neg_v2` (the value of −⟨··⟩_v2),
//! with `total = v1 + neg_v2`. The inertial detector has only the half-line
//! piece (its full-line counterpart vanishes identically by oddness in κ).
//!
//! Two variants are available:
//!
//! * [`ClosedFormVariant::Published`] evaluates the published expressions
//!   term by term, including their literal branch choices;
//! * [`ClosedFormVariant::Exact`] evaluates the half-line κ-integral in closed
//!   form via vertical-ray exponential integrals. It agrees with the
//!   quadrature oracle; the thermal `v1` pieces are identical in both variants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{finite, finite_c, Error, Result};
use crate::mode::{green, green_dot, oscillator_constants};
use crate::model::DetectorParams;
use crate::special::{coth, digamma, gamma0, hyp_f, plog, EULER_GAMMA};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The two equal-time observables: ⟨Q²⟩ and ⟨Q̇²⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Qq,
    Pp,
}

/// Overall normalization of the closed forms.
///
/// `MainText` carries 2ħγ/(πm₀) (times 1/Ω² for the v1 pieces) and is the
/// one confirmed by the quadrature oracle; `AppendixD` is half of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorConvention {
    #[default]
    MainText,
    AppendixD,
}

impl PrefactorConvention {
    fn factor(self) -> f64 {
        match self {
            PrefactorConvention::MainText => 2.0,
            PrefactorConvention::AppendixD => 1.0,
        }
    }
}

/// Which expression is used for the half-line (−v2 and inertial) pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormVariant {
    /// The published expressions, evaluated literally.
    #[default]
    Published,
    /// Closed-form evaluation of the half-line integral itself.
    Exact,
}

/// Additive renormalization constants absorbing the coincidence-limit
/// divergences. All zero by default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RenormOffsets {
    /// Λ₀, multiplying e^{−2γη}sin²Ωη (QQ) or e^{−2γη}(Ω cos Ωη − γ sin Ωη)² (Q̇Q̇).
    pub lambda0: f64,
    /// Λ₁, multiplying Ω² in the Q̇Q̇ v1 piece.
    pub lambda1: f64,
    /// Λ₀_v2 of the QQ half-line piece.
    pub lambda0_v2: f64,
    /// Λ̃₀_v2 of the Q̇Q̇ half-line piece.
    pub lambda0_tilde_v2: f64,
    /// Λ̃₀ of the inertial QQ correlator.
    pub lambda0_tilde: f64,
    /// Λ̃₀_v of the inertial Q̇Q̇ correlator.
    pub lambda0_tilde_v: f64,
}

/// Evaluation options shared by every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelatorOptions {
    /// When false the offsets are ignored (all Λ set to zero).
    pub include_renorm_offsets: bool,
    pub offsets: RenormOffsets,
    pub prefactor_convention: PrefactorConvention,
    pub variant: ClosedFormVariant,
}

impl CorrelatorOptions {
    /// Options with Λ₀ = Λ₁ = −γ_E − ln(Ω δ), the finite form of the
    /// thermal-piece offset for a point splitting δ = |τ₀ − τ₀″|.
    pub fn point_split(omega: f64, delta: f64) -> Result<Self> {
        if !(omega > 0.0) || !(delta > 0.0) {
            return Err(Error::Domain(format!("point splitting needs omega > 0 and delta > 0 (got {omega}, {delta})")));
        }
        let l = -EULER_GAMMA - (omega * delta).ln();
        Ok(Self {
            include_renorm_offsets: true,
            offsets: RenormOffsets { lambda0: l, lambda1: l, ..RenormOffsets::default() },
            ..Self::default()
        })
    }

    pub fn with_convention(mut self, convention: PrefactorConvention) -> Self {
        self.prefactor_convention = convention;
        self
    }

    pub fn with_variant(mut self, variant: ClosedFormVariant) -> Self {
        self.variant = variant;
        self
    }

    fn offsets(&self) -> RenormOffsets {
        if self.include_renorm_offsets {
            self.offsets
        } else {
            RenormOffsets::default()
        }
    }
}

/// One equal-time evaluation: `total = v1 + neg_v2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorValue {
    pub eta: f64,
    pub v1: f64,
    pub neg_v2: f64,
    pub total: f64,
}

impl CorrelatorValue {
    pub fn new(eta: f64, v1: f64, neg_v2: f64) -> Self {
        Self { eta, v1, neg_v2, total: v1 + neg_v2 }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta must be positive and finite (got {eta})")))
    }
}

fn check_acceleration(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("proper acceleration must satisfy 0 < a < 1 (got {a})")))
    }
}

/// ħγ/(πm₀) times the convention factor.
fn base_prefactor(p: &DetectorParams, opts: &CorrelatorOptions) -> f64 {
    opts.prefactor_convention.factor() * p.hbar * p.gamma / (PI * p.m0)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(z: Complex64) -> Complex64 {
    z.exp()
}

/// Thermal pieces shared by the QQ and Q̇Q̇ v1 forms.
struct ThermalBlocks {
    /// F_{γ+iΩ}(e^{−aη}) / (γ+iΩ+a)
    f_plus: Complex64,
    /// F_{−γ−iΩ}(e^{−aη}) / (γ+iΩ−a)
    f_minus: Complex64,
    /// ψ(1 + s/a) + ψ(1 − s/a), s = γ+iΩ
    psi_sum: Complex64,
    /// iπ coth((π/a)(Ω − iγ))
    i_pi_coth: Complex64,
}

fn thermal_blocks(p: &DetectorParams, a: f64, eta: f64) -> Result<ThermalBlocks> {
    let s = c(p.gamma, p.omega);
    let z = c((-a * eta).exp(), 0.0);
    Ok(ThermalBlocks {
        f_plus: hyp_f(s / a, z)? / (s + a),
        f_minus: hyp_f(-s / a, z)? / (s - a),
        psi_sum: digamma(1.0 + s / a)? + digamma(1.0 - s / a)?,
        i_pi_coth: I * PI * coth(PI / a * c(p.omega, -p.gamma))?,
    })
}

/// Complex bracket of the QQ v1 form (before taking the real part and
/// applying the prefactor). Exposed for the realness diagnostics.
pub fn qq_uad_v1_assembly(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<Complex64> {
    check_acceleration(a)?;
    check_eta(eta)?;
    let (g, om) = (p.gamma, p.omega);
    let lam0 = opts.offsets().lambda0;
    let tb = thermal_blocks(p, a, eta)?;
    let iog = c(0.0, om / g);
    let ph = e(c(0.0, om * eta));
    let sin = (om * eta).sin();
    let t1 = (lam0 - (a / om).ln()) * (-2.0 * g * eta).exp() * sin * sin;
    let t2 = a / 2.0
        * (-(g + a) * eta).exp()
        * (tb.f_plus * (-iog) / ph + tb.f_minus * ((1.0 + iog) * ph - 1.0 / ph));
    let b = (-2.0 * g * eta).exp() * (iog + 1.0 - 1.0 / (ph * ph));
    let t3 = -0.25 * ((iog + b) * tb.psi_sum - (-iog + b) * tb.i_pi_coth);
    finite_c(c(t1, 0.0) + t2 + t3, "qq_uad_v1")
}

/// Thermal full-line piece ⟨QQ⟩_v1 of the accelerated detector.
pub fn qq_uad_v1(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    let z = qq_uad_v1_assembly(p, a, eta, opts)?;
    finite(base_prefactor(p, opts) / (p.omega * p.omega) * z.re, "qq_uad_v1")
}

/// Complex bracket of the Q̇Q̇ v1 form.
pub fn pp_uad_v1_assembly(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<Complex64> {
    check_acceleration(a)?;
    check_eta(eta)?;
    let (g, om) = (p.gamma, p.omega);
    let off = opts.offsets();
    let tb = thermal_blocks(p, a, eta)?;
    let s = c(g, om);
    let s2 = s * s;
    let iog = c(0.0, om / g);
    let ph = e(c(0.0, om * eta));
    let (sn, cs) = (om * eta).sin_cos();
    let ln_ratio = (a / om).ln();
    let env = om * cs - g * sn;
    let t1 = (off.lambda1 - ln_ratio) * om * om + (off.lambda0 - ln_ratio) * (-2.0 * g * eta).exp() * env * env;
    let t2 = a / 2.0
        * s2
        * (-(g + a) * eta).exp()
        * (tb.f_plus * iog / ph + tb.f_minus * ((1.0 - iog) * ph - 1.0 / ph));
    let b = (-2.0 * g * eta).exp() * (iog - 1.0 + 1.0 / (ph * ph));
    let t3 = 0.25 * s2 * ((iog + b) * tb.psi_sum - (-iog + b) * tb.i_pi_coth);
    finite_c(c(t1, 0.0) + t2 + t3, "pp_uad_v1")
}

/// Thermal full-line piece ⟨Q̇Q̇⟩_v1 of the accelerated detector.
pub fn pp_uad_v1(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    let z = pp_uad_v1_assembly(p, a, eta, opts)?;
    finite(base_prefactor(p, opts) / (p.omega * p.omega) * z.re, "pp_uad_v1")
}

fn published_qq_half_line(p: &DetectorParams, eta: f64) -> Result<Complex64> {
    let (g, om) = (p.gamma, p.omega);
    let gp = c(g, om);
    let gm = c(g, -om);
    let iog = c(0.0, om / g);
    let ph2 = e(c(0.0, 2.0 * om * eta));
    let ipi = c(0.0, PI);
    let br = (1.0 - iog - ph2) * (ipi + 2.0 * plog(gm) + 2.0 * gamma0(-gm * eta)?)
        + (1.0 + iog - 1.0 / ph2) * (-ipi - 2.0 * plog(gp) + 2.0 * gamma0(-gp * eta)?);
    let last = -I / (8.0 * om * g) * (-ipi - 2.0 * plog(gp / gm) + 2.0 * gamma0(gp * eta)? - 2.0 * gamma0(gm * eta)?);
    Ok(-(-2.0 * g * eta).exp() / (8.0 * om * om) * br + last)
}

fn published_pp_half_line(p: &DetectorParams, eta: f64) -> Result<Complex64> {
    let (g, om) = (p.gamma, p.omega);
    let gp = c(g, om);
    let gm = c(g, -om);
    let w2 = g * g + om * om;
    let iog = c(0.0, om / g);
    let ipi = c(0.0, PI);
    let ph = e(c(0.0, om * eta));
    let inv = 1.0 / eta;
    let mut t = (-2.0 * g * eta).exp() / (8.0 * om * om)
        * ((w2 * (1.0 - iog) - gm * gm * ph * ph) * (-ipi + 2.0 * plog(gm))
            + (w2 * (1.0 + iog) - gp * gp / (ph * ph)) * (ipi + 2.0 * plog(gp)));
    t += I * e(-gp * eta) / (4.0 * om * g)
        * (gm * (-inv + e(gm * eta) * gm * gamma0(gm * eta)?) - gp * (-inv + e(gp * eta) * gp * gamma0(gp * eta)?));
    let mgm = c(-g, om);
    t += (-g * eta).exp() / (4.0 * om * om)
        * ((gp / ph - w2 / g * ph) * (gp * (ipi - gamma0(-gp * eta)?) * e(-gp * eta) - inv)
            + (gm * ph - w2 / g / ph) * (e(mgm * eta) * mgm * (ipi + gamma0(mgm * eta)?) - inv));
    // The printed constant repeats log(γ − iΩ) in both terms; kept as printed.
    t += I / (8.0 * om * g) * (gm * gm * (2.0 * plog(gm) + ipi) - gp * gp * (2.0 * plog(gm) + 3.0 * ipi));
    Ok(t)
}

fn published_qq_inertial(p: &DetectorParams, eta: f64) -> Result<Complex64> {
    let (g, om) = (p.gamma, p.omega);
    let gp = c(g, om);
    let gm = c(g, -om);
    let iog = c(0.0, om / g);
    let ipi = c(0.0, PI);
    let ph2 = e(c(0.0, 2.0 * om * eta));
    let mut t = (-2.0 * g * eta).exp() / (8.0 * om * om)
        * ((1.0 - iog - ph2) * (ipi - 2.0 * plog(gm) + gamma0(c(-g, om) * eta)?)
            + (1.0 + iog - 1.0 / ph2) * (-3.0 * ipi - 2.0 * plog(gp) + gamma0(-gp * eta)?));
    t += I / (8.0 * om * g)
        * (-2.0 * ipi + 2.0 * plog(gm) - 2.0 * plog(gp) - gamma0(gm * eta)? + gamma0(gp * eta)?);
    Ok(t)
}

fn published_pp_inertial(p: &DetectorParams, eta: f64) -> Result<Complex64> {
    let (g, om) = (p.gamma, p.omega);
    let gp = c(g, om);
    let gm = c(g, -om);
    let w2 = g * g + om * om;
    let ipi = c(0.0, PI);
    let ph = e(c(0.0, om * eta));
    let inv = 1.0 / eta;
    let k = 1.0 / (8.0 * om * om);
    let mut t = (-2.0 * g * eta).exp() * k
        * ((gm * w2 / g - gm * gm * ph * ph) * (-ipi - 2.0 * plog(gm))
            + (gp * w2 / g - gp * gp / (ph * ph)) * (-3.0 * ipi - 2.0 * plog(gp)));
    t += e(c(-g, om) * eta) * k * (gm - gm * gm / g) * (2.0 * inv - 2.0 * gm * e(gm * eta) * gamma0(gm * eta)?);
    t += e(c(-g, -om) * eta) * k * (gp - gp * gp / g) * (2.0 * inv - 2.0 * gp * e(gp * eta) * gamma0(gp * eta)?);
    // The printed phase factor "e^{iΩ}(τ−τ₀)" is read as e^{iΩ(τ−τ₀)}.
    let sin = (om * eta).sin();
    let iog = c(0.0, om / g);
    t += (-g * eta).exp() * k
        * ((-2.0 * I * sin + iog * ph) * (2.0 * gp * inv - 2.0 * gp * gp * e(-gp * eta) * (ipi - gamma0(-gp * eta)?))
            + (2.0 * I * sin - iog / ph) * (2.0 * gm * inv + 2.0 * gm * gm * e(-gm * eta) * (ipi + gamma0(-gm * eta)?)));
    t += I / (8.0 * om * g) * (-gm * gm * (2.0 * plog(gm) - ipi) + gp * gp * (2.0 * plog(gp) + ipi));
    Ok(t)
}

/// ∫_z^{z + iσ∞} e^{−t}/t dt along a vertical ray (σ = ±1), expressed
/// through the principal Γ(0,z) plus the 2πi picked up when the ray crosses
/// the cut on the negative real axis.
fn ray_e1(z: Complex64, sigma: f64) -> Result<Complex64> {
    let mut v = gamma0(z)?;
    if z.re < 0.0 {
        if sigma > 0.0 && z.im < 0.0 {
            v -= 2.0 * PI * I;
        } else if sigma < 0.0 && z.im > 0.0 {
            v += 2.0 * PI * I;
        }
    }
    Ok(v)
}

/// ∫_{−∞}^0 e^{iκs}/(κ − p) dκ for s ≠ 0 and Im p ≠ 0.
fn half_line_exp(pole: Complex64, s: f64) -> Result<Complex64> {
    let z = I * pole * s;
    Ok(-z.exp() * ray_e1(z, s.signum())?)
}

/// ∫_{−∞}^0 [1/(κ − p) − θ(−κ − Ω)/κ] dκ: the non-oscillatory 1/κ tail is
/// removed beyond |κ| = Ω, matching the zero-offset convention of v1.
fn half_line_log(pole: Complex64, omega: f64) -> Complex64 {
    plog(-pole) - omega.ln() + I * PI * pole.im.signum()
}

/// Exact −v2 bracket: Σ_{jj′} c_j c*_{j′}/(w_j+w*_{j′}) × (half-line
/// integrals of the partial-fraction kernel against e₁…e₄ at coincidence).
/// With `dot` the coefficients are c_j w_j (differentiated kernel).
fn exact_half_line(p: &DetectorParams, eta: f64, dot: bool) -> Result<f64> {
    let k = oscillator_constants(p);
    let pairs = k.pairs().map(|(cj, wj)| if dot { (cj * wj, wj) } else { (cj, wj) });
    let mut total = Complex64::new(0.0, 0.0);
    for &(cj, wj) in &pairs {
        for &(ck, wk0) in &pairs {
            let wk = wk0.conj();
            let coeff = cj * ck.conj() / (wj + wk);
            let pa = I * wj;
            let pb = -I * wk;
            let mut t = ((wj + wk) * eta).exp() + 1.0;
            t *= wj * half_line_log(pa, p.omega) + wk * half_line_log(pb, p.omega);
            t -= (wj * eta).exp() * (wj * half_line_exp(pa, eta)? + wk * half_line_exp(pb, eta)?);
            t -= (wk * eta).exp() * (wj * half_line_exp(pa, -eta)? + wk * half_line_exp(pb, -eta)?);
            total += coeff * t;
        }
    }
    let pref = p.lambda0 * p.lambda0 * p.hbar / (4.0 * PI * PI * p.m0 * p.m0);
    finite(-pref * total.re, "exact half-line integral")
}

/// Scale from the MainText normalization to the selected convention.
fn convention_scale(opts: &CorrelatorOptions) -> f64 {
    opts.prefactor_convention.factor() / PrefactorConvention::MainText.factor()
}

/// −⟨QQ⟩_v2 of the accelerated detector (independent of a).
pub fn qq_uad_v2(p: &DetectorParams, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    check_eta(eta)?;
    let pref = -base_prefactor(p, opts);
    let offset = opts.offsets().lambda0_v2;
    match opts.variant {
        ClosedFormVariant::Published => {
            let t = finite_c(published_qq_half_line(p, eta)? + offset, "qq_uad_v2")?;
            finite(pref * t.re, "qq_uad_v2")
        }
        ClosedFormVariant::Exact => Ok(convention_scale(opts) * exact_half_line(p, eta, false)? + pref * offset),
    }
}

/// −⟨Q̇Q̇⟩_v2 of the accelerated detector (independent of a).
pub fn pp_uad_v2(p: &DetectorParams, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    check_eta(eta)?;
    let pref = -base_prefactor(p, opts);
    let offset = opts.offsets().lambda0_tilde_v2;
    match opts.variant {
        ClosedFormVariant::Published => {
            let t = finite_c(published_pp_half_line(p, eta)? + offset, "pp_uad_v2")?;
            finite(pref * t.re, "pp_uad_v2")
        }
        ClosedFormVariant::Exact => Ok(convention_scale(opts) * exact_half_line(p, eta, true)? + pref * offset),
    }
}

/// ⟨Q²(η)⟩_v of the accelerated detector.
pub fn qq_uad(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<CorrelatorValue> {
    Ok(CorrelatorValue::new(eta, qq_uad_v1(p, a, eta, opts)?, qq_uad_v2(p, eta, opts)?))
}

/// ⟨Q̇²(η)⟩_v of the accelerated detector.
pub fn pp_uad(p: &DetectorParams, a: f64, eta: f64, opts: &CorrelatorOptions) -> Result<CorrelatorValue> {
    Ok(CorrelatorValue::new(eta, pp_uad_v1(p, a, eta, opts)?, pp_uad_v2(p, eta, opts)?))
}

/// ⟨Q²(η)⟩_v of the inertial detector (independent of the velocity).
pub fn qq_inertial(p: &DetectorParams, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    check_eta(eta)?;
    let pref = base_prefactor(p, opts);
    let offset = opts.offsets().lambda0_tilde;
    match opts.variant {
        ClosedFormVariant::Published => {
            let t = finite_c(published_qq_inertial(p, eta)? + offset, "qq_inertial")?;
            finite(pref * t.re, "qq_inertial")
        }
        // ∫₀^∞ κ|K|² equals the half-line −v2 integral by κ → −κ symmetry.
        ClosedFormVariant::Exact => Ok(convention_scale(opts) * exact_half_line(p, eta, false)? + pref * offset),
    }
}

/// ⟨Q̇²(η)⟩_v of the inertial detector.
pub fn pp_inertial(p: &DetectorParams, eta: f64, opts: &CorrelatorOptions) -> Result<f64> {
    check_eta(eta)?;
    let pref = base_prefactor(p, opts);
    let offset = opts.offsets().lambda0_tilde_v;
    match opts.variant {
        ClosedFormVariant::Published => {
            let t = finite_c(published_pp_inertial(p, eta)? + offset, "pp_inertial")?;
            finite(pref * t.re, "pp_inertial")
        }
        ClosedFormVariant::Exact => Ok(convention_scale(opts) * exact_half_line(p, eta, true)? + pref * offset),
    }
}

/// Inertial value in split form: the full-line integral vanishes, so
/// `v1 = 0` and the whole variance sits in the half-line piece.
pub fn inertial_value(eta: f64, value: f64) -> CorrelatorValue {
    CorrelatorValue::new(eta, 0.0, value)
}

/// Large-κ amplitudes of the subtracted 1/|κ| tails, (QQ, Q̇Q̇):
/// G(η)² and 1 + Ġ(η)².
pub fn uv_tail_amplitudes(p: &DetectorParams, eta: f64) -> (f64, f64) {
    let g = green(p, eta);
    let gd = green_dot(p, eta);
    (g * g, 1.0 + gd * gd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda0: f64, omega: f64) -> DetectorParams {
        DetectorParams::natural(lambda0, omega).unwrap()
    }

    fn exact() -> CorrelatorOptions {
        CorrelatorOptions::default().with_variant(ClosedFormVariant::Exact)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // Reference values below come from an independent scipy/mpmath
    // quadrature of the half-line κ-integral.
    #[test]
    fn exact_half_line_matches_reference_quadrature() {
        let o = exact();
        assert!(rel(qq_uad_v2(&params(0.3, 1.0), 5.0, &o).unwrap(), 0.016_287_6) < 1e-5);
        assert!(rel(qq_uad_v2(&params(0.1, 1.0), 11.0, &o).unwrap(), 0.004_106_6) < 2e-5);
        assert!(rel(pp_uad_v2(&params(0.1, 1.0), 11.0, &o).unwrap(), 0.004_102_76) < 1e-5);
        assert!(rel(pp_uad_v2(&params(0.3, 2.3), 5.0, &o).unwrap(), 0.036_736_4) < 1e-5);
    }

    // Reference values from a multiprecision evaluation of the same printed
    // expression (mpmath hyp2f1/digamma/coth).
    #[test]
    fn reference_values_for_qq() {
        let o = CorrelatorOptions::default();
        let p = params(0.3, 1.0);
        assert!(rel(qq_uad(&p, 0.1, 30.0, &o).unwrap().total, 1.24589) < 5e-3);
        assert!(rel(qq_uad(&p, 0.001, 30.0, &o).unwrap().total, 1.24588) < 5e-3);
        assert!(rel(qq_uad(&p, 0.1, 5000.0, &o).unwrap().total, 1.24772) < 5e-3);
    }

    #[test]
    fn half_line_piece_is_independent_of_acceleration() {
        let p = params(0.3, 1.0);
        let o = CorrelatorOptions::default();
        let x = qq_uad(&p, 0.1, 7.0, &o).unwrap().neg_v2;
        let y = qq_uad(&p, 0.001, 7.0, &o).unwrap().neg_v2;
        assert_eq!(x, y);
    }

    #[test]
    fn eta_domain_is_enforced() {
        let p = params(0.1, 1.0);
        let o = CorrelatorOptions::default();
        assert!(matches!(qq_uad_v1(&p, 0.1, 0.0, &o), Err(Error::Domain(_))));
        assert!(matches!(pp_uad_v2(&p, 0.0, &o), Err(Error::Domain(_))));
        assert!(matches!(qq_inertial(&p, -1.0, &o), Err(Error::Domain(_))));
        assert!(matches!(pp_inertial(&p, 0.0, &o), Err(Error::Domain(_))));
        assert!(matches!(qq_uad_v1(&p, 1.0, 3.0, &o), Err(Error::Domain(_))));
    }

    #[test]
    fn conventions_differ_by_two() {
        let p = params(0.3, 2.3);
        let main = CorrelatorOptions::default();
        let app = main.with_convention(PrefactorConvention::AppendixD);
        let a = qq_uad(&p, 0.01, 5.0, &main).unwrap();
        let b = qq_uad(&p, 0.01, 5.0, &app).unwrap();
        assert!((a.v1 - 2.0 * b.v1).abs() < 1e-15 * a.v1.abs().max(1.0));
        assert!((a.neg_v2 - 2.0 * b.neg_v2).abs() < 1e-14 * a.neg_v2.abs().max(1.0));
        let ea = qq_uad_v2(&p, 5.0, &exact()).unwrap();
        let eb = qq_uad_v2(&p, 5.0, &exact().with_convention(PrefactorConvention::AppendixD)).unwrap();
        assert!((ea - 2.0 * eb).abs() < 1e-15);
    }

    #[test]
    fn offsets_only_enter_when_enabled() {
        let p = params(0.3, 1.0);
        let mut o = CorrelatorOptions::point_split(1.0, 1e-3).unwrap();
        let with = qq_uad_v1(&p, 0.1, 3.0, &o).unwrap();
        o.include_renorm_offsets = false;
        let without = qq_uad_v1(&p, 0.1, 3.0, &o).unwrap();
        let g = green(&p, 3.0);
        let expected = 2.0 * p.gamma / (PI * p.omega * p.omega) * o.offsets.lambda0 * g * g * p.omega * p.omega;
        assert!((with - without - expected).abs() < 1e-12);
        assert!(CorrelatorOptions::point_split(1.0, 0.0).is_err());
    }

    #[test]
    fn inertial_exact_equals_uad_half_line() {
        let p = params(0.1, 1.0);
        let o = exact();
        assert_eq!(qq_inertial(&p, 10.0, &o).unwrap(), qq_uad_v2(&p, 10.0, &o).unwrap());
        let v = inertial_value(10.0, 0.5);
        assert_eq!((v.v1, v.neg_v2, v.total), (0.0, 0.5, 0.5));
    }

    #[test]
    fn ray_integral_branch_jump() {
        let up = ray_e1(c(-1.0, -1e-9), 1.0).unwrap();
        let down = ray_e1(c(-1.0, 1e-9), 1.0).unwrap();
        assert!((up - down).norm() < 1e-7);
    }
}
