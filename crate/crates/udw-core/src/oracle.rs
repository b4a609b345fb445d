//! Brute-force quadrature of the κ-integral representations.
//!
//! With P = λ₀²ħ/(4π²m₀²) and the response kernel K (or K̇ for Q̇Q̇):
//!
//! * v1     = P ∫_ℝ |K|² κ/(1 − e^{−2πκ/a}) dκ
//! * −v2    = P ∫_{−∞}^0 |κ| |K|² dκ
//! * inertial = P ∫_0^∞ κ |K|² dκ
//!
//! Each integrand grows like A/|κ| at large |κ| (A = G(η)² for QQ,
//! A = 1 + Ġ(η)² for Q̇Q̇). That logarithmic divergence is the one the
//! renormalization offsets absorb; with zero offsets it is removed by
//! subtracting A/|κ| for |κ| > Ω. The Q̇Q̇ integrands also carry an
//! oscillatory −2Ġ cos(κη)/|κ| tail, integrated analytically beyond the
//! cut-off through the cosine integral. What is left beyond the cut-off is
//! O(κ⁻²) and is either dropped (with a bound folded into the error
//! estimate) or extrapolated.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::closed::{uv_tail_amplitudes, Observable};
use crate::error::{Error, Result};
use crate::mode::{green, green_dot, response_kernel, response_kernel_dot};
use crate::model::DetectorParams;
use crate::special::cos_integral;

/// Treatment of the O(κ⁻²) remainder beyond `kappa_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// Truncate; a bound on the remainder is added to the error estimate.
    #[default]
    None,
    /// Assume a C/κ² remainder and extrapolate from the last octave
    /// [κ_max/2, κ_max]: ∫_{κ_max}^∞ ≈ ∫_{κ_max/2}^{κ_max}.
    InverseSquareExtrapolation,
}

/// Cut-off, tolerances and subdivision budget of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// κ cut-off; `None` selects 400·max(Ω, γ, a).
    pub kappa_max: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections beyond the initial panels.
    pub max_subdivisions: usize,
    pub tail_model: TailModel,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { kappa_max: None, abs_tol: 1e-8, rel_tol: 1e-7, max_subdivisions: 100_000, tail_model: TailModel::None }
    }
}

impl QuadratureConfig {
    /// Resolved cut-off for the given scales.
    pub fn resolved_kappa_max(&self, p: &DetectorParams, a: Option<f64>) -> f64 {
        self.kappa_max.unwrap_or_else(|| 400.0 * p.omega.max(p.gamma).max(a.unwrap_or(0.0)))
    }

    fn validate(&self, p: &DetectorParams, a: Option<f64>) -> Result<f64> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        let k = self.resolved_kappa_max(p, a);
        if !(k > 10.0 * p.omega) || !k.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "kappa_max = {k} must exceed 10*Omega = {}",
                10.0 * p.omega
            )));
        }
        Ok(k)
    }
}

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Oracle result for the accelerated detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub eta: f64,
    pub v1: f64,
    pub neg_v2: f64,
    pub total: f64,
    pub v1_error: f64,
    pub neg_v2_error: f64,
    pub error: f64,
}

/// Which part of the real κ line an inertial integral covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaRange {
    Positive,
    Negative,
    Full,
}

/// κ/(1 − e^{−2πκ/a}), finite at κ = 0 (limit a/2π) and overflow-free for
/// large negative κ.
pub fn thermal_factor(kappa: f64, a: f64) -> f64 {
    let x = 2.0 * PI * kappa / a;
    if x == 0.0 {
        a / (2.0 * PI)
    } else if x > 0.0 {
        kappa / -(-x).exp_m1()
    } else {
        kappa * x.exp() / x.exp_m1()
    }
}

// ---------------------------------------------------------------------------
// Adaptive Gauss–Kronrod (7/15) with a global error heap.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let centr = 0.5 * (lo + hi);
    let hlgth = 0.5 * (hi - lo);
    let fc = f(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = hlgth * XGK[j];
        let f1 = f(centr - dx);
        let f2 = f(centr + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite integrand on [{lo}, {hi}]")));
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let h = hlgth.abs();
    resasc *= h;
    resabs *= h;
    let mut err = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    err = err.max(50.0 * f64::EPSILON * resabs);
    Ok(Panel { lo, hi, value: resk * hlgth, error: err })
}

/// Adaptive integration of `f` over `[edges[0], edges.last()]`.
///
/// Each interval between consecutive `edges` is cut into panels no wider
/// than `panel`; the panel with the largest error estimate is bisected until
/// the summed estimate meets max(abs_tol, rel_tol·|I|) (with `scale`
/// converting the raw integral to the reported units).
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    edges: &[f64],
    panel: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let n = ((hi - lo) / panel).ceil().max(1.0) as usize;
        let step = (hi - lo) / n as f64;
        for i in 0..n {
            let a = lo + step * i as f64;
            let b = if i + 1 == n { hi } else { lo + step * (i + 1) as f64 };
            heap.push(gk15(f, a, b)?);
        }
    }
    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    let mut subdivisions = 0usize;
    loop {
        let goal = (cfg.abs_tol / scale.abs()).max(cfg.rel_tol * value.abs());
        if error <= goal {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure(format!(
                "tolerance not met after {subdivisions} subdivisions (error {:.3e} > goal {:.3e})",
                error * scale.abs(),
                goal * scale.abs()
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            return Err(Error::QuadratureFailure(format!("panel [{}, {}] cannot be bisected further", worst.lo, worst.hi)));
        }
        let left = gk15(f, worst.lo, mid)?;
        let right = gk15(f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions.is_multiple_of(4096) {
            // Re-sum to keep the running totals free of drift.
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(Estimate { value: value * scale, error: error * scale.abs() })
}

// ---------------------------------------------------------------------------
// Integrands.

/// P = λ₀²ħ/(4π²m₀²) = 2ħγ/(πm₀).
pub fn oracle_prefactor(p: &DetectorParams) -> f64 {
    p.lambda0 * p.lambda0 * p.hbar / (4.0 * PI * PI * p.m0 * p.m0)
}

/// |K|² (QQ) or |K̇|² (Q̇Q̇).
pub fn kernel_norm_sq(p: &DetectorParams, obs: Observable, kappa: f64, eta: f64) -> f64 {
    match obs {
        Observable::Qq => response_kernel(p, kappa, eta).norm_sqr(),
        Observable::Pp => response_kernel_dot(p, kappa, eta).norm_sqr(),
    }
}

fn uv_amplitude(p: &DetectorParams, obs: Observable, eta: f64) -> f64 {
    let (qq, pp) = uv_tail_amplitudes(p, eta);
    match obs {
        Observable::Qq => qq,
        Observable::Pp => pp,
    }
}

/// ∫_{K}^∞ of the oscillatory 1/κ tail of the positive-κ subtracted
/// integrand: 0 for QQ, 2Ġ Ci(Kη) for Q̇Q̇.
fn oscillatory_tail(p: &DetectorParams, obs: Observable, kappa_max: f64, eta: f64) -> Result<f64> {
    match obs {
        Observable::Qq => Ok(0.0),
        Observable::Pp => Ok(2.0 * green_dot(p, eta) * cos_integral(kappa_max * eta)?),
    }
}

/// Bound on the O(κ⁻²) remainder beyond the cut-off (raw units).
fn remainder_bound(p: &DetectorParams, kappa_max: f64, eta: f64) -> f64 {
    let s = 1.0 + green(p, eta).abs() + green_dot(p, eta).abs() + p.gamma + p.omega;
    s * s / (kappa_max * kappa_max) * (1.0 + 1.0 / eta)
}

fn panel_width(p: &DetectorParams, eta: f64, a: Option<f64>) -> f64 {
    (2.0 * PI / eta).min(5.0 * p.omega.max(a.unwrap_or(0.0)))
}

/// Breakpoints resolving the near-real poles at κ = ±Ω (width γ), the
/// thermal step at κ = 0 (width a/2π) and the start of the UV subtraction.
fn breakpoints(p: &DetectorParams, a: Option<f64>, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi, 0.0];
    for sign in [-1.0, 1.0] {
        let c = sign * p.omega;
        pts.push(c);
        for k in [1.0, 10.0, 100.0] {
            let d = k * p.gamma;
            if d < 0.5 * p.omega {
                pts.push(c - d);
                pts.push(c + d);
            }
        }
        if let Some(a) = a {
            for k in [1.0, 10.0] {
                pts.push(sign * k * a / (2.0 * PI));
            }
        }
    }
    pts.extend_from_slice(extra);
    pts.retain(|&x| x >= lo && x <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta must be positive and finite (got {eta})")))
    }
}

/// Which stretch of the κ line a piece covers and whether it carries the
/// UV subtraction and analytic tail.
#[derive(Clone, Copy)]
enum Segment {
    /// [0, K] with subtraction and tail.
    Positive,
    /// [−K, 0] with subtraction and tail.
    Negative,
    /// [lo, 0] with neither (thermally suppressed region).
    Suppressed(f64),
}

/// Integrates `weight(κ)|K|²` over one segment. On the two UV segments
/// A/|κ| is subtracted for |κ| > Ω and the analytic tail beyond the cut-off
/// is added.
#[allow(clippy::too_many_arguments)]
fn segment(
    p: &DetectorParams,
    obs: Observable,
    eta: f64,
    cfg: &QuadratureConfig,
    kappa_max: f64,
    seg: Segment,
    weight: &dyn Fn(f64) -> f64,
    a: Option<f64>,
) -> Result<Estimate> {
    let subtract = !matches!(seg, Segment::Suppressed(_));
    let amp = if subtract { uv_amplitude(p, obs, eta) } else { 0.0 };
    let omega = p.omega;
    let f = |k: f64| {
        let mut v = weight(k) * kernel_norm_sq(p, obs, k, eta);
        if k.abs() > omega {
            v -= amp / k.abs();
        }
        v
    };
    let pref = oracle_prefactor(p);
    let half = 0.5 * kappa_max;
    let extrapolate = subtract && cfg.tail_model == TailModel::InverseSquareExtrapolation;
    let (lo, hi, outer) = match seg {
        Segment::Positive => (0.0, kappa_max, (half, kappa_max)),
        Segment::Negative => (-kappa_max, 0.0, (-kappa_max, -half)),
        Segment::Suppressed(lo) => (lo.max(-kappa_max), 0.0, (0.0, 0.0)),
    };
    let panel = panel_width(p, eta, a);
    if !subtract {
        return integrate(&f, &breakpoints(p, a, lo, hi, &[]), panel, pref, cfg);
    }
    if !extrapolate {
        let mut est = integrate(&f, &breakpoints(p, a, lo, hi, &[]), panel, pref, cfg)?;
        est.value += pref * oscillatory_tail(p, obs, kappa_max, eta)?;
        est.error += pref * remainder_bound(p, kappa_max, eta);
        return Ok(est);
    }
    let inner_edges = if lo < 0.0 { breakpoints(p, a, -half, hi, &[]) } else { breakpoints(p, a, lo, half, &[]) };
    let inner = integrate(&f, &inner_edges, panel, pref, cfg)?;
    let outer_est = integrate(&f, &breakpoints(p, a, outer.0, outer.1, &[]), panel, pref, cfg)?;
    let osc_outer = pref * (oscillatory_tail(p, obs, half, eta)? - oscillatory_tail(p, obs, kappa_max, eta)?);
    // Remove the analytically handled 1/κ oscillation, then extrapolate the
    // C/κ² remainder: ∫_K^∞ ≈ ∫_{K/2}^K.
    let residual = outer_est.value - osc_outer;
    Ok(Estimate {
        value: inner.value + outer_est.value + pref * oscillatory_tail(p, obs, kappa_max, eta)? + residual,
        error: inner.error + outer_est.error + residual.abs(),
    })
}

/// Thermal (v1) and half-line (−v2) pieces for the accelerated detector.
pub fn uad_oracle(p: &DetectorParams, obs: Observable, a: f64, eta: f64, cfg: &QuadratureConfig) -> Result<OracleValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("proper acceleration must be positive (got {a})")));
    }
    check_eta(eta)?;
    let kmax = cfg.validate(p, Some(a))?;
    let thermal = move |k: f64| thermal_factor(k, a);
    // Below −60·a/2π the thermal weight is below e^{−60}; the subtraction
    // only starts at |κ| = Ω, where the thermal weight has switched off.
    let cut = -60.0 * a / (2.0 * PI);
    let pos = segment(p, obs, eta, cfg, kmax, Segment::Positive, &thermal, Some(a))?;
    let neg = segment(p, obs, eta, cfg, kmax, Segment::Suppressed(cut), &thermal, Some(a))?;
    let nv2 = segment(p, obs, eta, cfg, kmax, Segment::Negative, &|k: f64| -k, None)?;
    let v1 = Estimate { value: pos.value + neg.value, error: pos.error + neg.error };
    Ok(OracleValue {
        eta,
        v1: v1.value,
        neg_v2: nv2.value,
        total: v1.value + nv2.value,
        v1_error: v1.error,
        neg_v2_error: nv2.error,
        error: v1.error + nv2.error,
    })
}

/// ⟨Q²⟩ oracle for the accelerated detector.
pub fn qq_uad_oracle(p: &DetectorParams, a: f64, eta: f64, cfg: &QuadratureConfig) -> Result<OracleValue> {
    uad_oracle(p, Observable::Qq, a, eta, cfg)
}

/// ⟨Q̇²⟩ oracle for the accelerated detector.
pub fn pp_uad_oracle(p: &DetectorParams, a: f64, eta: f64, cfg: &QuadratureConfig) -> Result<OracleValue> {
    uad_oracle(p, Observable::Pp, a, eta, cfg)
}

/// P ∫ κ|K|² dκ over the requested part of the κ line. The half lines carry
/// the A/|κ| subtraction for |κ| > Ω; the full line is integrated in one
/// pass and vanishes by oddness.
pub fn inertial_oracle(
    p: &DetectorParams,
    obs: Observable,
    eta: f64,
    range: KappaRange,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_eta(eta)?;
    let kmax = cfg.validate(p, None)?;
    let pos = || segment(p, obs, eta, cfg, kmax, Segment::Positive, &|k: f64| k, None);
    // On the negative side κ|K|² ≈ −A/|κ|: the odd subtraction gives
    // κ|K|² + A/|κ| = −(|κ||K|² − A/|κ|).
    let neg = || -> Result<Estimate> {
        let e = segment(p, obs, eta, cfg, kmax, Segment::Negative, &|k: f64| -k, None)?;
        Ok(Estimate { value: -e.value, error: e.error })
    };
    match range {
        KappaRange::Positive => pos(),
        KappaRange::Negative => neg(),
        // One pass over [−K, K]: the odd A/|κ| subtraction and the two tails
        // beyond ±K cancel, so the raw integrand is used.
        KappaRange::Full => {
            let f = |k: f64| k * kernel_norm_sq(p, obs, k, eta);
            let edges = breakpoints(p, None, -kmax, kmax, &[]);
            integrate(&f, &edges, panel_width(p, eta, None), oracle_prefactor(p), cfg)
        }
    }
}

/// ⟨Q²⟩ oracle for the inertial detector (κ ∈ [0, ∞)).
pub fn qq_inertial_oracle(p: &DetectorParams, eta: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    inertial_oracle(p, Observable::Qq, eta, KappaRange::Positive, cfg)
}

/// ⟨Q̇²⟩ oracle for the inertial detector (κ ∈ [0, ∞)).
pub fn pp_inertial_oracle(p: &DetectorParams, eta: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    inertial_oracle(p, Observable::Pp, eta, KappaRange::Positive, cfg)
}
