//! Damped-oscillator constants, the intrinsic mode qᵃ and the response
//! kernels shared by the quadrature oracle.
//!
//! The kernels are pure shape functions: coupling and mass prefactors are
//! attached by the callers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::DetectorParams;

/// c_± = ±1/(2iΩ) and w_± = −γ ± iΩ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConstants {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub w_plus: Complex64,
    pub w_minus: Complex64,
}

impl OscillatorConstants {
    /// The two (c_j, w_j) pairs, in the order (+, −).
    pub fn pairs(&self) -> [(Complex64, Complex64); 2] {
        [(self.c_plus, self.w_plus), (self.c_minus, self.w_minus)]
    }
}

/// Constants of the retarded Green's function G(t) = Σ_j c_j e^{w_j t} = e^{−γt} sin Ωt / Ω.
pub fn oscillator_constants(params: &DetectorParams) -> OscillatorConstants {
    let c_plus = Complex64::new(0.0, 2.0 * params.omega).inv();
    OscillatorConstants {
        c_plus,
        c_minus: -c_plus,
        w_plus: Complex64::new(-params.gamma, params.omega),
        w_minus: Complex64::new(-params.gamma, -params.omega),
    }
}

/// Intrinsic mode qᵃ(η) = ½e^{−γη}[(1 − r)e^{iΩη} + (1 + r)e^{−iΩη}], with
/// r = (Ω_r + iγ)/Ω, so that qᵃ(0) = 1 and q̇ᵃ(0) = −iΩ_r.
pub fn q_a(params: &DetectorParams, eta: f64) -> Complex64 {
    // ½[(1 − r)e^{iΩη} + (1 + r)e^{−iΩη}] = cos Ωη − i r sin Ωη, r = (Ω_r + iγ)/Ω.
    let ratio = Complex64::new(params.omega_r, params.gamma) / params.omega;
    let (s, c) = (params.omega * eta).sin_cos();
    (-params.gamma * eta).exp() * (c - Complex64::new(0.0, s) * ratio)
}

/// Response kernel K(κ, η) = Σ_j c_j (e^{w_j η} − e^{−iκη}) / (w_j + iκ).
///
/// K solves K̈ + 2γK̇ + Ω_r²K = e^{−iκη} with K(0) = K̇(0) = 0.
pub fn response_kernel(params: &DetectorParams, kappa: f64, eta: f64) -> Complex64 {
    let k = oscillator_constants(params);
    let drive = Complex64::new(0.0, -kappa * eta).exp();
    let ik = Complex64::new(0.0, kappa);
    k.pairs()
        .iter()
        .map(|&(c, w)| c * ((w * eta).exp() - drive) / (w + ik))
        .sum()
}

/// η-derivative K̇(κ, η) = Σ_j c_j (w_j e^{w_j η} + iκ e^{−iκη}) / (w_j + iκ).
pub fn response_kernel_dot(params: &DetectorParams, kappa: f64, eta: f64) -> Complex64 {
    let k = oscillator_constants(params);
    let drive = Complex64::new(0.0, -kappa * eta).exp();
    let ik = Complex64::new(0.0, kappa);
    k.pairs()
        .iter()
        .map(|&(c, w)| c * (w * (w * eta).exp() + ik * drive) / (w + ik))
        .sum()
}

/// Green's function G(η) = e^{−γη} sin(Ωη)/Ω, the large-κ amplitude of iκK.
pub fn green(params: &DetectorParams, eta: f64) -> f64 {
    (-params.gamma * eta).exp() * (params.omega * eta).sin() / params.omega
}

/// Ġ(η) = e^{−γη}(Ω cos Ωη − γ sin Ωη)/Ω.
pub fn green_dot(params: &DetectorParams, eta: f64) -> f64 {
    let (s, c) = (params.omega * eta).sin_cos();
    (-params.gamma * eta).exp() * (params.omega * c - params.gamma * s) / params.omega
}
