//! Physical parameters, detector worldlines and retarded kinematics.
//!
//! Natural units are the default (ħ = c = 1, m₀ = 1) but every constant is an
//! explicit field; nothing is hidden in module-level constants.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Coupling, mass and frequencies of the detector's internal oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Dimensionless coupling λ₀ to the scalar field.
    pub lambda0: f64,
    /// Oscillator mass m₀.
    pub m0: f64,
    /// Reduced Planck constant ħ.
    pub hbar: f64,
    /// Renormalized natural frequency Ω_r.
    pub omega_r: f64,
    /// Damping constant γ = λ₀² / (8π m₀).
    pub gamma: f64,
    /// Oscillation frequency Ω = √(Ω_r² − γ²).
    pub omega: f64,
}

/// Damping constant γ = λ₀²/(8π m₀).
pub fn damping(lambda0: f64, m0: f64) -> f64 {
    lambda0 * lambda0 / (8.0 * PI * m0)
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveInput { name, value })
    }
}

/// Builds [`DetectorParams`] from the renormalized frequency Ω_r.
pub fn derive_params(lambda0: f64, m0: f64, hbar: f64, omega_r: f64) -> Result<DetectorParams> {
    positive("lambda0", lambda0)?;
    positive("m0", m0)?;
    positive("hbar", hbar)?;
    positive("omega_r", omega_r)?;
    let gamma = damping(lambda0, m0);
    let gamma_sq = gamma * gamma;
    let omega_r_sq = omega_r * omega_r;
    if gamma_sq >= omega_r_sq {
        return Err(Error::OverDamped { gamma_sq, omega_r_sq });
    }
    Ok(DetectorParams {
        lambda0,
        m0,
        hbar,
        omega_r,
        gamma,
        omega: (omega_r_sq - gamma_sq).sqrt(),
    })
}

impl DetectorParams {
    /// Builds parameters from the oscillation frequency Ω, back-computing
    /// Ω_r = √(Ω² + γ²). Figures and the CLI are labelled by Ω.
    pub fn from_omega(lambda0: f64, m0: f64, hbar: f64, omega: f64) -> Result<Self> {
        positive("omega", omega)?;
        positive("lambda0", lambda0)?;
        positive("m0", m0)?;
        let gamma = damping(lambda0, m0);
        let mut p = derive_params(lambda0, m0, hbar, omega.hypot(gamma))?;
        // Keep the user's Ω bit-exact; it differs from √(Ω_r² − γ²) by ulps only.
        p.omega = omega;
        Ok(p)
    }

    /// Natural-unit shorthand (m₀ = ħ = 1) parameterised by Ω.
    pub fn natural(lambda0: f64, omega: f64) -> Result<Self> {
        Self::from_omega(lambda0, 1.0, 1.0, omega)
    }

    /// Coupling that produces damping γ at mass m₀: λ₀ = √(8π m₀ γ).
    pub fn lambda0_for_gamma(gamma: f64, m0: f64) -> f64 {
        (8.0 * PI * m0 * gamma).sqrt()
    }
}

/// Detector worldline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trajectory {
    /// Rindler hyperbola z = (a⁻¹ sinh aτ, a⁻¹ cosh aτ, 0, 0).
    UniformAcceleration { a: f64 },
    /// Inertial line z = (γ_L τ, γ_L v τ + x_a + d, 0, 0).
    Inertial { v: f64, x_a: f64, d: f64 },
}

/// A Minkowski event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { t, x1, x2, x3 }
    }
    /// Transverse distance ρ = √(x₂² + x₃²).
    pub fn rho(&self) -> f64 {
        self.x2.hypot(self.x3)
    }
    /// Null coordinate U = t − x₁.
    pub fn u(&self) -> f64 {
        self.t - self.x1
    }
    /// Null coordinate V = t + x₁.
    pub fn v(&self) -> f64 {
        self.t + self.x1
    }
}

/// Lorentz factor γ_L = 1/√(1 − v²).
pub fn lorentz_factor(v: f64) -> Result<f64> {
    if v.abs() < 1.0 {
        Ok(1.0 / (1.0 - v * v).sqrt())
    } else {
        Err(Error::Domain(format!("speed |v| = {} must be < 1", v.abs())))
    }
}

/// Position of the detector at proper time τ.
pub fn trajectory_position(traj: &Trajectory, tau: f64) -> Result<SpacetimePoint> {
    match *traj {
        Trajectory::UniformAcceleration { a } => {
            if !(a > 0.0) {
                return Err(Error::Domain(format!("acceleration a = {a} must be > 0")));
            }
            Ok(SpacetimePoint::new((a * tau).sinh() / a, (a * tau).cosh() / a, 0.0, 0.0))
        }
        Trajectory::Inertial { v, x_a, d } => {
            let gl = lorentz_factor(v)?;
            Ok(SpacetimePoint::new(gl * tau, gl * v * tau + x_a + d, 0.0, 0.0))
        }
    }
}

/// Proper velocity dz^μ/dτ (components t and x₁; the transverse ones vanish).
pub fn trajectory_velocity(traj: &Trajectory, tau: f64) -> Result<(f64, f64)> {
    match *traj {
        Trajectory::UniformAcceleration { a } => {
            if !(a > 0.0) {
                return Err(Error::Domain(format!("acceleration a = {a} must be > 0")));
            }
            Ok(((a * tau).cosh(), (a * tau).sinh()))
        }
        Trajectory::Inertial { v, .. } => {
            let gl = lorentz_factor(v)?;
            Ok((gl, gl * v))
        }
    }
}

/// Retarded quantities of a field point relative to the Rindler worldline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetardedKinematics {
    /// X = √((−UV + ρ² + a⁻²)² + 4a⁻²UV).
    pub x: f64,
    /// Retarded proper time τ₋ of the emission event on the worldline.
    pub tau_minus: f64,
}

/// Computes X and τ₋ for the uniformly accelerated worldline.
pub fn retarded_kinematics(p: &SpacetimePoint, a: f64) -> Result<RetardedKinematics> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("acceleration a = {a} must be > 0")));
    }
    let (u, v, rho) = (p.u(), p.v(), p.rho());
    if v == 0.0 {
        return Err(Error::UndefinedRetardedTime("V = t + x1 = 0".into()));
    }
    let inv_a2 = 1.0 / (a * a);
    let uv = u * v;
    let b = -uv + rho * rho + inv_a2;
    let x = (b * b + 4.0 * inv_a2 * uv).max(0.0).sqrt();
    let arg = a / (2.0 * v.abs()) * (x - uv + rho * rho + inv_a2);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::UndefinedRetardedTime(format!("log argument {arg} is not positive")));
    }
    Ok(RetardedKinematics { x, tau_minus: -arg.ln() / a })
}

/// Identifier of a validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationCode {
    /// λ₀ ≥ 1: outside the perturbative regime (soft).
    PerturbationViolated,
    /// a ≥ 1 (soft) or a ≤ 0 (hard).
    AccelerationOutOfRange,
    /// |v| ≥ 1 (hard).
    Superluminal,
    /// γ² ≥ Ω_r² (hard).
    OverDamped,
    /// A parameter that must be positive is not (hard).
    NonPositiveInput,
}

/// Whether a finding blocks evaluation or is only a warning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub severity: Severity,
    pub message: String,
    pub value: f64,
}

/// Outcome of [`validate_params`]; `ok` is true iff there are no violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// True when some finding is a hard error.
    pub fn has_errors(&self) -> bool {
        self.violations.iter().any(|v| v.severity == Severity::Error)
    }
}

/// Checks parameters and trajectory against the regime where the
/// perturbative results are meaningful. Never fails; always returns a report.
pub fn validate_params(params: &DetectorParams, traj: &Trajectory) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |code, severity, message: String, value| {
        out.push(Violation { code, severity, message, value });
    };
    for (name, value) in [
        ("lambda0", params.lambda0),
        ("m0", params.m0),
        ("hbar", params.hbar),
        ("omega_r", params.omega_r),
    ] {
        if !(value > 0.0) {
            push(
                ViolationCode::NonPositiveInput,
                Severity::Error,
                format!("{name} must be > 0"),
                value,
            );
        }
    }
    if params.lambda0 >= 1.0 {
        push(
            ViolationCode::PerturbationViolated,
            Severity::Warning,
            "coupling lambda0 >= 1: perturbative expansion not valid".into(),
            params.lambda0,
        );
    }
    if params.gamma * params.gamma >= params.omega_r * params.omega_r {
        push(
            ViolationCode::OverDamped,
            Severity::Error,
            "gamma^2 >= omega_r^2: oscillator is not under-damped".into(),
            params.gamma,
        );
    }
    match *traj {
        Trajectory::UniformAcceleration { a } => {
            if !(a > 0.0) {
                push(
                    ViolationCode::AccelerationOutOfRange,
                    Severity::Error,
                    "acceleration must be > 0".into(),
                    a,
                );
            } else if a >= 1.0 {
                push(
                    ViolationCode::AccelerationOutOfRange,
                    Severity::Warning,
                    "acceleration a >= 1 is outside the admissible range".into(),
                    a,
                );
            }
        }
        Trajectory::Inertial { v, .. } => {
            if !(v.abs() < 1.0) {
                push(
                    ViolationCode::Superluminal,
                    Severity::Error,
                    "speed |v| must be < 1".into(),
                    v,
                );
            }
        }
    }
    ValidationReport { ok: out.is_empty(), violations: out }
}
