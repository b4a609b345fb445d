//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of parameter derivation, special functions, closed forms
/// and the quadrature oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument hits a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// A series or continued fraction did not reach tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A physical input that must be strictly positive was not.
    #[error("non-positive input: {name} = {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    /// The oscillator is critically or over-damped (γ² ≥ Ω_r²).
    #[error("over-damped oscillator: gamma^2 = {gamma_sq} >= omega_r^2 = {omega_r_sq}")]
    OverDamped { gamma_sq: f64, omega_r_sq: f64 },

    /// The retarded proper time of a field point is not defined.
    #[error("retarded time undefined: {0}")]
    UndefinedRetardedTime(String),

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// A computation produced NaN or an infinity.
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN/∞ instead of letting them propagate.
pub(crate) fn finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Complex counterpart of [`finite`].
pub(crate) fn finite_c(z: num_complex::Complex64, what: &'static str) -> Result<num_complex::Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}
