//! Vacuum-fluctuation correlators ⟨Q²(η)⟩_v and ⟨Q̇²(η)⟩_v of an
//! Unruh–DeWitt harmonic detector coupled to a massless scalar field.
//!
//! Two independent routes are provided:
//!
//! * [`closed`] — closed-form expressions in terms of Γ(0,z), ψ(z), coth and
//!   the hypergeometric family F_y, for uniformly accelerated and inertial
//!   detectors, split into the thermal full-line piece (v1) and the
//!   negative-frequency half-line piece (−v2);
//! * [`oracle`] — adaptive Gauss–Kronrod quadrature of the underlying
//!   κ-integrals, used to validate the closed forms.
//!
//! [`appendix`] holds the unequal-time building blocks, [`mode`] the
//! oscillator mode functions and response kernels, [`model`] parameters and
//! worldlines, and [`special`] the complex special functions.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod appendix;
pub mod closed;
pub mod error;
pub mod mode;
pub mod model;
pub mod oracle;
pub mod special;

pub use closed::{ClosedFormVariant, Observable, CorrelatorOptions, CorrelatorValue, PrefactorConvention, RenormOffsets};
pub use error::{Error, Result};
pub use model::{DetectorParams, Trajectory};
pub use oracle::{OracleValue, QuadratureConfig, TailModel};
