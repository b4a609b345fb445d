//! Parameter sets and η grids of the reference figures.
//!
//! Each figure is a list of curves; every curve is a complete sweep
//! configuration. Couplings quoted as damping constants are converted with
//! λ₀ = √(8π m₀ γ).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use udw_core::DetectorParams;

use crate::config::{EtaSpec, ObservableSpec, ParamsSpec, RunConfig, TrajectoryKind, TrajectorySpec};
use crate::error::RunError;

/// Identifier of a reference figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureId {
    #[serde(rename = "A_m")]
    AM,
    B,
    C,
    #[serde(rename = "A_PB")]
    APb,
    #[serde(rename = "B_PB")]
    BPb,
    #[serde(rename = "C_PB")]
    CPb,
    #[serde(rename = "impro")]
    Impro,
    VD,
    #[serde(rename = "VD_PB")]
    VdPb,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::AM,
        FigureId::B,
        FigureId::C,
        FigureId::APb,
        FigureId::BPb,
        FigureId::CPb,
        FigureId::Impro,
        FigureId::VD,
        FigureId::VdPb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::AM => "A_m",
            FigureId::B => "B",
            FigureId::C => "C",
            FigureId::APb => "A_PB",
            FigureId::BPb => "B_PB",
            FigureId::CPb => "C_PB",
            FigureId::Impro => "impro",
            FigureId::VD => "VD",
            FigureId::VdPb => "VD_PB",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| RunError::UnknownFigure(s.to_string()))
    }
}

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub config: RunConfig,
}

/// Default number of η nodes per curve.
pub const DEFAULT_NODES: usize = 200;

/// Damping values used to label curves, and their couplings at m₀ = 1.
pub const GAMMA_WEAK: f64 = 0.000398;
pub const GAMMA_STRONG: f64 = 0.00358;
/// Damping of the deliberately improper curve.
pub const GAMMA_IMPROPER: f64 = 0.1;

fn curve(label: String, kind: TrajectoryKind, a: Option<f64>, obs: ObservableSpec, lambda0: f64, omega: f64, stop: f64) -> Curve {
    Curve {
        label,
        config: RunConfig {
            trajectory: TrajectorySpec { kind, a, ..TrajectorySpec::default() },
            params: ParamsSpec { omega, lambda0, ..ParamsSpec::default() },
            observable: obs,
            eta: EtaSpec::log_range(1.0, stop, DEFAULT_NODES),
            ..RunConfig::default()
        },
    }
}

fn uad(label: String, obs: ObservableSpec, a: f64, lambda0: f64, omega: f64, stop: f64) -> Curve {
    curve(label, TrajectoryKind::Uad, Some(a), obs, lambda0, omega, stop)
}

/// The curves of a figure, in legend order.
pub fn figure_curves(id: FigureId) -> Vec<Curve> {
    use ObservableSpec::{Pp, Qq};
    match id {
        FigureId::AM => [0.1, 0.001]
            .into_iter()
            .map(|a| uad(format!("a={a}"), Qq, a, 0.3, 1.0, 5000.0))
            .collect(),
        FigureId::B => [0.1, 0.3]
            .into_iter()
            .map(|l| uad(format!("lambda0={l}"), Qq, 0.001, l, 1.0, 5000.0))
            .collect(),
        FigureId::C => [2.3, 1.0]
            .into_iter()
            .map(|w| uad(format!("omega={w}"), Qq, 0.001, 0.1, w, 5000.0))
            .collect(),
        FigureId::APb => [0.1, 0.001]
            .into_iter()
            .map(|a| uad(format!("a={a}"), Pp, a, 0.1, 1.0, 7000.0))
            .collect(),
        FigureId::BPb => [0.1, 0.3]
            .into_iter()
            .map(|l| uad(format!("lambda0={l}"), Pp, 0.1, l, 1.0, 8000.0))
            .collect(),
        // Two frequencies, the same pair as figure C.
        FigureId::CPb => [1.0, 2.3]
            .into_iter()
            .map(|w| uad(format!("omega={w}"), Pp, 0.1, 0.1, w, 5000.0))
            .collect(),
        FigureId::Impro => [GAMMA_IMPROPER, GAMMA_WEAK]
            .into_iter()
            .map(|g| uad(format!("gamma={g}"), Qq, 0.001, DetectorParams::lambda0_for_gamma(g, 1.0), 2.3, 5000.0))
            .collect(),
        FigureId::VD => vec![curve("inertial".into(), TrajectoryKind::Inertial, None, Qq, 0.1, 1.0, 5000.0)],
        FigureId::VdPb => vec![curve("inertial".into(), TrajectoryKind::Inertial, None, Pp, 0.1, 1.0, 5000.0)],
    }
}
