//! Run configuration: a JSON-serializable [`RunConfig`] that CLI flags
//! override field by field, plus the conversions into core types.

use serde::{Deserialize, Serialize};

use udw_core::{
    ClosedFormVariant, CorrelatorOptions, DetectorParams, Observable, PrefactorConvention, QuadratureConfig, TailModel,
    Trajectory,
};

use crate::error::{RunError, RunResult};
use crate::figures::FigureId;

/// Subcommand being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Eval,
    Sweep,
    Compare,
    Figure,
    Validate,
}

/// Detector worldline family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    #[default]
    Uad,
    Inertial,
}

/// Worldline and its parameters. `a` is required for `uad`; `v`, `x_a` and
/// `d` only enter validation (the equal-time correlators depend on proper
/// time alone).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TrajectorySpec {
    pub kind: TrajectoryKind,
    pub a: Option<f64>,
    pub v: f64,
    pub x_a: f64,
    pub d: f64,
}

/// Oscillator parameters, labelled by the oscillation frequency Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamsSpec {
    pub omega: f64,
    pub lambda0: f64,
    pub m0: f64,
    pub hbar: f64,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        Self { omega: 1.0, lambda0: 0.1, m0: 1.0, hbar: 1.0 }
    }
}

/// Grid spacing of an η range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

/// η selection: a single point, an explicit list, or a range.
/// Precedence: `point`, then `values`, then the range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EtaSpec {
    pub point: Option<f64>,
    pub values: Option<Vec<f64>>,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for EtaSpec {
    fn default() -> Self {
        Self { point: None, values: None, start: 1.0, stop: 5000.0, count: 200, spacing: Spacing::Log }
    }
}

impl EtaSpec {
    /// A single-point grid.
    pub fn single(eta: f64) -> Self {
        Self { point: Some(eta), ..Self::default() }
    }

    /// Explicit list of η values.
    pub fn list(values: Vec<f64>) -> Self {
        Self { values: Some(values), ..Self::default() }
    }

    /// Log-spaced range.
    pub fn log_range(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count, spacing: Spacing::Log, ..Self::default() }
    }

    /// The η nodes, ascending and de-duplicated.
    pub fn grid(&self) -> RunResult<Vec<f64>> {
        let mut nodes = if let Some(p) = self.point {
            vec![p]
        } else if let Some(v) = &self.values {
            if v.is_empty() {
                return Err(RunError::Config("eta value list is empty".into()));
            }
            v.clone()
        } else {
            range_nodes(self.start, self.stop, self.count, self.spacing)?
        };
        if nodes.iter().any(|x| x.is_nan()) {
            return Err(RunError::Config("eta values must not be NaN".into()));
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        Ok(nodes)
    }
}

/// Nodes of a linear or logarithmic range; endpoints are hit exactly.
pub fn range_nodes(start: f64, stop: f64, count: usize, spacing: Spacing) -> RunResult<Vec<f64>> {
    if !(start > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(RunError::Config(format!("eta range start must be > 0 and finite (got {start}..{stop})")));
    }
    if count < 1 {
        return Err(RunError::Config("eta range count must be >= 1".into()));
    }
    if stop < start {
        return Err(RunError::Config(format!("eta range stop {stop} is below start {start}")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let n = (count - 1) as f64;
    let nodes = (0..count).map(|i| {
        let t = i as f64 / n;
        if i == count - 1 {
            stop
        } else {
            match spacing {
                Spacing::Linear => start + (stop - start) * t,
                Spacing::Log => (start.ln() + (stop / start).ln() * t).exp(),
            }
        }
    });
    Ok(nodes.collect())
}

/// Overrides of the oracle's quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub kappa_max: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub tail_model: Option<TailModel>,
}

impl QuadratureSpec {
    pub fn resolve(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            kappa_max: self.kappa_max.or(d.kappa_max),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
            tail_model: self.tail_model.unwrap_or(d.tail_model),
        }
    }
}

/// Closed-form vs oracle acceptance: |closed − oracle| ≤ max(abs_tol, rel_tol·|oracle|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 2e-4, rel_tol: 1e-3 }
    }
}

impl Tolerance {
    pub fn allowed(&self, oracle: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * oracle.abs())
    }

    pub fn accepts(&self, closed: f64, oracle: f64) -> bool {
        (closed - oracle).abs() <= self.allowed(oracle)
    }
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to stdout.
    pub path: Option<String>,
}

/// Complete description of one run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: Command,
    pub trajectory: TrajectorySpec,
    pub params: ParamsSpec,
    pub observable: ObservableSpec,
    pub eta: EtaSpec,
    pub oracle: bool,
    pub quadrature: QuadratureSpec,
    pub tolerance: Tolerance,
    pub prefactor_convention: PrefactorConvention,
    pub variant: ClosedFormVariant,
    pub output: OutputSpec,
    /// Worker threads for sweeps; `None` uses all cores.
    pub jobs: Option<usize>,
    pub figure: Option<FigureId>,
    /// Run the built-in master comparison grid instead of a single table.
    pub master_grid: bool,
}

/// Serde-friendly wrapper of [`Observable`] (defaults to ⟨Q²⟩).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableSpec {
    #[default]
    Qq,
    Pp,
}

impl From<ObservableSpec> for Observable {
    fn from(o: ObservableSpec) -> Self {
        match o {
            ObservableSpec::Qq => Observable::Qq,
            ObservableSpec::Pp => Observable::Pp,
        }
    }
}

impl From<Observable> for ObservableSpec {
    fn from(o: Observable) -> Self {
        match o {
            Observable::Qq => ObservableSpec::Qq,
            Observable::Pp => ObservableSpec::Pp,
        }
    }
}

impl RunConfig {
    /// Parses a JSON config document.
    pub fn from_json(text: &str) -> RunResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn detector_params(&self) -> RunResult<DetectorParams> {
        let p = &self.params;
        Ok(DetectorParams::from_omega(p.lambda0, p.m0, p.hbar, p.omega)?)
    }

    pub fn trajectory(&self) -> RunResult<Trajectory> {
        let t = &self.trajectory;
        match t.kind {
            TrajectoryKind::Uad => match t.a {
                Some(a) => Ok(Trajectory::UniformAcceleration { a }),
                None => Err(RunError::Config("trajectory 'uad' needs an acceleration (--a)".into())),
            },
            TrajectoryKind::Inertial => Ok(Trajectory::Inertial { v: t.v, x_a: t.x_a, d: t.d }),
        }
    }

    /// Closed-form options: no renormalization offsets, chosen convention and variant.
    pub fn correlator_options(&self) -> CorrelatorOptions {
        CorrelatorOptions::default()
            .with_convention(self.prefactor_convention)
            .with_variant(self.variant)
    }

    pub fn quadrature_config(&self) -> QuadratureConfig {
        self.quadrature.resolve()
    }

    pub fn jobs(&self) -> RunResult<Option<usize>> {
        match self.jobs {
            Some(0) => Err(RunError::Config("--jobs must be >= 1".into())),
            j => Ok(j),
        }
    }
}
