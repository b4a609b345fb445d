//! The five run modes: eval, sweep, compare, figure and validate.

use rayon::prelude::*;

use udw_core::closed::{inertial_value, pp_inertial, pp_uad, qq_inertial, qq_uad};
use udw_core::model::{damping, validate_params, Severity, ValidationReport};
use udw_core::oracle::{inertial_oracle, uad_oracle, KappaRange};
use udw_core::{ClosedFormVariant, DetectorParams, Observable, PrefactorConvention, Trajectory};

use crate::config::{Command, EtaSpec, ObservableSpec, ParamsSpec, RunConfig, Spacing, TrajectoryKind, TrajectorySpec};
use crate::error::{core_exit_code, RunError, RunResult, EXIT_COMPARE_FAIL, EXIT_DOMAIN, EXIT_OK};
use crate::figures::{figure_curves, FigureId};
use crate::table::{format_sig, CompareSummary, PointError, Row, SweepTable};

/// Result of a run: the tables to emit and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tables: Vec<SweepTable>,
    /// Aggregate over all tables of a comparison.
    pub overall: Option<CompareSummary>,
    pub validation: Option<ValidationReport>,
    pub exit_code: i32,
}

impl Report {
    fn tables(tables: Vec<SweepTable>, exit_code: i32) -> Self {
        Self { tables, overall: None, validation: None, exit_code }
    }
}

/// η grid of the master comparison.
pub const MASTER_ETAS: [f64; 4] = [1.0, 5.0, 11.0, 30.0];
/// Accelerations of the master comparison.
pub const MASTER_ACCELERATIONS: [f64; 3] = [0.1, 0.01, 0.001];
/// Couplings of the master comparison.
pub const MASTER_COUPLINGS: [f64; 2] = [0.1, 0.3];
/// Frequencies of the master comparison.
pub const MASTER_FREQUENCIES: [f64; 2] = [1.0, 2.3];

/// Closed form (and, if requested, oracle) at one η.
pub fn evaluate_point(cfg: &RunConfig, p: &DetectorParams, traj: &Trajectory, eta: f64) -> udw_core::Result<Row> {
    let opts = cfg.correlator_options();
    let obs: Observable = cfg.observable.into();
    let row = match *traj {
        Trajectory::UniformAcceleration { a } => {
            let v = match obs {
                Observable::Qq => qq_uad(p, a, eta, &opts)?,
                Observable::Pp => pp_uad(p, a, eta, &opts)?,
            };
            let row = Row::closed(eta, v.v1, v.neg_v2, v.total);
            if cfg.oracle {
                let o = uad_oracle(p, obs, a, eta, &cfg.quadrature_config())?;
                row.with_oracle(o.v1, o.neg_v2, o.total)
            } else {
                row
            }
        }
        Trajectory::Inertial { .. } => {
            let value = match obs {
                Observable::Qq => qq_inertial(p, eta, &opts)?,
                Observable::Pp => pp_inertial(p, eta, &opts)?,
            };
            let v = inertial_value(eta, value);
            let row = Row::closed(eta, v.v1, v.neg_v2, v.total);
            if cfg.oracle {
                let o = inertial_oracle(p, obs, eta, KappaRange::Positive, &cfg.quadrature_config())?;
                row.with_oracle(0.0, o.value, o.value)
            } else {
                row
            }
        }
    };
    Ok(row)
}

fn convention_name(c: PrefactorConvention) -> &'static str {
    match c {
        PrefactorConvention::MainText => "maintext",
        PrefactorConvention::AppendixD => "appendixd",
    }
}

fn variant_name(v: ClosedFormVariant) -> &'static str {
    match v {
        ClosedFormVariant::Published => "published",
        ClosedFormVariant::Exact => "exact",
    }
}

/// Provenance metadata embedded in every table.
pub fn metadata(cfg: &RunConfig, p: &DetectorParams, traj: &Trajectory, report: &ValidationReport) -> std::collections::BTreeMap<String, String> {
    let mut m = std::collections::BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    put("udw_version", env!("CARGO_PKG_VERSION").to_string());
    put("command", serde_json::to_value(cfg.command).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default());
    match *traj {
        Trajectory::UniformAcceleration { a } => {
            put("trajectory", "uad".into());
            put("a", format_sig(a));
        }
        Trajectory::Inertial { v, x_a, d } => {
            put("trajectory", "inertial".into());
            put("v", format_sig(v));
            put("x_a", format_sig(x_a));
            put("d", format_sig(d));
        }
    }
    put("observable", match cfg.observable {
        ObservableSpec::Qq => "qq".into(),
        ObservableSpec::Pp => "pp".into(),
    });
    put("omega", format_sig(p.omega));
    put("omega_r", format_sig(p.omega_r));
    put("gamma", format_sig(p.gamma));
    put("lambda0", format_sig(p.lambda0));
    put("m0", format_sig(p.m0));
    put("hbar", format_sig(p.hbar));
    put("prefactor_convention", convention_name(cfg.prefactor_convention).into());
    put("closed_form_variant", variant_name(cfg.variant).into());
    put("renorm_offsets", "zero (all offsets omitted; UV tail subtracted above |kappa|=omega in the oracle)".into());
    put("oracle", cfg.oracle.to_string());
    if cfg.oracle {
        let q = cfg.quadrature_config();
        let a = match *traj {
            Trajectory::UniformAcceleration { a } => Some(a),
            Trajectory::Inertial { .. } => None,
        };
        put("quad_kappa_max", format_sig(q.resolved_kappa_max(p, a)));
        put("quad_abs_tol", format_sig(q.abs_tol));
        put("quad_rel_tol", format_sig(q.rel_tol));
        put("quad_max_subdivisions", q.max_subdivisions.to_string());
        put("quad_tail_model", serde_json::to_value(q.tail_model).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default());
        put("compare_abs_tol", format_sig(cfg.tolerance.abs_tol));
        put("compare_rel_tol", format_sig(cfg.tolerance.rel_tol));
    }
    let warnings: Vec<String> = report
        .violations
        .iter()
        .filter(|v| v.severity == Severity::Warning)
        .map(|v| format!("{:?}: {}", v.code, v.message))
        .collect();
    put("warnings", if warnings.is_empty() { "none".into() } else { warnings.join("; ") });
    m
}

fn checked_inputs(cfg: &RunConfig) -> RunResult<(DetectorParams, Trajectory, ValidationReport)> {
    let traj = cfg.trajectory()?;
    let p = cfg.detector_params()?;
    let report = validate_params(&p, &traj);
    if report.has_errors() {
        let msgs: Vec<String> = report
            .violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| v.message.clone())
            .collect();
        return Err(RunError::Validation(msgs.join("; ")));
    }
    Ok((p, traj, report))
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> RunResult<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Evaluates every η node of the configuration. Point failures are
/// collected in the errors section; rows stay in ascending η order.
pub fn build_table(cfg: &RunConfig) -> RunResult<SweepTable> {
    let (p, traj, report) = checked_inputs(cfg)?;
    let grid = cfg.eta.grid()?;
    let results: Vec<udw_core::Result<Row>> = with_pool(cfg.jobs()?, || {
        grid.par_iter().map(|&eta| evaluate_point(cfg, &p, &traj, eta)).collect()
    })?;
    let mut table = SweepTable { meta: metadata(cfg, &p, &traj, &report), ..SweepTable::default() };
    for (eta, r) in grid.iter().zip(results) {
        match r {
            Ok(row) => table.rows.push(row),
            Err(e) => table.errors.push(PointError { eta: *eta, exit_code: core_exit_code(&e), message: e.to_string() }),
        }
    }
    Ok(table)
}

/// One evaluation at `eta.point`; any failure is an error of the run.
pub fn run_eval(cfg: &RunConfig) -> RunResult<Report> {
    let eta = cfg
        .eta
        .point
        .ok_or_else(|| RunError::Config("eval needs a single --eta".into()))?;
    let (p, traj, report) = checked_inputs(cfg)?;
    let row = evaluate_point(cfg, &p, &traj, eta)?;
    let mut table = SweepTable { meta: metadata(cfg, &p, &traj, &report), ..SweepTable::default() };
    table.meta.insert("eta_grid".into(), format!("point {}", format_sig(eta)));
    table.rows.push(row);
    Ok(Report::tables(vec![table], EXIT_OK))
}

fn grid_description(eta: &EtaSpec) -> String {
    if let Some(p) = eta.point {
        return format!("point {}", format_sig(p));
    }
    if let Some(v) = &eta.values {
        let v: Vec<String> = v.iter().map(|x| format_sig(*x)).collect();
        return format!("list {}", v.join(" "));
    }
    let spacing = match eta.spacing {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
    };
    format!("{spacing} {}..{} count {}", format_sig(eta.start), format_sig(eta.stop), eta.count)
}

/// η sweep over the configured grid.
pub fn run_sweep(cfg: &RunConfig) -> RunResult<Report> {
    let mut table = build_table(cfg)?;
    table.meta.insert("eta_grid".into(), grid_description(&cfg.eta));
    let code = table.error_exit_code();
    Ok(Report::tables(vec![table], code))
}

/// The master grid: every (a, λ₀, Ω, observable) for the accelerated
/// detector, then every (λ₀, Ω, observable) for the inertial one, each at
/// η ∈ {1, 5, 11, 30}. Convention, variant, tolerances and jobs come from `base`.
pub fn master_grid(base: &RunConfig) -> Vec<RunConfig> {
    let mut out = Vec::new();
    let mk = |kind, a, lambda0, omega, obs| RunConfig {
        command: Command::Compare,
        trajectory: TrajectorySpec { kind, a, ..TrajectorySpec::default() },
        params: ParamsSpec { omega, lambda0, ..ParamsSpec::default() },
        observable: obs,
        eta: EtaSpec::list(MASTER_ETAS.to_vec()),
        oracle: true,
        ..base.clone()
    };
    for obs in [ObservableSpec::Qq, ObservableSpec::Pp] {
        for a in MASTER_ACCELERATIONS {
            for l in MASTER_COUPLINGS {
                for w in MASTER_FREQUENCIES {
                    out.push(mk(TrajectoryKind::Uad, Some(a), l, w, obs));
                }
            }
        }
    }
    for obs in [ObservableSpec::Qq, ObservableSpec::Pp] {
        for l in MASTER_COUPLINGS {
            for w in MASTER_FREQUENCIES {
                out.push(mk(TrajectoryKind::Inertial, None, l, w, obs));
            }
        }
    }
    out
}

fn aggregate(tables: &[SweepTable]) -> CompareSummary {
    let mut s = CompareSummary { max_abs_diff: 0.0, max_rel_diff: 0.0, points: 0, failed_points: 0, pass: true };
    for t in tables.iter().filter_map(|t| t.summary) {
        s.max_abs_diff = s.max_abs_diff.max(t.max_abs_diff);
        s.max_rel_diff = s.max_rel_diff.max(t.max_rel_diff);
        s.points += t.points;
        s.failed_points += t.failed_points;
    }
    s.pass = s.failed_points == 0;
    s
}

fn compare_exit_code(tables: &[SweepTable], overall: &CompareSummary) -> i32 {
    let err = tables.iter().map(SweepTable::error_exit_code).max().unwrap_or(0);
    if err != 0 {
        err
    } else if overall.pass {
        EXIT_OK
    } else {
        EXIT_COMPARE_FAIL
    }
}

/// Closed form vs oracle. Each row passes when total, v1 and neg_v2 are
/// all within max(abs_tol, rel_tol·|oracle|).
pub fn run_compare(cfg: &RunConfig) -> RunResult<Report> {
    let configs = if cfg.master_grid {
        master_grid(cfg)
    } else {
        vec![RunConfig { oracle: true, ..cfg.clone() }]
    };
    let mut tables = Vec::with_capacity(configs.len());
    for c in &configs {
        let mut t = build_table(c)?;
        t.meta.insert("eta_grid".into(), grid_description(&c.eta));
        t.summarize(&c.tolerance);
        tables.push(t);
    }
    let overall = aggregate(&tables);
    let code = compare_exit_code(&tables, &overall);
    Ok(Report { tables, overall: Some(overall), validation: None, exit_code: code })
}

/// One table per curve of the figure. Convention, variant, oracle,
/// quadrature, tolerances, node count and jobs are taken from `base`.
pub fn run_figure(id: FigureId, base: &RunConfig) -> RunResult<Report> {
    let mut tables = Vec::new();
    for c in figure_curves(id) {
        let cfg = RunConfig {
            command: Command::Figure,
            eta: EtaSpec { count: base.eta.count, ..c.config.eta.clone() },
            oracle: base.oracle,
            quadrature: base.quadrature,
            tolerance: base.tolerance,
            prefactor_convention: base.prefactor_convention,
            variant: base.variant,
            jobs: base.jobs,
            figure: Some(id),
            ..c.config
        };
        let mut t = build_table(&cfg)?;
        t.meta.insert("figure".into(), id.name().into());
        t.meta.insert("curve".into(), c.label.clone());
        t.meta.insert("eta_grid".into(), grid_description(&cfg.eta));
        if cfg.oracle {
            t.summarize(&cfg.tolerance);
        }
        tables.push(t);
    }
    let code = tables.iter().map(SweepTable::error_exit_code).max().unwrap_or(0);
    Ok(Report::tables(tables, code))
}

/// Validation report; exit status 0 iff there is no finding at all.
/// Parameters that cannot even be derived are still reported.
pub fn run_validate(cfg: &RunConfig) -> RunResult<Report> {
    let traj = cfg.trajectory()?;
    let p = raw_params(&cfg.params);
    let report = validate_params(&p, &traj);
    let code = if report.ok { EXIT_OK } else { EXIT_DOMAIN };
    Ok(Report { tables: Vec::new(), overall: None, validation: Some(report), exit_code: code })
}

/// Parameters without the derivation checks, so validation can report them.
fn raw_params(s: &ParamsSpec) -> DetectorParams {
    let gamma = damping(s.lambda0, s.m0);
    DetectorParams { lambda0: s.lambda0, m0: s.m0, hbar: s.hbar, omega_r: s.omega.hypot(gamma), gamma, omega: s.omega }
}

/// Dispatches on `cfg.command`.
pub fn run(cfg: &RunConfig) -> RunResult<Report> {
    match cfg.command {
        Command::Eval => run_eval(cfg),
        Command::Sweep => run_sweep(cfg),
        Command::Compare => run_compare(cfg),
        Command::Figure => {
            let id = cfg.figure.ok_or_else(|| RunError::Config("figure command needs a figure id".into()))?;
            run_figure(id, cfg)
        }
        Command::Validate => run_validate(cfg),
    }
}
