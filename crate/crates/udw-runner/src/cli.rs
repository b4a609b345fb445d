//! Argument parsing and output rendering. Flags override values from
//! `--config FILE`, which override the built-in defaults.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};

use udw_core::{ClosedFormVariant, PrefactorConvention};

use crate::config::{Command, Format, ObservableSpec, RunConfig, Spacing, TrajectoryKind};
use crate::error::{RunError, RunResult, EXIT_DOMAIN};
use crate::figures::FigureId;
use crate::run::{run, Report};
use crate::table::{format_sig, tables_to_csv, tables_to_json};

#[derive(Debug, Parser)]
#[command(name = "udw", version, about = "Vacuum-fluctuation correlators of an Unruh-DeWitt harmonic detector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Evaluate one η.
    Eval,
    /// Evaluate an η grid.
    Sweep,
    /// Compare closed forms against the quadrature oracle.
    Compare {
        /// Run the built-in grid over a, λ₀, Ω, observable and trajectory.
        #[arg(long)]
        master_grid: bool,
    },
    /// Emit the data of a reference figure, one table per curve.
    Figure {
        /// A_m, B, C, A_PB, B_PB, C_PB, impro, VD or VD_PB.
        id: String,
    },
    /// Check parameters against the admissible regime.
    Validate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TrajArg {
    Uad,
    Inertial,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObservableArg {
    Qq,
    Pp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PrefactorArg {
    Maintext,
    Appendixd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Published,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct Opts {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub traj: Option<TrajArg>,
    /// Proper acceleration (uad).
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Velocity (inertial; validation only).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Oscillation frequency Ω.
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub lambda0: Option<f64>,
    #[arg(long, global = true)]
    pub m0: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub observable: Option<ObservableArg>,
    /// Single η (eval), or a one-point grid.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, global = true)]
    pub eta_start: Option<f64>,
    #[arg(long, global = true)]
    pub eta_stop: Option<f64>,
    #[arg(long, global = true)]
    pub eta_count: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub eta_spacing: Option<SpacingArg>,
    /// Add oracle_total, abs_diff and rel_diff columns.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[arg(long, global = true, value_enum)]
    pub prefactor: Option<PrefactorArg>,
    /// Expression used for the half-line pieces.
    #[arg(long, global = true, value_enum)]
    pub variant: Option<VariantArg>,
    /// κ cut-off of the oracle.
    #[arg(long, global = true)]
    pub kappa_max: Option<f64>,
    /// Relative comparison tolerance (the absolute floor comes from the config).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Builds the run configuration: defaults, then the config file, then flags.
pub fn build_config(cli: &Cli) -> RunResult<RunConfig> {
    let o = &cli.opts;
    let mut c = match &o.config {
        Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Sub::Eval => c.command = Command::Eval,
        Sub::Sweep => c.command = Command::Sweep,
        Sub::Compare { master_grid } => {
            c.command = Command::Compare;
            c.master_grid |= *master_grid;
        }
        Sub::Figure { id } => {
            c.command = Command::Figure;
            c.figure = Some(id.parse::<FigureId>()?);
        }
        Sub::Validate => c.command = Command::Validate,
    }
    if let Some(t) = o.traj {
        c.trajectory.kind = match t {
            TrajArg::Uad => TrajectoryKind::Uad,
            TrajArg::Inertial => TrajectoryKind::Inertial,
        };
    }
    if o.a.is_some() {
        c.trajectory.a = o.a;
    }
    if let Some(v) = o.v {
        c.trajectory.v = v;
    }
    let p = &mut c.params;
    for (dst, src) in [(&mut p.omega, o.omega), (&mut p.lambda0, o.lambda0), (&mut p.m0, o.m0), (&mut p.hbar, o.hbar)] {
        if let Some(v) = src {
            *dst = v;
        }
    }
    if let Some(obs) = o.observable {
        c.observable = match obs {
            ObservableArg::Qq => ObservableSpec::Qq,
            ObservableArg::Pp => ObservableSpec::Pp,
        };
    }
    let range_flag = o.eta_start.is_some() || o.eta_stop.is_some() || o.eta_count.is_some() || o.eta_spacing.is_some();
    if range_flag {
        c.eta.point = None;
        c.eta.values = None;
    }
    if o.eta.is_some() {
        c.eta.point = o.eta;
    }
    if let Some(v) = o.eta_start {
        c.eta.start = v;
    }
    if let Some(v) = o.eta_stop {
        c.eta.stop = v;
    }
    if let Some(v) = o.eta_count {
        c.eta.count = v;
    }
    if let Some(s) = o.eta_spacing {
        c.eta.spacing = match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        };
    }
    c.oracle |= o.oracle;
    if let Some(pf) = o.prefactor {
        c.prefactor_convention = match pf {
            PrefactorArg::Maintext => PrefactorConvention::MainText,
            PrefactorArg::Appendixd => PrefactorConvention::AppendixD,
        };
    }
    if let Some(v) = o.variant {
        c.variant = match v {
            VariantArg::Published => ClosedFormVariant::Published,
            VariantArg::Exact => ClosedFormVariant::Exact,
        };
    }
    if o.kappa_max.is_some() {
        c.quadrature.kappa_max = o.kappa_max;
    }
    if let Some(t) = o.tol {
        if !(t > 0.0) {
            return Err(RunError::Config(format!("--tol must be positive (got {t})")));
        }
        c.tolerance.rel_tol = t;
    }
    if let Some(f) = o.format {
        c.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if o.output.is_some() {
        c.output.path = o.output.clone();
    }
    if o.jobs.is_some() {
        c.jobs = o.jobs;
    }
    Ok(c)
}

/// Text of a report in the requested format.
pub fn render(report: &Report, format: Format) -> RunResult<String> {
    if let Some(v) = &report.validation {
        return match format {
            Format::Json => Ok(serde_json::to_string_pretty(v)? + "\n"),
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
                w.write_record(["code", "severity", "value", "message"])?;
                for x in &v.violations {
                    let sev = if x.severity == udw_core::model::Severity::Error { "error" } else { "warning" };
                    w.write_record([format!("{:?}", x.code), sev.into(), format_sig(x.value), x.message.clone()])?;
                }
                let body = w.into_inner().map_err(|e| RunError::Io(e.into_error()))?;
                Ok(format!("# ok={}\n{}", v.ok, String::from_utf8_lossy(&body)))
            }
        };
    }
    match format {
        Format::Csv => tables_to_csv(&report.tables),
        Format::Json => tables_to_json(&report.tables),
    }
}

fn summary_line(report: &Report) -> String {
    match &report.overall {
        Some(s) => format!(
            "compare: {} ({} of {} points outside tolerance; max abs diff {}, max rel diff {})\n",
            if s.pass { "pass" } else { "FAIL" },
            s.failed_points,
            s.points,
            format_sig(s.max_abs_diff),
            format_sig(s.max_rel_diff)
        ),
        None => String::new(),
    }
}

fn execute(cli: &Cli) -> RunResult<CliOutput> {
    let cfg = build_config(cli)?;
    let report = run(&cfg)?;
    let text = render(&report, cfg.output.format)?;
    let mut stderr = summary_line(&report);
    for t in &report.tables {
        for e in &t.errors {
            stderr.push_str(&format!("error at eta={}: {}\n", format_sig(e.eta), e.message));
        }
    }
    let stdout = match &cfg.output.path {
        Some(path) => {
            std::fs::write(path, &text)?;
            String::new()
        }
        None => text,
    };
    Ok(CliOutput { exit_code: report.exit_code, stdout, stderr })
}

/// Parses `args` (including the program name) and runs the command,
/// capturing output instead of printing it.
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { 0 };
            return CliOutput { exit_code: code, stdout: String::new(), stderr: e.render().to_string() };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => CliOutput { exit_code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        build_config(&Cli::try_parse_from(args).unwrap()).unwrap()
    }

    #[test]
    fn flags_fill_config() {
        let c = parse(&["udw", "eval", "--traj", "uad", "--a", "0.1", "--omega", "2.3", "--lambda0", "0.3", "--eta", "30", "--observable", "pp"]);
        assert_eq!(c.command, Command::Eval);
        assert_eq!(c.trajectory.a, Some(0.1));
        assert_eq!(c.params.omega, 2.3);
        assert_eq!(c.params.lambda0, 0.3);
        assert_eq!(c.eta.point, Some(30.0));
        assert_eq!(c.observable, ObservableSpec::Pp);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"trajectory": {"kind": "uad", "a": 0.01}, "params": {"omega": 2.3, "lambda0": 0.3}, "prefactor_convention": "appendix_d"}"#).unwrap();
        let p = path.to_str().unwrap();
        let c = parse(&["udw", "sweep", "--config", p, "--omega", "1.0"]);
        assert_eq!(c.params.omega, 1.0);
        assert_eq!(c.params.lambda0, 0.3);
        assert_eq!(c.trajectory.a, Some(0.01));
        assert_eq!(c.prefactor_convention, PrefactorConvention::AppendixD);
        let c = parse(&["udw", "sweep", "--config", p, "--prefactor", "maintext"]);
        assert_eq!(c.prefactor_convention, PrefactorConvention::MainText);
    }

    #[test]
    fn range_flags_clear_point() {
        let c = parse(&["udw", "sweep", "--eta", "5", "--eta-count", "3"]);
        assert_eq!(c.eta.point, Some(5.0));
        let c = parse(&["udw", "sweep", "--eta-start", "2", "--eta-stop", "20", "--eta-count", "3", "--eta-spacing", "linear"]);
        assert_eq!(c.eta.grid().unwrap(), vec![2.0, 11.0, 20.0]);
    }

    #[test]
    fn unknown_figure_exit_code() {
        let out = run_cli(["udw", "figure", "Z"]);
        assert_eq!(out.exit_code, EXIT_DOMAIN);
        assert!(out.stderr.contains("unknown figure"));
    }
}
