//! Result tables and their CSV / JSON encodings.
//!
//! CSV layout of one table:
//!
//! ```text
//! # key=value            (metadata, one per line)
//! eta,v1,neg_v2,total[,oracle_total,abs_diff,rel_diff]
//! ...rows...
//! # error.<i>=eta=<η>;exit=<code>;message=<text>
//! # summary.<field>=<value>
//! ```
//!
//! Several tables in one document are separated by a blank line. Numbers
//! are written with 12 significant digits; parsing the output and writing
//! it again is byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Tolerance;
use crate::error::{RunError, RunResult};

/// Significant digits of every emitted number.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Decimal text of [`round_sig`]`(x)`; exponent notation only for very
/// small or very large magnitudes.
pub fn format_sig(x: f64) -> String {
    let r = round_sig(x);
    let m = r.abs();
    if r == 0.0 || (1e-6..1e15).contains(&m) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Oracle columns of a comparison row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleColumns {
    pub oracle_total: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// Oracle pieces, used for the piecewise check; not part of the schema.
    #[serde(skip)]
    pub oracle_v1: f64,
    #[serde(skip)]
    pub oracle_neg_v2: f64,
}

/// One η node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub eta: f64,
    pub v1: f64,
    pub neg_v2: f64,
    pub total: f64,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleColumns>,
}

impl Row {
    pub fn closed(eta: f64, v1: f64, neg_v2: f64, total: f64) -> Self {
        Self { eta, v1, neg_v2, total, oracle: None }
    }

    /// Attaches oracle pieces and the derived diff columns.
    pub fn with_oracle(mut self, oracle_v1: f64, oracle_neg_v2: f64, oracle_total: f64) -> Self {
        let abs_diff = (self.total - oracle_total).abs();
        self.oracle = Some(OracleColumns {
            oracle_total,
            abs_diff,
            rel_diff: abs_diff / oracle_total.abs().max(f64::MIN_POSITIVE),
            oracle_v1,
            oracle_neg_v2,
        });
        self
    }

    /// Whether total, v1 and neg_v2 each lie within tolerance of the oracle.
    pub fn within(&self, tol: &Tolerance) -> Option<bool> {
        self.oracle.map(|o| {
            tol.accepts(self.total, o.oracle_total)
                && tol.accepts(self.v1, o.oracle_v1)
                && tol.accepts(self.neg_v2, o.oracle_neg_v2)
        })
    }

    fn rounded(&self) -> Self {
        Self {
            eta: round_sig(self.eta),
            v1: round_sig(self.v1),
            neg_v2: round_sig(self.neg_v2),
            total: round_sig(self.total),
            oracle: self.oracle.map(|o| OracleColumns {
                oracle_total: round_sig(o.oracle_total),
                abs_diff: round_sig(o.abs_diff),
                rel_diff: round_sig(o.rel_diff),
                ..o
            }),
        }
    }
}

/// A point that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub eta: f64,
    pub exit_code: i32,
    pub message: String,
}

/// Outcome of a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub points: usize,
    pub failed_points: usize,
    pub pass: bool,
}

/// Rows ascending in η plus metadata, failures and an optional summary.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    #[serde(default)]
    pub errors: Vec<PointError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<CompareSummary>,
}

impl SweepTable {
    pub fn has_oracle(&self) -> bool {
        self.rows.iter().any(|r| r.oracle.is_some())
    }

    /// Builds the comparison summary; errors count as failures.
    pub fn summarize(&mut self, tol: &Tolerance) {
        let mut s = CompareSummary { max_abs_diff: 0.0, max_rel_diff: 0.0, points: self.rows.len(), failed_points: 0, pass: true };
        for r in &self.rows {
            if let Some(o) = r.oracle {
                s.max_abs_diff = s.max_abs_diff.max(o.abs_diff);
                s.max_rel_diff = s.max_rel_diff.max(o.rel_diff);
            }
            if r.within(tol) != Some(true) {
                s.failed_points += 1;
            }
        }
        s.failed_points += self.errors.len();
        s.points += self.errors.len();
        s.pass = s.failed_points == 0;
        self.summary = Some(s);
    }

    /// Worst exit code among the failed points (0 if none).
    pub fn error_exit_code(&self) -> i32 {
        self.errors.iter().map(|e| e.exit_code).max().unwrap_or(0)
    }

    fn column_names(&self) -> Vec<&'static str> {
        let mut cols = vec!["eta", "v1", "neg_v2", "total"];
        if self.has_oracle() {
            cols.extend(["oracle_total", "abs_diff", "rel_diff"]);
        }
        cols
    }

    /// CSV text of this table.
    pub fn to_csv(&self) -> RunResult<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={}\n", one_line(v)));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(self.column_names())?;
        let oracle = self.has_oracle();
        for r in &self.rows {
            let mut rec = vec![format_sig(r.eta), format_sig(r.v1), format_sig(r.neg_v2), format_sig(r.total)];
            if oracle {
                let o = r.oracle.ok_or_else(|| RunError::Config("mixed oracle/non-oracle rows".into()))?;
                rec.extend([format_sig(o.oracle_total), format_sig(o.abs_diff), format_sig(o.rel_diff)]);
            }
            w.write_record(&rec)?;
        }
        let body = w.into_inner().map_err(|e| RunError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| RunError::Config(e.to_string()))?);
        for (i, e) in self.errors.iter().enumerate() {
            out.push_str(&format!(
                "# error.{i}=eta={};exit={};message={}\n",
                format_sig(e.eta),
                e.exit_code,
                one_line(&e.message)
            ));
        }
        if let Some(s) = &self.summary {
            out.push_str(&format!("# summary.max_abs_diff={}\n", format_sig(s.max_abs_diff)));
            out.push_str(&format!("# summary.max_rel_diff={}\n", format_sig(s.max_rel_diff)));
            out.push_str(&format!("# summary.points={}\n", s.points));
            out.push_str(&format!("# summary.failed_points={}\n", s.failed_points));
            out.push_str(&format!("# summary.pass={}\n", s.pass));
        }
        Ok(out)
    }

    /// Copy with every number rounded as it is emitted.
    pub fn rounded(&self) -> Self {
        Self {
            meta: self.meta.clone(),
            rows: self.rows.iter().map(Row::rounded).collect(),
            errors: self
                .errors
                .iter()
                .map(|e| PointError { eta: round_sig(e.eta), ..e.clone() })
                .collect(),
            summary: self.summary.map(|s| CompareSummary {
                max_abs_diff: round_sig(s.max_abs_diff),
                max_rel_diff: round_sig(s.max_rel_diff),
                ..s
            }),
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// Serializes tables as CSV blocks separated by blank lines.
pub fn tables_to_csv(tables: &[SweepTable]) -> RunResult<String> {
    let blocks: RunResult<Vec<String>> = tables.iter().map(SweepTable::to_csv).collect();
    Ok(blocks?.join("\n"))
}

/// Serializes tables as JSON: a single object for one table, an array otherwise.
pub fn tables_to_json(tables: &[SweepTable]) -> RunResult<String> {
    let rounded: Vec<SweepTable> = tables.iter().map(SweepTable::rounded).collect();
    let text = if rounded.len() == 1 {
        serde_json::to_string_pretty(&rounded[0])?
    } else {
        serde_json::to_string_pretty(&rounded)?
    };
    Ok(text + "\n")
}

/// Parses CSV text produced by [`tables_to_csv`]. Oracle pieces are not
/// part of the schema and come back as NaN.
pub fn tables_from_csv(text: &str) -> RunResult<Vec<SweepTable>> {
    let mut tables = Vec::new();
    for block in text.split("\n\n").filter(|b| !b.trim().is_empty()) {
        tables.push(table_from_csv(block)?);
    }
    Ok(tables)
}

fn parse_f64(s: &str) -> RunResult<f64> {
    s.trim().parse().map_err(|_| RunError::Config(format!("not a number: '{s}'")))
}

fn table_from_csv(block: &str) -> RunResult<SweepTable> {
    let mut t = SweepTable::default();
    let mut summary = BTreeMap::new();
    let mut data = String::new();
    for line in block.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| RunError::Config(format!("malformed metadata line '{line}'")))?;
            if let Some(field) = k.strip_prefix("summary.") {
                summary.insert(field.to_string(), v.to_string());
            } else if k.starts_with("error.") {
                t.errors.push(parse_error_line(v)?);
            } else {
                t.meta.insert(k.to_string(), v.to_string());
            }
        } else {
            data.push_str(line);
            data.push('\n');
        }
    }
    let mut r = csv::ReaderBuilder::new().from_reader(data.as_bytes());
    let headers = r.headers()?.clone();
    let oracle = headers.len() == 7;
    for rec in r.records() {
        let rec = rec?;
        let f: RunResult<Vec<f64>> = rec.iter().map(parse_f64).collect();
        let f = f?;
        let mut row = Row::closed(f[0], f[1], f[2], f[3]);
        if oracle {
            row.oracle = Some(OracleColumns {
                oracle_total: f[4],
                abs_diff: f[5],
                rel_diff: f[6],
                oracle_v1: f64::NAN,
                oracle_neg_v2: f64::NAN,
            });
        }
        t.rows.push(row);
    }
    if !summary.is_empty() {
        let get = |k: &str| summary.get(k).cloned().ok_or_else(|| RunError::Config(format!("summary.{k} missing")));
        let int = |k: &str| -> RunResult<usize> { get(k)?.parse().map_err(|_| RunError::Config(format!("summary.{k}"))) };
        t.summary = Some(CompareSummary {
            max_abs_diff: parse_f64(&get("max_abs_diff")?)?,
            max_rel_diff: parse_f64(&get("max_rel_diff")?)?,
            points: int("points")?,
            failed_points: int("failed_points")?,
            pass: get("pass")? == "true",
        });
    }
    Ok(t)
}

fn parse_error_line(v: &str) -> RunResult<PointError> {
    let bad = || RunError::Config(format!("malformed error line '{v}'"));
    let mut parts = v.splitn(3, ';');
    let eta = parts.next().and_then(|s| s.strip_prefix("eta=")).ok_or_else(bad)?;
    let exit = parts.next().and_then(|s| s.strip_prefix("exit=")).ok_or_else(bad)?;
    let message = parts.next().and_then(|s| s.strip_prefix("message=")).ok_or_else(bad)?;
    Ok(PointError { eta: parse_f64(eta)?, exit_code: exit.parse().map_err(|_| bad())?, message: message.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(oracle: bool) -> SweepTable {
        let mut t = SweepTable::default();
        t.meta.insert("omega".into(), "1".into());
        t.meta.insert("observable".into(), "qq".into());
        for (i, eta) in [1.0, 5.0, 30.0].into_iter().enumerate() {
            let mut r = Row::closed(eta, 0.1 * (i as f64 + 1.0) / 3.0, 1.0 / 7.0, 0.0);
            r.total = r.v1 + r.neg_v2;
            if oracle {
                r = r.with_oracle(r.v1, r.neg_v2, r.total * (1.0 + 1e-5));
            }
            t.rows.push(r);
        }
        t.errors.push(PointError { eta: 50.0, exit_code: 2, message: "quadrature failure: budget".into() });
        t
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(1.24589), "1.24589");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(2.5e-9), "2.5e-9");
        assert_eq!(format_sig(-12345.678901234567), "-12345.6789012");
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        for oracle in [false, true] {
            let mut t = sample(oracle);
            if oracle {
                t.summarize(&Tolerance::default());
            }
            let text = tables_to_csv(&[t.clone(), t.clone()]).unwrap();
            let back = tables_from_csv(&text).unwrap();
            assert_eq!(back.len(), 2);
            assert_eq!(tables_to_csv(&back).unwrap(), text);
            assert_eq!(back[0].meta, t.meta);
            assert_eq!(back[0].errors, t.errors);
            for (a, b) in back[0].rows.iter().zip(&t.rows) {
                assert_eq!(a.eta.to_bits(), round_sig(b.eta).to_bits());
                assert_eq!(a.total.to_bits(), round_sig(b.total).to_bits());
            }
        }
    }

    #[test]
    fn json_uses_csv_field_names() {
        let t = sample(true);
        let v: serde_json::Value = serde_json::from_str(&tables_to_json(&[t]).unwrap()).unwrap();
        let row = &v["rows"][0];
        for k in ["eta", "v1", "neg_v2", "total", "oracle_total", "abs_diff", "rel_diff"] {
            assert!(row.get(k).is_some(), "missing {k}");
        }
        assert!(row.get("oracle_v1").is_none());
        let plain: serde_json::Value = serde_json::from_str(&tables_to_json(&[sample(false)]).unwrap()).unwrap();
        assert!(plain["rows"][0].get("oracle_total").is_none());
    }

    #[test]
    fn summary_counts_errors_as_failures() {
        let mut t = sample(true);
        t.summarize(&Tolerance::default());
        let s = t.summary.unwrap();
        assert_eq!(s.points, 4);
        assert_eq!(s.failed_points, 1);
        assert!(!s.pass);
        assert_eq!(t.error_exit_code(), 2);
    }
}
