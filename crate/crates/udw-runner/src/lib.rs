//! Command-line front end for the detector correlators: single
//! evaluations, η sweeps, closed-form vs quadrature comparisons, figure
//! data and parameter validation, with CSV or JSON output.
//!
//! The binary is a thin wrapper around [`cli::run_cli`]; everything it
//! does is reachable from this library.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod figures;
pub mod run;
pub mod table;

pub use config::RunConfig;
pub use error::{RunError, RunResult};
pub use figures::FigureId;
pub use run::{run, Report};
pub use table::SweepTable;
