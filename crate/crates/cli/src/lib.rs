//! Scenario runner for the time-dependent Jaynes-Cummings model: JSON
//! scenario documents in, CSV tables and SVG charts out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod emit;
pub mod error;
pub mod run;
pub mod scenario;

pub use emit::{to_csv, to_svg, Selection};
pub use error::{CliError, Result};
pub use run::{compare, run, Table};
pub use scenario::{parse_scenario, Scenario};
