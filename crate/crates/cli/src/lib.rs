//! Command-line front end for `entropic-sums`: JSON inputs, CSV/JSON
//! reports, randomized sweeps, the adversarial grid and demo tables.

pub mod cli;
pub mod config;
pub mod demo;
pub mod eval;
pub mod input;
pub mod report;
pub mod sweep;

pub use cli::{run, Cli, Outcome};
pub use config::{KPolicy, RunConfig};
pub use report::{Format, ReportRow};
