//! Command-line front end for `pconf-core`: flat JSON records, CSV tables,
//! figure data, property suites and parallel sweeps.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
mod error;
pub mod figures;
pub mod record;
pub mod sweep;
pub mod verify;

pub use error::{Result, RunError};
