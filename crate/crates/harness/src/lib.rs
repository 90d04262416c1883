//! Command-line experiments on top of `rexi_core`: approximation files,
//! stability maps, tunneling runs and method comparisons.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
