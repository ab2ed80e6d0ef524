//! Batch front-end for `aqt-core`: JSON configs in, deterministic CSV and
//! JSON out.
//!
//! * [`simulate`] – analytic and atom-resolved amplitude time series
//! * [`protocol`] – control-gate runs with state dumps and entropies
//! * [`sweep`] – grid evaluation of a scalar metric
//! * [`verify`] – the built-in acceptance suite

pub mod config;
pub mod error;
pub mod output;
pub mod protocol;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use config::RunConfig;
pub use error::CliError;
