//! Dialog act recognition with context features.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] parses Switchboard, LEGO and DialogBank-style transcripts into a
//!   uniform dialog/segment model and applies tag-set transformations.
//! * [`features`] normalizes segment text and turns segments plus their dialog
//!   history into sparse n-gram, indicator and context vectors.
//! * [`svm`] trains one-vs-rest linear SVMs with a dual coordinate descent solver.
//! * [`eval`] runs cross-validation, the Wilcoxon signed-rank test and the
//!   context influence / cascaded label experiments.
//! * [`cli`] wires all of the above behind the `dactx` binary.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
