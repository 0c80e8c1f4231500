//! Wavelet block-thresholding estimators in the Gaussian sequence model, with
//! a shrinking-neighborhood risk engine.

// Negated comparisons reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod model;
pub mod risk;
pub mod wavelet;

pub use error::{Error, Result};
