// Validation is written as `!(x > 0.0)` throughout so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cache;
pub mod cli;
pub mod config;
pub mod density;
pub mod error;
pub mod numerics;
pub mod output;
pub mod spectrum;
pub mod tf_energy;
pub mod tf_model;

pub use error::{Error, Result};
