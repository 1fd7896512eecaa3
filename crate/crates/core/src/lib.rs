//! Computational hyperbolic geometry workbench.

// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod hyperboloid;
pub mod trig;
pub mod curve;
pub mod pleat;
pub mod lattice;
pub mod wallspace;
pub mod cli;

pub use error::{Error, Result};
