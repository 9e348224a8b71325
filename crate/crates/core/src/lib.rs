//! Maximum-volume selection of polynomial bases for Lagrange interpolation on
//! arbitrary node sets, with Lebesgue constant estimates and bounds.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod error;
pub mod experiments;
pub mod interpolant;
pub mod io;
pub mod lebesgue;
pub mod linalg;
pub mod prng;
pub mod selection;
pub mod sparse_grid;
pub mod vandermonde;

pub use error::{Error, Result};
