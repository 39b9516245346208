//! Numerical laboratory for surjective isometries, hermitian generators and
//! generalized bi-circular projections on vector-valued little Bloch spaces
//! `B0(D, E)` and `B*(D, E)` with `E = (C^d, l_p)`.

// Comparisons are written so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod disc;
pub mod error;
pub mod harness;
pub mod json;
pub mod operators;
pub mod range_space;
pub mod tolerances;

pub use error::{Error, Result};
