//! Localized nonlinear functional equations on sequence spaces.
//!
//! The crate covers the Jaffard algebra of localized matrices, the kernel and
//! quadrature layer, Van-Cittert / quasi-Newton solvers for monotone maps,
//! companded average sampling in spline spaces, and identification of
//! signals with finite rate of innovation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod companding;
pub mod error;
pub mod exec;
pub mod fri;
pub mod kernels;
pub mod solver;

pub use error::{Error, Result};

/// Dense real vector used throughout.
pub type Vector = nalgebra::DVector<f64>;
/// Dense real matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;
