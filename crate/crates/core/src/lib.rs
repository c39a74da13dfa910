//! Proximal operators, operator-splitting solvers, semismooth Newton methods and convergence
//! diagnostics for nonsmooth convex optimization in ℝⁿ.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases fix `f64`.

pub mod core;
pub mod diagnostics;
pub mod error;
pub mod newton;
pub mod nlpdps;
pub mod problems;
pub mod prox;
pub mod scalar;
pub mod splitting;

pub use crate::error::{Error, Result};
pub use crate::scalar::Scalar;

pub type Point64 = crate::core::Point<f64>;
pub type Matrix64 = crate::core::Matrix<f64>;
