// SPDX-License-Identifier: Apache-2.0
//! Exact solvers for a-priori route evaluation with lateral transhipment
//! (ARELTP) and for lot sizing with requalification costs (LSwRC).
//!
//! The engine is an algebra of piecewise-linear value functions ([`pwl`]).
//! Three exact methods sit on top of it: a dynamic program without duration
//! limit, a duration-budgeted dynamic program, and a Lagrangian
//! branch-and-bound ([`bnb`]).

pub mod bnb;
pub mod dp;
pub mod error;
pub mod format;
pub mod instgen;
pub mod lagrangian;
pub mod lswrc;
pub mod metric;
pub mod mipexport;
pub mod model;
pub mod oracle;
pub mod pwl;
pub mod scalar;
pub mod solve;

pub use error::{Error, Result};
pub use model::{Instance, MetricFlags, Solution};
pub use scalar::{Rational, Scalar};
