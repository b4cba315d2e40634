//! Blow-up diagnostics for steady axisymmetric flows with a free surface.
//!
//! The stream function `u(x1, x2)` lives on the half-plane `x1 > 0`, where
//! `x1` is the distance to the symmetry axis and `x2` the vertical
//! coordinate. Polar angles are measured from the positive `x2` direction,
//! so `x1 = rho sin(theta)` and `x2 = rho cos(theta)`.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod field;
pub mod functionals;
pub mod profiles;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Coefficients, Field, GridField, Point, Rect};
