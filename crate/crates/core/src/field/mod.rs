//! Stream-function fields: the evaluation interface, grid-sampled fields,
//! residuals of the free-boundary problem, velocity reconstruction and
//! free-boundary extraction.

mod contour;
mod grid;
mod io;
mod residuals;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use contour::{extract_free_boundary, free_boundary_components, FreeBoundaryCurve};
pub use grid::GridField;
pub use io::{read_axifield, write_axifield};
pub use residuals::{
    bernstein_residual, fb_residual, pde_residual, velocity_at, Bernstein, Residual, Velocity,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x1: 0.0, x2: 0.0 };

    pub const fn new(x1: f64, x2: f64) -> Self {
        Point { x1, x2 }
    }

    /// Point at distance `rho` and angle `theta` (from the positive `x2`
    /// direction) from `self`.
    pub fn polar(self, rho: f64, theta: f64) -> Self {
        Point::new(self.x1 + rho * theta.sin(), self.x2 + rho * theta.cos())
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }
}

/// Closed rectangle `[x1_min, x1_max] x [x2_min, x2_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
}

impl Rect {
    pub fn new(x1_min: f64, x1_max: f64, x2_min: f64, x2_max: f64) -> Self {
        Rect {
            x1_min,
            x1_max,
            x2_min,
            x2_max,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let tol = 1e-12 * (self.x1_max - self.x1_min).max(self.x2_max - self.x2_min);
        p.x1 >= self.x1_min - tol
            && p.x1 <= self.x1_max + tol
            && p.x2 >= self.x2_min - tol
            && p.x2 <= self.x2_max + tol
    }

    /// Whether the part of the disc `B_r(c)` with `x1 >= 0` lies inside.
    pub fn contains_half_disc(&self, c: Point, r: f64) -> bool {
        let lo = (c.x1 - r).max(0.0);
        self.contains(Point::new(lo, c.x2 - r)) && self.contains(Point::new(c.x1 + r, c.x2 + r))
    }
}

/// Coefficients of the weighted problem a field is meant to solve.
///
/// `Axial` is the equation itself: weight `1/x1` in the energy and in the
/// boundary integral, gravity term `x1 x2`. Blow-up limits at points off the
/// axis solve the same problem with the weight frozen at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coefficients {
    Axial,
    /// Weight `1/x1_0`; gravity term `x1_0 * x2`, or `x1_0 * x2_0` when the
    /// height is frozen too.
    Frozen { x1: f64, x2: Option<f64> },
}

impl Coefficients {
    /// Weight multiplying `|grad u|^2` and `u^2`.
    #[inline]
    pub fn weight(&self, p: Point) -> f64 {
        match *self {
            Coefficients::Axial => 1.0 / p.x1,
            Coefficients::Frozen { x1, .. } => 1.0 / x1,
        }
    }

    /// Gravity term multiplying the indicator of the positivity set.
    #[inline]
    pub fn gravity(&self, p: Point) -> f64 {
        match *self {
            Coefficients::Axial => p.x1 * p.x2,
            Coefficients::Frozen { x1, x2 } => x1 * x2.unwrap_or(p.x2),
        }
    }

    pub fn is_frozen(&self) -> bool {
        matches!(self, Coefficients::Frozen { .. })
    }
}

/// A stream function on the half-plane `x1 >= 0`.
pub trait Field: Send + Sync {
    /// Value and gradient of the smooth branch that agrees with the field on
    /// its positivity set. Used for one-sided evaluation on the boundary.
    fn branch(&self, p: Point) -> (f64, [f64; 2]);

    /// Exact (analytic) or interpolated (grid) membership in `{u > 0}`.
    fn is_positive(&self, p: Point) -> bool;

    /// Value and gradient of the field itself.
    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        if self.is_positive(p) {
            self.branch(p)
        } else {
            (0.0, [0.0, 0.0])
        }
    }

    fn coefficients(&self) -> Coefficients {
        Coefficients::Axial
    }

    /// Sampled window, if the field is only known on a rectangle.
    fn domain(&self) -> Option<Rect> {
        None
    }

    /// Grid spacing for sampled fields.
    fn spacing(&self) -> Option<f64> {
        None
    }

    fn as_grid(&self) -> Option<&GridField> {
        None
    }
}

impl<F: Field + ?Sized> Field for Arc<F> {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        (**self).branch(p)
    }
    fn is_positive(&self, p: Point) -> bool {
        (**self).is_positive(p)
    }
    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        (**self).value_grad(p)
    }
    fn coefficients(&self) -> Coefficients {
        (**self).coefficients()
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
    fn spacing(&self) -> Option<f64> {
        (**self).spacing()
    }
    fn as_grid(&self) -> Option<&GridField> {
        (**self).as_grid()
    }
}

impl<F: Field + ?Sized> Field for Box<F> {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        (**self).branch(p)
    }
    fn is_positive(&self, p: Point) -> bool {
        (**self).is_positive(p)
    }
    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        (**self).value_grad(p)
    }
    fn coefficients(&self) -> Coefficients {
        (**self).coefficients()
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
    fn spacing(&self) -> Option<f64> {
        (**self).spacing()
    }
    fn as_grid(&self) -> Option<&GridField> {
        (**self).as_grid()
    }
}

/// Field given by a closure for the smooth branch. The positivity set is
/// where the branch is positive; the field is zero elsewhere unless built
/// with [`FnField::signed`].
pub struct FnField<F> {
    f: F,
    signed: bool,
    coefficients: Coefficients,
}

impl<F> FnField<F>
where
    F: Fn(Point) -> (f64, [f64; 2]) + Send + Sync,
{
    pub fn new(f: F) -> Self {
        FnField {
            f,
            signed: false,
            coefficients: Coefficients::Axial,
        }
    }

    /// Keeps negative values instead of cutting them off.
    pub fn signed(f: F) -> Self {
        FnField {
            f,
            signed: true,
            coefficients: Coefficients::Axial,
        }
    }

    pub fn with_coefficients(mut self, c: Coefficients) -> Self {
        self.coefficients = c;
        self
    }
}

impl<F> Field for FnField<F>
where
    F: Fn(Point) -> (f64, [f64; 2]) + Send + Sync,
{
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        (self.f)(p)
    }
    fn is_positive(&self, p: Point) -> bool {
        (self.f)(p).0 > 0.0
    }
    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        let (u, g) = (self.f)(p);
        if self.signed || u > 0.0 {
            (u, g)
        } else {
            (0.0, [0.0, 0.0])
        }
    }
    fn coefficients(&self) -> Coefficients {
        self.coefficients
    }
}

/// Value and gradient at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub u: f64,
    pub grad: [f64; 2],
}

fn check_point(field: &dyn Field, p: Point) -> Result<()> {
    let inside = p.x1.is_finite()
        && p.x2.is_finite()
        && p.x1 > 0.0
        && field.domain().is_none_or(|d| d.contains(p));
    if inside {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x1: p.x1, x2: p.x2 })
    }
}

/// Checked evaluation at a point with `x1 > 0` inside the field's domain.
pub fn eval_and_grad(field: &dyn Field, p: Point) -> Result<Sample> {
    check_point(field, p)?;
    let (u, grad) = field.value_grad(p);
    Ok(Sample { u, grad })
}
