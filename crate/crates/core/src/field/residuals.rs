//! Pointwise residuals of the free-boundary problem and the physical
//! velocity field.

use serde::Serialize;

use super::{check_point, Field, Point};
use crate::error::Result;

/// Step for difference quotients: the grid spacing, or `h_analytic` for
/// analytic fields, never more than a quarter of the distance to the axis.
fn step(field: &dyn Field, p: Point, h_analytic: f64) -> f64 {
    field.spacing().unwrap_or(h_analytic).min(0.25 * p.x1)
}

/// Residual value with an optional note about the evaluation point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub warning: Option<String>,
}

/// Central-difference approximation of `div(w grad u)` with the field's
/// weight `w` (`1/x1` for the axisymmetric equation).
pub fn pde_residual(field: &dyn Field, p: Point) -> Result<Residual> {
    check_point(field, p)?;
    let h = step(field, p, 1e-4);
    let c = field.coefficients();
    let flux = |q: Point| {
        let g = field.branch(q).1;
        let w = c.weight(q);
        [w * g[0], w * g[1]]
    };
    let e = flux(Point::new(p.x1 + h, p.x2))[0];
    let west = flux(Point::new(p.x1 - h, p.x2))[0];
    let n = flux(Point::new(p.x1, p.x2 + h))[1];
    let s = flux(Point::new(p.x1, p.x2 - h))[1];
    let value = (e - west + n - s) / (2.0 * h);
    let warning = (!field.is_positive(p))
        .then(|| format!("({}, {}) is not in the positivity set", p.x1, p.x2));
    Ok(Residual { value, warning })
}

/// `w^2 |grad u|^2 - w g` at a boundary point, which is `|grad u|^2/x1^2 - x2`
/// for the axisymmetric problem. The gradient is taken from the positive side.
pub fn fb_residual(field: &dyn Field, p: Point) -> Result<f64> {
    check_point(field, p)?;
    let c = field.coefficients();
    let g = field.branch(p).1;
    let w = c.weight(p);
    Ok(w * w * (g[0] * g[0] + g[1] * g[1]) - w * c.gravity(p))
}

/// Physical velocity at a point of three-space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Velocity {
    pub v: [f64; 3],
    pub warning: Option<String>,
}

/// Velocity `(-(1/x1) d2u cos t, -(1/x1) d2u sin t, (1/x1) d1u)` at
/// `(X, Y, Z)` with `x1 = sqrt(X^2 + Y^2)`, `t` the azimuth and `x2 = Z`.
/// Closer than `eps` to the axis the field is evaluated at `x1 = eps`
/// (one grid step, or `1e-6` for analytic fields).
pub fn velocity_at(field: &dyn Field, x: f64, y: f64, z: f64) -> Result<Velocity> {
    let eps = field.spacing().unwrap_or(1e-6);
    let mut x1 = x.hypot(y);
    let azimuth = if x1 > 0.0 { y.atan2(x) } else { 0.0 };
    let mut warning = None;
    if x1 < eps {
        warning = Some(format!(
            "distance {x1:e} to the axis is below {eps:e}; evaluated at x1 = {eps:e}"
        ));
        x1 = eps;
    }
    let p = Point::new(x1, z);
    check_point(field, p)?;
    let g = field.value_grad(p).1;
    let radial = -g[1] / x1;
    Ok(Velocity {
        v: [radial * azimuth.cos(), radial * azimuth.sin(), g[0] / x1],
        warning,
    })
}

/// Both sides of the Bernstein-type inequality, reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bernstein {
    /// Flat Laplacian of `|grad u|^2/x1 - x1 x2`.
    pub lhs: f64,
    /// `2 sum_ij (d_ij u)^2 / x1`.
    pub rhs: f64,
}

pub fn bernstein_residual(field: &dyn Field, p: Point) -> Result<Bernstein> {
    check_point(field, p)?;
    let h = step(field, p, 1e-3);
    let at = |d1: f64, d2: f64| Point::new(p.x1 + d1, p.x2 + d2);
    let q = |pt: Point| {
        let g = field.branch(pt).1;
        (g[0] * g[0] + g[1] * g[1]) / pt.x1 - pt.x1 * pt.x2
    };
    let lhs = (q(at(h, 0.0)) + q(at(-h, 0.0)) + q(at(0.0, h)) + q(at(0.0, -h)) - 4.0 * q(p))
        / (h * h);
    let g = |pt: Point| field.branch(pt).1;
    let (ge, gw, gn, gs) = (g(at(h, 0.0)), g(at(-h, 0.0)), g(at(0.0, h)), g(at(0.0, -h)));
    let d11 = (ge[0] - gw[0]) / (2.0 * h);
    let d22 = (gn[1] - gs[1]) / (2.0 * h);
    let d12 = 0.5 * ((gn[0] - gs[0]) + (ge[1] - gw[1])) / (2.0 * h);
    let rhs = 2.0 * (d11 * d11 + 2.0 * d12 * d12 + d22 * d22) / p.x1;
    Ok(Bernstein { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;

    type Branch = fn(Point) -> (f64, [f64; 2]);

    fn signed(f: Branch) -> FnField<Branch> {
        FnField::signed(f)
    }

    #[test]
    fn pde_examples() {
        let sq = signed(|p| (p.x1 * p.x1, [2.0 * p.x1, 0.0]));
        let r = pde_residual(&sq, Point::new(1.0, 1.0)).unwrap();
        assert!(r.value.abs() < 1e-9);
        assert!(r.warning.is_none());
        let quartic = signed(|p| {
            let (a, b) = (p.x1, p.x2);
            (a * a * b * b, [2.0 * a * b * b, 2.0 * a * a * b])
        });
        let r = pde_residual(&quartic, Point::new(1.0, 1.0)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn fb_flags_a_non_solution() {
        let f = FnField::new(|p: Point| {
            (p.x1 * p.x1 * p.x2, [2.0 * p.x1 * p.x2, p.x1 * p.x1])
        });
        assert!((fb_residual(&f, Point::new(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn velocity_examples() {
        let f = signed(|p| (p.x1 * p.x1 * p.x2, [2.0 * p.x1 * p.x2, p.x1 * p.x1]));
        let v = velocity_at(&f, 1.0, 0.0, 1.0).unwrap();
        assert!(v.warning.is_none());
        for (a, b) in v.v.iter().zip([-1.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = velocity_at(&f, 0.0, 1.0, 1.0).unwrap();
        for (a, b) in v.v.iter().zip([0.0, -1.0, 2.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = velocity_at(&f, 0.0, 0.0, 1.0).unwrap();
        assert!(v.warning.is_some());
    }

    #[test]
    fn bernstein_examples() {
        let sq = signed(|p| (p.x1 * p.x1, [2.0 * p.x1, 0.0]));
        let b = bernstein_residual(&sq, Point::new(1.0, 1.0)).unwrap();
        assert!(b.lhs.abs() < 1e-6, "{b:?}");
        assert!((b.rhs - 8.0).abs() < 1e-9);
        let cubic = signed(|p| (p.x1 * p.x1 * p.x2, [2.0 * p.x1 * p.x2, p.x1 * p.x1]));
        let b = bernstein_residual(&cubic, Point::new(1.0, 1.0)).unwrap();
        assert!((b.lhs - 14.0).abs() < 1e-5, "{b:?}");
        assert!((b.rhs - 24.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_axis_points() {
        let sq = signed(|p| (p.x1 * p.x1, [2.0 * p.x1, 0.0]));
        assert!(pde_residual(&sq, Point::new(0.0, 1.0)).is_err());
        assert!(fb_residual(&sq, Point::new(-1.0, 1.0)).is_err());
    }
}
