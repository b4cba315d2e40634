//! Exact homogeneous blow-up profiles and a name registry for them.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_3, PI, SQRT_2};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Coefficients, Field, Point, Rect};
use crate::specfun::{self, legendre_p, RootResult};

/// Tolerance deciding whether a coordinate of a centre vanishes.
pub const AXIS_TOL: f64 = 1e-9;

/// The four blow-up regimes, fixed by which coordinates of the centre vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlowupCase {
    /// `x1 > 0`, `x2 != 0`.
    Interior,
    /// `x1 > 0`, `x2 = 0`.
    Horizontal,
    /// `x1 = 0`, `x2 != 0`.
    Axis,
    /// `x1 = x2 = 0`.
    Origin,
}

impl BlowupCase {
    pub fn of(x0: Point) -> Self {
        Self::with_tolerance(x0, AXIS_TOL)
    }

    pub fn with_tolerance(x0: Point, tol: f64) -> Self {
        match (x0.x1.abs() < tol, x0.x2.abs() < tol) {
            (false, false) => BlowupCase::Interior,
            (false, true) => BlowupCase::Horizontal,
            (true, false) => BlowupCase::Axis,
            (true, true) => BlowupCase::Origin,
        }
    }

    /// Scaling exponent `kappa` of `u(x0 + r x) / r^kappa`.
    pub fn kappa(self) -> f64 {
        match self {
            BlowupCase::Interior => 1.0,
            BlowupCase::Horizontal => 1.5,
            BlowupCase::Axis => 2.0,
            BlowupCase::Origin => 2.5,
        }
    }

    /// `(a, b)` in `M(r) = r^-a I(r) - b r^(-a-1) J(r)`.
    pub fn monotonicity_exponents(self) -> (f64, f64) {
        match self {
            BlowupCase::Interior => (2.0, 1.0),
            BlowupCase::Horizontal => (3.0, 1.5),
            BlowupCase::Axis => (3.0, 2.0),
            BlowupCase::Origin => (4.0, 2.5),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlowupCase::Interior => "interior",
            BlowupCase::Horizontal => "horizontal",
            BlowupCase::Axis => "axis",
            BlowupCase::Origin => "origin",
        }
    }
}

impl std::fmt::Display for BlowupCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BlowupCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(BlowupCase::Interior),
            "horizontal" => Ok(BlowupCase::Horizontal),
            "axis" => Ok(BlowupCase::Axis),
            "origin" => Ok(BlowupCase::Origin),
            _ => Err(Error::InvalidArgument(format!("unknown case '{s}'"))),
        }
    }
}

/// Polar coordinates of `p - c` with the angle taken from the `x2` direction.
#[inline]
fn polar(p: Point, c: Point) -> (f64, f64) {
    let (d1, d2) = (p.x1 - c.x1, p.x2 - c.x2);
    (d1.hypot(d2), d1.atan2(d2))
}

/// Corner flow at a stagnation point `(x1_0, 0)` off the axis:
/// `(sqrt(2) x1_0 / 3) rho^{3/2} cos(3 theta / 2)` inside the 120 degree cone
/// `|theta| < pi/3` above the vertex.
#[derive(Debug, Clone, Copy)]
pub struct StokesCorner {
    x1_0: f64,
    vertex: Point,
}

impl StokesCorner {
    /// Corner at the vertex `(x1_0, 0)`.
    pub fn new(x1_0: f64) -> Result<Self> {
        Self::centred(x1_0, x1_0)
    }

    /// Corner with amplitude set by `x1_0` but vertex at `(vertex_x1, 0)`.
    pub fn centred(x1_0: f64, vertex_x1: f64) -> Result<Self> {
        if !(x1_0 > 0.0 && x1_0.is_finite()) || !(vertex_x1 >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "corner needs x1_0 > 0 and a vertex off the negative half-plane, got {x1_0}, {vertex_x1}"
            )));
        }
        Ok(StokesCorner {
            x1_0,
            vertex: Point::new(vertex_x1, 0.0),
        })
    }

    pub fn vertex(&self) -> Point {
        self.vertex
    }
}

/// Shorthand for [`StokesCorner::new`].
pub fn stokes_corner(x1_0: f64) -> Result<StokesCorner> {
    StokesCorner::new(x1_0)
}

impl Field for StokesCorner {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        let (rho, theta) = polar(p, self.vertex);
        let a = SQRT_2 * self.x1_0 / 3.0;
        let s = rho.sqrt();
        let u = a * rho * s * (1.5 * theta).cos();
        let g = 1.5 * a * s;
        (u, [-g * (0.5 * theta).sin(), g * (0.5 * theta).cos()])
    }

    fn is_positive(&self, p: Point) -> bool {
        let (rho, theta) = polar(p, self.vertex);
        rho > 0.0 && theta.abs() < FRAC_PI_3
    }

    fn coefficients(&self) -> Coefficients {
        Coefficients::Frozen {
            x1: self.x1_0,
            x2: None,
        }
    }
}

/// Half-plane flow `x1_0 sqrt(x2_0) max((x - x0) . e, 0)` about an interior
/// point `x0 = (x1_0, x2_0)`.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    base: Point,
    normal: [f64; 2],
    slope: f64,
}

impl HalfPlane {
    pub fn base(&self) -> Point {
        self.base
    }
}

pub fn halfplane_profile(x1_0: f64, x2_0: f64, e: [f64; 2]) -> Result<HalfPlane> {
    if !(x1_0 > 0.0 && x2_0 > 0.0 && x1_0.is_finite() && x2_0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "half-plane profile needs x1_0 > 0 and x2_0 > 0, got {x1_0}, {x2_0}"
        )));
    }
    if ((e[0].hypot(e[1])) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "direction {e:?} is not a unit vector"
        )));
    }
    Ok(HalfPlane {
        base: Point::new(x1_0, x2_0),
        normal: e,
        slope: x1_0 * x2_0.sqrt(),
    })
}

impl Field for HalfPlane {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        let d = (p.x1 - self.base.x1) * self.normal[0] + (p.x2 - self.base.x2) * self.normal[1];
        (
            self.slope * d,
            [self.slope * self.normal[0], self.slope * self.normal[1]],
        )
    }

    fn is_positive(&self, p: Point) -> bool {
        self.branch(p).0 > 0.0
    }

    fn coefficients(&self) -> Coefficients {
        Coefficients::Frozen {
            x1: self.base.x1,
            x2: Some(self.base.x2),
        }
    }
}

/// Uniform vertical flow near the axis, `u = gamma x1^2`.
#[derive(Debug, Clone, Copy)]
pub struct AxisProfile {
    gamma: f64,
}

pub fn axis_profile(gamma: f64) -> Result<AxisProfile> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma}")));
    }
    Ok(AxisProfile { gamma })
}

impl Field for AxisProfile {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        (self.gamma * p.x1 * p.x1, [2.0 * self.gamma * p.x1, 0.0])
    }

    fn is_positive(&self, p: Point) -> bool {
        self.gamma > 0.0 && p.x1 > 0.0
    }
}

/// Angular part `U(theta)` of the degree-5/2 bubble profile
/// `u = rho^{5/2} U(theta)` together with its support.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AngularProfile {
    /// `(theta_star, pi)`.
    pub support: (f64, f64),
    pub c0: f64,
    pub root: RootResult,
}

impl AngularProfile {
    /// `U(theta) = (2 c0 / 5) sin^2(theta) P'_{3/2}(-cos theta)`.
    pub fn u(&self, theta: f64) -> f64 {
        let s = theta.sin();
        if s == 0.0 {
            return 0.0;
        }
        let dp = specfun::p_prime_unchecked(1.5, -theta.cos()).unwrap_or(f64::NAN);
        0.4 * self.c0 * s * s * dp
    }

    /// `U'(theta) = -(3 c0 / 2) sin(theta) P_{3/2}(-cos theta)`.
    pub fn du(&self, theta: f64) -> f64 {
        let s = theta.sin();
        if s == 0.0 {
            return 0.0;
        }
        let p = legendre_p(1.5, -theta.cos()).unwrap_or(f64::NAN);
        -1.5 * self.c0 * s * p
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.support.0 && theta <= self.support.1
    }
}

/// Pointed-bubble profile at the origin: `rho^{5/2} U(theta)` on the sector
/// `theta_star < theta < pi` that reaches down to the axis below the origin.
#[derive(Debug, Clone, Copy)]
pub struct Garabedian {
    angular: AngularProfile,
}

impl Garabedian {
    pub fn angular(&self) -> &AngularProfile {
        &self.angular
    }
}

/// Builds the bubble profile. `c0 > 0` is the unique constant for which
/// `|grad u|^2 = x1^2 x2` holds on the cone `theta = theta_star`, where
/// `U = 0` and `|grad u|^2 = rho^3 U'^2`.
pub fn garabedian_profile() -> Result<Garabedian> {
    let root = specfun::find_z0(1e-12)?;
    let p_at_root = legendre_p(1.5, root.z0)?;
    // rho^3 (3 c0/2)^2 sin^2 P(z0)^2 = rho^3 sin^2 cos(theta_star)
    let c0 = (2.0 / 3.0) * (-root.z0).sqrt() / p_at_root.abs();
    Ok(Garabedian {
        angular: AngularProfile {
            support: (root.theta_star, PI),
            c0,
            root,
        },
    })
}

impl Field for Garabedian {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        let (rho, theta) = polar(p, Point::ORIGIN);
        if rho == 0.0 {
            return (0.0, [0.0, 0.0]);
        }
        let a = &self.angular;
        let (u, du) = (a.u(theta), a.du(theta));
        let r32 = rho * rho.sqrt();
        let (s, c) = theta.sin_cos();
        // grad = rho^{3/2} (5/2 U e_rho + U' e_theta)
        let g1 = r32 * (2.5 * u * s + du * c);
        let g2 = r32 * (2.5 * u * c - du * s);
        (r32 * rho * u, [g1, g2])
    }

    fn is_positive(&self, p: Point) -> bool {
        let (rho, theta) = polar(p, Point::ORIGIN);
        rho > 0.0 && p.x1 > 0.0 && theta > self.angular.support.0
    }
}

/// Normalised limit `x1^2 x2 / sqrt(4/15)` at a degenerate point. Kept with
/// its sign, so that the weighted boundary integral over the unit half
/// circle is one.
#[derive(Debug, Clone, Copy)]
pub struct DegenerateLimit {
    scale: f64,
}

pub fn degenerate_limit_field() -> DegenerateLimit {
    DegenerateLimit {
        scale: 1.0 / (4.0f64 / 15.0).sqrt(),
    }
}

impl Field for DegenerateLimit {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        let k = self.scale;
        (
            k * p.x1 * p.x1 * p.x2,
            [2.0 * k * p.x1 * p.x2, k * p.x1 * p.x1],
        )
    }

    fn is_positive(&self, p: Point) -> bool {
        p.x1 > 0.0 && p.x2 > 0.0
    }

    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        self.branch(p)
    }
}

/// `x1^2 max(x2, 0)` (upper) or `x1^2 max(-x2, 0)` (lower). Not a solution:
/// the free-boundary condition fails on `x2 = 0`. Useful as a closed-form
/// test field.
#[derive(Debug, Clone, Copy)]
pub struct HalfSpaceCubic {
    upper: bool,
}

pub fn half_space_cubic(upper: bool) -> HalfSpaceCubic {
    HalfSpaceCubic { upper }
}

impl Field for HalfSpaceCubic {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        let s = if self.upper { 1.0 } else { -1.0 };
        (
            s * p.x1 * p.x1 * p.x2,
            [2.0 * s * p.x1 * p.x2, s * p.x1 * p.x1],
        )
    }

    fn is_positive(&self, p: Point) -> bool {
        p.x1 > 0.0 && if self.upper { p.x2 > 0.0 } else { p.x2 < 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ZeroField;

impl Field for ZeroField {
    fn branch(&self, _: Point) -> (f64, [f64; 2]) {
        (0.0, [0.0, 0.0])
    }

    fn is_positive(&self, _: Point) -> bool {
        false
    }
}

/// A named profile with the point it is centred at and its sampling window.
#[derive(Clone)]
pub struct Profile {
    pub name: &'static str,
    pub field: Arc<dyn Field>,
    pub base: Point,
    /// Homogeneity degree about `base`, if any.
    pub degree: Option<f64>,
    /// Density label the classifier should report at `base`.
    pub label: &'static str,
    pub window: Rect,
}

/// Registered profile names.
pub const PROFILE_NAMES: [&str; 8] = [
    "stokes",
    "halfplane",
    "axis",
    "garabedian",
    "deglimit",
    "hpos",
    "hneg",
    "zero",
];

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Looks a profile up by name. Parameters: `x1`, `x2` (base point), `gamma`,
/// `b` (height of the axis point) and `angle` (direction of `e`, from the
/// positive `x2` axis, in radians).
pub fn lookup(name: &str, params: &BTreeMap<String, f64>) -> Result<Profile> {
    let allowed: &[&str] = match name {
        "stokes" => &["x1"],
        "halfplane" => &["x1", "x2", "angle"],
        "axis" => &["gamma", "b"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "profile '{name}' takes no parameter '{k}'"
        )));
    }
    let origin_window = Rect::new(0.0, 1.0, -0.5, 0.5);
    let profile = match name {
        "stokes" => {
            let x1 = param(params, "x1", 1.0);
            let f = stokes_corner(x1)?;
            Profile {
                name: "stokes",
                base: f.vertex(),
                field: Arc::new(f),
                degree: Some(1.5),
                label: "stokes",
                window: Rect::new(0.5 * x1, 1.5 * x1, -0.5 * x1, 0.5 * x1),
            }
        }
        "halfplane" => {
            let (x1, x2) = (param(params, "x1", 1.0), param(params, "x2", 1.0));
            let angle = param(params, "angle", 0.0);
            let f = halfplane_profile(x1, x2, [angle.sin(), angle.cos()])?;
            Profile {
                name: "halfplane",
                base: f.base(),
                field: Arc::new(f),
                degree: Some(1.0),
                label: "half-plane",
                window: Rect::new(0.5 * x1, 1.5 * x1, x2 - 0.5 * x1, x2 + 0.5 * x1),
            }
        }
        "axis" => {
            let b = param(params, "b", 0.5);
            if b == 0.0 {
                return Err(Error::InvalidArgument(
                    "axis profile needs a base height b != 0".into(),
                ));
            }
            Profile {
                name: "axis",
                field: Arc::new(axis_profile(param(params, "gamma", 1.0))?),
                base: Point::new(0.0, b),
                degree: Some(2.0),
                label: "axis-full",
                window: Rect::new(0.0, 1.0, b - 0.5, b + 0.5),
            }
        }
        "garabedian" => Profile {
            name: "garabedian",
            field: Arc::new(garabedian_profile()?),
            base: Point::ORIGIN,
            degree: Some(2.5),
            label: "garabedian",
            window: origin_window,
        },
        "deglimit" => Profile {
            name: "deglimit",
            field: Arc::new(degenerate_limit_field()),
            base: Point::ORIGIN,
            degree: Some(3.0),
            label: "horizontal-positive",
            window: origin_window,
        },
        "hpos" | "hneg" => {
            let upper = name == "hpos";
            Profile {
                name: if upper { "hpos" } else { "hneg" },
                field: Arc::new(half_space_cubic(upper)),
                base: Point::ORIGIN,
                degree: Some(3.0),
                label: if upper {
                    "horizontal-positive"
                } else {
                    "horizontal-negative"
                },
                window: origin_window,
            }
        }
        "zero" => Profile {
            name: "zero",
            field: Arc::new(ZeroField),
            base: Point::ORIGIN,
            degree: None,
            label: "zero",
            window: origin_window,
        },
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown profile '{name}' (known: {})",
                PROFILE_NAMES.join(", ")
            )))
        }
    };
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(f: &dyn Field, p: Point) -> [f64; 2] {
        let h = 1e-3;
        let v = |q: Point| f.branch(q).0;
        let d = |a: Point, b: Point, c: Point, d: Point| {
            (-v(a) + 8.0 * v(b) - 8.0 * v(c) + v(d)) / (12.0 * h)
        };
        let at = |d1: f64, d2: f64| Point::new(p.x1 + d1, p.x2 + d2);
        [
            d(at(2.0 * h, 0.0), at(h, 0.0), at(-h, 0.0), at(-2.0 * h, 0.0)),
            d(at(0.0, 2.0 * h), at(0.0, h), at(0.0, -h), at(0.0, -2.0 * h)),
        ]
    }

    #[test]
    fn case_from_zero_pattern() {
        assert_eq!(BlowupCase::of(Point::new(1.0, 1.0)), BlowupCase::Interior);
        assert_eq!(BlowupCase::of(Point::new(1.0, 0.0)), BlowupCase::Horizontal);
        assert_eq!(BlowupCase::of(Point::new(0.0, 0.3)), BlowupCase::Axis);
        assert_eq!(BlowupCase::of(Point::new(1e-12, -1e-12)), BlowupCase::Origin);
        assert_eq!("axis".parse::<BlowupCase>().unwrap(), BlowupCase::Axis);
    }

    #[test]
    fn stokes_examples() {
        let f = stokes_corner(1.0).unwrap();
        let v = f.vertex();
        assert!((f.value_grad(v.polar(1.0, 0.0)).0 - SQRT_2 / 3.0).abs() < 1e-15);
        assert!(f.value_grad(v.polar(1.0, FRAC_PI_3)).0.abs() < 1e-15);
        assert_eq!(f.value_grad(v.polar(1.0, 0.5 * PI)).0, 0.0);
        let p = v.polar(0.5, FRAC_PI_3);
        let g = f.branch(p).1;
        assert!((g[0] * g[0] + g[1] * g[1] - p.x2).abs() < 1e-14);
    }

    #[test]
    fn halfplane_examples() {
        let f = halfplane_profile(1.0, 4.0, [0.0, 1.0]).unwrap();
        let b = f.base();
        assert_eq!(f.value_grad(Point::new(b.x1, b.x2 + 0.5)).0, 1.0);
        assert_eq!(f.value_grad(Point::new(b.x1 + 0.3, b.x2 - 0.1)).0, 0.0);
        assert!(halfplane_profile(1.0, 1.0, [1.0, 1.0]).is_err());
    }

    #[test]
    fn axis_examples() {
        let f = axis_profile(2.0).unwrap();
        assert_eq!(f.value_grad(Point::new(0.5, 7.0)).0, 0.5);
        assert_eq!(f.value_grad(Point::new(0.0, 7.0)).0, 0.0);
    }

    #[test]
    fn garabedian_vanishes_on_its_cone_and_the_axis() {
        let g = garabedian_profile().unwrap();
        let a = g.angular();
        assert!(a.u(a.support.0).abs() < 1e-13);
        assert!(a.u(PI).abs() < 1e-30);
        for k in 1..50 {
            let t = a.support.0 + (PI - a.support.0) * k as f64 / 50.0;
            assert!(a.u(t) > 0.0, "theta = {t}");
        }
        // u ~ sin^2 near the axis
        let ratio = a.u(PI - 1e-3) / a.u(PI - 2e-3);
        assert!((ratio - 0.25).abs() < 1e-3);
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let fields: Vec<(Box<dyn Field>, Vec<Point>)> = vec![
            (
                Box::new(stokes_corner(1.0).unwrap()),
                vec![Point::new(1.1, 0.4), Point::new(0.9, 0.7)],
            ),
            (
                Box::new(garabedian_profile().unwrap()),
                vec![Point::new(0.2, -0.5), Point::new(0.5, -0.1)],
            ),
            (
                Box::new(degenerate_limit_field()),
                vec![Point::new(0.3, 0.3)],
            ),
            (
                Box::new(halfplane_profile(1.0, 2.0, [0.6, 0.8]).unwrap()),
                vec![Point::new(1.3, 2.4)],
            ),
        ];
        for (f, pts) in &fields {
            for &p in pts {
                let exact = f.branch(p).1;
                let fd = fd_grad(f.as_ref(), p);
                for k in 0..2 {
                    assert!((exact[k] - fd[k]).abs() < 1e-8, "{p:?}: {exact:?} vs {fd:?}");
                }
            }
        }
    }

    #[test]
    fn registry() {
        let none = BTreeMap::new();
        for name in PROFILE_NAMES {
            let p = lookup(name, &none).unwrap();
            assert_eq!(p.name, name);
            assert!(p.window.contains(p.base));
        }
        assert!(lookup("nope", &none).is_err());
        let mut bad = BTreeMap::new();
        bad.insert("gamma".to_string(), 1.0);
        assert!(lookup("stokes", &bad).is_err());
    }
}
