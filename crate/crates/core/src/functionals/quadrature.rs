//! Polar tensor quadrature on half-balls `B_r(x0) ∩ {x1 > 0}`.
//!
//! Each circle `|x - x0| = rho` is clipped to `x1 > 0` and then cut where
//! the field's support predicate changes, so that the indicator of the
//! positivity set and the kink of `|grad u|` at the free boundary always fall
//! on panel edges.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Midpoint,
    Gauss,
}

impl std::str::FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Rule::Midpoint),
            "gauss" => Ok(Rule::Gauss),
            _ => Err(Error::InvalidArgument(format!("unknown rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_rho: usize,
    /// Nodes per angular panel.
    pub n_theta: usize,
    pub rule: Rule,
    /// Smallest admissible `x1 / rho` at a node.
    pub axis_offset: f64,
}

impl QuadratureSpec {
    pub fn new(n_rho: usize, n_theta: usize, rule: Rule, axis_offset: f64) -> Result<Self> {
        if n_rho < 16 || n_theta < 16 {
            return Err(Error::InvalidArgument(format!(
                "need at least 16 nodes per direction, got {n_rho} x {n_theta}"
            )));
        }
        if !(axis_offset > 0.0 && axis_offset < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "axis offset {axis_offset} outside (0, 1)"
            )));
        }
        Ok(QuadratureSpec {
            n_rho,
            n_theta,
            rule,
            axis_offset,
        })
    }

    /// Gauss rule for analytic fields, a finer midpoint rule for grids whose
    /// interpolants are only piecewise smooth.
    pub fn for_field(field: &dyn Field) -> Self {
        if field.as_grid().is_some() {
            QuadratureSpec {
                n_rho: 256,
                n_theta: 128,
                rule: Rule::Midpoint,
                axis_offset: 1e-12,
            }
        } else {
            QuadratureSpec::default()
        }
    }

    /// Nodes and weights on `[0, 1]`.
    fn unit_rule(&self, n: usize) -> Vec<(f64, f64)> {
        match self.rule {
            Rule::Midpoint => (0..n)
                .map(|k| ((k as f64 + 0.5) / n as f64, 1.0 / n as f64))
                .collect(),
            Rule::Gauss => {
                let n = NonZeroUsize::new(n).expect("node count checked at construction");
                GaussLegendre::new(n)
                    .as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                    .collect()
            }
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            n_rho: 64,
            n_theta: 64,
            rule: Rule::Gauss,
            axis_offset: 1e-12,
        }
    }
}

/// Quadrature node with its weight (area element or arc element included).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub p: Point,
    pub theta: f64,
    pub w: f64,
    pub positive: bool,
}

const SCAN: usize = 1024;

pub(crate) struct HalfBall<'a> {
    field: &'a dyn Field,
    x0: Point,
    r: f64,
    rho_rule: Vec<(f64, f64)>,
    theta_rule: Vec<(f64, f64)>,
    axis_offset: f64,
}

impl<'a> HalfBall<'a> {
    pub fn new(field: &'a dyn Field, x0: Point, r: f64, quad: &QuadratureSpec) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius {r}")));
        }
        if !(x0.x1 >= 0.0) {
            return Err(Error::OutOfDomain {
                x1: x0.x1,
                x2: x0.x2,
            });
        }
        if let Some(d) = field.domain() {
            if !d.contains_half_disc(x0, r) {
                return Err(Error::Domain {
                    x: r,
                    what: "half-ball leaves the sampled window",
                });
            }
        }
        Ok(HalfBall {
            field,
            x0,
            r,
            rho_rule: quad.unit_rule(quad.n_rho),
            theta_rule: quad.unit_rule(quad.n_theta),
            axis_offset: quad.axis_offset,
        })
    }

    /// Angular range of the circle of radius `rho` inside `x1 > 0`.
    fn arc(&self, rho: f64) -> (f64, f64) {
        let s_min = self.axis_offset - self.x0.x1 / rho;
        if s_min <= -1.0 {
            (-std::f64::consts::PI, std::f64::consts::PI)
        } else {
            let b = s_min.asin();
            (b, std::f64::consts::PI - b)
        }
    }

    /// Panels of `[a, b]` on which the support predicate is constant.
    fn panels(&self, rho: f64, a: f64, b: f64) -> Vec<(f64, f64, bool)> {
        let at = |t: f64| self.field.is_positive(self.x0.polar(rho, t));
        let step = (b - a) / SCAN as f64;
        let mut out = Vec::new();
        let mut start = a;
        let mut t_prev = a + 0.5 * step;
        let mut s_prev = at(t_prev);
        for k in 1..SCAN {
            let t = a + (k as f64 + 0.5) * step;
            let s = at(t);
            if s != s_prev {
                let (mut lo, mut hi) = (t_prev, t);
                while hi - lo > 1e-14 * (1.0 + hi.abs()) {
                    let mid = 0.5 * (lo + hi);
                    if at(mid) == s_prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let cut = 0.5 * (lo + hi);
                out.push((start, cut, s_prev));
                start = cut;
                s_prev = s;
            }
            t_prev = t;
        }
        out.push((start, b, s_prev));
        out
    }

    fn arc_nodes(&self, rho: f64, scale: f64, out: &mut Vec<Node>) {
        let (a, b) = self.arc(rho);
        for (lo, hi, positive) in self.panels(rho, a, b) {
            let len = hi - lo;
            for &(t, w) in &self.theta_rule {
                let theta = lo + t * len;
                out.push(Node {
                    p: self.x0.polar(rho, theta),
                    theta,
                    w: w * len * scale,
                    positive,
                });
            }
        }
    }

    /// Nodes for `∫_{B_r^+} f dx`.
    pub fn area_nodes(&self) -> Vec<Node> {
        let mut breaks = vec![0.0];
        if self.x0.x1 > 0.0 && self.x0.x1 < self.r {
            breaks.push(self.x0.x1);
        }
        breaks.push(self.r);
        let mut out = Vec::new();
        for (k, pair) in breaks.windows(2).enumerate() {
            let (lo, hi) = (pair[0], pair[1]);
            // beyond rho = x0.x1 the arc length has a square-root kink at
            // the start; rho = lo + (hi - lo) s^2 removes it
            let graded = k > 0;
            for &(s, w) in &self.rho_rule {
                let (rho, jac) = if graded {
                    (lo + s * s * (hi - lo), 2.0 * s * (hi - lo))
                } else {
                    (lo + s * (hi - lo), hi - lo)
                };
                self.arc_nodes(rho, w * jac * rho, &mut out);
            }
        }
        out
    }

    /// Nodes for `∫_{∂B_r ∩ {x1 > 0}} f dH^1`.
    pub fn boundary_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        self.arc_nodes(self.r, self.r, &mut out);
        out
    }

    pub fn field(&self) -> &dyn Field {
        self.field
    }

}

pub(crate) fn finite(v: f64, p: Point) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x1: p.x1, x2: p.x2 })
    }
}
