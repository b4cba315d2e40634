//! Growth of the weighted `L^2` norm under rescaling, and the distance of
//! normalised rescalings to the degenerate limit profile.

use serde::Serialize;

use super::regression_slope;
use crate::error::{Error, Result};
use crate::field::{Field, Point};
use crate::functionals::{integrals, QuadratureSpec, J_FLOOR};
use crate::profiles::degenerate_limit_field;

/// Half-width of the band of slopes counted as bounded.
pub const BOUNDED_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthVerdict {
    Vanishing,
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub alpha: f64,
    /// Log-log slope of `r^-alpha N(r)`; positive means it vanishes as `r -> 0`.
    pub slope: f64,
    pub verdict: GrowthVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub alpha_star: f64,
    pub table: Vec<AlphaRow>,
}

/// Exponents tried by [`growth_exponent`].
pub fn default_alphas() -> Vec<f64> {
    (0..=16).map(|k| 0.5 + 0.25 * k as f64).collect()
}

/// `N(r) = sqrt(∫_{B_1^+} w u(r x)^2) = sqrt(r^-1 ∫_{B_r^+} w u^2)` about the
/// origin; `alpha_star` is the log-log slope of `N`, and `r^-alpha N(r)`
/// vanishes, stays bounded or blows up as `r -> 0` according to the sign of
/// `alpha_star - alpha`.
pub fn growth_exponent(
    field: &dyn Field,
    radii: &[f64],
    alphas: &[f64],
    quad: &QuadratureSpec,
) -> Result<GrowthReport> {
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("need at least two radii".into()));
    }
    let mut logs = Vec::with_capacity(radii.len());
    for &r in radii {
        let mass = integrals(field, Point::ORIGIN, r, quad)?.mass;
        if mass <= J_FLOOR {
            return Err(Error::ZeroDenominator {
                what: "weighted L2 norm (zero field)",
                value: mass,
            });
        }
        logs.push((r.ln(), 0.5 * (mass / r).ln()));
    }
    let alpha_star = regression_slope(&logs)?;
    let table = alphas
        .iter()
        .map(|&alpha| {
            let slope = alpha_star - alpha;
            let verdict = if slope > BOUNDED_BAND {
                GrowthVerdict::Vanishing
            } else if slope < -BOUNDED_BAND {
                GrowthVerdict::Unbounded
            } else {
                GrowthVerdict::Bounded
            };
            AlphaRow {
                alpha,
                slope,
                verdict,
            }
        })
        .collect();
    Ok(GrowthReport { alpha_star, table })
}

/// For each radius, the weighted `L^2` distance on `0.1 < |x| < 0.9`,
/// `x1 > 0`, between `v_r(x) = u(r x) / sqrt(J(r))` and the normalised
/// degenerate limit `x1^2 x2 / sqrt(4/15)`. `v_r` has unit weighted norm on
/// the unit half circle.
pub fn rescaled_profile_residual(
    field: &dyn Field,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let limit = degenerate_limit_field();
    let rule = |n: usize| -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| ((k as f64 + 0.5) / n as f64, 1.0 / n as f64))
            .collect()
    };
    // the integrand is only piecewise smooth for cut-off fields, so a
    // composite midpoint rule is used in both directions
    let n_rho = 4 * quad.n_rho;
    let n_theta = 8 * quad.n_theta;
    let (rho_lo, rho_hi) = (0.1, 0.9);
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let s = integrals(field, Point::ORIGIN, r, quad)?;
        if s.j <= J_FLOOR {
            return Err(Error::ZeroDenominator {
                what: "J(r)",
                value: s.j,
            });
        }
        let norm = s.j.sqrt();
        let mut acc = 0.0;
        for &(a, wa) in &rule(n_rho) {
            let rho = rho_lo + a * (rho_hi - rho_lo);
            for &(b, wb) in &rule(n_theta) {
                let theta = b * std::f64::consts::PI;
                let x = Point::ORIGIN.polar(rho, theta);
                let v = field.value_grad(Point::new(r * x.x1, r * x.x2)).0 / norm;
                let d = v - limit.value_grad(x).0;
                acc += wa * wb * (rho_hi - rho_lo) * std::f64::consts::PI * rho * d * d / x.x1;
            }
        }
        out.push(acc.sqrt());
    }
    Ok(out)
}
