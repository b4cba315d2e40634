//! Legendre functions of real degree, the zero of `P'_{3/2}` that fixes the
//! pointed-bubble cone, and Gamma closed forms at the origin.

mod gamma;
mod legendre;

use std::f64::consts::PI;

use serde::Serialize;

pub use gamma::{digamma, gamma, rgamma};
pub use legendre::{legendre_p, legendre_p_prime};
pub(crate) use legendre::p_prime_unchecked;

use crate::error::{Error, Result};

/// Bracket searched for the zero of `P'_{3/2}`.
pub const Z0_BRACKET: (f64, f64) = (-0.99, -0.01);

/// Zero of `P'_{3/2}` in `(-1, 0)` and the cone angles derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub z0: f64,
    /// `arccos(-z0)`, the cone half-angle measured from the positive `x2` axis.
    pub theta_star: f64,
    /// `2 theta_star`.
    pub opening: f64,
    /// `|P'_{3/2}(z0)|`.
    pub residual: f64,
}

impl RootResult {
    /// Angular width `pi - theta_star = arccos(z0)` of the sector where the
    /// bubble profile is positive.
    pub fn sector_angle(&self) -> f64 {
        PI - self.theta_star
    }

    /// Slope `x2/x1` of the cone `theta = theta_star`, i.e. `tan(pi/2 - theta_star)`.
    pub fn boundary_slope(&self) -> f64 {
        (0.5 * PI - self.theta_star).tan()
    }
}

/// Locates the zero of `P'_{3/2}` by bisection to width `1e-14` followed by
/// one secant step.
pub fn find_z0(tol: f64) -> Result<RootResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol}")));
    }
    let f = |z: f64| legendre_p_prime(1.5, z);
    let (mut lo, mut hi) = Z0_BRACKET;
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let mut steps = 0;
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            flo = 0.0;
            fhi = 0.0;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        steps += 1;
    }
    let mut z0 = 0.5 * (lo + hi);
    if fhi != flo {
        let secant = hi - fhi * (hi - lo) / (fhi - flo);
        if secant >= lo && secant <= hi {
            z0 = secant;
        }
    }
    let residual = f(z0)?.abs();
    if residual >= tol {
        return Err(Error::NonConvergence {
            nu: 1.5,
            x: z0,
            iterations: steps,
        });
    }
    let theta_star = (-z0).acos();
    Ok(RootResult {
        z0,
        theta_star,
        opening: 2.0 * theta_star,
        residual,
    })
}

/// `f(x) = y(x) y'(-x) + y(-x) y'(x)` with `y = P_{3/2}`.
pub fn lemma_f(x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain {
            x,
            what: "f is evaluated on (-1, 1)",
        });
    }
    let y = |t| legendre_p(1.5, t);
    let dy = |t| legendre_p_prime(1.5, t);
    Ok(y(x)? * dy(-x)? + y(-x)? * dy(x)?)
}

/// Closed forms for `P'_m(0)` and `Q'_m(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForms {
    /// `m sqrt(pi) / (Gamma((2-m)/2) Gamma((m+1)/2))`; a Gamma pole in the
    /// denominator makes it vanish.
    pub p_prime_0: f64,
    /// `-m pi^{3/2} tan(pi (m-1)/2) / ((m-1) Gamma((2-m)/2) Gamma((m-1)/2))`,
    /// or `None` where the expression is singular and only a limit exists.
    pub q_prime_0: Option<f64>,
}

pub fn gamma_closed_forms(m: f64) -> Result<ClosedForms> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument(format!("degree {m}")));
    }
    let p_prime_0 = m * PI.sqrt() * rgamma(1.0 - 0.5 * m) * rgamma(0.5 * (m + 1.0));
    let shift = m - 1.0;
    // tan(pi (m-1)/2) blows up when m - 1 is an odd integer
    let half = 0.5 * shift;
    let tan_singular = (half - 0.5) == (half - 0.5).round();
    let q_prime_0 = if shift == 0.0 || tan_singular {
        None
    } else {
        let t = (0.5 * PI * shift).tan();
        Some(-m * PI.powf(1.5) * t * rgamma(1.0 - 0.5 * m) * rgamma(0.5 * shift) / shift)
    };
    Ok(ClosedForms {
        p_prime_0,
        q_prime_0,
    })
}

/// `P_nu(0) = sqrt(pi) / (Gamma((1-nu)/2) Gamma(1 + nu/2))`.
pub fn legendre_p_at_zero(nu: f64) -> f64 {
    PI.sqrt() * rgamma(0.5 * (1.0 - nu)) * rgamma(1.0 + 0.5 * nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_is_bracketed_and_small() {
        let root = find_z0(1e-12).unwrap();
        assert!(root.z0 > -1.0 && root.z0 < 0.0);
        assert!(root.residual < 1e-12);
        assert!(root.theta_star > 0.0 && root.theta_star < 0.5 * PI);
        assert_eq!(root.opening, 2.0 * root.theta_star);
    }

    #[test]
    fn closed_form_poles() {
        let two = gamma_closed_forms(2.0).unwrap();
        assert_eq!(two.p_prime_0, 0.0);
        assert_eq!(two.q_prime_0, None);
        assert_eq!(gamma_closed_forms(1.0).unwrap().q_prime_0, None);
        assert!(gamma_closed_forms(f64::INFINITY).is_err());
    }

    #[test]
    fn value_at_zero_matches_series() {
        for &nu in &[0.5, 1.5, 2.5, 3.0] {
            let series = legendre_p(nu, 0.0).unwrap();
            assert!((series - legendre_p_at_zero(nu)).abs() < 1e-13, "nu = {nu}");
        }
    }

    #[test]
    fn lemma_f_rejects_endpoints() {
        assert!(lemma_f(1.0).is_err());
        assert!(lemma_f(-1.0).is_err());
    }
}
