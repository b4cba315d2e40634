//! Legendre functions of the first kind `P_nu(x)` for real degree.
//!
//! `P_nu(x) = 2F1(-nu, nu + 1; 1; (1 - x)/2)`. Away from `x = -1` the
//! Gauss series is summed directly; close to `x = -1` the logarithmic
//! connection formula for `c = a + b` is used instead, since the direct
//! series converges too slowly there.

use std::f64::consts::PI;

use super::gamma::digamma;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;
/// Above this value of `(1 - x)/2` the logarithmic expansion takes over.
const LOG_SWITCH: f64 = 0.75;

/// Gauss series `2F1(a, b; c; z)` for `0 <= z < 1`.
pub(crate) fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // small terms only count once the ratio has settled below one
        if k > a.abs().max(b.abs()) && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        nu: -a,
        x: 1.0 - 2.0 * z,
        iterations: MAX_TERMS,
    })
}

/// `P_nu` for non-integer `nu` from the expansion about `z = 1`, `w = 1 - z`.
fn log_expansion(nu: f64, w: f64) -> Result<f64> {
    let a = -nu;
    let b = nu + 1.0;
    let mut psi_n1 = digamma(1.0)?;
    let mut psi_a = digamma(a)?;
    let mut psi_b = digamma(b)?;
    let lnw = w.ln();
    let mut coef = 1.0;
    let mut sum = 0.0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        let term = coef * (2.0 * psi_n1 - psi_a - psi_b - lnw);
        sum += term;
        if n > 2 && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            return Ok(-(PI * nu).sin() / PI * sum);
        }
        coef *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0)) * w;
        psi_n1 += 1.0 / (k + 1.0);
        psi_a += 1.0 / (a + k);
        psi_b += 1.0 / (b + k);
    }
    Err(Error::NonConvergence {
        nu,
        x: 2.0 * w - 1.0,
        iterations: MAX_TERMS,
    })
}

fn bonnet(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_{-nu-1} = P_nu`; maps every degree to `nu >= -1/2`.
fn canonical(nu: f64) -> f64 {
    if nu < -0.5 {
        -nu - 1.0
    } else {
        nu
    }
}

fn check_degree(nu: f64) -> Result<()> {
    if nu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("degree {nu}")))
    }
}

/// Legendre function `P_nu(x)` on `(-1, 1]`.
pub fn legendre_p(nu: f64, x: f64) -> Result<f64> {
    check_degree(nu)?;
    if !(x > -1.0 && x <= 1.0) {
        return Err(Error::Domain {
            x,
            what: "P_nu is defined on (-1, 1]",
        });
    }
    p_unchecked(canonical(nu), x)
}

fn p_unchecked(nu: f64, x: f64) -> Result<f64> {
    if nu == nu.round() {
        return Ok(bonnet(nu as u32, x));
    }
    let z = 0.5 * (1.0 - x);
    if z > LOG_SWITCH {
        log_expansion(nu, 0.5 * (1.0 + x))
    } else {
        hyp2f1_series(-nu, nu + 1.0, 1.0, z)
    }
}

/// Derivative `P'_nu(x)` on the open interval `(-1, 1)`.
///
/// Uses `(1 - x^2) P'_nu = nu (P_{nu-1} - x P_nu)` on `x <= 0`. On `x > 0`
/// that difference cancels badly as `x -> 1`, so the differentiated Gauss
/// series `nu (nu + 1)/2 * 2F1(1 - nu, nu + 2; 2; z)` is summed instead.
pub fn legendre_p_prime(nu: f64, x: f64) -> Result<f64> {
    check_degree(nu)?;
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain {
            x,
            what: "P'_nu is evaluated on (-1, 1)",
        });
    }
    p_prime_unchecked(nu, x)
}

/// As [`legendre_p_prime`] but also accepts `x = 1`.
pub(crate) fn p_prime_unchecked(nu: f64, x: f64) -> Result<f64> {
    let nu = canonical(nu);
    if nu == 0.0 {
        return Ok(0.0);
    }
    if x > 0.0 {
        let z = 0.5 * (1.0 - x);
        return Ok(0.5 * nu * (nu + 1.0) * hyp2f1_series(1.0 - nu, nu + 2.0, 2.0, z)?);
    }
    let lower = p_unchecked(canonical(nu - 1.0), x)?;
    let here = p_unchecked(nu, x)?;
    Ok(nu * (lower - x * here) / (1.0 - x * x))
}
