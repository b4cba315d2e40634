//! Monotonicity quantities and the frequency functional on half-balls.
//!
//! With weight `w` and gravity term `g` from the field's coefficient model
//! (`w = 1/x1`, `g = x1 x2` for the axisymmetric equation):
//!
//! * `I(r) = ∫_{B_r^+} w |grad u|^2 + g 1{u > 0}`
//! * `J(r) = ∫_{∂B_r^+} w u^2`
//! * `M(r) = r^-a I(r) - b r^(-a-1) J(r)` with `(a, b)` set by the case
//! * `D = r ∫ w |grad u|^2 / J`, `V = r ∫ g 1{u <= 0} / J`, `H = D - V`

mod quadrature;
mod sweep;

use serde::Serialize;

pub use quadrature::{QuadratureSpec, Rule};
pub(crate) use quadrature::HalfBall;
pub use sweep::{
    extrapolate_to_zero, sweep, CurveTable, Diagnostics, MTrend, RadiusError, CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::field::{Field, Point};
use crate::profiles::BlowupCase;
use quadrature::finite;

/// Below this `J` counts as zero.
pub const J_FLOOR: f64 = 1e-30;

/// Raw integrals over one half-ball.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Integrals {
    /// `∫ w |grad u|^2`
    pub energy: f64,
    /// `∫ g 1{u > 0}`
    pub gravity_in: f64,
    /// `∫ g 1{u <= 0}`
    pub gravity_out: f64,
    /// `∫ w u^2` over the half-ball
    pub mass: f64,
    /// `∫_∂ w u^2`
    pub j: f64,
    /// `∫_∂ w u ∂_nu u`
    pub flux: f64,
}

fn area_integrals(hb: &HalfBall, out: &mut Integrals) -> Result<()> {
    let f = hb.field();
    let c = f.coefficients();
    for n in hb.area_nodes() {
        let w = c.weight(n.p);
        let g = c.gravity(n.p);
        let (u, grad) = f.value_grad(n.p);
        let e = finite(w * (grad[0] * grad[0] + grad[1] * grad[1]), n.p)?;
        out.energy += n.w * e;
        out.mass += n.w * finite(w * u * u, n.p)?;
        if n.positive {
            out.gravity_in += n.w * g;
        } else {
            out.gravity_out += n.w * g;
        }
    }
    Ok(())
}

fn boundary_integrals(hb: &HalfBall, out: &mut Integrals) -> Result<()> {
    let f = hb.field();
    let c = f.coefficients();
    for n in hb.boundary_nodes() {
        let w = c.weight(n.p);
        let (u, grad) = f.value_grad(n.p);
        let dn = grad[0] * n.theta.sin() + grad[1] * n.theta.cos();
        out.j += n.w * finite(w * u * u, n.p)?;
        out.flux += n.w * finite(w * u * dn, n.p)?;
    }
    Ok(())
}

pub fn integrals(
    field: &dyn Field,
    x0: Point,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<Integrals> {
    let hb = HalfBall::new(field, x0, r, quad)?;
    let mut out = Integrals::default();
    area_integrals(&hb, &mut out)?;
    boundary_integrals(&hb, &mut out)?;
    Ok(out)
}

/// `I(r)` about `x0`.
pub fn energy_i(field: &dyn Field, x0: Point, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    let hb = HalfBall::new(field, x0, r, quad)?;
    let mut out = Integrals::default();
    area_integrals(&hb, &mut out)?;
    Ok(out.energy + out.gravity_in)
}

/// `J(r)` about `x0`.
pub fn boundary_j(field: &dyn Field, x0: Point, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    let hb = HalfBall::new(field, x0, r, quad)?;
    let mut out = Integrals::default();
    boundary_integrals(&hb, &mut out)?;
    Ok(out.j)
}

pub(crate) fn check_case(x0: Point, case: BlowupCase) -> Result<()> {
    if BlowupCase::of(x0) == case {
        Ok(())
    } else {
        Err(Error::CaseMismatch {
            requested: case.to_string(),
            x1: x0.x1,
            x2: x0.x2,
        })
    }
}

fn m_from(case: BlowupCase, r: f64, i: f64, j: f64) -> f64 {
    let (a, b) = case.monotonicity_exponents();
    r.powf(-a) * i - b * r.powf(-a - 1.0) * j
}

/// The case's monotonicity quantity `r^-a I(r) - b r^(-a-1) J(r)`.
pub fn monotonicity_m(
    field: &dyn Field,
    x0: Point,
    r: f64,
    case: BlowupCase,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_case(x0, case)?;
    let s = integrals(field, x0, r, quad)?;
    Ok(m_from(case, r, s.energy + s.gravity_in, s.j))
}

/// `r^-a ∫_{B_r^+} g 1{u > 0}`, the volume part of `M` alone.
pub fn density_direct(
    field: &dyn Field,
    x0: Point,
    r: f64,
    case: BlowupCase,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_case(x0, case)?;
    let hb = HalfBall::new(field, x0, r, quad)?;
    let mut out = Integrals::default();
    area_integrals(&hb, &mut out)?;
    Ok(r.powf(-case.monotonicity_exponents().0) * out.gravity_in)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frequency {
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

fn frequency_from(r: f64, s: &Integrals) -> Result<Frequency> {
    if s.j <= J_FLOOR {
        return Err(Error::ZeroDenominator {
            what: "J(r)",
            value: s.j,
        });
    }
    let d = r * s.energy / s.j;
    let v = r * s.gravity_out / s.j;
    Ok(Frequency { d, v, h: d - v })
}

/// `D`, `V` and `H = D - V` about the origin.
pub fn frequency(field: &dyn Field, r: f64, quad: &QuadratureSpec) -> Result<Frequency> {
    frequency_at(field, Point::ORIGIN, r, quad)
}

/// The same quotients about an arbitrary centre.
pub fn frequency_at(
    field: &dyn Field,
    x0: Point,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<Frequency> {
    frequency_from(r, &integrals(field, x0, r, quad)?)
}

/// Relative defect of
/// `∫(r u_nu - D u)^2 w + V^2 ∫ u^2 w = ∫(r u_nu - H u)^2 w` over `∂B_r^+`,
/// all three integrals on the same nodes. Normalised by the largest of the
/// two sides and `J`.
pub fn identity_ttr_residual(field: &dyn Field, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    identity_ttr_residual_at(field, Point::ORIGIN, r, quad)
}

pub fn identity_ttr_residual_at(
    field: &dyn Field,
    x0: Point,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let hb = HalfBall::new(field, x0, r, quad)?;
    let mut s = Integrals::default();
    area_integrals(&hb, &mut s)?;
    boundary_integrals(&hb, &mut s)?;
    let fr = frequency_from(r, &s)?;
    let c = field.coefficients();
    let (mut left, mut right) = (0.0, 0.0);
    for n in hb.boundary_nodes() {
        let w = c.weight(n.p);
        let (u, grad) = field.value_grad(n.p);
        let dn = r * (grad[0] * n.theta.sin() + grad[1] * n.theta.cos());
        left += n.w * w * (dn - fr.d * u).powi(2);
        right += n.w * w * (dn - fr.h * u).powi(2);
    }
    let left = left + fr.v * fr.v * s.j;
    Ok((left - right).abs() / left.max(right).max(s.j))
}

/// Everything computed at one radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalRecord {
    pub r: f64,
    pub x0: Point,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "M_int")]
    pub m_int: Option<f64>,
    #[serde(rename = "M_x2")]
    pub m_x2: Option<f64>,
    #[serde(rename = "M_x1")]
    pub m_x1: Option<f64>,
    #[serde(rename = "M_x1x2")]
    pub m_x1x2: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
}

impl FunctionalRecord {
    /// The populated monotonicity quantity.
    pub fn m(&self) -> Option<f64> {
        self.m_int.or(self.m_x2).or(self.m_x1).or(self.m_x1x2)
    }
}

/// Computes the record at one radius. The frequency triple is filled in at
/// the origin only, and only when `J > 0`.
pub fn record(
    field: &dyn Field,
    x0: Point,
    r: f64,
    case: BlowupCase,
    quad: &QuadratureSpec,
) -> Result<FunctionalRecord> {
    check_case(x0, case)?;
    let s = integrals(field, x0, r, quad)?;
    let i = s.energy + s.gravity_in;
    let m = Some(m_from(case, r, i, s.j));
    let mut rec = FunctionalRecord {
        r,
        x0,
        i,
        j: s.j,
        m_int: None,
        m_x2: None,
        m_x1: None,
        m_x1x2: None,
        d: None,
        v: None,
        h: None,
    };
    match case {
        BlowupCase::Interior => rec.m_int = m,
        BlowupCase::Horizontal => rec.m_x2 = m,
        BlowupCase::Axis => rec.m_x1 = m,
        BlowupCase::Origin => rec.m_x1x2 = m,
    }
    if case == BlowupCase::Origin {
        if let Ok(f) = frequency_from(r, &s) {
            rec.d = Some(f.d);
            rec.v = Some(f.v);
            rec.h = Some(f.h);
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{half_space_cubic, ZeroField};

    #[test]
    fn cubic_closed_forms() {
        let f = half_space_cubic(true);
        let q = QuadratureSpec::default();
        let r = 0.5;
        let s = integrals(&f, Point::ORIGIN, r, &q).unwrap();
        assert!((s.energy + s.gravity_in - 0.0203125).abs() < 1e-14);
        assert!((s.j - 2.0 * r.powi(6) / 15.0).abs() < 1e-15);
        let fr = frequency(&f, r, &q).unwrap();
        assert!((fr.d - 3.0).abs() < 1e-12);
        assert!((fr.v + 1.875).abs() < 1e-12);
        assert_eq!(fr.h, fr.d - fr.v);
    }

    #[test]
    fn zero_field() {
        let q = QuadratureSpec::default();
        assert_eq!(energy_i(&ZeroField, Point::ORIGIN, 0.5, &q).unwrap(), 0.0);
        assert_eq!(boundary_j(&ZeroField, Point::ORIGIN, 0.5, &q).unwrap(), 0.0);
        assert!(matches!(
            frequency(&ZeroField, 0.5, &q),
            Err(Error::ZeroDenominator { .. })
        ));
        let rec = record(&ZeroField, Point::ORIGIN, 0.5, BlowupCase::Origin, &q).unwrap();
        assert_eq!(rec.m_x1x2, Some(0.0));
        assert_eq!(rec.d, None);
    }

    #[test]
    fn case_must_match_centre() {
        let q = QuadratureSpec::default();
        let e = monotonicity_m(&ZeroField, Point::new(1.0, 0.0), 0.5, BlowupCase::Origin, &q);
        assert!(matches!(e, Err(Error::CaseMismatch { .. })));
    }
}
