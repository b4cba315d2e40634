use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_case, record, FunctionalRecord, QuadratureSpec};
use crate::error::{Error, Result};
use crate::field::{Field, Point};
use crate::profiles::BlowupCase;

/// Relative tolerance for calling successive values equal.
const TREND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MTrend {
    Constant,
    Nondecreasing,
    Nonincreasing,
    Mixed,
    /// Fewer than two values.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(rename = "M_trend")]
    pub m_trend: MTrend,
    #[serde(rename = "H_nondecreasing")]
    pub h_nondecreasing: Option<bool>,
    #[serde(rename = "J5_nondecreasing")]
    pub j5_nondecreasing: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusError {
    pub r: f64,
    pub message: String,
}

/// Per-radius records of a sweep, in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub case: BlowupCase,
    pub x0: Point,
    pub records: Vec<FunctionalRecord>,
    pub errors: Vec<RadiusError>,
    pub diagnostics: Diagnostics,
}

pub const CSV_HEADER: &str = "r,I,J,M_int,M_x2,M_x1,M_x1x2,D,V,H";

impl CurveTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for rec in &self.records {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{},{},{},{},{},{},{}",
                rec.r,
                rec.i,
                rec.j,
                cell(rec.m_int),
                cell(rec.m_x2),
                cell(rec.m_x1),
                cell(rec.m_x1x2),
                cell(rec.d),
                cell(rec.v),
                cell(rec.h)
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

fn trend(values: &[f64]) -> MTrend {
    if values.len() < 2 {
        return MTrend::Undetermined;
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = TREND_TOL * scale;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= tol {
        return MTrend::Constant;
    }
    let up = values.windows(2).all(|w| w[1] >= w[0] - tol);
    let down = values.windows(2).all(|w| w[1] <= w[0] + tol);
    match (up, down) {
        (true, _) => MTrend::Nondecreasing,
        (false, true) => MTrend::Nonincreasing,
        _ => MTrend::Mixed,
    }
}

fn nondecreasing(values: &[f64]) -> Option<bool> {
    if values.len() < 2 {
        return None;
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Some(values.windows(2).all(|w| w[1] >= w[0] - TREND_TOL * scale))
}

/// Evaluates the records at every radius (in parallel, output in input
/// order). Failures at single radii are collected, not fatal.
pub fn sweep(
    field: &dyn Field,
    x0: Point,
    radii: &[f64],
    case: BlowupCase,
    quad: &QuadratureSpec,
) -> Result<CurveTable> {
    check_case(x0, case)?;
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no radii".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0 && r.is_finite()))
        || radii.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidArgument(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    let results: Vec<Result<FunctionalRecord>> = radii
        .par_iter()
        .map(|&r| record(field, x0, r, case, quad))
        .collect();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (r, res) in radii.iter().zip(results) {
        match res {
            Ok(rec) => {
                if case == BlowupCase::Origin && rec.d.is_none() {
                    errors.push(RadiusError {
                        r: *r,
                        message: "J(r) vanishes; frequency undefined".into(),
                    });
                }
                records.push(rec);
            }
            Err(e) => errors.push(RadiusError {
                r: *r,
                message: e.to_string(),
            }),
        }
    }
    let ms: Vec<f64> = records.iter().filter_map(|r| r.m()).collect();
    let hs: Vec<f64> = records.iter().filter_map(|r| r.h).collect();
    let j5: Vec<f64> = records.iter().map(|r| r.j * r.r.powi(-5)).collect();
    let m_trend = trend(&ms);
    let h_nondecreasing = if case == BlowupCase::Origin {
        nondecreasing(&hs)
    } else {
        None
    };
    let j5_nondecreasing = if case == BlowupCase::Origin {
        nondecreasing(&j5)
    } else {
        None
    };
    let mut notes = Vec::new();
    if matches!(m_trend, MTrend::Nonincreasing | MTrend::Mixed) {
        notes.push("M decreases somewhere; monotonicity holds only for variational solutions".into());
    }
    if h_nondecreasing == Some(false) {
        notes.push(
            "H decreases; the frequency bound needs a variational solution vanishing in {x2 <= 0}"
                .into(),
        );
    }
    if j5_nondecreasing == Some(false) {
        notes.push("r^-5 J decreases; the field is not a variational solution vanishing in {x2 <= 0}".into());
    }
    Ok(CurveTable {
        case,
        x0,
        records,
        errors,
        diagnostics: Diagnostics {
            m_trend,
            h_nondecreasing,
            j5_nondecreasing,
            notes,
        },
    })
}

/// Intercept at `r = 0` of the least-squares line through the three
/// smallest radii.
pub fn extrapolate_to_zero(radii: &[f64], values: &[f64]) -> Result<f64> {
    if radii.len() != values.len() || radii.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two (r, value) pairs".into(),
        ));
    }
    let mut pairs: Vec<(f64, f64)> = radii.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(3);
    let n = pairs.len() as f64;
    let mr = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mr).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mr) * (p.1 - mv)).sum();
    if sxx == 0.0 {
        return Err(Error::ZeroDenominator {
            what: "spread of radii",
            value: 0.0,
        });
    }
    Ok(mv - sxy / sxx * mr)
}
