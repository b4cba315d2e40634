//! Classification of a point: scaling case, homogeneity degree, limiting
//! density against the menu of admissible values, and the shape of the free
//! boundary through the point.

mod angle;
mod growth;
mod menu;

use serde::Serialize;

pub use angle::{boundary_angle, match_branches, AngleReport, Branch, FLAT_TOL, SLOPE_TOL};
pub use growth::{
    default_alphas, growth_exponent, rescaled_profile_residual, AlphaRow, GrowthReport,
    GrowthVerdict, BOUNDED_BAND,
};
pub use menu::{density_menu, garabedian_density, DensityMenu, MenuEntry, MATCH_TOL};

use crate::error::{Error, Result};
use crate::field::{Field, Point};
use crate::functionals::{extrapolate_to_zero, integrals, sweep, Diagnostics, QuadratureSpec, J_FLOOR};
use crate::profiles::{BlowupCase, AXIS_TOL};
use crate::specfun;

/// Exponent `kappa` of the invariant scaling `u(x0 + r x) / r^kappa`.
pub fn scaling_exponent(x0: Point) -> f64 {
    BlowupCase::with_tolerance(x0, AXIS_TOL).kappa()
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn regression_slope(points: &[(f64, f64)]) -> Result<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::ZeroDenominator {
            what: "spread of log radii",
            value: sxx,
        });
    }
    Ok(sxy / sxx)
}

/// Degree `lambda` of a field homogeneous about `x0`, from the slope of
/// `log J(r)` against `log r`. `J` scales as `r^(2 lambda)` when the weight
/// is singular at `x0` (centres on the axis) and as `r^(2 lambda + 1)` when it
/// is bounded there.
pub fn homogeneity_degree(
    field: &dyn Field,
    x0: Point,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("need at least two radii".into()));
    }
    let mut logs = Vec::with_capacity(radii.len());
    for &r in radii {
        let j = integrals(field, x0, r, quad)?.j;
        if j <= J_FLOOR {
            return Err(Error::ZeroDenominator { what: "J(r)", value: j });
        }
        logs.push((r.ln(), j.ln()));
    }
    let d = if field.coefficients().is_frozen() || x0.x1 > AXIS_TOL {
        1.0
    } else {
        0.0
    };
    Ok((regression_slope(&logs)? - d) / 2.0)
}

/// Radii for [`classify_point`]: eight geometric steps up to the largest
/// half-disc about `x0` inside the field's window (or 1/2 for analytic fields
/// without one), down to an eighth of it.
pub fn default_radii(field: &dyn Field, x0: Point) -> Vec<f64> {
    let reach = match field.domain() {
        Some(d) => {
            let mut r = (d.x1_max - x0.x1)
                .min(x0.x2 - d.x2_min)
                .min(d.x2_max - x0.x2);
            if x0.x1 - d.x1_min < r && d.x1_min > 0.0 {
                r = x0.x1 - d.x1_min;
            }
            0.95 * r
        }
        None => 0.5,
    };
    let lo = reach / 8.0;
    (0..8)
        .map(|k| lo * (reach / lo).powf(k as f64 / 7.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointClass {
    pub x0: Point,
    pub case: BlowupCase,
    pub kappa: f64,
    #[serde(rename = "M0")]
    pub m0: Option<f64>,
    /// Matched menu label, or `"ambiguous"`.
    pub matched: String,
    pub menu: DensityMenu,
    pub degree_est: Option<f64>,
    pub angle: AngleReport,
    pub diagnostics: Option<Diagnostics>,
    pub warnings: Vec<String>,
}

/// Runs the whole pipeline at `x0`. Failures of single stages are recorded
/// as warnings; only a bad point or menu is an error.
pub fn classify_point(
    field: &dyn Field,
    x0: Point,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<PointClass> {
    if !(x0.x1 >= 0.0 && x0.x1.is_finite() && x0.x2.is_finite()) {
        return Err(Error::OutOfDomain { x1: x0.x1, x2: x0.x2 });
    }
    if let Some(d) = field.domain() {
        if !d.contains(x0) {
            return Err(Error::OutOfDomain { x1: x0.x1, x2: x0.x2 });
        }
    }
    let case = BlowupCase::of(x0);
    let menu = density_menu(case, x0)?;
    let root = specfun::find_z0(1e-12)?;
    let mut warnings = Vec::new();

    let (m0, diagnostics) = match sweep(field, x0, radii, case, quad) {
        Ok(table) => {
            for e in &table.errors {
                warnings.push(format!("r = {}: {}", e.r, e.message));
            }
            warnings.extend(table.diagnostics.notes.iter().cloned());
            let (rs, ms): (Vec<f64>, Vec<f64>) = table
                .records
                .iter()
                .filter_map(|rec| rec.m().map(|m| (rec.r, m)))
                .unzip();
            let m0 = match extrapolate_to_zero(&rs, &ms) {
                Ok(m) => Some(m),
                Err(e) => {
                    warnings.push(format!("density extrapolation: {e}"));
                    None
                }
            };
            (m0, Some(table.diagnostics))
        }
        Err(e) => {
            warnings.push(format!("sweep: {e}"));
            (None, None)
        }
    };

    let matched = match m0.and_then(|m| menu.matching(m)) {
        Some(entry) => entry.label.to_string(),
        None => "ambiguous".to_string(),
    };
    if matched == "zero" {
        warnings.push(
            "zero density: excluded for solutions satisfying the sharp Bernstein inequality, \
             which is not checked here"
                .into(),
        );
    }

    let degree_est = match homogeneity_degree(field, x0, radii, quad) {
        Ok(d) => Some(d),
        Err(e) => {
            warnings.push(format!("homogeneity degree: {e}"));
            None
        }
    };

    let reach = radii.iter().copied().fold(0.0, f64::max);
    let angle = match boundary_angle(field, x0, reach, &root) {
        Ok(a) => a,
        Err(e) => {
            warnings.push(format!("boundary angle: {e}"));
            AngleReport {
                slopes: Vec::new(),
                branches: Vec::new(),
                label: "none",
                note: None,
            }
        }
    };
    if let Some(note) = &angle.note {
        warnings.push(note.clone());
    }

    Ok(PointClass {
        x0,
        case,
        kappa: case.kappa(),
        m0,
        matched,
        menu,
        degree_est,
        angle,
        diagnostics,
        warnings,
    })
}
