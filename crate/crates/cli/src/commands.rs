use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use axiblow::classify::{
    classify_point, default_alphas, default_radii, growth_exponent, rescaled_profile_residual,
    GrowthReport, PointClass,
};
use axiblow::field::{velocity_at, write_axifield};
use axiblow::functionals::sweep;
use axiblow::profiles::{garabedian_profile, lookup, BlowupCase};
use axiblow::specfun::find_z0;
use axiblow::verify::run_checks;
use axiblow::{GridField, Point, Rect};
use serde::Serialize;

use crate::source::{FieldArgs, ProfileParams, QuadArgs, RadiiSpec};

/// Standard output, or a freshly created file.
fn output(path: Option<&str>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {p}"))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AngleOut {
    z0: f64,
    theta_star: f64,
    /// `2 arccos(-z0)`.
    opening: f64,
    /// `arccos(z0)`, width of the fluid sector.
    sector_angle: f64,
    boundary_slope: f64,
    c0: f64,
    stokes_opening: f64,
    residual: f64,
}

pub fn angle(json: bool, tol: f64) -> Result<()> {
    let root = find_z0(tol)?;
    let c0 = garabedian_profile()?.angular().c0;
    let out = AngleOut {
        z0: root.z0,
        theta_star: root.theta_star,
        opening: root.opening,
        sector_angle: root.sector_angle(),
        boundary_slope: root.boundary_slope(),
        c0,
        stokes_opening: 2.0 * std::f64::consts::FRAC_PI_3,
        residual: root.residual,
    };
    let mut w = output(None)?;
    if json {
        return write_json(&mut w, &out);
    }
    writeln!(w, "z0              {:.15}", out.z0)?;
    writeln!(w, "|P'(z0)|        {:.1e}", out.residual)?;
    writeln!(w, "theta*          {:.6} deg", out.theta_star.to_degrees())?;
    writeln!(w, "2 arccos(-z0)   {:.6} deg", out.opening.to_degrees())?;
    writeln!(w, "arccos(z0)      {:.6} deg (fluid sector)", out.sector_angle.to_degrees())?;
    writeln!(w, "boundary slope  {:.12}", out.boundary_slope)?;
    writeln!(w, "c0              {:.12}", out.c0)?;
    writeln!(w, "Stokes opening  {:.1} deg", out.stokes_opening.to_degrees())?;
    w.flush()?;
    Ok(())
}

fn parse_window(s: &str) -> Result<Rect> {
    let v: Vec<f64> = s
        .split(':')
        .map(|t| t.parse::<f64>().with_context(|| format!("window entry '{t}'")))
        .collect::<Result<_>>()?;
    let [a, b, c, d] = v[..] else {
        bail!("window must be x1_min:x1_max:x2_min:x2_max");
    };
    if !(a >= 0.0 && b > a && d > c) {
        bail!("window needs 0 <= x1_min < x1_max and x2_min < x2_max");
    }
    Ok(Rect::new(a, b, c, d))
}

pub fn profile(
    name: &str,
    params: &ProfileParams,
    n: usize,
    window: Option<&str>,
    out: Option<&str>,
) -> Result<()> {
    if n < 2 {
        bail!("need at least 2 nodes per side");
    }
    let p = lookup(name, &params.to_map())?;
    let rect = match window {
        Some(w) => parse_window(w)?,
        None => p.window,
    };
    let grid = GridField::sample(p.field.as_ref(), rect, n, n)?;
    let mut w = output(out)?;
    write_axifield(&mut w, &grid)?;
    w.flush()?;
    Ok(())
}

/// Radii from the flag, or defaults fitted to the field's window.
fn radii_for(spec: Option<&RadiiSpec>, field: &dyn axiblow::Field, x0: Point) -> Vec<f64> {
    match spec {
        Some(s) => s.radii(),
        None => default_radii(field, x0),
    }
}

#[derive(Serialize)]
struct CurvesDiag<'a> {
    case: BlowupCase,
    x0: Point,
    diagnostics: &'a axiblow::functionals::Diagnostics,
    errors: &'a [axiblow::functionals::RadiusError],
}

pub fn curves(
    source: &FieldArgs,
    x0: Option<Point>,
    radii: Option<&RadiiSpec>,
    quad: &QuadArgs,
    out: Option<&str>,
    diag: Option<&str>,
) -> Result<()> {
    let src = source.load()?;
    let field = src.field.as_ref();
    let x0 = x0.unwrap_or(src.base);
    let radii = radii_for(radii, field, x0);
    let q = quad.spec(field)?;
    let table = sweep(field, x0, &radii, BlowupCase::of(x0), &q)?;
    let mut w = output(out)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    let report = CurvesDiag {
        case: table.case,
        x0,
        diagnostics: &table.diagnostics,
        errors: &table.errors,
    };
    match diag {
        Some(path) => {
            let mut f = output(Some(path))?;
            write_json(&mut f, &report)?;
        }
        None => {
            let mut e = io::stderr().lock();
            write_json(&mut e, &report)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RescaleRow {
    r: f64,
    residual: f64,
}

#[derive(Serialize)]
struct Rescale {
    residuals: Vec<RescaleRow>,
    growth: GrowthReport,
}

#[derive(Serialize)]
#[serde(untagged)]
enum AnalyzeOut {
    Class {
        #[serde(flatten)]
        class: Box<PointClass>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rescale: Option<Rescale>,
    },
    Failed {
        x0: Point,
        error: String,
    },
}

pub fn analyze(
    source: &FieldArgs,
    x0: Option<Point>,
    radii: Option<&RadiiSpec>,
    quad: &QuadArgs,
    rescale: bool,
    out: Option<&str>,
) -> Result<()> {
    let src = source.load()?;
    let field = src.field.as_ref();
    let x0 = x0.unwrap_or(src.base);
    let radii = radii_for(radii, field, x0);
    let q = quad.spec(field)?;
    let report = match classify_point(field, x0, &radii, &q) {
        Ok(mut class) => {
            let rescale = if rescale && x0 != Point::ORIGIN {
                class
                    .warnings
                    .push("--rescale applies to the origin only; skipped".into());
                None
            } else if rescale {
                let res = rescaled_profile_residual(field, &radii, &q);
                let growth = growth_exponent(field, &radii, &default_alphas(), &q);
                match (res, growth) {
                    (Ok(res), Ok(growth)) => Some(Rescale {
                        residuals: radii
                            .iter()
                            .zip(res)
                            .map(|(&r, residual)| RescaleRow { r, residual })
                            .collect(),
                        growth,
                    }),
                    (Err(e), _) | (_, Err(e)) => {
                        class.warnings.push(format!("rescaling: {e}"));
                        None
                    }
                }
            } else {
                None
            };
            AnalyzeOut::Class {
                class: Box::new(class),
                rescale,
            }
        }
        Err(e) => AnalyzeOut::Failed {
            x0,
            error: e.to_string(),
        },
    };
    let mut w = output(out)?;
    write_json(&mut w, &report)
}

pub fn velocity(
    source: &FieldArgs,
    from: [f64; 3],
    to: [f64; 3],
    n: usize,
    out: Option<&str>,
) -> Result<()> {
    if n < 2 {
        bail!("need at least 2 samples");
    }
    let src = source.load()?;
    let mut w = output(out)?;
    writeln!(w, "X,Y,Z,v_X,v_Y,v_Z,warning")?;
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        let p: Vec<f64> = (0..3).map(|i| from[i] + t * (to[i] - from[i])).collect();
        let (v, warning) = match velocity_at(src.field.as_ref(), p[0], p[1], p[2]) {
            Ok(v) => (v.v, v.warning.unwrap_or_default()),
            Err(e) => ([f64::NAN; 3], e.to_string()),
        };
        writeln!(
            w,
            "{:e},{:e},{:e},{:.16e},{:.16e},{:.16e},\"{}\"",
            p[0],
            p[1],
            p[2],
            v[0],
            v[1],
            v[2],
            warning.replace('"', "'")
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the selected checks; true when every selected criterion passed.
pub fn verify(filter: Option<&str>, json: bool) -> Result<bool> {
    let results = run_checks(filter);
    if results.is_empty() {
        bail!("no check matches '{}'", filter.unwrap_or_default());
    }
    let ok = results.iter().all(|r| r.passed || !r.primary);
    let mut w = output(None)?;
    if json {
        write_json(&mut w, &results)?;
        return Ok(ok);
    }
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let note = if r.primary { "" } else { " (report)" };
        writeln!(w, "{status} {:>3} {}{note} [{:.2} s]: {}", r.id, r.name, r.seconds, r.detail)?;
    }
    let primary: Vec<_> = results.iter().filter(|r| r.primary).collect();
    let passed = primary.iter().filter(|r| r.passed).count();
    writeln!(w, "{passed}/{} criteria passed", primary.len())?;
    w.flush()?;
    Ok(ok)
}
