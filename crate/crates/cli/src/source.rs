//! Where a command's field comes from: an AXIFIELD file or a named profile.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use axiblow::functionals::{QuadratureSpec, Rule};
use axiblow::profiles::lookup;
use axiblow::{Field, GridField, Point};
use clap::Args;

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// AXIFIELD file to read.
    #[arg(long, conflicts_with = "profile")]
    pub field: Option<String>,
    /// Named analytic profile (see `axiblow profile --help`).
    #[arg(long)]
    pub profile: Option<String>,
    #[command(flatten)]
    pub params: ProfileParams,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProfileParams {
    /// Base point distance to the axis (stokes, halfplane).
    #[arg(long)]
    pub x1: Option<f64>,
    /// Base point height (halfplane).
    #[arg(long)]
    pub x2: Option<f64>,
    /// Amplitude of the axis profile.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Height of the axis point (axis).
    #[arg(long)]
    pub b: Option<f64>,
    /// Direction of the half-plane normal from the x2 axis, radians.
    #[arg(long)]
    pub angle: Option<f64>,
}

impl ProfileParams {
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        let pairs = [
            ("x1", self.x1),
            ("x2", self.x2),
            ("gamma", self.gamma),
            ("b", self.b),
            ("angle", self.angle),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

pub struct Source {
    pub field: Arc<dyn Field>,
    /// The profile's base point, or the origin for files.
    pub base: Point,
}

impl FieldArgs {
    pub fn load(&self) -> Result<Source> {
        match (&self.field, &self.profile) {
            (Some(path), None) => {
                if !self.params.to_map().is_empty() {
                    bail!("profile parameters need --profile");
                }
                let grid = GridField::load(path).with_context(|| format!("reading {path}"))?;
                Ok(Source {
                    field: Arc::new(grid),
                    base: Point::ORIGIN,
                })
            }
            (None, Some(name)) => {
                let p = lookup(name, &self.params.to_map())?;
                Ok(Source {
                    field: p.field,
                    base: p.base,
                })
            }
            _ => bail!("give exactly one of --field or --profile"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Quadrature rule: gauss or midpoint.
    #[arg(long)]
    pub rule: Option<Rule>,
    #[arg(long)]
    pub n_rho: Option<usize>,
    #[arg(long)]
    pub n_theta: Option<usize>,
}

impl QuadArgs {
    pub fn spec(&self, field: &dyn Field) -> Result<QuadratureSpec> {
        let d = QuadratureSpec::for_field(field);
        Ok(QuadratureSpec::new(
            self.n_rho.unwrap_or(d.n_rho),
            self.n_theta.unwrap_or(d.n_theta),
            self.rule.unwrap_or(d.rule),
            d.axis_offset,
        )?)
    }
}

pub fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x1,x2, got '{s}'"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    Ok(Point::new(num(parts[0])?, num(parts[1])?))
}

pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| format!("expected X,Y,Z, got '{s}'"))
}

/// Radii from `min:max:count[:log|:lin]`, spaced linearly unless `log`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiiSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl std::str::FromStr for RadiiSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected min:max:count[:log], got '{s}'"));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let (min, max) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2].parse().map_err(|e| format!("'{}': {e}", parts[2]))?;
        let log = match parts.get(3) {
            None | Some(&"lin") => false,
            Some(&"log") => true,
            Some(other) => return Err(format!("spacing must be log or lin, got '{other}'")),
        };
        if !(min > 0.0 && max > min && max.is_finite()) {
            return Err("radii need 0 < min < max".into());
        }
        if count < 2 {
            return Err("need at least two radii".into());
        }
        Ok(RadiiSpec {
            min,
            max,
            count,
            log,
        })
    }
}

impl RadiiSpec {
    pub fn radii(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / last;
                if self.log {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + (self.max - self.min) * t
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_specs() {
        let r: RadiiSpec = "0.1:0.4:4".parse().unwrap();
        let v = r.radii();
        assert_eq!(v.len(), 4);
        assert!((v[1] - 0.2).abs() < 1e-15);
        let r: RadiiSpec = "0.01:1:3:log".parse().unwrap();
        assert!((r.radii()[1] - 0.1).abs() < 1e-15);
        assert!("0.4:0.1:4".parse::<RadiiSpec>().is_err());
        assert!("0.1:0.4".parse::<RadiiSpec>().is_err());
        assert!("0.1:0.4:1".parse::<RadiiSpec>().is_err());
        assert!("0.1:0.4:4:cubic".parse::<RadiiSpec>().is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("1, -0.5").unwrap(), Point::new(1.0, -0.5));
        assert!(parse_point("1").is_err());
        assert_eq!(parse_triple("1,2,3").unwrap(), [1.0, 2.0, 3.0]);
        assert!(parse_triple("1,2").is_err());
    }
}
