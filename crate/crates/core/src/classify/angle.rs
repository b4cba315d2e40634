//! Boundary directions at a point from the extracted free boundary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{extract_free_boundary, Field, GridField, Point, Rect};
use crate::specfun::RootResult;

/// Relative tolerance for slope matches.
pub const SLOPE_TOL: f64 = 0.02;
/// Absolute bound on `|slope|` (horizontal) or `|1/slope|` (vertical cusp).
pub const FLAT_TOL: f64 = 0.05;
/// Nodes per side of the grid sampled around analytic fields.
const LOCAL_NODES: usize = 257;
/// Angular gap separating two branches, radians.
const BRANCH_GAP: f64 = 0.35;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    /// Least-squares `dx2/dx1` of a line through the point.
    pub slope: f64,
    /// Least-squares `dx1/dx2`.
    pub inverse_slope: f64,
    /// Mean direction of the branch, radians from the positive `x1` axis.
    pub direction: f64,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleReport {
    pub slopes: Vec<f64>,
    pub branches: Vec<Branch>,
    #[serde(rename = "match")]
    pub label: &'static str,
    pub note: Option<String>,
}

fn local_grid(field: &dyn Field, x0: Point, reach: f64) -> Result<GridField> {
    let rect = Rect::new(
        (x0.x1 - reach).max(0.0),
        x0.x1 + reach,
        x0.x2 - reach,
        x0.x2 + reach,
    );
    GridField::sample(field, rect, LOCAL_NODES, LOCAL_NODES)
}

fn fit(points: &[(f64, f64)]) -> Branch {
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    let (mut cx, mut cy) = (0.0, 0.0);
    for &(dx, dy) in points {
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        let n = dx.hypot(dy);
        cx += dx / n;
        cy += dy / n;
    }
    Branch {
        slope: if sxx > 0.0 { sxy / sxx } else { f64::INFINITY },
        inverse_slope: if syy > 0.0 { sxy / syy } else { f64::INFINITY },
        direction: cy.atan2(cx),
        vertices: points.len(),
    }
}

/// Groups offsets from the point by polar direction.
fn branches(offsets: &[(f64, f64)]) -> Vec<Branch> {
    if offsets.is_empty() {
        return Vec::new();
    }
    let mut by_angle: Vec<(f64, (f64, f64))> =
        offsets.iter().map(|&(a, b)| (b.atan2(a), (a, b))).collect();
    by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, (f64, f64))>> = vec![vec![by_angle[0]]];
    for w in by_angle.windows(2) {
        if w[1].0 - w[0].0 > BRANCH_GAP {
            groups.push(Vec::new());
        }
        groups.last_mut().expect("non-empty").push(w[1]);
    }
    // join across the cut at +-pi
    if groups.len() > 1 {
        let first = groups[0][0].0;
        let last = groups.last().expect("non-empty").last().expect("non-empty").0;
        if first + 2.0 * std::f64::consts::PI - last <= BRANCH_GAP {
            let head = groups.remove(0);
            groups.last_mut().expect("non-empty").extend(head);
        }
    }
    groups
        .iter()
        .map(|g| fit(&g.iter().map(|p| p.1).collect::<Vec<_>>()))
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= SLOPE_TOL * b.abs()
}

/// Matches branch slopes against the boundary taxonomy: `stokes` (two
/// branches with slopes `+-1/sqrt(3)`), `garabedian` (slope
/// `tan(pi/2 - theta_star)`), `horizontal` (slope 0) and `vertical-cusp`
/// (inverse slope 0).
pub fn match_branches(branches: &[Branch], root: &RootResult) -> &'static str {
    if branches.is_empty() {
        return "none";
    }
    if branches.iter().all(|b| b.inverse_slope.abs() < FLAT_TOL) {
        return "vertical-cusp";
    }
    if branches.iter().all(|b| b.slope.abs() < FLAT_TOL) {
        return "horizontal";
    }
    let s3 = 1.0 / 3f64.sqrt();
    if branches.len() == 2 {
        let (a, b) = (branches[0].slope, branches[1].slope);
        if (close(a, s3) && close(b, -s3)) || (close(a, -s3) && close(b, s3)) {
            return "stokes";
        }
    }
    let g = root.boundary_slope();
    if branches.iter().all(|b| close(b.slope, g)) {
        return "garabedian";
    }
    "none"
}

/// Fits lines through `x0` to the free boundary within `[2h, 20h]` of it.
/// Analytic fields are first sampled on a local grid of half-width `reach`.
pub fn boundary_angle(
    field: &dyn Field,
    x0: Point,
    reach: f64,
    root: &RootResult,
) -> Result<AngleReport> {
    let owned;
    let grid = match field.as_grid() {
        Some(g) => g,
        None => {
            owned = local_grid(field, x0, reach)?;
            &owned
        }
    };
    let (dx1, dx2) = grid.steps();
    let h = dx1.max(dx2);
    let curve = match extract_free_boundary(grid, x0) {
        Ok(c) => c,
        Err(Error::EmptyCurve) => {
            return Ok(AngleReport {
                slopes: Vec::new(),
                branches: Vec::new(),
                label: "none",
                note: Some("no free boundary near the point".into()),
            })
        }
        Err(e) => return Err(e),
    };
    let offsets: Vec<(f64, f64)> = curve
        .vertices
        .iter()
        .filter(|p| {
            let d = p.dist(x0);
            (2.0 * h..=20.0 * h).contains(&d)
        })
        .map(|p| (p.x1 - x0.x1, p.x2 - x0.x2))
        .collect();
    let branches = branches(&offsets);
    let label = match_branches(&branches, root);
    let note = if branches.is_empty() {
        Some("the free boundary does not pass through the point".into())
    } else {
        None
    };
    Ok(AngleReport {
        slopes: branches.iter().map(|b| b.slope).collect(),
        branches,
        label,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::find_z0;

    fn ray(slope: f64, sign: f64) -> Vec<(f64, f64)> {
        (1..10).map(|k| (sign * k as f64, sign * slope * k as f64)).collect()
    }

    #[test]
    fn two_rays() {
        let s = 1.0 / 3f64.sqrt();
        let mut pts = ray(s, 1.0);
        pts.extend(ray(-s, -1.0));
        let b = branches(&pts);
        assert_eq!(b.len(), 2);
        let root = find_z0(1e-12).unwrap();
        assert_eq!(match_branches(&b, &root), "stokes");
    }

    #[test]
    fn branch_across_the_cut() {
        // points just above and below the negative x1 axis form one branch
        let pts = vec![(-1.0, 0.01), (-2.0, -0.02), (-3.0, 0.0)];
        let b = branches(&pts);
        assert_eq!(b.len(), 1);
        let root = find_z0(1e-12).unwrap();
        assert_eq!(match_branches(&b, &root), "horizontal");
    }

    #[test]
    fn cusp_and_garabedian() {
        let root = find_z0(1e-12).unwrap();
        let up: Vec<(f64, f64)> = (1..10).map(|k| (0.001 * k as f64, k as f64)).collect();
        assert_eq!(match_branches(&branches(&up), &root), "vertical-cusp");
        let g = ray(root.boundary_slope(), 1.0);
        assert_eq!(match_branches(&branches(&g), &root), "garabedian");
        assert_eq!(match_branches(&[], &root), "none");
    }
}
