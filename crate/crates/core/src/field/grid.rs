use super::{Coefficients, Field, Point, Rect};
use crate::error::{Error, Result};

/// Outside layers filled by linear extrapolation of the sampled data.
const EXTENSION_LAYERS: usize = 3;

/// Stream function sampled on a node-centred rectangular grid.
///
/// Values are stored row by row with `x1` varying fastest. Membership in
/// `{u > 0}` and gradients are taken from a signed extension of the data:
/// nodes where the samples vanish next to the positivity set receive
/// linearly extrapolated (non-positive) values, so that the bilinear zero
/// level tracks the free boundary to second order instead of snapping to
/// cell edges.
#[derive(Debug, Clone)]
pub struct GridField {
    nx: usize,
    ny: usize,
    rect: Rect,
    dx1: f64,
    dx2: f64,
    values: Vec<f64>,
    ext: Vec<f64>,
    grad: Vec<[f64; 2]>,
    coefficients: Coefficients,
}

impl GridField {
    pub fn new(nx: usize, ny: usize, rect: Rect, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        let extent_ok = [rect.x1_min, rect.x1_max, rect.x2_min, rect.x2_max]
            .iter()
            .all(|v| v.is_finite())
            && rect.x1_min >= 0.0
            && rect.x1_max > rect.x1_min
            && rect.x2_max > rect.x2_min;
        if !extent_ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate or negative extent {rect:?}"
            )));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                nx * ny,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at node ({}, {})",
                k % nx,
                k / nx
            )));
        }
        if rect.x1_min == 0.0 {
            let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for j in 0..ny {
                if values[j * nx].abs() > 1e-12 * scale {
                    return Err(Error::InvalidArgument(format!(
                        "axis column must vanish, found {} at row {j}",
                        values[j * nx]
                    )));
                }
            }
        }
        let dx1 = (rect.x1_max - rect.x1_min) / (nx - 1) as f64;
        let dx2 = (rect.x2_max - rect.x2_min) / (ny - 1) as f64;
        let mut g = GridField {
            nx,
            ny,
            rect,
            dx1,
            dx2,
            ext: Vec::new(),
            grad: Vec::new(),
            values,
            coefficients: Coefficients::Axial,
        };
        g.ext = g.extend();
        g.grad = g.nodal_gradients();
        Ok(g)
    }

    /// Samples `field` at the nodes of an `nx x ny` grid over `rect`. A
    /// sampled axis column is set to zero. The coefficient model is copied.
    pub fn sample(field: &dyn Field, rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        let dx1 = (rect.x1_max - rect.x1_min) / (nx - 1) as f64;
        let dx2 = (rect.x2_max - rect.x2_min) / (ny - 1) as f64;
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let x2 = rect.x2_min + j as f64 * dx2;
            for i in 0..nx {
                let x1 = rect.x1_min + i as f64 * dx1;
                values.push(if x1 <= 0.0 {
                    0.0
                } else {
                    field.value_grad(Point::new(x1, x2)).0
                });
            }
        }
        Ok(GridField::new(nx, ny, rect, values)?.with_coefficients(field.coefficients()))
    }

    pub fn with_coefficients(mut self, c: Coefficients) -> Self {
        self.coefficients = c;
        self
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.rect.x1_min + i as f64 * self.dx1,
            self.rect.x2_min + j as f64 * self.dx2,
        )
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.dx1, self.dx2)
    }

    /// Extended nodal values used for the zero level set. A sampled axis
    /// column takes the values of its neighbour column so that `u = 0` on
    /// the axis does not register as a boundary.
    pub(crate) fn level_values(&self) -> Vec<f64> {
        let mut v = self.ext.clone();
        if self.rect.x1_min == 0.0 {
            for j in 0..self.ny {
                v[j * self.nx] = v[j * self.nx + 1];
            }
        }
        v
    }

    fn extend(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let axis = self.rect.x1_min == 0.0;
        let mut ext = self.values.clone();
        let mut known: Vec<bool> = self.values.iter().map(|&v| v != 0.0).collect();
        if axis {
            for j in 0..ny {
                known[j * nx] = false;
            }
        }
        let dirs: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        let first_col = usize::from(axis);
        for _ in 0..EXTENSION_LAYERS {
            let mut updates = Vec::new();
            for j in 0..ny {
                for i in first_col..nx {
                    let k = j * nx + i;
                    if known[k] {
                        continue;
                    }
                    let mut acc = 0.0;
                    let mut count = 0;
                    for (di, dj) in dirs {
                        let (i1, j1) = (i as isize + di, j as isize + dj);
                        let (i2, j2) = (i as isize + 2 * di, j as isize + 2 * dj);
                        let inside = |a: isize, b: isize| {
                            a >= first_col as isize && a < nx as isize && b >= 0 && b < ny as isize
                        };
                        if !inside(i1, j1) || !inside(i2, j2) {
                            continue;
                        }
                        let k1 = j1 as usize * nx + i1 as usize;
                        let k2 = j2 as usize * nx + i2 as usize;
                        if known[k1] && known[k2] {
                            acc += 2.0 * ext[k1] - ext[k2];
                            count += 1;
                        }
                    }
                    if count > 0 {
                        updates.push((k, (acc / count as f64).min(0.0)));
                    }
                }
            }
            if updates.is_empty() {
                break;
            }
            for (k, v) in updates {
                ext[k] = v;
                known[k] = true;
            }
        }
        ext
    }

    fn nodal_gradients(&self) -> Vec<[f64; 2]> {
        let (nx, ny) = (self.nx, self.ny);
        let e = &self.ext;
        let d = |a: f64, b: f64, c: f64, h: f64, at: usize, n: usize| -> f64 {
            // a, b, c are the values at at-1, at, at+1 (or one-sided triples)
            if at == 0 {
                (-3.0 * a + 4.0 * b - c) / (2.0 * h)
            } else if at == n - 1 {
                (a - 4.0 * b + 3.0 * c) / (2.0 * h)
            } else {
                (c - a) / (2.0 * h)
            }
        };
        let mut grad = vec![[0.0; 2]; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let gx = if nx == 2 {
                    (e[j * nx + 1] - e[j * nx]) / self.dx1
                } else {
                    let (a, b, c) = if i == 0 {
                        (e[j * nx], e[j * nx + 1], e[j * nx + 2])
                    } else if i == nx - 1 {
                        (e[j * nx + i - 2], e[j * nx + i - 1], e[j * nx + i])
                    } else {
                        (e[j * nx + i - 1], e[j * nx + i], e[j * nx + i + 1])
                    };
                    d(a, b, c, self.dx1, i, nx)
                };
                let gy = if ny == 2 {
                    (e[nx + i] - e[i]) / self.dx2
                } else {
                    let (a, b, c) = if j == 0 {
                        (e[i], e[nx + i], e[2 * nx + i])
                    } else if j == ny - 1 {
                        (e[(j - 2) * nx + i], e[(j - 1) * nx + i], e[j * nx + i])
                    } else {
                        (e[(j - 1) * nx + i], e[j * nx + i], e[(j + 1) * nx + i])
                    };
                    d(a, b, c, self.dx2, j, ny)
                };
                grad[j * nx + i] = [gx, gy];
            }
        }
        grad
    }

    /// Cell index and local coordinates in `[0, 1]^2`, clamped to the grid.
    #[inline]
    fn locate(&self, p: Point) -> (usize, usize, f64, f64) {
        let fx = ((p.x1 - self.rect.x1_min) / self.dx1).clamp(0.0, (self.nx - 1) as f64);
        let fy = ((p.x2 - self.rect.x2_min) / self.dx2).clamp(0.0, (self.ny - 1) as f64);
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        (i, j, fx - i as f64, fy - j as f64)
    }

    #[inline]
    fn bilinear(&self, data: &[f64], p: Point) -> f64 {
        let (i, j, s, t) = self.locate(p);
        let k = j * self.nx + i;
        let (a, b, c, d) = (data[k], data[k + 1], data[k + self.nx], data[k + self.nx + 1]);
        (1.0 - t) * ((1.0 - s) * a + s * b) + t * ((1.0 - s) * c + s * d)
    }

    fn interpolate(&self, data: &[f64], p: Point) -> f64 {
        if self.nx >= 4 && self.ny >= 4 {
            self.bicubic(data, p)
        } else {
            self.bilinear(data, p)
        }
    }

    /// Tensor cubic Lagrange interpolation on the 4x4 nodes around the cell
    /// (shifted inwards at the edges).
    fn bicubic(&self, data: &[f64], p: Point) -> f64 {
        let (i, j, s, t) = self.locate(p);
        let i0 = i.saturating_sub(1).min(self.nx.saturating_sub(4));
        let j0 = j.saturating_sub(1).min(self.ny.saturating_sub(4));
        let wx = cubic_weights(s + (i - i0) as f64);
        let wy = cubic_weights(t + (j - j0) as f64);
        let mut out = 0.0;
        for (b, wb) in wy.iter().enumerate() {
            let row = (j0 + b) * self.nx + i0;
            let mut acc = 0.0;
            for (a, wa) in wx.iter().enumerate() {
                acc += wa * data[row + a];
            }
            out += wb * acc;
        }
        out
    }

    #[inline]
    fn bilinear_grad(&self, p: Point) -> [f64; 2] {
        let (i, j, s, t) = self.locate(p);
        let k = j * self.nx + i;
        let g = &self.grad;
        let w = [
            (1.0 - s) * (1.0 - t),
            s * (1.0 - t),
            (1.0 - s) * t,
            s * t,
        ];
        let idx = [k, k + 1, k + self.nx, k + self.nx + 1];
        let mut out = [0.0; 2];
        for (wk, ik) in w.iter().zip(idx) {
            out[0] += wk * g[ik][0];
            out[1] += wk * g[ik][1];
        }
        out
    }
}

/// Lagrange weights for nodes 0..4 at position `x` in node units.
#[inline]
fn cubic_weights(x: f64) -> [f64; 4] {
    let (a, b, c, d) = (x, x - 1.0, x - 2.0, x - 3.0);
    [
        -b * c * d / 6.0,
        a * c * d / 2.0,
        -a * b * d / 2.0,
        a * b * c / 6.0,
    ]
}

impl Field for GridField {
    fn branch(&self, p: Point) -> (f64, [f64; 2]) {
        (self.interpolate(&self.ext, p), self.bilinear_grad(p))
    }

    fn is_positive(&self, p: Point) -> bool {
        self.bilinear(&self.ext, p) > 0.0
    }

    fn value_grad(&self, p: Point) -> (f64, [f64; 2]) {
        let e = self.bilinear(&self.ext, p);
        if e > 0.0 {
            return (self.interpolate(&self.ext, p), self.bilinear_grad(p));
        }
        // keep genuinely negative data, e.g. signed reference fields
        let v = self.bilinear(&self.values, p);
        if v < 0.0 {
            (self.interpolate(&self.values, p), self.bilinear_grad(p))
        } else {
            (0.0, [0.0, 0.0])
        }
    }

    fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    fn domain(&self) -> Option<Rect> {
        Some(self.rect)
    }

    fn spacing(&self) -> Option<f64> {
        Some(self.dx1.max(self.dx2))
    }

    fn as_grid(&self) -> Option<&GridField> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(nx: usize) -> GridField {
        let rect = Rect::new(0.0, 1.0, -1.0, 1.0);
        let mut v = Vec::new();
        let (dx1, dx2) = (1.0 / (nx - 1) as f64, 2.0 / (nx - 1) as f64);
        for j in 0..nx {
            for i in 0..nx {
                let (x1, x2) = (i as f64 * dx1, -1.0 + j as f64 * dx2);
                v.push(x1 * x1 * x2.max(0.0));
            }
        }
        GridField::new(nx, nx, rect, v).unwrap()
    }

    #[test]
    fn reproduces_nodes() {
        let g = quadratic(33);
        for &(i, j) in &[(3, 20), (10, 31), (32, 32), (5, 16)] {
            let p = g.node(i, j);
            assert_eq!(g.value_grad(p).0, g.values()[j * 33 + i]);
        }
    }

    #[test]
    fn extension_is_negative_below_the_boundary() {
        let g = quadratic(33);
        // row j = 16 is x2 = 0, the rows below are filled by extrapolation
        let k = 15 * 33 + 10;
        assert!(g.ext[k] < 0.0);
        assert!(!g.is_positive(g.node(10, 16)));
        assert!(g.is_positive(Point::new(g.node(10, 16).x1, 0.01)));
        // beyond the extension layers nothing changes
        assert_eq!(g.ext[5 * 33 + 10], 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let r = Rect::new(0.0, 1.0, 0.0, 1.0);
        assert!(GridField::new(2, 2, r, vec![0.0; 3]).is_err());
        assert!(GridField::new(2, 2, r, vec![1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(GridField::new(2, 2, r, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(GridField::new(2, 2, Rect::new(0.0, 0.0, 0.0, 1.0), vec![0.0; 4]).is_err());
    }
}
