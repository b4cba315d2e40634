//! Zero level set of a grid field by marching squares.

use std::collections::HashMap;

use serde::Serialize;

use super::{GridField, Point};
use crate::error::{Error, Result};

/// Polyline approximating a connected piece of the free boundary.
#[derive(Debug, Clone, Serialize)]
pub struct FreeBoundaryCurve {
    pub vertices: Vec<Point>,
    /// Index of the vertex closest to the query point.
    pub anchor: usize,
    pub closed: bool,
}

type EdgeId = usize;

struct Segment {
    edges: [EdgeId; 2],
    points: [Point; 2],
}

fn crossing(a: Point, va: f64, b: Point, vb: f64) -> Point {
    let t = va / (va - vb);
    Point::new(a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2))
}

fn segments(grid: &GridField) -> Vec<Segment> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let v = grid.level_values();
    let h_edge = |i: usize, j: usize| 2 * (j * nx + i);
    let v_edge = |i: usize, j: usize| 2 * (j * nx + i) + 1;
    let mut out = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [
                (grid.node(i, j), v[j * nx + i]),
                (grid.node(i + 1, j), v[j * nx + i + 1]),
                (grid.node(i + 1, j + 1), v[(j + 1) * nx + i + 1]),
                (grid.node(i, j + 1), v[(j + 1) * nx + i]),
            ];
            let pos = c.map(|(_, val)| val > 0.0);
            if pos.iter().all(|&p| p) || pos.iter().all(|&p| !p) {
                continue;
            }
            // edges: 0 bottom, 1 right, 2 top, 3 left; edge k joins corners k and k+1
            let ids = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let cut: Vec<usize> = (0..4).filter(|&k| pos[k] != pos[(k + 1) % 4]).collect();
            let point = |k: usize| {
                let (a, va) = c[k];
                let (b, vb) = c[(k + 1) % 4];
                crossing(a, va, b, vb)
            };
            let mut push = |k: usize, l: usize| {
                out.push(Segment {
                    edges: [ids[k], ids[l]],
                    points: [point(k), point(l)],
                })
            };
            if cut.len() == 2 {
                push(cut[0], cut[1]);
            } else {
                // saddle: decide by the cell average
                let centre_pos = c.iter().map(|(_, val)| val).sum::<f64>() > 0.0;
                // corner k is cut off by edges k-1 (entering) and k
                let isolate = |k: usize| ((k + 3) % 4, k);
                let corners: Vec<usize> = (0..4).filter(|&k| pos[k] != centre_pos).collect();
                for k in corners {
                    let (a, b) = isolate(k);
                    push(a, b);
                }
            }
        }
    }
    out
}

fn link(segs: &[Segment]) -> Vec<(Vec<Point>, bool)> {
    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (s, seg) in segs.iter().enumerate() {
        for e in seg.edges {
            by_edge.entry(e).or_default().push(s);
        }
    }
    let mut used = vec![false; segs.len()];
    let mut curves = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        // walk forward from edges[1], then backward from edges[0]
        let mut forward = vec![segs[start].points[0], segs[start].points[1]];
        let mut closed = false;
        let walk = |from_edge: EdgeId, pts: &mut Vec<Point>, used: &mut Vec<bool>| -> bool {
            let mut edge = from_edge;
            loop {
                let next = by_edge
                    .get(&edge)
                    .and_then(|l| l.iter().copied().find(|&s| !used[s]));
                let Some(s) = next else {
                    return false;
                };
                used[s] = true;
                let seg = &segs[s];
                let (other_edge, other_pt) = if seg.edges[0] == edge {
                    (seg.edges[1], seg.points[1])
                } else {
                    (seg.edges[0], seg.points[0])
                };
                if other_edge == segs[start].edges[0] {
                    return true;
                }
                pts.push(other_pt);
                edge = other_edge;
            }
        };
        if walk(segs[start].edges[1], &mut forward, &mut used) {
            closed = true;
        }
        if !closed {
            let mut backward = Vec::new();
            walk(segs[start].edges[0], &mut backward, &mut used);
            backward.reverse();
            backward.extend(forward);
            forward = backward;
        }
        curves.push((forward, closed));
    }
    curves
}

/// All connected pieces of the zero level set of `grid`.
pub fn free_boundary_components(grid: &GridField) -> Vec<FreeBoundaryCurve> {
    link(&segments(grid))
        .into_iter()
        .map(|(vertices, closed)| FreeBoundaryCurve {
            vertices,
            anchor: 0,
            closed,
        })
        .collect()
}

/// The piece of `partial {u > 0}` closest to `query`, as a polyline with
/// consecutive vertices in adjacent cells.
pub fn extract_free_boundary(grid: &GridField, query: Point) -> Result<FreeBoundaryCurve> {
    let mut best: Option<(f64, FreeBoundaryCurve)> = None;
    for mut curve in free_boundary_components(grid) {
        let (k, d) = curve
            .vertices
            .iter()
            .enumerate()
            .map(|(k, p)| (k, p.dist(query)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        curve.anchor = k;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, curve));
        }
    }
    best.map(|(_, c)| c).ok_or(Error::EmptyCurve)
}
