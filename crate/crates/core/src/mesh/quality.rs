//! Inradius, minimum enclosing radius and skinniness.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::QuadMesh;
use crate::error::{Error, Result};
use crate::quadmap::{Point, Quad};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementQuality {
    pub r_in: f64,
    pub r_out: f64,
    pub skinniness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshQuality {
    pub elements: Vec<ElementQuality>,
}

impl MeshQuality {
    pub fn min_skinniness(&self) -> f64 {
        self.elements.iter().map(|e| e.skinniness).fold(f64::INFINITY, f64::min)
    }

    pub fn median_skinniness(&self) -> f64 {
        let mut s: Vec<f64> = self.elements.iter().map(|e| e.skinniness).collect();
        s.sort_by(f64::total_cmp);
        let m = s.len();
        if m == 0 {
            return f64::NAN;
        }
        if m % 2 == 1 {
            s[m / 2]
        } else {
            0.5 * (s[m / 2 - 1] + s[m / 2])
        }
    }
}

/// Radius of the largest inscribed circle of a convex counterclockwise polygon.
///
/// Solved as the Chebyshev-centre LP `max r` s.t. `nᵢ·p + r ≤ hᵢ`; the
/// optimum has three active constraints, so every edge triple is tried.
pub fn inradius(poly: &[Point]) -> Result<f64> {
    let m = poly.len();
    let mut normals = Vec::with_capacity(m);
    let scale = poly.iter().flat_map(|p| p.iter()).fold(0.0f64, |a, c| a.max(c.abs())).max(f64::MIN_POSITIVE);
    for i in 0..m {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = dx.hypot(dy);
        if len == 0.0 {
            return Err(Error::Geometry("repeated polygon vertex".into()));
        }
        let nrm = [dy / len, -dx / len];
        let c = poly[(i + 2) % m];
        let cross = dx * (c[1] - a[1]) - dy * (c[0] - a[0]);
        if cross <= 0.0 {
            return Err(Error::Geometry("polygon is not strictly convex and counterclockwise".into()));
        }
        normals.push((nrm, nrm[0] * a[0] + nrm[1] * a[1]));
    }
    let feasible = |p: [f64; 2], r: f64| normals.iter().all(|(nrm, h)| nrm[0] * p[0] + nrm[1] * p[1] + r <= h + 1e-12 * scale);
    let mut best: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rows = [normals[i], normals[j], normals[k]];
                let a = Matrix3::from_fn(|row, col| if col < 2 { rows[row].0[col] } else { 1.0 });
                let h = Vector3::new(rows[0].1, rows[1].1, rows[2].1);
                if let Some(sol) = a.lu().solve(&h) {
                    let (p, r) = ([sol[0], sol[1]], sol[2]);
                    if r.is_finite() && r > best && feasible(p, r) {
                        best = r;
                    }
                }
            }
        }
    }
    if best <= 0.0 {
        return Err(Error::Geometry("degenerate polygon has no interior".into()));
    }
    Ok(best)
}

/// Radius of the smallest circle containing all points.
pub fn min_enclosing_radius(points: &[Point]) -> f64 {
    let d = |a: Point, b: Point| (a[0] - b[0]).hypot(a[1] - b[1]);
    let contains = |c: Point, r: f64| points.iter().all(|&p| d(p, c) <= r * (1.0 + 1e-12) + 1e-300);
    let mut best = f64::INFINITY;
    let m = points.len();
    for i in 0..m {
        for j in i + 1..m {
            let c = [(points[i][0] + points[j][0]) / 2.0, (points[i][1] + points[j][1]) / 2.0];
            let r = d(points[i], points[j]) / 2.0;
            if r < best && contains(c, r) {
                best = r;
            }
            for k in j + 1..m {
                if let Some((c, r)) = circumcircle(points[i], points[j], points[k]) {
                    if r < best && contains(c, r) {
                        best = r;
                    }
                }
            }
        }
    }
    best
}

fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let dd = 2.0 * (bx * cy - by * cx);
    if dd == 0.0 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / dd;
    let uy = (bx * c2 - cx * b2) / dd;
    let r = ux.hypot(uy);
    r.is_finite().then_some(([a[0] + ux, a[1] + uy], r))
}

pub fn element_quality(quad: &Quad) -> Result<ElementQuality> {
    let v = quad.vertices();
    let r_in = inradius(v)?;
    let r_out = min_enclosing_radius(v);
    Ok(ElementQuality { r_in, r_out, skinniness: r_in / r_out })
}

pub fn quality(mesh: &QuadMesh) -> Result<MeshQuality> {
    let elements = mesh.elements().iter().map(element_quality).collect::<Result<_>>()?;
    Ok(MeshQuality { elements })
}
