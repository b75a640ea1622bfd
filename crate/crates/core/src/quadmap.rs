//! Bilinear geometry for convex quadrilaterals.
//!
//! The reference square corners map to the quad vertices as
//! `(1,1) → v1`, `(−1,1) → v2`, `(−1,−1) → v3`, `(1,−1) → v4`, so a
//! counterclockwise quad gives a positive Jacobian determinant.
//!
//! The inverse-map derivatives are rational in `(r, s)` with denominator a
//! power of `det(r, s)`. Every coefficient here is returned multiplied through
//! by `det³`, which leaves only polynomials of low degree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly2;

pub type Point = [f64; 2];

/// Quadrilateral with counterclockwise, strictly convex vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quad {
    vertices: [Point; 4],
}

/// Cross products of consecutive edge vectors.
fn turn_crosses(v: &[Point; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        let a = v[i];
        let b = v[(i + 1) % 4];
        let c = v[(i + 2) % 4];
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        out[(i + 1) % 4] = e1[0] * e2[1] - e1[1] * e2[0];
    }
    out
}

pub fn shoelace_area(points: &[Point]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let a = points[i];
            let b = points[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

impl Quad {
    pub fn new(vertices: [Point; 4]) -> Result<Self> {
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Geometry("non-finite vertex coordinate".into()));
        }
        let area = shoelace_area(&vertices);
        if area == 0.0 {
            return Err(Error::Geometry(format!("degenerate quadrilateral {vertices:?} has zero area")));
        }
        if area < 0.0 {
            return Err(Error::Geometry(format!("quadrilateral {vertices:?} is clockwise")));
        }
        let crosses = turn_crosses(&vertices);
        if let Some(i) = crosses.iter().position(|c| *c <= 0.0) {
            return Err(Error::Geometry(format!(
                "quadrilateral {vertices:?} is not strictly convex at vertex {}",
                i + 1
            )));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point; 4] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        shoelace_area(&self.vertices)
    }

    pub fn map(&self) -> BilinearMap {
        BilinearMap::from_vertices(&self.vertices)
    }
}

/// `x = a1 + b1 r + c1 s + d1 rs`, `y = a2 + b2 r + c2 s + d2 rs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearMap {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub d1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub d2: f64,
}

impl BilinearMap {
    /// Coefficients from vertex coordinates, without any validity check.
    pub fn from_vertices(v: &[Point; 4]) -> Self {
        let coef = |k: usize| {
            let (p1, p2, p3, p4) = (v[0][k], v[1][k], v[2][k], v[3][k]);
            (
                0.25 * (p1 + p2 + p3 + p4),
                0.25 * (p1 - p2 - p3 + p4),
                0.25 * (p1 + p2 - p3 - p4),
                0.25 * (p1 - p2 + p3 - p4),
            )
        };
        let (a1, b1, c1, d1) = coef(0);
        let (a2, b2, c2, d2) = coef(1);
        Self { a1, b1, c1, d1, a2, b2, c2, d2 }
    }

    pub fn identity() -> Self {
        Self { a1: 0.0, b1: 1.0, c1: 0.0, d1: 0.0, a2: 0.0, b2: 0.0, c2: 1.0, d2: 0.0 }
    }

    pub fn map_point(&self, r: f64, s: f64) -> Point {
        [
            self.a1 + self.b1 * r + self.c1 * s + self.d1 * r * s,
            self.a2 + self.b2 * r + self.c2 * s + self.d2 * r * s,
        ]
    }

    /// Forward Jacobian `[[x_r, x_s], [y_r, y_s]]` at `(r, s)`.
    pub fn jacobian(&self, r: f64, s: f64) -> [[f64; 2]; 2] {
        [
            [self.b1 + self.d1 * s, self.c1 + self.d1 * r],
            [self.b2 + self.d2 * s, self.c2 + self.d2 * r],
        ]
    }

    pub fn det_polynomial(&self) -> DetPolynomial {
        DetPolynomial {
            constant: self.b1 * self.c2 - self.b2 * self.c1,
            r: self.b1 * self.d2 - self.b2 * self.d1,
            s: self.c2 * self.d1 - self.c1 * self.d2,
        }
    }

    /// `x(r, s)` and `y(r, s)` as polynomials.
    pub fn coordinate_polys(&self) -> (Poly2, Poly2) {
        let mut x = Poly2::with_degrees(1, 1);
        x.set(0, 0, self.a1);
        x.set(1, 0, self.b1);
        x.set(0, 1, self.c1);
        x.set(1, 1, self.d1);
        let mut y = Poly2::with_degrees(1, 1);
        y.set(0, 0, self.a2);
        y.set(1, 0, self.b2);
        y.set(0, 1, self.c2);
        y.set(1, 1, self.d2);
        (x, y)
    }

    /// `det·(r_x, r_y, s_x, s_y)`, each linear in `(r, s)`.
    pub fn cofactors(&self) -> Cofactors {
        Cofactors {
            rx: Poly2::linear(self.c2, self.d2, 0.0),
            ry: Poly2::linear(-self.c1, -self.d1, 0.0),
            sx: Poly2::linear(-self.b2, 0.0, -self.d2),
            sy: Poly2::linear(self.b1, 0.0, self.d1),
        }
    }

    /// Pointwise physical gradient weights: `u_x = wx.0 u_r + wx.1 u_s`, same for `u_y`.
    pub fn gradient_weights(&self, r: f64, s: f64) -> ([f64; 2], [f64; 2]) {
        let det = self.det_polynomial().eval(r, s);
        let rx = (self.c2 + self.d2 * r) / det;
        let ry = -(self.c1 + self.d1 * r) / det;
        let sx = -(self.b2 + self.d2 * s) / det;
        let sy = (self.b1 + self.d1 * s) / det;
        ([rx, sx], [ry, sy])
    }

    pub fn transformed_derivative_coeffs(&self) -> TransformedCoeffs {
        TransformedCoeffs::new(self)
    }
}

/// `det(r, s) = constant + r·r + s·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetPolynomial {
    pub constant: f64,
    pub r: f64,
    pub s: f64,
}

impl DetPolynomial {
    pub fn eval(&self, r: f64, s: f64) -> f64 {
        self.constant + self.r * r + self.s * s
    }

    pub fn as_poly(&self) -> Poly2 {
        Poly2::linear(self.constant, self.r, self.s)
    }

    /// Minimum over the reference square (attained at a corner).
    pub fn min_on_square(&self) -> f64 {
        self.constant - self.r.abs() - self.s.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cofactors {
    pub rx: Poly2,
    pub ry: Poly2,
    pub sx: Poly2,
    pub sy: Poly2,
}

/// Coefficients of `(u_rr, u_rs, u_ss, u_r, u_s)` in one `det³`-cleared
/// physical derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeCombination {
    pub rr: Poly2,
    pub rs: Poly2,
    pub ss: Poly2,
    pub r: Poly2,
    pub s: Poly2,
}

impl DerivativeCombination {
    fn zero() -> Self {
        Self { rr: Poly2::zero(), rs: Poly2::zero(), ss: Poly2::zero(), r: Poly2::zero(), s: Poly2::zero() }
    }

    /// Combination evaluated with given reference derivatives.
    pub fn eval(&self, r: f64, s: f64, d: &ReferenceDerivatives) -> f64 {
        self.rr.eval(r, s) * d.rr
            + self.rs.eval(r, s) * d.rs
            + self.ss.eval(r, s) * d.ss
            + self.r.eval(r, s) * d.r
            + self.s.eval(r, s) * d.s
    }

    pub fn parts(&self) -> [&Poly2; 5] {
        [&self.rr, &self.rs, &self.ss, &self.r, &self.s]
    }
}

/// Values of `u_rr, u_rs, u_ss, u_r, u_s` at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReferenceDerivatives {
    pub rr: f64,
    pub rs: f64,
    pub ss: f64,
    pub r: f64,
    pub s: f64,
}

/// `det³·u_x`, `det³·u_y`, `det³·u_xx`, `det³·u_xy`, `det³·u_yy` and `det³`
/// itself, all as polynomial combinations of reference derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedCoeffs {
    pub x: DerivativeCombination,
    pub y: DerivativeCombination,
    pub xx: DerivativeCombination,
    pub xy: DerivativeCombination,
    pub yy: DerivativeCombination,
    pub det_cubed: Poly2,
}

impl TransformedCoeffs {
    fn new(map: &BilinearMap) -> Self {
        let j = map.det_polynomial().as_poly();
        let j2 = &j * &j;
        let cof = map.cofactors();
        let (prx, pry, psx, psy) = (&cof.rx, &cof.ry, &cof.sx, &cof.sy);

        // det·∂x g and det·∂y g for a polynomial g
        let dx = |g: &Poly2| &(&g.d_r() * prx) + &(&g.d_s() * psx);
        let dy = |g: &Poly2| &(&g.d_r() * pry) + &(&g.d_s() * psy);
        // det³ · ∂(p/det) for cofactor p
        let second = |p: &Poly2, along_x: bool| {
            let (dp, dj) = if along_x { (dx(p), dx(&j)) } else { (dy(p), dy(&j)) };
            &(&dp * &j) - &(p * &dj)
        };
        let rxx = second(prx, true);
        let rxy = second(prx, false);
        let ryy = second(pry, false);
        let sxx = second(psx, true);
        let sxy = second(psx, false);
        let syy = second(psy, false);

        let first = |pr: &Poly2, ps: &Poly2| DerivativeCombination {
            r: &j2 * pr,
            s: &j2 * ps,
            ..DerivativeCombination::zero()
        };
        let hess = |a: &Poly2, b: &Poly2, c: &Poly2, d: &Poly2, nr: Poly2, ns: Poly2| DerivativeCombination {
            // u_{ab} with r_a = a/det, s_a = b/det, r_b = c/det, s_b = d/det
            rr: &j * &(a * c),
            rs: &j * &(&(a * d) + &(b * c)),
            ss: &j * &(b * d),
            r: nr,
            s: ns,
        };
        Self {
            x: first(prx, psx),
            y: first(pry, psy),
            xx: hess(prx, psx, prx, psx, rxx, sxx),
            xy: hess(prx, psx, pry, psy, rxy, sxy),
            yy: hess(pry, psy, pry, psy, ryy, syy),
            det_cubed: &j2 * &j,
        }
    }
}
