//! Discretized operators on one quadrilateral element.
//!
//! Unknowns are bivariate Chebyshev coefficients stacked with the `s`
//! (second coordinate) degree varying fastest: index `iy + n·ix` holds the
//! coefficient of `T_ix(r) T_iy(s)`. Operator rows live in "slot" order, the
//! same indexing applied to the output: the PDE row for parameter-2 output
//! degree `(kx, ky)` sits in slot `(kx + 2, ky + 2)`, and the 4n−4 slots with
//! `ix < 2` or `iy < 2` hold the boundary rows in traversal order.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::banded::{BandedLu, BandedMatrix, DenseLu};
use crate::error::{invalid, Error, LinAlgStage, Result};
use crate::poly::Poly2;
use crate::quadmap::{BilinearMap, Point, Quad};
use crate::ultra::{
    cheb_points, cheb_values, conversion_operator, deriv_row_unchecked, diff_operator,
    mult_monomial_operator, ChebTransform, OperatorMatrix,
};

/// Pulled-back coefficient tables are trimmed below this relative magnitude.
const TABLE_TRUNCATION: f64 = 1e-14;

/// Dense rows are used for the condition number up to this many unknowns.
const DENSE_COND_LIMIT: usize = 256;

/// Coefficients of `L u = a11 u_xx + 2 a12 u_xy + a22 u_yy + b1 u_x + b2 u_y + c u`
/// as polynomials in the physical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeCoefficients {
    pub a11: Poly2,
    pub a12: Poly2,
    pub a22: Poly2,
    pub b1: Poly2,
    pub b2: Poly2,
    pub c: Poly2,
}

impl PdeCoefficients {
    pub fn laplacian() -> Self {
        Self::constant(1.0, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// `∇²u + c·u`.
    pub fn screened(c: f64) -> Self {
        Self::constant(1.0, 0.0, 1.0, 0.0, 0.0, c)
    }

    pub fn constant(a11: f64, a12: f64, a22: f64, b1: f64, b2: f64, c: f64) -> Self {
        Self {
            a11: Poly2::constant(a11),
            a12: Poly2::constant(a12),
            a22: Poly2::constant(a22),
            b1: Poly2::constant(b1),
            b2: Poly2::constant(b2),
            c: Poly2::constant(c),
        }
    }

    fn tables(&self) -> [&Poly2; 6] {
        [&self.a11, &self.a12, &self.a22, &self.b1, &self.b2, &self.c]
    }

    fn validate(&self) -> Result<()> {
        for t in self.tables() {
            if t.deg_r() > 2 || t.deg_s() > 2 {
                return Err(invalid(format!(
                    "coefficient table of degree ({}, {}) exceeds 2 per variable",
                    t.deg_r(),
                    t.deg_s()
                )));
            }
        }
        Ok(())
    }

    /// Smallest eigenvalue of `[[a11, a12], [a12, a22]]` over the mapped grid.
    ///
    /// Positive means uniformly elliptic on that sample.
    pub fn ellipticity(&self, quad: &Quad, n: usize) -> Result<f64> {
        let grid = cheb_points(n)?;
        let map = quad.map();
        let mut theta = f64::INFINITY;
        for &r in grid.points() {
            for &s in grid.points() {
                let [x, y] = map.map_point(r, s);
                let (a, b, d) = (self.a11.eval(x, y), self.a12.eval(x, y), self.a22.eval(x, y));
                let lam = 0.5 * (a + d) - (0.25 * (a - d).powi(2) + b * b).sqrt();
                theta = theta.min(lam);
            }
        }
        Ok(theta)
    }
}

/// `g(x(r, s), y(r, s))` for physical polynomial `g`.
fn pullback(g: &Poly2, x: &Poly2, y: &Poly2) -> Poly2 {
    let mut out = Poly2::zero();
    for (p, q, c) in g.terms() {
        out = &out + &(&x.powi(p) * &y.powi(q)).scale(c);
    }
    out
}

/// `det³·L` written in reference derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOperator {
    pub rr: Poly2,
    pub rs: Poly2,
    pub ss: Poly2,
    pub r: Poly2,
    pub s: Poly2,
    pub u: Poly2,
}

impl ReferenceOperator {
    pub fn new(coeffs: &PdeCoefficients, map: &BilinearMap) -> Result<Self> {
        coeffs.validate()?;
        let (x, y) = map.coordinate_polys();
        let t = map.transformed_derivative_coeffs();
        let a11 = pullback(&coeffs.a11, &x, &y);
        let a12 = pullback(&coeffs.a12, &x, &y).scale(2.0);
        let a22 = pullback(&coeffs.a22, &x, &y);
        let b1 = pullback(&coeffs.b1, &x, &y);
        let b2 = pullback(&coeffs.b2, &x, &y);
        let c = pullback(&coeffs.c, &x, &y);
        let second = |pick: fn(&crate::quadmap::DerivativeCombination) -> &Poly2| {
            &(&(&a11 * pick(&t.xx)) + &(&a12 * pick(&t.xy))) + &(&a22 * pick(&t.yy))
        };
        let first = |pick: fn(&crate::quadmap::DerivativeCombination) -> &Poly2| {
            &second(pick) + &(&(&b1 * pick(&t.x)) + &(&b2 * pick(&t.y)))
        };
        Ok(Self {
            rr: second(|d| &d.rr).truncated(TABLE_TRUNCATION),
            rs: second(|d| &d.rs).truncated(TABLE_TRUNCATION),
            ss: second(|d| &d.ss).truncated(TABLE_TRUNCATION),
            r: first(|d| &d.r).truncated(TABLE_TRUNCATION),
            s: first(|d| &d.s).truncated(TABLE_TRUNCATION),
            u: (&c * &t.det_cubed).truncated(TABLE_TRUNCATION),
        })
    }

    fn max_degree(&self) -> usize {
        [&self.rr, &self.rs, &self.ss, &self.r, &self.s, &self.u]
            .iter()
            .map(|p| p.deg_r().max(p.deg_s()))
            .max()
            .unwrap_or(0)
    }
}

/// One-dimensional factors `(x-direction, y-direction)` of each reference derivative,
/// all mapping Chebyshev coefficients into the parameter-2 basis.
struct Paths {
    rr: (OperatorMatrix, OperatorMatrix),
    rs: (OperatorMatrix, OperatorMatrix),
    ss: (OperatorMatrix, OperatorMatrix),
    r: (OperatorMatrix, OperatorMatrix),
    s: (OperatorMatrix, OperatorMatrix),
    u: (OperatorMatrix, OperatorMatrix),
}

impl Paths {
    fn new(n: usize) -> Result<Self> {
        let d1 = diff_operator(1, n)?;
        let d2 = diff_operator(2, n)?;
        let s0 = conversion_operator(0, n)?;
        let s1 = conversion_operator(1, n)?;
        let s1s0 = s1.matmul(&s0);
        let s1d1 = s1.matmul(&d1);
        Ok(Self {
            rr: (d2.clone(), s1s0.clone()),
            rs: (s1d1.clone(), s1d1.clone()),
            ss: (s1s0.clone(), d2),
            r: (s1d1.clone(), s1s0.clone()),
            s: (s1s0.clone(), s1d1),
            u: (s1s0.clone(), s1s0),
        })
    }
}

/// Applies `X ⊗ Y` to a stacked coefficient vector.
pub fn kron_apply(x: &OperatorMatrix, y: &OperatorMatrix, c: &[f64]) -> Vec<f64> {
    let n = x.cols();
    let m = y.cols();
    assert_eq!(c.len(), n * m);
    let mut tmp = vec![0.0; y.rows() * n];
    for ix in 0..n {
        let col = &c[ix * m..(ix + 1) * m];
        for ky in 0..y.rows() {
            tmp[ky + y.rows() * ix] = y.row_entries(ky).map(|(iy, v)| v * col[iy]).sum();
        }
    }
    let mut out = vec![0.0; x.rows() * y.rows()];
    for kx in 0..x.rows() {
        for (ix, v) in x.row_entries(kx) {
            for ky in 0..y.rows() {
                out[ky + y.rows() * kx] += v * tmp[ky + y.rows() * ix];
            }
        }
    }
    out
}

/// A point on the reference square boundary, owned by local edge `edge`.
///
/// Edge `e` runs from vertex `e` to vertex `e + 1` (counterclockwise) and owns
/// its starting corner but not its ending one. `offset` counts points from the
/// starting corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub edge: usize,
    pub offset: usize,
    pub r: f64,
    pub s: f64,
}

/// The 4n−4 boundary points of the tensor Chebyshev grid, edge by edge
/// counterclockwise from the `(1, 1)` corner.
pub fn boundary_points(n: usize) -> Result<Vec<BoundaryPoint>> {
    let pts = cheb_points(n)?;
    let mut out = Vec::with_capacity(4 * n - 4);
    for edge in 0..4 {
        for t in 0..n - 1 {
            let (r, s) = edge_reference_point(edge, t, pts.points());
            out.push(BoundaryPoint { edge, offset: t, r, s });
        }
    }
    Ok(out)
}

/// Reference coordinates of the `t`-th Chebyshev point along local edge
/// `edge`, counted from the edge's starting corner (`t = n − 1` is its end).
pub fn edge_reference_point(edge: usize, t: usize, points: &[f64]) -> (f64, f64) {
    let n = points.len();
    match edge {
        0 => (points[n - 1 - t], 1.0),
        1 => (-1.0, points[n - 1 - t]),
        2 => (points[t], -1.0),
        _ => (1.0, points[t]),
    }
}

/// Local edge owning a boundary point of the reference square.
pub fn owning_edge(r: f64, s: f64) -> Result<usize> {
    if r.abs() > 1.0 || s.abs() > 1.0 {
        return Err(invalid(format!("({r}, {s}) outside the reference square")));
    }
    let e = if s == 1.0 && r > -1.0 {
        0
    } else if r == -1.0 && s > -1.0 {
        1
    } else if s == -1.0 && r < 1.0 {
        2
    } else if r == 1.0 {
        3
    } else {
        return Err(invalid(format!("({r}, {s}) is not on the reference square boundary")));
    };
    Ok(e)
}

/// Physical outward unit normal of local edge `edge`.
pub fn outward_normal(quad: &Quad, edge: usize) -> [f64; 2] {
    let v = quad.vertices();
    let (a, b) = (v[edge % 4], v[(edge + 1) % 4]);
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    [dy / len, -dx / len]
}

/// Tensor row whose dot product with coefficients gives `u(r, s)`.
pub fn value_row(r: f64, s: f64, n: usize) -> Vec<f64> {
    let tr = cheb_values(r, n);
    let ts = cheb_values(s, n);
    kron_row(&tr, &ts)
}

fn kron_row(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &ai in a {
        out.extend(b.iter().map(|bj| ai * bj));
    }
    out
}

/// Row for the physical directional derivative `dir · ∇u` at `(r, s)`.
pub fn derivative_row(map: &BilinearMap, r: f64, s: f64, n: usize, dir: [f64; 2]) -> Result<Vec<f64>> {
    if r.abs() > 1.0 || s.abs() > 1.0 {
        return Err(invalid(format!("({r}, {s}) outside the reference square")));
    }
    let ([rx, sx], [ry, sy]) = map.gradient_weights(r, s);
    let wr = dir[0] * rx + dir[1] * ry;
    let ws = dir[0] * sx + dir[1] * sy;
    let tr = cheb_values(r, n);
    let ts = cheb_values(s, n);
    let dr = deriv_row_unchecked(r, n);
    let ds = deriv_row_unchecked(s, n);
    let row_r = kron_row(&dr, &ts);
    let row_s = kron_row(&tr, &ds);
    Ok(row_r.iter().zip(&row_s).map(|(a, b)| wr * a + ws * b).collect())
}

/// What a boundary row imposes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    Value,
    /// Outward normal derivative of the owning edge.
    NormalDerivative,
}

/// Dense boundary rows at points of the reference square boundary.
pub fn boundary_rows(quad: &Quad, n: usize, kind: BoundaryKind, points: &[(f64, f64)]) -> Result<Vec<Vec<f64>>> {
    let map = quad.map();
    points
        .iter()
        .map(|&(r, s)| {
            let edge = owning_edge(r, s)?;
            match kind {
                BoundaryKind::Value => Ok(value_row(r, s, n)),
                BoundaryKind::NormalDerivative => derivative_row(&map, r, s, n, outward_normal(quad, edge)),
            }
        })
        .collect()
}

/// Divides each row by its largest magnitude entry.
///
/// Returns the divisors.
pub fn row_scale(m: &mut DMatrix<f64>) -> Result<Vec<f64>> {
    let mut scales = Vec::with_capacity(m.nrows());
    for i in 0..m.nrows() {
        let s = m.row(i).amax();
        if s == 0.0 || !s.is_finite() {
            return Err(Error::SingularStructure(format!("row {i} is identically zero")));
        }
        m.row_mut(i).iter_mut().for_each(|v| *v /= s);
        scales.push(s);
    }
    Ok(scales)
}

/// Stacked Chebyshev coefficients of one scalar field on an element.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector2D {
    n: usize,
    data: Vec<f64>,
}

impl CoeffVector2D {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(invalid(format!("expected {} coefficients, got {}", n * n, data.len())));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_values(values: &[f64], n: usize) -> Result<Self> {
        let data = ChebTransform::new(n)?.vals_to_coeffs_2d(values)?;
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.data[iy + self.n * ix]
    }

    /// Value at reference point `(r, s)`.
    pub fn eval(&self, r: f64, s: f64) -> f64 {
        let tr = cheb_values(r, self.n);
        let ts = cheb_values(s, self.n);
        let mut acc = 0.0;
        for (ix, a) in tr.iter().enumerate() {
            let col = &self.data[ix * self.n..(ix + 1) * self.n];
            acc += a * col.iter().zip(&ts).map(|(c, b)| c * b).sum::<f64>();
        }
        acc
    }

    /// Values on the tensor Chebyshev grid, same stacking as the coefficients.
    pub fn to_values(&self) -> Result<Vec<f64>> {
        ChebTransform::new(self.n)?.coeffs_to_vals_2d(&self.data)
    }
}

/// Right-hand side split the way the bordered operator is: interior PDE rows
/// indexed `ky + (n−2)·kx`, then boundary rows in traversal order.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementRhs {
    pub interior: Vec<f64>,
    pub boundary: Vec<f64>,
}

impl ElementRhs {
    pub fn zeros(n: usize) -> Self {
        Self { interior: vec![0.0; (n - 2) * (n - 2)], boundary: vec![0.0; 4 * n - 4] }
    }
}

/// Slot of boundary row `b`: the `b`-th stacked index with `ix < 2` or `iy < 2`.
fn low_order_slots(n: usize) -> Vec<usize> {
    (0..n * n).filter(|&k| k % n < 2 || k / n < 2).collect()
}

fn interior_slot(n: usize, kx: usize, ky: usize) -> usize {
    (ky + 2) + n * (kx + 2)
}

/// The PDE rows of one element before bordering.
#[derive(Debug, Clone)]
pub struct ElementOperator {
    n: usize,
    quad: Quad,
    reference: ReferenceOperator,
    // interior rows in slot order; boundary slots are left empty
    interior: BandedMatrix,
    mult_det_cubed: (Vec<(usize, usize, f64)>, usize),
}

impl ElementOperator {
    pub fn assemble(coeffs: &PdeCoefficients, quad: &Quad, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(invalid(format!("element resolution n = {n} is below 4")));
        }
        let map = quad.map();
        let reference = ReferenceOperator::new(coeffs, &map)?;
        if reference.max_degree() + 2 >= n {
            return Err(invalid(format!(
                "pulled-back coefficient degree {} is too large for n = {n}",
                reference.max_degree()
            )));
        }
        let paths = Paths::new(n)?;
        let mut mono: HashMap<usize, OperatorMatrix> = HashMap::new();
        let mut monomial = |p: usize| mono.entry(p).or_insert_with(|| mult_monomial_operator(p, 2, n)).clone();

        // Every (coefficient, X, Y) triple of the operator.
        let mut terms: Vec<(f64, OperatorMatrix, OperatorMatrix)> = Vec::new();
        let groups = [
            (&reference.rr, &paths.rr),
            (&reference.rs, &paths.rs),
            (&reference.ss, &paths.ss),
            (&reference.r, &paths.r),
            (&reference.s, &paths.s),
            (&reference.u, &paths.u),
        ];
        for (table, (px, py)) in groups {
            for (p, q, c) in table.terms() {
                let x = monomial(p).matmul(px);
                let y = monomial(q).matmul(py);
                terms.push((c, x, y));
            }
        }

        // Offsets (column − slot) spanned by the interior rows.
        let m = n - 2;
        let span = |op: &OperatorMatrix| {
            let mut lo = isize::MAX;
            let mut hi = isize::MIN;
            for k in 0..m {
                for (j, _) in op.row_entries(k) {
                    lo = lo.min(j as isize - k as isize);
                    hi = hi.max(j as isize - k as isize);
                }
            }
            (lo, hi)
        };
        let ni = n as isize;
        let (mut kl, mut ku) = (0isize, 0isize);
        for (_, x, y) in &terms {
            let (xl, xh) = span(x);
            let (yl, yh) = span(y);
            if xl > xh || yl > yh {
                continue;
            }
            kl = kl.max(-((yl - 2) + ni * (xl - 2)));
            ku = ku.max((yh - 2) + ni * (xh - 2));
        }
        let mut interior = BandedMatrix::zeros(n * n, kl as usize, ku as usize);
        for (c, x, y) in &terms {
            for kx in 0..m {
                for (ix, xv) in x.row_entries(kx) {
                    let cx = c * xv;
                    for ky in 0..m {
                        let slot = interior_slot(n, kx, ky);
                        for (iy, yv) in y.row_entries(ky) {
                            interior.add_to(slot, iy + n * ix, cx * yv);
                        }
                    }
                }
            }
        }

        let det3 = map.transformed_derivative_coeffs().det_cubed;
        let det3_terms: Vec<_> = det3.terms().collect();
        let deg = det3.deg_r().max(det3.deg_s());
        Ok(Self { n, quad: *quad, reference, interior, mult_det_cubed: (det3_terms, deg) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quad(&self) -> &Quad {
        &self.quad
    }

    pub fn map(&self) -> BilinearMap {
        self.quad.map()
    }

    pub fn reference(&self) -> &ReferenceOperator {
        &self.reference
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        self.interior.bandwidths()
    }

    /// Structural nonzeros of the interior rows.
    pub fn nnz(&self) -> usize {
        (0..self.n * self.n)
            .map(|i| self.interior.row_range(i).filter(|&j| self.interior.get(i, j) != 0.0).count())
            .sum()
    }

    /// `det³·L u` in parameter-2 coefficients, interior rows only.
    pub fn apply_interior(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n;
        let full = self.interior.mul_vec(u);
        let mut out = Vec::with_capacity((n - 2) * (n - 2));
        for kx in 0..n - 2 {
            for ky in 0..n - 2 {
                out.push(full[interior_slot(n, kx, ky)]);
            }
        }
        out
    }

    /// Interior right-hand side for grid values of `f` (same stacking as the
    /// coefficients): `M₂[det³]·S₁S₀ f̂` truncated to the kept rows.
    pub fn interior_rhs_from_values(&self, values: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let coeffs = ChebTransform::new(n)?.vals_to_coeffs_2d(values)?;
        self.interior_rhs_from_coeffs(&coeffs)
    }

    pub fn interior_rhs_from_coeffs(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if coeffs.len() != n * n {
            return Err(invalid(format!("expected {} coefficients, got {}", n * n, coeffs.len())));
        }
        let s1s0 = conversion_operator(1, n)?.matmul(&conversion_operator(0, n)?);
        let converted = kron_apply(&s1s0, &s1s0, coeffs);
        let mut out = vec![0.0; n * n];
        let (terms, _) = &self.mult_det_cubed;
        for &(p, q, c) in terms {
            let x = mult_monomial_operator(p, 2, n);
            let y = mult_monomial_operator(q, 2, n);
            for (o, v) in out.iter_mut().zip(kron_apply(&x, &y, &converted)) {
                *o += c * v;
            }
        }
        let mut interior = Vec::with_capacity((n - 2) * (n - 2));
        for kx in 0..n - 2 {
            for ky in 0..n - 2 {
                interior.push(out[ky + n * kx]);
            }
        }
        Ok(interior)
    }

    /// Samples `f(x, y)` on the mapped tensor grid.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
        let grid = cheb_points(self.n)?;
        let map = self.map();
        let p = grid.points();
        let mut out = Vec::with_capacity(self.n * self.n);
        for &r in p {
            for &s in p {
                let [x, y] = map.map_point(r, s);
                out.push(f(x, y));
            }
        }
        Ok(out)
    }

    pub fn interior_rhs(&self, f: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
        self.interior_rhs_from_values(&self.sample(f)?)
    }

    /// Borders the operator with `4n − 4` dense boundary rows (traversal order).
    pub fn border(&self, boundary: Vec<Vec<f64>>) -> Result<AlmostBandedMatrix> {
        AlmostBandedMatrix::new(self, boundary)
    }

    /// Borders with Dirichlet value rows at every boundary point.
    pub fn border_dirichlet(&self) -> Result<AlmostBandedMatrix> {
        let rows = boundary_points(self.n)?.iter().map(|p| value_row(p.r, p.s, self.n)).collect();
        self.border(rows)
    }
}

/// Assembles the Dirichlet-bordered operator of one element.
pub fn assemble_element_operator(coeffs: &PdeCoefficients, quad: &Quad, n: usize) -> Result<AlmostBandedMatrix> {
    ElementOperator::assemble(coeffs, quad, n)?.border_dirichlet()
}

/// Row-scaled bordered operator `M = A + U·V`.
///
/// `A` is banded: the scaled PDE rows plus unit rows `e_slot` in the boundary
/// slots. `U` selects the boundary slots and `V_b = B_b − e_slot(b)ᵀ` where
/// `B_b` is the scaled boundary row.
#[derive(Debug, Clone)]
pub struct AlmostBandedMatrix {
    n: usize,
    banded: BandedMatrix,
    slots: Vec<usize>,
    // scaled dense boundary rows B_b
    boundary: DMatrix<f64>,
    // divisor applied to each slot's row
    scales: Vec<f64>,
}

impl AlmostBandedMatrix {
    fn new(op: &ElementOperator, boundary: Vec<Vec<f64>>) -> Result<Self> {
        let n = op.n;
        let nn = n * n;
        let k = 4 * n - 4;
        if boundary.len() != k {
            return Err(invalid(format!("expected {k} boundary rows, got {}", boundary.len())));
        }
        let slots = low_order_slots(n);
        let mut banded = op.interior.clone();
        let mut scales = vec![1.0; nn];
        for kx in 0..n - 2 {
            for ky in 0..n - 2 {
                let slot = interior_slot(n, kx, ky);
                let s = banded.row_max_abs(slot);
                if s == 0.0 || !s.is_finite() {
                    return Err(Error::SingularStructure(format!("PDE row ({kx}, {ky}) is identically zero")));
                }
                banded.scale_row(slot, 1.0 / s);
                scales[slot] = s;
            }
        }
        for &slot in &slots {
            banded.set(slot, slot, 1.0);
        }
        let mut dense = DMatrix::zeros(k, nn);
        for (b, row) in boundary.iter().enumerate() {
            if row.len() != nn {
                return Err(invalid(format!("boundary row {b} has length {}, expected {nn}", row.len())));
            }
            let s = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if s == 0.0 || !s.is_finite() {
                return Err(Error::SingularStructure(format!("boundary row {b} is identically zero")));
            }
            for (j, v) in row.iter().enumerate() {
                dense[(b, j)] = v / s;
            }
            scales[slots[b]] = s;
        }
        Ok(Self { n, banded, slots, boundary: dense, scales })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of dense rows `k = 4n − 4`.
    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn banded_part(&self) -> &BandedMatrix {
        &self.banded
    }

    pub fn boundary_slot(&self, b: usize) -> usize {
        self.slots[b]
    }

    pub fn slot_scale(&self, slot: usize) -> f64 {
        self.scales[slot]
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// `U` as an `n² × k` selector.
    pub fn u_matrix(&self) -> DMatrix<f64> {
        let mut u = DMatrix::zeros(self.n * self.n, self.rank());
        for (b, &slot) in self.slots.iter().enumerate() {
            u[(slot, b)] = 1.0;
        }
        u
    }

    /// `V = B − Uᵀ`, `k × n²`.
    pub fn v_matrix(&self) -> DMatrix<f64> {
        let mut v = self.boundary.clone();
        for (b, &slot) in self.slots.iter().enumerate() {
            v[(b, slot)] -= 1.0;
        }
        v
    }

    /// The full scaled bordered matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = self.banded.to_dense();
        for (b, &slot) in self.slots.iter().enumerate() {
            m.row_mut(slot).copy_from(&self.boundary.row(b));
        }
        m
    }

    /// `M x` in slot order.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.banded.mul_vec(x);
        let xb = nalgebra::DVector::from_column_slice(x);
        let by = &self.boundary * xb;
        for (b, &slot) in self.slots.iter().enumerate() {
            y[slot] = by[b];
        }
        y
    }

    /// Scaled slot-order vector for a split right-hand side.
    pub fn rhs_slots(&self, rhs: &ElementRhs) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.interior.len() != (n - 2) * (n - 2) || rhs.boundary.len() != self.rank() {
            return Err(invalid("right-hand side has the wrong shape"));
        }
        let mut out = vec![0.0; n * n];
        for kx in 0..n - 2 {
            for ky in 0..n - 2 {
                let slot = interior_slot(n, kx, ky);
                out[slot] = rhs.interior[ky + (n - 2) * kx] / self.scales[slot];
            }
        }
        for (b, &slot) in self.slots.iter().enumerate() {
            out[slot] = rhs.boundary[b] / self.scales[slot];
        }
        Ok(out)
    }

    pub fn factor(&self) -> Result<FactoredElement> {
        FactoredElement::new(self)
    }

    /// Infinity- and one-norm condition numbers of the scaled matrix.
    ///
    /// Exact (dense inverse) for small systems, estimated otherwise.
    pub fn condition_numbers(&self) -> Result<(f64, f64)> {
        let nn = self.n * self.n;
        if nn <= DENSE_COND_LIMIT {
            let m = self.to_dense();
            let inv = m.clone().try_inverse().ok_or_else(|| Error::LinearAlgebra {
                stage: LinAlgStage::Dense,
                detail: "bordered operator is singular".into(),
            })?;
            return Ok((norm_inf(&m) * norm_inf(&inv), norm_one(&m) * norm_one(&inv)));
        }
        let f = self.factor()?;
        let m_inf = (0..nn).map(|i| self.row_abs_sum(i)).fold(0.0, f64::max);
        let m_one = self.max_col_abs_sum();
        let inv_one = one_norm_estimate(nn, |x| f.solve_slots(x), |x| f.solve_transpose_slots(x));
        let inv_inf = one_norm_estimate(nn, |x| f.solve_transpose_slots(x), |x| f.solve_slots(x));
        Ok((m_inf * inv_inf, m_one * inv_one))
    }

    fn row_abs_sum(&self, slot: usize) -> f64 {
        match self.slots.binary_search(&slot) {
            Ok(b) => self.boundary.row(b).iter().map(|v| v.abs()).sum(),
            Err(_) => self.banded.row_range(slot).map(|j| self.banded.get(slot, j).abs()).sum(),
        }
    }

    fn max_col_abs_sum(&self) -> f64 {
        let nn = self.n * self.n;
        let mut cols = vec![0.0; nn];
        for i in 0..nn {
            if self.slots.binary_search(&i).is_ok() {
                continue;
            }
            for j in self.banded.row_range(i) {
                cols[j] += self.banded.get(i, j).abs();
            }
        }
        for b in 0..self.rank() {
            for (j, c) in cols.iter_mut().enumerate() {
                *c += self.boundary[(b, j)].abs();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn norm_one(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Hager–Higham estimate of `‖B‖₁` from products with `B` and `Bᵀ`.
pub fn one_norm_estimate(n: usize, apply: impl Fn(&[f64]) -> Vec<f64>, apply_t: impl Fn(&[f64]) -> Vec<f64>) -> f64 {
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = apply(&x);
        est = y.iter().map(|v| v.abs()).sum::<f64>();
        let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = apply_t(&xi);
        let (j, zj) = z.iter().enumerate().fold((0, 0.0), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zj <= ztx || j == last_j {
            break;
        }
        last_j = j;
        x = vec![0.0; n];
        x[j] = 1.0;
    }
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let alt_est = 2.0 * apply(&alt).iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    est.max(alt_est)
}

/// Banded LU of `A` plus the factored capacitance matrix `I + V A⁻¹ U`.
///
/// Immutable once built; solves with distinct right-hand sides may run
/// concurrently.
#[derive(Debug, Clone)]
pub struct FactoredElement {
    n: usize,
    lu: BandedLu,
    // A⁻¹U, n² × k
    z: DMatrix<f64>,
    v: DMatrix<f64>,
    cap: DenseLu,
    slots: Vec<usize>,
    scales: Vec<f64>,
    matrix: AlmostBandedMatrix,
}

impl FactoredElement {
    fn new(m: &AlmostBandedMatrix) -> Result<Self> {
        let nn = m.n * m.n;
        let k = m.rank();
        let lu = m.banded.factor()?;
        let cols: Vec<Vec<f64>> = m
            .slots
            .par_iter()
            .map(|&slot| {
                let mut e = vec![0.0; nn];
                e[slot] = 1.0;
                lu.solve_in_place(&mut e);
                e
            })
            .collect();
        let mut z = DMatrix::zeros(nn, k);
        for (b, c) in cols.iter().enumerate() {
            z.column_mut(b).copy_from_slice(c);
        }
        let v = m.v_matrix();
        let cap_matrix = DMatrix::identity(k, k) + &v * &z;
        let cap = DenseLu::new(cap_matrix, LinAlgStage::Capacitance)?;
        Ok(Self { n: m.n, lu, z, v, cap, slots: m.slots.clone(), scales: m.scales.clone(), matrix: m.clone() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &AlmostBandedMatrix {
        &self.matrix
    }

    /// Solves `M x = b` for a scaled slot-order `b`.
    pub fn solve_slots(&self, b: &[f64]) -> Vec<f64> {
        let y = self.lu.solve(b);
        let vy = &self.v * nalgebra::DVector::from_column_slice(&y);
        let w = self.cap.solve(vy.as_slice());
        let zw = &self.z * nalgebra::DVector::from_column_slice(&w);
        y.iter().zip(zw.iter()).map(|(a, c)| a - c).collect()
    }

    /// Solves `Mᵀ x = b`.
    pub fn solve_transpose_slots(&self, b: &[f64]) -> Vec<f64> {
        let y = self.lu.solve_transpose(b);
        let ys: Vec<f64> = self.slots.iter().map(|&s| y[s]).collect();
        let w = self.cap.solve_transpose(&ys);
        let vtw = self.v.transpose() * nalgebra::DVector::from_column_slice(&w);
        let rhs: Vec<f64> = b.iter().zip(vtw.iter()).map(|(a, c)| a - c).collect();
        self.lu.solve_transpose(&rhs)
    }

    /// Woodbury solve followed by one step of iterative refinement.
    pub fn solve_slots_refined(&self, b: &[f64]) -> Vec<f64> {
        let mut x = self.solve_slots(b);
        let r: Vec<f64> = b.iter().zip(self.matrix.apply(&x)).map(|(a, c)| a - c).collect();
        let dx = self.solve_slots(&r);
        x.iter_mut().zip(dx).for_each(|(a, d)| *a += d);
        x
    }

    pub fn solve(&self, rhs: &ElementRhs) -> Result<CoeffVector2D> {
        let b = self.matrix.rhs_slots(rhs)?;
        CoeffVector2D::new(self.n, self.solve_slots_refined(&b))
    }

    pub fn boundary_slot(&self, b: usize) -> usize {
        self.slots[b]
    }

    pub fn slot_scale(&self, slot: usize) -> f64 {
        self.scales[slot]
    }
}

/// Solves `L u = f` on one element with `u = g` on its boundary.
pub fn solve_element_dirichlet(
    coeffs: &PdeCoefficients,
    quad: &Quad,
    n: usize,
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
) -> Result<CoeffVector2D> {
    let op = ElementOperator::assemble(coeffs, quad, n)?;
    let m = op.border_dirichlet()?;
    let factored = m.factor()?;
    let map = quad.map();
    let boundary = boundary_points(n)?
        .iter()
        .map(|p| {
            let [x, y] = map.map_point(p.r, p.s);
            g(x, y)
        })
        .collect();
    let rhs = ElementRhs { interior: op.interior_rhs(f)?, boundary };
    factored.solve(&rhs)
}

/// Physical location of a reference point.
pub fn physical_point(quad: &Quad, r: f64, s: f64) -> Point {
    quad.map().map_point(r, s)
}
