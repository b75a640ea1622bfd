//! Global solves on a mesh by Schur complement over interface values.
//!
//! Unknowns are the element coefficient vectors `u_j` and the interface
//! values `u_Γ`: `n` Chebyshev-point values per interior edge, ordered along
//! the edge from its lower-numbered vertex to the higher one. Block `pos(k)`
//! of `u_Γ` holds interior edge `k`, with `pos` from [`order_interfaces`].

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::banded::{BandedLu, BandedMatrix, DenseLu};
use crate::element::{
    boundary_points, derivative_row, edge_reference_point, outward_normal, value_row, AlmostBandedMatrix,
    CoeffVector2D, ElementOperator, FactoredElement, PdeCoefficients,
};
use crate::error::{Error, LinAlgStage, Result};
use crate::mesh::{order_interfaces, InterfaceOrdering, QuadMesh};
use crate::quadmap::Point;
use crate::ultra::cheb_points;

/// Σ systems up to this size fall back to dense LU when the banded
/// factorization fails.
const DENSE_SIGMA_LIMIT: usize = 400;

/// Pivot ratio below which Σ is declared singular.
const SIGMA_SINGULAR_RATIO: f64 = 1e-13;

/// Condition imposed on an exterior edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    /// Outward normal derivative.
    Neumann,
}

/// Geometry of an interior edge, oriented from its lower vertex to its higher one.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceEdgeGeometry {
    pub start: Point,
    pub end: Point,
    pub alpha: f64,
    pub beta: f64,
    /// The `n` Chebyshev points along the edge, from `start` to `end`.
    pub points: Vec<Point>,
}

impl InterfaceEdgeGeometry {
    pub fn new(start: Point, end: Point, n: usize) -> Result<Self> {
        let (dx, dy) = (end[0] - start[0], end[1] - start[1]);
        let len = dx.hypot(dy);
        let grid = cheb_points(n)?;
        let points = grid
            .points()
            .iter()
            .map(|&t| {
                let w = 0.5 * (1.0 + t);
                [start[0] + w * dx, start[1] + w * dy]
            })
            .collect();
        Ok(Self { start, end, alpha: dx / len, beta: dy / len, points })
    }

    /// Unit normal `(β, −α)` used for `u_z = β u_x − α u_y`.
    pub fn normal(&self) -> [f64; 2] {
        [self.beta, -self.alpha]
    }
}

/// Positions of interface values inside `u_Γ`.
#[derive(Debug, Clone)]
pub struct InterfaceLayout {
    n: usize,
    ordering: InterfaceOrdering,
}

impl InterfaceLayout {
    pub fn new(mesh: &QuadMesh, n: usize) -> Self {
        Self { n, ordering: order_interfaces(mesh) }
    }

    pub fn len(&self) -> usize {
        self.n * self.ordering.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.order.is_empty()
    }

    pub fn ordering(&self) -> &InterfaceOrdering {
        &self.ordering
    }

    /// Index in `u_Γ` of point `t` (from the lower vertex) on interior edge `k`.
    pub fn index(&self, k: usize, t: usize) -> usize {
        self.ordering.position[k] * self.n + t
    }

    pub fn half_bandwidth(&self) -> usize {
        self.ordering.sigma_bandwidth(self.n).saturating_sub(1)
    }
}

/// An element boundary row tied to an interface value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coupling {
    /// Boundary row (traversal order) of the element.
    pub boundary_row: usize,
    /// Index into `u_Γ`.
    pub gamma: usize,
}

/// `u_Γ` position of point `t` (from the start corner) of local edge `le` of quad `q`.
fn gamma_point(mesh: &QuadMesh, layout: &InterfaceLayout, q: usize, le: usize, t: usize) -> Option<usize> {
    let g = mesh.global_edge(q, le);
    let k = mesh.interior_number(g)?;
    let start = mesh.quads()[q][le];
    let n = layout.n;
    let along = if start == mesh.edge(g).vertices[0] { t } else { n - 1 - t };
    Some(layout.index(k, along))
}

/// Couplings between element `j` and interior edge `k`: every point of the
/// shared local edge except its counterclockwise end corner.
pub fn element_interface_columns(mesh: &QuadMesh, layout: &InterfaceLayout, j: usize, k: usize) -> Result<Vec<Coupling>> {
    let g = *mesh
        .interior_edges()
        .get(k)
        .ok_or_else(|| Error::Bookkeeping(format!("interior edge {k} does not exist")))?;
    let le = (0..4)
        .find(|&le| mesh.global_edge(j, le) == g)
        .ok_or_else(|| Error::Bookkeeping(format!("interior edge {k} is not an edge of element {j}")))?;
    let n = layout.n;
    Ok((0..n - 1)
        .map(|t| Coupling { boundary_row: le * (n - 1) + t, gamma: gamma_point(mesh, layout, j, le, t).unwrap() })
        .collect())
}

/// One matching condition on an interior edge.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceRow {
    /// Index into `u_Γ` (and row of `A_Γ·`).
    pub gamma: usize,
    pub continuity: bool,
    /// `(element, row over its coefficients)` for both sides.
    pub sides: [(usize, Vec<f64>); 2],
}

/// The `n` rows of `A_Γi, A_Γj` for interior edge `k`.
///
/// Normal-derivative matching everywhere, value continuity at the two
/// endpoints, except at an interior-vertex endpoint whose vertex-list entry
/// is this edge, which keeps the derivative row.
pub fn interface_matching_rows(mesh: &QuadMesh, layout: &InterfaceLayout, k: usize) -> Result<Vec<InterfaceRow>> {
    let g = *mesh
        .interior_edges()
        .get(k)
        .ok_or_else(|| Error::Bookkeeping(format!("edge {k} is not an interior edge")))?;
    let edge = mesh.edge(g);
    if !edge.is_interior() {
        return Err(Error::Bookkeeping(format!("edge {g} is on the boundary")));
    }
    let n = layout.n;
    let grid = cheb_points(n)?;
    let [lo, hi] = edge.vertices;
    let geom = InterfaceEdgeGeometry::new(mesh.vertices()[lo], mesh.vertices()[hi], n)?;
    let normal = geom.normal();
    let mut sides = edge.sides.clone();
    sides.sort();
    let keeps_derivative = |v: usize| mesh.is_interior_vertex(v) && mesh.vertex_edge(v) == Some(g);

    let mut rows = Vec::with_capacity(n);
    for along in 0..n {
        let endpoint = match along {
            0 => Some(lo),
            a if a == n - 1 => Some(hi),
            _ => None,
        };
        let continuity = endpoint.is_some_and(|v| !keeps_derivative(v));
        let mut pair = Vec::with_capacity(2);
        for (side, &(q, le)) in sides.iter().enumerate() {
            let start = mesh.quads()[q][le];
            let t = if start == lo { along } else { n - 1 - along };
            let (r, s) = edge_reference_point(le, t, grid.points());
            let sign = if side == 0 { 1.0 } else { -1.0 };
            let row = if continuity {
                value_row(r, s, n)
            } else {
                derivative_row(&mesh.element(q).map(), r, s, n, normal)?
            };
            pair.push((q, row.into_iter().map(|v| sign * v).collect::<Vec<_>>()));
        }
        let b = pair.pop().unwrap();
        let a = pair.pop().unwrap();
        rows.push(InterfaceRow { gamma: layout.index(k, along), continuity, sides: [a, b] });
    }
    Ok(rows)
}

/// Per-element data kept by the global system.
#[derive(Debug, Clone)]
struct ElementBlock {
    op: ElementOperator,
    factored: FactoredElement,
    couplings: Vec<Coupling>,
    /// Boundary rows that carry exterior data: `(row, edge, kind)`.
    exterior: Vec<(usize, usize, BcKind)>,
    /// `(row index into interface rows, dense row)` for rows touching this element.
    gamma_rows: Vec<(usize, Vec<f64>)>,
    /// `A_jj⁻¹ A_jΓ` columns, one per coupling.
    w: DMatrix<f64>,
}

#[derive(Debug, Clone)]
enum SigmaFactor {
    Empty,
    Banded(BandedLu),
    Dense(DenseLu),
}

/// Right-hand side for a mesh solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshRhs {
    /// Per element, the `(n−2)²` interior PDE entries.
    pub interior: Vec<Vec<f64>>,
    /// Per element, `4n − 4` boundary entries in traversal order. Entries of
    /// rows coupled to interfaces are ignored.
    pub boundary: Vec<Vec<f64>>,
}

/// The factored global system.
#[derive(Debug, Clone)]
pub struct SchurSystem {
    n: usize,
    mesh: QuadMesh,
    layout: InterfaceLayout,
    blocks: Vec<ElementBlock>,
    interface_rows: Vec<InterfaceRow>,
    // row scaling of the interface rows
    gamma_scales: Vec<f64>,
    sigma_dense: DMatrix<f64>,
    sigma: SigmaFactor,
}

impl SchurSystem {
    /// Assembles and factors every element operator and Σ.
    ///
    /// `kind(g)` gives the condition on exterior edge `g`.
    pub fn assemble(
        mesh: &QuadMesh,
        coeffs: &PdeCoefficients,
        n: usize,
        kind: impl Fn(usize) -> BcKind + Sync,
    ) -> Result<Self> {
        Self::assemble_pointwise(mesh, coeffs, n, |_, _, g| kind(g))
    }

    /// As [`Self::assemble`], with the condition chosen per exterior point:
    /// `kind(element, boundary_row, edge)`.
    pub fn assemble_pointwise(
        mesh: &QuadMesh,
        coeffs: &PdeCoefficients,
        n: usize,
        kind: impl Fn(usize, usize, usize) -> BcKind + Sync,
    ) -> Result<Self> {
        let layout = InterfaceLayout::new(mesh, n);
        let nq = mesh.num_elements();

        let mut interface_rows = Vec::with_capacity(layout.len());
        for k in 0..mesh.num_interior_edges() {
            interface_rows.extend(interface_matching_rows(mesh, &layout, k)?);
        }
        interface_rows.sort_by_key(|r| r.gamma);
        let gamma_scales: Vec<f64> = interface_rows
            .iter()
            .map(|r| r.sides.iter().flat_map(|(_, row)| row.iter()).fold(0.0f64, |m, v| m.max(v.abs())))
            .collect();
        if let Some(i) = gamma_scales.iter().position(|s| *s == 0.0) {
            return Err(Error::SingularStructure(format!("interface row {i} is identically zero")));
        }

        let total_rows = n * n * nq + interface_rows.len();
        let total_unknowns = n * n * nq + layout.len();
        if total_rows != total_unknowns {
            return Err(Error::Bookkeeping(format!("{total_rows} constraints for {total_unknowns} unknowns")));
        }

        let blocks: Vec<ElementBlock> = (0..nq)
            .into_par_iter()
            .map(|j| Self::element_block(mesh, &layout, coeffs, n, j, &kind, &interface_rows, &gamma_scales))
            .collect::<Result<_>>()?;

        let ng = layout.len();
        let mut sigma_dense = DMatrix::zeros(ng, ng);
        for b in &blocks {
            for (ri, row) in &b.gamma_rows {
                let rv = DVector::from_column_slice(row);
                for (c, cp) in b.couplings.iter().enumerate() {
                    sigma_dense[(*ri, cp.gamma)] -= rv.dot(&b.w.column(c));
                }
            }
        }
        let sigma = Self::factor_sigma(&sigma_dense, &layout)?;
        Ok(Self { n, mesh: mesh.clone(), layout, blocks, interface_rows, gamma_scales, sigma_dense, sigma })
    }

    #[allow(clippy::too_many_arguments)]
    fn element_block(
        mesh: &QuadMesh,
        layout: &InterfaceLayout,
        coeffs: &PdeCoefficients,
        n: usize,
        j: usize,
        kind: &(impl Fn(usize, usize, usize) -> BcKind + Sync),
        interface_rows: &[InterfaceRow],
        gamma_scales: &[f64],
    ) -> Result<ElementBlock> {
        let quad = mesh.element(j);
        let map = quad.map();
        let op = ElementOperator::assemble(coeffs, quad, n)?;
        let mut rows = Vec::with_capacity(4 * n - 4);
        let mut couplings = Vec::new();
        let mut exterior = Vec::new();
        for (b, p) in boundary_points(n)?.iter().enumerate() {
            let g = mesh.global_edge(j, p.edge);
            if mesh.interior_number(g).is_some() {
                rows.push(value_row(p.r, p.s, n));
                couplings.push(Coupling { boundary_row: b, gamma: gamma_point(mesh, layout, j, p.edge, p.offset).unwrap() });
            } else {
                let kd = kind(j, b, g);
                rows.push(match kd {
                    BcKind::Dirichlet => value_row(p.r, p.s, n),
                    BcKind::Neumann => derivative_row(&map, p.r, p.s, n, outward_normal(quad, p.edge))?,
                });
                exterior.push((b, g, kd));
            }
        }
        let bordered: AlmostBandedMatrix = op.border(rows)?;
        let factored = bordered.factor()?;

        let nn = n * n;
        let cols: Vec<Vec<f64>> = couplings
            .par_iter()
            .map(|c| {
                let slot = factored.boundary_slot(c.boundary_row);
                let mut e = vec![0.0; nn];
                e[slot] = -1.0 / factored.slot_scale(slot);
                factored.solve_slots_refined(&e)
            })
            .collect();
        let mut w = DMatrix::zeros(nn, couplings.len());
        for (c, col) in cols.iter().enumerate() {
            w.column_mut(c).copy_from_slice(col);
        }
        let gamma_rows = interface_rows
            .iter()
            .enumerate()
            .flat_map(|(ri, r)| {
                r.sides
                    .iter()
                    .filter(|(q, _)| *q == j)
                    .map(move |(_, row)| (ri, row.iter().map(|v| v / gamma_scales[ri]).collect::<Vec<_>>()))
            })
            .collect();
        Ok(ElementBlock { op, factored, couplings, exterior, gamma_rows, w })
    }

    fn factor_sigma(sigma: &DMatrix<f64>, layout: &InterfaceLayout) -> Result<SigmaFactor> {
        let ng = sigma.nrows();
        if ng == 0 {
            return Ok(SigmaFactor::Empty);
        }
        let hb = layout.half_bandwidth().min(ng - 1);
        let mut banded = BandedMatrix::zeros(ng, hb, hb);
        for i in 0..ng {
            for j in 0..ng {
                let v = sigma[(i, j)];
                if v != 0.0 {
                    if i.abs_diff(j) > hb {
                        return Err(Error::Bookkeeping(format!("Σ entry ({i}, {j}) outside the predicted band {hb}")));
                    }
                    banded.set(i, j, v);
                }
            }
        }
        let singular = |detail: String| {
            Error::GlobalSingularity(format!("{detail}; Σ is {ng}×{ng}"))
        };
        match banded.factor() {
            Ok(lu) if lu.pivot_ratio() >= SIGMA_SINGULAR_RATIO => Ok(SigmaFactor::Banded(lu)),
            Ok(lu) if ng > DENSE_SIGMA_LIMIT => Err(singular(format!("pivot ratio {:.2e}", lu.pivot_ratio()))),
            Err(e) if ng > DENSE_SIGMA_LIMIT => Err(singular(e.to_string())),
            _ => {
                let lu = DenseLu::new(sigma.clone(), LinAlgStage::Dense).map_err(|e| singular(e.to_string()))?;
                if lu.pivot_ratio() < SIGMA_SINGULAR_RATIO {
                    return Err(singular(format!("pivot ratio {:.2e}", lu.pivot_ratio())));
                }
                Ok(SigmaFactor::Dense(lu))
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mesh(&self) -> &QuadMesh {
        &self.mesh
    }

    pub fn layout(&self) -> &InterfaceLayout {
        &self.layout
    }

    /// Assembled Σ (before factorization).
    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma_dense
    }

    pub fn element_operator(&self, j: usize) -> &ElementOperator {
        &self.blocks[j].op
    }

    pub fn factored_element(&self, j: usize) -> &FactoredElement {
        &self.blocks[j].factored
    }

    pub fn couplings(&self, j: usize) -> &[Coupling] {
        &self.blocks[j].couplings
    }

    pub fn interface_rows(&self) -> &[InterfaceRow] {
        &self.interface_rows
    }

    /// Exterior boundary rows of element `j`: `(row, global edge, kind)`.
    pub fn exterior_rows(&self, j: usize) -> &[(usize, usize, BcKind)] {
        &self.blocks[j].exterior
    }

    fn sigma_solve(&self, b: &[f64]) -> Vec<f64> {
        match &self.sigma {
            SigmaFactor::Empty => Vec::new(),
            SigmaFactor::Banded(lu) => lu.solve(b),
            SigmaFactor::Dense(lu) => lu.solve(b),
        }
    }

    /// Builds the right-hand side from `f(x, y)` and exterior data `g(edge, x, y)`
    /// (values for Dirichlet edges, outward normal derivatives for Neumann ones).
    pub fn rhs_from_functions(
        &self,
        f: impl Fn(f64, f64) -> f64 + Sync,
        g: impl Fn(usize, f64, f64) -> f64 + Sync,
    ) -> Result<MeshRhs> {
        let interior = self.blocks.par_iter().map(|b| b.op.interior_rhs(&f)).collect::<Result<Vec<_>>>()?;
        let boundary = self.boundary_data(&g)?;
        Ok(MeshRhs { interior, boundary })
    }

    /// Exterior data sampled per element.
    pub fn boundary_data(&self, g: impl Fn(usize, f64, f64) -> f64) -> Result<Vec<Vec<f64>>> {
        let pts = boundary_points(self.n)?;
        Ok(self
            .blocks
            .iter()
            .map(|b| {
                let map = b.op.map();
                let mut out = vec![0.0; pts.len()];
                for &(row, edge, _) in &b.exterior {
                    let [x, y] = map.map_point(pts[row].r, pts[row].s);
                    out[row] = g(edge, x, y);
                }
                out
            })
            .collect())
    }

    fn element_slots(&self, j: usize, rhs: &MeshRhs) -> Result<Vec<f64>> {
        let b = &self.blocks[j];
        let mut full = crate::element::ElementRhs { interior: rhs.interior[j].clone(), boundary: rhs.boundary[j].clone() };
        for c in &b.couplings {
            full.boundary[c.boundary_row] = 0.0;
        }
        b.factored.matrix().rhs_slots(&full)
    }

    /// Interface solve followed by independent element back-substitutions.
    pub fn solve(&self, rhs: &MeshRhs) -> Result<Vec<CoeffVector2D>> {
        let nq = self.blocks.len();
        if rhs.interior.len() != nq || rhs.boundary.len() != nq {
            return Err(crate::error::invalid("right-hand side does not match the mesh"));
        }
        let slots: Vec<Vec<f64>> = (0..nq).map(|j| self.element_slots(j, rhs)).collect::<Result<_>>()?;
        let y: Vec<Vec<f64>> = slots
            .par_iter()
            .zip(&self.blocks)
            .map(|(s, b)| b.factored.solve_slots_refined(s))
            .collect();
        let mut rg = vec![0.0; self.layout.len()];
        for (b, yj) in self.blocks.iter().zip(&y) {
            for (ri, row) in &b.gamma_rows {
                rg[*ri] -= row.iter().zip(yj).map(|(a, c)| a * c).sum::<f64>();
            }
        }
        let u_gamma = self.sigma_solve(&rg);
        self.blocks
            .par_iter()
            .zip(slots)
            .map(|(b, mut s)| {
                for c in &b.couplings {
                    let slot = b.factored.boundary_slot(c.boundary_row);
                    s[slot] += u_gamma[c.gamma] / b.factored.slot_scale(slot);
                }
                CoeffVector2D::new(self.n, b.factored.solve_slots_refined(&s))
            })
            .collect()
    }

    /// Largest absolute residual over every scaled row of the global system,
    /// with `u_Γ` read off the solution.
    pub fn residual(&self, rhs: &MeshRhs, solution: &[CoeffVector2D]) -> Result<f64> {
        let u_gamma = self.interface_values(solution);
        let mut worst: f64 = 0.0;
        let mut gamma_res = vec![0.0; self.layout.len()];
        for (j, (b, u)) in self.blocks.iter().zip(solution).enumerate() {
            let mut res = b.factored.matrix().apply(u.data());
            let target = self.element_slots(j, rhs)?;
            for c in &b.couplings {
                let slot = b.factored.boundary_slot(c.boundary_row);
                res[slot] -= u_gamma[c.gamma] / b.factored.slot_scale(slot);
            }
            for (r, t) in res.iter().zip(&target) {
                worst = worst.max((r - t).abs());
            }
            for (ri, row) in &b.gamma_rows {
                gamma_res[*ri] += row.iter().zip(u.data()).map(|(a, c)| a * c).sum::<f64>();
            }
        }
        Ok(gamma_res.iter().fold(worst, |m, r| m.max(r.abs())))
    }

    /// Interface values from a solution (for diagnostics).
    pub fn interface_values(&self, solution: &[CoeffVector2D]) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.len()];
        let pts = boundary_points(self.n).unwrap();
        for (b, u) in self.blocks.iter().zip(solution) {
            for c in &b.couplings {
                let p = pts[c.boundary_row];
                out[c.gamma] = u.eval(p.r, p.s);
            }
        }
        out
    }

    /// The whole system as one dense matrix, unknowns `[u_1 … u_N, u_Γ]` with
    /// element coefficients in natural order, for small oracle checks.
    pub fn dense_global(&self) -> (DMatrix<f64>, usize) {
        let nn = self.n * self.n;
        let nq = self.blocks.len();
        let ng = self.layout.len();
        let dim = nn * nq + ng;
        let mut m = DMatrix::zeros(dim, dim);
        for (j, b) in self.blocks.iter().enumerate() {
            let local = b.factored.matrix().to_dense();
            m.view_mut((j * nn, j * nn), (nn, nn)).copy_from(&local);
            for c in &b.couplings {
                let slot = b.factored.boundary_slot(c.boundary_row);
                m[(j * nn + slot, nn * nq + c.gamma)] = -1.0 / b.factored.slot_scale(slot);
            }
            for (ri, row) in &b.gamma_rows {
                for (col, v) in row.iter().enumerate() {
                    m[(nn * nq + ri, j * nn + col)] += v;
                }
            }
        }
        (m, nn * nq)
    }

    /// Reference solve by dense LU of [`Self::dense_global`].
    pub fn dense_solve(&self, rhs: &MeshRhs) -> Result<Vec<CoeffVector2D>> {
        let nn = self.n * self.n;
        let (m, _) = self.dense_global();
        let mut b = DVector::zeros(m.nrows());
        for j in 0..self.blocks.len() {
            let s = self.element_slots(j, rhs)?;
            b.rows_mut(j * nn, nn).copy_from_slice(&s);
        }
        let x = m.lu().solve(&b).ok_or_else(|| Error::GlobalSingularity("dense global matrix is singular".into()))?;
        (0..self.blocks.len()).map(|j| CoeffVector2D::new(self.n, x.rows(j * nn, nn).iter().copied().collect())).collect()
    }

    /// The scaling applied to interface row `i`.
    pub fn interface_scale(&self, i: usize) -> f64 {
        self.gamma_scales[i]
    }
}

/// Samples a solution on every element's mapped tensor grid: `(x, y, u)` per point.
pub fn sample_solution(mesh: &QuadMesh, solution: &[CoeffVector2D]) -> Result<Vec<Vec<(f64, f64, f64)>>> {
    solution
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let n = u.n();
            let grid = cheb_points(n)?;
            let vals = u.to_values()?;
            let map = mesh.element(j).map();
            let mut out = Vec::with_capacity(n * n);
            for (ix, &r) in grid.points().iter().enumerate() {
                for (iy, &s) in grid.points().iter().enumerate() {
                    let [x, y] = map.map_point(r, s);
                    out.push((x, y, vals[iy + n * ix]));
                }
            }
            Ok(out)
        })
        .collect()
}
