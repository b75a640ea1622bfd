//! First-order projection stepping for 2D incompressible flow.
//!
//! Density and viscosity are 1. Each step solves
//!
//! ```text
//! ∇²u* − u*/Δt = (uⁿ·∇)uⁿ − uⁿ/Δt      componentwise, velocity conditions
//! ∇²p = ∇·u*/Δt                        ∂p/∂n = 0 except at outlets
//! uⁿ⁺¹ = u* − Δt ∇p
//! ```

use rayon::prelude::*;

use crate::element::{boundary_points, CoeffVector2D, PdeCoefficients};
use crate::error::{invalid, Error, Result};
use crate::mesh::{quality, MeshFile, QuadMesh};
use crate::quadmap::BilinearMap;
use crate::schur::{BcKind, MeshRhs, SchurSystem};
use crate::ultra::{cheb_points, ChebTransform};

/// Condition on one exterior edge of a wind tunnel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TunnelEdge {
    /// Fixed velocity, zero pressure gradient.
    Inlet { velocity: [f64; 2] },
    /// Fixed pressure, zero velocity gradient.
    Outlet { pressure: f64 },
    /// Free slip on an axis-aligned wall.
    Wall,
    /// No slip.
    Object,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WallAxis {
    Horizontal,
    Vertical,
}

/// Labels of every exterior edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TunnelBoundary {
    // indexed by global edge; `None` for interior edges
    labels: Vec<Option<TunnelEdge>>,
    axes: Vec<Option<WallAxis>>,
}

impl TunnelBoundary {
    pub fn new(mesh: &QuadMesh, label: impl Fn(usize) -> Option<TunnelEdge>) -> Result<Self> {
        let ne = mesh.edges().len();
        let mut labels = vec![None; ne];
        let mut axes = vec![None; ne];
        for g in mesh.boundary_edges() {
            let l = label(g).ok_or_else(|| invalid(format!("boundary edge {g} has no tunnel label")))?;
            if l == TunnelEdge::Wall {
                let [a, b] = mesh.edge(g).vertices;
                let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
                let (dx, dy) = ((pb[0] - pa[0]).abs(), (pb[1] - pa[1]).abs());
                let tol = 1e-12 * dx.hypot(dy);
                axes[g] = Some(if dy <= tol {
                    WallAxis::Horizontal
                } else if dx <= tol {
                    WallAxis::Vertical
                } else {
                    return Err(invalid(format!("free-slip wall edge {g} is not axis-aligned")));
                });
            }
            labels[g] = Some(l);
        }
        Ok(Self { labels, axes })
    }

    /// Reads `inlet ux uy`, `outlet p`, `wall` and `object` tags of a mesh file.
    pub fn from_tags(mesh: &QuadMesh, file: &MeshFile) -> Result<Self> {
        let mut parsed = vec![None; mesh.edges().len()];
        for tag in &file.tags {
            let [a, b] = tag.vertices;
            let g = mesh
                .find_edge(a, b)
                .ok_or_else(|| invalid(format!("tag `{}` names a non-edge {}-{}", tag.label, a + 1, b + 1)))?;
            let want = |k: usize| {
                if tag.values.len() == k {
                    Ok(())
                } else {
                    Err(invalid(format!("tag `{}` needs {k} values", tag.label)))
                }
            };
            let l = match tag.label.as_str() {
                "inlet" => {
                    want(2)?;
                    TunnelEdge::Inlet { velocity: [tag.values[0], tag.values[1]] }
                }
                "outlet" => {
                    want(1)?;
                    TunnelEdge::Outlet { pressure: tag.values[0] }
                }
                "wall" => {
                    want(0)?;
                    TunnelEdge::Wall
                }
                "object" => {
                    want(0)?;
                    TunnelEdge::Object
                }
                other => return Err(invalid(format!("unknown tunnel label `{other}`"))),
            };
            if parsed[g].replace(l).is_some() {
                return Err(invalid(format!("edge {}-{} is labelled twice", a + 1, b + 1)));
            }
        }
        Self::new(mesh, |g| parsed[g])
    }

    pub fn label(&self, g: usize) -> Option<TunnelEdge> {
        self.labels[g]
    }

    fn has_outlet(&self) -> bool {
        self.labels.iter().any(|l| matches!(l, Some(TunnelEdge::Outlet { .. })))
    }

    /// Condition and value for velocity component `c` (0 = x, 1 = y) on edge `g`.
    fn velocity_condition(&self, g: usize, c: usize) -> (BcKind, f64) {
        match self.labels[g].expect("exterior edge") {
            TunnelEdge::Inlet { velocity } => (BcKind::Dirichlet, velocity[c]),
            TunnelEdge::Outlet { .. } => (BcKind::Neumann, 0.0),
            TunnelEdge::Object => (BcKind::Dirichlet, 0.0),
            TunnelEdge::Wall => {
                let normal_component = match self.axes[g].expect("wall axis") {
                    WallAxis::Horizontal => 1,
                    WallAxis::Vertical => 0,
                };
                if c == normal_component {
                    (BcKind::Dirichlet, 0.0)
                } else {
                    (BcKind::Neumann, 0.0)
                }
            }
        }
    }

    fn pressure_condition(&self, g: usize) -> (BcKind, f64) {
        match self.labels[g].expect("exterior edge") {
            TunnelEdge::Outlet { pressure } => (BcKind::Dirichlet, pressure),
            _ => (BcKind::Neumann, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsConfig {
    pub dt: f64,
    pub steps: usize,
    /// Frames are emitted every `cadence` steps (0 disables frames).
    pub cadence: usize,
    /// Form the advection products on a 2n grid and truncate.
    pub dealias: bool,
}

impl NsConfig {
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        if dt.is_nan() || dt <= 0.0 {
            return Err(invalid(format!("time step must be positive, got {dt}")));
        }
        Ok(Self { dt, steps, cadence: 0, dealias: false })
    }

    /// Screening constant of the momentum solve.
    pub fn k2(&self) -> f64 {
        1.0 / self.dt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub u: Vec<CoeffVector2D>,
    pub v: Vec<CoeffVector2D>,
    pub p: Vec<CoeffVector2D>,
    pub t: f64,
    pub step: usize,
}

impl FlowState {
    pub fn rest(elements: usize, n: usize) -> Self {
        let z = vec![CoeffVector2D::zeros(n); elements];
        Self { u: z.clone(), v: z.clone(), p: z, t: 0.0, step: 0 }
    }

    /// Velocity sampled from functions; pressure zero.
    pub fn from_functions(
        mesh: &QuadMesh,
        n: usize,
        u: impl Fn(f64, f64) -> f64,
        v: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let sample = |f: &dyn Fn(f64, f64) -> f64| -> Result<Vec<CoeffVector2D>> {
            mesh.elements()
                .iter()
                .map(|q| {
                    let map = q.map();
                    let vals: Vec<f64> = grid_points(n)?.iter().map(|&(r, s)| {
                        let [x, y] = map.map_point(r, s);
                        f(x, y)
                    }).collect();
                    CoeffVector2D::from_values(&vals, n)
                })
                .collect()
        };
        Ok(Self { u: sample(&u)?, v: sample(&v)?, p: vec![CoeffVector2D::zeros(n); mesh.num_elements()], t: 0.0, step: 0 })
    }

    pub fn n(&self) -> usize {
        self.u.first().map_or(0, CoeffVector2D::n)
    }

    fn is_finite(&self) -> bool {
        [&self.u, &self.v, &self.p].iter().all(|f| f.iter().all(|c| c.data().iter().all(|x| x.is_finite())))
    }
}

/// Reference points of the tensor grid, same stacking as the coefficients.
fn grid_points(n: usize) -> Result<Vec<(f64, f64)>> {
    let g = cheb_points(n)?;
    let p = g.points();
    Ok(p.iter().flat_map(|&r| p.iter().map(move |&s| (r, s))).collect())
}

/// Coefficients of `∂/∂r` (`axis` 0) or `∂/∂s` (`axis` 1) of a Chebyshev series.
fn cheb_derivative(c: &[f64], n: usize, axis: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    let idx = |k: usize, other: usize| if axis == 0 { other + n * k } else { k + n * other };
    for other in 0..n {
        // b_{k−1} = b_{k+1} + 2k c_k, with b_0 halved
        let mut b = vec![0.0; n + 1];
        for k in (1..n).rev() {
            b[k - 1] = b[k + 1] + 2.0 * k as f64 * c[idx(k, other)];
        }
        b[0] *= 0.5;
        for k in 0..n {
            out[idx(k, other)] = b[k];
        }
    }
    out
}

/// Evaluates `n × n` coefficients on the `m × m` grid (`m ≥ n`).
fn values_on(c: &[f64], n: usize, tr: &ChebTransform) -> Result<Vec<f64>> {
    let m = tr.n();
    let mut padded = vec![0.0; m * m];
    for ix in 0..n {
        padded[ix * m..ix * m + n].copy_from_slice(&c[ix * n..(ix + 1) * n]);
    }
    tr.coeffs_to_vals_2d(&padded)
}

/// Coefficients on the `m` grid truncated to size `n`.
fn truncate_coeffs(values: &[f64], n: usize, tr: &ChebTransform) -> Result<Vec<f64>> {
    let m = tr.n();
    let full = tr.vals_to_coeffs_2d(values)?;
    let mut out = vec![0.0; n * n];
    for ix in 0..n {
        out[ix * n..(ix + 1) * n].copy_from_slice(&full[ix * m..ix * m + n]);
    }
    Ok(out)
}

/// Values and physical gradient of a field on the `m × m` grid.
fn field_on_grid(u: &CoeffVector2D, map: &BilinearMap, tr: &ChebTransform) -> Result<[Vec<f64>; 3]> {
    let n = u.n();
    let vals = values_on(u.data(), n, tr)?;
    let ur = values_on(&cheb_derivative(u.data(), n, 0), n, tr)?;
    let us = values_on(&cheb_derivative(u.data(), n, 1), n, tr)?;
    let pts = grid_points(tr.n())?;
    let mut ux = vec![0.0; pts.len()];
    let mut uy = vec![0.0; pts.len()];
    for (k, &(r, s)) in pts.iter().enumerate() {
        let ([rx, sx], [ry, sy]) = map.gradient_weights(r, s);
        ux[k] = rx * ur[k] + sx * us[k];
        uy[k] = ry * ur[k] + sy * us[k];
    }
    Ok([vals, ux, uy])
}

/// Physical gradient `(∂u/∂x, ∂u/∂y)` on the element's own grid.
pub fn gradient_values(u: &CoeffVector2D, map: &BilinearMap) -> Result<(Vec<f64>, Vec<f64>)> {
    let [_, ux, uy] = field_on_grid(u, map, &ChebTransform::new(u.n())?)?;
    Ok((ux, uy))
}

/// `(u·∇)u` per element as coefficient fields `(x part, y part)`.
pub fn advection_term(mesh: &QuadMesh, state: &FlowState, dealias: bool) -> Result<Vec<[CoeffVector2D; 2]>> {
    let n = state.n();
    let m = if dealias { 2 * n } else { n };
    let tr = ChebTransform::new(m)?;
    (0..mesh.num_elements())
        .into_par_iter()
        .map(|j| {
            let map = mesh.element(j).map();
            let [u, ux, uy] = field_on_grid(&state.u[j], &map, &tr)?;
            let [v, vx, vy] = field_on_grid(&state.v[j], &map, &tr)?;
            let ax: Vec<f64> = (0..u.len()).map(|k| u[k] * ux[k] + v[k] * uy[k]).collect();
            let ay: Vec<f64> = (0..u.len()).map(|k| u[k] * vx[k] + v[k] * vy[k]).collect();
            Ok([
                CoeffVector2D::new(n, truncate_coeffs(&ax, n, &tr)?)?,
                CoeffVector2D::new(n, truncate_coeffs(&ay, n, &tr)?)?,
            ])
        })
        .collect()
}

/// `ω = ∂v/∂x − ∂u/∂y` on each element's grid.
pub fn vorticity(mesh: &QuadMesh, state: &FlowState) -> Result<Vec<Vec<f64>>> {
    (0..mesh.num_elements())
        .into_par_iter()
        .map(|j| {
            let map = mesh.element(j).map();
            let (vx, _) = gradient_values(&state.v[j], &map)?;
            let (_, uy) = gradient_values(&state.u[j], &map)?;
            Ok(vx.iter().zip(&uy).map(|(a, b)| a - b).collect())
        })
        .collect()
}

/// `max |∇·u|` over the interior grid points of every element.
pub fn max_divergence(mesh: &QuadMesh, u: &[CoeffVector2D], v: &[CoeffVector2D]) -> Result<f64> {
    let n = u.first().map_or(0, CoeffVector2D::n);
    let per: Vec<f64> = (0..u.len())
        .into_par_iter()
        .map(|j| {
            let map = mesh.element(j).map();
            let (ux, _) = gradient_values(&u[j], &map)?;
            let (_, vy) = gradient_values(&v[j], &map)?;
            let mut m: f64 = 0.0;
            for ix in 1..n - 1 {
                for iy in 1..n - 1 {
                    let k = iy + n * ix;
                    m = m.max((ux[k] + vy[k]).abs());
                }
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

/// `max |u|` over all grid values of a velocity field.
pub fn max_speed(u: &[CoeffVector2D], v: &[CoeffVector2D]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for (a, b) in u.iter().zip(v) {
        for (x, y) in a.to_values()?.iter().zip(b.to_values()?) {
            let s = x.hypot(y);
            if !s.is_finite() {
                return Ok(f64::NAN);
            }
            m = m.max(s);
        }
    }
    Ok(m)
}

/// Intermediate velocity of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub u: Vec<CoeffVector2D>,
    pub v: Vec<CoeffVector2D>,
}

/// Factored momentum and pressure systems for one mesh and time step.
#[derive(Debug, Clone)]
pub struct NsSolver {
    mesh: QuadMesh,
    n: usize,
    config: NsConfig,
    boundary: TunnelBoundary,
    momentum: [SchurSystem; 2],
    pressure: SchurSystem,
    // pinned pressure point when there is no outlet
    pin: Option<(usize, usize)>,
    min_spacing: f64,
}

impl NsSolver {
    pub fn new(mesh: &QuadMesh, n: usize, config: NsConfig, boundary: TunnelBoundary) -> Result<Self> {
        if boundary.labels.len() != mesh.edges().len() {
            return Err(invalid("tunnel labels belong to a different mesh"));
        }
        let helmholtz = PdeCoefficients::screened(-config.k2());
        let momentum_for = |c: usize| {
            SchurSystem::assemble(mesh, &helmholtz, n, |g| boundary.velocity_condition(g, c).0)
        };
        let (mu, mv) = rayon::join(|| momentum_for(0), || momentum_for(1));
        let pin = if boundary.has_outlet() {
            None
        } else {
            let pts = boundary_points(n)?;
            let first = (0..mesh.num_elements())
                .find_map(|j| {
                    (0..pts.len())
                        .find(|&b| mesh.interior_number(mesh.global_edge(j, pts[b].edge)).is_none())
                        .map(|b| (j, b))
                })
                .ok_or_else(|| invalid("mesh has no exterior boundary"))?;
            Some(first)
        };
        let pressure = SchurSystem::assemble_pointwise(mesh, &PdeCoefficients::laplacian(), n, |j, b, g| {
            if pin == Some((j, b)) {
                BcKind::Dirichlet
            } else {
                boundary.pressure_condition(g).0
            }
        })?;
        let r_in = quality(mesh)?.elements.iter().map(|e| e.r_in).fold(f64::INFINITY, f64::min);
        let min_spacing = r_in * (1.0 - (std::f64::consts::PI / (n - 1) as f64).cos());
        Ok(Self { mesh: mesh.clone(), n, config, boundary, momentum: [mu?, mv?], pressure, pin, min_spacing })
    }

    pub fn mesh(&self) -> &QuadMesh {
        &self.mesh
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &NsConfig {
        &self.config
    }

    pub fn boundary(&self) -> &TunnelBoundary {
        &self.boundary
    }

    /// `Δt · max|u| / h_min`, with `h_min` the smallest grid spacing estimate.
    pub fn cfl(&self, state: &FlowState) -> f64 {
        let speed = max_speed(&state.u, &state.v).unwrap_or(f64::INFINITY);
        self.config.dt * speed / self.min_spacing
    }

    fn rhs(
        &self,
        sys: &SchurSystem,
        values: &[Vec<f64>],
        data: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<MeshRhs> {
        let interior = values
            .par_iter()
            .enumerate()
            .map(|(j, v)| sys.element_operator(j).interior_rhs_from_values(v))
            .collect::<Result<_>>()?;
        let nb = 4 * self.n - 4;
        let boundary = (0..self.mesh.num_elements())
            .map(|j| {
                let mut b = vec![0.0; nb];
                for &(row, g, _) in sys.exterior_rows(j) {
                    b[row] = data(j, row, g);
                }
                b
            })
            .collect();
        Ok(MeshRhs { interior, boundary })
    }

    /// Momentum sub-step: the intermediate velocity `u*`.
    pub fn predict(&self, state: &FlowState) -> Result<Prediction> {
        let adv = advection_term(&self.mesh, state, self.config.dealias)?;
        let k2 = self.config.k2();
        let mut out = Vec::with_capacity(2);
        for c in 0..2 {
            let vals = (0..self.mesh.num_elements())
                .map(|j| {
                    let a = adv[j][c].to_values()?;
                    let old = if c == 0 { &state.u[j] } else { &state.v[j] }.to_values()?;
                    Ok(a.iter().zip(&old).map(|(a, o)| a - k2 * o).collect())
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let sys = &self.momentum[c];
            let rhs = self.rhs(sys, &vals, |_, _, g| self.boundary.velocity_condition(g, c).1)?;
            out.push(sys.solve(&rhs)?);
        }
        let v = out.pop().unwrap();
        let u = out.pop().unwrap();
        Ok(Prediction { u, v })
    }

    /// Pressure solve and velocity correction.
    pub fn project(&self, state: &FlowState, star: &Prediction) -> Result<FlowState> {
        let n = self.n;
        let dt = self.config.dt;
        let grads: Vec<[Vec<f64>; 2]> = (0..self.mesh.num_elements())
            .into_par_iter()
            .map(|j| {
                let map = self.mesh.element(j).map();
                let (ux, _) = gradient_values(&star.u[j], &map)?;
                let (_, vy) = gradient_values(&star.v[j], &map)?;
                Ok([ux, vy])
            })
            .collect::<Result<_>>()?;
        let div: Vec<Vec<f64>> = grads.iter().map(|[ux, vy]| ux.iter().zip(vy).map(|(a, b)| (a + b) / dt).collect()).collect();
        let rhs = self.rhs(&self.pressure, &div, |j, row, g| {
            if self.pin == Some((j, row)) {
                0.0
            } else {
                self.boundary.pressure_condition(g).1
            }
        })?;
        let p = self.pressure.solve(&rhs)?;
        let corrected: Vec<(CoeffVector2D, CoeffVector2D)> = (0..self.mesh.num_elements())
            .into_par_iter()
            .map(|j| {
                let map = self.mesh.element(j).map();
                let (px, py) = gradient_values(&p[j], &map)?;
                let us = star.u[j].to_values()?;
                let vs = star.v[j].to_values()?;
                let un: Vec<f64> = us.iter().zip(&px).map(|(u, g)| u - dt * g).collect();
                let vn: Vec<f64> = vs.iter().zip(&py).map(|(v, g)| v - dt * g).collect();
                Ok((CoeffVector2D::from_values(&un, n)?, CoeffVector2D::from_values(&vn, n)?))
            })
            .collect::<Result<_>>()?;
        let (u, v) = corrected.into_iter().unzip();
        Ok(FlowState { u, v, p, t: state.t + dt, step: state.step + 1 })
    }

    pub fn time_step(&self, state: &FlowState) -> Result<FlowState> {
        let star = self.predict(state)?;
        let next = self.project(state, &star)?;
        if !next.is_finite() {
            return Err(Error::Instability { step: next.step, cfl: self.cfl(state) });
        }
        Ok(next)
    }

    /// Runs `config.steps` steps. `frame` sees the initial state and every
    /// `cadence`-th state; `progress` sees every state.
    pub fn run(
        &self,
        initial: FlowState,
        mut frame: impl FnMut(&FlowState) -> Result<()>,
        mut progress: impl FnMut(&FlowState) -> Result<()>,
    ) -> Result<FlowState> {
        let cadence = self.config.cadence;
        if cadence > 0 {
            frame(&initial)?;
        }
        let mut state = initial;
        for _ in 0..self.config.steps {
            state = self.time_step(&state)?;
            progress(&state)?;
            if cadence > 0 && state.step.is_multiple_of(cadence) {
                frame(&state)?;
            }
        }
        Ok(state)
    }

    /// `max |u*|` over exterior grid points on object edges.
    pub fn no_slip_residual(&self, star: &Prediction) -> Result<f64> {
        let pts = boundary_points(self.n)?;
        let mut m: f64 = 0.0;
        for j in 0..self.mesh.num_elements() {
            for &(row, g, _) in self.momentum[0].exterior_rows(j) {
                if self.boundary.label(g) == Some(TunnelEdge::Object) {
                    let p = pts[row];
                    m = m.max(star.u[j].eval(p.r, p.s).hypot(star.v[j].eval(p.r, p.s)));
                }
            }
        }
        Ok(m)
    }
}

/// A rectangular tunnel `[0, length] × [0, height]` with an octagonal
/// approximation of a tilted ellipse at `center`, as a tagged mesh file.
///
/// Eight quads ring the object inside the box `center.x ± height/2`; two
/// quads fill the upstream part and a 2 × `downstream` block the rest.
pub fn tunnel_mesh(
    length: f64,
    height: f64,
    center: [f64; 2],
    semi_axes: [f64; 2],
    tilt: f64,
    inlet_speed: f64,
    downstream: usize,
) -> Result<MeshFile> {
    use crate::mesh::BoundaryTag;
    let (x0, xc, x1) = (center[0] - 0.5 * height, center[0], center[0] + 0.5 * height);
    if x0 <= 0.0 || x1 >= length || downstream == 0 {
        return Err(invalid("object box does not fit inside the tunnel"));
    }
    let ym = 0.5 * height;
    let mut v: Vec<[f64; 2]> =
        vec![[x0, 0.0], [xc, 0.0], [x1, 0.0], [x1, ym], [x1, height], [xc, height], [x0, height], [x0, ym]];
    // object vertices on the rays from the centre to the box points
    for k in 0..8 {
        let (dx, dy) = (v[k][0] - center[0], v[k][1] - center[1]);
        let len = dx.hypot(dy);
        let (ex, ey) = ((dx * tilt.cos() + dy * tilt.sin()) / len, (-dx * tilt.sin() + dy * tilt.cos()) / len);
        let r = 1.0 / ((ex / semi_axes[0]).powi(2) + (ey / semi_axes[1]).powi(2)).sqrt();
        v.push([center[0] + r * dx / len, center[1] + r * dy / len]);
    }
    let mut quads: Vec<[usize; 4]> = (0..8).map(|k| [k, (k + 1) % 8, 8 + (k + 1) % 8, 8 + k]).collect();
    // upstream: (0,0) (0,ym) (0,h)
    let up = v.len();
    v.extend([[0.0, 0.0], [0.0, ym], [0.0, height]]);
    quads.push([0, 7, up + 1, up]);
    quads.push([7, 6, up + 2, up + 1]);
    // downstream columns
    let mut prev = [2usize, 3, 4];
    for c in 1..=downstream {
        let x = x1 + (length - x1) * c as f64 / downstream as f64;
        let base = v.len();
        v.extend([[x, 0.0], [x, ym], [x, height]]);
        quads.push([base, base + 1, prev[1], prev[0]]);
        quads.push([base + 1, base + 2, prev[2], prev[1]]);
        prev = [base, base + 1, base + 2];
    }
    let mut file = MeshFile { vertices: v, quads, tags: Vec::new() };
    let mesh = QuadMesh::from_file(&file)?;
    for g in mesh.boundary_edges() {
        let [a, b] = mesh.edge(g).vertices;
        let (pa, pb) = (file.vertices[a], file.vertices[b]);
        let (label, values) = if (8..16).contains(&a) && (8..16).contains(&b) {
            ("object", vec![])
        } else if pa[0] == 0.0 && pb[0] == 0.0 {
            ("inlet", vec![inlet_speed, 0.0])
        } else if pa[0] == length && pb[0] == length {
            ("outlet", vec![0.0])
        } else {
            ("wall", vec![])
        };
        file.tags.push(BoundaryTag { vertices: [a, b], label: label.into(), values });
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> QuadMesh {
        QuadMesh::new(vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]], vec![[0, 1, 2, 3]]).unwrap()
    }

    fn sampled(mesh: &QuadMesh, n: usize, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let map = mesh.element(0).map();
        grid_points(n).unwrap().iter().map(|&(r, s)| { let [x, y] = map.map_point(r, s); f(x, y) }).collect()
    }

    #[test]
    fn derivative_of_chebyshev_series() {
        let n = 6;
        // u = T_3(r) T_2(s); ∂u/∂r = 3 U_2(r) T_2(s) = 3 (2 T_2 + T_0) T_2(s)
        let mut c = vec![0.0; n * n];
        c[2 + n * 3] = 1.0;
        let d = cheb_derivative(&c, n, 0);
        assert!((d[2 + n * 2] - 6.0).abs() < 1e-15);
        assert!((d[2] - 3.0).abs() < 1e-15);
        assert_eq!(d.iter().filter(|v| **v != 0.0).count(), 2);
    }

    #[test]
    fn advection_of_simple_flows() {
        let mesh = square();
        let n = 8;
        for dealias in [false, true] {
            let uniform = FlowState::from_functions(&mesh, n, |_, _| 1.0, |_, _| 0.0).unwrap();
            let a = advection_term(&mesh, &uniform, dealias).unwrap();
            assert!(a[0].iter().all(|f| f.data().iter().all(|c| c.abs() < 1e-13)));

            let shear = FlowState::from_functions(&mesh, n, |_, y| y, |_, _| 0.0).unwrap();
            let a = advection_term(&mesh, &shear, dealias).unwrap();
            assert!(a[0].iter().all(|f| f.data().iter().all(|c| c.abs() < 1e-13)));

            let strain = FlowState::from_functions(&mesh, n, |x, _| x, |_, y| -y).unwrap();
            let a = advection_term(&mesh, &strain, dealias).unwrap();
            let ex = CoeffVector2D::from_values(&sampled(&mesh, n, |x, _| x), n).unwrap();
            let ey = CoeffVector2D::from_values(&sampled(&mesh, n, |_, y| y), n).unwrap();
            for (got, want) in [(&a[0][0], &ex), (&a[0][1], &ey)] {
                for (g, w) in got.data().iter().zip(want.data()) {
                    assert!((g - w).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vorticity_of_simple_flows() {
        let mesh = QuadMesh::new(vec![[1.0, 0.5], [-0.5, 1.0], [-1.0, -1.0], [0.8, -0.7]], vec![[0, 1, 2, 3]]).unwrap();
        let n = 8;
        for (u, v, w) in [
            (Box::new(|_: f64, y: f64| -y) as Box<dyn Fn(f64, f64) -> f64>, Box::new(|x: f64, _: f64| x) as Box<dyn Fn(f64, f64) -> f64>, 2.0),
            (Box::new(|_, _| 1.0), Box::new(|_, _| 0.0), 0.0),
            (Box::new(|_, y| y), Box::new(|_, _| 0.0), -1.0),
        ] {
            let s = FlowState::from_functions(&mesh, n, u, v).unwrap();
            let om = vorticity(&mesh, &s).unwrap();
            assert!(om[0].iter().all(|o| (o - w).abs() < 1e-12), "{:?}", &om[0][..3]);
        }
    }

    fn channel() -> (QuadMesh, TunnelBoundary) {
        // [0,2]×[0,1] in two squares; inlet left, outlet right, walls top and bottom
        let v = vec![[1.0, 1.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.0, 1.0]];
        let mesh = QuadMesh::new(v, vec![[0, 1, 2, 3], [5, 0, 3, 4]]).unwrap();
        let b = TunnelBoundary::new(&mesh, |g| {
            let [a, b] = mesh.edge(g).vertices;
            let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
            Some(if pa[0] == 0.0 && pb[0] == 0.0 {
                TunnelEdge::Inlet { velocity: [1.0, 0.0] }
            } else if pa[0] == 2.0 && pb[0] == 2.0 {
                TunnelEdge::Outlet { pressure: 0.0 }
            } else {
                TunnelEdge::Wall
            })
        })
        .unwrap();
        (mesh, b)
    }

    #[test]
    fn rest_is_a_fixed_point() {
        let (mesh, _) = channel();
        let still = TunnelBoundary::new(&mesh, |g| {
            let [a, b] = mesh.edge(g).vertices;
            let x = [mesh.vertices()[a][0], mesh.vertices()[b][0]];
            Some(if x == [0.0, 0.0] { TunnelEdge::Inlet { velocity: [0.0, 0.0] } } else { TunnelEdge::Wall })
        })
        .unwrap();
        let mut cfg = NsConfig::new(1e-3, 5).unwrap();
        cfg.cadence = 1;
        let solver = NsSolver::new(&mesh, 8, cfg, still).unwrap();
        let mut frames = 0;
        let end = solver.run(FlowState::rest(2, 8), |_| { frames += 1; Ok(()) }, |_| Ok(())).unwrap();
        assert_eq!(frames, 6);
        assert_eq!(max_speed(&end.u, &end.v).unwrap(), 0.0);
        assert!(end.p.iter().all(|p| p.data().iter().all(|c| *c == 0.0)));
    }

    #[test]
    fn uniform_channel_flow_is_preserved() {
        let (mesh, b) = channel();
        let n = 8;
        let solver = NsSolver::new(&mesh, n, NsConfig::new(1e-3, 3).unwrap(), b).unwrap();
        let s0 = FlowState::from_functions(&mesh, n, |_, _| 1.0, |_, _| 0.0).unwrap();
        let s = solver.run(s0, |_| Ok(()), |_| Ok(())).unwrap();
        for (u, v) in s.u.iter().zip(&s.v) {
            for (x, y) in u.to_values().unwrap().iter().zip(v.to_values().unwrap()) {
                assert!((x - 1.0).abs() < 1e-10 && y.abs() < 1e-10);
            }
        }
        assert!(max_divergence(&mesh, &s.u, &s.v).unwrap() < 1e-9);
    }

    #[test]
    fn tilted_wall_rejected() {
        let mesh = QuadMesh::new(vec![[1.0, 1.2], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]], vec![[0, 1, 2, 3]]).unwrap();
        assert!(TunnelBoundary::new(&mesh, |_| Some(TunnelEdge::Wall)).is_err());
        assert!(NsConfig::new(0.0, 1).is_err());
    }
}
