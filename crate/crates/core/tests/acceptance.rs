//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the run; any other failure exits non-zero.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DVector;
use rand::Rng;

use skinny_sem::bench::{condition_bench, default_epsilons};
use skinny_sem::element::{assemble_element_operator, solve_element_dirichlet, PdeCoefficients};
use skinny_sem::mesh::{min_enclosing_radius, order_interfaces, read_mesh, split_triangle, QuadMesh};
use skinny_sem::navier_stokes::{max_divergence, max_speed, tunnel_mesh, FlowState, NsConfig, NsSolver, TunnelBoundary};
use skinny_sem::quadmap::{shoelace_area, Quad};
use skinny_sem::schur::{BcKind, SchurSystem};
use skinny_sem::ultra::{conversion_operator, diff_operator};

const KNOWN_FAILURES: &[usize] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---------------------------------------------------------------------------
// exact rationals for the operator oracle

#[derive(Debug, Clone, Copy, PartialEq)]
struct Rat(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

impl Rat {
    fn new(p: i128, q: i128) -> Self {
        let g = gcd(p, q).max(1) * q.signum();
        Rat(p / g, q / g)
    }
    fn int(p: i128) -> Self {
        Rat(p, 1)
    }
    fn add(self, o: Rat) -> Rat {
        Rat::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Rat) -> Rat {
        Rat::new(self.0 * o.0, self.1 * o.1)
    }
    fn div(self, o: Rat) -> Rat {
        Rat::new(self.0 * o.1, self.1 * o.0)
    }
    fn neg(self) -> Rat {
        Rat(-self.0, self.1)
    }
    fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

type RatPoly = Vec<Rat>;

fn poly_axpy(a: Rat, p: &RatPoly, acc: &mut RatPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Rat::int(0));
    }
    for (k, c) in p.iter().enumerate() {
        acc[k] = acc[k].add(a.mul(*c));
    }
}

fn times_x(p: &RatPoly) -> RatPoly {
    let mut out = vec![Rat::int(0)];
    out.extend_from_slice(p);
    out
}

/// Monomial coefficients of `T_k` (`lambda = 0`) or `C_k^(lambda)`, `k < count`.
fn basis(lambda: i128, count: usize) -> Vec<RatPoly> {
    let mut out: Vec<RatPoly> = vec![vec![Rat::int(1)]];
    if count > 1 {
        out.push(vec![Rat::int(0), Rat::int(if lambda == 0 { 1 } else { 2 * lambda })]);
    }
    for k in 1..count.saturating_sub(1) {
        let kk = k as i128;
        let mut next = Vec::new();
        if lambda == 0 {
            poly_axpy(Rat::int(2), &times_x(&out[k]), &mut next);
            poly_axpy(Rat::int(-1), &out[k - 1], &mut next);
        } else {
            poly_axpy(Rat::new(2 * (kk + lambda), kk + 1), &times_x(&out[k]), &mut next);
            poly_axpy(Rat::new(-(kk + 2 * lambda - 1), kk + 1), &out[k - 1], &mut next);
        }
        out.push(next);
    }
    out
}

/// Coefficients of `p` in the basis `b` (triangular elimination from the top).
fn expand(p: &RatPoly, b: &[RatPoly]) -> Vec<Rat> {
    let mut rest = p.clone();
    let mut coef = vec![Rat::int(0); b.len()];
    for m in (0..rest.len()).rev() {
        if rest[m].0 == 0 {
            continue;
        }
        let c = rest[m].div(b[m][m]);
        coef[m] = c;
        poly_axpy(c.neg(), &b[m], &mut rest);
    }
    coef
}

fn derivative(p: &RatPoly) -> RatPoly {
    p.iter().enumerate().skip(1).map(|(k, c)| c.mul(Rat::int(k as i128))).collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for lambda in 0..=3usize {
        for n in 3..=8usize {
            let cheb = basis(0, n);
            let from = basis(lambda as i128, n);
            let to = basis(lambda as i128 + 1, n);
            // conversion: column k is the expansion of basis function k in the next basis
            let s = conversion_operator(lambda, n).unwrap().to_dense();
            for k in 0..n {
                let col = expand(&from[k], &to);
                for i in 0..n {
                    checked += 1;
                    if s[i][k] != col[i].to_f64() {
                        mismatches.push(format!("S{lambda} n={n} ({i},{k})"));
                    }
                }
            }
            if lambda == 0 || n < lambda + 1 {
                continue;
            }
            // differentiation: column k is the expansion of d^λ T_k in C^(λ)
            let target = basis(lambda as i128, n);
            let d = diff_operator(lambda, n).unwrap().to_dense();
            for k in 0..n {
                let mut p = cheb[k].clone();
                for _ in 0..lambda {
                    p = derivative(&p);
                }
                let col = expand(&p, &target);
                for i in 0..n {
                    checked += 1;
                    if d[i][k] != col[i].to_f64() {
                        mismatches.push(format!("D{lambda} n={n} ({i},{k})"));
                    }
                }
            }
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{checked} entries exact")
    } else {
        format!("{} of {checked} entries differ, first {}", mismatches.len(), mismatches[0])
    };
    outcome(mismatches.is_empty(), detail)
}

fn criterion_2() -> Outcome {
    let mut rng = common::rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        let t = common::random_triangle(&mut rng, scale);
        let area = shoelace_area(&t);
        for q in split_triangle(t[0], t[1], t[2]).unwrap() {
            let det = q.map().det_polynomial();
            let want = [4.0 * area / 48.0, area / 48.0, area / 48.0];
            for (got, w) in [det.constant, det.r, det.s].iter().zip(want) {
                worst = worst.max((got - w).abs() / w.abs());
            }
        }
    }
    outcome(worst <= 1e-13, format!("max relative coefficient error {worst:.2e} (tol 1e-13)"))
}

fn criterion_3() -> Outcome {
    let eps = default_epsilons();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [8usize, 16] {
        let r = condition_bench(n, &eps).unwrap();
        let k9 = r.kappa_inf[r.eps.iter().position(|e| *e == 1e-9).unwrap()];
        let k12 = *r.kappa_inf.last().unwrap();
        let agree = (k9 / k12 - 1.0).abs();
        let sup = r.kappa_inf.iter().cloned().fold(0.0, f64::max);
        let finite = r.kappa_inf.iter().all(|k| k.is_finite());
        // bounded: no growth beyond the plateau value as ε → 0
        let bounded = finite && sup <= 10.0 * k12;
        pass &= agree <= 0.01 && bounded;
        parts.push(format!(
            "n={n}: κ∞(1e-9)={k9:.5e} κ∞(1e-12)={k12:.5e} rel diff {agree:.1e}, sup {sup:.4e}, ratio κ(1)/κ(1e-12) {:.3}",
            r.kappa_inf[0] / k12
        ));
    }
    parts.push("published plateau 1.0832e4 at unstated n and norm".into());
    outcome(pass, parts.join("; "))
}

fn element_error(q: &Quad, n: usize, u: impl Fn(f64, f64) -> f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let sol = solve_element_dirichlet(&PdeCoefficients::laplacian(), q, n, f, &u).unwrap();
    let m = q.map();
    let mut err: f64 = 0.0;
    for a in 0..61 {
        for b in 0..61 {
            let (r, s) = (-1.0 + a as f64 / 30.0, -1.0 + b as f64 / 30.0);
            let [x, y] = m.map_point(r, s);
            err = err.max((sol.eval(r, s) - u(x, y)).abs());
        }
    }
    err
}

fn criterion_4() -> Outcome {
    // length 1, width about 1e-6, not a rectangle
    let q = Quad::new([[1.0, 0.0], [1.0, 1.2e-6], [0.0, 0.8e-6], [0.0, 0.0]]).unwrap();
    let u = |x: f64, y: f64| x.exp() * y.cos() + x * x * x - 3.0 * x * y * y + x * x;
    let e1 = element_error(&q, 24, u, |_, _| 2.0);
    let v = |x: f64, y: f64| (2.0 * x + 1e6 * y).sin();
    let e2 = element_error(&q, 24, v, |x, y| -(4.0 + 1e12) * (2.0 * x + 1e6 * y).sin());
    let err = e1.max(e2);
    outcome(err <= 1e-9, format!("aspect ratio 1e6, n=24: max error {e1:.2e} smooth, {e2:.2e} cross-stream (tol 1e-9)"))
}

fn mesh_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../meshes").join(name)
}

fn criterion_5() -> Outcome {
    let file = read_mesh(mesh_path("skinny_pair.mesh")).unwrap();
    let mesh = QuadMesh::from_file(&file).unwrap();
    let u = |x: f64, y: f64| (2.0 * x).sin() * y.cos() + x * x * y;
    let f = |x: f64, y: f64| -5.0 * (2.0 * x).sin() * y.cos() + 2.0 * y;
    let sys = SchurSystem::assemble(&mesh, &PdeCoefficients::laplacian(), 20, |_| BcKind::Dirichlet).unwrap();
    let rhs = sys.rhs_from_functions(f, |_, x, y| u(x, y)).unwrap();
    let sol = sys.solve(&rhs).unwrap();
    let err = common::max_error(&mesh, &sol, 41, u);
    let jump = common::max_interface_jump(&mesh, &sol, 101);
    let s = skinny_sem::mesh::quality(&mesh).unwrap().min_skinniness();
    outcome(
        err <= 1e-9 && jump <= 1e-10,
        format!("skinniness {s:.1e}, n=20: max error {err:.2e} (tol 1e-9), interface jump {jump:.2e} (tol 1e-10)"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    let mut meshes: Vec<(String, QuadMesh)> = vec![
        ("square".into(), QuadMesh::from_file(&read_mesh(mesh_path("square.mesh")).unwrap()).unwrap()),
        ("triangle".into(), QuadMesh::from_file(&read_mesh(mesh_path("triangle.mesh")).unwrap()).unwrap()),
        ("skinny pair".into(), QuadMesh::from_file(&read_mesh(mesh_path("skinny_pair.mesh")).unwrap()).unwrap()),
        ("strip 3x1".into(), common::grid(3, 1, 1.0, 0.0, &mut rng)),
        ("strip 4x1".into(), common::grid(4, 1, 0.5, 0.0, &mut rng)),
    ];
    for k in 0..3 {
        meshes.push((format!("jittered 2x2 #{k}"), common::grid(2, 2, 1.0, 0.25, &mut rng)));
    }
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (_, mesh) in &meshes {
        for n in [6usize, 8, 10] {
            let c = -rng.gen_range(0.0..3.0);
            let neumann_edge = mesh.boundary_edges().next().unwrap();
            let kind = |g: usize| if g == neumann_edge { BcKind::Neumann } else { BcKind::Dirichlet };
            let coeffs = PdeCoefficients::constant(1.0, 0.1, 1.3, 0.2, -0.1, c);
            let sys = SchurSystem::assemble(mesh, &coeffs, n, kind).unwrap();
            let rhs = sys.rhs_from_functions(|x, y| (x + 2.0 * y).cos(), |g, x, y| if g == neumann_edge { 0.3 } else { x - y }).unwrap();
            let a = sys.solve(&rhs).unwrap();
            let b = sys.dense_solve(&rhs).unwrap();
            let scale = b.iter().flat_map(|u| u.data().iter()).fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = a
                .iter()
                .zip(&b)
                .flat_map(|(p, q)| p.data().iter().zip(q.data()).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            worst = worst.max(diff / scale);
            cases += 1;
        }
    }
    outcome(worst <= 1e-9, format!("{cases} mesh/n cases up to 4 elements: max relative difference {worst:.2e} (tol 1e-9)"))
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn criterion_7() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..12 {
        let n = rng.gen_range(6..=12);
        let scale = rng.gen_range(0.1..3.0);
        let q = common::random_quad(&mut rng, scale);
        let (a11, a22) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let a12 = rng.gen_range(-0.3..0.3);
        let coeffs = PdeCoefficients::constant(a11, a12, a22, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), -rng.gen_range(0.0..5.0));
        let m = assemble_element_operator(&coeffs, &q, n).unwrap();
        let dense = m.to_dense();
        let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = m.factor().unwrap().solve_slots(&b);
        let xd = dense.lu().solve(&DVector::from_column_slice(&b)).unwrap();
        let diff = x.iter().zip(xd.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        worst = worst.max(diff / xd.amax());
    }
    let n = 12;
    let q = common::random_quad(&mut rng, 1.0);
    let m = assemble_element_operator(&PdeCoefficients::laplacian(), &q, n).unwrap();
    let factor_times: Vec<Duration> = (0..30)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(m.factor().unwrap());
            t.elapsed()
        })
        .collect();
    let f = m.factor().unwrap();
    let b: Vec<f64> = (0..n * n).map(|i| (i as f64).sin()).collect();
    let solve_times: Vec<Duration> = (0..300)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(f.solve_slots(std::hint::black_box(&b)));
            t.elapsed()
        })
        .collect();
    let (tf, ts) = (median(factor_times), median(solve_times));
    let speedup = tf.as_secs_f64() / ts.as_secs_f64();
    outcome(
        worst <= 1e-10 && speedup >= 10.0,
        format!("max relative difference {worst:.2e} (tol 1e-10); n=12 factor {tf:?}, solve {ts:?}, speedup {speedup:.0}x (need 10x)"),
    )
}

/// `a·sin(k·(x, y) + φ)` with random amplitude, direction and phase.
fn random_wave(rng: &mut impl Rng, wavenumber: f64) -> impl Fn(f64, f64) -> f64 + Copy {
    let a = rng.gen_range(0.01..1.0);
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let (kx, ky) = (wavenumber * th.cos(), wavenumber * th.sin());
    move |x, y| a * (kx * x + ky * y + phi).sin()
}

fn sampled_difference(a: &skinny_sem::element::CoeffVector2D, b: &skinny_sem::element::CoeffVector2D) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..81 {
        for j in 0..81 {
            let (r, s) = (-1.0 + i as f64 / 40.0, -1.0 + j as f64 / 40.0);
            m = m.max((a.eval(r, s) - b.eval(r, s)).abs());
        }
    }
    m
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    let n = 20;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let scale = rng.gen_range(0.2..2.0);
        let q = common::random_quad(&mut rng, scale);
        let c = -rng.gen_range(0.0..10.0);
        let coeffs = PdeCoefficients::screened(c);
        let f = random_wave(&mut rng, 1.0 / scale);
        let g = random_wave(&mut rng, 1.5 / scale);
        let eps = random_wave(&mut rng, 2.0 / scale);
        let u = solve_element_dirichlet(&coeffs, &q, n, f, g).unwrap();
        let v = solve_element_dirichlet(&coeffs, &q, n, f, |x, y| g(x, y) + eps(x, y)).unwrap();
        let diff = sampled_difference(&u, &v);
        let vs = q.vertices();
        let mut bound: f64 = 0.0;
        for k in 0..4 {
            let (p0, p1) = (vs[k], vs[(k + 1) % 4]);
            for t in 0..=4000 {
                let tau = t as f64 / 4000.0;
                bound = bound.max(eps(p0[0] + tau * (p1[0] - p0[0]), p0[1] + tau * (p1[1] - p0[1])).abs());
            }
        }
        worst = worst.max(diff / bound);
    }
    outcome(worst <= 1.0 + 1e-8, format!("20 problems: max of max|v-u| / max|ε| = {:.12} (limit 1+1e-8)", worst))
}

fn criterion_9() -> Outcome {
    let mut rng = common::rng(9);
    let n = 20;
    let mut worst: f64 = 0.0;
    let mut radii = (f64::INFINITY, 0.0f64);
    for _ in 0..20 {
        let scale = 10f64.powf(rng.gen_range(-1.0..0.7));
        let q = common::random_quad(&mut rng, scale);
        let r_out = min_enclosing_radius(q.vertices());
        radii = (radii.0.min(r_out), radii.1.max(r_out));
        let c = -rng.gen_range(0.0..10.0) / (scale * scale);
        let coeffs = PdeCoefficients::screened(c);
        let f = random_wave(&mut rng, 1.0 / scale);
        let g = random_wave(&mut rng, 1.5 / scale);
        let eps = random_wave(&mut rng, 2.0 / scale);
        let u = solve_element_dirichlet(&coeffs, &q, n, f, g).unwrap();
        let s = solve_element_dirichlet(&coeffs, &q, n, |x, y| f(x, y) + eps(x, y), g).unwrap();
        let diff = sampled_difference(&u, &s);
        let m = q.map();
        let mut emax: f64 = 0.0;
        for i in 0..=200 {
            for j in 0..=200 {
                let [x, y] = m.map_point(-1.0 + i as f64 / 100.0, -1.0 + j as f64 / 100.0);
                emax = emax.max(eps(x, y).abs());
            }
        }
        worst = worst.max(diff / (emax * r_out * r_out / 4.0));
    }
    outcome(
        worst <= 1.0 + 1e-6,
        format!(
            "20 problems, r_out in [{:.2}, {:.2}]: max of max|s-u| / (max|ε| r²/4) = {worst:.4} (limit 1+1e-6)",
            radii.0, radii.1
        ),
    )
}

fn criterion_10() -> Outcome {
    let n = 8;
    let steps = 200;
    let dt = 1.667e-5;
    let tilt = 20f64.to_radians();
    let file = tunnel_mesh(3.0, 1.0, [1.0, 0.5], [0.3, 0.12], tilt, 1.0, 2).unwrap();
    let mesh = QuadMesh::from_file(&file).unwrap();
    let boundary = TunnelBoundary::from_tags(&mesh, &file).unwrap();
    let solver = NsSolver::new(&mesh, n, NsConfig::new(dt, steps).unwrap(), boundary).unwrap();
    let mut state = FlowState::rest(mesh.num_elements(), n);
    let (mut finite, mut div, mut slip, mut speed, mut last) = (true, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..steps {
        let star = solver.predict(&state).unwrap();
        slip = slip.max(solver.no_slip_residual(&star).unwrap());
        state = solver.project(&state, &star).unwrap();
        let s = max_speed(&state.u, &state.v).unwrap();
        if !s.is_finite() {
            finite = false;
            break;
        }
        speed = speed.max(s);
        last = s;
        div = div.max(max_divergence(&mesh, &state.u, &state.v).unwrap() / s);
    }

    let still = tunnel_mesh(3.0, 1.0, [1.0, 0.5], [0.3, 0.12], tilt, 0.0, 2).unwrap();
    let still_mesh = QuadMesh::from_file(&still).unwrap();
    let still_boundary = TunnelBoundary::from_tags(&still_mesh, &still).unwrap();
    let still_solver = NsSolver::new(&still_mesh, n, NsConfig::new(dt, steps).unwrap(), still_boundary).unwrap();
    let mut rest = FlowState::rest(still_mesh.num_elements(), n);
    for _ in 0..steps {
        rest = still_solver.time_step(&rest).unwrap();
    }
    let drift = rest.u.iter().chain(&rest.v).chain(&rest.p).flat_map(|c| c.data().iter()).fold(0.0f64, |m, v| m.max(v.abs()));

    let pass = finite && div <= 1e-6 && slip <= 1e-8 && drift <= 1e-12;
    outcome(
        pass,
        format!(
            "{} elements, n={n}, {steps} steps: finite {finite} (peak |u| {speed:.3}, final {last:.3}); \
             divergence/|u|∞ {div:.2e} (tol 1e-6){}; no-slip {slip:.1e} (tol 1e-8); fixed-point drift {drift:.1e} (tol 1e-12)",
            mesh.num_elements(),
            if div <= 1e-6 { "" } else { " FAILS" }
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut rng = common::rng(11);
    let mut pass = true;
    let mut parts = Vec::new();
    for side in 1..=3 {
        let mesh = common::grid(side, side, 1.0, 0.0, &mut rng);
        let got = order_interfaces(&mesh).bandwidth;
        let best = common::optimal_bandwidth(&common::interface_graph(&mesh));
        pass &= got == best;
        parts.push(format!("N={}: {got} (optimum {best})", side * side));
    }
    let big = common::grid(10, 10, 1.0, 0.0, &mut rng);
    let bw = order_interfaces(&big).bandwidth;
    pass &= bw <= 40;
    parts.push(format!("N=100: {bw} (limit 4·√N = 40)"));
    outcome(pass, parts.join("; "))
}

type Criterion = (usize, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "operator exactness", criterion_1, Duration::from_secs(1)),
        (2, "median-split determinant identity", criterion_2, Duration::from_secs(1)),
        (3, "conditioning plateau", criterion_3, Duration::from_secs(30)),
        (4, "single skinny element accuracy", criterion_4, Duration::from_secs(5)),
        (5, "two-element skinny mesh", criterion_5, Duration::from_secs(10)),
        (6, "Schur vs dense elimination", criterion_6, Duration::from_secs(10)),
        (7, "Woodbury vs dense LU", criterion_7, Duration::from_secs(10)),
        (8, "boundary perturbation bound", criterion_8, Duration::from_secs(60)),
        (9, "forcing perturbation bound", criterion_9, Duration::from_secs(60)),
        (10, "Navier-Stokes properties", criterion_10, Duration::from_secs(120)),
        (11, "bandwidth ordering", criterion_11, Duration::from_secs(60)),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, run, budget) in criteria {
        let t = Instant::now();
        let mut o = run();
        let elapsed = t.elapsed();
        if elapsed > budget {
            o.pass = false;
            o.detail += &format!("; over time budget {budget:?}");
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{id:2}] {name}: {} ({:.2}s)", o.detail, elapsed.as_secs_f64());
        if o.pass {
            passed += 1;
        } else if !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("{passed}/11 criteria pass; known failures: {KNOWN_FAILURES:?}");
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
