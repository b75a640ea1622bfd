#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skinny_sem::element::CoeffVector2D;
use skinny_sem::mesh::QuadMesh;
use skinny_sem::quadmap::{Point, Quad};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reference corner of quad vertex `k`.
pub const REF_CORNERS: [Point; 4] = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];

/// `nx × ny` grid of `h`-squares; interior vertices moved by up to `jitter·h`.
pub fn grid(nx: usize, ny: usize, h: f64, jitter: f64, rng: &mut impl Rng) -> QuadMesh {
    let mut v = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let mut p = [i as f64 * h, j as f64 * h];
            if i > 0 && i < nx && j > 0 && j < ny && jitter > 0.0 {
                p[0] += rng.gen_range(-jitter..jitter) * h;
                p[1] += rng.gen_range(-jitter..jitter) * h;
            }
            v.push(p);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut q = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            q.push([id(i + 1, j + 1), id(i, j + 1), id(i, j), id(i + 1, j)]);
        }
    }
    QuadMesh::new(v, q).unwrap()
}

/// A random strictly convex counterclockwise quad around the origin.
pub fn random_quad(rng: &mut impl Rng, scale: f64) -> Quad {
    loop {
        let mut angles: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let v: Vec<Point> = angles
            .iter()
            .map(|a| {
                let r = scale * rng.gen_range(0.4..1.0);
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        if let Ok(q) = Quad::new([v[0], v[1], v[2], v[3]]) {
            if q.map().det_polynomial().min_on_square() > 1e-3 * scale * scale {
                return q;
            }
        }
    }
}

/// A random counterclockwise triangle with area at least `0.05 · scale²`.
pub fn random_triangle(rng: &mut impl Rng, scale: f64) -> [Point; 3] {
    loop {
        let mut p: [Point; 3] = std::array::from_fn(|_| [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)]);
        let a = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        if a.abs() < 0.05 * scale * scale {
            continue;
        }
        if a < 0.0 {
            p.swap(1, 2);
        }
        return p;
    }
}

/// Largest jump between the two sides of every interior edge, sampled at
/// `samples` evenly spaced points.
pub fn max_interface_jump(mesh: &QuadMesh, sol: &[CoeffVector2D], samples: usize) -> f64 {
    let mut jump: f64 = 0.0;
    for &g in mesh.interior_edges() {
        let [a, _] = mesh.edge(g).vertices;
        let sides = &mesh.edge(g).sides;
        for k in 0..samples {
            let tau = k as f64 / (samples - 1) as f64;
            let mut vals = Vec::new();
            for &(q, le) in sides.iter() {
                let (c0, c1) = (le, (le + 1) % 4);
                // param from vertex `a`
                let (p0, p1) = if mesh.quads()[q][c0] == a { (c0, c1) } else { (c1, c0) };
                let r = REF_CORNERS[p0][0] + tau * (REF_CORNERS[p1][0] - REF_CORNERS[p0][0]);
                let s = REF_CORNERS[p0][1] + tau * (REF_CORNERS[p1][1] - REF_CORNERS[p0][1]);
                vals.push(sol[q].eval(r, s));
            }
            jump = jump.max((vals[0] - vals[1]).abs());
        }
    }
    jump
}

/// Max error against `exact` on a `samples × samples` reference grid per element.
pub fn max_error(mesh: &QuadMesh, sol: &[CoeffVector2D], samples: usize, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let mut err: f64 = 0.0;
    for (j, u) in sol.iter().enumerate() {
        let map = mesh.element(j).map();
        for a in 0..samples {
            for b in 0..samples {
                let r = -1.0 + 2.0 * a as f64 / (samples - 1) as f64;
                let s = -1.0 + 2.0 * b as f64 / (samples - 1) as f64;
                let [x, y] = map.map_point(r, s);
                err = err.max((u.eval(r, s) - exact(x, y)).abs());
            }
        }
    }
    err
}

/// Interface adjacency: interior edges bounding a common quad.
pub fn interface_graph(mesh: &QuadMesh) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); mesh.num_interior_edges()];
    for q in 0..mesh.num_elements() {
        let ks = mesh.quad_interfaces(q);
        for &a in &ks {
            for &b in &ks {
                if a != b && !adj[a].contains(&b) {
                    adj[a].push(b);
                }
            }
        }
    }
    adj
}

/// Smallest `max |pos(a) − pos(b)|` over all orderings, by exhaustive search
/// with pruning. Only for small graphs.
pub fn optimal_bandwidth(adj: &[Vec<usize>]) -> usize {
    let m = adj.len();
    if m == 0 {
        return 0;
    }
    (0..m).find(|&k| layout_exists(adj, k)).unwrap_or(m - 1)
}

fn layout_exists(adj: &[Vec<usize>], k: usize) -> bool {
    let m = adj.len();
    let mut pos = vec![usize::MAX; m];
    let mut order = Vec::with_capacity(m);
    place(adj, k, &mut pos, &mut order)
}

fn place(adj: &[Vec<usize>], k: usize, pos: &mut [usize], order: &mut Vec<usize>) -> bool {
    let p = order.len();
    if p == adj.len() {
        return true;
    }
    // a placed node with an unplaced neighbour must stay within reach of slot p
    for (q, &w) in order.iter().enumerate() {
        if p - q > k && adj[w].iter().any(|&x| pos[x] == usize::MAX) {
            return false;
        }
    }
    for v in 0..adj.len() {
        if pos[v] != usize::MAX {
            continue;
        }
        if adj[v].iter().any(|&x| pos[x] != usize::MAX && p - pos[x] > k) {
            continue;
        }
        pos[v] = p;
        order.push(v);
        if place(adj, k, pos, order) {
            return true;
        }
        order.pop();
        pos[v] = usize::MAX;
    }
    false
}
