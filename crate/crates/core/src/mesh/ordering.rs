//! Interface ordering for a narrow Schur complement band.

use std::collections::VecDeque;

use super::QuadMesh;

/// Graphs up to this size try every start node.
const EXHAUSTIVE_STARTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceOrdering {
    /// `order[p]` is the interior edge placed at position `p`.
    pub order: Vec<usize>,
    /// Inverse of `order`.
    pub position: Vec<usize>,
    /// `max |a − b|` over interface pairs sharing a quad.
    pub bandwidth: usize,
}

impl InterfaceOrdering {
    fn from_order(mesh: &QuadMesh, order: Vec<usize>) -> Self {
        let mut position = vec![0; order.len()];
        for (p, &k) in order.iter().enumerate() {
            position[k] = p;
        }
        let bandwidth = interface_bandwidth(mesh, &position);
        Self { order, position, bandwidth }
    }

    /// Bound on the Σ half-bandwidth for `n` points per interface.
    pub fn sigma_bandwidth(&self, n: usize) -> usize {
        (self.bandwidth + 1) * n
    }
}

/// `max |pos(a) − pos(b)|` over interior edges `a, b` of one quad.
pub fn interface_bandwidth(mesh: &QuadMesh, position: &[usize]) -> usize {
    let mut bw = 0;
    for q in 0..mesh.num_elements() {
        let ks = mesh.quad_interfaces(q);
        for &a in &ks {
            for &b in &ks {
                bw = bw.max(position[a].abs_diff(position[b]));
            }
        }
    }
    bw
}

fn adjacency(mesh: &QuadMesh) -> Vec<Vec<usize>> {
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
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    for list in &mut adj {
        list.sort_by_key(|&k| (deg[k], k));
    }
    adj
}

fn cuthill_mckee(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let m = adj.len();
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut next_start = Some(start);
    while let Some(s) = next_start {
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        next_start = (0..m).filter(|&k| !seen[k]).min_by_key(|&k| (adj[k].len(), k));
    }
    order
}

fn eccentric_candidates(adj: &[Vec<usize>]) -> Vec<usize> {
    let m = adj.len();
    if m <= EXHAUSTIVE_STARTS {
        return (0..m).collect();
    }
    // all minimum-degree nodes plus the far end of a BFS from each
    let min_deg = adj.iter().map(Vec::len).min().unwrap_or(0);
    let mut out: Vec<usize> = (0..m).filter(|&k| adj[k].len() == min_deg).take(32).collect();
    let ends: Vec<usize> = out.iter().map(|&s| *cuthill_mckee(adj, s).last().unwrap()).collect();
    out.extend(ends);
    out.sort_unstable();
    out.dedup();
    out
}

/// Reverse Cuthill–McKee ordering of the interface-adjacency graph (edges
/// adjacent when they bound a common quad), best over a set of start nodes.
///
/// Deterministic; of an ordering and its reverse (same bandwidth) the one
/// starting at the lower edge number is returned.
pub fn order_interfaces(mesh: &QuadMesh) -> InterfaceOrdering {
    let adj = adjacency(mesh);
    if adj.is_empty() {
        return InterfaceOrdering { order: Vec::new(), position: Vec::new(), bandwidth: 0 };
    }
    let mut best: Option<InterfaceOrdering> = None;
    for s in eccentric_candidates(&adj) {
        let mut order = cuthill_mckee(&adj, s);
        order.reverse();
        if order[0] > order[order.len() - 1] {
            order.reverse();
        }
        let cand = InterfaceOrdering::from_order(mesh, order);
        if best.as_ref().is_none_or(|b| cand.bandwidth < b.bandwidth) {
            best = Some(cand);
        }
    }
    best.unwrap()
}
