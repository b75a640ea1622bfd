//! Quadrilateral meshes: numbering, local↔global edge maps and the vertex list.

mod io;
mod ordering;
mod quality;

pub use io::{parse_mesh, read_mesh, write_mesh, BoundaryTag, MeshFile};
pub use ordering::{interface_bandwidth, order_interfaces, InterfaceOrdering};
pub use quality::{element_quality, inradius, min_enclosing_radius, quality, ElementQuality, MeshQuality};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quadmap::{shoelace_area, Point, Quad};

/// One globally numbered edge, stored with its lower vertex first.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// `(quad, local edge)` pairs; one for boundary edges, two for interior ones.
    pub sides: Vec<(usize, usize)>,
}

impl Edge {
    pub fn is_interior(&self) -> bool {
        self.sides.len() == 2
    }
}

#[derive(Debug, Clone)]
pub struct QuadMesh {
    vertices: Vec<Point>,
    quads: Vec<[usize; 4]>,
    elements: Vec<Quad>,
    edges: Vec<Edge>,
    local_to_global: Vec<[usize; 4]>,
    // global edge → interior edge number
    interior_number: Vec<Option<usize>>,
    interior_edges: Vec<usize>,
    vertex_interior: Vec<bool>,
    vertex_edge: Vec<Option<usize>>,
}

impl QuadMesh {
    /// Numbers edges in first-encounter order, classifies them, and builds the
    /// vertex list. Quads must be counterclockwise, convex and conforming.
    pub fn new(vertices: Vec<Point>, quads: Vec<[usize; 4]>) -> Result<Self> {
        if quads.is_empty() {
            return Err(Error::Mesh("mesh has no elements".into()));
        }
        let mut elements = Vec::with_capacity(quads.len());
        for (qi, q) in quads.iter().enumerate() {
            for &v in q {
                if v >= vertices.len() {
                    return Err(Error::Mesh(format!("quad {qi} references missing vertex {v}")));
                }
            }
            let pts = q.map(|v| vertices[v]);
            if shoelace_area(&pts) <= 0.0 {
                return Err(Error::Mesh(format!("quad {qi} is not counterclockwise")));
            }
            let quad = Quad::new(pts).map_err(|e| Error::Mesh(format!("quad {qi}: {e}")))?;
            elements.push(quad);
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut local_to_global = Vec::with_capacity(quads.len());
        for (qi, q) in quads.iter().enumerate() {
            let mut map = [0; 4];
            for le in 0..4 {
                let (a, b) = (q[le], q[(le + 1) % 4]);
                if a == b {
                    return Err(Error::Mesh(format!("quad {qi} repeats vertex {a}")));
                }
                if let Some(&other) = directed.get(&(a, b)) {
                    return Err(Error::Mesh(format!(
                        "edge ({a}, {b}) traversed in the same direction by quads {other} and {qi}"
                    )));
                }
                directed.insert((a, b), qi);
                let key = (a.min(b), a.max(b));
                let g = *lookup.entry(key).or_insert_with(|| {
                    edges.push(Edge { vertices: [key.0, key.1], sides: Vec::new() });
                    edges.len() - 1
                });
                if edges[g].sides.len() == 2 {
                    return Err(Error::Mesh(format!("edge ({}, {}) is shared by more than two quads", key.0, key.1)));
                }
                edges[g].sides.push((qi, le));
                map[le] = g;
            }
            local_to_global.push(map);
        }

        let mut used = vec![false; vertices.len()];
        quads.iter().flatten().for_each(|&v| used[v] = true);
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::Mesh(format!("vertex {v} is not used by any element")));
        }

        // Hanging nodes: a vertex strictly inside a boundary edge.
        for (g, e) in edges.iter().enumerate() {
            if e.is_interior() {
                continue;
            }
            let (p, q) = (vertices[e.vertices[0]], vertices[e.vertices[1]]);
            let len2 = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
            for (vi, v) in vertices.iter().enumerate() {
                if vi == e.vertices[0] || vi == e.vertices[1] {
                    continue;
                }
                let cross = (q[0] - p[0]) * (v[1] - p[1]) - (q[1] - p[1]) * (v[0] - p[0]);
                let t = ((v[0] - p[0]) * (q[0] - p[0]) + (v[1] - p[1]) * (q[1] - p[1])) / len2;
                if cross.abs() <= 1e-12 * len2 && t > 1e-12 && t < 1.0 - 1e-12 {
                    return Err(Error::Mesh(format!("nonconforming mesh: vertex {vi} lies inside edge {g}")));
                }
            }
        }

        let mut interior_number = vec![None; edges.len()];
        let mut interior_edges = Vec::new();
        for (g, e) in edges.iter().enumerate() {
            if e.is_interior() {
                interior_number[g] = Some(interior_edges.len());
                interior_edges.push(g);
            }
        }

        let mut vertex_interior = vec![true; vertices.len()];
        for e in edges.iter().filter(|e| !e.is_interior()) {
            vertex_interior[e.vertices[0]] = false;
            vertex_interior[e.vertices[1]] = false;
        }
        let mut vertex_edge = vec![None; vertices.len()];
        for &g in &interior_edges {
            for &v in &edges[g].vertices {
                if vertex_interior[v] && vertex_edge[v].is_none() {
                    vertex_edge[v] = Some(g);
                }
            }
        }

        Ok(Self {
            vertices,
            quads,
            elements,
            edges,
            local_to_global,
            interior_number,
            interior_edges,
            vertex_interior,
            vertex_edge,
        })
    }

    /// Builds from a parsed mesh file (triangles already split).
    pub fn from_file(file: &MeshFile) -> Result<Self> {
        Self::new(file.vertices.clone(), file.quads.clone())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }

    pub fn element(&self, q: usize) -> &Quad {
        &self.elements[q]
    }

    pub fn elements(&self) -> &[Quad] {
        &self.elements
    }

    pub fn num_elements(&self) -> usize {
        self.quads.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, g: usize) -> &Edge {
        &self.edges[g]
    }

    /// Global number of local edge `le` of quad `q`.
    pub fn global_edge(&self, q: usize, le: usize) -> usize {
        self.local_to_global[q][le]
    }

    /// Global edge joining two vertices, if any.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().position(|e| e.vertices == key)
    }

    /// Interior edge number `k` (0-based) of a global edge.
    pub fn interior_number(&self, g: usize) -> Option<usize> {
        self.interior_number[g]
    }

    /// Global edge numbers of the interior edges, indexed by interior number.
    pub fn interior_edges(&self) -> &[usize] {
        &self.interior_edges
    }

    pub fn num_interior_edges(&self) -> usize {
        self.interior_edges.len()
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&g| !self.edges[g].is_interior())
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        self.vertex_interior[v]
    }

    /// The interior edge assigned to an interior vertex by the vertex list.
    pub fn vertex_edge(&self, v: usize) -> Option<usize> {
        self.vertex_edge[v]
    }

    /// Interior edges of quad `q` as interior numbers, in local-edge order.
    pub fn quad_interfaces(&self, q: usize) -> Vec<usize> {
        (0..4).filter_map(|le| self.interior_number[self.global_edge(q, le)]).collect()
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> isize {
        self.vertices.len() as isize - self.edges.len() as isize + self.quads.len() as isize
    }
}

/// Splits a counterclockwise triangle along its medians into three quads,
/// the `i`-th containing vertex `i`.
pub fn split_triangle(v1: Point, v2: Point, v3: Point) -> Result<[Quad; 3]> {
    let area = shoelace_area(&[v1, v2, v3]);
    let scale = [v1, v2, v3].iter().flat_map(|p| p.iter()).fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    if area.abs() <= 1e-14 * scale * scale {
        return Err(Error::Geometry("collinear triangle vertices".into()));
    }
    if area < 0.0 {
        return Err(Error::Geometry("triangle is clockwise".into()));
    }
    let mid = |a: Point, b: Point| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let c = [(v1[0] + v2[0] + v3[0]) / 3.0, (v1[1] + v2[1] + v3[1]) / 3.0];
    let (m12, m23, m13) = (mid(v1, v2), mid(v2, v3), mid(v1, v3));
    Ok([Quad::new([v1, m12, c, m13])?, Quad::new([v2, m23, c, m12])?, Quad::new([v3, m13, c, m23])?])
}
