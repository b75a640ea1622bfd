//! Line-oriented mesh text format.
//!
//! ```text
//! quadmesh 1
//! # comment
//! v x y                  vertex
//! q i1 i2 i3 i4          counterclockwise quad, 1-based vertex indices
//! t i1 i2 i3             counterclockwise triangle, split along its medians
//! b i j label [values]   tag on the boundary edge joining vertices i and j
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::quadmap::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTag {
    /// 0-based vertex indices of the edge, as written.
    pub vertices: [usize; 2],
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeshFile {
    pub vertices: Vec<Point>,
    pub quads: Vec<[usize; 4]>,
    pub tags: Vec<BoundaryTag>,
}

impl MeshFile {
    /// Tag attached to the edge `{a, b}`, if any.
    pub fn tag(&self, a: usize, b: usize) -> Option<&BoundaryTag> {
        self.tags.iter().find(|t| (t.vertices[0] == a && t.vertices[1] == b) || (t.vertices[0] == b && t.vertices[1] == a))
    }
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<MeshFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_mesh(&text)
}

pub fn parse_mesh(text: &str) -> Result<MeshFile> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()));
    let mut header = None;
    for (no, l) in lines.by_ref() {
        if !l.is_empty() {
            header = Some((no, l));
            break;
        }
    }
    match header {
        Some((_, "quadmesh 1")) => {}
        Some((no, other)) => return Err(format_err(no, format!("expected header `quadmesh 1`, found `{other}`"))),
        None => return Err(format_err(1, "empty mesh file")),
    }

    let mut vertices = Vec::new();
    let mut quads: Vec<(usize, [usize; 4])> = Vec::new();
    let mut tris: Vec<(usize, [usize; 3])> = Vec::new();
    let mut tags: Vec<(usize, BoundaryTag)> = Vec::new();
    for (no, l) in lines {
        if l.is_empty() {
            continue;
        }
        let mut fields = l.split_whitespace();
        let kind = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| format_err(no, format!("`{s}` is not a number")));
        let index = |s: &str| match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(format_err(no, format!("`{s}` is not a 1-based vertex index"))),
        };
        match kind {
            "v" => {
                if rest.len() != 2 {
                    return Err(format_err(no, "vertex record needs 2 coordinates"));
                }
                let p = [num(rest[0])?, num(rest[1])?];
                if !p.iter().all(|c| c.is_finite()) {
                    return Err(format_err(no, "vertex coordinates must be finite"));
                }
                vertices.push(p);
            }
            "q" => {
                if rest.len() != 4 {
                    return Err(format_err(no, "quad record needs 4 vertex indices"));
                }
                quads.push((no, [index(rest[0])?, index(rest[1])?, index(rest[2])?, index(rest[3])?]));
            }
            "t" => {
                if rest.len() != 3 {
                    return Err(format_err(no, "triangle record needs 3 vertex indices"));
                }
                tris.push((no, [index(rest[0])?, index(rest[1])?, index(rest[2])?]));
            }
            "b" => {
                if rest.len() < 3 {
                    return Err(format_err(no, "boundary record needs 2 vertex indices and a label"));
                }
                let values = rest[3..].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
                tags.push((
                    no,
                    BoundaryTag { vertices: [index(rest[0])?, index(rest[1])?], label: rest[2].to_string(), values },
                ));
            }
            other => return Err(format_err(no, format!("unknown record type `{other}`"))),
        }
    }

    let nv = vertices.len();
    let check = |no: usize, ids: &[usize]| {
        ids.iter()
            .find(|&&i| i >= nv)
            .map_or(Ok(()), |i| Err(format_err(no, format!("vertex {} is not defined", i + 1))))
    };
    for (no, q) in &quads {
        check(*no, q)?;
    }
    for (no, t) in &tris {
        check(*no, t)?;
    }
    for (no, t) in &tags {
        check(*no, &t.vertices)?;
    }

    let mut out_quads: Vec<[usize; 4]> = quads.into_iter().map(|(_, q)| q).collect();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    for (no, [a, b, c]) in tris {
        let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
        let area = 0.5 * ((pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]));
        if area <= 0.0 {
            return Err(format_err(no, "triangle is degenerate or clockwise"));
        }
        let mut mid = |i: usize, j: usize| {
            *midpoints.entry((i.min(j), i.max(j))).or_insert_with(|| {
                let (p, q) = (vertices[i], vertices[j]);
                vertices.push([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]);
                vertices.len() - 1
            })
        };
        let (mab, mbc, mac) = (mid(a, b), mid(b, c), mid(a, c));
        vertices.push([(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0]);
        let g = vertices.len() - 1;
        out_quads.push([a, mab, g, mac]);
        out_quads.push([b, mbc, g, mab]);
        out_quads.push([c, mac, g, mbc]);
    }

    // Tags on split triangle edges apply to both halves.
    let mut out_tags = Vec::new();
    for (_, t) in tags {
        let [a, b] = t.vertices;
        match midpoints.get(&(a.min(b), a.max(b))) {
            Some(&m) => {
                out_tags.push(BoundaryTag { vertices: [a, m], ..t.clone() });
                out_tags.push(BoundaryTag { vertices: [m, b], ..t });
            }
            None => out_tags.push(t),
        }
    }
    Ok(MeshFile { vertices, quads: out_quads, tags: out_tags })
}

/// Canonical text form: header, vertices, quads, then tags sorted by edge.
pub fn write_mesh(mesh: &MeshFile) -> String {
    let mut s = String::from("quadmesh 1\n");
    for v in &mesh.vertices {
        let _ = writeln!(s, "v {:?} {:?}", v[0], v[1]);
    }
    for q in &mesh.quads {
        let _ = writeln!(s, "q {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    let mut tags: Vec<&BoundaryTag> = mesh.tags.iter().collect();
    tags.sort_by(|a, b| {
        let ka = (a.vertices[0].min(a.vertices[1]), a.vertices[0].max(a.vertices[1]), &a.label);
        let kb = (b.vertices[0].min(b.vertices[1]), b.vertices[0].max(b.vertices[1]), &b.label);
        ka.cmp(&kb)
    });
    for t in tags {
        let _ = write!(s, "b {} {} {}", t.vertices[0] + 1, t.vertices[1] + 1, t.label);
        for v in &t.values {
            let _ = write!(s, " {v:?}");
        }
        s.push('\n');
    }
    s
}
