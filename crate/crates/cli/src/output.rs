//! Line-oriented sample files.
//!
//! ```text
//! # skinny-sem samples
//! mesh <path>
//! n <n>
//! fields x y u ...
//! element 0
//! <x> <y> <u> ...          n² lines, r-index outer, s-index inner
//! element 1
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, round-trip exact.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_fields<const K: usize>(
    path: &Path,
    mesh: &Path,
    n: usize,
    names: &[&str; K],
    elements: &[Vec<[f64; K]>],
) -> std::io::Result<()> {
    write_fields_with(path, mesh, n, names, elements, None)
}

pub fn write_fields_with<const K: usize>(
    path: &Path,
    mesh: &Path,
    n: usize,
    names: &[&str; K],
    elements: &[Vec<[f64; K]>],
    extra: Option<&str>,
) -> std::io::Result<()> {
    let mut s = String::from("# skinny-sem samples\n");
    let _ = writeln!(s, "mesh {}", mesh.display());
    let _ = writeln!(s, "n {n}");
    if let Some(line) = extra {
        let _ = writeln!(s, "{line}");
    }
    let _ = writeln!(s, "fields {}", names.join(" "));
    for (j, rows) in elements.iter().enumerate() {
        let _ = writeln!(s, "element {j}");
        for row in rows {
            let line: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
    }
    std::fs::write(path, s)
}
