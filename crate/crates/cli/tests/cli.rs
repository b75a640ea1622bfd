use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use skinny_sem::bench::BenchReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skinny-sem"))
}

fn mesh(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../meshes").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value printed on the `key value` line of a report.
fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn tunnel_with_inlet(dir: &Path, speed: &str) -> PathBuf {
    let text = std::fs::read_to_string(mesh("tunnel.mesh")).unwrap();
    let path = dir.join("tunnel.mesh");
    std::fs::write(&path, text.replace("inlet 1.0 0.0", &format!("inlet {speed} 0.0"))).unwrap();
    path
}

#[test]
fn solve_sine_on_the_square() {
    let o = run(&[
        "solve",
        "--mesh",
        mesh("square.mesh").to_str().unwrap(),
        "--n",
        "24",
        "--rhs",
        "-2*pi^2*sin(pi*x)*sin(pi*y)",
        "--exact",
        "sin(pi*x)*sin(pi*y)",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let err = field(&stdout(&o), "max-error");
    assert!(err <= 1e-10, "max error {err}");
}

#[test]
fn solve_on_the_skinny_pair() {
    let o = run(&[
        "solve",
        "--mesh",
        mesh("skinny_pair.mesh").to_str().unwrap(),
        "--n",
        "20",
        "--rhs",
        "0",
        "--exact",
        "exp(x)*sin(y)",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let err = field(&stdout(&o), "max-error");
    assert!(err <= 1e-9, "max error {err}");
}

#[test]
fn malformed_mesh_exits_with_format_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mesh");
    std::fs::write(&path, "quadmesh 1\nv 0 0\nv 1 zero\nv 1 1\nv 0 1\nq 1 2 3 4\n").unwrap();
    let o = run(&["mesh-info", "--mesh", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_mesh_exits_with_io_code() {
    let o = run(&["mesh-info", "--mesh", "/nonexistent/nothing.mesh"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_expression_exits_with_format_code() {
    let o = run(&["solve", "--mesh", mesh("square.mesh").to_str().unwrap(), "--rhs", "sqrt(x)"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 1"));
}

#[test]
fn bad_order_exits_with_usage_code() {
    let o = run(&["solve", "--mesh", mesh("square.mesh").to_str().unwrap(), "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pure_neumann_exits_with_solver_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neumann.mesh");
    std::fs::write(
        &path,
        "quadmesh 1\nv 1 1\nv -1 1\nv -1 -1\nv 1 -1\nq 1 2 3 4\n\
         b 1 2 neumann 0\nb 2 3 neumann 0\nb 3 4 neumann 0\nb 4 1 neumann 0\n",
    )
    .unwrap();
    let o = run(&["solve", "--mesh", path.to_str().unwrap(), "--n", "8", "--rhs", "0"]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn screened_with_zero_k2_matches_poisson() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);
    let common = |pde: &str, file: &Path| {
        let mut c = bin();
        c.args(["solve", "--mesh", mesh("triangle.mesh").to_str().unwrap(), "--n", "12"]);
        c.args(["--rhs", "4", "--bc", "x*x+y*y", "--pde", pde, "--out", file.to_str().unwrap()]);
        c
    };
    let a = common("poisson", &out("a.txt")).output().unwrap();
    let b = common("screened", &out("b.txt")).args(["--k2", "0"]).output().unwrap();
    assert!(a.status.success() && b.status.success());
    let fa = std::fs::read(out("a.txt")).unwrap();
    let fb = std::fs::read(out("b.txt")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn solve_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.txt"));
        let o = run(&[
            "solve",
            "--mesh",
            mesh("triangle_pair.mesh").to_str().unwrap(),
            "--n",
            "10",
            "--rhs",
            "sin(x)*cos(y)",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert!(text.starts_with("# skinny-sem samples"));
    // 6 elements of 10 × 10 samples
    let samples = text.lines().filter(|l| !l.starts_with('#') && l.split_whitespace().count() == 3).count();
    assert_eq!(samples, 600);
}

#[test]
fn cond_bench_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.json");
    let o = run(&["cond-bench", "--n", "8", "--eps", "1,1e-3,1e-6", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: BenchReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.n, 8);
    assert_eq!(report.eps, vec![1.0, 1e-3, 1e-6]);
    assert_eq!(report.kappa_inf.len(), 3);
    let again: BenchReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
}

#[test]
fn cond_bench_rejects_ascending_sweep() {
    let o = run(&["cond-bench", "--n", "8", "--eps", "1e-3,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ns_run_writes_frames_at_cadence() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let o = run(&[
        "ns-run",
        "--mesh",
        mesh("tunnel.mesh").to_str().unwrap(),
        "--n",
        "8",
        "--steps",
        "200",
        "--cadence",
        "50",
        "--out",
        frames.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> =
        std::fs::read_dir(&frames).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["frame_000000.txt", "frame_000050.txt", "frame_000100.txt", "frame_000150.txt", "frame_000200.txt"]);
}

#[test]
fn ns_run_from_rest_with_still_inlet_stays_at_rest() {
    let dir = tempfile::tempdir().unwrap();
    let m = tunnel_with_inlet(dir.path(), "0.0");
    let frames = dir.path().join("frames");
    let o = run(&[
        "ns-run",
        "--mesh",
        m.to_str().unwrap(),
        "--steps",
        "20",
        "--cadence",
        "10",
        "--out",
        frames.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut count = 0;
    for entry in std::fs::read_dir(&frames).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        for line in text.lines() {
            let cols: Vec<f64> = match line.split_whitespace().map(str::parse).collect() {
                Ok(c) => c,
                Err(_) => continue,
            };
            if cols.len() == 6 {
                count += 1;
                assert!(cols[2..].iter().all(|v| *v == 0.0), "{line}");
            }
        }
    }
    // 3 frames of 14 elements with 8 × 8 samples
    assert_eq!(count, 3 * 14 * 64);
}

#[test]
fn ns_run_blow_up_exits_with_instability_code() {
    let dir = tempfile::tempdir().unwrap();
    let m = tunnel_with_inlet(dir.path(), "1000.0");
    let frames = dir.path().join("frames");
    let o = run(&[
        "ns-run",
        "--mesh",
        m.to_str().unwrap(),
        "--dt",
        "1e-3",
        "--steps",
        "200",
        "--cadence",
        "0",
        "--out",
        frames.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(6));
    assert!(frames.join("frame_last_good.txt").exists());
}

#[test]
fn mesh_info_square() {
    let o = run(&["mesh-info", "--mesh", mesh("square.mesh").to_str().unwrap()]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(field(&t, "vertices"), 4.0);
    assert_eq!(field(&t, "edges"), 4.0);
    assert_eq!(field(&t, "faces"), 1.0);
    assert_eq!(field(&t, "interior-edges"), 0.0);
    assert!((field(&t, "skinniness-min") - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn mesh_info_triangle() {
    let o = run(&["mesh-info", "--mesh", mesh("triangle.mesh").to_str().unwrap()]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(field(&t, "vertices"), 7.0);
    assert_eq!(field(&t, "faces"), 3.0);
    assert_eq!(field(&t, "interior-edges"), 3.0);
    assert_eq!(field(&t, "boundary-edges"), 6.0);
}

#[test]
fn mesh_info_skinny_pair() {
    let o = run(&["mesh-info", "--mesh", mesh("skinny_pair.mesh").to_str().unwrap()]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(field(&t, "faces"), 2.0);
    assert_eq!(field(&t, "interior-edges"), 1.0);
    assert!(field(&t, "skinniness-min") < 1e-5);
}
