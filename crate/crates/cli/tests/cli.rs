use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use normweingarten::norm_geometry::NormParameter;
use normweingarten::profile_solver::solve_constant_k2;
use normweingarten::verifier::{verify_branch, DEFAULT_EPSILON};
use normweingarten::BranchSign;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normweingarten"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

struct Obj {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

fn read_obj(file: &str) -> Obj {
    let text = std::fs::read_to_string(file).unwrap();
    let mut obj = Obj {
        vertices: Vec::new(),
        faces: Vec::new(),
    };
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let v: Vec<f64> = parts.map(|t| t.parse().unwrap()).collect();
                obj.vertices.push([v[0], v[1], v[2]]);
            }
            Some("f") => {
                let f: Vec<usize> = parts.map(|t| t.parse().unwrap()).collect();
                assert!(f.iter().all(|&i| i >= 1 && i <= obj.vertices.len()));
                obj.faces.push([f[0] - 1, f[1] - 1, f[2] - 1]);
            }
            other => panic!("unexpected OBJ line {other:?}"),
        }
    }
    obj
}

impl Obj {
    /// (Euler characteristic, boundary edges).
    fn topology(&self) -> (i64, usize) {
        let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *uses.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let chi = self.vertices.len() as i64 - uses.len() as i64 + self.faces.len() as i64;
        (chi, uses.values().filter(|&&n| n == 1).count())
    }
}

#[test]
fn classify_prints_case_and_domain() {
    let o = run(&["classify", "--m", "2", "--lambda", "1", "--mu", "-1", "--c1", "0.2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // Band ends solve α² − 2α + 0.4 = 0.
    let (lo, hi) = (1.0 - 0.6f64.sqrt(), 1.0 + 0.6f64.sqrt());
    assert!((lo - 0.2254).abs() < 1e-4 && (hi - 1.7746).abs() < 1e-4);
    let text = stdout(&o);
    assert!(text.contains("gen-pos-neg-band, domain (0.2254"), "{text}");
    assert!(text.contains(", 1.7745"), "{text}");

    let o = run(&["classify", "--m", "2", "--lambda", "0.5", "--mu", "0", "--c2", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("domain (1, inf)"));
}

#[test]
fn classify_without_surface_exits_two() {
    let o = run(&["classify", "--m", "2", "--lambda", "1", "--mu", "-1", "--c1", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("c₁ ≥ λ^λ/(λ+1)"), "{}", stderr(&o));
}

#[test]
fn classify_json_lists_pieces() {
    let o = run(&["classify", "--lambda", "1", "--mu", "-1", "--c1", "0.2", "--as-json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pieces"][0]["tag"], "gen-pos-neg-band");
}

#[test]
fn sphere_mesh_lies_on_the_unit_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let obj = path(dir.path(), "s.obj");
    let o = run(&[
        "generate", "--m", "2", "--relation", "k2-const", "--height", "0.5", "--recipe", "cap",
        "--csv", &path(dir.path(), "s.csv"), "--obj", &obj, "--segments", "24",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mesh = read_obj(&obj);
    for [x, y, z] in &mesh.vertices {
        let phi = (x * x + y * y).powi(2) + (z - 0.5).powi(4);
        assert!((phi - 1.0).abs() < 1e-6, "{phi}");
    }
    assert_eq!(mesh.topology(), (2, 0));
}

#[test]
fn arc_torus_mesh_is_closed_with_euler_zero() {
    let dir = tempfile::tempdir().unwrap();
    let obj = path(dir.path(), "t.obj");
    let json = path(dir.path(), "t.json");
    let o = run(&[
        "generate", "--lambda", "0", "--mu", "1", "--c1", "2", "--recipe", "arc-torus",
        "--csv", &path(dir.path(), "t.csv"), "--obj", &obj, "--json", &json, "--segments", "16",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_obj(&obj).topology(), (0, 0));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(meta["topology"], "torus");
}

#[test]
fn homogeneous_cap_has_two_poles() {
    let dir = tempfile::tempdir().unwrap();
    let obj = path(dir.path(), "h.obj");
    let json = path(dir.path(), "h.json");
    let o = run(&[
        "generate", "--lambda", "-1.5", "--mu", "0", "--c2", "1", "--recipe", "cap",
        "--csv", &path(dir.path(), "h.csv"), "--obj", &obj, "--json", &json, "--segments", "16",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mesh = read_obj(&obj);
    let poles = mesh.vertices.iter().filter(|v| v[0] == 0.0 && v[1] == 0.0).count();
    assert_eq!(poles, 2);
    assert_eq!(mesh.topology(), (2, 0));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(meta["topology"], "sphere-like");
    assert_eq!(meta["pieces"][0]["height_span"]["status"], "finite");
}

#[test]
fn verify_round_trips_the_generated_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "s.csv");
    let report = path(dir.path(), "r.json");
    assert!(run(&["generate", "--relation", "k2-const", "--csv", &csv]).status.success());
    let o = run(&["verify", "--relation", "k2-const", "--profile", &csv, "--report", &report]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let from_file = r["residual_max"].as_f64().unwrap();
    assert!(from_file < 1e-8);

    let p = NormParameter::new(2).unwrap();
    let direct = verify_branch(&solve_constant_k2(p, 0.0, BranchSign::Plus).unwrap(), DEFAULT_EPSILON).unwrap();
    assert!((from_file - direct.residual_max).abs() < 1e-12);
    assert!((r["residual_rms"].as_f64().unwrap() - direct.residual_rms).abs() < 1e-12);
    assert_eq!(r["scanned"].as_u64().unwrap() as usize, direct.scanned);
}

#[test]
fn verify_homogeneous_profile_at_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "h.csv");
    let job = ["--lambda", "0.5", "--mu", "0", "--c2", "1"];
    let gen: Vec<&str> = ["generate"].iter().chain(&job).copied().chain(["--csv", &csv]).collect();
    assert!(run(&gen).status.success());
    let ver: Vec<&str> = ["verify"].iter().chain(&job).copied().chain(["--profile", &csv, "--tol", "1e-6"]).collect();
    let o = run(&ver);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn corrupted_table_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "s.csv");
    assert!(run(&["generate", "--relation", "k2-const", "--csv", &csv]).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let cols: Vec<&str> = lines[10].split(',').collect();
    lines[10] = format!("{},garbage,{}", cols[0], cols[2]);
    std::fs::write(&csv, lines.join("\n") + "\n").unwrap();
    let o = run(&["verify", "--relation", "k2-const", "--profile", &csv]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn impossible_tolerance_exits_one() {
    let o = run(&["verify", "--lambda", "0.5", "--mu", "0", "--c2", "1", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let csv = path(dir.path(), &format!("{k}.csv"));
        let json = path(dir.path(), &format!("{k}.json"));
        let o = run(&[
            "generate", "--lambda", "1", "--mu", "-1", "--c1", "0.2", "--recipe", "cap",
            "--csv", &csv, "--json", &json,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((std::fs::read(csv).unwrap(), std::fs::read(json).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.starts_with("alpha,u,du\n") && !text.contains('\r'));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = path(dir.path(), "job.toml");
    std::fs::write(&config, "m = 2\nlambda = 1.0\nmu = -1.0\nc1 = 0.6\n").unwrap();
    assert_eq!(run(&["classify", "--config", &config]).status.code(), Some(2));
    let o = run(&["classify", "--config", &config, "--c1", "0.2"]);
    assert!(o.status.success());
    std::fs::write(&config, "lambda = 1.0\nmu = -1.0\nc1 = 0.2\nunknown = 1\n").unwrap();
    assert_eq!(run(&["classify", "--config", &config]).status.code(), Some(1));
}

#[test]
fn log_level_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_normweingarten"))
        .args(["generate", "--relation", "k2-const", "--recipe", "cap"])
        .env("WEINGARTEN_LOG", "info")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stderr(&o).contains("SphereLike"), "{}", stderr(&o));
}

#[test]
fn scan_reports_sign_changes_without_claims() {
    let o = run(&[
        "scan-coincidence", "--lambda", "-0.5", "--mu", "1", "--recipe", "gen-mid-periodic",
        "--from", "1.5", "--to", "4", "--steps", "4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("constant,measure,value,note\n"));
    assert!(text.lines().count() >= 5);
    assert!(!text.contains("torus"));
}
