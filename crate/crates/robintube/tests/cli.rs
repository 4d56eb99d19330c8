use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const DISK: &str = r#"
version = 1
name = "disk"

[cross_section]
shape = "disk"
radius = 1.0
h = 0.25
gamma = 1.0

[curve]
preset = "straight"
length = 2.0

[run]
eps = [0.2, 0.1]
modes = 3
n_s = 16
"#;

const SQUARE: &str = r#"
version = 1
name = "square"

[cross_section]
shape = "rectangle"
x0 = -0.5
x1 = 0.5
y0 = -0.5
y1 = 0.5
h = 0.25
gamma = 0.5
gamma_segments = [{ tag = 1, gamma = 2.0 }]

[curve]
preset = "quadratic_well"
length = 4.0
k = 1.0
k1 = 1.0
alpha = [3.141592653589793]

[run]
eps = [0.1, 0.05]
modes = 2
n_s = 48

[tolerances]
blowup_distance = 1e-12
"#;

fn robintube(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("cfg.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_robintube"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .env("ROBINTUBE_OUT", dir.join("root"))
        .output()
        .unwrap()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let (stamp, body) = text.split_once('\n').unwrap();
    assert!(stamp.starts_with("# robintube-csv v1"));
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn straight_disk_tube_is_symmetric_with_free_levels() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = robintube(tmp.path(), DISK, &["run", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["branch"], "symmetric");
    for row in data_rows(&out.join("potential.csv")) {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    }
    let mu = data_rows(&out.join("mu.csv"));
    for (i, row) in mu.iter().enumerate() {
        let expect = (i as f64 * std::f64::consts::PI / 2.0).powi(2);
        let got: f64 = row[1].parse().unwrap();
        assert!((got - expect).abs() < 2e-3 * expect.max(1.0), "mu{i} = {got}, expected {expect}");
    }
    assert!(fs::read_to_string(out.join("levels.svg")).unwrap().starts_with("<svg"));
    assert!(s.get("timings").is_some());
}

#[test]
fn malformed_eps_exits_with_config_status() {
    let tmp = tempfile::tempdir().unwrap();
    let o = robintube(tmp.path(), DISK, &["sweep", "--eps", "1.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.eps[0]"));
}

#[test]
fn forced_branch_contradicting_rho0_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = DISK.replace("[run]", "[run]\nbranch = \"localized\"");
    let o = robintube(tmp.path(), &cfg, &["run"]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("|rho0|"), "{err}");
    let o = robintube(tmp.path(), SQUARE, &["effective"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn failed_checks_still_write_the_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let o = robintube(tmp.path(), SQUARE, &["run", "--comparison"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let out = tmp.path().join("root/square");
    let s = summary(&out);
    assert_eq!(s["branch"], "localized");
    assert_eq!(s["all_passed"], false);
    let failed: Vec<&str> = s["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"sweep.blowup_distance_final"), "{failed:?}");
    assert!(!failed.iter().any(|n| n.starts_with("sweep.localized_level")), "{failed:?}");
    assert!(s.get("timings").is_none());
    assert_eq!(data_rows(&out.join("spectral_report.csv")).len(), 4);
    assert!(out.join("blowup.csv").exists());
}

#[test]
fn comparison_runs_are_byte_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, w) in [(&a, "1"), (&b, "2")] {
        let o = robintube(tmp.path(), DISK, &["run", "--comparison", "--workers", w, "--out", dir.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 10);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn export_geometry_writes_centerline_and_surface() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("geo");
    let o = robintube(tmp.path(), SQUARE, &["export-geometry", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&out.join("centerline.csv"));
    assert_eq!(rows.len(), 49);
    let surface = fs::read_to_string(out.join("surface.txt")).unwrap();
    assert!(surface.starts_with("robintube-surface 1\nvertices "));
    let mesh = fs::read_to_string(out.join("mesh.txt")).unwrap();
    assert!(mesh.starts_with("robintube-mesh 1\n"));
}

#[test]
fn cross_section_and_check_write_only_their_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cs = tmp.path().join("cs");
    let o = robintube(tmp.path(), DISK, &["cross-section", "--out", cs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(cs.join("u0.csv").exists() && !cs.join("mu.csv").exists());
    let ck = tmp.path().join("ck");
    let o = robintube(tmp.path(), DISK, &["check", "--modes", "1", "--out", ck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(&ck).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["checks.csv", "summary.json"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS sweep.symmetric_error_decreasing[0]"), "{stdout}");
}
