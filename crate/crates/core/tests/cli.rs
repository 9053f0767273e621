use std::path::{Path, PathBuf};
use std::process::Command;

use plateau_lab::geom::obj::{read_mesh, write_mesh};
use plateau_lab::harness::{catalog_matches, check_catalog, ExampleConfig, ExampleId, ExampleReport};
use plateau_lab::solver::{cone_disk, SolveReport};
use plateau_lab::constructions::build_tau;
use plateau_lab::geom::Point3;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plateau-lab"))
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read_report(dir: &Path) -> (String, ExampleReport) {
    let text = std::fs::read_to_string(dir.join("report.json")).unwrap();
    let r = serde_json::from_str(&text).unwrap();
    (text, r)
}

#[test]
fn shipped_configs_are_the_defaults() {
    for id in ExampleId::ALL {
        let path = repo_root().join(format!("configs/example_{id}.json"));
        let cfg: ExampleConfig = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(cfg, ExampleConfig::default_for(id), "{}", path.display());
    }
}

#[test]
fn verify_writes_a_report_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (id, extra) in [("IIIB", vec![]), ("II", vec![]), ("IIIA", vec![]), ("I", vec!["--param", "eps_sequence=[0.2]"])] {
        let out = dir.path().join(id);
        let config = repo_root().join(format!("configs/example_{id}.json"));
        let st = bin()
            .args(["verify", id, "--config", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()])
            .args(&extra)
            .output()
            .unwrap();
        let (text, report) = read_report(&out);
        assert_eq!(st.status.success(), report.pass, "{id}");
        assert_eq!(report.to_json().unwrap(), text, "{id} report does not round-trip");
        for a in &report.artifacts {
            assert!(out.join(a).is_file(), "{id}: missing {a}");
        }
        let catalog = check_catalog(Some(report.example_id));
        for c in &report.checks {
            assert!(catalog.iter().any(|e| catalog_matches(e.name, &c.name)), "{id}: {} not in the catalog", c.name);
        }
    }
    // the bridged pair cannot reach the closed-form competitor area
    let (_, r1) = read_report(&dir.path().join("I"));
    assert!(!r1.pass);
    assert!(r1.failed_checks().all(|c| c.name.starts_with("b.area_below_ehat_area") || c.name.starts_with("c.area_near_sigma_hat") || c.name.starts_with("c.sigma_hat_within_1.1")));
    for id in ["II", "IIIA", "IIIB"] {
        assert!(read_report(&dir.path().join(id)).1.pass, "{id}");
    }
}

#[test]
fn failing_threshold_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let st = bin()
        .args(["verify", "IIIB", "--param", "params.delta=0.2", "--param", "params.c=0.3", "--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    let (_, r) = read_report(&out);
    assert!(!r.check("a.slice_minimizes").unwrap().pass);
    assert_eq!(r.params["regime"], "disk minimizing");
}

#[test]
fn bad_input_is_an_error() {
    let st = bin().args(["verify", "I", "--param", "eps_sequence=[0.95]"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("threshold"));
    let st = bin().args(["verify", "II", "--param", "nope=1"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = bin().args(["ledger", "no_such_entry"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn list_checks_prints_the_catalog() {
    let out = bin().args(["verify", "--list-checks"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), check_catalog(None).len());
    let out = bin().args(["verify", "II", "--list-checks"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), check_catalog(Some(ExampleId::II)).len());
}

#[test]
fn ledger_prints_entries() {
    let out = bin().args(["ledger", "sigma_hat_area", "--param", "C=10"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let x = v[0]["value"].as_f64().unwrap();
    assert!((x - 2.0 * (10.0 + 101f64.sqrt())).abs() < 1e-12);
}

#[test]
fn build_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let st = bin().args(["build", "IIIB", "--out-dir", dir.path().to_str().unwrap()]).output().unwrap();
    assert!(st.status.success());
    for f in ["gamma_c.obj", "alpha_d.obj", "sigma_c.obj", "s_d.obj"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }

    let start = cone_disk(&build_tau(1.0), Point3::new(0.0, 0.0, 0.5), 0.2).unwrap();
    let input = dir.path().join("cone.obj");
    write_mesh(&start, &input).unwrap();
    let opts = dir.path().join("opts.json");
    std::fs::write(&opts, r#"{"max_iters": 500, "grad_tol": 1e-6}"#).unwrap();
    let (out, rep) = (dir.path().join("flat.obj"), dir.path().join("solve.json"));
    let st = bin()
        .args(["solve", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .args(["--opts", opts.to_str().unwrap(), "--report", rep.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    let r: SolveReport = serde_json::from_str(&std::fs::read_to_string(rep).unwrap()).unwrap();
    assert!(r.converged && (r.final_area - 4.0).abs() < 1e-6);
    let m = read_mesh(&out).unwrap();
    assert!((m.area() - r.final_area).abs() < 1e-9);
}
