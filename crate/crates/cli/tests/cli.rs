use std::path::Path;
use std::process::{Command, Output};

use eqnn::channel::json::ChannelJson;
use eqnn::channel::TransferMatrix;
use serde_json::Value;

fn eqnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = eqnn(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write_channel(dir: &Path, name: &str, t: &TransferMatrix) -> String {
    let path = dir.join(name);
    let j = ChannelJson::from_transfer(t).unwrap();
    std::fs::write(&path, serde_json::to_string(&j).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn derive_presets_have_expected_dimensions() {
    for (preset, method, dim) in [
        ("z2-fig4", "nullspace", 8),
        ("z2-fig4", "choi", 8),
        ("su2-pool", "nullspace", 5),
        ("su2-pool", "choi", 5),
        ("su2-pool", "twirl", 5),
        ("trivial-1to1", "nullspace", 16),
        ("z2xz2-pool", "twirl", 13),
    ] {
        let v = json_ok(&["derive", "--preset", preset, "--method", method]);
        assert_eq!(v["dimension"], dim, "{preset} via {method}");
        assert!(v["max_residual"].as_f64().unwrap() < 1e-8);
        assert_eq!(v["elements"].as_array().unwrap().len(), dim);
    }
}

#[test]
fn derive_writes_basis_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("basis.json");
    let o = eqnn(&["derive", "--preset", "z2-fig4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let basis: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let first: ChannelJson = serde_json::from_value(basis["elements"][0].clone()).unwrap();
    assert_eq!(first.to_transfer().unwrap().in_dim, 2);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("basis.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "derive");
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn check_cptp_identity_and_transpose() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_channel(dir.path(), "id.json", &TransferMatrix::identity(2));
    let v = json_ok(&["check", "cptp", "--channel", &id]);
    assert_eq!(v["cptp"], true);
    let tr = write_channel(dir.path(), "t.json", &TransferMatrix::from_fn(2, 2, |r| r.transpose()));
    let v = json_ok(&["check", "cptp", "--channel", &tr]);
    assert_eq!(v["cp"], false);
    assert_eq!(v["tp"], true);
    assert!((v["min_eigenvalue"].as_f64().unwrap() + 1.0).abs() < 1e-10);
}

#[test]
fn check_equivariance_against_preset() {
    let dir = tempfile::tempdir().unwrap();
    // ρ ↦ Tr[ρ] I/2 is equivariant for every pair of representations
    let dep = TransferMatrix::from_fn(2, 2, |r| (eqnn::linalg::identity(2) * eqnn::linalg::trace(r)).scale(0.5));
    let path = write_channel(dir.path(), "dep.json", &dep);
    let v = json_ok(&["check", "equivariance", "--channel", &path, "--preset", "z2-fig4"]);
    assert_eq!(v["equivariant"], true);
    let id = write_channel(dir.path(), "id.json", &TransferMatrix::identity(2));
    let v = json_ok(&["check", "equivariance", "--channel", &id, "--preset", "z2-fig4"]);
    assert_eq!(v["equivariant"], false);
}

#[test]
fn check_feasible_pooling() {
    let v = json_ok(&["check", "feasible", "--pool", "0,1,0"]);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["boundary_distance"].as_f64().unwrap(), 0.0);
    let v = json_ok(&["check", "feasible", "--x", "0", "--y", "1", "--z", "1"]);
    assert_eq!(v["feasible"], false);
    let p = &v["projection"];
    let s = p["y"].as_f64().unwrap() + p["z"].as_f64().unwrap();
    assert!((s - 1.0).abs() < 1e-9);
    let v = json_ok(&["check", "feasible", "--pool", "-0.5,0,0"]);
    assert_eq!(v["feasible"], true);
    assert_eq!(eqnn(&["check", "feasible", "--x", "0"]).status.code(), Some(2));
}

#[test]
fn count_reports() {
    let v = json_ok(&["count", "--preset", "s3-qubits"]);
    assert_eq!(v["unitary_commutant"], 20);
    let v = json_ok(&["count", "--preset", "trivial-1to1"]);
    assert_eq!(v["net"], 12);
    assert_eq!(v["sum_m2"], 16);
    let v = json_ok(&["count", "--preset", "su2-2to2"]);
    assert_eq!(v["sum_m2"], 14);
    assert!(v["utilization"].as_f64().unwrap() >= 240.0 / 14.0 - 1e-9);
}

#[test]
fn train_is_deterministic_and_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s).display().to_string();
    let base = ["train", "--config", "heisenberg-smoke", "--epochs", "5", "--test-points", "10"];
    for (out, model) in [("a.json", "ma.json"), ("b.json", "mb.json")] {
        let mut args = base.to_vec();
        let (o, m) = (p(out), p(model));
        args.extend(["--out", &o, "--model-out", &m]);
        assert!(eqnn(&args).status.success());
    }
    let a = std::fs::read(p("a.json")).unwrap();
    assert_eq!(a, std::fs::read(p("b.json")).unwrap());
    let metrics: Value = serde_json::from_slice(&a).unwrap();
    assert!(metrics["final_train_accuracy"].is_number());
    assert!(metrics["test_accuracy"].is_number());
    assert_eq!(metrics["loss"].as_array().unwrap().len(), 5);

    let sweep = p("sweep.csv");
    let o = eqnn(&["phase-diagram", "--model-file", &p("ma.json"), "--points", "20", "--out", &sweep]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&sweep).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "alpha,f,predicted,threshold");
    assert_eq!(lines.len(), 21);
    assert!(dir.path().join("sweep.csv.manifest.json").exists());
}

#[test]
fn dataset_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = eqnn(&["dataset", "--n", "4", "--count", "4", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let d = eqnn::spin::Dataset::from_json(&v).unwrap();
    assert_eq!(d.len(), 4);
    assert_eq!(d.entries[0].label, 1);
    assert_eq!(d.entries[3].label, 0);
}

#[test]
fn exit_codes() {
    let o = eqnn(&["derive", "--preset", "no-such-preset"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid");
    let o = eqnn(&["dataset", "--n", "4", "--count", "3", "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));

    // a generator of infinite order never closes under enumeration
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"r_in": {"type": "explicit", "group": "U1", "kind": "finite", "dim": 2,
                           "generators": [{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[0.5403023058681398,0.8414709848078965]]}]},
                   "r_out": {"type": "pauli", "group": "U1", "generators": ["I"]}}"#;
    let path = dir.path().join("p.json");
    std::fs::write(&path, spec).unwrap();
    let o = eqnn(&["derive", "--problem", path.to_str().unwrap(), "--method", "twirl"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
