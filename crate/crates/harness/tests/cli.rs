use std::path::Path;
use std::process::{Command, Output};

use serde_json::json;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_convexreg"));
    c.env_remove("RUST_LOG");
    for (k, _) in std::env::vars() {
        if k.starts_with("CONVEXREG_") {
            c.env_remove(k);
        }
    }
    c
}

fn write_json(dir: &Path, name: &str, v: serde_json::Value) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    write_json(
        dir,
        "small.json",
        json!({
            "suites": ["duality", "simplex-sharp"],
            "calibration_seed": 5,
            "corpus": [
                { "id": "cube", "body": { "type": "cube", "half": 1.0 } },
                { "id": "vpoly", "body": { "type": "random_vpolytope", "seed": 3 } }
            ],
            "suite_dimensions": { "duality": [3], "simplex-sharp": [4] },
            "budgets": { "directions": 64, "identity_directions": 32 }
        }),
    )
}

fn run_into(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .args(["run", "--config"])
        .arg(config)
        .args(["--seed", "9", "--out"])
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn validate_accepts_default_config() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let out = bin().args(["validate", "--config"]).arg(root).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("config ok"));
}

#[test]
fn empty_corpus_is_invalid_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_json(tmp.path(), "empty.json", json!({ "suites": ["duality"], "calibration_seed": 1, "corpus": [] }));
    let out_dir = tmp.path().join("out");
    let out = run_into(&cfg, &out_dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
    let v = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(v.status.code(), Some(2));
}

#[test]
fn run_writes_identical_reports_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let first = run_into(&cfg, &a, &["--jobs", "1"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run_into(&cfg, &b, &[]);
    assert!(second.status.success());
    for name in ["duality.csv", "simplex-sharp.csv", "summary.json"] {
        let x = std::fs::read(a.join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.join(name)).unwrap(), "{name} differs");
    }
    let csv = std::fs::read_to_string(a.join("duality.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "suite,inequality_id,n,k,body,seed,lhs,lhs_se,rhs,rhs_se,ratio,const_calibrated,status,ms"
    );
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",pass,")));
}

#[test]
fn suite_filter_writes_only_that_suite() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run_into(&cfg, &out_dir, &["--suite", "simplex-sharp"]);
    assert!(out.status.success());
    assert!(out_dir.join("simplex-sharp.csv").is_file());
    assert!(!out_dir.join("duality.csv").exists());
    let missing = run_into(&cfg, &tmp.path().join("other"), &["--suite", "classics"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn failing_rows_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_json(
        tmp.path(),
        "strict.json",
        json!({
            "suites": ["classics"],
            "calibration_seed": 5,
            "corpus": [{ "id": "cube", "body": { "type": "cube", "half": 1.0 } }],
            "suite_dimensions": { "classics": [2] },
            "budgets": { "directions": 64, "oracle_directions": 2000, "moment_directions": 500 },
            "tolerances": { "bourgain_milman_c": 1.0 }
        }),
    );
    let out = run_into(&cfg, &tmp.path().join("out"), &[]);
    // The square's volume product is 8/π² < 1, so a Bourgain-Milman constant of 1 fails.
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn environment_overrides_are_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = bin().env("CONVEXREG_DIRECTIONS", "many").args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = bin().env("CONVEXREG_DIRECTIONS", "32").args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert!(ok.status.success());
}

#[test]
fn body_info_reports_radii_and_barycenter() {
    let tmp = tempfile::tempdir().unwrap();
    let body = write_json(tmp.path(), "cube.json", json!({ "type": "cube", "half": 2.0 }));
    let out = bin().arg("body-info").arg(&body).args(["--dim", "3", "--directions", "2000"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("symmetric   true"));
    assert!(text.contains("inner       2e0"));
    assert!(text.contains("barycenter  ["));
    let bad = bin().arg("body-info").arg(tmp.path().join("missing.json")).output().unwrap();
    assert!(!bad.status.success());
}
