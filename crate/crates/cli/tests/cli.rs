//! End-to-end runs of the `fracvar` binary.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fracvar(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvar")).args(args).env("FRACVAR_OUTPUT_DIR", out).output().expect("binary runs")
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn list_is_stable_and_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let a = fracvar(&["list"], tmp.path());
    let b = fracvar(&["list"], tmp.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for id in [
        "ops-identities",
        "ibp-suite",
        "counterexample",
        "el-check",
        "isoperimetric",
        "noether",
        "falva",
        "sl-solve",
        "sl-converge",
        "direct-min",
    ] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
}

#[test]
fn counterexample_writes_csv_and_record() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fracvar(&["run", "--experiment", "counterexample", "--set", "n=4096"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("counterexample");
    let csv = std::fs::read_to_string(dir.join("counterexample.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,lhs,rhs,residual,tolerance,pass");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (lhs, rhs): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
    assert!((lhs - FRAC_PI_4).abs() < 2e-3 && (rhs + FRAC_PI_4).abs() < 2e-3);
    assert_eq!((row[4], row[5]), ("0.002", "true"));
    assert!(!csv.contains('\r'));

    let record: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("results.json")).unwrap()).unwrap();
    assert_eq!(record["experiment"], "counterexample");
    assert_eq!(record["passed"], true);
    assert_eq!(record["seed"], 0);
    for a in record["assertions"].as_array().unwrap() {
        assert!(a["tolerance"].is_number() && a["measured"].is_number() && a["traces"].is_string());
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let (t1, t2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["run", "--experiment", "ibp-suite", "--set", "n=2048", "--set", "seed=7"];
    assert!(fracvar(&args, t1.path()).status.success());
    assert!(fracvar(&args, t2.path()).status.success());
    let (a, b) = (read_dir_bytes(&t1.path().join("ibp-suite")), read_dir_bytes(&t2.path().join("ibp-suite")));
    assert_eq!(a.keys().collect::<Vec<_>>(), vec!["ibp.csv", "results.json"]);
    assert_eq!(a, b);
    let other = tempfile::tempdir().unwrap();
    let args = ["run", "--experiment", "ibp-suite", "--set", "n=2048", "--set", "seed=8"];
    assert!(fracvar(&args, other.path()).status.success());
    assert_ne!(a["ibp.csv"], read_dir_bytes(&other.path().join("ibp-suite"))["ibp.csv"]);
}

#[test]
fn classical_convergence_table_is_flat() {
    let tmp = tempfile::tempdir().unwrap();
    let args =
        ["run", "--experiment", "sl-converge", "--set", "alpha=1", "--set", "m_schedule=[2,4,8]", "--set", "n=1024"];
    let out = fracvar(&args, tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("sl-converge/convergence.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let l1: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((l1 - 1.0).abs() < 1e-2, "{line}");
    }
}

#[test]
fn config_file_with_overrides_and_dat_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sl.json");
    let target = tmp.path().join("explicit");
    let doc = serde_json::json!({
        "experiment": "sl-solve", "alpha": 0.75, "m": 16, "r": 3, "n": 4096,
        "output_dir": target.to_string_lossy(),
    });
    std::fs::write(&cfg, doc.to_string()).unwrap();
    let out = fracvar(&["run", cfg.to_str().unwrap(), "--set", "m=8", "--set", "r=2", "--set", "n=512"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = target.join("sl-solve");
    let dat = std::fs::read_to_string(dir.join("eigenfunction_1.dat")).unwrap();
    assert_eq!(dat.lines().count(), 1 + 513);
    assert!(dat.lines().skip(1).all(|l| l.split(' ').count() == 2));
    assert!(!dir.join("eigenfunction_3.dat").exists());
    let record: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("results.json")).unwrap()).unwrap();
    assert_eq!(record["inputs"]["m"], 8);
    assert_eq!(record["series"][0]["points"], 513);
}

#[test]
fn invalid_alpha_exits_with_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fracvar(&["run", "--experiment", "sl-solve", "--set", "alpha=1.3"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha must lie in (0.5,1)"));
    assert!(!tmp.path().join("sl-solve").exists());
}

#[test]
fn unknown_key_and_missing_experiment_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fracvar(&["run", "--experiment", "counterexample", "--set", "colour=red"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    assert_eq!(fracvar(&["run"], tmp.path()).status.code(), Some(2));
    assert_eq!(fracvar(&["run", "--experiment", "nope"], tmp.path()).status.code(), Some(2));
}

#[test]
fn failed_assertion_gives_nonzero_exit_and_still_writes_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["run", "--experiment", "counterexample", "--set", "n=256", "--set", "tolerances.lhs=1e-12"];
    let out = fracvar(&args, tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL lhs"));
    let record: Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("counterexample/results.json")).unwrap())
            .unwrap();
    assert_eq!(record["passed"], false);
}
