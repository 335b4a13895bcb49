use std::path::Path;
use std::process::Command;

fn igw(args: &[&str], out: &Path) -> (Option<i32>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_igw-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    (o.status.code(), String::from_utf8_lossy(&o.stderr).into_owned())
}

#[test]
fn passing_run_exits_zero_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = igw(&["exact-solution", "--set", "grid.nx=32", "--set", "grid.nz=32"], dir.path());
    assert_eq!(code, Some(0), "{err}");
    for name in ["report.json", "invariants.csv", "exact_00.swc"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    for check in report["checks"].as_array().unwrap() {
        assert!(check["tolerance"].as_f64().is_some(), "{check}");
    }
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = igw(&["exact-solution", "--set", "tolerances.pde_residual=1e-30"], dir.path());
    assert_eq!(code, Some(1), "{err}");
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = igw(&["simulate", "--set", "grid.nx=7"], dir.path());
    assert_eq!(code, Some(2));
    assert!(err.contains("nx must be even and ≥ 8"), "{err}");
    let (code, _) = igw(&["simulate", "--config", "/nonexistent/run.toml"], dir.path());
    assert_eq!(code, Some(2));
}

#[test]
fn unknown_subcommand_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = igw(&["integrate"], dir.path());
    assert_eq!(code, Some(2));
}

#[test]
fn blow_up_exits_three_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    // products of gradients overflow on the first stage
    let (code, err) = igw(
        &["simulate", "--set", "initial.kind=gaussian", "--set", "initial.psi=1e200", "--set", "time.t_end=1e-199"],
        dir.path(),
    );
    assert_eq!(code, Some(3), "{err}");
    assert!(err.contains("numerical instability at t="), "{err}");
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["abort"]["t"].as_f64().is_some());
    assert!(dir.path().join("invariants.csv").exists());
    assert!(dir.path().join("checkpoint_000000.swc").exists());
}
