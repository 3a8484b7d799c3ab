//! End-to-end checks of the binary: exit codes, output files, headers.

use std::path::Path;
use std::process::Command;

use zd_lab::fourier::TorusFunction;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zd-lab"))
}

fn write_datum(dir: &Path, name: &str, u0: &TorusFunction) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(u0).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn zd_three_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "zd", "--datum", &datum, "--t", "0.25", "--K", "256", "--kmax", "32", "--grid", "64",
            "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["zd_spectral_0.csv", "zd_quadrature_0.csv", "zd_characteristics_0.csv", "zd_diff.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let diff = std::fs::read_to_string(out.join("zd_diff.csv")).unwrap();
    assert!(diff.starts_with("# config="));
    let row = diff.lines().nth(2).unwrap();
    let fields: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    assert!(fields[1] <= 1e-5, "spectral vs quadrature {}", fields[1]);
    assert!(fields[2] <= 1e-5, "quadrature vs characteristics {}", fields[2]);
}

#[test]
fn zd_constant_datum() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "const3.json", &TorusFunction::constant(3.0));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "zd", "--datum", &datum, "--t", "7", "--K", "64", "--kmax", "8", "--grid", "16",
            "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("zd_spectral_0.csv")).unwrap();
    for line in text.lines().skip(2) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 3.0).abs() < 1e-8, "value {v}");
    }
}

#[test]
fn missing_datum_is_config_error() {
    let status = bin()
        .args(["zd", "--datum", "/nonexistent/u0.json", "--t", "0.1"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sweep_rejects_bad_epsilons() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    // not strictly decreasing
    let status = bin()
        .args(["sweep", "--datum", &datum, "--t", "1", "--eps", "0.1,0.2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // missing entirely -> clap usage error
    let status = bin().args(["sweep", "--datum", &datum, "--t", "1"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sweep_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "sweep", "--datum", &datum, "--t", "0.5", "--eps", "0.4,0.2", "--K", "64", "--kmax",
            "4", "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "epsilon,k_max,max_abs_error");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn bo_eps_writes_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "bo-eps", "--datum", &datum, "--t", "0.5", "--eps", "0.4", "--K", "64", "--kmax", "4",
            "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("bo_eps.csv")).unwrap();
    assert_eq!(text.lines().count(), 7); // header comment + columns + 5 ks
}

#[test]
fn burgers_dumps_branches() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "burgers", "--datum", &datum, "--t", "1.0", "--grid", "16", "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("branches.csv").exists());
}

#[test]
fn trotter_writes_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![0.5], vec![]));
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "trotter", "--datum", &datum, "--t", "0.3", "--steps", "2,4", "--grid", "256",
            "--cells", "256", "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("trotter.csv")).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "n,l1_error");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn raney_table_and_exit_codes() {
    let output = bin()
        .args(["raney", "--kmax", "1", "--dmax", "0", "--m-bound", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("1,0,1,1,0"), "table was:\n{stdout}");

    // vacuous enumeration at M=0 still succeeds
    let output = bin()
        .args(["raney", "--kmax", "1", "--dmax", "0", "--m-bound", "0"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8(output.stdout).unwrap().contains("1,0,0,0,0"));

    // blowing the enumeration budget is a config error
    let status = bin()
        .args(["raney", "--kmax", "4", "--dmax", "9", "--m-bound", "9"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let datum = write_datum(dir.path(), "cos.json", &TorusFunction::trig(0.0, vec![1.0], vec![]));
    let mut bytes = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("out{run}"));
        let status = bin()
            .args([
                "sweep", "--datum", &datum, "--t", "0.5", "--eps", "0.4,0.2", "--K", "64",
                "--kmax", "4", "--out", out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        bytes.push(std::fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}
