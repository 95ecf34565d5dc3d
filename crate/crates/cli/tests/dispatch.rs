use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const D1: &str = "0 6 8\n6 0 10\n8 10 0\n";
const D3: &str = "0,2,2,1\n2,0,2,1\n2,2,0,1\n1,1,1,0\n";

fn mmds(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmds"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn mmds")
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d1.txt"), D1).unwrap();
    fs::write(dir.path().join("d3.txt"), D3).unwrap();
    dir
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn matrix(path: PathBuf) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect()
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn classic_reproduces_d1() {
    let dir = workspace();
    let out = mmds(
        dir.path(),
        &[
            "classic", "--input", "d1.txt", "--dim", "2", "--out", "emb.txt", "--report", "r.json",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let x = matrix(dir.path().join("emb.txt"));
    let target = [[0.0, 6.0, 8.0], [6.0, 0.0, 10.0], [8.0, 10.0, 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let d = ((x[i][0] - x[j][0]).powi(2) + (x[i][1] - x[j][1]).powi(2)).sqrt();
            assert!((d - target[i][j]).abs() < 1e-9);
        }
    }
    let report = json(dir.path().join("r.json"));
    assert_eq!(report["schema_version"], "1");
    assert_eq!(report["command"], "classic");
    assert!(report["results"]["max_distance_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn euclidean_test_rejects_d3() {
    let dir = workspace();
    let out = mmds(dir.path(), &["euclidean-test", "--input", "d3.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["is_euclidean"], false);
    assert!(report["results"]["min_eigenvalue"].as_f64().unwrap() < 0.0);
}

#[test]
fn usage_errors_exit_2() {
    let dir = workspace();
    for args in [
        &["classic", "--dim", "0", "--input", "d1.txt"][..],
        &["classic", "--input", "d1.txt"],
        &["classic", "--input", "d1.txt", "--dim", "2", "--bogus"],
        &["circle", "--n", "8", "--dim", "2", "--mode", "sideways"],
        &["converge-measure", "--input", "d1.txt"],
        &[
            "converge-measure",
            "--input",
            "d1.txt",
            "--steps",
            "3",
            "--sequence",
            "s.txt",
        ],
        &["no-such-command"],
    ] {
        assert_eq!(mmds(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1_with_message() {
    let dir = workspace();
    fs::write(dir.path().join("asym.txt"), "0 1\n2 0\n").unwrap();
    fs::write(dir.path().join("w.txt"), "0.5\n0.2\n0.1\n").unwrap();
    for (args, needle) in [
        (
            &["classic", "--input", "missing.txt", "--dim", "2"][..],
            "not found",
        ),
        (
            &["classic", "--input", "asym.txt", "--dim", "1"],
            "not symmetric",
        ),
        (
            &["classic", "--input", "d1.txt", "--dim", "4"],
            "target dimension",
        ),
        (&["circle", "--n", "8", "--dim", "3"], "even"),
        (
            &[
                "mm-mds",
                "--input",
                "d1.txt",
                "--weights",
                "w.txt",
                "--dim",
                "2",
            ],
            "sum to",
        ),
        (
            &["converge-circle", "--ns", "64,32", "--reference", "128"],
            "increasing",
        ),
        (
            &[
                "plot", "--input", "d1.txt", "--axes", "0,5", "--out", "p.svg",
            ],
            "out of range",
        ),
    ] {
        let out = mmds(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }
}

#[test]
fn reports_are_deterministic_and_checksummed() {
    let dir = workspace();
    let run = || {
        let out = mmds(dir.path(), &["classic", "--input", "d1.txt", "--dim", "2"]);
        assert!(out.status.success());
        out.stdout
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let report: Value = serde_json::from_slice(&a).unwrap();
    // sha256 of D1's exact bytes
    assert_eq!(
        report["parameters"]["input_sha256"],
        "9c4ede42ce54a10351fa3337a6436a4739e813647c204a0b38f0204aefff91f1"
    );
    fs::write(dir.path().join("d1b.txt"), D1.replace("10", "11")).unwrap();
    let other = mmds(dir.path(), &["euclidean-test", "--input", "d1b.txt"]);
    let other: Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_ne!(
        other["parameters"]["input_sha256"],
        report["parameters"]["input_sha256"]
    );
}

#[test]
fn sim2dis_writes_dissimilarities() {
    let dir = workspace();
    fs::write(dir.path().join("c.txt"), "1 0.5\n0.5 1\n").unwrap();
    let out = mmds(
        dir.path(),
        &["sim2dis", "--input", "c.txt", "--out", "d.txt"],
    );
    assert!(out.status.success());
    let d = matrix(dir.path().join("d.txt"));
    assert_eq!(d[0][0], 0.0);
    assert!((d[0][1] - 1.0).abs() < 1e-15);
}

#[test]
fn mm_mds_with_uniform_weights_matches_classic() {
    let dir = workspace();
    fs::write(dir.path().join("w.txt"), "2\n2\n2\n").unwrap();
    let out = mmds(
        dir.path(),
        &[
            "mm-mds",
            "--input",
            "d1.txt",
            "--weights",
            "w.txt",
            "--normalize-weights",
            "--dim",
            "2",
            "--report",
            "mm.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let classic = mmds(dir.path(), &["classic", "--input", "d1.txt", "--dim", "2"]);
    let classic: Value = serde_json::from_slice(&classic.stdout).unwrap();
    let mm = json(dir.path().join("mm.json"));
    let ell = numbers(&classic["results"]["eigenvalues"]);
    let lam = numbers(&mm["results"]["eigenvalues"]);
    for (l, e) in lam.iter().zip(&ell) {
        assert!((l - e / 3.0).abs() < 1e-10);
    }
    assert!(mm["parameters"]["weights_sha256"].is_string());
}

#[test]
fn nystrom_at_training_points_reproduces_eigenfunctions() {
    let dir = workspace();
    let out = mmds(
        dir.path(),
        &[
            "nystrom",
            "--input",
            "d1.txt",
            "--cross",
            "d1.txt",
            "--components",
            "0,1",
            "--out",
            "phi.txt",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let phi = matrix(dir.path().join("phi.txt"));
    assert_eq!(phi.len(), 3);
    assert_eq!(phi[0].len(), 2);
    // uniform weights: each eigenfunction has unit mean square
    for c in 0..2 {
        let ms: f64 = phi.iter().map(|r| r[c] * r[c]).sum::<f64>() / 3.0;
        assert!((ms - 1.0).abs() < 1e-9);
    }
}

#[test]
fn circle_compare_agrees() {
    let dir = workspace();
    let out = mmds(
        dir.path(),
        &["circle", "--n", "64", "--dim", "4", "--mode", "compare"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["results"]["distance_max_error"].as_f64().unwrap() < 1e-8);
    assert!(report["results"]["spectrum_max_error"].as_f64().unwrap() < 1e-8 * 64.0);
}

#[test]
fn convergence_commands_report_traces() {
    let dir = workspace();
    let out = mmds(
        dir.path(),
        &[
            "converge-circle",
            "--ns",
            "16,32,64",
            "--reference",
            "128",
            "--top-k",
            "4",
        ],
    );
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let trace = numbers(&report["results"]["distances"]);
    assert!(trace.windows(2).all(|w| w[1] < w[0]));

    let run = |seed: &str| {
        let out = mmds(
            dir.path(),
            &[
                "converge-measure",
                "--input",
                "d1.txt",
                "--steps",
                "5",
                "--seed",
                seed,
            ],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
    let report: Value = serde_json::from_slice(&run("7")).unwrap();
    let tv = numbers(&report["results"]["tv_distances"]);
    assert_eq!(tv.len(), 6);
    assert_eq!(*tv.last().unwrap(), 0.0);

    fs::write(dir.path().join("seq.txt"), "0.5 0.3 0.2\n0.4 0.3 0.3\n").unwrap();
    let out = mmds(
        dir.path(),
        &[
            "converge-measure",
            "--input",
            "d1.txt",
            "--sequence",
            "seq.txt",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn plot_writes_svg() {
    let dir = workspace();
    assert!(mmds(
        dir.path(),
        &["classic", "--input", "d1.txt", "--dim", "2", "--out", "e.txt"]
    )
    .status
    .success());
    let out = mmds(dir.path(), &["plot", "--input", "e.txt", "--out", "p.svg"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = fs::read_to_string(dir.path().join("p.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.contains("dim 0") && svg.contains("dim 1"));
}
