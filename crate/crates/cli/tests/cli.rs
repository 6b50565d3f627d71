use std::process::{Command, Output};

use covop_core::io;

fn covop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covop")).args(args).env_remove("COVOP_SEED").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn matrix_prints_full_window() {
    let out = covop(&["matrix", "--family", "ones", "--window", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,m,re,im\n"));
    let m = io::matrix_from_csv(&text, Some(2)).unwrap();
    assert_eq!(m, covop_core::WindowMatrix::ones(2));
}

#[test]
fn measure_of_full_circle_for_ones_is_identity() {
    let out = covop(&["measure", "--family", "ones", "--set", "full", "--window", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m = io::matrix_from_csv(&stdout(&out), None).unwrap();
    assert_eq!(m, covop_core::WindowMatrix::identity(3));
}

#[test]
fn norm_outputs() {
    let out = covop(&["norm", "--family", "identity", "--window", "3", "--norm", "f"]);
    assert_eq!(stdout(&out).trim(), "3.141592653589793");
    let out = covop(&["norm", "--family", "sign", "--window", "4", "--norm", "1inf"]);
    assert_eq!(stdout(&out).trim(), "1");
    let all = stdout(&covop(&["norm", "--family", "sign", "--window", "4", "--norm", "all"]));
    for key in ["norm_1inf=", "multiplier_lower=", "multiplier_upper=", "observable_lower=", "first_moment="] {
        assert!(all.contains(key), "{key} missing in {all}");
    }
}

#[test]
fn moment_and_transform() {
    let out = covop(&["moment", "--family", "ones", "--s", "1", "--window", "1"]);
    let t1 = io::matrix_from_csv(&stdout(&out), None).unwrap();
    assert!((t1.at(0, 0).re - std::f64::consts::PI).abs() < 1e-15);
    assert!((t1.at(0, 1).im - 1.0).abs() < 1e-15);

    let out = covop(&["moment", "--family", "sign", "--cyclic", "1", "--window", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = covop(&["transform", "--family", "ones", "--z", "0.1,0", "--window", "1"]);
    assert!(out.status.success());
    let out = covop(&["transform", "--family", "ones", "--z", "0.5,0", "--window", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: OutsideDisk"));
}

#[test]
fn reconstruct_sweep_decreases() {
    let out = covop(&["reconstruct", "--family", "sign", "--set", "0:1", "--window", "2", "--M-sweep", "1,4,16", "--grid", "64"]);
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[2][2] < rows[0][2]);
}

#[test]
fn density_writes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let phi = dir.path().join("phi.csv");
    std::fs::write(&phi, "n,re,im\n0,1,0\n1,0,1\n").unwrap();
    let p = phi.to_str().unwrap();
    let out = covop(&["density", "--family", "ones", "--phi", p, "--psi", p, "--grid", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("theta,re,im\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn report_formats() {
    let text = stdout(&covop(&["report", "--family", "sign", "--sweep", "16,32,64"]));
    assert!(text.contains("NOT_EXTENSIBLE_EVIDENCE"));
    let csv = stdout(&covop(&["report", "--family", "ones", "--sweep", "8,16", "--format", "csv"]));
    assert!(csv.starts_with("quantity,N,value\n"));
    assert!(csv.contains("fit,slope,classification"));
    assert!(csv.lines().last().unwrap().starts_with("verdict,EXTENSIBLE_CERTIFIED,"));
}

#[test]
fn seed_from_environment_matches_flag() {
    let args = ["norm", "--family", "log", "--window", "4", "--norm", "m"];
    let flag = Command::new(env!("CARGO_BIN_EXE_covop")).args(args).args(["--seed", "7"]).output().unwrap();
    let env = Command::new(env!("CARGO_BIN_EXE_covop")).args(args).env("COVOP_SEED", "7").output().unwrap();
    assert!(flag.status.success());
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["norm", "--family", "nope", "--window", "2", "--norm", "f"], 2, "error: UnknownFamily"),
        (&["measure", "--family", "ones", "--set", "1:1", "--window", "2"], 2, "error: EmptyArc"),
        (&["measure", "--family", "ones", "--set", "zz", "--window", "2"], 2, "error: Parse"),
        (&["report", "--family", "sign", "--sweep", "8,4"], 2, "error: InvalidArgument"),
        (&["matrix", "--family", "family=dense matrix=/nonexistent.csv", "--window", "2"], 2, "error: Io"),
    ];
    for (args, code, prefix) in cases {
        let out = covop(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).starts_with(prefix), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(covop(&["norm", "--family", "sign", "--window", "2", "--norm", "q"]).status.code(), Some(2));
}
