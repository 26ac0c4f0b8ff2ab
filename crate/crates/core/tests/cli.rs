//! End-to-end runs of the `conjrot` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use conjrot::so3::{Rotation, ROTATION_TOL};
use nalgebra::Matrix3;

fn conjrot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjrot")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// The first number after `key` in a `key value` report line.
fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).map(|rest| rest.trim().split(' ').next().unwrap().parse().unwrap()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn sample_rows_are_rotations() {
    let csv = stdout(&conjrot(&["sample", "--family", "haar", "--n", "3", "--seed", "7"]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r11,r12,r13,r21,r22,r23,r31,r32,r33,theta,u1,u2,u3,x"
    );
    let data = rows(&csv);
    assert_eq!(data.len(), 3);
    for row in data {
        assert_eq!(row.len(), 14);
        let m = Matrix3::from_row_slice(&row[..9]);
        assert!(Rotation::new(m).is_ok());
        assert!((m.transpose() * m - Matrix3::identity()).amax() < ROTATION_TOL);
    }
}

#[test]
fn sample_cayley_one_has_mean_half() {
    let csv = stdout(&conjrot(&["sample", "--family", "cayley", "--kappa", "1", "--n", "100000", "--seed", "1"]));
    let data = rows(&csv);
    let mean = data.iter().map(|r| r[13]).sum::<f64>() / data.len() as f64;
    assert!((mean - 0.5).abs() < 5e-3, "{mean}");
}

#[test]
fn runs_are_byte_identical() {
    let args = ["sample", "--family", "fvm", "--kappa", "2", "--n", "500", "--seed", "42"];
    assert_eq!(conjrot(&args).stdout, conjrot(&args).stdout);
    let a = stdout(&conjrot(&["classify", "--family", "cayley", "--kappa", "2", "--m2", "0,0,1,1", "--n-mc", "2000", "--seed", "3"]));
    let b = stdout(&conjrot(&["classify", "--family", "cayley", "--kappa", "2", "--m2", "0,0,1,1", "--n-mc", "2000", "--seed", "3"]));
    assert_eq!(a, b);
}

#[test]
fn csv_number_format() {
    let csv = stdout(&conjrot(&["figure1", "--kappa-max", "1", "--n-points", "3"]));
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
    for line in csv.lines().skip(1) {
        for v in line.split(',') {
            let mantissa = v.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{v}");
        }
    }
}

#[test]
fn figure1_curve() {
    let path = scratch("figure1.csv");
    let out = conjrot(&["figure1", "--kappa-max", "1", "--n-points", "101", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "kappa,cayley,fvm");
    let data = rows(&csv);
    assert_eq!(data.len(), 101);
    assert!(data[0][1].abs() < 1e-9 && data[0][2].abs() < 1e-9);
    assert_eq!(data[100][0], 1.0);
    assert!(data[100][1].abs() < 1e-9);
    assert!(data[1..100].iter().all(|r| r[1] < 0.0));
    assert_eq!(conjrot(&["figure1", "--kappa-max", "0"]).status.code(), Some(2));
}

fn write_landmarks(name: &str, body: &str) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn gram_report_and_blocks() {
    let v = write_landmarks("identity.csv", "1,0,0\n0,1,0\n0,0,1\n");
    let csv = scratch("gram_haar.csv");
    let report = stdout(&conjrot(&[
        "gram", "--family", "haar", "--landmarks", v.to_str().unwrap(), "--n-mc", "100000", "--seed", "5",
        "-o", csv.to_str().unwrap(),
    ]));
    assert!(field(&report, "closed vs mc max abs deviation") <= 0.02);
    let blocks = fs::read_to_string(&csv).unwrap();
    assert_eq!(blocks.lines().next().unwrap(), "block,row,c0,c1,c2");
    for label in ["closed", "mc", "se", "bias"] {
        assert_eq!(blocks.lines().filter(|l| l.starts_with(&format!("{label},"))).count(), 3);
    }

    let cayley_one = stdout(&conjrot(&["gram", "--family", "cayley", "--kappa", "1", "--landmarks", v.to_str().unwrap(), "--n-mc", "1000"]));
    assert!(field(&cayley_one, "closed vs haar max abs difference") < 1e-10);

    let cayley_two = stdout(&conjrot(&["gram", "--family", "cayley", "--kappa", "2", "--landmarks", v.to_str().unwrap(), "--n-mc", "1000"]));
    assert!(field(&cayley_two, "naive haar recovery bias max abs") > 1e-3);
}

#[test]
fn gram_rejects_bad_landmarks() {
    let two_rows = write_landmarks("two_rows.csv", "1,0\n0,1\n");
    let text = write_landmarks("text.csv", "a,b\nc,d\ne,f\n");
    for path in [two_rows, text, scratch("missing.csv")] {
        let out = conjrot(&["gram", "--landmarks", path.to_str().unwrap(), "--n-mc", "10"]);
        assert_eq!(out.status.code(), Some(3), "{}", path.display());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn classify_uniform_law_is_chance() {
    let report = stdout(&conjrot(&["classify", "--family", "haar", "--m2", "0,0,1,1", "--n-mc", "100000", "--seed", "9"]));
    assert!((field(&report, "psi") - 0.5).abs() < 1e-8);
    assert!(field(&report, "psi_derivative").abs() < 1e-8);
    assert!(field(&report, "gap in std errors") <= 3.0);
}

#[test]
fn classify_matches_monte_carlo() {
    let report = stdout(&conjrot(&[
        "classify", "--family", "cayley", "--kappa", "2", "--m2", "0,0,1,1", "--n-mc", "1000000", "--seed", "10",
    ]));
    assert!((field(&report, "alpha") - 1.0).abs() < 1e-12);
    assert!(field(&report, "gap in std errors") <= 3.0);
}

#[test]
fn classify_rejects_coincident_modals() {
    for m2 in ["0,0,1,0", "0,0,1,1e-12", "1,0,0,0,1,0,0,0,1"] {
        let out = conjrot(&["classify", "--m2", m2, "--n-mc", "10"]);
        assert_eq!(out.status.code(), Some(2), "{m2}");
    }
}

#[test]
fn fakeuni_reports() {
    let curve = scratch("fakeuni_cayley.csv");
    let report = stdout(&conjrot(&["fakeuni", "--family", "cayley", "-o", curve.to_str().unwrap()]));
    assert!((field(&report, "initial slope") + 1.0 / 9.0).abs() < 1e-4);
    assert!((field(&report, "roots") - 1.0).abs() < 1e-8);
    assert!(fs::read_to_string(&curve).unwrap().starts_with("kappa,tau2_minus_third\n"));

    let fvm_curve = scratch("fakeuni_fvm.csv");
    let report = stdout(&conjrot(&["fakeuni", "--family", "fvm", "-o", fvm_curve.to_str().unwrap()]));
    assert!(report.lines().any(|l| l == "roots none"), "{report}");

    assert_eq!(conjrot(&["fakeuni", "--family", "cayley", "--kappa-max", "0"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(conjrot(&["sample", "--family", "gauss", "--n", "3"]).status.code(), Some(2));
    assert_eq!(conjrot(&["sample", "--family", "cayley", "--kappa", "-1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(conjrot(&["sample", "--n", "0"]).status.code(), Some(2));
    assert_eq!(conjrot(&["sample", "--n", "3", "--modal", "1,2"]).status.code(), Some(2));
    assert_eq!(conjrot(&["bogus"]).status.code(), Some(2));
}
