//! End-to-end tests of the `ansig` binary: signing, comparison, database
//! handling, export, and the documented exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ansig"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_square_csv(path: &Path, rotation_deg: f64, scale: f64, offset: (f64, f64)) {
    let theta = rotation_deg.to_radians();
    let mut text = String::new();
    // 40 points along the boundary of a unit square, transformed
    for i in 0..40 {
        let t = i as f64 / 40.0 * 4.0;
        let side = t as usize;
        let f = t - side as f64;
        let (x, y) = match side {
            0 => (f * 2.0 - 1.0, -1.0),
            1 => (1.0, f * 2.0 - 1.0),
            2 => (1.0 - f * 2.0, 1.0),
            _ => (-1.0, 1.0 - f * 2.0),
        };
        let xr = scale * (x * theta.cos() - y * theta.sin()) + offset.0;
        let yr = scale * (x * theta.sin() + y * theta.cos()) + offset.1;
        text.push_str(&format!("{xr},{yr}\n"));
    }
    std::fs::write(path, text).unwrap();
}

fn write_blob_csv(path: &Path) {
    let mut text = String::new();
    for i in 0..30 {
        let t = i as f64 * 0.7;
        text.push_str(&format!("{},{}\n", t.cos() * (1.0 + 0.3 * (3.0 * t).sin()), t.sin()));
    }
    std::fs::write(path, text).unwrap();
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

#[test]
fn sign_and_compare_recovers_rotation() {
    let ws = Workspace::new();
    write_square_csv(&ws.path("a.csv"), 0.0, 1.0, (0.0, 0.0));
    write_square_csv(&ws.path("b.csv"), 45.0, 2.5, (10.0, -3.0));

    for name in ["a", "b"] {
        let out = run(&[
            "sign",
            "--input",
            &ws.arg(&format!("{name}.csv")),
            "--output",
            &ws.arg(&format!("{name}.sig")),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(stdout(&out).contains("signed 40 points"));
    }

    let out = run(&["compare", &ws.arg("b.sig"), &ws.arg("a.sig")]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let psi_line = text.lines().find(|l| l.starts_with("psi")).unwrap();
    let psi: f64 = psi_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(psi > 0.999, "psi too low: {text}");
    // a square repeats every 90 degrees, so 45 degrees may be reported
    // as any of 45 + 90m; check modulo the symmetry
    let theta_line = text.lines().find(|l| l.starts_with("theta")).unwrap();
    let deg: f64 = theta_line
        .split('(')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    let err = (deg.rem_euclid(90.0) - 45.0).abs();
    assert!(err < 1.0, "angle off: {text}");
}

#[test]
fn db_and_classify_rank_true_shape_first() {
    let ws = Workspace::new();
    write_square_csv(&ws.path("square.csv"), 0.0, 1.0, (0.0, 0.0));
    write_blob_csv(&ws.path("blob.csv"));

    for name in ["square", "blob"] {
        let out = run(&[
            "sign",
            "--input",
            &ws.arg(&format!("{name}.csv")),
            "--output",
            &ws.arg(&format!("{name}.sig")),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let out = run(&[
            "db",
            "add",
            "--db",
            &ws.arg("shapes.db"),
            "--label",
            name,
            "--sig",
            &ws.arg(&format!("{name}.sig")),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }

    let out = run(&["db", "list", "--db", &ws.arg("shapes.db")]);
    assert!(out.status.success());
    let listing = stdout(&out);
    assert!(listing.contains("K = 512"));
    assert!(listing.contains("square") && listing.contains("blob"));

    // query: the square again, rotated and shifted
    write_square_csv(&ws.path("query.csv"), 30.0, 0.7, (2.0, 2.0));
    let out = run(&[
        "classify",
        "--db",
        &ws.arg("shapes.db"),
        "--input",
        &ws.arg("query.csv"),
        "--top",
        "1",
        "--min-psi",
        "0.99",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let best = text.lines().nth(1).unwrap();
    assert!(best.starts_with("square,"), "ranking wrong: {text}");
    assert!(best.ends_with(",yes"), "threshold column wrong: {text}");
}

#[test]
fn export_emits_one_row_per_sample() {
    let ws = Workspace::new();
    write_blob_csv(&ws.path("blob.csv"));
    let out = run(&[
        "sign",
        "--input",
        &ws.arg("blob.csv"),
        "--output",
        &ws.arg("blob.sig"),
        "--k",
        "64",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "export",
        "--sig",
        &ws.arg("blob.sig"),
        "--output",
        &ws.arg("blob_export.csv"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(ws.path("blob_export.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,angle,magnitude,phase");
    assert_eq!(lines.len(), 65);
}

#[test]
fn sign_from_pgm_threshold() {
    let ws = Workspace::new();
    let pgm = "P2\n4 3\n255\n\
               255 255 255 255\n\
               255 0 0 255\n\
               255 255 255 255\n";
    std::fs::write(ws.path("img.pgm"), pgm).unwrap();
    let out = run(&[
        "sign",
        "--image",
        &ws.arg("img.pgm"),
        "--output",
        &ws.arg("img.sig"),
        "--k",
        "16",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("signed 2 points"));
}

#[test]
fn missing_input_exits_3() {
    let ws = Workspace::new();
    let out = run(&[
        "sign",
        "--input",
        &ws.arg("nope.csv"),
        "--output",
        &ws.arg("x.sig"),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn degenerate_shape_exits_5() {
    let ws = Workspace::new();
    std::fs::write(ws.path("point.csv"), "1.0,2.0\n1.0,2.0\n").unwrap();
    let out = run(&[
        "sign",
        "--input",
        &ws.arg("point.csv"),
        "--output",
        &ws.arg("x.sig"),
    ]);
    assert_eq!(out.status.code(), Some(5), "{}", stderr(&out));
}

#[test]
fn malformed_csv_exits_4_with_line_number() {
    let ws = Workspace::new();
    std::fs::write(ws.path("bad.csv"), "1.0,2.0\noops\n").unwrap();
    let out = run(&[
        "sign",
        "--input",
        &ws.arg("bad.csv"),
        "--output",
        &ws.arg("x.sig"),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains(":2:"), "{}", stderr(&out));
}

#[test]
fn compare_rejects_mismatched_k() {
    let ws = Workspace::new();
    write_blob_csv(&ws.path("blob.csv"));
    for (name, k) in [("s64", "64"), ("s128", "128")] {
        let out = run(&[
            "sign",
            "--input",
            &ws.arg("blob.csv"),
            "--output",
            &ws.arg(&format!("{name}.sig")),
            "--k",
            k,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let out = run(&["compare", &ws.arg("s64.sig"), &ws.arg("s128.sig")]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn corrupt_signature_file_exits_4() {
    let ws = Workspace::new();
    std::fs::write(ws.path("junk.sig"), "{not json").unwrap();
    let out = run(&["compare", &ws.arg("junk.sig"), &ws.arg("junk.sig")]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn usage_error_exits_2_and_help_exits_0() {
    let out = run(&["sign"]); // neither --input nor --image
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sign"));
}
