use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn nilstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_builtin_pair_passes() {
    let o = nilstab(&["validate", "--group", "heisenberg3", "--cocycle", "builtin:heisenberg_skinny", "--grid"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("all checks passed"));
    assert!(out.contains("cocycle identity (1953125 conclusive)"), "{out}");
}

#[test]
fn validate_json_report() {
    let o = nilstab(&["validate", "--group", "lattice:2", "--cocycle", "builtin:z2_skinny", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.json");
    fs::write(&path, "{\"name\": \"x\",\n \"hirsch\": }").unwrap();
    let o = nilstab(&["validate", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn non_cocycle_reports_a_witness() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"name":"bad","hirsch":2,"poly":[{"coef":["1","1"],"x_exps":[1,0],"y_exps":[2]}]}"#,
    )
    .unwrap();
    let o = nilstab(&["validate", "--group", "lattice:2", "--cocycle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("[FAIL] cocycle identity")).expect("failure line");
    assert!(line.contains("x = (") && line.contains("y = (") && line.contains("z = ("), "{line}");
}

#[test]
fn hirsch_mismatch_is_a_usage_error() {
    let o = nilstab(&["certify", "--group", "lattice:2", "--cocycle", "builtin:heisenberg_skinny"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_z2_gives_minus_one() {
    let o = nilstab(&["certify", "--group", "lattice:2", "--cocycle", "builtin:z2_skinny", "--n", "16,32,64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v["certificate"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert_eq!(e["pairing"]["rounded"], -1);
        assert_eq!(e["status"], "certified");
    }
    assert_eq!(v["seed"], 0x4E49_4C35u64);
}

#[test]
fn certify_h3_preset_skips_even_dimensions() {
    let o = nilstab(&["certify", "--group", "heisenberg3", "--cocycle", "builtin:heisenberg_skinny", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("n = 16: skipped:not_coprime"), "{out}");
    assert!(out.contains("n = 17: pairing -1"), "{out}");
}

#[test]
fn certify_zero_cocycle_fails() {
    let o = nilstab(&["certify", "--group", "lattice:2", "--cocycle", "zero"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn certify_writes_file_and_summary() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cert.json");
    let o = nilstab(&[
        "certify", "--group", "lattice:2", "--cocycle", "builtin:z2_skinny", "--n", "8", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "certify");
    assert!(stdout(&o).contains("n = 8: pairing -1"));
}

#[test]
fn sweep_csv_marks_skipped_rows() {
    let o = nilstab(&[
        "sweep", "--group", "heisenberg3", "--cocycle", "builtin:heisenberg_skinny", "--n", "8,9", "--samples", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert!(lines[0].starts_with("# nilstab sweep") && lines[0].contains("seed=1313426485"));
    assert_eq!(lines[1], "n,x,y,sigma_xy,frob_defect,frob_bound,op_defect,op_bound");
    assert_eq!(lines.len(), 2 + 6);
    for l in &lines[2..5] {
        assert!(l.starts_with("8,") && l.ends_with("skipped:not_coprime,,,"), "{l}");
    }
    for l in &lines[5..] {
        let f: Vec<f64> = l.split(',').skip(4).map(|s| s.parse().unwrap()).collect();
        assert!(f[0] <= f[1] && f[2] <= f[3], "{l}");
    }
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--group", "lattice:2", "--cocycle", "builtin:z2_skinny", "--n", "16,32", "--seed", "7"];
    let a = stdout(&nilstab(&args));
    let b = stdout(&nilstab(&args));
    assert_eq!(a, b);
    let c = stdout(&nilstab(&["sweep", "--group", "lattice:2", "--cocycle", "builtin:z2_skinny", "--n", "16,32", "--seed", "8"]));
    assert_ne!(a, c);
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(nilstab(&["sweep", "--group", "lattice:2"]).status.code(), Some(2));
    assert_eq!(nilstab(&["validate", "--group", "lattice:2", "--bound", "0"]).status.code(), Some(2));
    assert_eq!(nilstab(&["frobnicate"]).status.code(), Some(2));
}
