use std::process::{Command, Output};

fn normdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normdiv"))
        .args(args)
        .env("NORMDIV_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn field_verify_passes() {
    for field in ["cubic9", "q_sqrt2_i"] {
        let o = normdiv(&["--field", field, "field", "verify"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn field_show_reloads() {
    let o = normdiv(&["field", "show"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.toml");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = normdiv(&["--field", path.to_str().unwrap(), "split", "17"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 2);
}

#[test]
fn hyperbola_output() {
    let o = normdiv(&["hyperbola", "101", "10", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("all_small"));
    assert!(s.contains("ok   hyperbola"));
}

#[test]
fn densities_agree() {
    let o = normdiv(&["density", "varrho", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = normdiv(&["--field", "q_sqrt2_i", "density", "rho", "17"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = normdiv(&["--out", out.to_str().unwrap(), "sum-exact", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("sum-exact.csv")).unwrap();
    assert!(csv.starts_with("x,m_exact\n12,"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("sum-exact.json")).unwrap()).unwrap();
    assert_eq!(json["manifest"]["command"], "sum-exact");
    assert_eq!(json["manifest"]["threads"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(normdiv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(normdiv(&["--field", "nowhere", "split", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "x = [3, 2]\n").unwrap();
    assert_eq!(
        normdiv(&["--config", bad.to_str().unwrap(), "theorem"]).status.code(),
        Some(2)
    );
    let tight = dir.path().join("tight.toml");
    std::fs::write(&tight, "[budgets]\npoints = 10\n").unwrap();
    assert_eq!(
        normdiv(&["--config", tight.to_str().unwrap(), "sum-exact", "50"]).status.code(),
        Some(3)
    );
}
