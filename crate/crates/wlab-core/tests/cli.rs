use std::fs;
use std::process::{Command, Output};

use wlab_core::cli::registry;

fn wlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlab"))
        .args(args)
        .env("WLAB_THREADS", "1")
        .output()
        .expect("run wlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["--json", "--seed", "3", "comass", "cayley + 1/2 * h2"][..],
        &["--json", "reduce", "cayley"][..],
        &["--json", "bracket", "e1234", "e1256"][..],
        &["--json", "constants"][..],
        &["--json", "catalog"][..],
    ] {
        let a = wlab(args);
        let b = wlab(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
    }
}

#[test]
fn seed_changes_the_run_but_not_the_answer() {
    let value = |seed: &str| {
        let o = wlab(&["--json", "--seed", seed, "comass", "cayley"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["value"].as_f64().unwrap()
    };
    assert!((value("1") - 1.0).abs() < 1e-9);
    assert!((value("2") - 1.0).abs() < 1e-9);
}

#[test]
fn parse_errors_point_at_the_offset() {
    let o = wlab(&["comass", "dx12 + dx1234"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("byte 5") && e.contains("degree mismatch"), "{e}");
    assert!(e.contains("\n       ^"), "{e}");
    assert!(o.stdout.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(wlab(&["constants"]).status.code(), Some(0));
    assert_eq!(wlab(&["comass", "nope"]).status.code(), Some(2));
    assert_eq!(wlab(&["comass", "--file", "/nonexistent/form.json"]).status.code(), Some(2));
    assert_eq!(wlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(wlab(&["verify"]).status.code(), Some(0));
}

#[test]
fn form_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, registry::lookup("cayley").unwrap().golden_text()).unwrap();
    let o = wlab(&["--json", "reduce", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["converged"], true);
}

#[test]
fn bracket_of_commuting_cartan_elements_vanishes() {
    let o = wlab(&["--json", "bracket", "h1", "h5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let zeros = v["a"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|c| c == "0");
    assert!(zeros);
    assert!(v["x"]["terms"].as_array().unwrap().is_empty());
    let o = wlab(&["--json", "bracket", "h1", "e1235"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let zeros = v["a"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|c| c == "0");
    assert!(!zeros);
}

#[test]
fn intact_golden_directory_passes() {
    let dir = tempfile::tempdir().unwrap();
    for e in registry::entries() {
        fs::write(dir.path().join(e.golden_file()), e.golden_text()).unwrap();
    }
    let o = wlab(&["verify", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_golden_file_is_named_in_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    for e in registry::entries() {
        fs::write(dir.path().join(e.golden_file()), e.golden_text()).unwrap();
    }
    let path = dir.path().join("cayley.json");
    let text = fs::read_to_string(&path).unwrap();
    let corrupted = text.replacen("\"1\"", "\"2\"", 1);
    assert_ne!(text, corrupted);
    fs::write(&path, corrupted).unwrap();

    let o = wlab(&["verify", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("cayley.json: line"), "{out}");
    assert!(out.contains("FAIL"), "{out}");

    let o = wlab(&["--json", "verify", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failed"], 1);
}

#[test]
fn missing_golden_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = wlab(&["verify", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bracket_accepts_json_elements() {
    let mut rows = vec![vec!["0"; 8]; 8];
    rows[0][0] = "1";
    rows[1][1] = "-1";
    let elem = serde_json::json!({ "a": rows }).to_string();
    let o = wlab(&["bracket", &elem, "dx1345"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("4-form part: dx1345"), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    fs::write(&path, stdout(&wlab(&["--json", "bracket", "e1234", "e1256"]))).unwrap();
    let o = wlab(&["--json", "bracket", path.to_str().unwrap(), &elem]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let bad = r#"{"a": [[1]]}"#;
    assert_eq!(wlab(&["bracket", bad, "dx1234"]).status.code(), Some(2));
}
