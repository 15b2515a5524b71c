use std::path::PathBuf;
use std::process::{Command, Output};

fn qcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcap")).args(args).output().expect("spawn qcap")
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcap-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn superactivation_json_is_an_array_of_passing_reports() {
    let out = qcap(&["superactivation", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 6);
    for row in rows {
        assert_eq!(row["passed"], true, "{row}");
        for key in ["quantity", "value", "relation", "bound", "tolerance", "runtime_ms"] {
            assert!(row.get(key).is_some(), "missing {key} in {row}");
        }
    }
    let private = rows.iter().find(|r| r["quantity"] == "private_information_value").unwrap();
    assert!(private["value"].as_f64().unwrap() > 0.02);
}

#[test]
fn nonconvexity_marks_large_p_as_informational() {
    let out = qcap(&["nonconvexity", "--p", "0.002", "--p", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("p=0.05)") && l.contains("coherent_information")).unwrap();
    assert!(line.contains("outside guaranteed region"), "{line}");
}

#[test]
fn malformed_channel_row_exits_2_and_names_the_row() {
    let path = scratch_file("bad_row.json", r#"{"din": 2, "dout": 2, "kraus": [[[[1,0],[0,0]], [[0,0]]]]}"#);
    let out = qcap(&["maximize", "--channel", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("kraus[0][1]"), "{err}");
}

#[test]
fn missing_channel_file_exits_2() {
    let out = qcap(&["maximize", "--channel", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_builtin_exits_2() {
    let out = qcap(&["maximize", "--channel", "builtin:nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn maximize_identity_channel_finds_full_rate() {
    let out = qcap(&["maximize", "--channel", "builtin:identity:2", "--restarts", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let best = rows[0]["value"].as_f64().unwrap();
    assert!((best - 1.0).abs() < 1e-6, "{best}");
}

#[test]
fn corrupted_horodecki_weight_fails_selftest() {
    let out = qcap(&["selftest", "--corrupt-horodecki"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("Horodecki")), "{text}");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(qcap(&["nonconvexity", "--p", "abc"]).status.code(), Some(2));
    assert_eq!(qcap(&["no-such-command"]).status.code(), Some(2));
}
