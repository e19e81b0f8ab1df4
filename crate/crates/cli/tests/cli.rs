use std::process::{Command, Output};

fn twistlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_and_exits_zero() {
    let o = twistlab(&["verify", "--n", "4", "--suites", "twist-axioms,matreshka"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines().last().unwrap().ends_with("/ 0 failed"),
        "{text}"
    );
    assert!(text.contains("PASS matreshka[N=4]"));
}

#[test]
fn json_report_shape() {
    let o = twistlab(&[
        "verify",
        "--n",
        "6",
        "--suites",
        "nine-states",
        "--r",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["N"], 6);
    assert_eq!(v["summary"]["failed"], 0);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    for c in checks {
        assert_eq!(c["passed"], true);
        assert_eq!(c["residual_nnz"], 0);
    }
}

#[test]
fn structural_errors_exit_two() {
    let o = twistlab(&["verify", "--n", "5", "--suites", "nine-states"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N >= 6"));
    assert_eq!(
        twistlab(&["verify", "--n", "6", "--suites", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(twistlab(&["verify"]).status.code(), Some(2));
    assert_eq!(
        twistlab(&["table", "E7", "--n", "6"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_files_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let toml_path = dir.path().join("run.toml");
    std::fs::write(&toml_path, "N = 6\nsuites = [\"matreshka\"]\n").unwrap();
    let o = twistlab(&["verify", "--config", toml_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("N=6"));

    let json_path = dir.path().join("run.json");
    std::fs::write(&json_path, r#"{"N": 6, "suites": ["matreshka"]}"#).unwrap();
    let o = twistlab(&[
        "verify",
        "--config",
        json_path.to_str().unwrap(),
        "--n",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("N=7"));

    std::fs::write(&json_path, r#"{"N": 6, "colour": "red"}"#).unwrap();
    assert_eq!(
        twistlab(&["verify", "--config", json_path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dump_writes_loadable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let o = twistlab(&[
        "dump",
        "E1E0~E0J1J0",
        "--n",
        "6",
        "--r",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("dim 36\n"));

    let o = twistlab(&[
        "dump", "extended", "--n", "3", "--r", "2", "--alpha", "-1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim 9\n"));
    assert_eq!(
        twistlab(&["dump", "external-e0", "--n", "5"]).status.code(),
        Some(2)
    );
}

#[test]
fn table_is_json() {
    let o = twistlab(&["table", "J1J0", "--n", "7", "--r", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 8);
}
