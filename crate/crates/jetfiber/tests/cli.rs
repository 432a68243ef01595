//! End-to-end tests of the compiled binary: output shapes, JSON
//! single-line contract, DOT file emission, and the exit-code map.

use std::process::{Command, Output};

fn jetfiber(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetfiber"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn expand_prints_one_polynomial_per_line() {
    let out = jetfiber(&["expand", "--surface", "d40", "-m", "3"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "y0^2*z0 + y0*z0^2 + x0^2");
    assert_eq!(lines[3], "y0^2*z3 + y1^2*z1 + y1*z1^2 + y3*z0^2");

    let reduced = jetfiber(&["expand", "--surface", "d41", "-m", "3", "--mod", "2,1,1"]);
    assert_eq!(stdout(&reduced).lines().last(), Some("y1^2*z1 + y1*z1^2"));
}

#[test]
fn json_reports_are_single_lines() {
    for args in [
        &["expand", "--surface", "d40", "-m", "3", "--json"][..],
        &["ideal", "--surface", "d40", "-m", "3", "--build", "J1", "--gb", "--dim"][..],
        &["decompose", "--surface", "d41", "-m", "5"][..],
        &["count", "-m", "1", "--build", "L:1,1,1"][..],
    ] {
        let out = jetfiber(args);
        assert_eq!(code(&out), 0, "{args:?}");
        let text = stdout(&out);
        assert_eq!(text.lines().count(), 1, "{args:?} printed {text}");
        serde_json::from_str::<serde_json::Value>(text.trim()).expect("valid JSON");
    }
}

#[test]
fn ideal_reports_generators_basis_and_dimension() {
    let out = jetfiber(&["ideal", "-m", "1", "--build", "L:1,1,1", "--gb", "--dim"]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["generators"], serde_json::json!(["x0", "y0", "z0"]));
    // The reduced basis is reported in term order, greatest lead first.
    assert_eq!(doc["gb"], serde_json::json!(["x0", "z0", "y0"]));
    assert_eq!(doc["dimension"], 3);

    let sat = jetfiber(&[
        "ideal", "--surface", "d40", "-m", "5", "--build", "J3", "--saturate", "y2", "--dim",
    ]);
    assert_eq!(code(&sat), 0);
    let doc: serde_json::Value = serde_json::from_str(stdout(&sat).trim()).unwrap();
    assert_eq!(doc["dimension"], 11);
}

#[test]
fn graph_writes_the_dot_file() {
    let dir = std::env::temp_dir().join("jetfiber-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma.dot");
    let out = jetfiber(&[
        "graph", "--surface", "d40", "-m", "5", "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot, "graph Gamma { Z0 -- Z1; Z0 -- Z2; Z0 -- Z3; }\n");
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["dynkin_d4"], true);
    std::fs::remove_file(&path).ok();
}

#[test]
fn suite_passes_and_exits_clean() {
    let out = jetfiber(&["suite", "--surface", "d40", "-m", "5"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: missing surface, missing m, unknown verb, bad selector.
    assert_eq!(code(&jetfiber(&["decompose", "-m", "5"])), 3);
    assert_eq!(code(&jetfiber(&["decompose", "--surface", "d40"])), 3);
    assert_eq!(code(&jetfiber(&["transmogrify"])), 3);
    assert_eq!(code(&jetfiber(&["ideal", "-m", "3", "--build", "K9"])), 3);
    assert_eq!(code(&jetfiber(&["expand", "--surface", "d40", "-m", "3", "--mod", "1,2"])), 3);

    // Budget exhaustion is distinguishable from failure.
    let out = jetfiber(&[
        "ideal", "--surface", "d40", "-m", "7", "--build", "J1", "--gb", "--budget", "10",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    // Help and version are not errors.
    assert_eq!(code(&jetfiber(&["--help"])), 0);
    assert_eq!(code(&jetfiber(&["--version"])), 0);
}
