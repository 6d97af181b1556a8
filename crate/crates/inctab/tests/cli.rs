//! End-to-end tests of the `inctab` binary: exit codes, formats, and the
//! external report schema.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inctab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const EXAMPLE: &str = "q=6 shape=2x3\n1 2 4\n3 4 6\n";

fn write_example(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("t.txt");
    std::fs::write(&path, EXAMPLE).unwrap();
    path
}

#[test]
fn version_prints() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("inctab"));
}

#[test]
fn validate_exit_codes() {
    let out = run_stdin(&["validate", "-"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("increasing tableau"));

    let out = run_stdin(&["validate", "-"], "q=3 shape=2x2\n1 2\n2 2\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("(2,2)"), "diagnostic names the box: {err}");

    let out = run(&["validate", "/nonexistent/file.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn promote_and_inverse_round_trip() {
    let out = run_stdin(&["promote", "-"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "q=6 shape=2x3\n1 3 5\n2 5 6\n");

    let back = run_stdin(&["promote", "--steps", "-1", "-"], &stdout(&out));
    assert_eq!(stdout(&back), EXAMPLE);
}

#[test]
fn promote_trace_has_seven_stages() {
    let out = run_stdin(&["promote", "--trace", "-"], EXAMPLE);
    let text = stdout(&out);
    assert_eq!(text.matches("== ").count(), 8); // 7 stages + result marker
    assert!(text.contains("== swap 4"));
}

#[test]
fn json_output_reparses() {
    let out = run_stdin(&["--json", "promote", "-"], EXAMPLE);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["q"], 6);
    let out2 = run_stdin(&["validate", "-"], &stdout(&out));
    assert_eq!(out2.status.code(), Some(0));
}

#[test]
fn slide_and_rectify() {
    let skew = "q=3 shape=2,2/1\n. 2\n1 3\n";
    let out = run_stdin(&["slide", "--corners", "(1,1)", "-"], skew);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "q=3 shape=2,1\n1 2\n3\n");

    let out = run_stdin(&["rectify", "--strategy", "random:7", "-"], skew);
    assert_eq!(out.status.code(), Some(0));

    let out = run_stdin(&["rectify", "--strategy", "random", "-"], skew);
    assert_eq!(out.status.code(), Some(2), "seedless random is rejected");

    let out = run_stdin(&["slide", "--corners", "(2,2)", "-"], skew);
    assert_eq!(out.status.code(), Some(2), "not an inner corner");
}

#[test]
fn enumerate_count() {
    let out = run(&["enumerate", "--shape", "2x2", "--q", "4", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "6");
    let out = run(&["enumerate", "--shape", "2x2", "--q", "4", "--count-only", "--jobs", "3"]);
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn orbit_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_example(dir.path());
    let out = run(&["orbit", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("orbit size 6"));

    let out = run(&["--json", "orbit", "--elements", path.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["size"], 6);
    assert_eq!(value["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn orbits_summary_is_json() {
    let out = run(&["orbits", "--shape", "2x3", "--q", "6", "--summary"]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["shape"], "2x3");
    let histogram = value["histogram"].as_object().unwrap();
    let total: u64 = histogram
        .iter()
        .map(|(size, count)| size.parse::<u64>().unwrap() * count.as_u64().unwrap())
        .sum();
    assert_eq!(total, value["tableaux"].as_u64().unwrap());
}

#[test]
fn audit_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "audit",
        "frame",
        "--shape",
        "3x3",
        "--q",
        "6",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    for key in ["audit", "shape", "q", "instances", "orbits", "verdict", "elapsed_ms"] {
        assert!(report.get(key).is_some(), "schema key {key}");
    }
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["instances"], 20);

    // precondition violations exit 2
    let out = run(&["audit", "frame", "--shape", "3,2", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "audit", "homomesy", "--shape", "2x3", "--q", "6", "--stat-set", "custom:(1,2)",
    ]);
    assert_eq!(out.status.code(), Some(2), "asymmetric set rejected");
}

#[test]
fn scan_budget_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let checkpoint = dir.path().join("cp.json");
    let out = run(&[
        "scan-3row",
        "--n",
        "3",
        "--q",
        "6",
        "--budget",
        "40",
        "--resume",
        checkpoint.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "budget exhaustion exits 3");
    assert!(checkpoint.exists());

    let out = run(&[
        "scan-3row",
        "--n",
        "3",
        "--q",
        "6",
        "--resume",
        checkpoint.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert!(report["options"]
        .as_str()
        .unwrap()
        .contains("resumed from checkpoint"));
}

#[test]
fn growth_render_and_lattice_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_example(dir.path());
    let out = run(&["growth", path.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().count(), 7); // rows 0..=q

    let out = run(&["growth", "--format", "svg", "--shade", "(2,2)", path.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("<svg"));

    let out = run(&["growth", "--lattice-path", "(1,3)", path.to_str().unwrap()]);
    let first = stdout(&out).lines().next().unwrap().to_string();
    // path numbering starts at 1; the first rank is the entry at the box
    assert_eq!(first, "1 4");
}

#[test]
fn evacuate_commands() {
    let out = run_stdin(&["evacuate", "-"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let e = stdout(&out);
    let back = run_stdin(&["evacuate", "-"], &e);
    assert_eq!(stdout(&back), EXAMPLE, "evacuation is an involution");

    let out = run_stdin(&["dual-evacuate", "-"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
}
