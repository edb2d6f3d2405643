//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swarm-landing"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn version_and_help_succeed() {
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(text(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn validate_accepts_every_bundled_scenario() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let out = run(&["--validate", path(&p)]);
        assert_eq!(code(&out), 0, "{}: {}", p.display(), text(&out.stderr));
        count += 1;
    }
    assert!(count >= 5);
}

#[test]
fn validation_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"trajectory\": \"line\",\n  \"warp_speed\": 9\n}\n").unwrap();
    let out = run(&["--validate", path(&bad)]);
    assert_eq!(code(&out), 1);
    let err = text(&out.stderr);
    assert!(err.contains("bad.json:3") && err.contains("warp_speed"), "{err}");

    let semantic = dir.path().join("semantic.json");
    fs::write(&semantic, "{\"dt\": -1.0}").unwrap();
    assert_eq!(code(&run(&["--validate", path(&semantic)])), 1);
    // unreadable files are I/O failures, not schema failures
    assert_eq!(code(&run(&["--validate", "/nonexistent/scenario.json"])), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["run"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    let s = scenario("stationary_homogeneous");
    assert_eq!(code(&run(&["run", "--scenario", path(&s), "--runs", "0", "--out", "/tmp/unused"])), 1);
}

#[test]
fn aborted_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("blind.json");
    let faults: Vec<String> =
        (0..3).map(|d| format!("{{\"t\": 0.5, \"drone\": {d}, \"kind\": \"camera_loss\"}}")).collect();
    fs::write(&s, format!("{{\"faults\": [{}]}}", faults.join(", "))).unwrap();
    let out = run(&["run", "--scenario", path(&s), "--out", path(&dir.path().join("out"))]);
    assert_eq!(code(&out), 2, "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("abort"));
}

#[test]
fn run_report_plotdata_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let s = scenario("line_leader_follower");
    let out = run(&["run", "--scenario", path(&s), "--seed", "7", "--runs", "3", "--out", path(&out_dir)]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    for seed in 7..10 {
        let run_dir = out_dir.join(format!("line_leader_follower-seed{seed}"));
        assert!(run_dir.join("trajectories.csv").is_file());
        assert!(run_dir.join("record.json").is_file());
    }
    assert!(out_dir.join("summaries.json").is_file());

    let report = run(&["report", "--in", path(&out_dir)]);
    assert_eq!(code(&report), 0);
    let table = text(&report.stdout);
    assert_eq!(table.lines().filter(|l| l.starts_with("line_leader_follower")).count(), 3);
    assert!(table.contains("3 runs, 3 all landed"), "{table}");

    let plots = dir.path().join("plots");
    let out = run(&["plotdata", "--in", path(&out_dir), "--out", path(&plots)]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    let scatter = fs::read_to_string(plots.join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().count(), 1 + 3 * 3);
    let boundaries = fs::read_to_string(plots.join("boundaries.csv")).unwrap();
    assert_eq!(boundaries.lines().count(), 1 + 3);
    assert!(fs::read_to_string(plots.join("traces.csv")).unwrap().lines().count() > 100);

    assert_eq!(code(&run(&["report", "--in", path(&dir.path().join("missing"))])), 2);
}

#[test]
fn same_seed_gives_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("stationary_homogeneous");
    let outputs: Vec<Vec<u8>> = ["a", "b"]
        .iter()
        .map(|sub| {
            let out_dir = dir.path().join(sub);
            assert_eq!(code(&run(&["run", "--scenario", path(&s), "--out", path(&out_dir)])), 0);
            fs::read(out_dir.join("stationary_homogeneous-seed1").join("trajectories.csv")).unwrap()
        })
        .collect();
    assert!(!outputs[0].is_empty());
    assert_eq!(outputs[0], outputs[1]);
}
