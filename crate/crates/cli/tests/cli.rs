use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};

use cutscene_server::client::HttpClient;
use serde_json::{json, Value};
use tempfile::TempDir;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn cutscene(cwd: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cutscene"));
    cmd.current_dir(cwd)
        .env("CUTSCENE_WORKBOOK", data().join("workbook"))
        .env("CUTSCENE_SCENARIOS", data().join("scenarios"));
    cmd
}

fn run(cwd: &Path, args: &[&str]) -> Output {
    cutscene(cwd).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

/// Start `serve --transport http` on a free port and return its base URL.
fn http_server(cwd: &Path) -> (Server, String) {
    let mut child = cutscene(cwd)
        .args(["serve", "--transport", "http", "--listen", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let url = line.trim().strip_prefix("listening on ").expect("bound address").to_string();
    (Server(child), url)
}

#[test]
fn serve_stdio_answers_tools_list() {
    let dir = TempDir::new().unwrap();
    let mut child = cutscene(dir.path())
        .args(["serve", "--transport", "stdio"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    writeln!(stdin, r#"{{"jsonrpc":"2.0","id":1,"method":"tools/list"}}"#).unwrap();
    writeln!(stdin, "{{broken").unwrap();
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0]["result"]["tools"].as_array().unwrap().len() >= 30);
    assert_eq!(lines[1]["error"]["code"], -32700);
}

#[test]
fn bad_workbook_is_a_startup_error() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["--workbook-dir", "nowhere", "serve"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));
}

#[test]
fn usage_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["teleport"])), 1);
    assert_eq!(code(&run(dir.path(), &["evaluate", "--scenario", "S2_001"])), 1);
    assert_eq!(code(&run(dir.path(), &["--delta", "0", "report", "."])), 1);
    assert_eq!(code(&run(dir.path(), &["--help"])), 0);
}

#[test]
fn replay_reproduces_the_fixture_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let fixture = std::fs::read_to_string(data().join("scenarios/S2_001/gt_snapshot.json")).unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = run(dir.path(), &["replay", "S2_001", "-o", name]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(summary["calls"], 62);
        assert_eq!(summary["errors"], 0);
        let snapshot = std::fs::read_to_string(dir.path().join(name).join("snapshot.json")).unwrap();
        assert_eq!(snapshot, fixture);
        outputs.push(std::fs::read_to_string(dir.path().join(name).join("trajectory.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn replay_missing_scenario_fails() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["replay", "S4_404"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("S4_404"));
}

#[test]
fn remote_replay_matches_in_process() {
    let dir = TempDir::new().unwrap();
    let (_server, url) = http_server(dir.path());
    let out = run(dir.path(), &["replay", "S2_001", "--remote", &url, "-o", "remote"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let fixture = std::fs::read_to_string(data().join("scenarios/S2_001/gt_snapshot.json")).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("remote/snapshot.json")).unwrap(), fixture);

    // The server kept the calls: its own trajectory export agrees.
    let mut client = HttpClient::new(&url);
    let exported = client.request("trajectory/export", json!({})).unwrap();
    let written = read_json(&dir.path().join("remote/trajectory.json"));
    assert_eq!(exported["trajectory"], written);
}

#[test]
fn evaluate_ground_truth_and_gates() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["replay", "S2_001", "-o", "run"])), 0);
    let out = run(
        dir.path(),
        &[
            "evaluate",
            "--scenario",
            "S2_001",
            "--trajectory",
            "run/trajectory.json",
            "--snapshot",
            "run/snapshot.json",
            "--model",
            "gt",
            "--gate",
            "cc=1.0",
            "-o",
            "eval",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let scores = read_json(&dir.path().join("eval/scores.json"));
    for metric in ["tsa", "pv", "cc", "ce", "dc", "tc", "camc", "tempc"] {
        assert_eq!(scores["metrics"][metric], 1.0, "{metric}");
    }
    assert!(dir.path().join("eval/l1_report.json").is_file());
    assert!(dir.path().join("eval/l2_report.json").is_file());

    let out = run(
        dir.path(),
        &["evaluate", "--scenario", "S2_001", "--trajectory", "run/trajectory.json", "--gate", "dc=1.01", "-o", "eval"],
    );
    assert_eq!(code(&out), 2);
    // Missing snapshot: L1 only, and the stale L2 report is gone.
    assert!(!dir.path().join("eval/l2_report.json").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("l2 skipped"));
    let scores = read_json(&dir.path().join("eval/scores.json"));
    assert!(scores["metrics"].get("tc").is_none());
}

#[test]
fn evaluate_mutated_trajectory() {
    let dir = TempDir::new().unwrap();
    let gt = read_json(&data().join("scenarios/S2_001/gt_trajectory.json"));
    let mutated: Vec<Value> = gt
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| !(c["tool"] == "add_character" && c["args"]["name"] == "MIRA"))
        .cloned()
        .collect();
    let failing = mutated.iter().filter(|c| c["args"].to_string().contains("\"MIRA\"")).count();
    std::fs::write(dir.path().join("t.json"), serde_json::to_string(&mutated).unwrap()).unwrap();
    let out = run(dir.path(), &["evaluate", "--scenario", "S2_001", "--trajectory", "t.json", "--judge-response", "none.txt"]);
    assert_eq!(code(&out), 1, "missing judge file is an error");
    let out = run(dir.path(), &["evaluate", "--scenario", "S2_001", "--trajectory", "t.json"]);
    assert_eq!(code(&out), 0);
    let scores = read_json(&dir.path().join("out/scores.json"));
    let pv = scores["metrics"]["pv"].as_f64().unwrap();
    // scores.json carries six decimals.
    assert!((pv - (61 - failing) as f64 / 61.0).abs() < 1e-6);
    assert!(scores["metrics"]["dc"].as_f64().unwrap() < 1.0);
}

#[test]
fn evaluate_scores_a_saved_judge_verdict() {
    let dir = TempDir::new().unwrap();
    let verdict = r#"Scores follow.
{"script_fidelity": {"reasoning": "a", "score": 20},
 "character_consistency": {"reasoning": "b", "score": 22},
 "cinematographic_quality": {"reasoning": "c", "score": 18},
 "temporal_coherence": {"reasoning": "d", "score": 15}}"#;
    std::fs::write(dir.path().join("verdict.txt"), verdict).unwrap();
    let gt = data().join("scenarios/S2_001/gt_trajectory.json");
    let out = run(
        dir.path(),
        &["evaluate", "--scenario", "S2_001", "--trajectory", gt.to_str().unwrap(), "--judge-response", "verdict.txt"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_json(&dir.path().join("out/l3_report.json"))["total"], 75);
    assert_eq!(read_json(&dir.path().join("out/scores.json"))["metrics"]["l3_total"], 75.0);
}

fn write_scores(dir: &Path, name: &str, tier: &str, cc: f64, pv: f64) {
    let path = dir.join(name);
    std::fs::create_dir_all(&path).unwrap();
    let scores = json!({"model": "m", "scenario": format!("{tier}_001"), "tier": tier, "metrics": {"cc": cc, "pv": pv}});
    std::fs::write(path.join("scores.json"), scores.to_string()).unwrap();
}

#[test]
fn report_aggregates_by_tier() {
    let dir = TempDir::new().unwrap();
    let reports = dir.path().join("reports");
    write_scores(&reports, "one", "S1", 1.0, 0.5);
    let out = run(dir.path(), &["report", "reports", "-o", "single"]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("single/summary.csv")).unwrap();
    assert_eq!(csv, "model,tier,metric,value\nm,all,cc,1.0\nm,all,pv,0.5\nm,S1,cc,1.0\nm,S1,pv,0.5\n");

    write_scores(&reports, "two", "S5", 0.5, 0.25);
    write_scores(&reports, "three", "S5", 0.25, 0.75);
    let out = run(dir.path(), &["report", "reports", "-o", "multi"]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("multi/summary.csv")).unwrap();
    let value = |tier: &str, metric: &str| -> f64 {
        csv.lines()
            .find(|l| l.starts_with(&format!("m,{tier},{metric},")))
            .and_then(|l| l.rsplit(',').next())
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("all", "cc") - 1.75 / 3.0).abs() < 1e-12);
    assert_eq!(value("S5", "cc"), 0.375);
    assert_eq!(value("S5", "pv"), 0.5);
    assert_eq!(value("DELTA", "cc"), -0.625);
    let md = std::fs::read_to_string(dir.path().join("multi/summary.md")).unwrap();
    assert!(md.starts_with("| model | tier | cc | pv |"));
    assert!(md.contains("| m | S5 | 0.3750 | 0.5000 |"));
}

#[test]
fn report_on_empty_dir_fails() {
    let dir = TempDir::new().unwrap();
    std::fs::create_dir(dir.path().join("empty")).unwrap();
    assert_eq!(code(&run(dir.path(), &["report", "empty"])), 1);
}
