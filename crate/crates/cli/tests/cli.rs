use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn msic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn msic_on(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = data(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    msic(&args)
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn report_with_oracle_on_worked_example() {
    let r = json(&msic_on("report", "ex_a.json", &["--oracle"]));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["lower_bound"], 4);
    assert_eq!(r["upper_bound"], 5);
    assert_eq!(r["oracle"]["length"], 4);
    assert_eq!(r["certified"], true);
}

#[test]
fn report_certifies_when_bounds_meet() {
    let r = json(&msic_on("report", "ex_b.json", &[]));
    assert_eq!(r["lower_bound"], 2);
    assert_eq!(r["upper_bound"], 2);
    assert_eq!(r["certified"], true);
    assert!(r["oracle"].is_null());
}

#[test]
fn report_text() {
    let out = msic_on("report", "ex_a.json", &["--text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lower bound 4"));
    assert!(text.contains("upper bound 5"));
}

#[test]
fn missing_file_exits_2() {
    let out = msic(&["report", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_instance_exits_2() {
    let out = msic_on("validate", "bad_index.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("senders[0][1]"));
}

#[test]
fn unknown_subcommand_exits_1() {
    assert_eq!(msic(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(msic(&["bound"]).status.code(), Some(1));
}

#[test]
fn oracle_guard_exits_3() {
    assert_eq!(msic_on("oracle", "large.json", &[]).status.code(), Some(3));
}

#[test]
fn validate_and_simplify() {
    let v = json(&msic_on("validate", "ex_a.json", &[]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["num_senders"], 4);
    let s = json(&msic_on("simplify", "ex_a.json", &[]));
    assert_eq!(s["schema"], 1);
    assert_eq!(s["simplified"], true);
    assert_eq!(s["senders"][0], serde_json::json!([1, 3, 5]));
}

#[test]
fn classify_worked_example() {
    let c = json(&msic_on("classify", "ex_a.json", &[]));
    assert_eq!(c["v_out"], 6);
    assert_eq!(c["sccs"], serde_json::json!([[1, 2], [3, 4], [5, 6]]));
    assert_eq!(c["classes"][0]["class"], "semi-non-degenerated");
}

#[test]
fn bound_with_trace() {
    let b = json(&msic_on("bound", "ex_a.json", &["--trace"]));
    assert_eq!(b["lower_bound"], 4);
    assert_eq!(b["n_iv"], 2);
    let tags: Vec<&str> = b["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["step"].as_str().unwrap())
        .collect();
    assert_eq!(tags, ["(iv-a)", "(iv-b)", "(iv-c)", "(i)", "(iii-a)", "(iii-a)", "(iv-0)", "(i)"]);
    let e = json(&msic_on("bound", "ex_a.json", &["--exhaustive"]));
    assert_eq!(e["lower_bound"], 4);
    assert!(e.get("trace").is_none());
}

#[test]
fn code_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let code = msic_on("code", "ex_a.json", &[]);
    let doc = json(&code);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["rows"][0]["kind"], "tree-xor");
    let path = dir.path().join("code.json");
    std::fs::write(&path, &code.stdout).unwrap();
    let v = json(&msic(&[
        "verify",
        data("ex_a.json").to_str().unwrap(),
        path.to_str().unwrap(),
        "--exhaustive",
    ]));
    assert_eq!(v["decodable"], true);
    assert_eq!(v["simulated"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_three_way_code() {
    let v = json(&msic(&[
        "verify",
        data("ex_a.json").to_str().unwrap(),
        data("three_way.json").to_str().unwrap(),
    ]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["decodable"], true);
}

#[test]
fn verify_failures() {
    let ex_a = data("ex_a.json");
    let out = msic(&["verify", ex_a.to_str().unwrap(), data("partial.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decodable"], false);
    assert_eq!(v["failure"], serde_json::json!({"receiver": 1, "wanted": 2}));

    // sender 1 does not own message 2
    let out = msic(&["verify", ex_a.to_str().unwrap(), data("single_xor.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_examples() {
    for (file, len) in [("ex_a.json", 4), ("ex_b.json", 2), ("ex_c.json", 2)] {
        let o = json(&msic_on("oracle", file, &[]));
        assert_eq!(o["linear_optimal"], true);
        assert_eq!(o["length"], len);
        assert_eq!(o["code"]["rows"].as_array().unwrap().len(), len);
    }
    let o = json(&msic_on("oracle", "ex_a.json", &["--max-len", "3"]));
    assert_eq!(o["linear_optimal"], false);
    assert_eq!(o["exhausted_at"], 3);
}

#[test]
fn dot_counts() {
    let out = msic_on("dot", "ex_a.json", &[]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("[color=black]").count(), 6);
    assert_eq!(dot.matches("color=red").count(), 9);
    let out = msic_on("dot", "ex_c.json", &[]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("[color=black]").count(), 2);
    assert_eq!(dot.matches("color=red").count(), 0);
    let out = msic_on("dot", "ex_c.json", &["--final"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.contains("style=dashed"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["report", "--oracle", "--trace"],
        vec!["bound", "--exhaustive", "--trace"],
        vec!["dot"],
        vec!["code"],
    ] {
        let run = || {
            let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
            full.insert(1, data("ex_a.json").to_string_lossy().into_owned());
            let refs: Vec<&str> = full.iter().map(String::as_str).collect();
            msic(&refs).stdout
        };
        assert_eq!(run(), run());
    }
}

#[test]
fn jobs_flag_is_accepted() {
    let r = json(&msic(&["--jobs", "1", "oracle", data("ex_b.json").to_str().unwrap()]));
    assert_eq!(r["length"], 2);
}
