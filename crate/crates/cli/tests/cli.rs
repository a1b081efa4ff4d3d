use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_twisted-ore");

fn ore_spec(p: u64, t: usize, alpha: &str) -> String {
    format!(
        r#"{{
  "field": {{"char": {p}}},
  "A": {{"type": "truncated_poly", "n": {p}}},
  "B": {{"type": "truncated_poly", "n": {p}}},
  "sigma": {{"type": "identity"}},
  "delta": {{"type": "monomial", "alpha": "{alpha}", "t": {t}}}
}}"#
    )
}

fn flip_spec(p: u64) -> String {
    format!(
        r#"{{"field": {{"char": {p}}}, "A": {{"type": "truncated_poly", "n": {p}}},
  "B": {{"type": "truncated_poly", "n": {p}}}, "sigma": {{"type": "identity"}}, "delta": {{"type": "zero"}}}}"#
    )
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), v)
}

fn first_failure(v: &Value) -> Option<&Value> {
    if v["passed"].as_bool() == Some(true) {
        return None;
    }
    match v["children"].as_array() {
        Some(c) if !c.is_empty() => c.iter().find_map(first_failure),
        _ => Some(v),
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_on_the_ore_family() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ore.json", &ore_spec(5, 2, "1"));
    let (code, v) = json(&["verify", s(&spec)]);
    assert_eq!(code, 0);
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["report"]["passed"], true);
}

#[test]
fn t_equal_one_fails_the_gate_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "t1.json", &ore_spec(5, 1, "1"));
    let (code, v) = json(&["verify", s(&spec)]);
    assert_eq!(code, 1);
    let f = first_failure(&v["report"]).unwrap();
    assert_eq!(f["check"], "truncation-conditions");
    assert_eq!(f["witness"]["kind"], "shuffle_index");
    assert_eq!(f["witness"]["i"], 0);
    assert_eq!(f["witness"]["j"], 5);
}

#[test]
fn characteristic_zero_fails_at_one_one() {
    let dir = TempDir::new().unwrap();
    let spec = r#"{"field": {"char": 0},
      "A": {"type": "truncated_poly", "n": 3}, "B": {"type": "truncated_poly", "n": 2},
      "sigma": {"type": "identity"},
      "delta": {"type": "matrix", "rows": [["0","0","0"],["0","0","0"],["0","1","0"]]}}"#;
    let spec = write(&dir, "q.json", spec);
    let (code, v) = json(&["verify", s(&spec)]);
    assert_eq!(code, 1);
    let f = first_failure(&v["report"]).unwrap();
    assert_eq!((f["witness"]["i"].as_u64(), f["witness"]["j"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn malformed_spec_is_bad_input() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", "{\"field\": {\"char\": 5},");
    let out = run(&["verify", s(&spec)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let spec = write(&dir, "bad2.json", &ore_spec(5, 2, "1").replace("\"n\": 5", "\"n\": 0"));
    assert_eq!(run(&["verify", s(&spec)]).status.code(), Some(2));
}

#[test]
fn trivial_module_block_is_compatible() {
    let dir = TempDir::new().unwrap();
    let spec = ore_spec(3, 2, "1").replace(
        "\n}",
        r#", "module": {"dim": 1, "x": [["0"]], "y": [["0"]], "phi": [["1"]]}}"#,
    );
    let spec = write(&dir, "m.json", &spec);
    let (code, v) = json(&["verify", s(&spec)]);
    assert_eq!(code, 0, "{v}");
    let checks: Vec<&str> = v["report"]["children"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(checks.contains(&"compatibility"));
}

#[test]
fn resolve_p3_through_degree_six() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ore.json", &ore_spec(3, 2, "1"));
    let out = dir.path().join("res.json");
    let (code, _) = json(&["resolve", s(&spec), "--degree", "6", "--out", s(&out)]);
    assert_eq!(code, 0);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ranks: Vec<u64> = file["ranks"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(file["header"]["basis_order"], "A-major");
}

#[test]
fn flip_resolution_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "flip.json", &flip_spec(3));
    let out = dir.path().join("flip-res.json");
    assert_eq!(run(&["resolve", s(&spec), "--degree", "4", "--out", s(&out)]).status.code(), Some(0));
    let (code, v) = json(&["check", s(&out), "--exact-through", "4"]);
    assert_eq!(code, 0);
    assert!(v["report"]["notes"].to_string().contains("canonical encoding: true"));
}

#[test]
fn edited_entry_fails_check_with_a_degree() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ore.json", &ore_spec(3, 2, "1"));
    let out = dir.path().join("res.json");
    assert_eq!(run(&["resolve", s(&spec), "--degree", "3", "--out", s(&out)]).status.code(), Some(0));
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // zero the unit coefficient of one entry of d_2
    let entry = &mut file["differentials"][1]["entries"][0][0];
    let coeffs = entry.as_array_mut().unwrap();
    let k = coeffs.iter().position(|c| c != "0").unwrap();
    coeffs[k] = Value::String("0".into());
    let edited = write(&dir, "edited.json", &serde_json::to_string_pretty(&file).unwrap());
    let (code, v) = json(&["check", s(&edited)]);
    assert_eq!(code, 1);
    let f = first_failure(&v["report"]).unwrap();
    assert!(f["witness"]["degree"].is_u64(), "{f}");
}

#[test]
fn truncated_complex_file_is_bad_input() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ore.json", &ore_spec(3, 2, "1"));
    let out = dir.path().join("res.json");
    assert_eq!(run(&["resolve", s(&spec), "--degree", "2", "--out", s(&out)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let cut = write(&dir, "cut.json", &text[..text.len() / 2]);
    assert_eq!(run(&["check", s(&cut)]).status.code(), Some(2));
    assert_eq!(run(&["check", s(&out), "--exact-through", "3"]).status.code(), Some(2));
}

#[test]
fn failed_resolution_writes_no_file() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "t1.json", &ore_spec(5, 1, "1"));
    let out = dir.path().join("never.json");
    assert_eq!(run(&["resolve", s(&spec), "--degree", "2", "--out", s(&out)]).status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn example4_commands() {
    assert_eq!(run(&["example4", "--p", "5", "--t", "2", "--alpha", "1", "--degree", "4"]).status.code(), Some(0));
    let (code, v) = json(&["example4", "--preset", "nichols", "--p", "5", "--degree", "2"]);
    assert_eq!(code, 0);
    assert!(v["report"]["notes"][0].as_str().unwrap().contains("alpha=3"));
    assert_eq!(run(&["example4", "--p", "2", "--t", "2", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["example4", "--p", "5", "--t", "2", "--alpha", "0"]).status.code(), Some(2));
    let (code, _) = json(&["example4", "--preset", "quantum", "--p", "7", "--q", "3", "--degree", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn resolve_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ore.json", &ore_spec(3, 2, "2"));
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    run(&["resolve", s(&spec), "--degree", "3", "--out", s(&a)]);
    run(&["resolve", s(&spec), "--degree", "3", "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
