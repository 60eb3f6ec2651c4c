use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn gleafkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gleafkit")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn passing_check_exits_zero() {
    let out = gleafkit(&["check", "--instance", "nerve", "--mode", "compository", "--dims", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["failures"], 0);
    assert!(v["samples"].as_u64().unwrap() > 0);
}

#[test]
fn failing_check_exits_one() {
    let out = gleafkit(&["check", "--instance", "broken", "--samples", "20", "--dims", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["failures"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gleafkit(&["check", "--instance", "bogus"]).status.code(), Some(2));
    assert_eq!(gleafkit(&["check"]).status.code(), Some(2));
    assert_eq!(gleafkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gleafkit(&["check", "--instance", "spans", "--dims", "12"]).status.code(), Some(2));
    assert_eq!(gleafkit(&["check", "--instance", "nerve", "--samples", "many"]).status.code(), Some(2));
    assert_eq!(gleafkit(&["compose", "--instance", "metric", "/no/such/file", "0", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn check_reads_a_config_file_and_writes_out() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "cfg.json", &json!({"instance": "topology", "mode": "gleaf", "dims": 1, "seed": 4}));
    let out_path = dir.path().join("report.json");
    let out = gleafkit(&["check", "--config", s(&config), "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["config"]["instance"], "topology");
    assert_eq!(report["config"]["seed"], 4);

    let bad = write(&dir, "bad.json", &json!({"instance": "topology", "speed": 3}));
    assert_eq!(gleafkit(&["check", "--config", s(&bad)]).status.code(), Some(2));
}

#[test]
fn compose_metrics_with_rational_distances() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &json!({"points": ["0", "1"], "d": [["0", "1", "1/2"]]}));
    let b = write(&dir, "b.json", &json!({"points": ["0", "1"], "d": [["0", "1", "3/4"]]}));
    let out = gleafkit(&["compose", "--instance", "metric", s(&a), "0", s(&b)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let d: Vec<Value> = stdout_json(&out)["d"].as_array().unwrap().clone();
    assert!(d.contains(&json!(["0", "2", "5/4"])), "{d:?}");

    let out = gleafkit(&["compose", "--instance", "metric", s(&a), "1", s(&b)]);
    assert_eq!(out.status.code(), Some(2), "faces differ, so the pair is not 1-composable");
}

#[test]
fn compose_nerve_paths() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &json!({"objects": ["0", "1"], "arrows": ["0<=1"]}));
    let b = write(&dir, "b.json", &json!({"objects": ["1", "2"], "arrows": ["1<=2"]}));
    let out = gleafkit(&["compose", "--instance", "nerve", s(&a), "0", s(&b)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out), json!({"objects": ["0", "1", "2"], "arrows": ["0<=1", "1<=2"]}));
}

#[test]
fn glue_distributions_sums_to_one() {
    let dir = TempDir::new().unwrap();
    let pa = write(&dir, "a.json", &json!({"vars": ["x", "y"], "outcomes": ["0", "1"], "w": {"0,0": "1/2", "1,1": "1/2"}}));
    let pb = write(&dir, "b.json", &json!({"vars": ["y", "z"], "outcomes": ["0", "1"], "w": {"0,0": "1/4", "0,1": "1/4", "1,1": "1/2"}}));
    let out = gleafkit(&["glue", "--instance", "probability", s(&pa), s(&pb)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let w = stdout_json(&out)["w"].clone();
    assert_eq!(w, json!({"0,0,0": "1/4", "0,0,1": "1/4", "1,1,1": "1/2"}));

    let pc = write(&dir, "c.json", &json!({"vars": ["y"], "outcomes": ["0", "1"], "w": {"0": "1"}}));
    assert_eq!(gleafkit(&["glue", "--instance", "probability", s(&pa), s(&pc)]).status.code(), Some(2));
}

#[test]
fn glue_relations_from_csv_over_a_cover() {
    let dir = TempDir::new().unwrap();
    let ra = dir.path().join("a.csv");
    let rb = dir.path().join("b.csv");
    std::fs::write(&ra, "p,q\n1,2\n3,2\n").unwrap();
    std::fs::write(&rb, "q,r\n2,5\n2,6\n").unwrap();
    let out = gleafkit(&["glue", "--instance", "relational", s(&ra), s(&rb)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["tuples"].as_array().unwrap().len(), 4);

    let rd = dir.path().join("d.csv");
    std::fs::write(&rd, "q,r\n4,5\n").unwrap();
    assert_eq!(gleafkit(&["glue", "--instance", "relational", s(&ra), s(&rd)]).status.code(), Some(2));

    let rc = dir.path().join("c.csv");
    std::fs::write(&rc, "u,v\n2,7\n").unwrap();
    let cover = write(&dir, "cover.json", &json!({"cod": ["p", "q", "r"], "a": {"p": "p", "q": "q"}, "b": {"u": "q", "v": "r"}}));
    let out = gleafkit(&["glue", "--instance", "relational", s(&ra), s(&rc), "--cover", s(&cover)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["tuples"], json!([{"p": "1", "q": "2", "r": "7"}, {"p": "3", "q": "2", "r": "7"}]));
}

#[test]
fn act_restricts_along_vertex_lists_and_maps() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &json!({"points": ["0", "1", "2"], "d": [["0", "1", "1"], ["1", "2", "2"], ["0", "2", "3"]]}));
    let out = gleafkit(&["act", "--instance", "metric", s(&m), "0,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["d"].as_array().unwrap().contains(&json!(["0", "1", "3"])));

    let t = write(&dir, "t.json", &json!({"carrier": ["x", "y"], "opens": [[], ["x"], ["x", "y"]]}));
    let out = gleafkit(&["act", "--instance", "topology", s(&t), r#"{"a": "y", "b": "x"}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["opens"], json!([[], ["b"], ["a", "b"]]));

    assert_eq!(gleafkit(&["act", "--instance", "metric", s(&m), "0,5"]).status.code(), Some(2));
}

#[test]
fn counterexamples_are_certified() {
    for which in ["span-horn", "metric-horn", "prob-triple", "topology-triple"] {
        let out = gleafkit(&["counterexample", which]);
        assert_eq!(out.status.code(), Some(0), "{which}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["certified"], true, "{which}");
    }
    let out = gleafkit(&["counterexample", "prob-triple"]);
    assert_eq!(stdout_json(&out)["verification"]["support_join_size"], 0);
    let out = gleafkit(&["counterexample", "topology-triple"]);
    assert_eq!(stdout_json(&out)["verification"]["topologies_searched"], 29);
}

#[test]
fn thread_count_comes_from_the_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gleafkit"))
            .args(["check", "--instance", "probability", "--dims", "2", "--samples", "40"])
            .env("GLEAFKIT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout_json(&one), stdout_json(&run("2")));
    assert_eq!(run("zero").status.code(), Some(2));
    assert_eq!(run("0").status.code(), Some(2));
}
