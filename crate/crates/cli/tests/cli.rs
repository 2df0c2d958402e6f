use std::process::{Command, Output};

use serde_json::Value;

fn frobtor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobtor")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = frobtor(&a);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&v);
    v
}

fn assert_valid(v: &Value) {
    let schema: Value = serde_json::from_str(frobenius_cli::SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {msgs:#?}\n{v:#}");
    };
}

#[test]
fn check_reports_invariants() {
    let v = json(&["check", "ex31"]);
    let r = &v["report"];
    assert_eq!(r["condition1"], true);
    assert_eq!(r["depth"], 0);
    assert_eq!(r["c"], 2);
    assert_eq!(r["r_threshold"], 2);
    assert_eq!(json(&["check", "ex32"])["report"]["condition1"], true);
    let f = json(&["check", "field"]);
    assert_eq!(f["report"]["condition1"], false);
    assert!(f["report"]["note"].as_str().unwrap().contains("regular"));
}

#[test]
fn tor_tables() {
    let v = json(&["tor", "r1", "--N", "4"]);
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    let lengths: Vec<u64> = rows.iter().map(|r| r["length"].as_u64().unwrap()).collect();
    assert_eq!(lengths, vec![3, 6, 12, 24, 48]);
    assert_eq!(v["tables"][0]["verdicts"][0], "constant=3");

    let v = json(&["tor", "r1", "--module", "R", "--N", "3"]);
    let lengths: Vec<u64> = v["tables"][0]["rows"].as_array().unwrap().iter().map(|r| r["length"].as_u64().unwrap()).collect();
    assert_eq!(lengths, vec![3, 0, 0, 0]);

    let v = json(&["tor", "ex31", "--module", "coker [[x]]", "--N", "3"]);
    let rows = &v["tables"][0]["rows"];
    assert_eq!(rows[0]["length"], "INF");
    assert_eq!(rows[1]["length"], 3);
    assert_eq!(rows[2]["length"], 4);
}

#[test]
fn text_and_json_agree() {
    let args = ["tor", "ex32", "--module", "A", "--r", "1,2", "--N", "4"];
    let text = stdout(&frobtor(&args));
    let v = json(&args);
    for table in v["tables"].as_array().unwrap() {
        for row in table["rows"].as_array().unwrap() {
            let len = match &row["length"] {
                Value::String(s) => s.clone(),
                n => n.to_string(),
            };
            let line = format!("{:>4}  {:>10}  {:>8}", row["j"].to_string(), len, row["betti"].to_string());
            assert!(text.contains(&line), "missing `{line}` in\n{text}");
        }
    }
}

#[test]
fn every_subcommand_validates() {
    json(&["rigidity", "depth1", "--module", "B", "--r", "1,2"]);
    json(&["ratio", "dual", "--r", "1,2", "--N", "5"]);
    json(&["balance", "f3xy", "--N", "3"]);
    json(&["resolve", "ex31", "--module", "A", "--N", "3"]);
    json(&["search", "--family", "depth1", "--trials", "10", "--seed", "4"]);
    json(&["search", "--trials", "0"]);
}

#[test]
fn exit_codes() {
    assert_eq!(frobtor(&["check", "ex33"]).status.code(), Some(0));
    assert_eq!(frobtor(&["check", "no-such-ring"]).status.code(), Some(1));
    assert_eq!(frobtor(&["tor", "r1", "--N", "13"]).status.code(), Some(1));
    assert_eq!(frobtor(&["tor", "r1", "--module", "coker [[q]]"]).status.code(), Some(1));
    assert_eq!(frobtor(&["ratio", "r1", "--module", "R"]).status.code(), Some(1));
    assert_eq!(frobtor(&["rigidity", "ex31", "--module", "A", "--N", "4"]).status.code(), Some(0));
    let bad = frobtor(&["tor", "r1", "--N", "13", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_valid(&v);
    assert_eq!(v["command"], "error");
}

#[test]
fn ring_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mine.ring");
    std::fs::write(&path, "ring F 2 [x,y] / (x^2, x*y, y^2)\nmodule M = coker [[x, y]]\n").unwrap();
    let v = json(&["tor", path.to_str().unwrap(), "--module", "M", "--N", "3"]);
    assert_eq!(v["ring"], "mine");
    let lengths: Vec<u64> = v["tables"][0]["rows"].as_array().unwrap().iter().map(|r| r["length"].as_u64().unwrap()).collect();
    assert_eq!(lengths, vec![3, 6, 12, 24]);
    std::fs::write(&path, "ring F 4 [x] / (x^2)\n").unwrap();
    assert_eq!(frobtor(&["check", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn search_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let o = frobtor(&["search", "--family", "artinian", "--trials", "40", "--seed", "9", "--format", "json"]);
        let p = dir.path().join(name);
        std::fs::write(&p, &o.stdout).unwrap();
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let other = frobtor(&["search", "--family", "artinian", "--trials", "40", "--seed", "10", "--format", "json"]);
    assert_ne!(run("c.json"), other.stdout);
}

#[test]
fn search_examples() {
    let v = json(&["search", "--family", "m2", "--trials", "200", "--seed", "42"]);
    let s = &v["report"]["summary"];
    assert_eq!(s["witnesses"], 0);
    assert_eq!(s["contradictions"], 0);

    let v = json(&["search", "depth1", "--r", "2", "--trials", "60", "--seed", "1"]);
    for w in v["report"]["witnesses"].as_array().unwrap() {
        if w["window"].as_str().is_some_and(|n| n.starts_with("witness")) {
            assert!(w["projective_dimension"].is_u64(), "{w}");
        }
    }
    assert_eq!(v["report"]["summary"]["contradictions"], 0);

    let v = json(&["search", "--trials", "0"]);
    assert_eq!(v["report"]["summary"]["instances"], 0);
    assert!(v["report"]["witnesses"].as_array().unwrap().is_empty());
}
