//! End-to-end tests of the `johnson-turan` binary.

use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_johnson-turan"))
        .args(args)
        .env_remove("JOHNSON_TURAN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn schema() -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/boundreport.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::options().compile(&doc).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, row: &Value) {
    if let Err(errors) = schema.validate(row) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("{row} does not match the schema: {msgs:?}");
    }
}

#[test]
fn info_reports_counts_and_flags() {
    let v = json(&["info", "--n", "5", "--r", "2", "--s", "0", "--format", "json"]);
    assert_eq!((v["vertices"].as_u64(), v["degree"].as_u64(), v["edges"].as_u64()), (Some(10), Some(3), Some(15)));
    assert_eq!(v["degenerate"], false);

    let v = json(&["info", "--n", "4", "--r", "3", "--s", "0", "--format", "json"]);
    assert_eq!(v["edges"], 0);
    assert_eq!(v["degenerate"], true);

    let table = stdout(&run(&["info", "--n", "5", "--r", "2", "--s", "0"]));
    assert!(table.lines().any(|l| l.split_whitespace().eq(["edges", "15"])));
}

#[test]
fn huge_counts_are_strings() {
    // C(80,40) > 2^64 while the edge count still fits in 128 bits.
    let v = json(&["info", "--n", "80", "--r", "40", "--s", "39", "--format", "json"]);
    assert_eq!(v["vertices"], "107507208733336176461620");
    assert_eq!(v["degree"], 1600);
    // Here the edge count does not fit.
    let out = run(&["info", "--n", "128", "--r", "64", "--s", "32"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["info", "--n", "3", "--r", "3", "--s", "3"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--n", "3", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    // 220 vertices exceed the default exact cap of 40.
    let out = run(&["alpha", "--n", "12", "--r", "3", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "sizing");
    // l larger than the vertex count is an operational error.
    assert_eq!(run(&["rl", "--n", "5", "--r", "3", "--s", "1", "--l", "11"]).status.code(), Some(1));
    // Both input sources at once is a usage error.
    let both = ["peel", "--n", "6", "--r", "3", "--s", "1", "--random", "5", "--input", "w.json"];
    assert_eq!(run(&both).status.code(), Some(2));
}

#[test]
fn alpha_of_g731() {
    let v = json(&["alpha", "--n", "7", "--r", "3", "--s", "1", "--format", "json"]);
    let a = v["alpha"].as_u64().unwrap();
    assert!((5..=7).contains(&a));
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"].as_array().unwrap().len() as u64, a);
    for key in ["n", "r", "s"] {
        assert!(v[key].is_u64());
    }
}

#[test]
fn bounds_row_matches_schema() {
    let schema = schema();
    let v = json(&["bounds", "--n", "7", "--r", "3", "--s", "1", "--l", "20", "--format", "json"]);
    assert_valid(&schema, &v);
    assert_eq!(v["l"], 20);
    let v = json(&[
        "bounds", "--n", "5", "--r", "2", "--s", "0", "--l", "7", "--rl", "--format", "json",
    ]);
    assert_valid(&schema, &v);
    assert_eq!(v["exact_rl"], 6);
    let v = json(&[
        "bounds", "--n", "9", "--r", "3", "--s", "1", "--l", "12", "--alpha-source", "frankl",
        "--format", "json",
    ]);
    assert_valid(&schema, &v);
    assert_eq!(v["alpha"], 9);
}

#[test]
fn bounds_csv_has_fixed_columns() {
    let out = stdout(&run(&["bounds", "--n", "7", "--r", "3", "--s", "1", "--l", "20", "--format", "csv"]));
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("n,r,s,l,alpha,alpha_source,turan,distance,t4,peeling,exact_rl,method,rl_upper,note")
    );
    assert_eq!(lines.next(), Some("7,3,1,20,5,exact,30,80,120,,,,,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn rl_peel_and_census_run() {
    let v = json(&["rl", "--n", "5", "--r", "2", "--s", "0", "--l", "5", "--format", "json"]);
    assert_eq!(v["value"], 2);
    assert_eq!(v["certified"], true);
    let v = json(&[
        "rl", "--n", "6", "--r", "3", "--s", "1", "--l", "12", "--method", "local-search",
        "--format", "json",
    ]);
    assert_eq!(v["value"], 27);
    assert_eq!(v["certified"], false);

    let v = json(&["peel", "--n", "7", "--r", "3", "--s", "1", "--random", "20", "--format", "json"]);
    assert!(v["total_certified"].as_u64().unwrap() <= v["induced_edges"].as_u64().unwrap());

    let v = json(&[
        "census", "--n", "7", "--r", "3", "--s", "1", "--random", "25", "--audit", "--checkmarks",
        "--format", "json",
    ]);
    assert_eq!(v["audit"]["passed"], true);
    assert_eq!(v["mode"], "exact");
    let marks = v["checkmarks"].as_array().unwrap().len() as u64;
    assert_eq!(marks, v["checkmarks_case1"].as_u64().unwrap() + v["checkmarks_case2"].as_u64().unwrap());
}

#[test]
fn input_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, "[[1,2],[3,4],[1,3],[2,4],[5,1]]").unwrap();
    let v = json(&[
        "peel", "--n", "5", "--r", "2", "--s", "0", "--input", path.to_str().unwrap(), "--format",
        "json",
    ]);
    assert_eq!(v["w_size"], 5);
    std::fs::write(&path, "[[1,2,3]]").unwrap();
    let out = run(&["peel", "--n", "5", "--r", "2", "--s", "0", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn same_flags_same_output() {
    let args = ["census", "--n", "9", "--r", "5", "--s", "2", "--random", "30", "--seed", "7", "--format", "json"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let one = Command::new(env!("CARGO_BIN_EXE_johnson-turan"))
        .args(["rl", "--n", "6", "--r", "3", "--s", "1", "--l", "9", "--format", "csv"])
        .env("JOHNSON_TURAN_THREADS", "1")
        .output()
        .unwrap();
    let many = run(&["rl", "--n", "6", "--r", "3", "--s", "1", "--l", "9", "--format", "csv", "--threads", "4"]);
    let strip_timing = |o: &Output| {
        let text = stdout(o);
        let (head, row) = text.split_once('\n').unwrap();
        let cols: Vec<&str> = head.split(',').collect();
        let t = cols.iter().position(|c| *c == "wall_time").unwrap();
        let n = cols.iter().position(|c| *c == "nodes_explored").unwrap();
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(row.as_bytes());
        let rec = rdr.records().next().unwrap().unwrap();
        rec.iter().enumerate().filter(|(i, _)| *i != t && *i != n).map(|(_, f)| f.to_string()).collect::<Vec<_>>()
    };
    assert_eq!(strip_timing(&one), strip_timing(&many));
}

#[test]
fn sweep_resume_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let base = ["sweep", "--n", "5", "--r", "3", "--s", "1"];
    let with = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        assert_eq!(run(&args).status.code(), Some(0), "{args:?}");
    };
    with(&["--out", full.to_str().unwrap()]);
    with(&["--l-to", "4", "--out", part.to_str().unwrap(), "--resume"]);
    with(&["--out", part.to_str().unwrap(), "--resume"]);
    with(&["--out", part.to_str().unwrap(), "--resume"]);
    let a = std::fs::read_to_string(&full).unwrap();
    assert_eq!(a, std::fs::read_to_string(&part).unwrap());
    assert_eq!(a.lines().count(), 12);
}

#[test]
fn sweep_json_lines_match_schema() {
    let schema = schema();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.jsonl");
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        format!(
            "n = 5\nr = 2\ns = 0\nl_from = 5\nl_to = 8\nmethod = \"exhaustive\"\nformat = \"json\"\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let status = run(&["sweep", "--config", config.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_valid(&schema, row);
        assert_eq!(row["method"], "exhaustive");
        assert!(row["exact_rl"].is_u64());
    }

    std::fs::write(&config, "n = 5\nbogus = 1\n").unwrap();
    assert_eq!(run(&["sweep", "--config", config.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_records_per_row_errors() {
    let out = stdout(&run(&[
        "sweep", "--n", "9", "--r", "3", "--s", "1", "--l-from", "10", "--l-to", "11",
        "--alpha-source", "range-midpoint", "--method", "branch-bound", "--format", "csv",
    ]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains("sizing error")));
}
