use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use plumb_survey::{SurveyRow, Verdict};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn plumb_hf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumb-hf"))
        .args(args)
        .env_remove("PLUMB_HF_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_e8() {
    let out = plumb_hf(&["analyze", data("e8.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["name"], "E8");
    assert_eq!(r["det"], 1);
    assert_eq!(r["negative_definite"], true);
    assert_eq!(r["good_initial_count"], 1);
    assert_eq!(r["initial_count"], 256);
    assert_eq!(r["partial"], false);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn analyze_sigma_2_3_7_with_sequences() {
    let path = data("sigma_2_3_7.json");
    let out = plumb_hf(&["analyze", path.to_str().unwrap(), "--emit-sequences"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["good_initial_count"], 2);
    assert_eq!(r["verdict"], "nontrivial");
    let seqs = r["sequences"].as_array().unwrap();
    assert_eq!(seqs.len(), 2);
    for (seq, initial) in seqs.iter().zip(r["good_initials"].as_array().unwrap()) {
        assert_eq!(&seq["states"][0], initial);
    }
}

#[test]
fn early_stop_sets_partial() {
    let path = data("sigma_2_3_7.json");
    let out = plumb_hf(&["analyze", path.to_str().unwrap(), "--early-stop", "1"]);
    let r = json(&out);
    assert_eq!(r["good_initial_count"], 1);
    assert_eq!(r["partial"], true);
    assert_eq!(r["verdict"], "skipped");
}

#[test]
fn two_bad_vertices_is_an_error() {
    let out = plumb_hf(&["analyze", data("two_bad.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad vertices"), "{}", stderr(&out));
}

#[test]
fn malformed_weight_names_the_field() {
    let out = plumb_hf(&["analyze", data("bad_weight.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("vertices[0].weight"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn missing_file_and_bad_flags_exit_one() {
    assert_eq!(
        plumb_hf(&["analyze", "/nonexistent/graph.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(plumb_hf(&["analyze"]).status.code(), Some(1));
    assert_eq!(
        plumb_hf(&["survey", "--mode", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(
        plumb_hf(&["survey", "--mode", "brieskorn", "--max-a", "100000"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(plumb_hf(&["s3", "--bound", "3"]).status.code(), Some(1));
    assert_eq!(plumb_hf(&["--help"]).status.code(), Some(0));
}

#[test]
fn brieskorn_command() {
    let out = plumb_hf(&["brieskorn", "2", "3", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["good_initial_count"], 2);
    assert_eq!(r["seifert"]["center"], -1);

    let out = plumb_hf(&["brieskorn", "2", "4", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not coprime"), "{}", stderr(&out));
}

#[test]
fn report_to_file_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = plumb_hf(&[
        "brieskorn",
        "2",
        "3",
        "5",
        "--format",
        "csv",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header = reader.headers().unwrap().clone();
    let rec = reader.records().next().unwrap().unwrap();
    let field = |name: &str| rec[header.iter().position(|h| h == name).unwrap()].to_owned();
    assert_eq!(field("good_initial_count"), "1");
    assert_eq!(field("verdict"), "trivial-rank");
    assert_eq!(field("weights"), "-2;-2;-2;-2;-2;-2;-2;-2");
}

/// Renders a JSON scalar the way the CSV writer does.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn same_data(args: &[&str]) {
    let js = plumb_hf(&[args, &["--format", "json"]].concat());
    let cs = plumb_hf(&[args, &["--format", "csv"]].concat());
    assert_eq!(js.status.code(), cs.status.code());
    let rows = json(&js);
    let rows = rows.as_array().unwrap();
    let mut reader = csv::Reader::from_reader(&cs.stdout[..]);
    let header = reader.headers().unwrap().clone();
    let records: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), records.len());
    assert!(!rows.is_empty());
    for (row, rec) in rows.iter().zip(&records) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), header.len());
        for (name, value) in header.iter().zip(rec.iter()) {
            assert_eq!(cell(&obj[name]), value, "column {name}");
        }
    }
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    same_data(&[
        "survey",
        "--mode",
        "brieskorn",
        "--max-a",
        "11",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    same_data(&[
        "survey",
        "--mode",
        "all-minus-two",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    same_data(&["s3", "--bound", "12"]);
}

#[test]
fn s3_rows_pass() {
    let out = plumb_hf(&["s3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows: Vec<SurveyRow> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rows.len() >= 10);
    let find = |p: [i64; 4]| rows.iter().find(|r| r.params == p).unwrap();
    assert_eq!(find([2, -1, 3, -1]).central_count, Some(4));
    assert_eq!(find([3, -2, 4, -1]).central_count, Some(6));
    assert!(rows
        .iter()
        .all(|r| r.properties_hold() && r.verdict == Verdict::TrivialRank));
}

#[test]
fn skipped_rows_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = plumb_hf(&[
        "survey",
        "--mode",
        "brieskorn",
        "--max-a",
        "5",
        "--max-initials",
        "10",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows: Vec<SurveyRow> = serde_json::from_slice(&out.stdout).unwrap();
    let skipped: Vec<_> = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Skipped)
        .collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0].params, [2, 3, 5]);
    assert!(skipped[0].reason.as_deref().unwrap().contains("initial"));
    // skipped rows are not cached
    let cached = std::fs::read_to_string(&cache).unwrap_or_default();
    assert_eq!(cached.lines().count(), rows.len() - 1);
}

#[test]
fn cache_is_reused_and_reverified() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = ["survey", "--mode", "brieskorn", "--max-a", "13"];
    let with_cache = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_plumb-hf"))
            .args(args)
            .args(extra)
            .env("PLUMB_HF_CACHE", &cache)
            .output()
            .unwrap()
    };

    let first = with_cache(&[]);
    assert_eq!(first.status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap();
    let entries = text.lines().count();
    let rows: Vec<SurveyRow> = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(entries, rows.len());

    let second = with_cache(&[]);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(
        std::fs::read_to_string(&cache).unwrap().lines().count(),
        entries
    );

    // corrupt one entry; without re-verification the cached value is served
    let mut lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    lines[0]["row"]["good_initial_count"] = Value::from(99);
    let corrupted: String = lines.iter().map(|l| format!("{l}\n")).collect();
    std::fs::write(&cache, corrupted).unwrap();
    let stale = with_cache(&["--reverify-sample", "0"]);
    let stale_rows: Vec<SurveyRow> = serde_json::from_slice(&stale.stdout).unwrap();
    assert!(stale_rows.iter().any(|r| r.good_initial_count == Some(99)));

    // re-verifying every entry finds and replaces it
    let checked = with_cache(&["--reverify-sample", "1000"]);
    assert_eq!(checked.stdout, first.stdout);
    assert!(
        stderr(&checked).contains("did not match"),
        "{}",
        stderr(&checked)
    );
    let healed = with_cache(&["--reverify-sample", "0"]);
    assert_eq!(healed.stdout, first.stdout);
}

#[test]
fn cache_keys_separate_early_stop_settings() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let c = cache.to_str().unwrap();
    let stop = plumb_hf(&[
        "survey",
        "--mode",
        "brieskorn",
        "--max-a",
        "7",
        "--cache",
        c,
    ]);
    let full = plumb_hf(&[
        "survey",
        "--mode",
        "brieskorn",
        "--max-a",
        "7",
        "--full",
        "--cache",
        c,
    ]);
    let stop: Vec<SurveyRow> = serde_json::from_slice(&stop.stdout).unwrap();
    let full: Vec<SurveyRow> = serde_json::from_slice(&full.stdout).unwrap();
    assert_eq!(stop.len(), full.len());
    assert!(full.iter().all(|r| !r.partial));
    let row = |rows: &[SurveyRow]| {
        rows.iter()
            .find(|r| r.params == [2, 3, 7])
            .unwrap()
            .good_initial_count
    };
    assert_eq!(row(&full), Some(2));
    assert_eq!(
        std::fs::read_to_string(&cache).unwrap().lines().count(),
        stop.len() + full.len()
    );
}
