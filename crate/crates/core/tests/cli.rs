mod common;

use std::process::{Command, Output};

use serde_json::Value;

use common::{PRINTED_V, W2};

fn tokens(w: &[i32]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn wicks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wicks")).args(args).env_remove("WICKS_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = wicks(&full);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn validate_pass_and_fail() {
    let o = wicks(&["validate", "1 2 -1 -2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("PASS genus=1 maximal=0"));

    let o = wicks(&["validate", &tokens(&W2)]);
    assert_eq!(stdout(&o), "PASS genus=2 maximal=1\nvertices=6 edges=9\n");

    let o = wicks(&["validate", "--word", "1 2 -2 -1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "FAIL ii 1\nFAIL iii 0\n");
    let (code, v) = json(&["validate", "1 2 -2 -1"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], Value::Bool(false));
    assert_eq!(v["violations"][1]["condition"], "iii");
    assert_eq!(v["violations"][1]["position"], 0);
}

#[test]
fn usage_errors() {
    for args in [&["validate", "1 0"][..], &["nope"], &["validate"], &["enumerate"], &["bounds"]] {
        let o = wicks(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(wicks(&["--help"]).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_wicks"))
        .args(["enumerate", "--genus", "1"])
        .env("WICKS_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    // Genus 4 needs the override; [1,2,-1,-2] has loops.
    assert_eq!(wicks(&["enumerate", "--genus", "4"]).status.code(), Some(1));
    assert_eq!(wicks(&["construct", "--form", "1 2 -1 -2"]).status.code(), Some(1));
    assert_eq!(wicks(&["enumerate", "--genus", "1", "--min-length", "5"]).status.code(), Some(1));
}

#[test]
fn word_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "1 2 3 -1 -2 -3\n").unwrap();
    let o = wicks(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().next(), Some("PASS genus=1 maximal=1"));
}

#[test]
fn enumerate_then_count_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("g2max.cat");
    let cat_s = cat.to_str().unwrap();
    let o = wicks(&["enumerate", "--genus", "2", "--maximal", "--output", cat_s]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&cat).unwrap();
    assert!(text.starts_with("wicks-catalog genus=2 maximal=1 complete=1 count=9\n"));

    let v = tokens(&PRINTED_V);
    let o = wicks(&["represent", "--word", &v, "--catalog", cat_s, "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let k: usize = line.trim().strip_prefix("M=").unwrap().parse().unwrap();
    assert!(k >= 1);

    let (_, j) = json(&["count", "--word", &v, "--genus", "2", "--catalog", cat_s]);
    assert_eq!(j["M"], k);
    assert_eq!(j["exact"], true);

    let o = wicks(&["represent", "--word", &v, "--catalog", cat_s]);
    let out = stdout(&o);
    assert_eq!(out.matches("form: ").count(), k);
    assert!(out.contains("offset="));
}

#[test]
fn catalog_text_and_json_agree() {
    let o = wicks(&["enumerate", "--genus", "1"]);
    let text = stdout(&o);
    let (_, j) = json(&["enumerate", "--genus", "1"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("wicks-catalog genus={} maximal=0 complete=1 count={}", j["genus"], j["count"])
    );
    let forms: Vec<String> = j["forms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_array().unwrap().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(lines.map(String::from).collect::<Vec<_>>(), forms);
}

#[test]
fn construct_emits_checked_v() {
    let o = wicks(&["construct", "--form", &tokens(&W2), "--squarefree"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("PASS g=2"));
    let v_line = out.lines().find_map(|l| l.strip_prefix("v: ")).unwrap();
    assert_eq!(v_line.split(' ').count(), 36);
    assert!(out.contains("mirror_triple_free=1 represented=1"));
    assert!(out.contains("square_free=1 mirror_triple_free=1"));
    assert!(out.contains("1 α_1\n"));

    let (_, j) = json(&["construct", "--form", &tokens(&W2), "--squarefree"]);
    let v: Vec<String> = j["v"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    assert_eq!(v.join(" "), v_line);
    assert_eq!(j["report"]["pass"], true);
    assert_eq!(j["report"]["genus"], 2);
    assert_eq!(j["phi"].as_object().unwrap().len(), 9);
    assert_eq!(j["squarefree"]["z"].as_array().unwrap().len(), 36);
    assert_eq!(j["squarefree"]["square_free"], true);
}

#[test]
fn genus_verb() {
    assert_eq!(stdout(&wicks(&["genus", "1 2 -1 -2"])), "genus=1\n");
    assert_eq!(stdout(&wicks(&["genus", "1 1 2 -2"])), "genus=infinite\n");
    let (code, j) = json(&["genus", &tokens(&PRINTED_V)]);
    assert_eq!(code, 0);
    assert_eq!(j["result"], "finite");
    assert_eq!(j["genus"], 2);
    assert_eq!(wicks(&["genus", "1 2 -2 -1 3 -3"]).status.code(), Some(1));
}

#[test]
fn squarefree_verb() {
    assert_eq!(stdout(&wicks(&["squarefree", "--thue", "5"])), "length=5\n1 2 3 1 3\n");
    let o = wicks(&["squarefree", "--word", "1 2 1"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "square_free=1 cyclic=0\n".to_string()));
    let o = wicks(&["squarefree", "--word", "1 2 1", "--cyclic"]);
    assert_eq!(o.status.code(), Some(1));
    let (_, j) = json(&["squarefree", "--word", "1 2 3 1 2 3"]);
    assert_eq!(j["square_free"], false);
    assert_eq!(j["half"], 3);
}

#[test]
fn bounds_verb() {
    let o = wicks(&["bounds", "--genus", "10000000001"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict=holds"));
    let (_, j) = json(&["bounds", "--genus", "2", "--exact", "--formulas"]);
    assert_eq!(j["m"], "35");
    assert_eq!(j["verdict"], "fails");
    let (_, j) = json(&["bounds", "--genus", "1", "--formulas"]);
    assert_eq!(j["m"], "1/6");
    let (_, j) = json(&["bounds", "--threshold"]);
    assert!(j["threshold"].as_u64().unwrap() <= 10_000_000_001);
}

#[test]
fn represent_by_single_form() {
    let (code, j) = json(&["represent", "--word", "1 2 -1 -2", "--form", "1 2 -1 -2"]);
    assert_eq!(code, 0);
    assert_eq!(j["count"], 4);
    assert_eq!(j["representations"][0]["substitution"]["1"][0], 1);
    let o = wicks(&["represent", "--word", &tokens(&PRINTED_V), "--form", "1 2 -1 -2"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "count=0\n".to_string()));
}
