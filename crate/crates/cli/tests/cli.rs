use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divide-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn family_file(dir: &Path, kind: &str, genus: u32) -> String {
    let path = dir.join(format!("{kind}-g{genus}.json"));
    let p = path.to_str().unwrap().to_string();
    let out = run(&["family", "--kind", kind, "--genus", &genus.to_string(), "-o", &p]);
    assert!(out.status.success(), "{}", stderr(&out));
    p
}

#[test]
fn invariants_of_minimal_torus() {
    let dir = tempfile::tempdir().unwrap();
    let file = family_file(dir.path(), "minimal", 1);
    let out = run(&["invariants", &file]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split('\t').collect();
    // g c v k h
    assert_eq!(&row[..5], &["1", "2", "2", "4", "1"]);

    let out = run(&["invariants", &file, "--format", "json"]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["binding_components"], 4);
    assert_eq!(json["page_genus"], 1);
    assert_eq!(json["consistent"], true);
}

#[test]
fn enumerate_genus_two_gives_three_rows() {
    let out = run(&["enumerate", "--genus", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);

    let out = run(&["enumerate", "--genus", "2", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let mut bindings: Vec<u64> = rows
        .iter()
        .map(|r| r["binding_components"].as_u64().unwrap())
        .collect();
    bindings.sort_unstable();
    assert_eq!(bindings, vec![8, 10, 12]);
}

#[test]
fn enumerate_all_on_the_torus() {
    let out = run(&["enumerate", "--genus", "1", "--all", "--max-v", "3", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    // the census up to three double points has four torus entries
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["ambient_genus"] == 1));

    let out = run(&["enumerate", "--genus", "1", "--all", "--max-v", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_disconnected_divides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("two-loops.json");
    std::fs::write(&file, r#"{"format_version": "1", "vertices": [], "free_loops": 2}"#).unwrap();
    let out = run(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("disconnected"));

    let good = family_file(dir.path(), "brunella", 1);
    let out = run(&["validate", &good]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "admissible\n");
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"format_version\": \"1\", \"vertices\": [[0, 1, 2]]}").unwrap();
    let out = run(&["invariants", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schema error"));

    std::fs::write(&file, "{\"format_version\": ").unwrap();
    let out = run(&["invariants", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));

    let out = run(&["family", "--kind", "spiral", "--genus", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn declared_invariants_mismatch_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = family_file(dir.path(), "minimal", 2);
    let text = std::fs::read_to_string(&file).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["metadata"]["expected"]["circles"] = 5.into();
    std::fs::write(&file, doc.to_string()).unwrap();
    let out = run(&["invariants", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("circles"));
}

#[test]
fn fiber_and_monodromy() {
    let dir = tempfile::tempdir().unwrap();
    let file = family_file(dir.path(), "birkhoff-fried", 1);
    let out = run(&["fiber", &file, "--format", "json"]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["euler_char"], -8);
    assert_eq!(json["boundary_components"], 8);
    assert_eq!(json["roundabouts"], 4);
    assert_eq!(json["bands"], 8);
    assert_eq!((json["alphas"].clone(), json["betas"].clone()), (2.into(), 4.into()));

    let out = run(&["monodromy", &file, "--homology", "--format", "json"]);
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["length"], 8);
    assert_eq!(json["homology"]["rank"], 9);
    assert_eq!(json["homology"]["preserves_form"], true);

    let out = run(&["monodromy", &file, "--negate"]);
    assert!(stdout(&out).starts_with("T(a1)^-1 T(a2)^-1 T(b1)^-1"));
}

#[test]
fn render_dot_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let file = family_file(dir.path(), "birkhoff-fried", 1);
    let dot = dir.path().join("dual.dot");
    let out = run(&["render", &file, "--dot", "-o", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 4);

    let svg = dir.path().join("fiber.svg");
    let out = run(&["render", &file, "--svg", "-o", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("class=\"roundabout\"").count(), 4);
    assert_eq!(svg.matches("class=\"band\"").count(), 8);

    let out = run(&["render", &file, "-o", "x.svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_document_round_trips() {
    let out = run(&["family", "--kind", "brunella", "--genus", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["metadata"]["name"], "brunella-g2");
    assert_eq!(doc["metadata"]["expected"]["binding_components"], 10);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 5);
}
