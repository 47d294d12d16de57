use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn aresd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aresd")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Copies `<id>.orig.java` / `<id>.mod.java` fixtures into the
/// `<id>/before.java` / `<id>/after.java` layout.
fn examples(tmp: &Path, group: &str) -> PathBuf {
    let dir = tmp.join("examples");
    for entry in fs::read_dir(fixtures().join(group)).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if let Some(id) = name.strip_suffix(".orig.java") {
            let d = dir.join(id);
            fs::create_dir_all(&d).unwrap();
            fs::copy(fixtures().join(group).join(&name), d.join("before.java")).unwrap();
            fs::copy(fixtures().join(group).join(format!("{id}.mod.java")), d.join("after.java")).unwrap();
        }
    }
    dir
}

fn codebase(tmp: &Path, files: &[(&str, &str)]) -> PathBuf {
    let dir = tmp.join("code");
    fs::create_dir_all(&dir).unwrap();
    for (name, text) in files {
        let p = dir.join(name);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, text).unwrap();
    }
    dir
}

fn fixture(rel: &str) -> String {
    fs::read_to_string(fixtures().join(rel)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn tokens(text: &str) -> Vec<String> {
    ares::tokenize(&ares::parse(text).unwrap()).lexemes().into_iter().map(String::from).collect()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn pipeline_reproduces_guarded_call_and_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "guarded_call");
    let code_dir = codebase(tmp.path(), &[("pkg/C.java", &fixture("guarded_call/location/c.java"))]);
    let mut artifacts = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let o = aresd(&["pipeline", "--examples", s(&ex), "--codebase", s(&code_dir), "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let manifest = json(&out.join("recs/manifest.json"));
        let recs = manifest["recommendations"].as_array().unwrap();
        assert_eq!(recs.len(), 1);
        let method = recs[0]["method"].as_str().unwrap();
        let v = fs::read_to_string(out.join("recs/pkg/C.java").join(method).join("variant-1.java")).unwrap();
        assert_eq!(tokens(&v), tokens(&fixture("guarded_call/location/e.java")));
        assert!(out.join("pattern.ares").is_file());
        let bytes: Vec<Vec<u8>> = ["matches.json", "report.json", "recs/manifest.json", "pattern.ares"]
            .iter()
            .map(|f| fs::read(out.join(f)).unwrap())
            .collect();
        artifacts.push(bytes);
    }
    assert_eq!(artifacts[0], artifacts[1]);
}

#[test]
fn empty_codebase_gives_no_recommendations() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "guarded_call");
    let code_dir = codebase(tmp.path(), &[]);
    let out = tmp.path().join("out");
    let o = aresd(&["pipeline", "--examples", s(&ex), "--codebase", s(&code_dir), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&out.join("report.json"))["recommendations"], 0);
    assert_eq!(json(&out.join("recs/manifest.json"))["schemaVersion"], 1);
}

#[test]
fn unrelated_examples_abort_with_exit_2() {
    let tmp = TempDir::new().unwrap();
    let ex = tmp.path().join("examples");
    for (id, before, after) in [("a", "{ a(); }", "{ b(); }"), ("b", "{ x = 1; }", "{ x = 2; }")] {
        fs::create_dir_all(ex.join(id)).unwrap();
        fs::write(ex.join(id).join("before.java"), before).unwrap();
        fs::write(ex.join(id).join("after.java"), after).unwrap();
    }
    let code_dir = codebase(tmp.path(), &[]);
    let out = tmp.path().join("out");
    let o = aresd(&["pipeline", "--examples", s(&ex), "--codebase", s(&code_dir), "--out", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no pattern generated"));
}

#[test]
fn syntax_errors_and_bad_flags_exit_1() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "guarded_call");
    let code_dir = codebase(tmp.path(), &[("Bad.java", "{ if ( }")]);
    let out = tmp.path().join("out");
    let o = aresd(&["pipeline", "--examples", s(&ex), "--codebase", s(&code_dir), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&aresd(&["learn", "--no-such-flag"])), 1);
    let missing = tmp.path().join("missing");
    assert_eq!(code(&aresd(&["learn", "--examples", s(&missing), "--out", s(&out)])), 1);
    assert_eq!(code(&aresd(&["--help"])), 0);
}

#[test]
fn diff_json_lists_operations() {
    let f = fixtures().join("guarded_call");
    let o = aresd(&["diff", s(&f.join("c1.orig.java")), s(&f.join("c1.mod.java")), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["mappingSize"].as_u64().unwrap() > 0);
    let ops = v["ops"].as_array().unwrap();
    assert!(!ops.is_empty());
    assert!(ops.iter().all(|op| op["kind"].is_string() && op["path"].is_array()));
}

#[test]
fn order_starts_with_the_closest_pair() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "distance_matrix");
    let o = aresd(&["order", "--examples", s(&ex)]);
    assert_eq!(code(&o), 0);
    let ids: Vec<String> = String::from_utf8_lossy(&o.stdout).lines().map(String::from).collect();
    assert_eq!(&ids[..2], ["c2", "c3"]);
}

#[test]
fn learn_search_recommend_evaluate() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "guarded_call");
    let pattern = tmp.path().join("p.ares");
    assert_eq!(code(&aresd(&["learn", "--examples", s(&ex), "--out", s(&pattern), "--rules", "all"])), 0);
    let code_dir = codebase(
        tmp.path(),
        &[("C.java", &fixture("guarded_call/location/c.java")), ("Other.java", "{\n    idle();\n}\n")],
    );
    let o = aresd(&["search", "--pattern", s(&pattern), "--codebase", s(&code_dir), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let found: Value = serde_json::from_slice(&o.stdout).unwrap();
    let matches = found["matches"].as_array().unwrap();
    assert_eq!(matches.len(), 1);
    assert_eq!(matches[0]["file"], "C.java");

    let recs = tmp.path().join("recs");
    let o = aresd(&["recommend", "--pattern", s(&pattern), "--codebase", s(&code_dir), "--out", s(&recs)]);
    assert_eq!(code(&o), 0);
    let method = json(&recs.join("manifest.json"))["recommendations"][0]["method"].as_str().unwrap().to_string();

    // Two truth locations, one of them recommended.
    let truth = tmp.path().join("truth");
    for (file, m, body) in [("C.java", method.as_str(), fixture("guarded_call/location/e.java")), ("Other.java", "0-17", "{\n    idle();\n}\n".into())] {
        let d = truth.join(file).join(m);
        fs::create_dir_all(&d).unwrap();
        fs::write(d.join("after.java"), body).unwrap();
    }
    let index = serde_json::json!({
        "locations": [{"file": "C.java", "method": method}, {"file": "Other.java", "method": "0-17"}]
    });
    fs::write(truth.join("locations.json"), index.to_string()).unwrap();
    let report = tmp.path().join("report.json");
    let o = aresd(&["evaluate", "--recs", s(&recs), "--truth", s(&truth), "--report", s(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r["schemaVersion"], 1);
    assert_eq!(r["evaluation"]["precision"], 100.0);
    assert_eq!(r["evaluation"]["recall"], 50.0);
    assert_eq!(r["evaluation"]["token"]["min"], 100.0);
}

#[test]
fn parallelism_override_gives_same_output() {
    let tmp = TempDir::new().unwrap();
    let ex = examples(tmp.path(), "loop_rewrite");
    let code_dir = codebase(tmp.path(), &[("A.java", &fixture("loop_rewrite/location/a.java"))]);
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = tmp.path().join(format!("out{threads}"));
        let o = Command::new(env!("CARGO_BIN_EXE_aresd"))
            .env("ARESD_PARALLELISM", threads)
            .args(["pipeline", "--examples", s(&ex), "--codebase", s(&code_dir), "--out", s(&out), "--max-variants", "2"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&out.join("recs/manifest.json"))["recommendations"][0]["variantCount"], 2);
        outputs.push(fs::read(out.join("matches.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
