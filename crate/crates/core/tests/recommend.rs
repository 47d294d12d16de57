mod common;

use ares::creation::{create_pattern, RuleSet};
use ares::pattern::read_pattern;
use ares::recommend::{create_recommendation, recommend_codebase};
use ares::search::search_body;
use ares::{parse, tokenize, MethodBody};

fn lexemes(b: &MethodBody) -> Vec<String> {
    tokenize(b).lexemes().into_iter().map(String::from).collect()
}

fn recommend_one(p: &ares::pattern::Pattern, body: &MethodBody) -> Vec<MethodBody> {
    let ms = search_body(p, body);
    assert_eq!(ms.len(), 1);
    create_recommendation(p, &ms[0], body).unwrap().variants
}

#[test]
fn identity_pattern_reproduces_location() {
    let p = read_pattern("//# match {\nrun(x);\n//# } modified {\nrun(x);\n//# }\n").unwrap();
    let body = parse("{\n    int x = 1;\n    run(x);\n    // tail\n    done();\n}\n").unwrap();
    let v = recommend_one(&p, &body);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].source_text, body.source_text);
}

#[test]
fn guarded_call_location_gives_expected_body() {
    let g = common::group("guarded_call");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    let v = recommend_one(&p, &common::body("guarded_call/location/c.java"));
    assert_eq!(v.len(), 1);
    assert_eq!(lexemes(&v[0]), lexemes(&common::body("guarded_call/location/e.java")));
}

#[test]
fn loop_rewrite_pattern_rewrites_other_loop() {
    let g = common::group("loop_rewrite");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    let v = recommend_one(&p, &common::body("loop_rewrite/location/a.java"));
    assert_eq!(v.len(), 3);
    assert_eq!(v[0].source_text, common::body("loop_rewrite/location/b.java").source_text);
    assert!(v[1].source_text.contains("print(c);"));
    assert!(!v[2].source_text.contains("log(c)") && !v[2].source_text.contains("print(c)"));
}

#[test]
fn training_examples_apply_to_themselves() {
    let g = common::group("guarded_call");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    for e in &g {
        let v = recommend_one(&p, &e.original);
        assert_eq!(lexemes(&v[0]), lexemes(&e.modified), "{}", e.id);
    }
}

const ONE_CHOICE: &str = "//# match {
a();
//# } modified {
a();
//# choice {
//# case {
b();
//# }
//# case {
c();
//# }
//# }
//# }
";

const TWO_CHOICES: &str = "//# match {
a();
//# } modified {
a();
//# choice {
//# case {
b();
//# }
//# case {
c();
//# }
//# }
//# choice {
//# case {
x();
//# }
//# case {
y();
//# }
//# case {
z();
//# }
//# }
//# }
";

fn calls(b: &MethodBody) -> String {
    b.root.children.iter().map(|s| ares::printer::print_statement(s, 0).trim().to_string()).collect::<Vec<_>>().join(" ")
}

#[test]
fn variant_counts_follow_the_largest_choice() {
    let body = parse("{ a(); }").unwrap();
    let plain = read_pattern("//# match {\na();\n//# } modified {\nb();\n//# }\n").unwrap();
    assert_eq!(recommend_one(&plain, &body).len(), 1);

    let v: Vec<String> = recommend_one(&read_pattern(ONE_CHOICE).unwrap(), &body).iter().map(calls).collect();
    assert_eq!(v, ["a(); b();", "a(); c();", "a();"]);

    let v: Vec<String> = recommend_one(&read_pattern(TWO_CHOICES).unwrap(), &body).iter().map(calls).collect();
    assert_eq!(v, ["a(); b(); x();", "a(); c(); y();", "a(); z();", "a();"]);
}

#[test]
fn codebase_without_matches_is_empty() {
    let g = common::group("guarded_call");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    let files = vec![("x.java".to_string(), parse("{ other(); }").unwrap())];
    assert!(recommend_codebase(&p, &files).is_empty());
    assert!(recommend_codebase(&p, &[]).is_empty());
}
