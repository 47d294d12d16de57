mod common;

use ares::creation::{
    adjust_edit_script, create_pattern, insert_match_identifiers, learn, refine_pattern, IsolationStep, RuleSet,
};
use ares::diff::{diff, EditOp};
use ares::ordering::ChangeExample;
use ares::pattern::{read_pattern, write_pattern, AnnotationKind};
use ares::{parse, CreationError, Kind};

fn ex(id: &str, o: &str, m: &str) -> ChangeExample {
    ChangeExample::new(id, parse(o).unwrap(), parse(m).unwrap())
}

fn names(anns: &[ares::pattern::Annotation], kind: AnnotationKind) -> Vec<String> {
    anns.iter().filter(|a| a.kind == kind).map(|a| a.name.clone()).collect()
}

#[test]
fn guarded_call_pattern_shape() {
    let g = common::group("guarded_call");
    let c = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap();
    let p = &c.pattern;
    assert_eq!(c.trace.isolation.step, IsolationStep::Direct);
    assert!(p.match_identifiers.is_empty());
    assert_eq!(names(&p.original_annotations(), AnnotationKind::WildcardStmt), ["A0", "A1"]);
    assert_eq!(names(&p.modified_annotations(), AnnotationKind::Use), ["A1"]);
    assert!(p.choices().is_empty());
    let top: Vec<Kind> = p.modified.children.iter().map(|n| n.kind).collect();
    assert_eq!(top, [Kind::Decl, Kind::If, Kind::Return]);
}

#[test]
fn loop_rewrite_pattern_shape() {
    let g = common::group("loop_rewrite");
    let c = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap();
    let p = &c.pattern;
    assert_eq!(c.trace.isolation.step, IsolationStep::Children);
    assert_eq!(p.match_identifiers, ["k"]);
    assert_eq!(c.trace.removed, ["A0"]);
    let po = p.original_annotations();
    assert_eq!(names(&po, AnnotationKind::WildcardExpr), ["A1"]);
    assert_eq!(names(&po, AnnotationKind::WildcardStmt), ["A2", "A3"]);
    let choices = p.choices();
    assert_eq!(choices.len(), 1);
    assert_eq!(choices[0].cases.len(), 2);
    assert!(p.modified.children.iter().any(|n| n.kind == Kind::For));
    assert!(!p.modified.children.iter().any(|n| n.kind == Kind::While));
}

#[test]
fn loop_rewrite_golden_text() {
    let g = common::group("loop_rewrite");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    let golden = std::fs::read_to_string(common::fixtures().join("loop_rewrite/pattern.ares")).unwrap();
    assert_eq!(write_pattern(&p), golden);
    assert_eq!(write_pattern(&read_pattern(&golden).unwrap()), golden);
}

#[test]
fn declaration_with_new_name_and_value_is_replaced() {
    let o1 = parse("{ int a = 1; f(a); }").unwrap().root;
    let o2 = parse("{ int b = 2; f(a); }").unwrap().root;
    let script = diff(&o1, &o2);
    let count = |s: &ares::diff::EditScript, f: fn(&EditOp) -> bool| s.ops.iter().filter(|o| f(o)).count();
    let on = adjust_edit_script(&script, &o1, &o2, &RuleSet::default());
    let decl_inserts = |s| count(s, |o| matches!(o, EditOp::Insert { kind: Kind::Decl, .. }));
    assert_eq!(decl_inserts(&on), 1);
    let off = adjust_edit_script(&script, &o1, &o2, &RuleSet::none());
    assert_eq!(decl_inserts(&off), 0);
}

#[test]
fn cross_parent_moves_are_demoted() {
    let o1 = parse("{ a(); if (c) { b(); } }").unwrap().root;
    let o2 = parse("{ if (c) { a(); b(); } }").unwrap().root;
    let script = diff(&o1, &o2);
    assert!(script.ops.iter().any(|o| matches!(o, EditOp::Move { .. })));
    let rules = RuleSet { demote_moves: true, ..RuleSet::none() };
    let adjusted = adjust_edit_script(&script, &o1, &o2, &rules);
    assert!(!adjusted.ops.iter().any(|o| matches!(o, EditOp::Move { .. })));
    assert!(adjusted.ops.iter().any(|o| matches!(o, EditOp::Delete { .. })));
}

#[test]
fn two_renames_give_two_placeholders() {
    let o1 = parse("{ int a = f(); int b = g(); h(a, b); }").unwrap().root;
    let o2 = parse("{ int x = f(); int y = g(); h(x, y); }").unwrap().root;
    let adjusted = adjust_edit_script(&diff(&o1, &o2), &o1, &o2, &RuleSet::default());
    let mi = insert_match_identifiers(&adjusted, &o1, &o2);
    assert_eq!(mi.names, ["x", "y"]);
    assert_eq!(mi.renames.get("x").map(String::as_str), Some("a"));
}

#[test]
fn unrelated_changes_have_no_common_region() {
    let c1 = ex("c1", "{ a(); }", "{ b(); }");
    let c2 = ex("c2", "{ x = 1; }", "{ x = 2; }");
    assert!(matches!(create_pattern(&c1, &c2, &RuleSet::default()), Err(CreationError::NoCommonRegion)));
}

#[test]
fn identical_examples_give_a_plain_pattern() {
    let c = ex("c", "{ int x = 0; run(x); }", "{ int x = 0; check(x); run(x); }");
    let p = create_pattern(&c, &c, &RuleSet::default()).unwrap().pattern;
    assert_eq!(p.annotation_count(), 0);
    assert!(p.match_identifiers.is_empty());
}

#[test]
fn differing_loops_collapse_into_a_wildcard() {
    let c1 = ex("c1", "{ a(); for (int i = 0; i < 3; i++) { x(i); } b(); }", "{ a(); for (int i = 0; i < 3; i++) { x(i); } c(); }");
    let c2 = ex("c2", "{ a(); while (ok) { y(); } b(); }", "{ a(); while (ok) { y(); } c(); }");
    let p = create_pattern(&c1, &c2, &RuleSet::default()).unwrap().pattern;
    assert!(!preorder_has_loop(&p.original));
    assert_eq!(names(&p.original_annotations(), AnnotationKind::WildcardStmt).len(), 1);
}

fn preorder_has_loop(n: &ares::AstNode) -> bool {
    matches!(n.kind, Kind::For | Kind::While) || n.children.iter().any(preorder_has_loop)
}

fn loop_rewrite_third() -> ChangeExample {
    let g = common::group("loop_rewrite");
    let o = g[0].original.source_text.clone();
    let m = g[0].modified.source_text.replace("log(j)", "trace(j)");
    ex("c3", &o, &m)
}

#[test]
fn refinement_adds_a_choice_case() {
    let g = common::group("loop_rewrite");
    let p = create_pattern(&g[0], &g[1], &RuleSet::default()).unwrap().pattern;
    let r = refine_pattern(&p, &loop_rewrite_third(), &RuleSet::default()).unwrap().pattern;
    let choices = r.choices();
    assert_eq!(choices.len(), 1);
    assert_eq!(choices[0].cases.len(), 3);
    assert_eq!(r.match_identifiers, ["k"]);
}

#[test]
fn learn_orders_and_refines() {
    let mut g = common::group("loop_rewrite");
    g.push(loop_rewrite_third());
    let l = learn(&g, 3, &RuleSet::default()).unwrap();
    assert_eq!(l.order.len() + l.skipped.len(), 3);
    assert!(l.pattern.validate().is_ok());
}
