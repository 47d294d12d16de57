//! Pattern creation: generalizes two changes into an annotated pattern and
//! refines a pattern with further changes.

mod adjust;
mod build;
mod isolate;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

pub use adjust::{adjust_edit_script, insert_match_identifiers, MatchIdentifiers, RuleSet};
pub use isolate::{change_root, isolate_change, Isolation, IsolationStep};

use adjust::Tree;
use build::{finalize_markers, Builder, Mode, WildcardInfo, CHOICE_HOLE};
use crate::ast::{AstNode, Kind, NodeId};
use crate::diff::{diff, EditOp, EditScript};
use crate::error::CreationError;
use crate::ordering::{build_distance_matrix, next_closest, select_initial_pair, ChangeExample};
use crate::pattern::{with_holes, Pattern};

/// How a pattern came about, for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreationTrace {
    pub isolation: Isolation,
    /// Adjusted script between the two original regions.
    pub adjusted_original: Vec<EditOp>,
    /// Adjusted script between the two modified regions.
    pub adjusted_modified: Vec<EditOp>,
    /// Operations that produced each wildcard: deletes of side-1 nodes
    /// and inserts of side-2 nodes.
    pub origins: BTreeMap<String, Vec<EditOp>>,
    /// Wildcards dropped from the boundaries of the original part.
    pub removed: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Creation {
    pub pattern: Pattern,
    pub trace: CreationTrace,
}

struct SideInput<'a> {
    o: &'a AstNode,
    m: &'a AstNode,
    d: &'a EditScript,
    ro: NodeId,
    rm: NodeId,
}

struct Refining<'a> {
    old: &'a Pattern,
    choices: HashMap<String, Vec<Vec<AstNode>>>,
    n_old: usize,
}

/// Generalizes two changes into a pattern.
pub fn create_pattern(c1: &ChangeExample, c2: &ChangeExample, rules: &RuleSet) -> Result<Creation, CreationError> {
    let (o1, m1) = (&c1.original.root, &c1.modified.root);
    let (o2, m2) = (&c2.original.root, &c2.modified.root);
    let d1 = diff(o1, m1);
    let d2 = diff(o2, m2);
    let iso = isolate_change((o1, m1, &d1), (o2, m2, &d2)).ok_or(CreationError::NoCommonRegion)?;
    let s1 = SideInput { o: o1, m: m1, d: &d1, ro: iso.o1, rm: iso.m1 };
    let s2 = SideInput { o: o2, m: m2, d: &d2, ro: iso.o2, rm: iso.m2 };
    match generalize(&s1, &s2, rules, iso.clone(), None) {
        Err(CreationError::EmptyPattern) => {
            // Single statements that do not generalize: retry on the
            // enclosing blocks.
            let (t1, t2) = (Tree::new(o1), Tree::new(o2));
            let up = |t: &Tree, d: &EditScript, id: NodeId| -> Option<NodeId> {
                let p = t.parent(id)?;
                (t.get(p).kind == Kind::Block && d.mapping.has_source(p)).then_some(p)
            };
            let (Some(p1), Some(p2)) = (up(&t1, &d1, iso.o1), up(&t2, &d2, iso.o2)) else {
                return Err(CreationError::EmptyPattern);
            };
            let iso = Isolation {
                o1: p1,
                m1: d1.mapping.target_of(p1).unwrap(),
                o2: p2,
                m2: d2.mapping.target_of(p2).unwrap(),
                step: iso.step,
            };
            let s1 = SideInput { ro: iso.o1, rm: iso.m1, ..s1 };
            let s2 = SideInput { ro: iso.o2, rm: iso.m2, ..s2 };
            generalize(&s1, &s2, rules, iso, None)
        }
        other => other,
    }
}

/// Refines a pattern with one more change. Existing cases of choices are
/// kept and the new example's code is added as the last case.
pub fn refine_pattern(p: &Pattern, c: &ChangeExample, rules: &RuleSet) -> Result<Creation, CreationError> {
    let cases = p.choices().iter().map(|a| a.cases.len()).max().unwrap_or(0);
    refine_pattern_with(p, c, rules, cases.max(2))
}

/// As [`refine_pattern`], stating how many examples the pattern already
/// represents.
pub fn refine_pattern_with(
    p: &Pattern,
    c: &ChangeExample,
    rules: &RuleSet,
    represented: usize,
) -> Result<Creation, CreationError> {
    let (po, pm, choices) = pattern_as_change(p);
    let (o, m) = (&c.original.root, &c.modified.root);
    let d1 = diff(o, m);
    let d2 = diff(&po, &pm);
    let r = change_root(o, m, &d1);
    let t = Tree::new(o);
    let doo = diff(o, &po);
    let top: BTreeSet<NodeId> = po.children.iter().map(|c| c.id).collect();
    let mut region = None;
    let mut cur = Some(r);
    while let Some(id) = cur {
        let n = t.get(id);
        let linked = n.children.iter().any(|c| doo.mapping.target_of(c.id).is_some_and(|x| top.contains(&x)));
        if n.kind == Kind::Block && linked && d1.mapping.has_source(id) {
            region = Some(id);
            break;
        }
        cur = t.parent(id);
    }
    let ro = region.ok_or(CreationError::NoCommonRegion)?;
    let iso = Isolation {
        o1: ro,
        m1: d1.mapping.target_of(ro).unwrap(),
        o2: po.id,
        m2: pm.id,
        step: IsolationStep::Direct,
    };
    let s1 = SideInput { o, m, d: &d1, ro: iso.o1, rm: iso.m1 };
    let s2 = SideInput { o: &po, m: &pm, d: &d2, ro: iso.o2, rm: iso.m2 };
    let refining = Refining { old: p, choices, n_old: represented };
    generalize(&s1, &s2, rules, iso, Some(refining))
}

/// The pattern as a plain change: annotations become holes, choices
/// become holes labelled `#choice<i>` whose cases are returned.
fn pattern_as_change(p: &Pattern) -> (AstNode, AstNode, HashMap<String, Vec<Vec<AstNode>>>) {
    let mut modified = p.modified.clone();
    let mut table = HashMap::new();
    fn strip(n: &mut AstNode, table: &mut HashMap<String, Vec<Vec<AstNode>>>) {
        for c in n.children.iter_mut() {
            if c.kind == Kind::Choice {
                let label = format!("{CHOICE_HOLE}{}", table.len());
                let cases = c.children.iter().map(|case| case.children.clone()).collect();
                table.insert(label.clone(), cases);
                *c = AstNode::leaf(Kind::Hole, label);
            } else {
                strip(c, table);
            }
        }
    }
    strip(&mut modified, &mut table);
    (with_holes(&p.original), with_holes(&modified), table)
}

fn find(root: &AstNode, id: NodeId) -> &AstNode {
    root.find(id).expect("region root belongs to its tree")
}

fn region_list(n: &AstNode) -> &[AstNode] {
    if n.kind == Kind::Block {
        &n.children
    } else {
        std::slice::from_ref(n)
    }
}

fn generalize(
    s1: &SideInput,
    s2: &SideInput,
    rules: &RuleSet,
    isolation: Isolation,
    refining: Option<Refining>,
) -> Result<Creation, CreationError> {
    let (ro1, rm1) = (find(s1.o, s1.ro), find(s1.m, s1.rm));
    let (ro2, rm2) = (find(s2.o, s2.ro), find(s2.m, s2.rm));
    let ao = adjust_edit_script(&diff(ro1, ro2), ro1, ro2, rules);
    let am = adjust_edit_script(&diff(rm1, rm2), rm1, rm2, rules);
    let ids = insert_match_identifiers(&ao, ro1, ro2);
    let adjusted_original = ao.ops.clone();
    let adjusted_modified = am.ops.clone();
    let mut b = Builder::new(*rules, ids.renames.clone(), s2.o, s2.m, s1.d, s2.d, ao, am);
    let mut old_names = Vec::new();
    if let Some(r) = &refining {
        b.old_choices = r.choices.clone();
        b.n_old = r.n_old;
        b.refining = true;
        old_names = r.old.wildcard_names();
    }
    let mut po = b.align(region_list(ro1), region_list(ro2), crate::ast::fresh_id(), Mode::Original);
    let mut pm = b.align(region_list(rm1), region_list(rm2), crate::ast::fresh_id(), Mode::Modified);
    if let Some(f) = b.failure.take() {
        return Err(CreationError::Unrepresentable(f));
    }

    // Names in order of appearance in the original part.
    let names = assign_names(&po, &b.wildcards, &old_names);
    rename(&mut po, &names);
    rename(&mut pm, &names);
    let info: HashMap<String, WildcardInfo> =
        b.wildcards.iter().filter_map(|w| names.get(&w.temp).map(|n| (n.clone(), w.clone()))).collect();

    // Boundary rule.
    let mut removed = Vec::new();
    while po.children.first().is_some_and(|s| s.kind == Kind::WildcardStmt) {
        let w = po.children.remove(0);
        if pm.children.first().is_some_and(|s| s.kind == Kind::Use && s.label == w.label) {
            pm.children.remove(0);
        }
        removed.push(w.label);
    }
    while po.children.last().is_some_and(|s| s.kind == Kind::WildcardStmt) {
        let w = po.children.pop().unwrap();
        if pm.children.last().is_some_and(|s| s.kind == Kind::Use && s.label == w.label) {
            pm.children.pop();
        }
        removed.push(w.label);
    }
    // Remaining uses of removed wildcards lose their name and become
    // choices over each example's code.
    for name in &removed {
        let w = &info[name];
        let mut failed = false;
        replace_uses(&mut pm, name, &mut |_| match b.choice(&w.g1, &w.g2) {
            Some(c) => c,
            None => {
                failed = true;
                AstNode::leaf(Kind::Empty, "")
            }
        });
        if failed {
            return Err(CreationError::Unrepresentable("a boundary wildcard is still used".into()));
        }
    }

    let pending: HashMap<NodeId, NodeId> = b.pending.iter().copied().collect();
    finalize_markers(&mut po, &pending);
    finalize_markers(&mut pm, &pending);
    if has_hole(&po) || has_hole(&pm) {
        return Err(CreationError::Unrepresentable("an annotation of the refined pattern was split".into()));
    }
    if !po.children.iter().any(|s| !s.kind.is_annotation()) {
        return Err(CreationError::EmptyPattern);
    }

    let mut placeholders: BTreeSet<String> = ids.renames.keys().cloned().collect();
    if let Some(r) = &refining {
        placeholders.extend(r.old.match_identifiers.iter().cloned());
    }
    let match_identifiers = identifiers_in_order(&po, &placeholders);
    let pattern = Pattern::new(po, pm, match_identifiers);
    pattern.validate()?;

    let o2 = Tree::new(s2.o);
    let mut origins = BTreeMap::new();
    for w in &b.wildcards {
        let Some(name) = names.get(&w.temp) else { continue };
        let mut ops: Vec<EditOp> = w.g1.iter().map(|n| EditOp::Delete { node: n.id }).collect();
        for n in &w.g2 {
            let (parent, index) = match o2.parents.position(n.id) {
                Some((p, i)) => (Some(p), i),
                None => (None, 0),
            };
            let after = parent.and_then(|p| index.checked_sub(1).map(|i| o2.get(p).children[i].id));
            ops.push(EditOp::Insert { node: n.id, kind: n.kind, label: n.label.clone(), parent, after, index });
        }
        origins.insert(name.clone(), ops);
    }
    Ok(Creation {
        pattern,
        trace: CreationTrace { isolation, adjusted_original, adjusted_modified, origins, removed },
    })
}

fn has_hole(n: &AstNode) -> bool {
    let mut found = false;
    n.walk(&mut |x| found |= x.kind == Kind::Hole);
    found
}

fn assign_names(po: &AstNode, wildcards: &[WildcardInfo], old: &[String]) -> HashMap<String, String> {
    let by_temp: HashMap<&str, &WildcardInfo> = wildcards.iter().map(|w| (w.temp.as_str(), w)).collect();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut order = Vec::new();
    po.walk(&mut |n| {
        if matches!(n.kind, Kind::WildcardStmt | Kind::WildcardExpr) && by_temp.contains_key(n.label.as_str()) {
            order.push(n.label.clone());
        }
    });
    let mut out = HashMap::new();
    for t in &order {
        if let Some(r) = &by_temp[t.as_str()].reuse {
            if used.insert(r.clone()) {
                out.insert(t.clone(), r.clone());
            }
        }
    }
    let mut next = old
        .iter()
        .filter_map(|n| n.strip_prefix('A').and_then(|d| d.parse::<usize>().ok()))
        .map(|n| n + 1)
        .max()
        .unwrap_or(0);
    for t in &order {
        if out.contains_key(t) {
            continue;
        }
        while used.contains(&format!("A{next}")) {
            next += 1;
        }
        let name = format!("A{next}");
        used.insert(name.clone());
        out.insert(t.clone(), name);
        next += 1;
    }
    out
}

fn rename(n: &mut AstNode, names: &HashMap<String, String>) {
    n.walk_mut(&mut |x| {
        if matches!(x.kind, Kind::WildcardStmt | Kind::WildcardExpr | Kind::Use | Kind::UseExpr) {
            if let Some(name) = names.get(&x.label) {
                x.label = name.clone();
            }
        }
    });
}

fn replace_uses(n: &mut AstNode, name: &str, f: &mut impl FnMut(&AstNode) -> AstNode) {
    for c in n.children.iter_mut() {
        if c.kind == Kind::Use && c.label == name {
            *c = f(c);
        } else {
            replace_uses(c, name, f);
        }
    }
}

fn identifiers_in_order(po: &AstNode, placeholders: &BTreeSet<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    fn go(n: &AstNode, ph: &BTreeSet<String>, out: &mut Vec<String>) {
        if matches!(n.kind, Kind::WildcardExpr | Kind::UseExpr) {
            return;
        }
        if n.kind == Kind::Identifier && ph.contains(&n.label) && !out.contains(&n.label) {
            out.push(n.label.clone());
        }
        for c in &n.children {
            go(c, ph, out);
        }
    }
    go(po, placeholders, &mut out);
    out
}

/// Outcome of learning from a set of examples.
#[derive(Debug, Clone)]
pub struct Learned {
    pub pattern: Pattern,
    /// Indices of the examples in the order they were used.
    pub order: Vec<usize>,
    /// Examples whose refinement was aborted.
    pub skipped: Vec<usize>,
    pub trace: CreationTrace,
}

/// Orders the examples, creates a pattern from the closest pair and
/// refines it with the remaining examples, closest first.
pub fn learn(examples: &[ChangeExample], max_examples: usize, rules: &RuleSet) -> Result<Learned, LearnError> {
    let matrix = build_distance_matrix(examples)?;
    let (i, j) = select_initial_pair(&matrix)?;
    let first = create_pattern(&examples[i], &examples[j], rules)?;
    let mut pattern = first.pattern;
    let mut trace = first.trace;
    let mut order = vec![i, j];
    let mut skipped = Vec::new();
    let mut remaining: Vec<usize> = (0..examples.len()).filter(|k| *k != i && *k != j).collect();
    let mut represented = 2;
    while order.len() + skipped.len() < max_examples.max(2) {
        let Some(k) = next_closest(&pattern, &remaining, examples) else { break };
        remaining.retain(|x| *x != k);
        match refine_pattern_with(&pattern, &examples[k], rules, represented) {
            Ok(c) => {
                pattern = c.pattern;
                trace = c.trace;
                order.push(k);
                represented += 1;
            }
            Err(_) => skipped.push(k),
        }
    }
    Ok(Learned { pattern, order, skipped, trace })
}

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error(transparent)]
    Ordering(#[from] crate::error::OrderingError),
    #[error(transparent)]
    Creation(#[from] CreationError),
}
