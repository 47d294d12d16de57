//! Backtracking search for code locations that match the original part of
//! a pattern.
//!
//! Both sides are flattened to preorder node lists. Pattern statements are
//! matched node by node; wildcards consume code nodes within their scope and
//! leave reset points at every valid end position so that the search can
//! resume from there when a later node fails.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ast::{AstNode, Kind, MethodBody, NodeId, ParentIndex, Span};
use crate::pattern::{anchor_of, find_anchor, Pattern};

/// What a code node was matched with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternRef {
    Node(NodeId),
    Wildcard(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub start: NodeId,
    /// (code node, pattern node or wildcard name) in match order.
    pub matches: Vec<(NodeId, PatternRef)>,
    /// Placeholder identifier to code lexeme.
    pub bindings: BTreeMap<String, String>,
    /// Pattern constant to code constant (first occurrence wins).
    pub constants: BTreeMap<String, String>,
}

impl MatchResult {
    /// Code node matched with a pattern node.
    pub fn code_for(&self, pattern_node: NodeId) -> Option<NodeId> {
        self.matches.iter().find_map(|(c, p)| match p {
            PatternRef::Node(n) if *n == pattern_node => Some(*c),
            _ => None,
        })
    }

    /// Code nodes consumed by a wildcard, in preorder.
    pub fn wildcard_nodes(&self, name: &str) -> Vec<NodeId> {
        self.matches
            .iter()
            .filter_map(|(c, p)| match p {
                PatternRef::Wildcard(w) if w == name => Some(*c),
                _ => None,
            })
            .collect()
    }

    pub fn code_nodes(&self) -> HashSet<NodeId> {
        self.matches.iter().map(|m| m.0).collect()
    }
}

/// One entry of the pattern node list.
#[derive(Debug, Clone)]
enum Entry<'p> {
    Node {
        node: &'p AstNode,
        parent: NodeId,
    },
    StmtWildcard {
        name: String,
        parent: NodeId,
    },
    /// Stands for the anchored expression, which is child `index` of
    /// `parent`; the expression's subtree is not listed.
    ExprWildcard {
        name: String,
        parent: &'p AstNode,
        index: usize,
    },
}

fn pattern_nodes(root: &AstNode) -> Vec<Entry<'_>> {
    let mut out = Vec::new();
    let mut pending: HashMap<NodeId, String> = HashMap::new();
    fn go<'p>(n: &'p AstNode, out: &mut Vec<Entry<'p>>, pending: &mut HashMap<NodeId, String>) {
        let mut i = 0;
        while i < n.children.len() {
            let c = &n.children[i];
            match c.kind {
                Kind::WildcardStmt => out.push(Entry::StmtWildcard {
                    name: c.label.clone(),
                    parent: n.id,
                }),
                Kind::WildcardExpr => {
                    if let Some((lexeme, occ)) = anchor_of(c) {
                        let next = n.children[i + 1..].iter().find(|s| s.kind != Kind::WildcardExpr);
                        if let Some(a) = next.and_then(|s| find_anchor(s, &lexeme, occ)) {
                            pending.insert(a.id, c.label.clone());
                        }
                    }
                }
                _ => {
                    if let Some(name) = pending.remove(&c.id) {
                        out.push(Entry::ExprWildcard {
                            name,
                            parent: n,
                            index: i,
                        });
                    } else {
                        out.push(Entry::Node { node: c, parent: n.id });
                        go(c, out, pending);
                    }
                }
            }
            i += 1;
        }
    }
    go(root, &mut out, &mut pending);
    out
}

/// Kind of the first concrete pattern node.
fn first_kind(p: &Pattern) -> Option<Kind> {
    pattern_nodes(&p.original).iter().find_map(|e| match e {
        Entry::Node { node, .. } => Some(node.kind),
        Entry::ExprWildcard { .. } => None,
        Entry::StmtWildcard { .. } => None,
    })
}

/// All nodes of the body with the kind of the pattern's first node, in
/// preorder.
pub fn find_start_nodes<'a>(body: &'a MethodBody, p: &Pattern) -> Vec<&'a AstNode> {
    let Some(kind) = first_kind(p) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    body.root.walk(&mut |n| {
        if n.kind == kind {
            out.push(n);
        }
    });
    out
}

#[derive(Clone, Default)]
struct State {
    matches: Vec<(NodeId, PatternRef)>,
    p2c: HashMap<NodeId, NodeId>,
    c2w: HashMap<NodeId, String>,
    bindings: BTreeMap<String, String>,
    visited: Vec<String>,
}

struct Reset {
    pos_cl: usize,
    pos_p: usize,
    state: State,
}

struct Code<'a> {
    nodes: Vec<&'a AstNode>,
    index: ParentIndex,
    last_desc: HashMap<NodeId, NodeId>,
    by_id: HashMap<NodeId, &'a AstNode>,
}

fn last_descendant(n: &AstNode) -> NodeId {
    match n.children.last() {
        Some(c) => last_descendant(c),
        None => n.id,
    }
}

impl<'a> Code<'a> {
    fn new(body: &'a AstNode, start: NodeId) -> Option<Self> {
        let index = ParentIndex::build(body);
        let (parent, pos) = index.position(start)?;
        let mut by_id = HashMap::new();
        body.walk(&mut |n| {
            by_id.insert(n.id, n);
        });
        let parent_node: &AstNode = by_id[&parent];
        let mut nodes = Vec::new();
        for s in &parent_node.children[pos..] {
            s.walk(&mut |n| nodes.push(n));
        }
        let mut last_desc = HashMap::new();
        body.walk(&mut |n| {
            last_desc.insert(n.id, last_descendant(n));
        });
        Some(Code {
            nodes,
            index,
            last_desc,
            by_id,
        })
    }

    fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.index.parent(id)
    }

    /// Ancestor of `id` (or `id` itself) whose parent is `scope`.
    fn top_below(&self, scope: NodeId, id: NodeId) -> Option<NodeId> {
        let mut cur = id;
        loop {
            let p = self.parent(cur)?;
            if p == scope {
                return Some(cur);
            }
            cur = p;
        }
    }

    fn is_last_of(&self, top: NodeId, n: NodeId) -> bool {
        self.last_desc.get(&top) == Some(&n)
    }
}

struct Search<'a, 'p> {
    code: Code<'a>,
    entries: Vec<Entry<'p>>,
    pattern_root: NodeId,
    start_parent: NodeId,
    placeholders: HashSet<&'p str>,
}

impl<'a, 'p> Search<'a, 'p> {
    /// Code node that corresponds to pattern node `p`.
    fn counterpart(&self, st: &State, p: NodeId) -> Option<NodeId> {
        if p == self.pattern_root {
            Some(self.start_parent)
        } else {
            st.p2c.get(&p).copied()
        }
    }

    fn is_match(&self, st: &mut State, ncl: &AstNode, np: &AstNode, parent: NodeId) -> bool {
        if ncl.kind != np.kind {
            return false;
        }
        if self.counterpart(st, parent) != self.code.parent(ncl.id) {
            return false;
        }
        match np.kind {
            Kind::Identifier => {
                if self.placeholders.contains(np.label.as_str()) {
                    match st.bindings.get(&np.label) {
                        Some(b) => b == &ncl.label,
                        None => {
                            st.bindings.insert(np.label.clone(), ncl.label.clone());
                            true
                        }
                    }
                } else {
                    np.label == ncl.label
                }
            }
            Kind::BoolLiteral => np.label == ncl.label,
            k if k.is_literal() => true,
            k if k.label_is_operator() || k == Kind::Type => np.label == ncl.label,
            _ => true,
        }
    }

    /// Whether wildcard entry `e` may consume `ncl`, and whether `ncl` is a
    /// valid end point for it.
    fn allowed(&self, st: &State, e: &Entry, ncl: &AstNode) -> Option<(bool, bool)> {
        let (name, top) = match e {
            Entry::StmtWildcard { name, parent } => {
                let scope = self.counterpart(st, *parent)?;
                (name, self.code.top_below(scope, ncl.id)?)
            }
            Entry::ExprWildcard {
                name,
                parent,
                index,
                ..
            } => {
                let cparent = self.counterpart(st, parent.id)?;
                if parent.kind == Kind::ArgList {
                    (name, self.code.top_below(cparent, ncl.id)?)
                } else {
                    let slot = self.code.by_id[&cparent].children.get(*index)?.id;
                    if slot != ncl.id && self.code.top_below(slot, ncl.id).is_none() {
                        return None;
                    }
                    let ok = slot == ncl.id || st.c2w.get(&slot) == Some(name);
                    return Some((ok, self.code.is_last_of(slot, ncl.id)));
                }
            }
            Entry::Node { .. } => return None,
        };
        let ok = top == ncl.id || st.c2w.get(&top) == Some(name);
        Some((ok, self.code.is_last_of(top, ncl.id)))
    }

    /// Every child of a matched code node must itself be matched.
    fn covered(&self, st: &State) -> bool {
        let matched: HashSet<NodeId> = st.matches.iter().map(|m| m.0).collect();
        st.matches.iter().all(|(c, p)| {
            !matches!(p, PatternRef::Node(_))
                || self.code.by_id[c].children.iter().all(|k| matched.contains(&k.id))
        })
    }

    fn run(&self) -> Option<State> {
        let ncl_len = self.code.nodes.len();
        let np_len = self.entries.len();
        let (mut pos_cl, mut pos_p) = (0usize, 0usize);
        let mut st = State::default();
        let mut resets: Vec<Reset> = Vec::new();
        loop {
            while pos_cl < ncl_len && pos_p < np_len {
                let ncl = self.code.nodes[pos_cl];
                let e = &self.entries[pos_p];
                let advanced = match e {
                    Entry::Node { node, parent } => {
                        let mut trial = st.clone();
                        if self.is_match(&mut trial, ncl, node, *parent) {
                            trial.matches.push((ncl.id, PatternRef::Node(node.id)));
                            trial.p2c.insert(node.id, ncl.id);
                            st = trial;
                            pos_cl += 1;
                            pos_p += 1;
                            true
                        } else {
                            false
                        }
                    }
                    Entry::StmtWildcard { name, .. } | Entry::ExprWildcard { name, .. } => {
                        if !st.visited.contains(name) {
                            resets.push(Reset {
                                pos_cl,
                                pos_p: pos_p + 1,
                                state: st.clone(),
                            });
                            st.visited.push(name.clone());
                        }
                        match self.allowed(&st, e, ncl) {
                            Some((true, can_end)) => {
                                st.matches.push((ncl.id, PatternRef::Wildcard(name.clone())));
                                st.c2w.insert(ncl.id, name.clone());
                                if can_end {
                                    resets.push(Reset {
                                        pos_cl: pos_cl + 1,
                                        pos_p: pos_p + 1,
                                        state: st.clone(),
                                    });
                                }
                                pos_cl += 1;
                                true
                            }
                            _ => false,
                        }
                    }
                };
                if advanced {
                    continue;
                }
                let r = resets.pop()?;
                pos_cl = r.pos_cl;
                pos_p = r.pos_p;
                st = r.state;
            }
            if pos_p == np_len && self.covered(&st) {
                return Some(st);
            }
            let r = resets.pop()?;
            pos_cl = r.pos_cl;
            pos_p = r.pos_p;
            st = r.state;
        }
    }
}

/// Searches for a match of the pattern's original part beginning at
/// `start`. Returns `None` when the location does not match.
pub fn search(start: &AstNode, body: &MethodBody, p: &Pattern) -> Option<MatchResult> {
    let code = Code::new(&body.root, start.id)?;
    let start_parent = code.parent(start.id)?;
    if code.by_id[&start_parent].kind != Kind::Block {
        return None;
    }
    let entries = pattern_nodes(&p.original);
    if entries.is_empty() {
        return None;
    }
    let s = Search {
        code,
        entries,
        pattern_root: p.original.id,
        start_parent,
        placeholders: p.match_identifiers.iter().map(String::as_str).collect(),
    };
    let st = s.run()?;
    let mut constants = BTreeMap::new();
    let by_pid: HashMap<NodeId, &AstNode> = {
        let mut m = HashMap::new();
        p.original.walk(&mut |n| {
            m.insert(n.id, n);
        });
        m
    };
    for (c, r) in &st.matches {
        if let PatternRef::Node(pid) = r {
            let pn = by_pid[pid];
            if pn.kind.is_literal() && pn.kind != Kind::BoolLiteral {
                constants
                    .entry(pn.label.clone())
                    .or_insert_with(|| s.code.by_id[c].label.clone());
            }
        }
    }
    Some(MatchResult {
        start: start.id,
        matches: st.matches,
        bindings: st.bindings,
        constants,
    })
}

/// A match inside one file of a code base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatedMatch {
    pub file: String,
    pub method_span: Option<Span>,
    pub result: MatchResult,
}

/// Every match in every method. Within one method, overlapping matches are
/// reduced to the one with the earliest start node.
pub fn search_body(p: &Pattern, body: &MethodBody) -> Vec<MatchResult> {
    let starts = find_start_nodes(body, p);
    let found: Vec<Option<MatchResult>> = starts.par_iter().map(|s| search(s, body, p)).collect();
    let mut kept: Vec<MatchResult> = Vec::new();
    let mut used: HashSet<NodeId> = HashSet::new();
    for r in found.into_iter().flatten() {
        let nodes = r.code_nodes();
        if nodes.iter().any(|n| used.contains(n)) {
            continue;
        }
        used.extend(nodes);
        kept.push(r);
    }
    kept
}

pub fn search_codebase(p: &Pattern, files: &[(String, MethodBody)]) -> Vec<LocatedMatch> {
    let per_file: Vec<Vec<LocatedMatch>> = files
        .par_iter()
        .map(|(name, body)| {
            search_body(p, body)
                .into_iter()
                .map(|result| LocatedMatch {
                    file: name.clone(),
                    method_span: body.root.span,
                    result,
                })
                .collect()
        })
        .collect();
    per_file.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::pattern::read_pattern;

    fn pat(orig: &str, ids: &str) -> Pattern {
        let header = if ids.is_empty() {
            "//# match {".to_string()
        } else {
            format!("//# match (original: {ids}) {{")
        };
        read_pattern(&format!("{header}\n{orig}\n//# }} modified {{\n//# }}\n")).unwrap()
    }

    fn matches_at_first(p: &Pattern, code: &str) -> Option<MatchResult> {
        let body = parse(code).unwrap();
        let starts = find_start_nodes(&body, p);
        starts.iter().find_map(|s| search(s, &body, p))
    }

    #[test]
    fn literal_statements() {
        let p = pat("a(); b();", "");
        assert!(matches_at_first(&p, "{ x(); a(); b(); y(); }").is_some());
        assert!(matches_at_first(&p, "{ a(); x(); b(); }").is_none());
    }

    #[test]
    fn stmt_wildcard_backtracks() {
        let p = pat("a();\n//# wildcard stmt A0;\nb(); c();", "");
        let r = matches_at_first(&p, "{ a(); b(); x(); b(); c(); }").unwrap();
        assert_eq!(r.wildcard_nodes("A0").len(), 6);
        assert!(matches_at_first(&p, "{ a(); c(); }").is_none());
        assert!(matches_at_first(&p, "{ a(); b(); c(); }").is_some());
    }

    #[test]
    fn wildcard_does_not_leak_into_partial_statements() {
        let p = pat("f(a);\n//# wildcard stmt A0;\ng();", "");
        assert!(matches_at_first(&p, "{ f(a, b); g(); }").is_none());
    }

    #[test]
    fn placeholders_bind_consistently() {
        let p = pat("int k = 0; use(k);", "k");
        let r = matches_at_first(&p, "{ int c = 5; use(c); }").unwrap();
        assert_eq!(r.bindings["k"], "c");
        assert_eq!(r.constants["0"], "5");
        assert!(matches_at_first(&p, "{ int c = 5; use(d); }").is_none());
    }

    #[test]
    fn booleans_are_strict() {
        let p = pat("f(true);", "");
        assert!(matches_at_first(&p, "{ f(true); }").is_some());
        assert!(matches_at_first(&p, "{ f(false); }").is_none());
        let q = pat("f(42);", "");
        assert!(matches_at_first(&q, "{ f(99); }").is_some());
    }

    #[test]
    fn expr_wildcard_in_arguments() {
        let p = pat("//# wildcard expr A1 (verbose, 1);\ninit(verbose);\nrun();", "");
        assert!(matches_at_first(&p, "{ init(load(path)); run(); }").is_some());
        assert!(matches_at_first(&p, "{ init(); run(); }").is_some());
        assert!(matches_at_first(&p, "{ init(a, b); run(); }").is_some());
        assert!(matches_at_first(&p, "{ start(a); run(); }").is_none());
    }

    #[test]
    fn expr_wildcard_elsewhere() {
        let p = pat("//# wildcard expr A1 (x, 1);\ny = x;\nrun();", "");
        assert!(matches_at_first(&p, "{ y = a + b; run(); }").is_some());
        assert!(matches_at_first(&p, "{ z = a; run(); }").is_none());
    }

    #[test]
    fn nested_wildcards() {
        let p = pat(
            "int k = 0;\nwhile (k < 42) {\n    upd(k);\n    //# wildcard stmt A2;\n}\n//# wildcard stmt A3;\nclose();",
            "k",
        );
        let r = matches_at_first(&p, "{ int c = 0; while (c < 99) { upd(c); c++; } log(c); close(); }").unwrap();
        assert_eq!(r.bindings["k"], "c");
        assert_eq!(r.wildcard_nodes("A3").len(), 4);
        assert!(matches_at_first(&p, "{ int c = 0; while (c < 99) { upd(c); } close(); }").is_some());
    }

    #[test]
    fn start_nodes_in_preorder() {
        let p = pat("init(verbose);", "");
        let body = parse("{ connect(); init(load(path)); foo.close(); }").unwrap();
        assert_eq!(find_start_nodes(&body, &p).len(), 4);
        let q = pat("return x;", "");
        assert!(find_start_nodes(&body, &q).is_empty());
    }

    #[test]
    fn codebase_dedups_overlaps() {
        let p = pat("a();\n//# wildcard stmt A0;\na();", "");
        let body = parse("{ a(); a(); a(); }").unwrap();
        let found = search_codebase(&p, &[("f".into(), body)]);
        assert_eq!(found.len(), 1);
        assert!(search_codebase(&p, &[]).is_empty());
    }
}
