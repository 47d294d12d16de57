//! Move-aware tree differencing.
//!
//! Matching runs in three phases: identical subtrees top-down, containers
//! by shared matched descendants, then child-list recovery below every
//! mapped pair. The edit script is derived from the final mapping.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ast::{AstNode, Kind, NodeId, ParentIndex};
use crate::error::ScriptError;

/// Container similarity needed to pair two unmatched inner nodes.
pub const CONTAINER_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    /// Removes a source node. Children still present at that point are
    /// moved elsewhere later in the script.
    Delete { node: NodeId },
    /// Adds a single target node (no children). `parent` and `after` are
    /// target-tree ids; `after` is the previous sibling in the target.
    Insert {
        node: NodeId,
        kind: Kind,
        label: String,
        parent: Option<NodeId>,
        after: Option<NodeId>,
        index: usize,
    },
    /// Relocates a complete source subtree.
    Move {
        node: NodeId,
        parent: NodeId,
        after: Option<NodeId>,
        index: usize,
    },
    Update {
        node: NodeId,
        old_label: String,
        new_label: String,
    },
}

impl EditOp {
    pub fn node(&self) -> NodeId {
        match self {
            EditOp::Delete { node }
            | EditOp::Insert { node, .. }
            | EditOp::Move { node, .. }
            | EditOp::Update { node, .. } => *node,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EditOp::Delete { .. } => "delete",
            EditOp::Insert { .. } => "insert",
            EditOp::Move { .. } => "move",
            EditOp::Update { .. } => "update",
        }
    }
}

/// Bijective partial mapping between source and target node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Mapping {
    pairs: Vec<(NodeId, NodeId)>,
    s2t: HashMap<NodeId, NodeId>,
    t2s: HashMap<NodeId, NodeId>,
}

impl Mapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: NodeId, t: NodeId) {
        debug_assert!(!self.s2t.contains_key(&s) && !self.t2s.contains_key(&t));
        self.pairs.push((s, t));
        self.s2t.insert(s, t);
        self.t2s.insert(t, s);
    }

    pub fn target_of(&self, s: NodeId) -> Option<NodeId> {
        self.s2t.get(&s).copied()
    }

    pub fn source_of(&self, t: NodeId) -> Option<NodeId> {
        self.t2s.get(&t).copied()
    }

    pub fn has_source(&self, s: NodeId) -> bool {
        self.s2t.contains_key(&s)
    }

    pub fn has_target(&self, t: NodeId) -> bool {
        self.t2s.contains_key(&t)
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
    pub mapping: Mapping,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Flattened view of one tree, indexed by preorder position.
struct Flat<'a> {
    nodes: Vec<&'a AstNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    size: Vec<usize>,
    hash: Vec<u64>,
    has_hole: Vec<bool>,
    pos: HashMap<NodeId, usize>,
}

impl<'a> Flat<'a> {
    fn new(root: &'a AstNode) -> Self {
        let mut f = Flat {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            size: Vec::new(),
            hash: Vec::new(),
            has_hole: Vec::new(),
            pos: HashMap::new(),
        };
        f.add(root, None);
        f
    }

    fn add(&mut self, n: &'a AstNode, parent: Option<usize>) -> usize {
        let i = self.nodes.len();
        self.nodes.push(n);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.size.push(1);
        self.hash.push(0);
        self.has_hole.push(n.kind == Kind::Hole);
        self.pos.insert(n.id, i);
        let mut kids = Vec::with_capacity(n.children.len());
        for c in &n.children {
            let ci = self.add(c, Some(i));
            kids.push(ci);
        }
        self.size[i] = 1 + kids.iter().map(|&c| self.size[c]).sum::<usize>();
        self.has_hole[i] = self.has_hole[i] || kids.iter().any(|&c| self.has_hole[c]);
        self.hash[i] = n.structural_hash();
        self.children[i] = kids;
        i
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn is_descendant(&self, d: usize, anc: usize) -> bool {
        d > anc && d < anc + self.size[anc]
    }

    fn index_in_parent(&self, i: usize) -> usize {
        match self.parent[i] {
            Some(p) => self.children[p].iter().position(|&c| c == i).unwrap_or(0),
            None => 0,
        }
    }

    fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        fn go(f: &Flat, i: usize, out: &mut Vec<usize>) {
            for &c in &f.children[i] {
                go(f, c, out);
            }
            out.push(i);
        }
        if self.len() > 0 {
            go(self, 0, &mut out);
        }
        out
    }
}

/// Name of the invoked method of a call node.
pub fn method_name(call: &AstNode) -> &str {
    match call.children.first() {
        Some(n) if n.kind == Kind::Identifier => &n.label,
        Some(n) if n.kind == Kind::FieldAccess => n.children.get(1).map(|c| c.label.as_str()).unwrap_or(""),
        _ => "",
    }
}

fn recovery_key(n: &AstNode) -> (Kind, &str) {
    match n.kind {
        Kind::Call => (Kind::Call, method_name(n)),
        Kind::Decl => (Kind::Decl, ""),
        k => (k, n.label.as_str()),
    }
}

struct Matcher<'a> {
    src: Flat<'a>,
    dst: Flat<'a>,
    s2t: Vec<Option<usize>>,
    t2s: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    fn link(&mut self, s: usize, t: usize) {
        self.s2t[s] = Some(t);
        self.t2s[t] = Some(s);
    }

    fn mappable(&self, s: usize, t: usize) -> bool {
        let (a, b) = (self.src.nodes[s], self.dst.nodes[t]);
        a.kind == b.kind
            && a.kind != Kind::Hole
            && self.s2t[s].is_none()
            && self.t2s[t].is_none()
    }

    fn link_subtree(&mut self, s: usize, t: usize) {
        let n = self.src.size[s];
        for k in 0..n {
            self.link(s + k, t + k);
        }
    }

    fn parent_key_eq(&self, s: usize, t: usize) -> bool {
        match (self.src.parent[s], self.dst.parent[t]) {
            (Some(ps), Some(pt)) => {
                recovery_key(self.src.nodes[ps]) == recovery_key(self.dst.nodes[pt])
            }
            (None, None) => true,
            _ => false,
        }
    }

    fn parents_linked(&self, s: usize, t: usize) -> bool {
        match (self.src.parent[s], self.dst.parent[t]) {
            (Some(ps), Some(pt)) => self.s2t[ps] == Some(pt),
            _ => false,
        }
    }

    fn top_down(&mut self) {
        let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
        for t in 0..self.dst.len() {
            if self.dst.size[t] >= 2 && !self.dst.has_hole[t] {
                by_hash.entry(self.dst.hash[t]).or_default().push(t);
            }
        }
        let mut order: Vec<usize> = (0..self.src.len())
            .filter(|&s| self.src.size[s] >= 2 && !self.src.has_hole[s])
            .collect();
        order.sort_by_key(|&s| (std::cmp::Reverse(self.src.size[s]), s));
        for s in order {
            if self.s2t[s].is_some() {
                continue;
            }
            let Some(cands) = by_hash.get(&self.src.hash[s]) else {
                continue;
            };
            let best = cands
                .iter()
                .copied()
                .filter(|&t| {
                    self.t2s[t].is_none() && self.src.nodes[s].same_structure(self.dst.nodes[t])
                })
                .max_by_key(|&t| {
                    (
                        self.parents_linked(s, t),
                        self.parent_key_eq(s, t),
                        std::cmp::Reverse(t),
                    )
                });
            if let Some(t) = best {
                self.link_subtree(s, t);
            }
        }
    }

    fn containers(&mut self) {
        for s in self.src.postorder() {
            if self.s2t[s].is_some() || self.src.children[s].is_empty() {
                continue;
            }
            // Candidates: unmatched same-kind ancestors of targets of s's
            // matched descendants.
            let mut cands: Vec<usize> = Vec::new();
            for d in s + 1..s + self.src.size[s] {
                if let Some(td) = self.s2t[d] {
                    let mut cur = self.dst.parent[td];
                    while let Some(a) = cur {
                        if self.mappable(s, a) && !cands.contains(&a) {
                            cands.push(a);
                        }
                        cur = self.dst.parent[a];
                    }
                }
            }
            cands.sort_unstable();
            let mut best: Option<(f64, usize)> = None;
            for t in cands {
                let d = self.dice(s, t);
                if d >= CONTAINER_THRESHOLD && best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, t));
                }
            }
            if let Some((_, t)) = best {
                self.link(s, t);
            }
        }
    }

    fn dice(&self, s: usize, t: usize) -> f64 {
        let ns = self.src.size[s] - 1;
        let nt = self.dst.size[t] - 1;
        if ns + nt == 0 {
            return 0.0;
        }
        let common = (s + 1..s + self.src.size[s])
            .filter(|&d| self.s2t[d].is_some_and(|td| self.dst.is_descendant(td, t)))
            .count();
        2.0 * common as f64 / (ns + nt) as f64
    }

    fn recover_all(&mut self) {
        for s in 0..self.src.len() {
            if let Some(t) = self.s2t[s] {
                self.recover(s, t);
            }
        }
    }

    fn recover(&mut self, s: usize, t: usize) {
        let cs: Vec<usize> = self.src.children[s].clone();
        let ct: Vec<usize> = self.dst.children[t].clone();
        let us: Vec<usize> = cs.iter().copied().filter(|&c| self.s2t[c].is_none()).collect();
        let ut: Vec<usize> = ct.iter().copied().filter(|&c| self.t2s[c].is_none()).collect();
        let pairs = lcs(&us, &ut, |a, b| {
            self.mappable(a, b)
                && recovery_key(self.src.nodes[a]) == recovery_key(self.dst.nodes[b])
        });
        for (a, b) in pairs {
            self.link(a, b);
            self.recover(a, b);
        }
        // Leaves of equal kind between anchors become updates.
        let mut gap_s: Vec<usize> = Vec::new();
        let mut gaps: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut tpos = 0usize;
        for &c in &cs {
            match self.s2t[c] {
                Some(tc) if self.dst.parent[tc] == Some(t) => {
                    let at = ct.iter().position(|&x| x == tc).unwrap_or(0);
                    if at >= tpos {
                        let gap_t: Vec<usize> = ct[tpos..at]
                            .iter()
                            .copied()
                            .filter(|&x| self.t2s[x].is_none())
                            .collect();
                        gaps.push((std::mem::take(&mut gap_s), gap_t));
                        tpos = at + 1;
                    }
                }
                Some(_) => {}
                None => gap_s.push(c),
            }
        }
        let tail: Vec<usize> = ct[tpos.min(ct.len())..]
            .iter()
            .copied()
            .filter(|&x| self.t2s[x].is_none())
            .collect();
        gaps.push((gap_s, tail));
        for (gs, gt) in gaps {
            let pairs = lcs(&gs, &gt, |a, b| {
                self.mappable(a, b)
                    && self.src.children[a].is_empty()
                    && self.dst.children[b].is_empty()
            });
            for (a, b) in pairs {
                self.link(a, b);
            }
        }
    }
}

/// Longest common subsequence under `eq`; leftmost on ties.
fn lcs(a: &[usize], b: &[usize], eq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    let mut dp = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i][j] = if eq(a[i], b[j]) {
                dp[i + 1][j + 1] + 1
            } else {
                dp[i + 1][j].max(dp[i][j + 1])
            };
        }
    }
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if eq(a[i], b[j]) && dp[i][j] == dp[i + 1][j + 1] + 1 {
            out.push((a[i], b[j]));
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Positions (into `seq`) of a longest strictly increasing subsequence.
pub(crate) fn lis_positions(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if seq[j] < seq[i] && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut best) = (0..n).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut out = vec![best];
    while prev[best] != usize::MAX {
        best = prev[best];
        out.push(best);
    }
    out.reverse();
    out
}

/// Computes the mapping and edit script from `source` to `target`.
pub fn diff(source: &AstNode, target: &AstNode) -> EditScript {
    let src = Flat::new(source);
    let dst = Flat::new(target);
    let mut m = Matcher {
        s2t: vec![None; src.len()],
        t2s: vec![None; dst.len()],
        src,
        dst,
    };
    if m.mappable(0, 0) {
        m.link(0, 0);
    }
    m.top_down();
    m.containers();
    m.recover_all();
    build_script(&m)
}

fn build_script(m: &Matcher) -> EditScript {
    let (src, dst) = (&m.src, &m.dst);
    let mut mapping = Mapping::new();
    for s in 0..src.len() {
        if let Some(t) = m.s2t[s] {
            mapping.insert(src.nodes[s].id, dst.nodes[t].id);
        }
    }
    let mut ops = Vec::new();
    for s in src.postorder() {
        if m.s2t[s].is_none() {
            ops.push(EditOp::Delete { node: src.nodes[s].id });
        }
    }
    // Children of each target parent that keep their relative order.
    let mut in_order = vec![false; dst.len()];
    for t in 0..dst.len() {
        let Some(s) = m.t2s[t] else { continue };
        let kept: Vec<usize> = dst.children[t]
            .iter()
            .copied()
            .filter(|&c| m.t2s[c].is_some_and(|sc| src.parent[sc] == Some(s)))
            .collect();
        let seq: Vec<usize> = kept
            .iter()
            .map(|&c| src.index_in_parent(m.t2s[c].unwrap()))
            .collect();
        for p in lis_positions(&seq) {
            in_order[kept[p]] = true;
        }
    }
    if m.t2s[0].is_some() {
        in_order[0] = true;
    }
    #[allow(clippy::needless_range_loop)]
    for t in 0..dst.len() {
        let node = dst.nodes[t];
        let parent = dst.parent[t].map(|p| dst.nodes[p].id);
        let idx = dst.index_in_parent(t);
        let after = if idx > 0 {
            dst.parent[t].map(|p| dst.nodes[dst.children[p][idx - 1]].id)
        } else {
            None
        };
        match m.t2s[t] {
            None => ops.push(EditOp::Insert {
                node: node.id,
                kind: node.kind,
                label: node.label.clone(),
                parent,
                after,
                index: idx,
            }),
            Some(s) if !in_order[t] => ops.push(EditOp::Move {
                node: src.nodes[s].id,
                parent: parent.expect("moved node has a parent"),
                after,
                index: idx,
            }),
            Some(_) => {}
        }
    }
    for s in 0..src.len() {
        if let Some(t) = m.s2t[s] {
            if src.nodes[s].label != dst.nodes[t].label {
                ops.push(EditOp::Update {
                    node: src.nodes[s].id,
                    old_label: src.nodes[s].label.clone(),
                    new_label: dst.nodes[t].label.clone(),
                });
            }
        }
    }
    EditScript { ops, mapping }
}

/// Applies a script. Nodes carried over from `source` keep their ids;
/// inserted nodes carry the target ids named in the script.
pub fn apply_script(source: &AstNode, script: &EditScript) -> Result<AstNode, ScriptError> {
    let mut root: Option<AstNode> = Some(source.clone());
    let mut pool: HashMap<NodeId, AstNode> = HashMap::new();
    let resolve = |t: NodeId| script.mapping.source_of(t).unwrap_or(t);
    let missing = |id: NodeId| ScriptError::MissingNode(id.to_string());
    for op in &script.ops {
        match op {
            EditOp::Delete { node } => {
                let mut removed = match root.as_mut() {
                    Some(r) if r.id == *node => root.take().unwrap(),
                    Some(r) => detach(r, *node).ok_or_else(|| missing(*node))?,
                    None => return Err(missing(*node)),
                };
                for c in removed.children.drain(..) {
                    pool.insert(c.id, c);
                }
            }
            EditOp::Insert {
                node,
                kind,
                label,
                parent,
                after,
                ..
            } => {
                let fresh = AstNode {
                    kind: *kind,
                    label: label.clone(),
                    children: Vec::new(),
                    id: *node,
                    span: None,
                };
                match parent {
                    None => {
                        if root.is_some() {
                            return Err(ScriptError::Invalid("second root inserted".into()));
                        }
                        root = Some(fresh);
                    }
                    Some(p) => {
                        let r = root.as_mut().ok_or_else(|| missing(*p))?;
                        place(r, resolve(*p), after.map(resolve), fresh)?;
                    }
                }
            }
            EditOp::Move {
                node,
                parent,
                after,
                ..
            } => {
                let r = root.as_mut().ok_or_else(|| missing(*node))?;
                let sub = match pool.remove(node) {
                    Some(n) => n,
                    // The node may sit in the tree or inside a pooled subtree.
                    None => detach(r, *node)
                        .or_else(|| pool.values_mut().find_map(|p| detach(p, *node)))
                        .ok_or_else(|| missing(*node))?,
                };
                place(r, resolve(*parent), after.map(resolve), sub)?;
            }
            EditOp::Update {
                node, new_label, ..
            } => {
                let r = root.as_mut().ok_or_else(|| missing(*node))?;
                r.find_mut(*node).ok_or_else(|| missing(*node))?.label = new_label.clone();
            }
        }
    }
    if let Some(id) = pool.keys().min() {
        return Err(ScriptError::Invalid(format!("node {id} was orphaned")));
    }
    root.ok_or_else(|| ScriptError::Invalid("script deleted the root".into()))
}

fn detach(root: &mut AstNode, id: NodeId) -> Option<AstNode> {
    if let Some(i) = root.children.iter().position(|c| c.id == id) {
        return Some(root.children.remove(i));
    }
    root.children.iter_mut().find_map(|c| detach(c, id))
}

fn place(
    root: &mut AstNode,
    parent: NodeId,
    after: Option<NodeId>,
    node: AstNode,
) -> Result<(), ScriptError> {
    let p = root
        .find_mut(parent)
        .ok_or_else(|| ScriptError::MissingNode(parent.to_string()))?;
    let at = match after {
        None => 0,
        Some(a) => {
            p.children
                .iter()
                .position(|c| c.id == a)
                .ok_or_else(|| ScriptError::MissingNode(a.to_string()))?
                + 1
        }
    };
    p.children.insert(at, node);
    Ok(())
}

/// Number of edit operations between the originals plus those between the
/// modified versions of two changes.
pub fn change_distance(o_i: &AstNode, m_i: &AstNode, o_j: &AstNode, m_j: &AstNode) -> usize {
    diff(o_i, o_j).len() + diff(m_i, m_j).len()
}

/// JSON rendering with child-index paths: `path` locates the subject node
/// (in the target tree for inserts), `targetPath` its final position.
pub fn script_to_json(source: &AstNode, target: &AstNode, script: &EditScript) -> serde_json::Value {
    let si = ParentIndex::build(source);
    let ti = ParentIndex::build(target);
    let ops: Vec<serde_json::Value> = script
        .ops
        .iter()
        .map(|op| match op {
            EditOp::Delete { node } => json!({
                "kind": "delete", "path": si.path(*node), "targetPath": null, "newLabel": null
            }),
            EditOp::Insert { node, kind, label, .. } => json!({
                "kind": "insert", "path": ti.path(*node), "targetPath": ti.path(*node),
                "newLabel": label, "nodeKind": kind
            }),
            EditOp::Move { node, .. } => {
                let t = script.mapping.target_of(*node).unwrap_or(*node);
                json!({
                    "kind": "move", "path": si.path(*node), "targetPath": ti.path(t), "newLabel": null
                })
            }
            EditOp::Update { node, new_label, .. } => json!({
                "kind": "update", "path": si.path(*node), "targetPath": null, "newLabel": new_label
            }),
        })
        .collect();
    json!({ "ops": ops, "mappingSize": script.mapping.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn check(a: &str, b: &str) -> EditScript {
        let a = parse(a).unwrap().root;
        let b = parse(b).unwrap().root;
        let s = diff(&a, &b);
        let out = apply_script(&a, &s).unwrap();
        assert_eq!(out, b, "{:?}", s.ops);
        s
    }

    #[test]
    fn identical_trees_need_no_ops() {
        let src = "{ int x = f(1); if (x > 0) { g(x); } }";
        let s = check(src, src);
        assert!(s.ops.is_empty());
        let size = parse(src).unwrap().root.size();
        assert_eq!(s.mapping.len(), size);
    }

    #[test]
    fn single_rename_is_one_update() {
        let s = check("{ int j = 0; use(j); }", "{ int k = 0; use(j); }");
        assert_eq!(s.ops.len(), 1);
        assert!(matches!(&s.ops[0], EditOp::Update { new_label, .. } if new_label == "k"));
    }

    #[test]
    fn statements_wrapped_in_if_are_moved() {
        let s = check(
            "{ Foo foo = getFoo(); someMethod(foo); foo.run(); return foo; }",
            "{ Foo foo = getFoo(); if (foo != null) { someMethod(foo); foo.run(); } return foo; }",
        );
        let moves = s.ops.iter().filter(|o| matches!(o, EditOp::Move { .. })).count();
        assert_eq!(moves, 2);
        assert!(!s.ops.iter().any(|o| matches!(o, EditOp::Delete { .. })));
    }

    #[test]
    fn reorder_and_delete_and_insert() {
        check("{ a(); b(); c(); }", "{ c(); a(); d(); }");
        check("{ while (x) { a(); } }", "{ a(); }");
        check("{ if (p) { a(); b(); } else { c(); } }", "{ if (q) { b(); } c(); a(); }");
        check("{ }", "{ x = 1; y = 2; }");
    }

    #[test]
    fn mapping_respects_kinds() {
        let a = parse("{ int i = 0; while (i < 3) { i++; } f(i); }").unwrap().root;
        let b = parse("{ for (int i = 0; i < 3; i++) { g(i); } f(i); }").unwrap().root;
        let s = diff(&a, &b);
        for &(x, y) in s.mapping.pairs() {
            assert_eq!(a.find(x).unwrap().kind, b.find(y).unwrap().kind);
        }
        assert_eq!(apply_script(&a, &s).unwrap(), b);
    }

    #[test]
    fn apply_rejects_missing_node() {
        let a = parse("{ f(); }").unwrap().root;
        let s = EditScript {
            ops: vec![EditOp::Delete { node: NodeId(u32::MAX) }],
            mapping: Mapping::new(),
        };
        assert!(matches!(apply_script(&a, &s), Err(ScriptError::MissingNode(_))));
    }

    #[test]
    fn json_paths() {
        let a = parse("{ f(); }").unwrap().root;
        let b = parse("{ f(); g(); }").unwrap().root;
        let s = diff(&a, &b);
        let j = script_to_json(&a, &b, &s);
        assert_eq!(j["ops"][0]["kind"], "insert");
        assert_eq!(j["ops"][0]["path"], json!([1]));
        assert_eq!(j["mappingSize"], s.mapping.len());
    }

    #[test]
    fn lis_is_leftmost_longest() {
        assert_eq!(lis_positions(&[2, 0, 1]), vec![1, 2]);
        assert_eq!(lis_positions(&[]), Vec::<usize>::new());
    }
}
