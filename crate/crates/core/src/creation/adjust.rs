//! Rewrites a raw edit script into the shape used for generalization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::ast::{AstNode, Kind, NodeId, ParentIndex};
use crate::diff::{EditOp, EditScript, Mapping};

/// Toggles for the adjustment rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    /// Drop node operations already covered by an operation on an ancestor.
    pub subsumption: bool,
    /// Re-pair identical statements positionally to avoid spurious moves.
    pub repair_identical: bool,
    /// Turn moves across blocks into a delete plus an insert.
    pub demote_moves: bool,
    /// A declaration whose name and initializer both change is replaced as a whole.
    pub replace_declarations: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self { subsumption: true, repair_identical: true, demote_moves: true, replace_declarations: true }
    }
}

impl RuleSet {
    pub fn none() -> Self {
        Self { subsumption: false, repair_identical: false, demote_moves: false, replace_declarations: false }
    }

    /// Parses a comma separated list of rule names (`r42`, `r13`, `r31`,
    /// `r48`, `all`, `none`).
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut r = Self::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "all" => r = Self::default(),
                "none" => r = Self::none(),
                "r42" => r.subsumption = true,
                "r13" => r.repair_identical = true,
                "r31" => r.demote_moves = true,
                "r48" => r.replace_declarations = true,
                other => return Err(format!("unknown rule `{other}`")),
            }
        }
        Ok(r)
    }
}

pub(crate) struct Tree<'a> {
    pub root: &'a AstNode,
    pub nodes: HashMap<NodeId, &'a AstNode>,
    pub parents: ParentIndex,
    pub order: Vec<NodeId>,
}

impl<'a> Tree<'a> {
    pub fn new(root: &'a AstNode) -> Self {
        let mut nodes = HashMap::new();
        let mut order = Vec::new();
        root.walk(&mut |n| {
            nodes.insert(n.id, n);
            order.push(n.id);
        });
        Self { root, nodes, parents: ParentIndex::build(root), order }
    }

    pub fn get(&self, id: NodeId) -> &'a AstNode {
        self.nodes[&id]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parents.parent(id)
    }

    pub fn subtree_ids(&self, id: NodeId) -> Vec<NodeId> {
        let mut v = Vec::new();
        self.get(id).walk(&mut |n| v.push(n.id));
        v
    }
}

/// Identifiers whose label names a method or field rather than a variable.
pub(crate) fn is_member_name(tree: &Tree, id: NodeId) -> bool {
    match tree.parents.position(id) {
        Some((p, i)) => {
            let pk = tree.get(p).kind;
            (pk == Kind::Call && i == 0) || (pk == Kind::FieldAccess && i == 1)
        }
        None => false,
    }
}

struct Work<'a> {
    src: Tree<'a>,
    dst: Tree<'a>,
    s2t: HashMap<NodeId, NodeId>,
    t2s: HashMap<NodeId, NodeId>,
}

impl<'a> Work<'a> {
    fn unmap_source(&mut self, s: NodeId) {
        if let Some(t) = self.s2t.remove(&s) {
            self.t2s.remove(&t);
        }
    }

    fn unmap_target(&mut self, t: NodeId) {
        if let Some(s) = self.t2s.remove(&t) {
            self.s2t.remove(&s);
        }
    }

    fn unmap_subtree(&mut self, s: NodeId) {
        for id in self.src.subtree_ids(s) {
            self.unmap_source(id);
        }
    }

    fn map(&mut self, s: NodeId, t: NodeId) {
        self.unmap_source(s);
        self.unmap_target(t);
        self.s2t.insert(s, t);
        self.t2s.insert(t, s);
    }

    fn sorted_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let pos: HashMap<NodeId, usize> = self.src.order.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut v: Vec<_> = self.s2t.iter().map(|(s, t)| (*s, *t)).collect();
        v.sort_by_key(|(s, _)| pos[s]);
        v
    }

    fn parents_linked(&self, s: NodeId, t: NodeId) -> bool {
        match (self.src.parent(s), self.dst.parent(t)) {
            (Some(ps), Some(pt)) => self.s2t.get(&ps) == Some(&pt),
            (None, None) => true,
            _ => false,
        }
    }

    fn repair_identical(&mut self) -> bool {
        let mut changed = false;
        for (ps, pt) in self.sorted_pairs() {
            let (a, b) = (self.src.get(ps), self.dst.get(pt));
            if a.kind != Kind::Block || b.kind != Kind::Block {
                continue;
            }
            let mut groups: BTreeMap<u64, (Vec<NodeId>, Vec<NodeId>)> = BTreeMap::new();
            for c in &a.children {
                groups.entry(c.structural_hash()).or_default().0.push(c.id);
            }
            for c in &b.children {
                if let Some(g) = groups.get_mut(&c.structural_hash()) {
                    g.1.push(c.id);
                }
            }
            for (ss, ts) in groups.values() {
                if ss.is_empty() || ts.is_empty() {
                    continue;
                }
                let current: Vec<usize> = ss
                    .iter()
                    .filter_map(|s| self.s2t.get(s).and_then(|t| ts.iter().position(|x| x == t)))
                    .collect();
                let ordered = current.windows(2).all(|w| w[0] < w[1]);
                if ordered && current.len() == ss.len().min(ts.len()) {
                    continue;
                }
                for (s, t) in ss.iter().zip(ts) {
                    if self.s2t.get(s) == Some(t) {
                        continue;
                    }
                    self.unmap_subtree(*s);
                    let old: Vec<NodeId> = self.dst.subtree_ids(*t);
                    for id in old {
                        self.unmap_target(id);
                    }
                    let sids = self.src.subtree_ids(*s);
                    let tids = self.dst.subtree_ids(*t);
                    for (x, y) in sids.into_iter().zip(tids) {
                        self.map(x, y);
                    }
                    changed = true;
                }
            }
        }
        changed
    }

    fn demote_moves(&mut self) -> bool {
        let mut changed = false;
        for (s, t) in self.sorted_pairs() {
            if s == self.src.root.id || !self.s2t.contains_key(&s) {
                continue;
            }
            if !self.parents_linked(s, t) {
                self.unmap_subtree(s);
                changed = true;
            }
        }
        changed
    }

    fn replace_declarations(&mut self) -> bool {
        let mut changed = false;
        for (s, t) in self.sorted_pairs() {
            let (a, b) = (self.src.get(s), self.dst.get(t));
            if a.kind != Kind::Decl || b.kind != Kind::Decl || !self.s2t.contains_key(&s) {
                continue;
            }
            if decl_replaced(a, b) {
                self.unmap_subtree(s);
                changed = true;
            }
        }
        changed
    }

    /// Label changes other than identifier renames and literal values are
    /// not expressible as updates; the node is replaced instead.
    fn replace_updated(&mut self) -> bool {
        let mut changed = false;
        for (s, t) in self.sorted_pairs() {
            let (a, b) = (self.src.get(s), self.dst.get(t));
            if a.label == b.label || !self.s2t.contains_key(&s) {
                continue;
            }
            let renamable = (a.kind == Kind::Identifier && !is_member_name(&self.src, s)) || a.kind.is_literal();
            if !renamable && s != self.src.root.id {
                self.unmap_subtree(s);
                changed = true;
            }
        }
        changed
    }
}

/// A declaration whose name and initializer shape both differ.
pub(crate) fn decl_replaced(a: &AstNode, b: &AstNode) -> bool {
    let name = a.children.get(1).map(|n| &n.label) != b.children.get(1).map(|n| &n.label);
    let init = match (a.children.get(2), b.children.get(2)) {
        (Some(x), Some(y)) => !same_shape(x, y),
        (None, None) => false,
        _ => true,
    };
    name && init
}

/// Equal up to identifier names.
fn same_shape(a: &AstNode, b: &AstNode) -> bool {
    a.kind == b.kind
        && (a.kind == Kind::Identifier || a.label == b.label)
        && a.children.len() == b.children.len()
        && a.children.iter().zip(&b.children).all(|(x, y)| same_shape(x, y))
}

/// Applies the enabled rules until the mapping stops changing (at most ten
/// passes) and rebuilds the operations. The result describes whole
/// subtrees: an `Insert` stands for the inserted node and, with
/// subsumption enabled, all its inserted descendants. No `Update` remains;
/// identifier renames stay visible through the mapping.
pub fn adjust_edit_script(script: &EditScript, src: &AstNode, dst: &AstNode, rules: &RuleSet) -> EditScript {
    let mut w = Work {
        src: Tree::new(src),
        dst: Tree::new(dst),
        s2t: HashMap::new(),
        t2s: HashMap::new(),
    };
    for &(s, t) in script.mapping.pairs() {
        if w.src.nodes.contains_key(&s) && w.dst.nodes.contains_key(&t) {
            w.s2t.insert(s, t);
            w.t2s.insert(t, s);
        }
    }
    for _ in 0..10 {
        let mut changed = false;
        if rules.repair_identical {
            changed |= w.repair_identical();
        }
        changed |= w.replace_updated();
        if rules.demote_moves {
            changed |= w.demote_moves();
        }
        if rules.replace_declarations {
            changed |= w.replace_declarations();
        }
        if !changed {
            break;
        }
    }
    build_ops(&w, rules)
}

fn fully_unmapped(tree: &Tree, mapped: &HashMap<NodeId, NodeId>, id: NodeId) -> bool {
    tree.subtree_ids(id).iter().all(|x| !mapped.contains_key(x))
}

fn build_ops(w: &Work, rules: &RuleSet) -> EditScript {
    let mut ops = Vec::new();
    let covered = |tree: &Tree, mapped: &HashMap<NodeId, NodeId>, id: NodeId| {
        rules.subsumption
            && tree.parent(id).is_some_and(|p| !mapped.contains_key(&p) && fully_unmapped(tree, mapped, p))
    };
    for &id in &w.src.order {
        if !w.s2t.contains_key(&id) && !covered(&w.src, &w.s2t, id) {
            ops.push(EditOp::Delete { node: id });
        }
    }
    for &id in &w.dst.order {
        if w.t2s.contains_key(&id) || covered(&w.dst, &w.t2s, id) {
            continue;
        }
        let n = w.dst.get(id);
        let (parent, index, after) = match w.dst.parents.position(id) {
            Some((p, i)) => {
                let after = if i == 0 { None } else { Some(w.dst.get(p).children[i - 1].id) };
                (Some(p), i, after)
            }
            None => (None, 0, None),
        };
        ops.push(EditOp::Insert { node: id, kind: n.kind, label: n.label.clone(), parent, after, index });
    }
    // Moves: cross-parent pairs and children outside the longest kept order.
    let mut moved = BTreeSet::new();
    for &t in &w.dst.order {
        let Some(&s) = w.t2s.get(&t) else { continue };
        if s != w.src.root.id && !w.parents_linked(s, t) {
            moved.insert(t);
        }
        let b = w.dst.get(t);
        let kept: Vec<(usize, NodeId)> = b
            .children
            .iter()
            .filter_map(|c| {
                let cs = *w.t2s.get(&c.id)?;
                let (p, i) = w.src.parents.position(cs)?;
                (p == s).then_some((i, c.id))
            })
            .collect();
        let keys: Vec<usize> = kept.iter().map(|k| k.0).collect();
        let lis = crate::diff::lis_positions(&keys);
        for (k, (_, c)) in kept.iter().enumerate() {
            if !lis.contains(&k) {
                moved.insert(*c);
            }
        }
    }
    for &t in &w.dst.order {
        if !moved.contains(&t) {
            continue;
        }
        let (p, i) = w.dst.parents.position(t).expect("moved node has a parent");
        let after = if i == 0 { None } else { Some(w.dst.get(p).children[i - 1].id) };
        ops.push(EditOp::Move { node: w.t2s[&t], parent: p, after, index: i });
    }
    let mut mapping = Mapping::new();
    for (s, t) in w.sorted_pairs() {
        mapping.insert(s, t);
    }
    EditScript { ops, mapping }
}

/// Placeholder identifiers derived from the renames of an adjusted script.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchIdentifiers {
    /// Target-side lexemes in target preorder.
    pub names: Vec<String>,
    /// Target lexeme to source lexeme.
    pub renames: BTreeMap<String, String>,
}

/// Collects identifier pairs that are consistently renamed between the
/// mapped source and target nodes. A target name that pairs with more than
/// one source name is not generalized.
pub fn insert_match_identifiers(adjusted: &EditScript, src: &AstNode, dst: &AstNode) -> MatchIdentifiers {
    let s = Tree::new(src);
    let d = Tree::new(dst);
    let mut seen: HashMap<String, BTreeSet<String>> = HashMap::new();
    for &(a, b) in adjusted.mapping.pairs() {
        let (Some(x), Some(y)) = (s.nodes.get(&a), d.nodes.get(&b)) else { continue };
        if x.kind == Kind::Identifier && y.kind == Kind::Identifier && !is_member_name(&d, b) {
            seen.entry(y.label.clone()).or_default().insert(x.label.clone());
        }
    }
    let mut out = MatchIdentifiers::default();
    for id in &d.order {
        let n = d.get(*id);
        if n.kind != Kind::Identifier || out.renames.contains_key(&n.label) {
            continue;
        }
        if let Some(set) = seen.get(&n.label) {
            if set.len() == 1 && !set.contains(&n.label) {
                out.renames.insert(n.label.clone(), set.iter().next().unwrap().clone());
                out.names.push(n.label.clone());
            }
        }
    }
    out
}
