//! Finds the smallest statement or block that contains a change and pairs
//! the change roots of two examples.

use serde::{Deserialize, Serialize};

use super::adjust::Tree;
use crate::ast::{AstNode, Kind, NodeId};
use crate::diff::{diff, EditOp, EditScript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsolationStep {
    /// The two change roots are used as they are.
    Direct,
    /// A child of the second root pairs with the first root.
    Children,
    /// A child of the first root pairs with the second root.
    Reversed,
    /// Grandchildren are searched in both directions.
    Grandchildren,
}

/// Region roots in the four trees of two changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isolation {
    pub o1: NodeId,
    pub m1: NodeId,
    pub o2: NodeId,
    pub m2: NodeId,
    pub step: IsolationStep,
}

fn is_region(tree: &Tree, id: NodeId) -> bool {
    let n = tree.get(id);
    if n.kind == Kind::Block {
        return true;
    }
    n.kind.is_statement() && tree.parent(id).is_some_and(|p| tree.get(p).kind == Kind::Block)
}

/// Lifts `id` to the nearest statement or block that is mapped by `d`.
pub(crate) fn lift(tree: &Tree, d: &EditScript, mut id: NodeId) -> NodeId {
    loop {
        if is_region(tree, id) && d.mapping.has_source(id) {
            return id;
        }
        match tree.parent(id) {
            Some(p) => id = p,
            None => return id,
        }
    }
}

/// Change root in `o` of the script `d` from `o` to `m`.
pub fn change_root(o: &AstNode, m: &AstNode, d: &EditScript) -> NodeId {
    let ot = Tree::new(o);
    let mt = Tree::new(m);
    let back = |mut t: NodeId| loop {
        if let Some(s) = d.mapping.source_of(t) {
            return s;
        }
        match mt.parent(t) {
            Some(p) => t = p,
            None => return o.id,
        }
    };
    let mut touched = Vec::new();
    for op in &d.ops {
        match op {
            EditOp::Delete { node } => touched.push(ot.parent(*node).unwrap_or(*node)),
            EditOp::Update { node, .. } => touched.push(*node),
            EditOp::Move { node, parent, .. } => {
                touched.push(ot.parent(*node).unwrap_or(*node));
                touched.push(back(*parent));
            }
            EditOp::Insert { parent, .. } => touched.push(parent.map(back).unwrap_or(o.id)),
        }
    }
    let lca = ot.parents.lca(&touched).unwrap_or(o.id);
    lift(&ot, d, lca)
}

fn statement_overlap(t1: &Tree, x: NodeId, t2: &Tree, y: NodeId, d: &EditScript) -> usize {
    t1.subtree_ids(x)
        .into_iter()
        .filter(|a| is_region(t1, *a) && t1.get(*a).kind != Kind::Block)
        .filter_map(|a| d.mapping.target_of(a))
        .filter(|b| t2.parents.is_ancestor_or_self(y, *b))
        .count()
}

fn grandchildren(n: &AstNode) -> Vec<&AstNode> {
    n.children.iter().flat_map(|c| c.children.iter()).collect()
}

/// Pairs the change roots of two examples. Returns `None` when no pair of
/// same-kind regions shares a mapped statement.
pub fn isolate_change(
    c1: (&AstNode, &AstNode, &EditScript),
    c2: (&AstNode, &AstNode, &EditScript),
) -> Option<Isolation> {
    let (o1, m1, d1) = c1;
    let (o2, m2, d2) = c2;
    let r1 = change_root(o1, m1, d1);
    let r2 = change_root(o2, m2, d2);
    let t1 = Tree::new(o1);
    let t2 = Tree::new(o2);
    let doo = diff(o1, o2);
    let score = |x: NodeId, y: NodeId| -> usize {
        let (a, b) = (t1.get(x), t2.get(y));
        if a.kind != b.kind || !d1.mapping.has_source(x) || !d2.mapping.has_source(y) {
            return 0;
        }
        statement_overlap(&t1, x, &t2, y, &doo)
    };
    let done = |x: NodeId, y: NodeId, step| Isolation {
        o1: x,
        m1: d1.mapping.target_of(x).unwrap(),
        o2: y,
        m2: d2.mapping.target_of(y).unwrap(),
        step,
    };
    let (n1, n2) = (t1.get(r1), t2.get(r2));
    let direct_ok = n1.kind == n2.kind
        && d1.mapping.has_source(r1)
        && d2.mapping.has_source(r2)
        && (n1.kind != Kind::Block || score(r1, r2) > 0);
    if direct_ok {
        return Some(done(r1, r2, IsolationStep::Direct));
    }
    let best = |cands: Vec<(NodeId, NodeId)>| -> Option<(NodeId, NodeId)> {
        let mut best: Option<((NodeId, NodeId), usize)> = None;
        for (x, y) in cands {
            let s = score(x, y);
            if s > 0 && best.is_none_or(|b| s > b.1) {
                best = Some(((x, y), s));
            }
        }
        best.map(|b| b.0)
    };
    let children: Vec<_> = n2.children.iter().map(|c| (r1, c.id)).collect();
    if let Some((x, y)) = best(children) {
        return Some(done(x, y, IsolationStep::Children));
    }
    let reversed: Vec<_> = n1.children.iter().map(|c| (c.id, r2)).collect();
    if let Some((x, y)) = best(reversed) {
        return Some(done(x, y, IsolationStep::Reversed));
    }
    let mut grand: Vec<_> = grandchildren(n2).iter().map(|c| (r1, c.id)).collect();
    grand.extend(grandchildren(n1).iter().map(|c| (c.id, r2)));
    best(grand).map(|(x, y)| done(x, y, IsolationStep::Grandchildren))
}
