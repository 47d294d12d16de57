//! Typed trees for method bodies of the Java subset, plus the annotation
//! node kinds used inside pattern parts.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering};

use serde::{Deserialize, Serialize};

/// Node identifier, unique within one tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

static NEXT_ID: AtomicU32 = AtomicU32::new(1);

/// Returns a process-wide fresh id. Ids are never reused, so every tree
/// built through this module has unique ids and clones made with
/// [`AstNode::deep_clone_fresh`] never collide with their source.
pub fn fresh_id() -> NodeId {
    NodeId(NEXT_ID.fetch_add(1, Ordering::Relaxed))
}

/// Byte range into the source text the node was parsed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    // statements
    Block,
    If,
    While,
    For,
    Try,
    Catch,
    Finally,
    Return,
    Assert,
    Throw,
    Break,
    Continue,
    Decl,
    Assign,
    // expressions
    Call,
    FieldAccess,
    ArgList,
    Identifier,
    Type,
    IntLiteral,
    BoolLiteral,
    StringLiteral,
    NullLiteral,
    BinaryExpr,
    UnaryExpr,
    PostfixExpr,
    Paren,
    /// Absent optional part (for-loop header slots, bare `return`).
    Empty,
    // pattern annotations
    WildcardStmt,
    WildcardExpr,
    Use,
    UseExpr,
    Choice,
    Case,
    /// Anchor of an expression annotation: label is the lexeme.
    Anchor,
    /// Annotation stand-in that the differ never matches.
    Hole,
    /// Annotation stand-in that the differ treats as an ordinary leaf.
    Slot,
}

impl Kind {
    pub fn is_leaf_kind(self) -> bool {
        matches!(
            self,
            Kind::Identifier
                | Kind::Type
                | Kind::IntLiteral
                | Kind::BoolLiteral
                | Kind::StringLiteral
                | Kind::NullLiteral
                | Kind::Empty
                | Kind::Break
                | Kind::Continue
                | Kind::WildcardStmt
                | Kind::Use
                | Kind::Anchor
                | Kind::Slot
        )
    }

    pub fn is_literal(self) -> bool {
        matches!(
            self,
            Kind::IntLiteral | Kind::BoolLiteral | Kind::StringLiteral | Kind::NullLiteral
        )
    }

    /// Kinds whose label is an operator and therefore part of the node type.
    pub fn label_is_operator(self) -> bool {
        matches!(
            self,
            Kind::BinaryExpr | Kind::UnaryExpr | Kind::PostfixExpr | Kind::Assign
        )
    }

    pub fn is_annotation(self) -> bool {
        matches!(
            self,
            Kind::WildcardStmt
                | Kind::WildcardExpr
                | Kind::Use
                | Kind::UseExpr
                | Kind::Choice
                | Kind::Hole
                | Kind::Slot
        )
    }

    /// Kinds that may appear directly in a block.
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            Kind::Block
                | Kind::If
                | Kind::While
                | Kind::For
                | Kind::Try
                | Kind::Return
                | Kind::Assert
                | Kind::Throw
                | Kind::Break
                | Kind::Continue
                | Kind::Decl
                | Kind::Assign
                | Kind::Call
                | Kind::UnaryExpr
                | Kind::PostfixExpr
                | Kind::WildcardStmt
                | Kind::WildcardExpr
                | Kind::Use
                | Kind::UseExpr
                | Kind::Choice
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AstNode {
    pub kind: Kind,
    pub label: String,
    pub children: Vec<AstNode>,
    pub id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl AstNode {
    pub fn new(kind: Kind, label: impl Into<String>, children: Vec<AstNode>) -> Self {
        AstNode {
            kind,
            label: label.into(),
            children,
            id: fresh_id(),
            span: None,
        }
    }

    pub fn leaf(kind: Kind, label: impl Into<String>) -> Self {
        AstNode::new(kind, label, Vec::new())
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(AstNode::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(AstNode::height).max().unwrap_or(0)
    }

    /// Structural equality: kinds, labels and child order; ids and spans
    /// are ignored.
    pub fn same_structure(&self, other: &AstNode) -> bool {
        self.kind == other.kind
            && self.label == other.label
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_structure(b))
    }

    /// Structural hash over (kind, label, children hashes).
    pub fn structural_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.kind.hash(&mut h);
        self.label.hash(&mut h);
        self.children.len().hash(&mut h);
        for c in &self.children {
            c.structural_hash().hash(&mut h);
        }
        h.finish()
    }

    /// Clone with fresh ids for every node; spans are kept.
    pub fn deep_clone_fresh(&self) -> AstNode {
        AstNode {
            kind: self.kind,
            label: self.label.clone(),
            children: self.children.iter().map(AstNode::deep_clone_fresh).collect(),
            id: fresh_id(),
            span: self.span,
        }
    }

    /// Clone with fresh ids and no spans.
    pub fn detached(&self) -> AstNode {
        AstNode {
            kind: self.kind,
            label: self.label.clone(),
            children: self.children.iter().map(AstNode::detached).collect(),
            id: fresh_id(),
            span: None,
        }
    }

    pub fn find(&self, id: NodeId) -> Option<&AstNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    pub fn find_mut(&mut self, id: NodeId) -> Option<&mut AstNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_mut(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.find(id).is_some()
    }

    /// Visits every node in depth-first preorder.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a AstNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut AstNode)) {
        f(self);
        for c in &mut self.children {
            c.walk_mut(f);
        }
    }

    /// Every identifier lexeme in preorder.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.kind == Kind::Identifier {
                out.push(n.label.as_str());
            }
        });
        out
    }
}

impl PartialEq for AstNode {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other)
    }
}

impl Eq for AstNode {}

/// Depth-first preorder node list.
pub fn preorder_nodes(root: &AstNode) -> Vec<&AstNode> {
    let mut out = Vec::with_capacity(root.size());
    root.walk(&mut |n| out.push(n));
    out
}

/// Parent links for a tree, keyed by node id.
#[derive(Debug, Default, Clone)]
pub struct ParentIndex {
    parent: std::collections::HashMap<NodeId, (NodeId, usize)>,
}

impl ParentIndex {
    pub fn build(root: &AstNode) -> Self {
        let mut parent = std::collections::HashMap::new();
        fn go(n: &AstNode, map: &mut std::collections::HashMap<NodeId, (NodeId, usize)>) {
            for (i, c) in n.children.iter().enumerate() {
                map.insert(c.id, (n.id, i));
                go(c, map);
            }
        }
        go(root, &mut parent);
        ParentIndex { parent }
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent.get(&id).map(|p| p.0)
    }

    /// Parent id and the child index of `id` within it.
    pub fn position(&self, id: NodeId) -> Option<(NodeId, usize)> {
        self.parent.get(&id).copied()
    }

    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn is_ancestor_or_self(&self, anc: NodeId, id: NodeId) -> bool {
        anc == id || self.ancestors(id).contains(&anc)
    }

    /// Lowest common ancestor of a nonempty id set.
    pub fn lca(&self, ids: &[NodeId]) -> Option<NodeId> {
        let first = *ids.first()?;
        let mut chain: Vec<NodeId> = std::iter::once(first).chain(self.ancestors(first)).collect();
        for &id in &ids[1..] {
            let mine: Vec<NodeId> = std::iter::once(id).chain(self.ancestors(id)).collect();
            chain.retain(|a| mine.contains(a));
        }
        chain.first().copied()
    }

    /// Child-index path from the root to `id`.
    pub fn path(&self, id: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some((p, i)) = self.position(cur) {
            out.push(i);
            cur = p;
        }
        out.reverse();
        out
    }
}

/// A parsed method body together with the text it came from.
#[derive(Debug, Clone)]
pub struct MethodBody {
    pub root: AstNode,
    pub source_text: String,
}

impl MethodBody {
    pub fn new(root: AstNode, source_text: impl Into<String>) -> Self {
        debug_assert_eq!(root.kind, Kind::Block);
        MethodBody {
            root,
            source_text: source_text.into(),
        }
    }

    /// Builds a body from a tree that has no source of its own.
    pub fn from_tree(root: AstNode) -> Self {
        let text = crate::printer::pretty_print(&root);
        MethodBody {
            root,
            source_text: text,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(name: &str, args: Vec<AstNode>) -> AstNode {
        AstNode::new(
            Kind::Call,
            "",
            vec![
                AstNode::leaf(Kind::Identifier, name),
                AstNode::new(Kind::ArgList, "", args),
            ],
        )
    }

    #[test]
    fn preorder_of_single_leaf() {
        let leaf = AstNode::leaf(Kind::Identifier, "x");
        assert_eq!(preorder_nodes(&leaf).len(), 1);
    }

    #[test]
    fn preorder_visits_parent_before_children() {
        let root = AstNode::new(
            Kind::Block,
            "",
            vec![AstNode::new(
                Kind::Call,
                "",
                vec![AstNode::leaf(Kind::Identifier, "a")],
            )],
        );
        let kinds: Vec<_> = preorder_nodes(&root).iter().map(|n| n.kind).collect();
        assert_eq!(kinds, vec![Kind::Block, Kind::Call, Kind::Identifier]);
        assert_eq!(preorder_nodes(&root)[2].label, "a");
    }

    #[test]
    fn preorder_length_is_size() {
        let root = AstNode::new(
            Kind::Block,
            "",
            vec![call("f", vec![AstNode::leaf(Kind::Identifier, "x")]), call("g", vec![])],
        );
        assert_eq!(preorder_nodes(&root).len(), root.size());
        assert_eq!(root.size(), 8);
    }

    #[test]
    fn fresh_clone_keeps_structure_changes_ids() {
        let t = call("f", vec![AstNode::leaf(Kind::IntLiteral, "1")]);
        let c = t.deep_clone_fresh();
        assert_eq!(t, c);
        let mut ids = Vec::new();
        t.walk(&mut |n| ids.push(n.id));
        c.walk(&mut |n| assert!(!ids.contains(&n.id)));
    }

    #[test]
    fn lca_and_paths() {
        let root = AstNode::new(
            Kind::Block,
            "",
            vec![call("f", vec![AstNode::leaf(Kind::Identifier, "x")]), call("g", vec![])],
        );
        let idx = ParentIndex::build(&root);
        let x = root.children[0].children[1].children[0].id;
        let g = root.children[1].id;
        assert_eq!(idx.lca(&[x, g]), Some(root.id));
        assert_eq!(idx.lca(&[x]), Some(x));
        assert_eq!(idx.path(x), vec![0, 1, 0]);
    }
}
