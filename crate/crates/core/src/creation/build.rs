//! Generalizes two aligned code regions into the original and modified
//! parts of a pattern.
//!
//! Side 1 is the first example (or the new example when refining), side 2
//! the second example (or the current pattern). The pattern text is built
//! from side 2, so placeholders carry side-2 lexemes.

use std::collections::{BTreeMap, HashMap};

use super::adjust::{decl_replaced, is_member_name, RuleSet, Tree};
use crate::ast::{AstNode, Kind, NodeId};
use crate::diff::{lis_positions, EditScript};
use crate::pattern::{is_anchorable, occurrence_of};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Original,
    Modified,
}

/// A wildcard of the original part before naming.
#[derive(Debug, Clone)]
pub(crate) struct WildcardInfo {
    pub temp: String,
    pub stmt: bool,
    pub g1: Vec<AstNode>,
    pub g2: Vec<AstNode>,
    /// Name kept from the pattern being refined.
    pub reuse: Option<String>,
}

struct ExprHole {
    b: AstNode,
    a: Vec<AstNode>,
}

pub(crate) struct Builder<'a> {
    pub rules: RuleSet,
    /// Side-2 identifier to side-1 identifier.
    pub renames: BTreeMap<String, String>,
    inverse: HashMap<String, String>,
    pub o2: Tree<'a>,
    pub m2: Tree<'a>,
    pub d1: &'a EditScript,
    pub d2: &'a EditScript,
    pub ao: EditScript,
    pub am: EditScript,
    pub wildcards: Vec<WildcardInfo>,
    /// Expression marker id to the anchored node id.
    pub pending: Vec<(NodeId, NodeId)>,
    /// Cases of the choices of the pattern being refined, by hole label.
    pub old_choices: HashMap<String, Vec<Vec<AstNode>>>,
    /// Number of examples already represented on side 2.
    pub n_old: usize,
    /// When refining, side 1 is the newest example and its case goes last.
    pub refining: bool,
    pub failure: Option<String>,
}

struct Snapshot {
    wildcards: usize,
    pending: usize,
    failure: Option<String>,
}

pub(crate) const CHOICE_HOLE: &str = "#choice";

fn same_list(a: &[AstNode], b: &[AstNode]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_structure(y))
}

fn has_hole(n: &AstNode) -> bool {
    let mut found = false;
    n.walk(&mut |x| found |= x.kind == Kind::Hole);
    found
}

/// Longest common subsequence of index pairs under `eq`.
fn lcs(n: usize, m: usize, eq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut t = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            t[i][j] = if eq(i, j) { t[i + 1][j + 1] + 1 } else { t[i + 1][j].max(t[i][j + 1]) };
        }
    }
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < n && j < m {
        if eq(i, j) && t[i][j] == t[i + 1][j + 1] + 1 {
            out.push((i, j));
            i += 1;
            j += 1;
        } else if t[i + 1][j] >= t[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

impl<'a> Builder<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rules: RuleSet,
        renames: BTreeMap<String, String>,
        o2: &'a AstNode,
        m2: &'a AstNode,
        d1: &'a EditScript,
        d2: &'a EditScript,
        ao: EditScript,
        am: EditScript,
    ) -> Self {
        let inverse = renames.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
        Self {
            rules,
            renames,
            inverse,
            o2: Tree::new(o2),
            m2: Tree::new(m2),
            d1,
            d2,
            ao,
            am,
            wildcards: Vec::new(),
            pending: Vec::new(),
            old_choices: HashMap::new(),
            n_old: 1,
            refining: false,
            failure: None,
        }
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { wildcards: self.wildcards.len(), pending: self.pending.len(), failure: self.failure.clone() }
    }

    fn restore(&mut self, s: Snapshot) {
        self.wildcards.truncate(s.wildcards);
        self.pending.truncate(s.pending);
        self.failure = s.failure;
    }

    fn label_ok(&self, a: &AstNode, b: &AstNode, mode: Mode) -> bool {
        match b.kind {
            Kind::Identifier => {
                let tree = if mode == Mode::Original { &self.o2 } else { &self.m2 };
                if tree.nodes.contains_key(&b.id) && is_member_name(tree, b.id) {
                    return a.label == b.label;
                }
                match self.renames.get(&b.label) {
                    Some(x) => *x == a.label,
                    None => a.label == b.label,
                }
            }
            Kind::BoolLiteral => a.label == b.label,
            k if k.is_literal() => match mode {
                Mode::Original => true,
                Mode::Modified => {
                    a.label == b.label || (self.d1.mapping.has_target(a.id) && self.d2.mapping.has_target(b.id))
                }
            },
            _ => a.label == b.label,
        }
    }

    /// Generalizes `a` (side 1) and `b` (side 2) into a copy of `b`, or
    /// fails when the difference is not expressible below statement level.
    fn gen(&mut self, a: &AstNode, b: &AstNode, mode: Mode, holes: &mut Vec<ExprHole>) -> Option<AstNode> {
        if a.kind != b.kind || b.kind == Kind::Hole || !self.label_ok(a, b, mode) {
            return None;
        }
        if self.rules.replace_declarations && a.kind == Kind::Decl && decl_replaced(a, b) {
            return None;
        }
        let children = match b.kind {
            Kind::Block => return Some(self.align(&a.children, &b.children, b.id, mode)),
            Kind::ArgList => self.gen_args(a, b, mode, holes)?,
            _ => {
                if a.children.len() != b.children.len() {
                    return None;
                }
                let mut v = Vec::with_capacity(b.children.len());
                for (x, y) in a.children.iter().zip(&b.children) {
                    v.push(self.gen(x, y, mode, holes)?);
                }
                v
            }
        };
        Some(AstNode { kind: b.kind, label: b.label.clone(), children, id: b.id, span: None })
    }

    fn gen_args(&mut self, a: &AstNode, b: &AstNode, mode: Mode, holes: &mut Vec<ExprHole>) -> Option<Vec<AstNode>> {
        let (n, m) = (a.children.len(), b.children.len());
        let mut ok = vec![vec![false; m]; n];
        for (i, x) in a.children.iter().enumerate() {
            for (j, y) in b.children.iter().enumerate() {
                ok[i][j] = self.gen(x, y, mode, &mut Vec::new()).is_some();
            }
        }
        let pairs = lcs(n, m, |i, j| ok[i][j]);
        let mut out = Vec::new();
        let (mut i0, mut j0) = (0, 0);
        let mut bounds = pairs.clone();
        bounds.push((n, m));
        for (k, &(i1, j1)) in bounds.iter().enumerate() {
            let ga = &a.children[i0..i1];
            let gb = &b.children[j0..j1];
            match gb {
                [] if ga.is_empty() => {}
                [single] if is_anchorable(single) || single.kind == Kind::Hole => {
                    holes.push(ExprHole { b: single.clone(), a: ga.to_vec() });
                    out.push(single.clone());
                }
                _ => return None,
            }
            if k < pairs.len() {
                out.push(self.gen(&a.children[i1], &b.children[j1], mode, holes)?);
            }
            i0 = i1 + 1;
            j0 = j1 + 1;
        }
        Some(out)
    }

    /// Generalizes one statement pair and turns its expression holes into
    /// markers. Rolls back on failure.
    fn try_stmt(&mut self, a: &AstNode, b: &AstNode, mode: Mode) -> Option<(AstNode, Vec<AstNode>)> {
        let snap = self.snapshot();
        let mut holes = Vec::new();
        let res = self.gen(a, b, mode, &mut holes).and_then(|n| {
            let markers = self.markers(holes, mode)?;
            Some((n, markers))
        });
        if res.is_none() {
            self.restore(snap);
        }
        res
    }

    fn probe(&mut self, a: &AstNode, b: &AstNode, mode: Mode) -> bool {
        let snap = self.snapshot();
        let ok = self.try_stmt(a, b, mode).is_some();
        self.restore(snap);
        ok
    }

    fn new_temp(&self) -> String {
        format!("#t{}", self.wildcards.len())
    }

    fn markers(&mut self, holes: Vec<ExprHole>, mode: Mode) -> Option<Vec<AstNode>> {
        let mut out = Vec::new();
        for h in holes {
            let (kind, name) = match mode {
                Mode::Original => {
                    let temp = self.new_temp();
                    let reuse = (h.b.kind == Kind::Hole).then(|| h.b.label.clone());
                    self.wildcards.push(WildcardInfo {
                        temp: temp.clone(),
                        stmt: false,
                        g1: h.a.clone(),
                        g2: vec![h.b.clone()],
                        reuse,
                    });
                    (Kind::WildcardExpr, temp)
                }
                Mode::Modified => {
                    let w = self.resolve_expr(&h)?;
                    (Kind::UseExpr, self.wildcards[w].temp.clone())
                }
            };
            let marker = AstNode::leaf(kind, name);
            self.pending.push((marker.id, h.b.id));
            out.push(marker);
        }
        Some(out)
    }

    fn resolve_expr(&self, h: &ExprHole) -> Option<usize> {
        self.wildcards.iter().position(|w| {
            if w.stmt || w.g2.len() != 1 || !w.g2[0].same_structure(&h.b) || !same_list(&w.g1, &h.a) {
                return false;
            }
            let holes = h.b.kind == Kind::Hole && w.g2[0].kind == Kind::Hole;
            holes || self.d2.mapping.has_target(h.b.id)
        })
    }

    /// Aligns two statement lists. Mapped and generalizable pairs become
    /// concrete statements; everything in between becomes an annotation.
    pub fn align(&mut self, a: &[AstNode], b: &[AstNode], out_id: NodeId, mode: Mode) -> AstNode {
        let map = if mode == Mode::Original { &self.ao.mapping } else { &self.am.mapping };
        let cands: Vec<(usize, usize)> = b
            .iter()
            .enumerate()
            .filter_map(|(j, y)| {
                let s = map.source_of(y.id)?;
                let i = a.iter().position(|x| x.id == s)?;
                Some((i, j))
            })
            .collect();
        let keys: Vec<usize> = cands.iter().map(|c| c.0).collect();
        let mut anchors: Vec<(usize, usize, AstNode, Vec<AstNode>)> = Vec::new();
        for p in lis_positions(&keys) {
            let (i, j) = cands[p];
            if let Some((n, mk)) = self.try_stmt(&a[i], &b[j], mode) {
                anchors.push((i, j, n, mk));
            }
        }
        // Recover further pairs inside the gaps.
        let mut all = Vec::new();
        let (mut i0, mut j0) = (0, 0);
        let mut rest = anchors.into_iter().peekable();
        loop {
            let (i1, j1) = rest.peek().map(|x| (x.0, x.1)).unwrap_or((a.len(), b.len()));
            let (ga, gb) = (&a[i0..i1], &b[j0..j1]);
            let mut ok = vec![vec![false; gb.len()]; ga.len()];
            for (x, sa) in ga.iter().enumerate() {
                for (y, sb) in gb.iter().enumerate() {
                    ok[x][y] = self.probe(sa, sb, mode);
                }
            }
            for (x, y) in lcs(ga.len(), gb.len(), |x, y| ok[x][y]) {
                if let Some((n, mk)) = self.try_stmt(&ga[x], &gb[y], mode) {
                    all.push((i0 + x, j0 + y, n, mk));
                }
            }
            match rest.next() {
                Some(anchor) => {
                    i0 = anchor.0 + 1;
                    j0 = anchor.1 + 1;
                    all.push(anchor);
                }
                None => break,
            }
        }
        all.sort_by_key(|x| x.1);
        let mut out = Vec::new();
        let (mut i0, mut j0) = (0, 0);
        for (i, j, n, mk) in all {
            self.gap(&a[i0..i], &b[j0..j], mode, &mut out);
            out.extend(mk);
            out.push(n);
            i0 = i + 1;
            j0 = j + 1;
        }
        self.gap(&a[i0..], &b[j0..], mode, &mut out);
        AstNode { kind: Kind::Block, label: String::new(), children: out, id: out_id, span: None }
    }

    fn gap(&mut self, a: &[AstNode], b: &[AstNode], mode: Mode, out: &mut Vec<AstNode>) {
        if a.is_empty() && b.is_empty() {
            return;
        }
        match mode {
            Mode::Original => {
                let reuse = match b {
                    [h] if h.kind == Kind::Hole && h.children.is_empty() && !h.label.starts_with(CHOICE_HOLE) => {
                        Some(h.label.clone())
                    }
                    _ => None,
                };
                let temp = self.new_temp();
                self.wildcards.push(WildcardInfo {
                    temp: temp.clone(),
                    stmt: true,
                    g1: a.to_vec(),
                    g2: b.to_vec(),
                    reuse,
                });
                out.push(AstNode::leaf(Kind::WildcardStmt, temp));
            }
            Mode::Modified => self.use_gap(a, b, out),
        }
    }

    /// Position of `content` as a run inside `list` whose first statement
    /// was carried over from an identical statement of the original.
    fn find_run(&self, list: &[AstNode], content: &[AstNode], side2: bool) -> Option<Option<usize>> {
        if content.is_empty() {
            return Some(None);
        }
        let d = if side2 { self.d2 } else { self.d1 };
        (0..list.len().saturating_sub(content.len() - 1))
            .find(|&i| {
                same_list(&list[i..i + content.len()], content)
                    && (list[i].kind == Kind::Hole || d.mapping.has_target(list[i].id))
            })
            .map(Some)
    }

    fn use_gap(&mut self, a: &[AstNode], b: &[AstNode], out: &mut Vec<AstNode>) {
        // (wildcard, side-1 run start, side-2 run start)
        let mut found: Vec<(usize, Option<usize>, Option<usize>)> = Vec::new();
        for (k, w) in self.wildcards.iter().enumerate() {
            if !w.stmt {
                continue;
            }
            let (Some(p1), Some(p2)) = (self.find_run(a, &w.g1, false), self.find_run(b, &w.g2, true)) else {
                continue;
            };
            if p1.is_some() || p2.is_some() {
                found.push((k, p1, p2));
            }
        }
        found.sort_by_key(|&(k, p1, p2)| (p2.or(p1), k));
        let (mut c1, mut c2) = (0usize, 0usize);
        let mut chosen = Vec::new();
        for (k, p1, p2) in found {
            let w = &self.wildcards[k];
            let s1 = p1.unwrap_or(c1);
            let s2 = p2.unwrap_or(c2);
            if s1 < c1 || s2 < c2 {
                continue;
            }
            chosen.push((k, s1, s2));
            c1 = s1 + w.g1.len();
            c2 = s2 + w.g2.len();
        }
        let (mut c1, mut c2) = (0usize, 0usize);
        for (k, s1, s2) in chosen {
            self.leftovers(&a[c1..s1], &b[c2..s2], out);
            let w = &self.wildcards[k];
            out.push(AstNode::leaf(Kind::Use, w.temp.clone()));
            c1 = s1 + w.g1.len();
            c2 = s2 + w.g2.len();
        }
        self.leftovers(&a[c1..], &b[c2..], out);
    }

    fn leftovers(&mut self, a: &[AstNode], b: &[AstNode], out: &mut Vec<AstNode>) {
        if a.is_empty() && b.is_empty() {
            return;
        }
        if a.len() == b.len() {
            let snap = self.snapshot();
            let mut built = Vec::new();
            let mut ok = true;
            for (x, y) in a.iter().zip(b) {
                match self.try_stmt(x, y, Mode::Modified) {
                    Some((n, mk)) => {
                        built.extend(mk);
                        built.push(n);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.extend(built);
                return;
            }
            self.restore(snap);
        }
        if let Some(c) = self.choice(a, b) {
            out.push(c);
        }
    }

    /// Renames side-1 identifiers to their side-2 placeholders.
    pub fn rename_side1(&self, stmts: &[AstNode]) -> Vec<AstNode> {
        stmts
            .iter()
            .map(|s| {
                let mut s = s.detached();
                s.walk_mut(&mut |n| {
                    if n.kind == Kind::Identifier {
                        if let Some(p) = self.inverse.get(&n.label) {
                            n.label = p.clone();
                        }
                    }
                });
                s
            })
            .collect()
    }

    /// Side-2 content once per represented example, with old choices
    /// expanded to their respective case.
    fn expand_side2(&mut self, b: &[AstNode]) -> Option<Vec<Vec<AstNode>>> {
        let mut cases = Vec::new();
        for i in 0..self.n_old {
            let mut case = Vec::new();
            for s in b {
                if s.kind == Kind::Hole && s.label.starts_with(CHOICE_HOLE) {
                    let old = self.old_choices.get(&s.label)?;
                    if let Some(c) = old.get(i) {
                        case.extend(c.iter().map(AstNode::detached));
                    }
                } else if has_hole(s) {
                    return None;
                } else {
                    case.push(s.detached());
                }
            }
            cases.push(case);
        }
        Some(cases)
    }

    /// A choice whose cases hold each example's code at this spot.
    pub fn choice(&mut self, a: &[AstNode], b: &[AstNode]) -> Option<AstNode> {
        let Some(old) = self.expand_side2(b) else {
            self.failure = Some("a use of the refined pattern would end up inside a choice".into());
            return None;
        };
        let new = self.rename_side1(a);
        let mut cases = Vec::new();
        if self.refining {
            cases.extend(old);
            cases.push(new);
        } else {
            cases.push(new);
            cases.extend(old);
        }
        let cases = cases.into_iter().map(|c| AstNode::new(Kind::Case, "", c)).collect();
        Some(AstNode::new(Kind::Choice, "", cases))
    }
}

/// Replaces expression holes by their expression and fills in the
/// lexeme and occurrence of every expression marker.
pub(crate) fn finalize_markers(block: &mut AstNode, pending: &HashMap<NodeId, NodeId>) {
    for c in block.children.iter_mut() {
        if !matches!(c.kind, Kind::WildcardExpr | Kind::UseExpr | Kind::Choice) {
            finalize_nested(c, pending);
        }
    }
    let mut unwrapped: HashMap<NodeId, NodeId> = HashMap::new();
    let n = block.children.len();
    let mut i = 0;
    while i < n {
        if !matches!(block.children[i].kind, Kind::WildcardExpr | Kind::UseExpr) {
            i += 1;
            continue;
        }
        let j = (i..n)
            .find(|&j| !matches!(block.children[j].kind, Kind::WildcardExpr | Kind::UseExpr))
            .unwrap_or(n);
        if j < n {
            unwrap_holes(&mut block.children[j], &mut unwrapped);
        }
        for k in i..j {
            let marker = block.children[k].id;
            let Some(&target) = pending.get(&marker) else { continue };
            let target = unwrapped.get(&target).copied().unwrap_or(target);
            let anchor = (j < n)
                .then(|| {
                    let stmt = &block.children[j];
                    stmt.find(target).and_then(|t| occurrence_of(stmt, t))
                })
                .flatten();
            if let Some((lexeme, occ)) = anchor {
                block.children[k].children = vec![
                    AstNode::leaf(Kind::Anchor, lexeme),
                    AstNode::leaf(Kind::IntLiteral, occ.to_string()),
                ];
            }
        }
        i = j;
    }
}

fn finalize_nested(n: &mut AstNode, pending: &HashMap<NodeId, NodeId>) {
    for c in n.children.iter_mut() {
        if c.kind == Kind::Block {
            finalize_markers(c, pending);
        } else {
            finalize_nested(c, pending);
        }
    }
}

fn unwrap_holes(n: &mut AstNode, map: &mut HashMap<NodeId, NodeId>) {
    for c in n.children.iter_mut() {
        if c.kind == Kind::Block {
            continue;
        }
        if c.kind == Kind::Hole && c.children.len() == 1 {
            let inner = c.children.pop().unwrap();
            map.insert(c.id, inner.id);
            *c = inner;
        }
        unwrap_holes(c, map);
    }
}
