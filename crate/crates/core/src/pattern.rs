//! Generalized patterns: an annotated original part, an annotated modified
//! part and the identifiers whose names are not fixed.
//!
//! Annotations are ordinary tree nodes with annotation kinds:
//!
//! * `WildcardStmt` (label = name), a leaf at a statement position.
//! * `WildcardExpr` / `UseExpr` (label = name), children are an `Anchor`
//!   holding the lexeme and an `IntLiteral` holding the 1-based occurrence.
//! * `Use` (label = name, empty for a nameless use).
//! * `Choice` with `Case` children, each holding statements.

use std::collections::HashSet;

use crate::ast::{AstNode, Kind};
use crate::error::PatternError;
use crate::parser::Parser;
use crate::printer::{print_expr, print_statement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    /// Block whose children are the statements of the original part.
    pub original: AstNode,
    /// Block whose children are the statements of the modified part.
    pub modified: AstNode,
    /// Placeholder identifiers, e.g. `k`.
    pub match_identifiers: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnotationKind {
    WildcardStmt,
    WildcardExpr,
    Use,
    UseExpr,
    Choice,
}

/// Flat description of one annotation, for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub kind: AnnotationKind,
    pub name: String,
    /// Lexeme and 1-based occurrence for expression annotations.
    pub anchor: Option<(String, usize)>,
    /// Statements of each case, for choices.
    pub cases: Vec<Vec<AstNode>>,
}

pub fn anchor_of(n: &AstNode) -> Option<(String, usize)> {
    if !matches!(n.kind, Kind::WildcardExpr | Kind::UseExpr) {
        return None;
    }
    let lexeme = n.children.first()?.label.clone();
    let occ = n.children.get(1)?.label.parse().ok()?;
    Some((lexeme, occ))
}

fn collect(root: &AstNode, out: &mut Vec<Annotation>) {
    for c in &root.children {
        let kind = match c.kind {
            Kind::WildcardStmt => Some(AnnotationKind::WildcardStmt),
            Kind::WildcardExpr => Some(AnnotationKind::WildcardExpr),
            Kind::Use => Some(AnnotationKind::Use),
            Kind::UseExpr => Some(AnnotationKind::UseExpr),
            Kind::Choice => Some(AnnotationKind::Choice),
            _ => None,
        };
        match kind {
            Some(kind) => out.push(Annotation {
                kind,
                name: c.label.clone(),
                anchor: anchor_of(c),
                cases: c.children.iter().filter(|k| k.kind == Kind::Case).map(|k| k.children.clone()).collect(),
            }),
            None => collect(c, out),
        }
    }
}

impl Pattern {
    pub fn new(original: AstNode, modified: AstNode, match_identifiers: Vec<String>) -> Self {
        Pattern {
            original,
            modified,
            match_identifiers,
        }
    }

    /// Annotations of the original part in preorder.
    pub fn original_annotations(&self) -> Vec<Annotation> {
        let mut out = Vec::new();
        collect(&self.original, &mut out);
        out
    }

    /// Annotations of the modified part in preorder.
    pub fn modified_annotations(&self) -> Vec<Annotation> {
        let mut out = Vec::new();
        collect(&self.modified, &mut out);
        out
    }

    pub fn choices(&self) -> Vec<Annotation> {
        self.modified_annotations()
            .into_iter()
            .filter(|a| a.kind == AnnotationKind::Choice)
            .collect()
    }

    pub fn annotation_count(&self) -> usize {
        self.original_annotations().len() + self.modified_annotations().len()
    }

    /// Wildcard names of the original part in order of appearance.
    pub fn wildcard_names(&self) -> Vec<String> {
        self.original_annotations()
            .into_iter()
            .filter(|a| matches!(a.kind, AnnotationKind::WildcardStmt | AnnotationKind::WildcardExpr))
            .map(|a| a.name)
            .collect()
    }

    pub fn validate(&self) -> Result<(), PatternError> {
        validate(self)
    }
}

pub fn validate(p: &Pattern) -> Result<(), PatternError> {
    let mut names = HashSet::new();
    for n in p.wildcard_names() {
        if !names.insert(n.clone()) {
            return Err(PatternError::DuplicateName(n));
        }
    }
    for a in p.modified_annotations() {
        if matches!(a.kind, AnnotationKind::Use | AnnotationKind::UseExpr)
            && !a.name.is_empty()
            && !names.contains(&a.name)
        {
            return Err(PatternError::UnboundUse(a.name));
        }
    }
    let stmts = &p.original.children;
    if stmts.first().is_some_and(|s| s.kind == Kind::WildcardStmt)
        || stmts.last().is_some_and(|s| s.kind == Kind::WildcardStmt)
    {
        return Err(PatternError::BoundaryWildcard);
    }
    check_anchors(&p.original)?;
    check_anchors(&p.modified)?;
    Ok(())
}

fn check_anchors(block: &AstNode) -> Result<(), PatternError> {
    let kids = &block.children;
    for (i, c) in kids.iter().enumerate() {
        if let Some((lexeme, occ)) = anchor_of(c) {
            let next = kids[i + 1..].iter().find(|s| !matches!(s.kind, Kind::WildcardExpr | Kind::UseExpr));
            let found = next.is_some_and(|s| find_anchor(s, &lexeme, occ).is_some());
            if !found {
                return Err(PatternError::MissingAnchor {
                    lexeme,
                    occurrence: occ,
                });
            }
        } else if !matches!(c.kind, Kind::Choice) {
            check_anchors(c)?;
        }
    }
    Ok(())
}

/// Finds the `occurrence`-th (1-based) expression inside `stmt` whose
/// printed form equals `lexeme`, counting left to right in preorder.
pub fn find_anchor<'a>(stmt: &'a AstNode, lexeme: &str, occurrence: usize) -> Option<&'a AstNode> {
    let mut seen = 0;
    let mut hit = None;
    fn go<'a>(n: &'a AstNode, lexeme: &str, occ: usize, seen: &mut usize, hit: &mut Option<&'a AstNode>) {
        if hit.is_some() {
            return;
        }
        if is_anchorable(n) && print_expr(n) == lexeme {
            *seen += 1;
            if *seen == occ {
                *hit = Some(n);
                return;
            }
            return;
        }
        for c in &n.children {
            go(c, lexeme, occ, seen, hit);
        }
    }
    go(stmt, lexeme, occurrence, &mut seen, &mut hit);
    hit
}

/// Expression nodes that an expression annotation may refer to.
pub fn is_anchorable(n: &AstNode) -> bool {
    matches!(
        n.kind,
        Kind::Identifier
            | Kind::IntLiteral
            | Kind::BoolLiteral
            | Kind::StringLiteral
            | Kind::NullLiteral
            | Kind::Call
            | Kind::FieldAccess
            | Kind::BinaryExpr
            | Kind::UnaryExpr
            | Kind::PostfixExpr
            | Kind::Paren
    )
}

/// Occurrence number (1-based) of `target` among anchorable nodes of
/// `stmt` that print like it.
pub fn occurrence_of(stmt: &AstNode, target: &AstNode) -> Option<(String, usize)> {
    let lexeme = print_expr(target);
    let mut count = 0;
    let mut result = None;
    fn go(n: &AstNode, target: &AstNode, lexeme: &str, count: &mut usize, result: &mut Option<usize>) {
        if result.is_some() {
            return;
        }
        if is_anchorable(n) && print_expr(n) == lexeme {
            *count += 1;
            if n.id == target.id {
                *result = Some(*count);
            }
            return;
        }
        for c in &n.children {
            go(c, target, lexeme, count, result);
        }
    }
    go(stmt, target, &lexeme, &mut count, &mut result);
    result.map(|o| (lexeme, o))
}

pub fn write_pattern(p: &Pattern) -> String {
    let mut out = String::new();
    if p.match_identifiers.is_empty() {
        out.push_str("//# match {\n");
    } else {
        out.push_str(&format!("//# match (original: {}) {{\n", p.match_identifiers.join(", ")));
    }
    for s in &p.original.children {
        out.push_str(&print_statement(s, 0));
        out.push('\n');
    }
    out.push_str("//# } modified {\n");
    for s in &p.modified.children {
        out.push_str(&print_statement(s, 0));
        out.push('\n');
    }
    out.push_str("//# }\n");
    out
}

pub fn read_pattern(text: &str) -> Result<Pattern, PatternError> {
    let mut p = Parser::new(text, true)?;
    let head = p.bump_directive()?;
    let header = head.lexeme.trim();
    let ids = parse_header(header).ok_or_else(|| {
        PatternError::from(crate::error::SyntaxError::at(
            text,
            head.start,
            "expected '//# match (original: ...) {'",
        ))
    })?;
    let orig = p.statements()?;
    match p.peek_directive() {
        Some(d) if d.replace(' ', "") == "}modified{" => {
            p.bump_directive()?;
        }
        _ => return Err(p.error("expected '//# } modified {'").into()),
    }
    let modi = p.statements()?;
    match p.peek_directive() {
        Some("}") => {
            p.bump_directive()?;
        }
        _ => return Err(p.error("expected '//# }' closing the pattern").into()),
    }
    p.expect_end()?;
    let pattern = Pattern {
        original: AstNode::new(Kind::Block, "", orig),
        modified: AstNode::new(Kind::Block, "", modi),
        match_identifiers: ids,
    };
    validate(&pattern)?;
    Ok(pattern)
}

fn parse_header(h: &str) -> Option<Vec<String>> {
    let rest = h.strip_prefix("match")?.trim();
    let rest = rest.strip_suffix('{')?.trim();
    if rest.is_empty() {
        return Some(Vec::new());
    }
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?.trim();
    let list = inner.strip_prefix("original")?.trim().strip_prefix(':')?;
    Some(
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect(),
    )
}

/// Replaces every annotation with a `Hole` node (label = name) so that the
/// pattern can be diffed like a plain change. Expression annotations keep
/// the anchored expression as the hole's child.
pub fn with_holes(block: &AstNode) -> AstNode {
    let mut out = block.detached();
    holes_in(&mut out);
    out
}

fn holes_in(n: &mut AstNode) {
    let mut i = 0;
    while i < n.children.len() {
        let c = &n.children[i];
        match c.kind {
            Kind::WildcardStmt | Kind::Use => {
                let name = c.label.clone();
                n.children[i] = AstNode::leaf(Kind::Hole, name);
            }
            Kind::Choice => {
                n.children[i] = AstNode::leaf(Kind::Hole, "choice");
            }
            Kind::WildcardExpr | Kind::UseExpr => {
                let name = c.label.clone();
                let anchor = anchor_of(c);
                n.children.remove(i);
                if let (Some((lexeme, occ)), Some(next)) = (anchor, n.children.get_mut(i)) {
                    let target = find_anchor(next, &lexeme, occ).map(|a| a.id);
                    if let Some(t) = target {
                        replace_node(next, t, |old| AstNode::new(Kind::Hole, name.clone(), vec![old]));
                    }
                }
                continue;
            }
            _ => holes_in(&mut n.children[i]),
        }
        i += 1;
    }
}

/// Replaces the node with id `id` inside `root` using `f(old)`.
pub fn replace_node(root: &mut AstNode, id: crate::ast::NodeId, f: impl FnOnce(AstNode) -> AstNode) -> bool {
    fn go(n: &mut AstNode, id: crate::ast::NodeId, f: &mut Option<impl FnOnce(AstNode) -> AstNode>) -> bool {
        for i in 0..n.children.len() {
            if n.children[i].id == id {
                let old = std::mem::replace(&mut n.children[i], AstNode::leaf(Kind::Empty, ""));
                n.children[i] = (f.take().unwrap())(old);
                return true;
            }
            if go(&mut n.children[i], id, f) {
                return true;
            }
        }
        false
    }
    go(root, id, &mut Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP_PATTERN: &str = "//# match (original: k) {
init(verbose);
int k = 0;
while (k < 42) {
    updateValue(k);
    k++;
    //# wildcard stmt A2;
}
//# wildcard stmt A3;
foo.close();
//# } modified {
init(verbose);
for (int k = 0; k < 42; k++) {
    updateValue(k);
}
//# use A2;
//# choice {
//# case {
log(k);
//# }
//# case {
print(k);
//# }
//# }
foo.close();
//# }
";

    #[test]
    fn reads_and_writes() {
        let p = read_pattern(LOOP_PATTERN).unwrap();
        assert_eq!(p.match_identifiers, vec!["k"]);
        assert_eq!(p.wildcard_names(), vec!["A2", "A3"]);
        assert_eq!(p.choices()[0].cases.len(), 2);
        let text = write_pattern(&p);
        assert_eq!(read_pattern(&text).unwrap(), p);
        assert_eq!(write_pattern(&read_pattern(&text).unwrap()), text);
    }

    #[test]
    fn plain_skeleton() {
        let p = read_pattern("//# match {\nf();\n//# } modified {\ng();\n//# }\n").unwrap();
        assert_eq!(p.annotation_count(), 0);
        assert_eq!(write_pattern(&p), "//# match {\nf();\n//# } modified {\ng();\n//# }\n");
    }

    #[test]
    fn expression_wildcard() {
        let src = "//# match {\n//# wildcard expr A1 (verbose, 1);\ninit(verbose);\n//# } modified {\n//# use expr A1 (verbose, 1);\ninit(verbose);\n//# }\n";
        let p = read_pattern(src).unwrap();
        let a = &p.original_annotations()[0];
        assert_eq!(a.anchor, Some(("verbose".to_string(), 1)));
        assert_eq!(write_pattern(&p), src);
    }

    #[test]
    fn rejects_invalid() {
        let unbound = "//# match {\nf();\n//# } modified {\n//# use A9;\n//# }\n";
        assert_eq!(read_pattern(unbound), Err(PatternError::UnboundUse("A9".into())));
        let dup = "//# match {\nf();\n//# wildcard stmt A1;\ng();\n//# wildcard stmt A1;\nh();\n//# } modified {\n//# }\n";
        assert_eq!(read_pattern(dup), Err(PatternError::DuplicateName("A1".into())));
        let lead = "//# match {\n//# wildcard stmt A1;\nf();\n//# } modified {\n//# }\n";
        assert_eq!(read_pattern(lead), Err(PatternError::BoundaryWildcard));
        let anchor = "//# match {\n//# wildcard expr A1 (zz, 1);\nf(x);\n//# } modified {\n//# }\n";
        assert!(matches!(read_pattern(anchor), Err(PatternError::MissingAnchor { .. })));
        assert!(matches!(read_pattern("f();"), Err(PatternError::Syntax { .. })));
        let err = read_pattern("//# match {\nf(;\n//# } modified {\n//# }\n").unwrap_err();
        assert!(matches!(err, PatternError::Syntax { line: 2, .. }));
    }

    #[test]
    fn anchors_count_occurrences() {
        let b = crate::parser::parse("{ f(a, g(a), a.b); }").unwrap().root;
        let stmt = &b.children[0];
        let second = find_anchor(stmt, "a", 2).unwrap();
        assert_eq!(occurrence_of(stmt, second), Some(("a".to_string(), 2)));
        assert!(find_anchor(stmt, "a", 4).is_none());
        assert!(find_anchor(stmt, "g(a)", 1).is_some());
    }

    #[test]
    fn holes_replace_annotations() {
        let p = read_pattern(LOOP_PATTERN).unwrap();
        let h = with_holes(&p.modified);
        let mut holes = Vec::new();
        h.walk(&mut |n| {
            if n.kind == Kind::Hole {
                holes.push(n.label.clone());
            }
        });
        assert_eq!(holes, vec!["A2", "choice"]);
    }
}
