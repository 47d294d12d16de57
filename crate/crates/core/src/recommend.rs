//! Recommendations: applies the change described by a pattern to a code
//! location that matches it.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ast::{AstNode, Kind, MethodBody, NodeId, ParentIndex, Span};
use crate::diff::{apply_script, diff, EditOp, EditScript};
use crate::error::RecommendError;
use crate::parser::parse;
use crate::pattern::{anchor_of, find_anchor, replace_node, Pattern};
use crate::printer::print_statement;
use crate::search::{search_body, MatchResult};

const CHOICE_SLOT: &str = "#choice";

#[derive(Debug, Clone)]
pub struct Recommendation {
    pub file: String,
    pub method_span: Option<Span>,
    /// One body per choice variant, or a single body without choices.
    pub variants: Vec<MethodBody>,
    pub source_match: MatchResult,
    pub warnings: Vec<String>,
}

/// Manifest entry describing a recommendation without its bodies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecommendationSummary {
    pub file: String,
    pub method_span: Option<Span>,
    pub bindings: BTreeMap<String, String>,
    pub variant_count: usize,
    pub warnings: Vec<String>,
}

impl Recommendation {
    pub fn summary(&self) -> RecommendationSummary {
        RecommendationSummary {
            file: self.file.clone(),
            method_span: self.method_span,
            bindings: self.source_match.bindings.clone(),
            variant_count: self.variants.len(),
            warnings: self.warnings.clone(),
        }
    }
}

/// A pattern with annotations pinned to named slots and the script from
/// its original to its modified part, computed once.
#[derive(Debug, Clone)]
pub struct PreparedPattern {
    pub original: AstNode,
    pub modified: AstNode,
    pub script: EditScript,
    /// Cases of each choice, indexed by the number in its slot label.
    pub choices: Vec<Vec<Vec<AstNode>>>,
}

/// Replaces annotations by slot leaves. Expression annotations put the
/// slot where the anchored expression was. Ids of other nodes are kept.
fn resolve(block: &AstNode, choices: &mut Vec<Vec<Vec<AstNode>>>) -> AstNode {
    let mut out = block.clone();
    resolve_in(&mut out, choices);
    out
}

fn resolve_in(n: &mut AstNode, choices: &mut Vec<Vec<Vec<AstNode>>>) {
    let mut i = 0;
    while i < n.children.len() {
        let c = &n.children[i];
        match c.kind {
            Kind::WildcardStmt | Kind::Use => {
                let id = c.id;
                let mut slot = AstNode::leaf(Kind::Slot, c.label.clone());
                slot.id = id;
                n.children[i] = slot;
            }
            Kind::Choice => {
                let label = format!("{CHOICE_SLOT}{}", choices.len());
                choices.push(c.children.iter().map(|case| case.children.clone()).collect());
                n.children[i] = AstNode::leaf(Kind::Slot, label);
            }
            Kind::WildcardExpr | Kind::UseExpr => {
                let name = c.label.clone();
                let anchor = anchor_of(c);
                n.children.remove(i);
                let next = n.children[i..]
                    .iter()
                    .position(|s| !matches!(s.kind, Kind::WildcardExpr | Kind::UseExpr))
                    .map(|k| k + i);
                if let (Some((lexeme, occ)), Some(j)) = (anchor, next) {
                    if let Some(t) = find_anchor(&n.children[j], &lexeme, occ).map(|a| a.id) {
                        replace_node(&mut n.children[j], t, |_| AstNode::leaf(Kind::Slot, name));
                    }
                }
                continue;
            }
            _ => resolve_in(&mut n.children[i], choices),
        }
        i += 1;
    }
}

impl PreparedPattern {
    pub fn new(p: &Pattern) -> Self {
        let mut unused = Vec::new();
        let original = resolve(&p.original, &mut unused);
        let mut choices = Vec::new();
        let modified = resolve(&p.modified, &mut choices);
        let script = diff(&original, &modified);
        Self { original, modified, script, choices }
    }

    /// Largest number of cases over all choices.
    pub fn max_cases(&self) -> usize {
        self.choices.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Builds the recommendation for one match of `p` in `location`.
pub fn create_recommendation(
    p: &Pattern,
    m: &MatchResult,
    location: &MethodBody,
) -> Result<Recommendation, RecommendError> {
    recommend_prepared(&PreparedPattern::new(p), m, location, "")
}

struct Substitution<'a> {
    bindings: &'a BTreeMap<String, String>,
    constants: &'a BTreeMap<String, String>,
}

impl Substitution<'_> {
    fn apply(&self, n: &mut AstNode) {
        if n.kind == Kind::Identifier {
            if let Some(v) = self.bindings.get(&n.label) {
                n.label = v.clone();
            }
        } else if n.kind.is_literal() && n.kind != Kind::BoolLiteral {
            if let Some(v) = self.constants.get(&n.label) {
                n.label = v.clone();
            }
        }
    }

    fn apply_all(&self, n: &mut AstNode) {
        n.walk_mut(&mut |x| self.apply(x));
    }
}

pub fn recommend_prepared(
    prep: &PreparedPattern,
    m: &MatchResult,
    location: &MethodBody,
    file: &str,
) -> Result<Recommendation, RecommendError> {
    let code = &location.root;
    let mut nodes: HashMap<NodeId, &AstNode> = HashMap::new();
    code.walk(&mut |n| {
        nodes.insert(n.id, n);
    });
    let inconsistent = |msg: String| RecommendError::InconsistentMatch(msg);

    // Copy of the pattern original carrying the location's labels.
    let mut aligned = prep.original.clone();
    let root_id = aligned.id;
    let mut missing = None;
    aligned.walk_mut(&mut |n| {
        if n.id == root_id || n.kind == Kind::Slot {
            return;
        }
        match m.code_for(n.id).and_then(|c| nodes.get(&c)) {
            Some(c) if c.kind == n.kind => n.label = c.label.clone(),
            _ => missing = Some(n.id),
        }
    });
    if let Some(id) = missing {
        return Err(inconsistent(format!("pattern node {id} has no counterpart")));
    }
    let carried: HashSet<NodeId> = {
        let mut s = HashSet::new();
        aligned.walk(&mut |n| {
            s.insert(n.id);
        });
        s
    };
    let updated: HashSet<NodeId> = prep
        .script
        .ops
        .iter()
        .filter_map(|op| match op {
            EditOp::Update { node, .. } => Some(*node),
            _ => None,
        })
        .collect();
    let mut result = apply_script(&aligned, &prep.script)?;
    let subst = Substitution { bindings: &m.bindings, constants: &m.constants };
    result.walk_mut(&mut |n| {
        if !carried.contains(&n.id) || updated.contains(&n.id) {
            subst.apply(n);
        }
    });

    // Code captured by each wildcard, as top-level subtrees.
    let pi = ParentIndex::build(code);
    let mut captures: HashMap<String, Vec<AstNode>> = HashMap::new();
    let mut by_name: BTreeMap<String, HashSet<NodeId>> = BTreeMap::new();
    for (c, r) in &m.matches {
        if let crate::search::PatternRef::Wildcard(w) = r {
            by_name.entry(w.clone()).or_default().insert(*c);
        }
    }
    for (w, set) in &by_name {
        let tops: Vec<AstNode> = m
            .wildcard_nodes(w)
            .into_iter()
            .filter(|id| pi.parent(*id).is_none_or(|p| !set.contains(&p)))
            .map(|id| nodes[&id].clone())
            .collect();
        captures.insert(w.clone(), tops);
    }
    let mut warnings = Vec::new();
    splice(&mut result, &captures, &mut warnings)?;

    // Window of the location replaced by the result.
    let start_parent = pi.parent(m.start).ok_or_else(|| inconsistent("match starts at the root".into()))?;
    let block = nodes[&start_parent];
    let covered = m.code_nodes();
    let first = block.children.iter().position(|c| c.id == m.start).unwrap();
    let last = block
        .children
        .iter()
        .rposition(|c| covered.contains(&c.id))
        .unwrap_or(first)
        .max(first);
    let span = |i: usize| block.children[i].span.ok_or_else(|| inconsistent("location has no source spans".into()));
    let (from, to) = (span(first)?.start, span(last)?.end);

    let mut variants = Vec::new();
    for tree in expand_choices(&result, &prep.choices, &subst) {
        let text = render(&location.source_text, from, to, &tree.children);
        variants.push(parse(&text)?);
    }
    Ok(Recommendation {
        file: file.to_string(),
        method_span: code.span,
        variants,
        source_match: m.clone(),
        warnings,
    })
}

fn splice(
    n: &mut AstNode,
    captures: &HashMap<String, Vec<AstNode>>,
    warnings: &mut Vec<String>,
) -> Result<(), RecommendError> {
    let list = matches!(n.kind, Kind::Block | Kind::ArgList);
    let mut out = Vec::with_capacity(n.children.len());
    for mut c in std::mem::take(&mut n.children) {
        if c.kind == Kind::Slot && !c.label.starts_with(CHOICE_SLOT) {
            let code = captures.get(&c.label).cloned().unwrap_or_default();
            if list {
                if code.is_empty() {
                    warnings.push(format!("use {} splices no code", c.label));
                }
                out.extend(code);
            } else if code.len() == 1 {
                out.push(code.into_iter().next().unwrap());
            } else {
                return Err(RecommendError::InconsistentMatch(format!(
                    "expression use {} needs exactly one captured expression",
                    c.label
                )));
            }
            continue;
        }
        splice(&mut c, captures, warnings)?;
        out.push(c);
    }
    n.children = out;
    Ok(())
}

/// Builds max+1 variants: variant n holds case n of every choice that has
/// one; the last variant holds no choice code. Without choices there is a
/// single variant.
pub fn expand_choices(tree: &AstNode, choices: &[Vec<Vec<AstNode>>], subst: &impl ChoiceSubst) -> Vec<AstNode> {
    let max = choices.iter().map(Vec::len).max().unwrap_or(0);
    if choices.is_empty() {
        return vec![tree.clone()];
    }
    (0..=max)
        .map(|v| {
            let mut t = tree.clone();
            fill(&mut t, choices, v, subst);
            t
        })
        .collect()
}

/// Adapts choice code to the location.
pub trait ChoiceSubst {
    fn adapt(&self, n: &mut AstNode);
}

impl ChoiceSubst for Substitution<'_> {
    fn adapt(&self, n: &mut AstNode) {
        self.apply_all(n);
    }
}

/// Leaves choice code unchanged.
pub struct Verbatim;

impl ChoiceSubst for Verbatim {
    fn adapt(&self, _: &mut AstNode) {}
}

fn fill(n: &mut AstNode, choices: &[Vec<Vec<AstNode>>], v: usize, subst: &impl ChoiceSubst) {
    let mut out = Vec::with_capacity(n.children.len());
    for mut c in std::mem::take(&mut n.children) {
        if c.kind == Kind::Slot {
            if let Some(i) = c.label.strip_prefix(CHOICE_SLOT).and_then(|d| d.parse::<usize>().ok()) {
                if let Some(case) = choices.get(i).and_then(|cs| cs.get(v)) {
                    for s in case {
                        let mut s = s.detached();
                        subst.adapt(&mut s);
                        out.push(s);
                    }
                }
                continue;
            }
        }
        fill(&mut c, choices, v, subst);
        out.push(c);
    }
    n.children = out;
}

/// Replaces `text[from..to]` by the statements, indented like the first
/// replaced statement.
fn render(text: &str, from: usize, to: usize, stmts: &[AstNode]) -> String {
    let line_start = text[..from].rfind('\n').map_or(0, |i| i + 1);
    let indent: String = text[line_start..from].chars().take_while(|c| c.is_whitespace()).collect();
    let sep = format!("\n{indent}");
    let printed: Vec<String> = stmts.iter().map(|s| print_statement(s, 0).replace('\n', &sep)).collect();
    format!("{}{}{}", &text[..from], printed.join(&sep), &text[to..])
}

/// Searches every body and builds recommendations for all matches, in
/// parallel and in a deterministic order.
pub fn recommend_codebase(p: &Pattern, files: &[(String, MethodBody)]) -> Vec<Result<Recommendation, RecommendError>> {
    let prep = PreparedPattern::new(p);
    let per_file: Vec<Vec<Result<Recommendation, RecommendError>>> = files
        .par_iter()
        .map(|(name, body)| {
            search_body(p, body)
                .iter()
                .map(|m| recommend_prepared(&prep, m, body, name))
                .collect()
        })
        .collect();
    per_file.into_iter().flatten().collect()
}
