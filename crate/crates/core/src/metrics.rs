//! Accuracy, precision and recall of recommendations against ground truth.

use serde::{Deserialize, Serialize};

use crate::ast::{MethodBody, Span};
use crate::lexer::tokenize;

/// Edit distance with unit costs for insert, delete and substitute.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn accuracy(ld: usize, a: usize, b: usize) -> f64 {
    let max = a.max(b);
    if max == 0 {
        return 100.0;
    }
    100.0 * (1.0 - ld as f64 / max as f64)
}

/// Token level accuracy in percent. Comments and layout are ignored.
pub fn token_accuracy(rec: &MethodBody, truth: &MethodBody) -> f64 {
    let r = tokenize(rec);
    let t = tokenize(truth);
    accuracy(levenshtein(&r.tokens, &t.tokens), r.len(), t.len())
}

/// Character level accuracy in percent, comments and whitespace included.
pub fn char_accuracy(rec: &str, truth: &str) -> f64 {
    let r: Vec<char> = rec.chars().collect();
    let t: Vec<char> = truth.chars().collect();
    accuracy(levenshtein(&r, &t), r.len(), t.len())
}

/// A method in a codebase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Location {
    pub file: String,
    pub span: Option<Span>,
}

/// A recommendation reduced to what evaluation needs.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub location: Location,
    pub variants: Vec<MethodBody>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationAccuracy {
    pub location: Location,
    pub token: Range,
    pub char: Range,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEvaluation {
    pub recommended: usize,
    pub correct: usize,
    pub m: usize,
    pub precision: f64,
    pub recall: f64,
    /// Set when there were no recommendations, precision is then reported as 0.
    pub empty: bool,
    pub locations: Vec<LocationAccuracy>,
    /// Means over correct recommendations, `None` when none is correct.
    pub token: Option<Range>,
    pub char: Option<Range>,
}

fn range(values: impl Iterator<Item = f64>) -> Option<Range> {
    values.fold(None, |acc, v| match acc {
        None => Some(Range { min: v, max: v }),
        Some(r) => Some(Range { min: r.min.min(v), max: r.max.max(v) }),
    })
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Scores recommendations against the `m` expected locations and their
/// modified bodies. A recommendation is correct when its location is one
/// of the truth locations.
pub fn evaluate_group(recs: &[Candidate], truth: &[(Location, MethodBody)], m: usize) -> GroupEvaluation {
    let mut locations: Vec<LocationAccuracy> = recs
        .iter()
        .filter_map(|c| {
            let (_, body) = truth.iter().find(|(l, _)| *l == c.location)?;
            let token = range(c.variants.iter().map(|v| token_accuracy(v, body)))?;
            let char = range(c.variants.iter().map(|v| char_accuracy(&v.source_text, &body.source_text)))?;
            Some(LocationAccuracy { location: c.location.clone(), token, char })
        })
        .collect();
    locations.sort_by(|a, b| a.location.cmp(&b.location));
    let correct = recs.iter().filter(|c| truth.iter().any(|(l, _)| *l == c.location)).count();
    let mean = |f: &dyn Fn(&LocationAccuracy) -> Range| {
        if locations.is_empty() {
            return None;
        }
        let n = locations.len() as f64;
        let (lo, hi) = locations.iter().map(f).fold((0.0, 0.0), |(a, b), r| (a + r.min, b + r.max));
        Some(Range { min: lo / n, max: hi / n })
    };
    GroupEvaluation {
        recommended: recs.len(),
        correct,
        m,
        precision: percent(correct, recs.len()),
        recall: percent(correct, m),
        empty: recs.is_empty(),
        token: mean(&|l| l.token),
        char: mean(&|l| l.char),
        locations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn naive(a: &[u8], b: &[u8]) -> usize {
        match (a.split_first(), b.split_first()) {
            (None, _) => b.len(),
            (_, None) => a.len(),
            (Some((x, ra)), Some((y, rb))) => {
                let sub = naive(ra, rb) + usize::from(x != y);
                sub.min(naive(ra, b) + 1).min(naive(a, rb) + 1)
            }
        }
    }

    #[test]
    fn levenshtein_matches_recursion() {
        assert_eq!(levenshtein(b"kitten", b"sitting"), naive(b"kitten", b"sitting"));
        assert_eq!(levenshtein(b"kitten", b"sitting"), 3);
        assert_eq!(levenshtein(b"", b"abc"), 3);
        assert_eq!(levenshtein(b"abc", b"abc"), 0);
    }

    #[test]
    fn comments_do_not_affect_token_accuracy() {
        let a = parse("{ a(); b(); }").unwrap();
        let b = parse("{\n  // note\n  a();\n  b(); /* x */\n}").unwrap();
        assert_eq!(token_accuracy(&a, &b), 100.0);
        assert!(char_accuracy(&a.source_text, &b.source_text) < 100.0);
    }

    #[test]
    fn empty_group_is_flagged() {
        let e = evaluate_group(&[], &[], 3);
        assert!(e.empty);
        assert_eq!((e.precision, e.recall), (0.0, 0.0));
        assert!(e.token.is_none());
    }
}
