//! Ordering of change examples by edit distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ast::MethodBody;
use crate::diff::change_distance;
use crate::error::OrderingError;
use crate::pattern::{with_holes, Pattern};

#[derive(Debug, Clone)]
pub struct ChangeExample {
    pub id: String,
    pub original: MethodBody,
    pub modified: MethodBody,
}

impl ChangeExample {
    pub fn new(id: impl Into<String>, original: MethodBody, modified: MethodBody) -> Self {
        Self { id: id.into(), original, modified }
    }
}

/// Symmetric matrix of change distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    pub cells: Vec<Vec<usize>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }

    pub fn column_sum(&self, j: usize) -> usize {
        self.cells.iter().map(|row| row[j]).sum()
    }
}

/// Computes all pairwise distances. Each unordered pair is diffed once.
pub fn build_distance_matrix(examples: &[ChangeExample]) -> Result<DistanceMatrix, OrderingError> {
    let n = examples.len();
    if n < 2 {
        return Err(OrderingError::TooFewExamples(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values: Vec<usize> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&examples[i], &examples[j]);
            change_distance(&a.original.root, &a.modified.root, &b.original.root, &b.modified.root)
        })
        .collect();
    let mut cells = vec![vec![0; n]; n];
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        cells[i][j] = v;
        cells[j][i] = v;
    }
    Ok(DistanceMatrix { ids: examples.iter().map(|e| e.id.clone()).collect(), cells })
}

/// Indices of the two examples with the lowest column sums, ties broken
/// by the lower index.
pub fn select_initial_pair(m: &DistanceMatrix) -> Result<(usize, usize), OrderingError> {
    if m.len() < 2 {
        return Err(OrderingError::TooFewExamples(m.len()));
    }
    let mut idx: Vec<usize> = (0..m.len()).collect();
    idx.sort_by_key(|&j| (m.column_sum(j), j));
    Ok((idx[0], idx[1]))
}

/// The remaining example closest to the pattern viewed as a change.
/// Ties go to the lowest index. Returns `None` for an empty candidate list.
pub fn next_closest(p: &Pattern, remaining: &[usize], examples: &[ChangeExample]) -> Option<usize> {
    let po = with_holes(&p.original);
    let pm = with_holes(&p.modified);
    let dists: Vec<(usize, usize)> = remaining
        .par_iter()
        .map(|&i| {
            let e = &examples[i];
            (change_distance(&po, &pm, &e.original.root, &e.modified.root), i)
        })
        .collect();
    dists.into_iter().min().map(|(_, i)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn ex(id: &str, o: &str, m: &str) -> ChangeExample {
        ChangeExample::new(id, parse(o).unwrap(), parse(m).unwrap())
    }

    #[test]
    fn too_few() {
        let one = vec![ex("a", "{ a(); }", "{ b(); }")];
        assert!(matches!(build_distance_matrix(&one), Err(OrderingError::TooFewExamples(1))));
    }

    #[test]
    fn symmetric_with_zero_diagonal() {
        let exs = vec![
            ex("a", "{ a(); }", "{ b(); }"),
            ex("b", "{ a(); c(); }", "{ b(); c(); }"),
            ex("c", "{ x = 1; }", "{ x = 2; }"),
        ];
        let m = build_distance_matrix(&exs).unwrap();
        for i in 0..3 {
            assert_eq!(m.get(i, i), 0);
            for j in 0..3 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        assert!(m.get(0, 1) < m.get(0, 2));
    }

    #[test]
    fn identical_examples_tie_to_lower_index() {
        let exs = vec![
            ex("a", "{ a(); }", "{ b(); }"),
            ex("b", "{ a(); }", "{ b(); }"),
            ex("c", "{ a(); }", "{ b(); }"),
        ];
        let m = build_distance_matrix(&exs).unwrap();
        assert_eq!(select_initial_pair(&m).unwrap(), (0, 1));
    }
}
