mod common;

use ares::creation::{create_pattern, RuleSet};
use ares::diff::change_distance;
use ares::ordering::{build_distance_matrix, next_closest, select_initial_pair};
use ares::pattern::with_holes;

// Each fixture statement is `slotX(xXV);`, so the distance between two
// originals is the number of slots whose variant differs.
fn variants(src: &str) -> Vec<String> {
    src.lines()
        .filter_map(|l| l.trim().strip_prefix("slot"))
        .map(|l| l.split(['(', ')']).nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn matrix_matches_slot_hamming_distance() {
    let ex = common::group("distance_matrix");
    let m = build_distance_matrix(&ex).unwrap();
    for i in 0..ex.len() {
        for j in 0..ex.len() {
            let (a, b) = (variants(&ex[i].original.source_text), variants(&ex[j].original.source_text));
            let hamming = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            assert_eq!(m.get(i, j), hamming, "({i}, {j})");
        }
    }
}

#[test]
fn matrix_values_and_initial_pair() {
    let ex = common::group("distance_matrix");
    let m = build_distance_matrix(&ex).unwrap();
    let expected = [[0, 4, 5, 6], [4, 0, 2, 2], [5, 2, 0, 2], [6, 2, 2, 0]];
    for (i, row) in expected.iter().enumerate() {
        assert_eq!(&m.cells[i][..], &row[..]);
    }
    let sums: Vec<usize> = (0..4).map(|j| m.column_sum(j)).collect();
    assert_eq!(sums, [15, 8, 9, 10]);
    assert_eq!(select_initial_pair(&m).unwrap(), (1, 2));
}

#[test]
fn next_closest_agrees_with_recomputed_distances() {
    let ex = common::group("distance_matrix");
    let p = create_pattern(&ex[1], &ex[2], &RuleSet::default()).unwrap().pattern;
    let (po, pm) = (with_holes(&p.original), with_holes(&p.modified));
    let remaining = [0, 3];
    let best = remaining
        .iter()
        .map(|&i| (change_distance(&po, &pm, &ex[i].original.root, &ex[i].modified.root), i))
        .min()
        .unwrap()
        .1;
    assert_eq!(next_closest(&p, &remaining, &ex), Some(best));
    assert_eq!(next_closest(&p, &[], &ex), None);
}
