//! Random inputs shared by the property tests and the acceptance run.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

pub const VOCAB: [&str; 3] = ["a();", "b();", "c(x, y);"];

#[derive(Clone, Debug)]
pub enum P {
    Lit(usize),
    Wild,
}

/// Does `pat` match `body` starting exactly at `i`, wildcards taking any
/// number of whole statements?
fn aligns(pat: &[P], body: &[usize], i: usize) -> bool {
    match pat.first() {
        None => true,
        Some(P::Lit(s)) => i < body.len() && body[i] == *s && aligns(&pat[1..], body, i + 1),
        Some(P::Wild) => (i..=body.len()).any(|j| aligns(&pat[1..], body, j)),
    }
}

pub fn oracle(pat: &[P], body: &[usize]) -> bool {
    (0..body.len()).any(|i| aligns(pat, body, i))
}

pub fn random_pattern(rng: &mut StdRng) -> Vec<P> {
    let lits = rng.gen_range(2..=4);
    let wilds = rng.gen_range(0..=2);
    let mut out: Vec<P> = (0..lits).map(|_| P::Lit(rng.gen_range(0..VOCAB.len()))).collect();
    for _ in 0..wilds {
        let at = rng.gen_range(1..out.len());
        out.insert(at, P::Wild);
    }
    out
}

pub fn pattern_text(pat: &[P]) -> String {
    let mut s = String::from("//# match {\n");
    let mut n = 0;
    for p in pat {
        match p {
            P::Lit(i) => s.push_str(VOCAB[*i]),
            P::Wild => {
                s.push_str(&format!("//# wildcard stmt A{n};"));
                n += 1;
            }
        }
        s.push('\n');
    }
    s.push_str("//# } modified {\n//# }\n");
    s
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c", "x"]).prop_map(String::from),
        (0..3u8).prop_map(|n| n.to_string()),
        Just("true".to_string()),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("{l} + {r}")),
            (prop::sample::select(vec!["f", "g", "o.h"]), prop::collection::vec(inner, 0..3))
                .prop_map(|(n, args)| format!("{n}({})", args.join(", "))),
        ]
    })
}

fn stmt() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        (prop::sample::select(vec!["f", "g", "run"]), prop::collection::vec(expr(), 0..2))
            .prop_map(|(n, a)| format!("{n}({});", a.join(", "))),
        (prop::sample::select(vec!["a", "b"]), expr()).prop_map(|(v, e)| format!("{v} = {e};")),
        (prop::sample::select(vec!["i", "j"]), expr()).prop_map(|(v, e)| format!("int {v} = {e};")),
        Just("i++;".to_string()),
    ];
    simple.prop_recursive(2, 12, 3, |inner| {
        prop_oneof![
            (expr(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(c, b)| format!("if ({c}) {{ {} }}", b.join(" "))),
            (expr(), prop::collection::vec(inner, 0..3))
                .prop_map(|(c, b)| format!("while ({c}) {{ {} }}", b.join(" "))),
        ]
    })
}

pub fn body() -> impl Strategy<Value = String> {
    prop::collection::vec(stmt(), 0..6).prop_map(|s| format!("{{ {} }}", s.join(" ")))
}
