mod common;

use ares::creation::{learn, RuleSet};
use ares::recommend::create_recommendation;
use ares::search::search_body;
use ares::tokenize;

/// Applies the pattern learned from a group to each training original and
/// reports the examples whose modified body no variant reproduces.
fn failures(group: &str) -> Result<Vec<String>, String> {
    let ex = common::group(&format!("groups/{group}"));
    let learned = learn(&ex, ex.len(), &RuleSet::default()).map_err(|e| e.to_string())?;
    let p = learned.pattern;
    let mut bad = Vec::new();
    for e in &ex {
        let want = tokenize(&e.modified);
        let hit = search_body(&p, &e.original).iter().any(|m| {
            create_recommendation(&p, m, &e.original)
                .map(|r| r.variants.iter().any(|v| tokenize(v) == want))
                .unwrap_or(false)
        });
        if !hit {
            bad.push(e.id.clone());
        }
    }
    Ok(bad)
}

#[test]
fn every_group_reproduces_its_training_changes() {
    let mut names: Vec<String> = std::fs::read_dir(common::fixtures().join("groups"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 10);
    let mut problems = Vec::new();
    for g in &names {
        match failures(g) {
            Ok(bad) if bad.is_empty() => {}
            Ok(bad) => problems.push(format!("{g}: {bad:?}")),
            Err(e) => problems.push(format!("{g}: {e}")),
        }
    }
    assert!(problems.is_empty(), "{problems:#?}");
}
