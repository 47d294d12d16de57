#![allow(dead_code)]

pub mod gen;

use std::fs;
use std::path::PathBuf;

use ares::ordering::ChangeExample;
use ares::{parse, MethodBody};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn body(rel: &str) -> MethodBody {
    let text = fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    parse(&text).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Examples `<id>.orig.java` / `<id>.mod.java` of a group, sorted by id.
pub fn group(name: &str) -> Vec<ChangeExample> {
    let dir = fixtures().join(name);
    let mut ids: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| {
            let n = e.unwrap().file_name().into_string().unwrap();
            n.strip_suffix(".orig.java").map(String::from)
        })
        .collect();
    ids.sort();
    ids.iter()
        .map(|id| {
            ChangeExample::new(
                id.clone(),
                body(&format!("{name}/{id}.orig.java")),
                body(&format!("{name}/{id}.mod.java")),
            )
        })
        .collect()
}

pub fn example(name: &str, id: &str) -> ChangeExample {
    group(name).into_iter().find(|e| e.id == id).unwrap()
}
