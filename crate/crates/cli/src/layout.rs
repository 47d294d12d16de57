//! On-disk layouts: example sets, codebases, recommendation trees and truth.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ares::metrics::{Candidate, Location};
use ares::ordering::ChangeExample;
use ares::recommend::Recommendation;
use ares::{parse, MethodBody, Span};
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

pub const SCHEMA_VERSION: u32 = 1;

pub fn read_body(path: &Path) -> Result<MethodBody> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Examples stored as `<id>/before.java` and `<id>/after.java`, sorted by id.
pub fn load_examples(dir: &Path) -> Result<Vec<ChangeExample>> {
    let mut ids: Vec<String> = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let entry = entry?;
        if entry.path().join("before.java").is_file() {
            ids.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    ids.sort();
    ids.iter()
        .map(|id| {
            let d = dir.join(id);
            Ok(ChangeExample::new(id.clone(), read_body(&d.join("before.java"))?, read_body(&d.join("after.java"))?))
        })
        .collect()
}

/// Every `.java` file below `dir`, one method body per file, keyed by its
/// slash-separated path relative to `dir`.
pub fn load_codebase(dir: &Path) -> Result<Vec<(String, MethodBody)>> {
    if !dir.is_dir() {
        bail!("codebase directory {} does not exist", dir.display());
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry?;
        let path = entry.path();
        if entry.file_type().is_file() && path.extension().is_some_and(|e| e == "java") {
            let rel = path.strip_prefix(dir)?;
            let key = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            files.push((key, read_body(path)?));
        }
    }
    Ok(files)
}

/// Directory name for a method: its byte span, `<start>-<end>`.
pub fn method_dir(span: Option<Span>) -> String {
    match span {
        Some(s) => format!("{}-{}", s.start, s.end),
        None => "body".into(),
    }
}

fn parse_method_dir(name: &str) -> Option<Span> {
    let base = name.split('.').next()?;
    let (a, b) = base.split_once('-')?;
    Some(Span::new(a.parse().ok()?, b.parse().ok()?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub file: String,
    pub method: String,
    pub method_span: Option<Span>,
    pub bindings: std::collections::BTreeMap<String, String>,
    pub variant_count: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub schema_version: u32,
    pub recommendations: Vec<ManifestEntry>,
}

/// Writes `out/<file>/<method>/variant-<n>.java` for every recommendation
/// and the manifest. Several recommendations in one method get `.1`, `.2`
/// suffixes on the method directory.
pub fn write_recommendations(out: &Path, recs: &[Recommendation], max_variants: Option<usize>) -> Result<Manifest> {
    fs::create_dir_all(out)?;
    let mut entries: Vec<ManifestEntry> = Vec::new();
    for r in recs {
        let base = method_dir(r.method_span);
        let taken = entries.iter().filter(|e| e.file == r.file && e.method_span == r.method_span).count();
        let method = if taken == 0 { base } else { format!("{base}.{taken}") };
        let dir = out.join(&r.file).join(&method);
        fs::create_dir_all(&dir)?;
        let n = max_variants.map_or(r.variants.len(), |m| m.min(r.variants.len()));
        for (i, v) in r.variants.iter().take(n).enumerate() {
            fs::write(dir.join(format!("variant-{}.java", i + 1)), &v.source_text)?;
        }
        let s = r.summary();
        entries.push(ManifestEntry {
            file: s.file,
            method,
            method_span: s.method_span,
            bindings: s.bindings,
            variant_count: n,
            warnings: s.warnings,
        });
    }
    let manifest = Manifest { schema_version: SCHEMA_VERSION, recommendations: entries };
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Reads a recommendation tree back as evaluation candidates.
pub fn load_candidates(recs: &Path) -> Result<Vec<Candidate>> {
    let manifest: Manifest = read_json(&recs.join("manifest.json"))?;
    manifest
        .recommendations
        .iter()
        .map(|e| {
            let dir = recs.join(&e.file).join(&e.method);
            let variants = (1..=e.variant_count)
                .map(|i| read_body(&dir.join(format!("variant-{i}.java"))))
                .collect::<Result<_>>()?;
            Ok(Candidate { location: Location { file: e.file.clone(), span: e.method_span }, variants })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruthLocation {
    pub file: String,
    pub method: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TruthIndex {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub locations: Vec<TruthLocation>,
}

/// Ground truth: `locations.json` plus `<file>/<method>/after.java` for
/// each listed location. Method directories use the `<start>-<end>` form.
pub fn load_truth(dir: &Path) -> Result<Vec<(Location, MethodBody)>> {
    let index: TruthIndex = read_json(&dir.join("locations.json"))?;
    index
        .locations
        .iter()
        .map(|l| {
            let span = parse_method_dir(&l.method)
                .with_context(|| format!("method directory '{}' is not of the form <start>-<end>", l.method))?;
            let body = read_body(&dir.join(&l.file).join(&l.method).join("after.java"))?;
            Ok((Location { file: l.file.clone(), span: Some(span) }, body))
        })
        .collect()
}
