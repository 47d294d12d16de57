//! aresd: learn change patterns from examples and recommend edits.

mod layout;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use ares::creation::{learn, Learned, RuleSet};
use ares::diff::{diff, script_to_json, EditOp};
use ares::metrics::{evaluate_group, GroupEvaluation};
use ares::pattern::{read_pattern, write_pattern, Pattern};
use ares::recommend::{recommend_codebase, Recommendation};
use ares::search::search_codebase;
use ares::{MethodBody, Span};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use layout::{write_json, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "aresd", version, about = "Learn change patterns from examples and recommend edits")]
struct Cli {
    /// Worker threads (default: all cores). ARESD_PARALLELISM overrides it.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct LearnOpts {
    /// Example directory with `<id>/before.java` and `<id>/after.java`.
    #[arg(long)]
    examples: PathBuf,
    /// Examples to use at most (default: all).
    #[arg(long)]
    max_examples: Option<usize>,
    /// Enabled adjustment rules: any of r42, r13, r31, r48, or all / none.
    #[arg(long, default_value = "all")]
    rules: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the edit script between two method bodies.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the order in which examples are generalized, one id per line.
    Order {
        #[command(flatten)]
        learn: LearnOpts,
    },
    /// Learn a pattern and write it in pattern format.
    Learn {
        #[command(flatten)]
        learn: LearnOpts,
        #[arg(long)]
        out: PathBuf,
    },
    /// List pattern matches in a codebase.
    Search {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        codebase: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write recommendations for every match.
    Recommend {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        codebase: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Variants written per recommendation at most (default: all).
        #[arg(long)]
        max_variants: Option<usize>,
    },
    /// Score recommendations against ground truth.
    Evaluate {
        #[arg(long)]
        recs: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Learn, search, recommend and report in one run.
    Pipeline {
        #[command(flatten)]
        learn: LearnOpts,
        #[arg(long)]
        codebase: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional ground truth to evaluate against.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        max_variants: Option<usize>,
    },
}

/// No pattern could be generated from the examples.
#[derive(Debug)]
struct Abort(String);

impl fmt::Display for Abort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no pattern generated: {}", self.0)
    }
}

impl std::error::Error for Abort {}

fn main() -> ExitCode {
    // Usage errors exit with 1 so that 2 stays reserved for aborts.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let threads = std::env::var("ARESD_PARALLELISM").ok().and_then(|v| v.parse().ok()).or(cli.parallelism);
    if let Some(n) = threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Abort>() => {
            eprintln!("aresd: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("aresd: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Diff { a, b, format } => cmd_diff(&a, &b, format),
        Command::Order { learn } => {
            let (examples, learned) = learn_from(&learn)?;
            for i in learned.order {
                println!("{}", examples[i].id);
            }
            Ok(())
        }
        Command::Learn { learn, out } => {
            let (_, learned) = learn_from(&learn)?;
            std::fs::write(&out, write_pattern(&learned.pattern)).with_context(|| format!("writing {}", out.display()))
        }
        Command::Search { pattern, codebase, format } => cmd_search(&pattern, &codebase, format),
        Command::Recommend { pattern, codebase, out, max_variants } => {
            let p = load_pattern(&pattern)?;
            let files = layout::load_codebase(&codebase)?;
            let recs = recommendations(&p, &files);
            let manifest = layout::write_recommendations(&out, &recs, max_variants)?;
            println!("{} recommendations", manifest.recommendations.len());
            Ok(())
        }
        Command::Evaluate { recs, truth, report } => {
            let e = evaluate(&recs, &truth)?;
            write_json(&report, &EvaluationReport { schema_version: SCHEMA_VERSION, evaluation: &e })?;
            println!("P={:.0} R={:.0} ({} of {} recommended, m={})", e.precision, e.recall, e.correct, e.recommended, e.m);
            Ok(())
        }
        Command::Pipeline { learn, codebase, out, truth, max_variants } => {
            cmd_pipeline(&learn, &codebase, &out, truth.as_deref(), max_variants)
        }
    }
}

fn cmd_diff(a: &Path, b: &Path, format: Format) -> Result<()> {
    let (a, b) = (layout::read_body(a)?, layout::read_body(b)?);
    let script = diff(&a.root, &b.root);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&script_to_json(&a.root, &b.root, &script))?),
        Format::Text => {
            for op in &script.ops {
                println!("{}", describe(op));
            }
        }
    }
    Ok(())
}

fn describe(op: &EditOp) -> String {
    match op {
        EditOp::Delete { node } => format!("delete {node}"),
        EditOp::Insert { node, kind, label, parent, index, .. } => {
            let parent = parent.map_or("-".to_string(), |p| p.to_string());
            format!("insert {node} {kind:?} {label:?} into {parent} at {index}")
        }
        EditOp::Move { node, parent, index, .. } => format!("move {node} into {parent} at {index}"),
        EditOp::Update { node, old_label, new_label } => format!("update {node} {old_label:?} -> {new_label:?}"),
    }
}

fn learn_from(opts: &LearnOpts) -> Result<(Vec<ares::ordering::ChangeExample>, Learned)> {
    let rules = RuleSet::parse(&opts.rules).map_err(anyhow::Error::msg)?;
    let examples = layout::load_examples(&opts.examples)?;
    let max = opts.max_examples.unwrap_or(examples.len());
    let learned = learn(&examples, max, &rules).map_err(|e| Abort(e.to_string()))?;
    Ok((examples, learned))
}

fn load_pattern(path: &Path) -> Result<Pattern> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_pattern(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MatchEntry {
    file: String,
    method_span: Option<Span>,
    bindings: std::collections::BTreeMap<String, String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Matches {
    schema_version: u32,
    matches: Vec<MatchEntry>,
}

fn find_matches(p: &Pattern, files: &[(String, MethodBody)]) -> Matches {
    let matches = search_codebase(p, files)
        .into_iter()
        .map(|m| MatchEntry { file: m.file, method_span: m.method_span, bindings: m.result.bindings })
        .collect();
    Matches { schema_version: SCHEMA_VERSION, matches }
}

fn cmd_search(pattern: &Path, codebase: &Path, format: Format) -> Result<()> {
    let p = load_pattern(pattern)?;
    let files = layout::load_codebase(codebase)?;
    let found = find_matches(&p, &files);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&found)?),
        Format::Text => {
            for m in &found.matches {
                let binds: Vec<String> = m.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{} {} {}", m.file, layout::method_dir(m.method_span), binds.join(" "));
            }
        }
    }
    Ok(())
}

/// Recommendations for all matches. Matches that cannot be turned into a
/// recommendation are reported and skipped.
fn recommendations(p: &Pattern, files: &[(String, MethodBody)]) -> Vec<Recommendation> {
    recommend_codebase(p, files)
        .into_iter()
        .filter_map(|r| r.map_err(|e| eprintln!("aresd: skipped match: {e}")).ok())
        .collect()
}

fn evaluate(recs: &Path, truth: &Path) -> Result<GroupEvaluation> {
    let candidates = layout::load_candidates(recs)?;
    let truth = layout::load_truth(truth)?;
    let m = truth.len();
    Ok(evaluate_group(&candidates, &truth, m))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvaluationReport<'a> {
    schema_version: u32,
    evaluation: &'a GroupEvaluation,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PipelineReport {
    schema_version: u32,
    examples: Vec<String>,
    order: Vec<String>,
    skipped: Vec<String>,
    matches: usize,
    recommendations: usize,
    evaluation: Option<GroupEvaluation>,
}

fn cmd_pipeline(
    opts: &LearnOpts,
    codebase: &Path,
    out: &Path,
    truth: Option<&Path>,
    max_variants: Option<usize>,
) -> Result<()> {
    let files = layout::load_codebase(codebase)?;
    let (examples, learned) = learn_from(opts)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("pattern.ares"), write_pattern(&learned.pattern))?;
    let found = find_matches(&learned.pattern, &files);
    write_json(&out.join("matches.json"), &found)?;
    let recs = recommendations(&learned.pattern, &files);
    let rec_dir = out.join("recs");
    let manifest = layout::write_recommendations(&rec_dir, &recs, max_variants)?;
    let evaluation = truth.map(|t| evaluate(&rec_dir, t)).transpose()?;
    let id = |i: &usize| examples[*i].id.clone();
    let report = PipelineReport {
        schema_version: SCHEMA_VERSION,
        examples: examples.iter().map(|e| e.id.clone()).collect(),
        order: learned.order.iter().map(id).collect(),
        skipped: learned.skipped.iter().map(id).collect(),
        matches: found.matches.len(),
        recommendations: manifest.recommendations.len(),
        evaluation,
    };
    write_json(&out.join("report.json"), &report)?;
    println!("{} matches, {} recommendations", report.matches, report.recommendations);
    Ok(())
}
