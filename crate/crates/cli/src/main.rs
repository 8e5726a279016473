//! `confluence`: mine closed patterns, list implication bases and check
//! families from the command line.
//!
//! Exit codes: 0 success, 1 validation failure (a witness is printed),
//! 2 unreadable or malformed input.

mod load;

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use confluence::implications::minmax_basis;
use confluence::local::{is_confluence, ConfluenceWitness};
use confluence::miner::{MineEvent, OutputOrder, PruneReason, TraceEvent};
use confluence::oracle::{materialize, verify_all, Status};
use confluence::text::{parse_poset, Vocabulary};
use confluence::{Extent, Miner, MinerConfig, Pattern};

use load::Instance;

const LONG_ABOUT: &str = "\
Closed pattern mining over confluent pattern languages.

Input formats (blank lines and `#` comments are ignored):
  graph        `v <name>` declares a vertex, `e <name1> <name2> [label]` an edge
  family       one pattern per line, item names separated by spaces; `∅` or `{}` is empty
  context      `object: item item ...`
  abstraction  one generator extent per line, `object object ...`
  poset        `id: lower lower ...` listing the elements `id` covers";

#[derive(Parser)]
#[command(name = "confluence", version, about = "Closed pattern mining over confluent pattern languages", long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the (abstract) support-closed patterns of a family.
    Mine(MineArgs),
    /// Print the min-max implication basis, one `p -> q kind` per line.
    Basis(BasisArgs),
    /// Validate a family (subconfluence, strong accessibility) or a poset (confluence).
    Check(CheckArgs),
    /// Brute-force verification of every structural check, as a JSON report.
    Oracle(OracleArgs),
}

#[derive(Args, Clone, Debug)]
pub struct FamilyArgs {
    /// Connected vertex (default) or edge subsets of the graph in FILE.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["explicit", "kgap"])]
    pub graph: Option<PathBuf>,
    /// Use connected edge subsets of the graph; items are edge labels.
    #[arg(long, requires = "graph")]
    pub edge_mode: bool,
    /// Smallest connected vertex set in the family.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub min_size: usize,
    /// An explicit list of patterns.
    #[arg(long, value_name = "FILE", conflicts_with = "kgap")]
    pub explicit: Option<PathBuf>,
    /// Words over positions 1..n whose consecutive chosen positions differ by at most k.
    #[arg(long, value_name = "N,K")]
    pub kgap: Option<String>,
}

#[derive(Args, Clone, Debug)]
#[group(multiple = false)]
pub struct SupportArgs {
    /// Extensional abstraction generated by the extents in FILE.
    #[arg(long, value_name = "FILE")]
    pub abstraction: Option<PathBuf>,
    /// Treat supports smaller than S as empty.
    #[arg(long, value_name = "S")]
    pub min_support: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_name = "FILE")]
    context: PathBuf,
    #[command(flatten)]
    support: SupportArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Sort by intent instead of enumeration order.
    #[arg(long)]
    sorted: bool,
    /// Also list the closed patterns whose abstract support is empty.
    #[arg(long)]
    emit_empty_support: bool,
    /// Expand branches on all cores; output is unchanged.
    #[arg(long)]
    parallel: bool,
    /// Print every enumeration step, including pruned branches.
    #[arg(long, conflicts_with = "sorted")]
    trace: bool,
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_name = "FILE")]
    context: PathBuf,
    #[arg(long, default_value_t = confluence::oracle::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Check that the poset in FILE is a confluence instead.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["graph", "explicit", "kgap"])]
    poset: Option<PathBuf>,
    #[arg(long, default_value_t = confluence::oracle::DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_name = "FILE")]
    context: PathBuf,
    #[command(flatten)]
    support: SupportArgs,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1024)]
    budget: usize,
}

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Invalid(String),
    /// Exit code 2.
    Input(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Mine(a) => mine(a, &mut out),
        Command::Basis(a) => basis(a, &mut out),
        Command::Check(a) => check(a, &mut out),
        Command::Oracle(a) => oracle(a, &mut out),
    };
    let flushed = out.flush();
    match result.and(flushed.map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("confluence: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("confluence: {msg}");
            ExitCode::from(2)
        }
    }
}

fn require_family(f: &FamilyArgs) -> Result<(), CliError> {
    if f.graph.is_none() && f.explicit.is_none() && f.kgap.is_none() {
        return Err(CliError::Input(
            "one of --graph, --explicit or --kgap is required".into(),
        ));
    }
    Ok(())
}

fn names(items: &Vocabulary, p: &Pattern) -> Vec<String> {
    p.iter().map(|i| items.name(i).to_string()).collect()
}

fn object_names(objects: &[String], e: &Extent) -> Vec<String> {
    e.iter().map(|o| objects[o].clone()).collect()
}

/// Pattern in braces, for trace lines: `{a b}`.
fn braced(items: &Vocabulary, p: &Pattern) -> String {
    format!("{{{}}}", names(items, p).join(" "))
}

fn event_json(inst: &Instance, ev: &MineEvent) -> Value {
    let c = &ev.concept;
    json!({
        "v": 1,
        "intent": names(&inst.items, &c.intent),
        "extent": object_names(&inst.objects, &c.extent),
        "anchor_minimal": names(&inst.items, &c.anchor_minimal),
        "empty_support": c.empty_support,
    })
}

fn event_tsv(inst: &Instance, ev: &MineEvent) -> String {
    let c = &ev.concept;
    format!(
        "{}\t{}\t{}\t{}",
        inst.items.format(&c.intent),
        object_names(&inst.objects, &c.extent).join(" "),
        inst.items.format(&c.anchor_minimal),
        c.empty_support
    )
}

fn trace_line(inst: &Instance, ev: &TraceEvent, format: Format) -> String {
    let items = &inst.items;
    match format {
        Format::Tsv => match ev {
            TraceEvent::Root {
                minimal,
                closure,
                pruned_by,
            } => match pruned_by {
                None => format!(
                    "root {} -> {}",
                    braced(items, minimal),
                    braced(items, closure)
                ),
                Some(m) => format!(
                    "root {} -> {} pruned by ELM {}",
                    braced(items, minimal),
                    braced(items, closure),
                    braced(items, m)
                ),
            },
            TraceEvent::Emit(e) => format!(
                "emit {} [{}] from {}",
                braced(items, &e.concept.intent),
                object_names(&inst.objects, &e.concept.extent).join(" "),
                e.parent
                    .map_or_else(|| "-".to_string(), |p| braced(items, &p))
            ),
            TraceEvent::Pruned {
                parent,
                item,
                candidate,
                reason,
            } => format!(
                "prune {} + {} -> {} by {}",
                braced(items, parent),
                items.name(*item),
                braced(items, candidate),
                match reason {
                    PruneReason::Elm(m) => format!("ELM {}", braced(items, m)),
                    PruneReason::El(x) => format!("EL {}", braced(items, x)),
                }
            ),
        },
        Format::Json => {
            let v = match ev {
                TraceEvent::Root {
                    minimal,
                    closure,
                    pruned_by,
                } => json!({
                    "v": 1,
                    "event": "root",
                    "minimal": names(items, minimal),
                    "closure": names(items, closure),
                    "pruned_by": pruned_by.map(|m| names(items, &m)),
                }),
                TraceEvent::Emit(e) => {
                    let mut v = event_json(inst, e);
                    v["event"] = json!("emit");
                    v["parent"] = json!(e.parent.map(|p| names(items, &p)));
                    v
                }
                TraceEvent::Pruned {
                    parent,
                    item,
                    candidate,
                    reason,
                } => {
                    let (list, by) = match reason {
                        PruneReason::Elm(m) => ("ELM", names(items, m)),
                        PruneReason::El(x) => ("EL", names(items, x)),
                    };
                    json!({
                        "v": 1,
                        "event": "prune",
                        "parent": names(items, parent),
                        "item": items.name(*item),
                        "candidate": names(items, candidate),
                        "list": list,
                        "by": by,
                    })
                }
            };
            v.to_string()
        }
    }
}

fn mine(a: MineArgs, out: &mut impl Write) -> Result<(), CliError> {
    require_family(&a.family)?;
    let inst = load::instance(&a.family, &a.context, &a.support)?;
    let config = MinerConfig {
        emit_empty_support: a.emit_empty_support,
        order: if a.sorted {
            OutputOrder::Sorted
        } else {
            OutputOrder::Traversal
        },
        parallel: a.parallel,
        ..MinerConfig::default()
    };
    let miner = Miner::new(&*inst.family, &inst.context, &inst.abstraction, config)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut result = Ok(());
    if a.trace {
        miner.for_each_trace(|ev| {
            if let TraceEvent::Emit(e) = &ev {
                if e.concept.empty_support && !a.emit_empty_support {
                    return;
                }
            }
            if result.is_ok() {
                result = writeln!(out, "{}", trace_line(&inst, &ev, a.format));
            }
        });
        return result.map_err(CliError::from);
    }
    let write = |out: &mut dyn Write, ev: &MineEvent| match a.format {
        Format::Tsv => writeln!(out, "{}", event_tsv(&inst, ev)),
        Format::Json => writeln!(out, "{}", event_json(&inst, ev)),
    };
    if a.sorted {
        for ev in miner.mine() {
            write(out, &ev)?;
        }
    } else {
        miner.for_each(|ev| {
            if result.is_ok() {
                result = write(out, &ev);
            }
        });
    }
    result.map_err(CliError::from)
}

fn basis(a: BasisArgs, out: &mut impl Write) -> Result<(), CliError> {
    require_family(&a.family)?;
    let inst = load::instance(
        &a.family,
        &a.context,
        &SupportArgs {
            abstraction: None,
            min_support: None,
        },
    )?;
    let members =
        materialize(&*inst.family, a.budget).map_err(|e| CliError::Invalid(e.to_string()))?;
    for imp in minmax_basis(&inst.context, &members) {
        match a.format {
            Format::Tsv => writeln!(
                out,
                "{} -> {} {}",
                inst.items.format(&imp.premise),
                inst.items.format(&imp.conclusion),
                imp.kind
            )?,
            Format::Json => writeln!(
                out,
                "{}",
                json!({
                    "v": 1,
                    "premise": names(&inst.items, &imp.premise),
                    "conclusion": names(&inst.items, &imp.conclusion),
                    "kind": imp.kind.to_string(),
                })
            )?,
        }
    }
    Ok(())
}

fn check_poset(path: &Path, out: &mut impl Write) -> Result<(), CliError> {
    let poset = parse_poset(&load::read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let label = |i: usize| poset.labels()[i].clone();
    match is_confluence(&poset) {
        Ok(()) => {
            writeln!(out, "confluence: ok ({} elements)", poset.labels().len())?;
            Ok(())
        }
        Err(ConfluenceWitness::NoTop { minimal }) => Err(CliError::Invalid(format!(
            "not a confluence: the up-set of {} has no greatest element",
            label(minimal)
        ))),
        Err(ConfluenceWitness::NoMeet { minimal, x, y }) => Err(CliError::Invalid(format!(
            "not a confluence: {} and {} have no meet above {}",
            label(x),
            label(y),
            label(minimal)
        ))),
    }
}

fn check(a: CheckArgs, out: &mut impl Write) -> Result<(), CliError> {
    if let Some(path) = &a.poset {
        return check_poset(path, out);
    }
    require_family(&a.family)?;
    let (family, items) = load::family(&a.family)?;
    writeln!(out, "subconfluence: ok")?;
    let members = materialize(&*family, a.budget).map_err(|e| CliError::Invalid(e.to_string()))?;
    let minimals: Vec<String> = family.minimals().iter().map(|m| items.format(m)).collect();
    writeln!(out, "members: {}", members.len())?;
    writeln!(out, "minimals: {}", minimals.join(", "))?;
    match members.is_strongly_accessible() {
        Ok(()) => writeln!(out, "strongly accessible: yes")?,
        Err((lo, hi)) => writeln!(
            out,
            "strongly accessible: no, no augmentation chain from {} to {}",
            braced(&items, &lo),
            braced(&items, &hi)
        )?,
    }
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut impl Write) -> Result<(), CliError> {
    require_family(&a.family)?;
    let inst = load::instance(&a.family, &a.context, &a.support)?;
    if inst.objects.len() > 16 {
        return Err(CliError::Invalid(format!(
            "the oracle handles at most 16 objects, got {}",
            inst.objects.len()
        )));
    }
    let report = verify_all(
        &inst.context,
        &*inst.family,
        &inst.abstraction,
        a.seed,
        a.budget,
    )
    .map_err(|e| CliError::Invalid(e.to_string()))?;
    let verdicts: Vec<Value> = report
        .verdicts
        .iter()
        .map(|v| {
            json!({
                "check": v.check,
                "status": match v.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped => "skipped",
                },
                "detail": v.detail,
            })
        })
        .collect();
    let concepts: Vec<Value> = report
        .concepts
        .iter()
        .map(|(intent, extent)| {
            json!({
                "intent": names(&inst.items, intent),
                "extent": extent.iter().map(|&o| inst.objects[o].clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "v": 1,
        "seed": report.seed,
        "family_size": report.family_size,
        "passed": report.passed(),
        "concepts": concepts,
        "verdicts": verdicts,
    });
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&doc).expect("json values serialize")
    )?;
    match report.first_counterexample() {
        None => Ok(()),
        Some(v) => Err(CliError::Invalid(format!(
            "check `{}` failed: {}",
            v.check, v.detail
        ))),
    }
}
