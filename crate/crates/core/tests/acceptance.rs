//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use confluence::galois::{abstract_support_closure, support_closure};
use confluence::implications::{minmax_basis, Implication, ImplicationKind};
use confluence::miner::{PruneReason, TraceEvent};
use confluence::oracle::suites::{lattice_degeneration, run_suite, SUITES};
use confluence::oracle::{oracle_closure, random, ListedAbstraction, OracleError};
use confluence::order::pattern_label;
use confluence::setsys::SetsysError;
use confluence::{
    ConnectedEdgeFamily, ConnectedVertexFamily, ExplicitFamily, ExtensionalAbstraction, GraphSpec,
    Miner, MinerConfig, ObjectContext, Pattern,
};

/// Instances per randomized suite.
const SUITE_INSTANCES: u64 = 1000;
/// Random contexts for the lattice degeneration check.
const DEGENERATION_CONTEXTS: u64 = 200;
const SQUARE_LIMIT: Duration = Duration::from_secs(1);
const PERF_LIMIT: Duration = Duration::from_secs(10);

fn pat(s: &str) -> Pattern {
    Pattern::from_items(s.bytes().map(|b| (b - b'a') as usize))
}

fn word(p: &Pattern) -> String {
    pattern_label(p)
}

/// Objects as `o1 o2 ...`.
fn objects(e: &[usize]) -> String {
    e.iter()
        .map(|o| format!("o{}", o + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn square_context() -> ObjectContext {
    ObjectContext::new(4, ["ab", "abc", "abcd"].map(pat).to_vec()).unwrap()
}

fn square_family() -> ExplicitFamily {
    ExplicitFamily::new(["a", "b", "abc", "abd", "abcd"].map(pat).to_vec(), 4).unwrap()
}

fn accessible() -> (ObjectContext, ExplicitFamily) {
    let ctx = ObjectContext::new(5, ["abde", "abcd", "acd"].map(pat).to_vec()).unwrap();
    let fam = ExplicitFamily::new(
        ["ab", "ac", "abc", "abd", "acd", "abcd"].map(pat).to_vec(),
        5,
    )
    .unwrap();
    (ctx, fam)
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

/// 4-cycle 1-2-3-4 with edges a=12, b=34, c=23, d=41.
fn criterion_1() -> Outcome {
    let graph = GraphSpec::new(
        ["1", "2", "3", "4"].map(String::from).to_vec(),
        vec![(0, 1), (2, 3), (1, 2), (3, 0)],
        ["a", "b", "c", "d"].map(String::from).to_vec(),
    )
    .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let fam = ConnectedEdgeFamily::new(&graph).map_err(|e| e.to_string())?;
    let ctx = square_context();
    let abs = ExtensionalAbstraction::Identity;
    let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String)> = miner
        .mine()
        .iter()
        .map(|e| (word(&e.concept.intent), objects(&e.concept.extent.to_vec())))
        .collect();
    let elapsed = start.elapsed();
    let expected: BTreeSet<(String, String)> = [
        ("a", "o1 o2 o3"),
        ("b", "o1 o2 o3"),
        ("abc", "o2 o3"),
        ("abcd", "o3"),
    ]
    .iter()
    .map(|(i, e)| (i.to_string(), e.to_string()))
    .collect();
    check(
        got == expected && elapsed < SQUARE_LIMIT,
        format!("{got:?} in {elapsed:?}"),
        format!("got {got:?} in {elapsed:?}, expected {expected:?} under {SQUARE_LIMIT:?}"),
    )
}

fn criterion_2() -> Outcome {
    let ctx = square_context();
    let fam = square_family();
    let got = ["a", "b", "abc", "abd", "abcd"]
        .map(|t| {
            support_closure(&ctx, &fam, &pat(t))
                .map(|p| word(&p))
                .map_err(|e| e.to_string())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let expected = ["a", "b", "abc", "abcd", "abcd"];
    check(
        got == expected,
        format!("{got:?}"),
        format!("got {got:?}, expected {expected:?}"),
    )
}

fn criterion_3() -> Outcome {
    let ctx = square_context();
    let fam = square_family();
    let abs = ExtensionalAbstraction::generators(3, vec![vec![0, 1], vec![0, 2]])
        .map_err(|e| e.to_string())?;
    let got = ["a", "b", "abc", "abd", "abcd"]
        .map(|t| {
            abstract_support_closure(&ctx, &fam, &abs, &pat(t))
                .map(|p| word(&p))
                .map_err(|e| e.to_string())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let expected = ["a", "b", "abcd", "abcd", "abcd"];
    check(
        got == expected,
        format!("{got:?}"),
        format!("got {got:?}, expected {expected:?}"),
    )
}

fn render(ev: &TraceEvent) -> String {
    match ev {
        TraceEvent::Root {
            minimal,
            closure,
            pruned_by,
        } => match pruned_by {
            None => format!("root {} -> {}", word(minimal), word(closure)),
            Some(m) => format!(
                "root {} -> {} pruned by ELM {}",
                word(minimal),
                word(closure),
                word(m)
            ),
        },
        TraceEvent::Emit(e) => format!(
            "emit {} [{}] from {}",
            word(&e.concept.intent),
            objects(&e.concept.extent.to_vec()),
            e.parent.as_ref().map_or("-".to_string(), word)
        ),
        TraceEvent::Pruned {
            parent,
            item,
            candidate,
            reason,
        } => {
            let why = match reason {
                PruneReason::Elm(m) => format!("ELM {}", word(m)),
                PruneReason::El(items) => format!("EL {}", word(items)),
            };
            format!(
                "prune {} + {} -> {} by {why}",
                word(parent),
                word(&Pattern::singleton(*item)),
                word(candidate)
            )
        }
    }
}

const ACCESSIBLE_GOLDEN: &[&str] = &[
    "root ab -> abd",
    "emit abd [o1 o2] from -",
    "emit abcd [o2] from abd",
    "root ac -> acd",
    "emit acd [o2 o3] from -",
    "prune acd + b -> abcd by ELM ab",
];

fn criterion_4() -> Outcome {
    let (ctx, fam) = accessible();
    let abs = ExtensionalAbstraction::Identity;
    let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).map_err(|e| e.to_string())?;
    let trace: Vec<String> = miner.trace().iter().map(render).collect();
    let emitted: Vec<String> = miner
        .mine()
        .iter()
        .map(|e| word(&e.concept.intent))
        .collect();
    let unique: BTreeSet<&String> = emitted.iter().collect();
    let expected: BTreeSet<String> = ["abd", "abcd", "acd"]
        .map(String::from)
        .into_iter()
        .collect();
    check(
        trace == ACCESSIBLE_GOLDEN
            && unique.len() == emitted.len()
            && unique.into_iter().cloned().collect::<BTreeSet<_>>() == expected,
        format!(
            "emitted {emitted:?}; trace matches golden ({} events)",
            trace.len()
        ),
        format!("emitted {emitted:?}; trace {trace:#?}"),
    )
}

fn criterion_5() -> Outcome {
    let ctx = square_context();
    let fam = square_family();
    let basis = minmax_basis(&ctx, &fam);
    let show = |kind: ImplicationKind| -> Vec<String> {
        basis
            .iter()
            .filter(|i| i.kind == kind)
            .map(|i: &Implication| format!("{}->{}", word(&i.premise), word(&i.conclusion)))
            .collect()
    };
    let internal = show(ImplicationKind::Internal);
    let external = show(ImplicationKind::External);
    let want_internal = vec!["abc->abcd".to_string()];
    let want_external = vec!["a->b".to_string(), "b->a".to_string()];
    check(
        internal == want_internal && external == want_external,
        format!("B_i={internal:?}, B_e={external:?}"),
        format!(
            "B_i={internal:?}, B_e={external:?}; expected B_i={want_internal:?}, B_e={want_external:?} \
             (abc is alone in its support class {{o2,o3}}, so no implication has premise abc; \
             the class {{abd, abcd}} with support {{o3}} yields abd->abcd)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let members = vec![Pattern::empty(), pat("ab"), pat("ac")];
    let rejected = ExplicitFamily::new(members.clone(), 4);
    let witness_ok = matches!(
        &rejected,
        Err(SetsysError::NotSubconfluence { t, x, y })
            if t.is_empty() && *x == pat("ab") && *y == pat("ac")
    );
    let ctx = ObjectContext::new(4, vec![pat("abcd")]).map_err(|e| e.to_string())?;
    let id = ListedAbstraction::new(&ExtensionalAbstraction::Identity, 1);
    let oracle = oracle_closure(&ctx, &members, &id, &Pattern::empty());
    let oracle_ok = oracle
        == Err(OracleError::NonUniqueMaximum {
            t: Pattern::empty(),
            maxima: vec![pat("ab"), pat("ac")],
        });
    check(
        witness_ok && oracle_ok,
        format!(
            "rejected with {:?}; oracle: {:?}",
            rejected.as_ref().err(),
            oracle.as_ref().err()
        ),
        format!("constructor {rejected:?}; oracle {oracle:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (i, (name, suite)) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let failures = run_suite(*suite, SUITE_INSTANCES, 7_000_000 * (i as u64 + 1));
        lines.push(format!(
            "{name}: {} instances, {} failures, {:?}",
            SUITE_INSTANCES,
            failures.len(),
            start.elapsed()
        ));
        if let Some((seed, why)) = failures.first() {
            failed.push(format!("{name}: seed {seed}: {why}"));
        }
    }
    check(failed.is_empty(), lines.join("; "), failed.join("; "))
}

fn criterion_8() -> Outcome {
    let failures = run_suite(lattice_degeneration, DEGENERATION_CONTEXTS, 80_000_000);
    check(
        failures.is_empty(),
        format!("{DEGENERATION_CONTEXTS} random contexts, mined closed sets equal classical closed itemsets"),
        format!("{} failures, first {:?}", failures.len(), failures.first()),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = random::rng(9);
    let graph = random::connected_graph(&mut rng, 20, 30);
    let ctx = random::contexts_of_size(&mut rng, 20, 50, 0.5);
    let fam = ConnectedVertexFamily::new(&graph, 1).map_err(|e| e.to_string())?;
    let abs = ExtensionalAbstraction::Identity;
    let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut seen = HashSet::new();
    let mut duplicates = 0usize;
    miner.for_each(|ev| {
        if !seen.insert(ev.concept.intent) {
            duplicates += 1;
        }
    });
    let elapsed = start.elapsed();
    check(
        elapsed < PERF_LIMIT && duplicates == 0,
        format!(
            "{} closed patterns in {elapsed:?}, no duplicates",
            seen.len()
        ),
        format!(
            "{} closed patterns, {duplicates} duplicates, {elapsed:?} (limit {PERF_LIMIT:?})",
            seen.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("square graph connected-edge mining", criterion_1),
        ("support closures of the square family", criterion_2),
        (
            "abstract support closures of the square family",
            criterion_3,
        ),
        ("enumeration trace golden with ELM pruning", criterion_4),
        ("min-max basis of the square family", criterion_5),
        ("{∅,ab,ac} rejected, closure of ∅ undefined", criterion_6),
        ("randomized property suites", criterion_7),
        ("lattice degeneration to closed itemsets", criterion_8),
        ("20-vertex 30-edge graph, 50 objects", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
