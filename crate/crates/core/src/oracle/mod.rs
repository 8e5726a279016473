//! Brute-force ground truth.
//!
//! Everything here works from definitions over an explicit member list: the
//! support of a pattern is found by scanning object descriptions, abstract
//! supports by scanning the listed members of the abstraction, and closures
//! by searching for the greatest member with the same abstract support.
//! Nothing is shared with the miner or with [`crate::galois`] closures
//! beyond [`Pattern`] itself, so agreement between the two is evidence.

pub mod random;
pub mod suites;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::galois::{
    abstract_support_closure, support_closure_existence_check, support_closure_via,
    verify_extent_decomposition, ExistenceVerdict, ExtensionalAbstraction, ObjectContext,
};
use crate::local::{ExplicitConfluence, InteriorFamily};
use crate::miner::{Miner, MinerConfig};
use crate::order::{
    classify_operator, closure_from_subset, is_meet_closed, FiniteLattice, FinitePoset, OperatorMap,
};
use crate::pattern::{Extent, Pattern};
use crate::setsys::{ExplicitFamily, Family};

/// Default cap on materialized family sizes.
pub const DEFAULT_BUDGET: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("family has more than {budget} members ({found} found so far)")]
    BudgetExceeded { budget: usize, found: usize },
    #[error("{t:?} is not a member")]
    NotMember { t: Pattern },
    #[error("no unique greatest member above {t:?} with its support; maxima {maxima:?}")]
    NonUniqueMaximum { t: Pattern, maxima: Vec<Pattern> },
}

/// Lists every member reachable from the minimal elements by single-item
/// augmentations, which is all of a strongly accessible family.
pub fn materialize(fam: &dyn Family, budget: usize) -> Result<ExplicitFamily, OracleError> {
    if let Some(explicit) = fam.explicit() {
        if explicit.len() > budget {
            return Err(OracleError::BudgetExceeded {
                budget,
                found: explicit.len(),
            });
        }
        return Ok(explicit.clone());
    }
    let mut seen: BTreeSet<Pattern> = BTreeSet::new();
    let mut queue: VecDeque<Pattern> = VecDeque::new();
    for m in fam.minimals() {
        if seen.insert(*m) {
            queue.push_back(*m);
        }
    }
    while let Some(p) = queue.pop_front() {
        if seen.len() > budget {
            return Err(OracleError::BudgetExceeded {
                budget,
                found: seen.len(),
            });
        }
        for e in 0..fam.universe() {
            let q = p.with(e);
            if !p.contains(e) && fam.contains(&q) && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    if seen.len() > budget {
        return Err(OracleError::BudgetExceeded {
            budget,
            found: seen.len(),
        });
    }
    Ok(ExplicitFamily::trusted(
        seen.into_iter().collect(),
        fam.universe(),
    ))
}

/// Objects whose description contains `t`, by scanning.
pub fn support_of(ctx: &ObjectContext, t: &Pattern) -> Vec<usize> {
    ctx.descriptions()
        .iter()
        .enumerate()
        .filter(|(_, d)| t.is_subset(d))
        .map(|(o, _)| o)
        .collect()
}

/// An abstraction listed member by member, each member an object bit mask.
#[derive(Clone, Debug)]
pub struct ListedAbstraction {
    members: Vec<u32>,
}

impl ListedAbstraction {
    /// Needs at most 16 objects.
    pub fn new(abs: &ExtensionalAbstraction, objects: usize) -> Self {
        assert!(objects <= 16, "too many objects to list their powerset");
        let all = 0u32..(1 << objects);
        let members = match abs {
            ExtensionalAbstraction::Identity => all.collect(),
            ExtensionalAbstraction::MinSupport(s) => all
                .filter(|e| *e == 0 || e.count_ones() as usize >= *s)
                .collect(),
            ExtensionalAbstraction::Generators(gens) => {
                let gens: Vec<u32> = gens
                    .iter()
                    .map(|g| g.iter().fold(0, |acc, o| acc | 1 << o))
                    .collect();
                let mut members: BTreeSet<u32> = BTreeSet::from([0]);
                loop {
                    let grown: BTreeSet<u32> = members
                        .iter()
                        .flat_map(|a| gens.iter().map(move |g| a | g))
                        .chain(members.iter().copied())
                        .collect();
                    if grown.len() == members.len() {
                        break;
                    }
                    members = grown;
                }
                members.into_iter().collect()
            }
        };
        ListedAbstraction { members }
    }

    /// Union of the members contained in `e`.
    pub fn project(&self, e: &[usize]) -> Vec<usize> {
        let e = e.iter().fold(0u32, |acc, o| acc | 1 << o);
        let union = self
            .members
            .iter()
            .filter(|a| *a & !e == 0)
            .fold(0, |acc, a| acc | a);
        (0..32).filter(|o| union >> o & 1 == 1).collect()
    }
}

/// Brute-force support closure: the greatest member above `t` with the same
/// abstract support.
pub fn oracle_closure(
    ctx: &ObjectContext,
    members: &[Pattern],
    abs: &ListedAbstraction,
    t: &Pattern,
) -> Result<Pattern, OracleError> {
    if !members.contains(t) {
        return Err(OracleError::NotMember { t: *t });
    }
    let supports: Vec<Vec<usize>> = members
        .iter()
        .map(|x| abs.project(&support_of(ctx, x)))
        .collect();
    greatest_with_support(members, &supports, t, &abs.project(&support_of(ctx, t)))
}

/// Maxima of the members above `t` whose listed support equals `target`.
fn greatest_with_support(
    members: &[Pattern],
    supports: &[Vec<usize>],
    t: &Pattern,
    target: &[usize],
) -> Result<Pattern, OracleError> {
    let same: Vec<&Pattern> = members
        .iter()
        .zip(supports)
        .filter(|(x, s)| t.is_subset(x) && s.as_slice() == target)
        .map(|(x, _)| x)
        .collect();
    let maxima: Vec<Pattern> = same
        .iter()
        .filter(|x| !same.iter().any(|y| y != *x && x.is_subset(y)))
        .map(|x| **x)
        .collect();
    match maxima.as_slice() {
        [m] => Ok(*m),
        _ => Err(OracleError::NonUniqueMaximum { t: *t, maxima }),
    }
}

/// [`oracle_closure`] of every member, in the order given.
pub fn oracle_closures(
    ctx: &ObjectContext,
    members: &[Pattern],
    abs: &ListedAbstraction,
) -> Result<Vec<Pattern>, OracleError> {
    let supports: Vec<Vec<usize>> = members
        .iter()
        .map(|x| abs.project(&support_of(ctx, x)))
        .collect();
    members
        .iter()
        .zip(&supports)
        .map(|(t, s)| greatest_with_support(members, &supports, t, s))
        .collect()
}

/// Closed patterns with their abstract supports, by brute force.
pub fn oracle_concepts(
    ctx: &ObjectContext,
    members: &[Pattern],
    abs: &ListedAbstraction,
) -> Result<BTreeMap<Pattern, Vec<usize>>, OracleError> {
    Ok(oracle_closures(ctx, members, abs)?
        .into_iter()
        .map(|c| (c, abs.project(&support_of(ctx, &c))))
        .collect())
}

/// Classical closed itemsets of `2^S`: sets that lose support when any item is added.
pub fn closed_itemsets(ctx: &ObjectContext) -> BTreeSet<Pattern> {
    let n = ctx.universe();
    assert!(n <= 16, "too many items to scan 2^S");
    (0u64..(1 << n))
        .map(Pattern::from_mask)
        .filter(|x| {
            let s = support_of(ctx, x);
            (0..n).all(|i| x.contains(i) || support_of(ctx, &x.with(i)) != s)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub seed: u64,
    pub family_size: usize,
    /// Brute-force closed patterns with abstract supports.
    pub concepts: Vec<(Pattern, Vec<usize>)>,
    pub verdicts: Vec<Verdict>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn first_counterexample(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.status == Status::Fail)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    fn record(&mut self, check: &'static str, result: Result<(), String>) {
        let (status, detail) = match result {
            Ok(()) => (Status::Pass, String::new()),
            Err(d) => (Status::Fail, d),
        };
        self.verdicts.push(Verdict {
            check,
            status,
            detail,
        });
    }

    fn skip(&mut self, check: &'static str, why: &str) {
        self.verdicts.push(Verdict {
            check,
            status: Status::Skipped,
            detail: why.to_string(),
        });
    }
}

/// Largest family on which the quadratic-in-size order checks run.
const ORDER_CHECK_LIMIT: usize = 96;

/// Materializes `fam` and runs [`verify_members`].
pub fn verify_all(
    ctx: &ObjectContext,
    fam: &dyn Family,
    abs: &ExtensionalAbstraction,
    seed: u64,
    budget: usize,
) -> Result<OracleReport, OracleError> {
    let explicit = materialize(fam, budget)?;
    Ok(verify_members(
        ctx,
        explicit.members(),
        fam.universe(),
        abs,
        seed,
    ))
}

/// Runs every structural check on a listed candidate family. Checks that
/// need a subconfluence are skipped when the candidate is not one.
pub fn verify_members(
    ctx: &ObjectContext,
    members: &[Pattern],
    universe: usize,
    abs: &ExtensionalAbstraction,
    seed: u64,
) -> OracleReport {
    let mut members = members.to_vec();
    members.sort();
    members.dedup();
    let listed = ListedAbstraction::new(abs, ctx.len());
    let mut report = OracleReport {
        seed,
        family_size: members.len(),
        concepts: Vec::new(),
        verdicts: Vec::new(),
    };

    let existence = support_closure_existence_check(&members, universe);
    let oracle = oracle_concepts(ctx, &members, &listed);
    let fam = match ExplicitFamily::new(members.clone(), universe) {
        Ok(f) => {
            report.record("subconfluence", Ok(()));
            f
        }
        Err(e) => {
            report.record("subconfluence", Err(e.to_string()));
            // The negative side of the existence equivalence: the
            // counterexample context admits no support closure.
            let result = match &existence {
                ExistenceVerdict::Exists => {
                    Err("existence check accepted a non-subconfluence".into())
                }
                ExistenceVerdict::Fails { t, context, .. } => {
                    let id =
                        ListedAbstraction::new(&ExtensionalAbstraction::Identity, context.len());
                    match oracle_closure(context, &members, &id, t) {
                        Err(OracleError::NonUniqueMaximum { .. }) => Ok(()),
                        other => Err(format!(
                            "oracle closure in counterexample context: {other:?}"
                        )),
                    }
                }
            };
            report.record("existence_iff_subconfluence", result);
            return report;
        }
    };
    report.record(
        "existence_iff_subconfluence",
        match (&existence, &oracle) {
            (ExistenceVerdict::Exists, Ok(_)) => Ok(()),
            (v, o) => Err(format!("existence {v:?}, oracle {o:?}")),
        },
    );
    let oracle = match oracle {
        Ok(o) => o,
        Err(e) => {
            report.record("oracle_closure", Err(e.to_string()));
            return report;
        }
    };
    report.concepts = oracle.iter().map(|(p, e)| (*p, e.clone())).collect();

    report.record(
        "closure_matches_oracle",
        check_closure_matches(ctx, &fam, abs, &listed),
    );
    report.record("choice_independence", check_choice_independence(ctx, &fam));
    report.record("galois_laws", check_galois_laws(ctx, &members, seed));

    if members.len() <= ORDER_CHECK_LIMIT {
        report.record("closure_laws", check_closure_laws(ctx, &fam, abs));
        report.record(
            "local_meet_characterization",
            check_local_meet(ctx, &fam, abs),
        );
        report.record(
            "meet_closed_per_upset",
            check_meet_closed_per_upset(ctx, &fam, abs),
        );
    } else {
        for check in [
            "closure_laws",
            "local_meet_characterization",
            "meet_closed_per_upset",
        ] {
            report.skip(check, "family too large");
        }
    }
    if universe <= 6 {
        report.record(
            "subconfluence_equivalence",
            check_subconfluence_equivalence(&fam, universe),
        );
        report.record(
            "interior_coherence",
            check_interior_coherence(&fam, universe),
        );
    } else {
        report.skip(
            "subconfluence_equivalence",
            "universe too large for an explicit host lattice",
        );
        report.skip(
            "interior_coherence",
            "universe too large for an explicit host lattice",
        );
    }
    let supports_small = fam.minimals().iter().all(|m| ctx.ext(m).len() <= 16);
    if supports_small {
        report.record(
            "extent_decomposition",
            verify_extent_decomposition(ctx, &fam).map_err(|m| format!("{m:?}")),
        );
    } else {
        report.skip("extent_decomposition", "supports too large to enumerate");
    }
    match fam.is_strongly_accessible() {
        Ok(()) => report.record("miner_matches_oracle", check_miner(ctx, &fam, abs, &oracle)),
        Err((a, b)) => report.skip(
            "miner_matches_oracle",
            &format!("not strongly accessible: {a:?} to {b:?}"),
        ),
    }
    report
}

fn check_closure_matches(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
    listed: &ListedAbstraction,
) -> Result<(), String> {
    let slow = oracle_closures(ctx, fam.members(), listed).map_err(|e| e.to_string())?;
    for (t, slow) in fam.members().iter().zip(slow) {
        let fast = abstract_support_closure(ctx, fam, abs, t).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!("closure of {t:?}: {fast:?} vs oracle {slow:?}"));
        }
    }
    Ok(())
}

fn check_choice_independence(ctx: &ObjectContext, fam: &ExplicitFamily) -> Result<(), String> {
    for t in fam.members() {
        let routes: BTreeSet<Pattern> = fam
            .minimals()
            .iter()
            .filter(|m| m.is_subset(t))
            .map(|m| support_closure_via(ctx, fam, t, m).expect("valid route"))
            .collect();
        if routes.len() != 1 {
            return Err(format!(
                "closure of {t:?} depends on the minimal: {routes:?}"
            ));
        }
    }
    Ok(())
}

fn check_galois_laws(ctx: &ObjectContext, members: &[Pattern], seed: u64) -> Result<(), String> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.len();
    let full = Pattern::full(ctx.universe());
    for _ in 0..64 {
        let a = members[rng.gen_range(0..members.len())];
        let b = a.union(&Pattern::from_items(
            full.iter().filter(|_| rng.gen_bool(0.2)),
        ));
        // anti-monotone ext
        if !ctx.ext(&b).is_subset(&ctx.ext(&a)) {
            return Err(format!("ext not antitone on {a:?} <= {b:?}"));
        }
        // int ∘ ext extensive and maximal within its support class
        let ia = ctx.int(&ctx.ext(&a));
        if !a.is_subset(&ia) || ctx.ext(&ia) != ctx.ext(&a) {
            return Err(format!(
                "int(ext({a:?})) = {ia:?} not a same-support superset"
            ));
        }
        let x = Extent::from_objects(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        let y = x.union(&Extent::from_objects(
            n,
            (0..n).filter(|_| rng.gen_bool(0.3)),
        ));
        if !ctx.int(&y).is_subset(&ctx.int(&x)) {
            return Err(format!("int not antitone on {x:?} <= {y:?}"));
        }
        let ex = ctx.ext(&ctx.int(&x));
        if !x.is_subset(&ex) || ctx.int(&ex) != ctx.int(&x) {
            return Err(format!(
                "ext(int({x:?})) = {ex:?} not a same-intent superset"
            ));
        }
    }
    Ok(())
}

/// The support closure as an operator on the family ordered by inclusion.
fn closure_operator(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
) -> OperatorMap {
    let members = fam.members();
    let table = members
        .iter()
        .map(|t| {
            let c = abstract_support_closure(ctx, fam, abs, t).expect("member");
            members
                .binary_search(&c)
                .expect("closure stays in the family")
        })
        .collect();
    OperatorMap::new(FinitePoset::from_patterns(members), table).expect("table indexes members")
}

fn check_closure_laws(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
) -> Result<(), String> {
    for a in [ExtensionalAbstraction::Identity, abs.clone()] {
        let op = closure_operator(ctx, fam, &a);
        let class = classify_operator(&op);
        if !class.is_closure() {
            return Err(format!("support closure under {a:?} is {class:?}"));
        }
    }
    Ok(())
}

fn check_local_meet(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
) -> Result<(), String> {
    let op = closure_operator(ctx, fam, abs);
    let conf = ExplicitConfluence::new(op.domain().clone()).map_err(|e| e.to_string())?;
    let range = op.range();
    let rebuilt = conf
        .closure_from_local_meet_subset(&range)
        .map_err(|e| format!("closed patterns not closed under local meet: {e}"))?;
    if rebuilt.table() != op.table() {
        return Err("closure rebuilt from its range differs".into());
    }
    crate::local::is_confluence(&op.domain().restrict(&range))
        .map_err(|w| format!("closed patterns do not form a confluence: {w:?}"))
}

fn check_meet_closed_per_upset(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
) -> Result<(), String> {
    let op = closure_operator(ctx, fam, abs);
    let poset = op.domain();
    let closed: BTreeSet<usize> = op.range().into_iter().collect();
    for m in poset.minimals() {
        let up = poset.up_set(m);
        let lattice = FiniteLattice::from_poset(poset.restrict(&up)).map_err(|e| e.to_string())?;
        let local: Vec<usize> = up
            .iter()
            .enumerate()
            .filter(|(_, x)| closed.contains(x))
            .map(|(i, _)| i)
            .collect();
        let meet_closed = is_meet_closed(&lattice, &local).is_ok();
        let has_closure = closure_from_subset(lattice.poset(), &local).is_ok();
        if !meet_closed || !has_closure {
            return Err(format!(
                "up-set of {}: meet-closed {meet_closed}, closure exists {has_closure}",
                poset.label(m)
            ));
        }
    }
    Ok(())
}

fn check_subconfluence_equivalence(fam: &ExplicitFamily, universe: usize) -> Result<(), String> {
    let host = FiniteLattice::powerset(universe);
    let idx: Vec<usize> = fam.members().iter().map(|p| p.mask() as usize).collect();
    let verdicts = suites::subconfluence_three_ways(&host, &idx);
    if verdicts.iter().all(|&v| v) {
        Ok(())
    } else {
        Err(format!(
            "three-way subconfluence verdicts disagree: {verdicts:?}"
        ))
    }
}

fn check_interior_coherence(fam: &ExplicitFamily, universe: usize) -> Result<(), String> {
    let host = FiniteLattice::powerset(universe);
    let idx: Vec<usize> = fam.members().iter().map(|p| p.mask() as usize).collect();
    let interior = InteriorFamily::new(host, &idx).map_err(|e| e.to_string())?;
    suites::interior_coherence(&interior)?;
    for t in fam.members() {
        for x in 0..(1u64 << universe) {
            let x = Pattern::from_mask(x);
            if !t.is_subset(&x) {
                continue;
            }
            let via_family = fam.project(t, &x);
            let via_host = interior
                .project_at(t.mask() as usize, x.mask() as usize)
                .map_err(|e| e.to_string())?;
            if via_family.mask() as usize != via_host {
                return Err(format!("p_{t:?}({x:?}) differs between family and host"));
            }
        }
    }
    Ok(())
}

fn check_miner(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
    abs: &ExtensionalAbstraction,
    oracle: &BTreeMap<Pattern, Vec<usize>>,
) -> Result<(), String> {
    let miner = Miner::new(fam, ctx, abs, MinerConfig::default()).map_err(|e| e.to_string())?;
    let events = miner.mine();
    let mut mined = BTreeMap::new();
    for ev in &events {
        if mined
            .insert(ev.concept.intent, ev.concept.extent.to_vec())
            .is_some()
        {
            return Err(format!("{:?} listed twice", ev.concept.intent));
        }
    }
    if &mined != oracle {
        return Err(format!("miner {mined:?} vs oracle {oracle:?}"));
    }
    Ok(())
}
