//! Randomized property suites. Each suite takes a seed, builds one random
//! instance and checks it, returning a description of the first failure.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::random;
use super::{closed_itemsets, materialize, oracle_closure, oracle_concepts, support_of};
use super::{verify_members, ListedAbstraction, OracleError, DEFAULT_BUDGET};
use crate::galois::{support_closure_existence_check, ExistenceVerdict, ExtensionalAbstraction};
use crate::local::{is_subconfluence, ExplicitConfluence, InteriorFamily};
use crate::miner::{ElmPolicy, Miner, MinerConfig, OutputOrder};
use crate::order::{
    classify_operator, closure_from_subset, compose_interior_closure, interior_from_subset,
    is_join_closed, is_meet_closed, FiniteLattice, FinitePoset, OperatorMap,
};
use crate::pattern::Pattern;
use crate::setsys::{ExplicitFamily, PowersetFamily};

pub type Suite = fn(u64) -> Result<(), String>;

/// Every suite with the name it is reported under.
pub const SUITES: &[(&str, Suite)] = &[
    (
        "operator laws and closure subsets of lattices",
        operator_laws,
    ),
    ("closures on confluences", confluence_closures),
    (
        "three equivalent subconfluence definitions",
        subconfluence_equivalence,
    ),
    ("interior families and lifted closures", interior_families),
    ("galois closures and extent decomposition", galois_checks),
    ("miner against oracle", miner_against_oracle),
];

/// Runs `suite` on seeds `base..base + count` and returns the failures in seed order.
pub fn run_suite(suite: Suite, count: u64, base: u64) -> Vec<(u64, String)> {
    #[cfg(feature = "parallel")]
    let failures: Vec<(u64, String)> = {
        use rayon::prelude::*;
        (base..base + count)
            .into_par_iter()
            .filter_map(|seed| suite(seed).err().map(|e| (seed, e)))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let failures: Vec<(u64, String)> = (base..base + count)
        .filter_map(|seed| suite(seed).err().map(|e| (seed, e)))
        .collect();
    failures
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Least element of `c` above `x` in `2^n`, by direct scan; masks as indices.
fn least_above(c: &[usize], x: usize) -> Option<usize> {
    let above: Vec<usize> = c.iter().copied().filter(|&y| x & !y == 0).collect();
    above
        .iter()
        .copied()
        .find(|&m| above.iter().all(|&y| m & !y == 0))
}

fn greatest_below(a: &[usize], x: usize) -> Option<usize> {
    let below: Vec<usize> = a.iter().copied().filter(|&y| y & !x == 0).collect();
    below
        .iter()
        .copied()
        .find(|&m| below.iter().all(|&y| y & !m == 0))
}

/// Closes `c` under pairwise meets (intersections) and adds the top.
fn meet_closure(n: usize, c: &[usize]) -> Vec<usize> {
    let mut out: BTreeSet<usize> = c.iter().copied().collect();
    out.insert((1 << n) - 1);
    loop {
        let v: Vec<usize> = out.iter().copied().collect();
        let before = out.len();
        for &x in &v {
            for &y in &v {
                out.insert(x & y);
            }
        }
        if out.len() == before {
            return out.into_iter().collect();
        }
    }
}

fn join_closure(c: &[usize]) -> Vec<usize> {
    let mut out: BTreeSet<usize> = c.iter().copied().collect();
    out.insert(0);
    loop {
        let v: Vec<usize> = out.iter().copied().collect();
        let before = out.len();
        for &x in &v {
            for &y in &v {
                out.insert(x | y);
            }
        }
        if out.len() == before {
            return out.into_iter().collect();
        }
    }
}

/// Closure and interior operators on `2^n` built from subsets, checked against
/// direct scans, plus classification of random maps and interior-closure composition.
pub fn operator_laws(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=4);
    let lattice = FiniteLattice::powerset(n);
    let size = 1usize << n;
    let density = rng.gen_range(0.1..0.9);
    let c = sorted(random::subset(&mut rng, size, density));

    let meet_closed = is_meet_closed(&lattice, &c).is_ok();
    match closure_from_subset(lattice.poset(), &c) {
        Ok(f) => {
            ensure(meet_closed, || {
                format!("closure from {c:?} exists but it is not meet-closed")
            })?;
            ensure(classify_operator(&f).is_closure(), || {
                format!("closure from {c:?} fails laws")
            })?;
            ensure(f.range() == c, || {
                format!("closure range {:?} != {c:?}", f.range())
            })?;
            for x in 0..size {
                ensure(Some(f.apply(x)) == least_above(&c, x), || {
                    format!("f({x}) wrong for {c:?}")
                })?;
            }
        }
        Err(_) => ensure(!meet_closed, || {
            format!("{c:?} is meet-closed yet has no closure")
        })?,
    }
    let join_closed = is_join_closed(&lattice, &c).is_ok();
    match interior_from_subset(lattice.poset(), &c) {
        Ok(p) => {
            ensure(join_closed, || {
                format!("interior from {c:?} exists but it is not join-closed")
            })?;
            ensure(classify_operator(&p).is_interior(), || {
                format!("interior from {c:?} fails laws")
            })?;
            ensure(p.range() == c, || {
                format!("interior range {:?} != {c:?}", p.range())
            })?;
            for x in 0..size {
                ensure(Some(p.apply(x)) == greatest_below(&c, x), || {
                    format!("p({x}) wrong for {c:?}")
                })?;
            }
        }
        Err(_) => ensure(!join_closed, || {
            format!("{c:?} is join-closed yet has no interior")
        })?,
    }

    // Random self-maps: classification must match the laws checked by hand.
    let table: Vec<usize> = if rng.gen_bool(0.5) {
        (0..size).map(|_| rng.gen_range(0..size)).collect()
    } else {
        let range = meet_closure(n, &random::subset(&mut rng, size, 0.3));
        (0..size)
            .map(|x| least_above(&range, x).expect("top present"))
            .collect()
    };
    let map =
        OperatorMap::new(lattice.poset().clone(), table.clone()).map_err(|e| e.to_string())?;
    let monotone = (0..size).all(|x| (0..size).all(|y| x & !y != 0 || table[x] & !table[y] == 0));
    let idempotent = (0..size).all(|x| table[table[x]] == table[x]);
    let extensive = (0..size).all(|x| x & !table[x] == 0);
    let intensive = (0..size).all(|x| table[x] & !x == 0);
    let class = classify_operator(&map);
    ensure(
        class.is_closure() == (monotone && idempotent && extensive),
        || format!("{table:?} classified {class:?}"),
    )?;
    ensure(
        class.is_interior() == (monotone && idempotent && intensive),
        || format!("{table:?} classified {class:?}"),
    )?;

    // p ∘ f on the range of p is a closure.
    let a = join_closure(&random::subset(&mut rng, size, 0.3));
    let cl = meet_closure(n, &random::subset(&mut rng, size, 0.3));
    let p = interior_from_subset(lattice.poset(), &a).map_err(|x| format!("no interior at {x}"))?;
    let f = closure_from_subset(lattice.poset(), &cl).map_err(|x| format!("no closure at {x}"))?;
    let composed = compose_interior_closure(&p, &f).map_err(|e| e.to_string())?;
    ensure(classify_operator(&composed).is_closure(), || {
        format!("p∘f not a closure for A={a:?}, C={cl:?}")
    })?;
    for (i, &x) in a.iter().enumerate() {
        let expect = greatest_below(&a, least_above(&cl, x).unwrap()).unwrap();
        ensure(a[composed.apply(i)] == expect, || format!("p∘f({x}) wrong"))?;
    }
    Ok(())
}

/// Adds local tops and local meets to `c` until it is closed under them.
fn local_meet_closure(conf: &ExplicitConfluence, c: &[usize]) -> Vec<usize> {
    let p = conf.carrier();
    let mut out: BTreeSet<usize> = c.iter().copied().collect();
    out.extend((0..p.len()).map(|t| conf.local_top(t)));
    loop {
        let v: Vec<usize> = out.iter().copied().collect();
        let before = out.len();
        for t in 0..p.len() {
            for &x in v.iter().filter(|&&x| p.leq(t, x)) {
                for &y in v.iter().filter(|&&y| p.leq(t, y)) {
                    out.insert(conf.local_meet(t, x, y).expect("both above t"));
                }
            }
        }
        if out.len() == before {
            return out.into_iter().collect();
        }
    }
}

/// On random subconfluences of `2^n`, a subset has a closure exactly when it
/// is closed under local meets, and the closure built from local meets is it.
pub fn confluence_closures(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=5);
    let draw = rng.gen_range(1..=6);
    let members = random::subconfluence(&mut rng, n, draw);
    let poset = FinitePoset::from_patterns(&members);
    let conf = ExplicitConfluence::new(poset.clone())
        .map_err(|e| format!("subconfluence {members:?} is not a confluence: {e}"))?;
    let draw = rng.gen_range(0.2..0.8);
    let raw = random::subset(&mut rng, poset.len(), draw);
    let c = if rng.gen_bool(0.5) {
        local_meet_closure(&conf, &raw)
    } else {
        raw
    };
    let by_definition = closure_from_subset(&poset, &c);
    let closed = conf.is_closed_under_local_meet(&c).is_ok();
    ensure(closed == by_definition.is_ok(), || {
        format!(
            "closure existence {} vs local-meet closed {closed} on {members:?}, C={c:?}",
            by_definition.is_ok()
        )
    })?;
    match (conf.closure_from_local_meet_subset(&c), by_definition) {
        (Ok(f), Ok(g)) => {
            ensure(f.table() == g.table(), || {
                format!("local-meet closure differs on {members:?}, C={c:?}")
            })?;
            ensure(classify_operator(&f).is_closure(), || {
                "local-meet closure fails laws".into()
            })?;
            ensure(f.range() == c, || "local-meet closure range differs".into())
        }
        (Err(_), Err(_)) => Ok(()),
        (a, b) => Err(format!("construction {a:?} vs definition {b:?}")),
    }
}

/// The three readings of "subconfluence" on a candidate family of a finite
/// lattice, given as element indices: the family is a confluence whose local
/// joins are host joins; every `F^t` is the range of an interior operator on
/// `T^t`; joins of members above a common member stay in the family.
pub fn subconfluence_three_ways(host: &FiniteLattice, fam: &[usize]) -> [bool; 3] {
    let fam = sorted(fam.to_vec());
    let hp = host.poset();
    let restricted = hp.restrict(&fam);
    let as_confluence = match ExplicitConfluence::new(restricted) {
        Err(_) => false,
        Ok(conf) => (0..fam.len()).all(|i| {
            (0..fam.len()).all(|j| {
                let common =
                    (0..fam.len()).any(|t| hp.leq(fam[t], fam[i]) && hp.leq(fam[t], fam[j]));
                !common || conf.local_join(i, j).map(|k| fam[k]) == Some(host.join(fam[i], fam[j]))
            })
        }),
    };
    let as_interiors = fam.iter().all(|&t| {
        let up = hp.up_set(t);
        let local_poset = hp.restrict(&up);
        let local: Vec<usize> = up
            .iter()
            .enumerate()
            .filter(|(_, x)| fam.binary_search(x).is_ok())
            .map(|(i, _)| i)
            .collect();
        interior_from_subset(&local_poset, &local).is_ok()
    });
    let as_joins = is_subconfluence(host, &fam).is_ok();
    [as_confluence, as_interiors, as_joins]
}

/// Each `p_t` is an interior operator on `T^t` with range `F^t`, projections
/// agree along the order (`p_t(x) = p_u(x)` for members `t <= u <= x`), and
/// the routed projection matches the definition.
pub fn interior_coherence(fam: &InteriorFamily) -> Result<(), String> {
    let host = fam.host();
    let hp = host.poset();
    for &t in fam.members() {
        let up = hp.up_set(t);
        let local_poset = hp.restrict(&up);
        let mut table = Vec::with_capacity(up.len());
        for &x in &up {
            let px = fam.project_at(t, x).map_err(|e| e.to_string())?;
            table.push(
                up.binary_search(&px)
                    .map_err(|_| format!("p_{t}({x}) = {px} leaves T^t"))?,
            );
            let routed = fam.interior_project(t, x).map_err(|e| e.to_string())?;
            ensure(routed == px, || {
                format!("routed p_{t}({x}) = {routed}, direct {px}")
            })?;
        }
        let op = OperatorMap::new(local_poset, table).map_err(|e| e.to_string())?;
        let class = classify_operator(&op);
        ensure(class.is_interior(), || format!("p_{t} is {class:?}"))?;
        let range: Vec<usize> = op.range().into_iter().map(|i| up[i]).collect();
        let f_t: Vec<usize> = up.iter().copied().filter(|&x| fam.contains(x)).collect();
        ensure(range == f_t, || {
            format!("range of p_{t} is {range:?}, expected {f_t:?}")
        })?;
        for &u in fam.members().iter().filter(|&&u| hp.leq(t, u)) {
            for x in hp.up_set(u) {
                let a = fam.project_at(t, x).map_err(|e| e.to_string())?;
                let b = fam.project_at(u, x).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("p_{t}({x}) = {a} but p_{u}({x}) = {b}"))?;
            }
        }
    }
    Ok(())
}

fn masks(members: &[Pattern]) -> Vec<usize> {
    members.iter().map(|p| p.mask() as usize).collect()
}

/// Random candidate families of `2^n`: the three subconfluence readings agree,
/// and support closure exists for every context exactly on subconfluences.
pub fn subconfluence_equivalence(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=5);
    let members = random::candidate(&mut rng, n);
    let host = FiniteLattice::powerset(n);
    let idx = masks(&members);
    let ways = subconfluence_three_ways(&host, &idx);
    ensure(ways.iter().all(|&w| w == ways[0]), || {
        format!("{members:?}: readings {ways:?}")
    })?;
    let is_sub = ways[0];
    ensure(
        ExplicitFamily::new(members.clone(), n).is_ok() == is_sub,
        || format!("{members:?}: family constructor disagrees with {ways:?}"),
    )?;
    match support_closure_existence_check(&members, n) {
        ExistenceVerdict::Exists => {
            ensure(is_sub, || {
                format!("{members:?}: existence accepted a non-subconfluence")
            })?;
            // Closures exist on random contexts too.
            let ctx = random::context(&mut rng, n, 6, 0.6);
            let id = ListedAbstraction::new(&ExtensionalAbstraction::Identity, ctx.len());
            for t in &members {
                oracle_closure(&ctx, &members, &id, t)
                    .map_err(|e| format!("{members:?}: oracle closure failed: {e}"))?;
            }
            Ok(())
        }
        ExistenceVerdict::Fails { t, context, .. } => {
            ensure(!is_sub, || {
                format!("{members:?}: existence rejected a subconfluence")
            })?;
            let id = ListedAbstraction::new(&ExtensionalAbstraction::Identity, context.len());
            match oracle_closure(&context, &members, &id, &t) {
                Err(OracleError::NonUniqueMaximum { .. }) => Ok(()),
                other => Err(format!(
                    "{members:?}: counterexample context gave {other:?}"
                )),
            }
        }
    }
}

/// Random subconfluences of `2^n`: interior projections are coherent and
/// lifting a random closure of `2^n` gives a closure on the family.
pub fn interior_families(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=5);
    let draw = rng.gen_range(1..=6);
    let members = random::subconfluence(&mut rng, n, draw);
    let host = FiniteLattice::powerset(n);
    let fam = InteriorFamily::new(host.clone(), &masks(&members)).map_err(|e| e.to_string())?;
    interior_coherence(&fam)?;

    let cl = meet_closure(n, &random::subset(&mut rng, 1 << n, 0.3));
    let f = closure_from_subset(host.poset(), &cl).map_err(|x| format!("no closure at {x}"))?;
    let lifted = fam.lift_closure(&f).map_err(|e| e.to_string())?;
    let class = classify_operator(&lifted);
    ensure(class.is_closure(), || {
        format!("lifted closure on {members:?} is {class:?}")
    })?;
    let idx = fam.members();
    for (i, &t) in idx.iter().enumerate() {
        // greatest member between t and f(t), by scan
        let ft = f.apply(t);
        let expect = idx
            .iter()
            .copied()
            .filter(|&q| t & !q == 0 && q & !ft == 0)
            .fold(0, |acc, q| acc | q);
        ensure(idx[lifted.apply(i)] == expect, || {
            format!("lifted f({t}) = {} expected {expect}", idx[lifted.apply(i)])
        })?;
    }
    Ok(())
}

/// Support and abstract support closures of random subconfluences and
/// contexts, checked by the full oracle report.
pub fn galois_checks(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let (members, universe) = if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=6);
        let seeds = rng.gen_range(1..=6);
        (random::subconfluence(&mut rng, n, seeds), n)
    } else {
        fitting_family(&mut rng, 128)
    };
    let draw = rng.gen_range(0.3..0.9);
    let ctx = random::context(&mut rng, universe, 12, draw);
    let abs = random::abstraction(&mut rng, ctx.len());
    let report = verify_members(&ctx, &members, universe, &abs, seed);
    match report.first_counterexample() {
        None => Ok(()),
        Some(v) => Err(format!("{}: {} (family {members:?})", v.check, v.detail)),
    }
}

/// Members and universe of the first random accessible family within `budget`.
fn fitting_family(rng: &mut impl Rng, budget: usize) -> (Vec<Pattern>, usize) {
    loop {
        let fam = random::accessible_family(rng);
        let fam = fam.as_family();
        if let Ok(explicit) = materialize(fam, budget) {
            return (explicit.members().to_vec(), fam.universe());
        }
    }
}

/// The miner on a random strongly accessible family lists exactly the
/// oracle's closed patterns, once each, in every configuration.
pub fn miner_against_oracle(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let (rf, explicit) = loop {
        let rf = random::accessible_family(&mut rng);
        if let Ok(e) = materialize(rf.as_family(), 1024) {
            break (rf, e);
        }
    };
    let fam = rf.as_family();
    let universe = fam.universe();
    let draw = rng.gen_range(0.3..0.9);
    let ctx = random::context(&mut rng, universe, 12, draw);
    let abs = random::abstraction(&mut rng, ctx.len());
    let listed = ListedAbstraction::new(&abs, ctx.len());
    let oracle = oracle_concepts(&ctx, explicit.members(), &listed).map_err(|e| e.to_string())?;

    let mine = |config: MinerConfig| -> Result<BTreeMap<Pattern, (Vec<usize>, bool)>, String> {
        let miner = Miner::new(fam, &ctx, &abs, config).map_err(|e| e.to_string())?;
        let mut out = BTreeMap::new();
        for ev in miner.mine() {
            let c = ev.concept;
            ensure(fam.contains(&c.intent), || {
                format!("{:?} outside the family", c.intent)
            })?;
            if out
                .insert(c.intent, (c.extent.to_vec(), c.empty_support))
                .is_some()
            {
                return Err(format!(
                    "{} family: {:?} emitted twice",
                    rf.kind(),
                    c.intent
                ));
            }
        }
        Ok(out)
    };
    let base = mine(MinerConfig::default())?;
    let as_oracle: BTreeMap<Pattern, Vec<usize>> =
        base.iter().map(|(p, (e, _))| (*p, e.clone())).collect();
    ensure(as_oracle == oracle, || {
        format!(
            "{} family: miner {as_oracle:?} vs oracle {oracle:?}",
            rf.kind()
        )
    })?;
    for (p, (e, empty)) in &base {
        ensure(*empty == e.is_empty(), || {
            format!("{p:?}: empty-support flag wrong")
        })?;
    }
    let late_elm = mine(MinerConfig {
        elm_policy: ElmPolicy::WhenExpanded,
        ..MinerConfig::default()
    })?;
    ensure(late_elm == base, || {
        "ELM placement changes the output".into()
    })?;
    let filtered = mine(MinerConfig {
        emit_empty_support: false,
        ..MinerConfig::default()
    })?;
    let expect: BTreeMap<_, _> = base
        .iter()
        .filter(|(_, (_, empty))| !empty)
        .map(|(p, v)| (*p, v.clone()))
        .collect();
    ensure(filtered == expect, || {
        "empty-support filtering wrong".into()
    })?;

    let seq = Miner::new(fam, &ctx, &abs, MinerConfig::default()).map_err(|e| e.to_string())?;
    let par = Miner::new(
        fam,
        &ctx,
        &abs,
        MinerConfig {
            parallel: true,
            ..MinerConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(seq.trace() == par.trace(), || {
        "parallel trace differs from sequential".into()
    })?;
    let sorted_cfg = MinerConfig {
        order: OutputOrder::Sorted,
        ..MinerConfig::default()
    };
    let sorted_out: Vec<Pattern> = Miner::new(fam, &ctx, &abs, sorted_cfg)
        .map_err(|e| e.to_string())?
        .mine()
        .iter()
        .map(|e| e.concept.intent)
        .collect();
    ensure(sorted_out.windows(2).all(|w| w[0] < w[1]), || {
        "sorted output out of order".into()
    })
}

/// On `2^S` with a random context, mined closed patterns are the classical
/// closed itemsets, with their supports.
pub fn lattice_degeneration(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=10);
    let draw = rng.gen_range(0.2..0.9);
    let ctx = random::context(&mut rng, n, 12, draw);
    let fam = PowersetFamily::new(n).map_err(|e| e.to_string())?;
    let miner = Miner::new(
        &fam,
        &ctx,
        &ExtensionalAbstraction::Identity,
        MinerConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut mined = BTreeMap::new();
    for ev in miner.mine() {
        if mined
            .insert(ev.concept.intent, ev.concept.extent.to_vec())
            .is_some()
        {
            return Err(format!("{:?} emitted twice", ev.concept.intent));
        }
    }
    let classical: BTreeMap<Pattern, Vec<usize>> = closed_itemsets(&ctx)
        .into_iter()
        .map(|p| (p, support_of(&ctx, &p)))
        .collect();
    ensure(mined == classical, || {
        format!("mined {mined:?} vs classical {classical:?}")
    })
}

/// Size of the random family drawn for `seed`, when it fits the default budget.
pub fn family_size(seed: u64) -> Option<usize> {
    let mut rng = random::rng(seed);
    let rf = random::accessible_family(&mut rng);
    materialize(rf.as_family(), DEFAULT_BUDGET)
        .ok()
        .map(|f| f.len())
}
