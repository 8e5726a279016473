//! The Galois connection between object sets and patterns, extensional
//! abstractions, and support closure over pattern families.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::miner::{MineError, Miner, MinerConfig, OutputOrder};
use crate::order::FinitePoset;
use crate::pattern::{Extent, Pattern};
use crate::setsys::{ExplicitFamily, Family};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("object {object} mentions item {item} outside a universe of {universe} items")]
    ItemOutOfUniverse {
        object: usize,
        item: usize,
        universe: usize,
    },
    #[error("pattern {0:?} is not a member of the family")]
    NotInFamily(Pattern),
    #[error("{minimal:?} is not a minimal member below {pattern:?}")]
    BadAnchor { pattern: Pattern, minimal: Pattern },
    #[error("abstraction generator mentions object {object} outside {objects} objects")]
    ObjectOutOfRange { object: usize, objects: usize },
    #[error("context has {context} items, family has {family}")]
    UniverseMismatch { context: usize, family: usize },
}

/// Objects described by patterns over a common item universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectContext {
    universe: usize,
    descriptions: Vec<Pattern>,
    /// Per item, the objects whose description contains it.
    columns: Vec<Extent>,
}

impl ObjectContext {
    pub fn new(universe: usize, descriptions: Vec<Pattern>) -> Result<Self, GaloisError> {
        let full = Pattern::full(universe);
        for (object, d) in descriptions.iter().enumerate() {
            if let Some(item) = d.difference(&full).first() {
                return Err(GaloisError::ItemOutOfUniverse {
                    object,
                    item,
                    universe,
                });
            }
        }
        let n = descriptions.len();
        let mut columns = vec![Extent::empty(n); universe];
        for (o, d) in descriptions.iter().enumerate() {
            for i in d.iter() {
                columns[i].insert(o);
            }
        }
        Ok(ObjectContext {
            universe,
            descriptions,
            columns,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.descriptions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptions.is_empty()
    }

    pub fn description(&self, o: usize) -> &Pattern {
        &self.descriptions[o]
    }

    pub fn descriptions(&self) -> &[Pattern] {
        &self.descriptions
    }

    /// Objects containing `item`.
    pub fn column(&self, item: usize) -> &Extent {
        &self.columns[item]
    }

    /// `ext(t)`: objects whose description contains `t`.
    pub fn ext(&self, t: &Pattern) -> Extent {
        let mut e = Extent::full(self.len());
        for i in t.iter() {
            match self.columns.get(i) {
                Some(col) => e.intersect_with(col),
                None => return Extent::empty(self.len()),
            }
        }
        e
    }

    /// `int(e)`: items shared by every object of `e`; the whole universe when `e` is empty.
    pub fn int(&self, e: &Extent) -> Pattern {
        e.iter().fold(Pattern::full(self.universe), |acc, o| {
            acc.intersection(&self.descriptions[o])
        })
    }
}

/// An interior operator `p_A` on `2^O` whose range `A` is union-closed and contains `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionalAbstraction {
    /// `A = 2^O`.
    Identity,
    /// `A` is the union-closure of the generators, plus `∅`.
    Generators(Vec<Extent>),
    /// `A` holds `∅` and every object set of at least this size.
    MinSupport(usize),
}

impl ExtensionalAbstraction {
    pub fn generators(objects: usize, gens: Vec<Vec<usize>>) -> Result<Self, GaloisError> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if let Some(&object) = g.iter().find(|&&o| o >= objects) {
                return Err(GaloisError::ObjectOutOfRange { object, objects });
            }
            out.push(Extent::from_objects(objects, g));
        }
        Ok(ExtensionalAbstraction::Generators(out))
    }

    /// `p_A(e)`: the union of the members of `A` contained in `e`.
    pub fn project(&self, e: &Extent) -> Extent {
        match self {
            ExtensionalAbstraction::Identity => e.clone(),
            ExtensionalAbstraction::MinSupport(s) => {
                if e.len() >= *s {
                    e.clone()
                } else {
                    Extent::empty(e.universe())
                }
            }
            ExtensionalAbstraction::Generators(gens) => gens
                .iter()
                .filter(|g| g.is_subset(e))
                .fold(Extent::empty(e.universe()), |acc, g| acc.union(g)),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, ExtensionalAbstraction::Identity)
            || matches!(self, ExtensionalAbstraction::MinSupport(s) if *s == 0)
    }

    /// The members of `A`, sorted. Exponential in `objects`; meant for small cases.
    pub fn members(&self, objects: usize) -> Vec<Extent> {
        let mut out = BTreeSet::new();
        match self {
            ExtensionalAbstraction::Generators(gens) => {
                out.insert(Extent::empty(objects));
                let mut frontier: Vec<Extent> = vec![Extent::empty(objects)];
                while let Some(x) = frontier.pop() {
                    for g in gens {
                        let y = x.union(g);
                        if out.insert(y.clone()) {
                            frontier.push(y);
                        }
                    }
                }
            }
            _ => {
                assert!(objects <= 20, "too many objects to list 2^O");
                for mask in 0u64..(1 << objects) {
                    let e =
                        Extent::from_objects(objects, (0..objects).filter(|o| mask >> o & 1 == 1));
                    if self.project(&e) == e {
                        out.insert(e);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

/// A pair of mutually corresponding closed elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concept {
    /// Abstract support `p_A(ext(intent))`.
    pub extent: Extent,
    pub intent: Pattern,
    /// Minimal member whose projection certified the closure.
    pub anchor_minimal: Pattern,
    /// Set when the abstract support is empty; the intent is then `⊤_m`.
    pub empty_support: bool,
}

/// The closed patterns of a family with their supports, ordered by intent.
#[derive(Clone, Debug, Default)]
pub struct ConceptConfluence {
    pub concepts: Vec<Concept>,
}

impl ConceptConfluence {
    pub fn intents(&self) -> Vec<Pattern> {
        self.concepts.iter().map(|c| c.intent).collect()
    }

    pub fn get(&self, intent: &Pattern) -> Option<&Concept> {
        self.concepts
            .binary_search_by(|c| c.intent.cmp(intent))
            .ok()
            .map(|i| &self.concepts[i])
    }

    /// The intents ordered by inclusion.
    pub fn poset(&self) -> FinitePoset {
        FinitePoset::from_patterns(&self.intents())
    }
}

fn check_member(fam: &dyn Family, t: &Pattern) -> Result<Pattern, GaloisError> {
    if !fam.contains(t) {
        return Err(GaloisError::NotInFamily(*t));
    }
    Ok(fam.anchor(t).expect("members lie above a minimal"))
}

/// `f(t) = p_m(int(ext(t)))` for the smallest minimal `m ⊆ t`.
pub fn support_closure(
    ctx: &ObjectContext,
    fam: &dyn Family,
    t: &Pattern,
) -> Result<Pattern, GaloisError> {
    abstract_support_closure(ctx, fam, &ExtensionalAbstraction::Identity, t)
}

/// Support closure routed through a caller-chosen minimal `m ⊆ t`.
pub fn support_closure_via(
    ctx: &ObjectContext,
    fam: &dyn Family,
    t: &Pattern,
    m: &Pattern,
) -> Result<Pattern, GaloisError> {
    check_member(fam, t)?;
    if !fam.minimals().contains(m) || !m.is_subset(t) {
        return Err(GaloisError::BadAnchor {
            pattern: *t,
            minimal: *m,
        });
    }
    Ok(fam.project(m, &ctx.int(&ctx.ext(t))))
}

/// `f_A(t) = p_m(int(p_A(ext(t))))`.
pub fn abstract_support_closure(
    ctx: &ObjectContext,
    fam: &dyn Family,
    abs: &ExtensionalAbstraction,
    t: &Pattern,
) -> Result<Pattern, GaloisError> {
    let m = check_member(fam, t)?;
    Ok(fam.project(&m, &ctx.int(&abs.project(&ctx.ext(t)))))
}

/// All concepts of the family, listed by the miner and sorted by intent.
pub fn build_concept_confluence(
    ctx: &ObjectContext,
    fam: &dyn Family,
    abs: &ExtensionalAbstraction,
) -> Result<ConceptConfluence, MineError> {
    let config = MinerConfig {
        order: OutputOrder::Sorted,
        ..MinerConfig::default()
    };
    let miner = Miner::new(fam, ctx, abs, config)?;
    let concepts = miner.mine().into_iter().map(|ev| ev.concept).collect();
    Ok(ConceptConfluence { concepts })
}

/// Both sides of the extent decomposition when they differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionMismatch {
    /// Support sets of members missing from the union of closure ranges.
    pub only_in_supports: Vec<Extent>,
    /// Closure range elements that are not support sets of members.
    pub only_in_ranges: Vec<Extent>,
}

/// Checks `ext[F] = ⋃_m h_m[2^{ext(m)}]` with `h_m = ext ∘ p_m ∘ int`.
pub fn verify_extent_decomposition(
    ctx: &ObjectContext,
    fam: &ExplicitFamily,
) -> Result<(), DecompositionMismatch> {
    let supports: BTreeSet<Extent> = fam.members().iter().map(|t| ctx.ext(t)).collect();
    let mut ranges = BTreeSet::new();
    for m in fam.minimals() {
        let base = ctx.ext(m).to_vec();
        assert!(base.len() <= 24, "support of {m:?} too large to enumerate");
        for mask in 0u64..(1u64 << base.len()) {
            let x = Extent::from_objects(
                ctx.len(),
                base.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &o)| o),
            );
            ranges.insert(ctx.ext(&fam.project(m, &ctx.int(&x))));
        }
    }
    if supports == ranges {
        Ok(())
    } else {
        Err(DecompositionMismatch {
            only_in_supports: supports.difference(&ranges).cloned().collect(),
            only_in_ranges: ranges.difference(&supports).cloned().collect(),
        })
    }
}

/// Whether support closure exists over a candidate family for every context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExistenceVerdict {
    Exists,
    /// `x` and `y` lie above `t` while `x ∪ y` is missing. In the context
    /// made of the single object `x ∪ y`, `t`, `x` and `y` share one support
    /// set and `maxima` lists the incomparable greatest members with it above
    /// `t`, so no monotone choice of `f(t)` exists.
    Fails {
        t: Pattern,
        x: Pattern,
        y: Pattern,
        context: ObjectContext,
        maxima: Vec<Pattern>,
    },
}

pub fn support_closure_existence_check(candidate: &[Pattern], universe: usize) -> ExistenceVerdict {
    let mut members = candidate.to_vec();
    members.sort();
    members.dedup();
    let lookup: BTreeSet<Pattern> = members.iter().copied().collect();
    let minimals: Vec<Pattern> = members
        .iter()
        .copied()
        .filter(|x| !members.iter().any(|y| y != x && y.is_subset(x)))
        .collect();
    for (i, x) in members.iter().enumerate() {
        for y in &members[i + 1..] {
            let meet = x.intersection(y);
            let Some(t) = minimals.iter().find(|m| m.is_subset(&meet)) else {
                continue;
            };
            let join = x.union(y);
            if lookup.contains(&join) {
                continue;
            }
            let context = ObjectContext::new(universe, vec![join])
                .expect("join of members stays in the universe");
            let maxima = same_support_maxima(&members, &context, t);
            return ExistenceVerdict::Fails {
                t: *t,
                x: *x,
                y: *y,
                context,
                maxima,
            };
        }
    }
    ExistenceVerdict::Exists
}

/// Maximal members above `t` with the same support set as `t`.
pub fn same_support_maxima(members: &[Pattern], ctx: &ObjectContext, t: &Pattern) -> Vec<Pattern> {
    let e = ctx.ext(t);
    let same: Vec<&Pattern> = members
        .iter()
        .filter(|x| t.is_subset(x) && ctx.ext(x) == e)
        .collect();
    same.iter()
        .filter(|x| !same.iter().any(|y| y != *x && x.is_subset(y)))
        .map(|x| **x)
        .collect()
}
