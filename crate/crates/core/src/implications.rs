//! Support equivalence classes and the min-max implication basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::galois::{support_closure, ObjectContext};
use crate::pattern::{Extent, Pattern};
use crate::setsys::ExplicitFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ImplicationKind {
    /// Premise below conclusion.
    Internal,
    /// Premise and conclusion incomparable.
    External,
}

impl fmt::Display for ImplicationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImplicationKind::Internal => "internal",
            ImplicationKind::External => "external",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implication {
    pub premise: Pattern,
    pub conclusion: Pattern,
    pub kind: ImplicationKind,
}

/// Members of a family sharing one support set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub extent: Extent,
    /// Sorted.
    pub members: Vec<Pattern>,
    /// Members with no other member strictly below them.
    pub generators: Vec<Pattern>,
    /// Members fixed by support closure.
    pub closed: Vec<Pattern>,
}

/// Groups the family by support set; classes come in order of their smallest member.
pub fn equivalence_classes(ctx: &ObjectContext, fam: &ExplicitFamily) -> Vec<EquivalenceClass> {
    let mut by_extent: BTreeMap<Extent, Vec<Pattern>> = BTreeMap::new();
    for t in fam.members() {
        by_extent.entry(ctx.ext(t)).or_default().push(*t);
    }
    let mut classes: Vec<EquivalenceClass> = by_extent
        .into_iter()
        .map(|(extent, members)| {
            let generators = members
                .iter()
                .copied()
                .filter(|p| !members.iter().any(|q| q != p && q.is_subset(p)))
                .collect();
            let closed = members
                .iter()
                .copied()
                .filter(|t| support_closure(ctx, fam, t).ok() == Some(*t))
                .collect();
            EquivalenceClass {
                extent,
                members,
                generators,
                closed,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    classes
}

/// All `p -> q` with `p` a generator and `q` a closed member of the same
/// class, `p != q`; sorted by kind, premise, conclusion.
pub fn minmax_basis(ctx: &ObjectContext, fam: &ExplicitFamily) -> Vec<Implication> {
    let mut basis: Vec<Implication> = equivalence_classes(ctx, fam)
        .iter()
        .flat_map(|class| {
            class.generators.iter().flat_map(move |&p| {
                class
                    .closed
                    .iter()
                    .filter(move |&&q| q != p)
                    .map(move |&q| Implication {
                        premise: p,
                        conclusion: q,
                        kind: if p.is_subset(&q) {
                            ImplicationKind::Internal
                        } else {
                            ImplicationKind::External
                        },
                    })
            })
        })
        .collect();
    basis.sort_by_key(|i| (i.kind, i.premise, i.conclusion));
    basis
}

/// `p -> q` holds when every object containing `p` contains `q`.
pub fn check_implication(ctx: &ObjectContext, imp: &Implication) -> bool {
    ctx.ext(&imp.premise).is_subset(&ctx.ext(&imp.conclusion))
}
