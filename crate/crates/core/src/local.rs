//! Explicit confluences: local meets and joins, subsets closed under local
//! meet and their closures, subconfluences of a lattice and the interior
//! family `p_t` they carry.

use thiserror::Error;

use crate::order::{membership, FiniteLattice, FinitePoset, OperatorMap};

/// Why a poset is not a confluence: the up-set of a minimal element is not a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfluenceWitness {
    /// The up-set of `minimal` has no greatest element.
    NoTop { minimal: usize },
    /// `x` and `y` have no greatest lower bound inside the up-set of `minimal`.
    NoMeet { minimal: usize, x: usize, y: usize },
}

/// Why a subset is not closed under local meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalMeetWitness {
    /// `⊤_t` is missing from the subset.
    MissingTop { t: usize },
    /// `x ∧_t y` is missing from the subset.
    Pair { t: usize, x: usize, y: usize },
}

/// `x, y >= t` in the family while `x ∨ y` is not in the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubconfluenceWitness {
    pub t: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("poset is not a confluence: {0:?}")]
    NotConfluence(ConfluenceWitness),
    #[error("element {x} is not above {t}")]
    NotAbove { t: usize, x: usize },
    #[error("element {0} is not a family member")]
    NotMember(usize),
    #[error("subset is not closed under local meet: {0:?}")]
    NotLocalMeetClosed(LocalMeetWitness),
    #[error("family is not a subconfluence: {0:?}")]
    NotSubconfluence(SubconfluenceWitness),
    #[error("operator domain has {0} elements, host has {1}")]
    DomainMismatch(usize, usize),
}

/// Checks that the up-set of every minimal element is a lattice.
///
/// Only minimal elements are inspected: any other up-set is an up-set inside
/// one of those lattices, with its own bottom, and is a lattice as well.
pub fn is_confluence(p: &FinitePoset) -> Result<(), ConfluenceWitness> {
    for m in p.minimals() {
        let up = p.up_set(m);
        if p.maximum_of(&up).is_none() {
            return Err(ConfluenceWitness::NoTop { minimal: m });
        }
        for (i, &x) in up.iter().enumerate() {
            for &y in &up[i + 1..] {
                let lower: Vec<usize> = up
                    .iter()
                    .copied()
                    .filter(|&z| p.leq(z, x) && p.leq(z, y))
                    .collect();
                if p.maximum_of(&lower).is_none() {
                    return Err(ConfluenceWitness::NoMeet { minimal: m, x, y });
                }
            }
        }
    }
    Ok(())
}

/// A finite confluence given explicitly by its order.
#[derive(Clone, Debug)]
pub struct ExplicitConfluence {
    carrier: FinitePoset,
    minimals: Vec<usize>,
    /// `⊤_t` for every element `t`.
    tops: Vec<usize>,
}

impl ExplicitConfluence {
    pub fn new(carrier: FinitePoset) -> Result<Self, LocalError> {
        is_confluence(&carrier).map_err(LocalError::NotConfluence)?;
        let minimals = carrier.minimals();
        let tops = (0..carrier.len())
            .map(|t| {
                carrier
                    .maximum_of(&carrier.up_set(t))
                    .expect("up-sets of a confluence have a top")
            })
            .collect();
        Ok(ExplicitConfluence {
            carrier,
            minimals,
            tops,
        })
    }

    pub fn carrier(&self) -> &FinitePoset {
        &self.carrier
    }

    pub fn minimals(&self) -> &[usize] {
        &self.minimals
    }

    /// `⊤_t`, the greatest element above `t`.
    pub fn local_top(&self, t: usize) -> usize {
        self.tops[t]
    }

    fn above(&self, t: usize, x: usize) -> Result<(), LocalError> {
        if self.carrier.leq(t, x) {
            Ok(())
        } else {
            Err(LocalError::NotAbove { t, x })
        }
    }

    /// `x ∧_t y`: greatest lower bound of `x` and `y` within the up-set of `t`.
    pub fn local_meet(&self, t: usize, x: usize, y: usize) -> Result<usize, LocalError> {
        self.above(t, x)?;
        self.above(t, y)?;
        let p = &self.carrier;
        let lower: Vec<usize> = p
            .up_set(t)
            .into_iter()
            .filter(|&z| p.leq(z, x) && p.leq(z, y))
            .collect();
        Ok(p.maximum_of(&lower)
            .expect("up-sets of a confluence are lattices"))
    }

    /// Least element above both `x` and `y`, if there is one.
    pub fn local_join(&self, x: usize, y: usize) -> Option<usize> {
        let p = &self.carrier;
        let upper: Vec<usize> = (0..p.len())
            .filter(|&z| p.leq(x, z) && p.leq(y, z))
            .collect();
        p.minimum_of(&upper)
    }

    /// Checks that `c ∩ F^t` contains `⊤_t` and is closed under `∧_t` for every `t`.
    pub fn is_closed_under_local_meet(&self, c: &[usize]) -> Result<(), LocalMeetWitness> {
        let p = &self.carrier;
        let member = membership(p.len(), c);
        for t in 0..p.len() {
            if !member[self.tops[t]] {
                return Err(LocalMeetWitness::MissingTop { t });
            }
            let local: Vec<usize> = (0..p.len()).filter(|&x| member[x] && p.leq(t, x)).collect();
            for (i, &x) in local.iter().enumerate() {
                for &y in &local[i + 1..] {
                    let m = self.local_meet(t, x, y).expect("both above t");
                    if !member[m] {
                        return Err(LocalMeetWitness::Pair { t, x, y });
                    }
                }
            }
        }
        Ok(())
    }

    /// The closure with range `c`: `f(t)` is the local meet of `c ∩ F^t`,
    /// starting from the empty meet `⊤_t`.
    pub fn closure_from_local_meet_subset(&self, c: &[usize]) -> Result<OperatorMap, LocalError> {
        self.is_closed_under_local_meet(c)
            .map_err(LocalError::NotLocalMeetClosed)?;
        let p = &self.carrier;
        let member = membership(p.len(), c);
        let table = (0..p.len())
            .map(|t| {
                (0..p.len())
                    .filter(|&x| member[x] && p.leq(t, x))
                    .fold(self.tops[t], |acc, x| {
                        self.local_meet(t, acc, x).expect("both above t")
                    })
            })
            .collect();
        Ok(OperatorMap::new(p.clone(), table).expect("table indexes the carrier"))
    }
}

/// Checks that `x ∨ y` belongs to `fam` whenever `x` and `y` are members above a common member `t`.
pub fn is_subconfluence(host: &FiniteLattice, fam: &[usize]) -> Result<(), SubconfluenceWitness> {
    let mut members = fam.to_vec();
    members.sort_unstable();
    members.dedup();
    let member = membership(host.len(), &members);
    for &t in &members {
        let above: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&x| host.leq(t, x))
            .collect();
        for (i, &x) in above.iter().enumerate() {
            for &y in &above[i + 1..] {
                if !member[host.join(x, y)] {
                    return Err(SubconfluenceWitness { t, x, y });
                }
            }
        }
    }
    Ok(())
}

/// A subconfluence `F` of a finite lattice together with its projections
/// `p_t(x) = ⋁ { q ∈ F : t <= q <= x }`.
#[derive(Clone, Debug)]
pub struct InteriorFamily {
    host: FiniteLattice,
    members: Vec<usize>,
    member: Vec<bool>,
    minimals: Vec<usize>,
}

impl InteriorFamily {
    pub fn new(host: FiniteLattice, fam: &[usize]) -> Result<Self, LocalError> {
        let mut members = fam.to_vec();
        members.sort_unstable();
        members.dedup();
        is_subconfluence(&host, &members).map_err(LocalError::NotSubconfluence)?;
        let member = membership(host.len(), &members);
        let minimals = members
            .iter()
            .copied()
            .filter(|&x| members.iter().all(|&y| y == x || !host.leq(y, x)))
            .collect();
        Ok(InteriorFamily {
            host,
            members,
            member,
            minimals,
        })
    }

    pub fn host(&self) -> &FiniteLattice {
        &self.host
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member.get(x).copied().unwrap_or(false)
    }

    pub fn minimals(&self) -> &[usize] {
        &self.minimals
    }

    /// `p_t(x)` computed at `t` itself, straight from the definition.
    pub fn project_at(&self, t: usize, x: usize) -> Result<usize, LocalError> {
        if !self.contains(t) {
            return Err(LocalError::NotMember(t));
        }
        if !self.host.leq(t, x) {
            return Err(LocalError::NotAbove { t, x });
        }
        let below = self
            .members
            .iter()
            .copied()
            .filter(|&q| self.host.leq(t, q) && self.host.leq(q, x));
        Ok(self.host.join_all(below))
    }

    /// `p_t(x)`, routed through the smallest minimal element below `t`.
    /// Projections agree for every member below `t`, so the route only fixes determinism.
    pub fn interior_project(&self, t: usize, x: usize) -> Result<usize, LocalError> {
        if !self.contains(t) {
            return Err(LocalError::NotMember(t));
        }
        if !self.host.leq(t, x) {
            return Err(LocalError::NotAbove { t, x });
        }
        let m = self
            .minimals
            .iter()
            .copied()
            .find(|&m| self.host.leq(m, t))
            .expect("every member lies above a minimal");
        self.project_at(m, x)
    }

    /// The family as a poset; index `i` is `members()[i]`.
    pub fn poset(&self) -> FinitePoset {
        self.host.poset().restrict(&self.members)
    }

    /// `f_F(t) = p_t(f(t))` for a closure `f` on the host, as an operator on the family poset.
    pub fn lift_closure(&self, f: &OperatorMap) -> Result<OperatorMap, LocalError> {
        if f.domain().len() != self.host.len() {
            return Err(LocalError::DomainMismatch(
                f.domain().len(),
                self.host.len(),
            ));
        }
        let position = |x: usize| {
            self.members
                .binary_search(&x)
                .expect("projection is a member")
        };
        let table = self
            .members
            .iter()
            .map(|&t| self.interior_project(t, f.apply(t)).map(position))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OperatorMap::new(self.poset(), table).expect("table indexes the family"))
    }
}
