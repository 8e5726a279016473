//! Explicit finite posets and lattices, and closure/interior operators on them.
//!
//! Elements are dense indices `0..n`. The order is stored as a reachability
//! bit matrix so `leq` is a constant-time lookup; everything here is meant
//! for structures of at most a few thousand elements.

use thiserror::Error;

use crate::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("cover relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("elements {0} and {1} have no meet")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no join")]
    NoJoin(usize, usize),
    #[error("poset is empty")]
    Empty,
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("operator is not an interior operator: {0:?}")]
    NotInterior(Violation),
    #[error("operator is not a closure operator: {0:?}")]
    NotClosure(Violation),
    #[error("operators are defined on posets of different sizes ({0} vs {1})")]
    DomainMismatch(usize, usize),
}

/// A finite partially ordered set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    n: usize,
    stride: usize,
    leq: Vec<u64>,
}

impl FinitePoset {
    /// Builds a poset from an arbitrary relation, checking the partial order laws.
    pub fn from_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        let n = labels.len();
        let mut p = FinitePoset::unchecked(labels);
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    p.set(x, y);
                }
            }
        }
        p.check_laws()?;
        Ok(p)
    }

    /// Builds a poset from lower covers: `covers[x]` lists elements directly below `x`.
    /// The order is the reflexive-transitive closure of the cover relation.
    pub fn from_covers(labels: Vec<String>, covers: &[Vec<usize>]) -> Result<Self, OrderError> {
        let n = labels.len();
        let mut p = FinitePoset::unchecked(labels);
        for (x, below) in covers.iter().enumerate() {
            for &y in below {
                if y >= n {
                    return Err(OrderError::OutOfRange(y));
                }
                p.set(y, x);
            }
        }
        for x in 0..n {
            p.set(x, x);
        }
        // Warshall on bit rows.
        for k in 0..n {
            for i in 0..n {
                if p.leq(i, k) {
                    let (ri, rk) = (i * p.stride, k * p.stride);
                    for w in 0..p.stride {
                        let bits = p.leq[rk + w];
                        p.leq[ri + w] |= bits;
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..x {
                if p.leq(x, y) && p.leq(y, x) {
                    return Err(OrderError::Cycle(y));
                }
            }
        }
        Ok(p)
    }

    /// Patterns ordered by inclusion. Labels are item-index words (`a`, `ab`, ...).
    pub fn from_patterns(patterns: &[Pattern]) -> Self {
        let labels = patterns.iter().map(pattern_label).collect();
        let mut p = FinitePoset::unchecked(labels);
        for (i, x) in patterns.iter().enumerate() {
            for (j, y) in patterns.iter().enumerate() {
                if x.is_subset(y) {
                    p.set(i, j);
                }
            }
        }
        p
    }

    /// The boolean lattice order on subsets of `items` items; element `i` is the mask `i`.
    pub fn powerset(items: usize) -> Self {
        assert!(items <= 12, "powerset poset limited to 12 items");
        let n = 1usize << items;
        let labels = (0..n)
            .map(|m| pattern_label(&Pattern::from_mask(m as u64)))
            .collect();
        let mut p = FinitePoset::unchecked(labels);
        for x in 0..n {
            for y in 0..n {
                if x & !y == 0 {
                    p.set(x, y);
                }
            }
        }
        p
    }

    fn unchecked(labels: Vec<String>) -> Self {
        let n = labels.len();
        let stride = n.div_ceil(64).max(1);
        FinitePoset {
            labels,
            n,
            stride,
            leq: vec![0; n * stride],
        }
    }

    fn set(&mut self, x: usize, y: usize) {
        self.leq[x * self.stride + y / 64] |= 1u64 << (y % 64);
    }

    fn check_laws(&self) -> Result<(), OrderError> {
        let n = self.n;
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(OrderError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if self.leq(x, y) && self.leq(y, x) {
                    return Err(OrderError::NotAntisymmetric(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.leq(y, z) && !self.leq(x, z) {
                        return Err(OrderError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.stride + y / 64] & (1u64 << (y % 64)) != 0
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `E^x`: elements above `x`.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(x, y)).collect()
    }

    /// `E_x`: elements below `x`.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn minimals(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| (0..self.n).all(|y| !self.lt(y, x)))
            .collect()
    }

    pub fn maximals(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| (0..self.n).all(|y| !self.lt(x, y)))
            .collect()
    }

    /// Greatest element of `set`, if one exists.
    pub fn maximum_of(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&x| set.iter().all(|&y| self.leq(y, x)))
    }

    /// Least element of `set`, if one exists.
    pub fn minimum_of(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&x| set.iter().all(|&y| self.leq(x, y)))
    }

    /// The induced subposet on `elements`; index `i` of the result is `elements[i]`.
    pub fn restrict(&self, elements: &[usize]) -> FinitePoset {
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let mut p = FinitePoset::unchecked(labels);
        for (i, &x) in elements.iter().enumerate() {
            for (j, &y) in elements.iter().enumerate() {
                if self.leq(x, y) {
                    p.set(i, j);
                }
            }
        }
        p
    }
}

/// Renders a pattern as a word over `a..z` (items beyond 25 as `#i`), `∅` when empty.
pub fn pattern_label(p: &Pattern) -> String {
    if p.is_empty() {
        return "∅".to_string();
    }
    p.iter()
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("#{i}")
            }
        })
        .collect()
}

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FiniteLattice {
    pub fn from_poset(poset: FinitePoset) -> Result<Self, OrderError> {
        let n = poset.len();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let all: Vec<usize> = (0..n).collect();
        for x in 0..n {
            for y in x..n {
                let lower: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|&z| poset.leq(z, x) && poset.leq(z, y))
                    .collect();
                let m = poset.maximum_of(&lower).ok_or(OrderError::NoMeet(x, y))?;
                let upper: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|&z| poset.leq(x, z) && poset.leq(y, z))
                    .collect();
                let j = poset.minimum_of(&upper).ok_or(OrderError::NoJoin(x, y))?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let top = poset.maximum_of(&all).ok_or(OrderError::NoJoin(0, 0))?;
        let bottom = poset.minimum_of(&all).ok_or(OrderError::NoMeet(0, 0))?;
        Ok(FiniteLattice {
            poset,
            meet,
            join,
            top,
            bottom,
        })
    }

    /// The boolean lattice `2^items`; element `i` is the subset with mask `i`.
    pub fn powerset(items: usize) -> Self {
        let poset = FinitePoset::powerset(items);
        let n = poset.len();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[x * n + y] = x & y;
                join[x * n + y] = x | y;
            }
        }
        FiniteLattice {
            poset,
            meet,
            join,
            top: n - 1,
            bottom: 0,
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Meet of a set; the empty meet is the top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is the bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }
}

/// A total self-map on a finite poset, before any classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMap {
    domain: FinitePoset,
    table: Vec<usize>,
}

impl OperatorMap {
    pub fn new(domain: FinitePoset, table: Vec<usize>) -> Result<Self, OrderError> {
        if table.len() != domain.len() {
            return Err(OrderError::DomainMismatch(domain.len(), table.len()));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= domain.len()) {
            return Err(OrderError::OutOfRange(bad));
        }
        Ok(OperatorMap { domain, table })
    }

    pub fn identity(domain: FinitePoset) -> Self {
        let table = (0..domain.len()).collect();
        OperatorMap { domain, table }
    }

    pub fn domain(&self) -> &FinitePoset {
        &self.domain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Sorted image `f[E]`.
    pub fn range(&self) -> Vec<usize> {
        let mut r = self.table.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// First operator law found broken, by element index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `x <= y` but `f(x) </= f(y)`.
    NotMonotone {
        x: usize,
        y: usize,
    },
    NotIdempotent {
        x: usize,
    },
    NotExtensive {
        x: usize,
    },
    NotIntensive {
        x: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorClass {
    /// Both a closure and an interior operator (only the identity).
    ClosureAndInterior,
    Closure,
    Interior,
    Neither(Violation),
}

impl OperatorClass {
    pub fn is_closure(&self) -> bool {
        matches!(
            self,
            OperatorClass::Closure | OperatorClass::ClosureAndInterior
        )
    }

    pub fn is_interior(&self) -> bool {
        matches!(
            self,
            OperatorClass::Interior | OperatorClass::ClosureAndInterior
        )
    }
}

/// Classifies `m` by checking monotony, idempotence, then extensivity and
/// intensivity, scanning elements in index order.
pub fn classify_operator(m: &OperatorMap) -> OperatorClass {
    let p = &m.domain;
    let n = p.len();
    for x in 0..n {
        for y in 0..n {
            if p.leq(x, y) && !p.leq(m.apply(x), m.apply(y)) {
                return OperatorClass::Neither(Violation::NotMonotone { x, y });
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| m.apply(m.apply(x)) != m.apply(x)) {
        return OperatorClass::Neither(Violation::NotIdempotent { x });
    }
    let not_extensive = (0..n).find(|&x| !p.leq(x, m.apply(x)));
    let not_intensive = (0..n).find(|&x| !p.leq(m.apply(x), x));
    match (not_extensive, not_intensive) {
        (None, None) => OperatorClass::ClosureAndInterior,
        (None, Some(_)) => OperatorClass::Closure,
        (Some(_), None) => OperatorClass::Interior,
        (Some(x), Some(_)) => OperatorClass::Neither(Violation::NotExtensive { x }),
    }
}

/// The closure whose range is `c`: `f(x)` is the least element of `c` above `x`.
/// Fails with the first `x` whose upper part of `c` has no least element.
pub fn closure_from_subset(p: &FinitePoset, c: &[usize]) -> Result<OperatorMap, usize> {
    let mut table = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        let above: Vec<usize> = c.iter().copied().filter(|&y| p.leq(x, y)).collect();
        table.push(p.minimum_of(&above).ok_or(x)?);
    }
    Ok(OperatorMap {
        domain: p.clone(),
        table,
    })
}

/// The interior operator whose range is `a`: `p(x)` is the greatest element of `a` below `x`.
pub fn interior_from_subset(p: &FinitePoset, a: &[usize]) -> Result<OperatorMap, usize> {
    let mut table = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        let below: Vec<usize> = a.iter().copied().filter(|&y| p.leq(y, x)).collect();
        table.push(p.maximum_of(&below).ok_or(x)?);
    }
    Ok(OperatorMap {
        domain: p.clone(),
        table,
    })
}

/// Why a subset fails to be meet- or join-closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosednessWitness {
    /// The empty meet (top) is missing.
    MissingTop,
    /// The empty join (bottom) is missing.
    MissingBottom,
    /// The meet or join of these two members is missing.
    Pair(usize, usize),
}

/// Checks that `c` contains the top and every pairwise meet.
pub fn is_meet_closed(l: &FiniteLattice, c: &[usize]) -> Result<(), ClosednessWitness> {
    let member = membership(l.len(), c);
    if !member[l.top()] {
        return Err(ClosednessWitness::MissingTop);
    }
    for (i, &x) in c.iter().enumerate() {
        for &y in &c[i + 1..] {
            if !member[l.meet(x, y)] {
                return Err(ClosednessWitness::Pair(x.min(y), x.max(y)));
            }
        }
    }
    Ok(())
}

/// Checks that `c` contains the bottom and every pairwise join.
pub fn is_join_closed(l: &FiniteLattice, c: &[usize]) -> Result<(), ClosednessWitness> {
    let member = membership(l.len(), c);
    if !member[l.bottom()] {
        return Err(ClosednessWitness::MissingBottom);
    }
    for (i, &x) in c.iter().enumerate() {
        for &y in &c[i + 1..] {
            if !member[l.join(x, y)] {
                return Err(ClosednessWitness::Pair(x.min(y), x.max(y)));
            }
        }
    }
    Ok(())
}

pub(crate) fn membership(n: usize, c: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &x in c {
        member[x] = true;
    }
    member
}

/// `p ∘ f` restricted to the range of the interior operator `p`.
///
/// Index `i` of the resulting domain is the `i`-th element of `p.range()`.
pub fn compose_interior_closure(
    p: &OperatorMap,
    f: &OperatorMap,
) -> Result<OperatorMap, OrderError> {
    if p.domain.len() != f.domain.len() {
        return Err(OrderError::DomainMismatch(p.domain.len(), f.domain.len()));
    }
    match classify_operator(p) {
        c if c.is_interior() => {}
        OperatorClass::Neither(v) => return Err(OrderError::NotInterior(v)),
        _ => return Err(OrderError::NotInterior(Violation::NotIntensive { x: 0 })),
    }
    match classify_operator(f) {
        c if c.is_closure() => {}
        OperatorClass::Neither(v) => return Err(OrderError::NotClosure(v)),
        _ => return Err(OrderError::NotClosure(Violation::NotExtensive { x: 0 })),
    }
    let range = p.range();
    let mut position = vec![usize::MAX; p.domain.len()];
    for (i, &x) in range.iter().enumerate() {
        position[x] = i;
    }
    let table = range
        .iter()
        .map(|&x| position[p.apply(f.apply(x))])
        .collect();
    Ok(OperatorMap {
        domain: p.domain.restrict(&range),
        table,
    })
}
