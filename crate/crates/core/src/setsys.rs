//! Implicit pattern families: subconfluences of `2^S` exposed through
//! membership, minimal elements, single-item augmentations and the
//! per-member projections `p_m`.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::pattern::{Pattern, MAX_ITEMS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SetsysError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("universe of {0} items exceeds the supported {MAX_ITEMS}")]
    UniverseTooLarge(usize),
    #[error("item {item} lies outside a universe of {universe} items")]
    ItemOutOfRange { item: usize, universe: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {0} out of range")]
    BadEndpoint(usize),
    #[error("family is not a subconfluence: {t:?} <= {x:?}, {y:?} but their union is missing")]
    NotSubconfluence { t: Pattern, x: Pattern, y: Pattern },
    #[error("maximal gap must be at least 1")]
    ZeroGap,
}

/// A pattern family `F ⊆ 2^S` with the operations the miner needs.
///
/// Implementations must be subconfluences: whenever `x, y ∈ F` contain a
/// common member `t`, `x ∪ y ∈ F`.
pub trait Family: Send + Sync {
    /// `|S|`.
    fn universe(&self) -> usize;

    fn contains(&self, p: &Pattern) -> bool;

    /// Minimal members, sorted in pattern order.
    fn minimals(&self) -> &[Pattern];

    /// The smallest minimal member contained in `p`.
    fn anchor(&self, p: &Pattern) -> Option<Pattern> {
        self.minimals().iter().find(|m| m.is_subset(p)).copied()
    }

    /// Items `e ∉ p` with `p ∪ {e} ∈ F`, ascending.
    fn augmentations(&self, p: &Pattern) -> Vec<usize> {
        (0..self.universe())
            .filter(|&e| !p.contains(e) && self.contains(&p.with(e)))
            .collect()
    }

    /// `p_m(x)`: the greatest member below `x` containing the member `m`.
    /// Requires `m ⊆ x`.
    fn project(&self, m: &Pattern, x: &Pattern) -> Pattern;

    /// `⊤_m`, the greatest member containing `m`.
    fn local_top(&self, m: &Pattern) -> Pattern {
        self.project(m, &Pattern::full(self.universe()))
    }

    /// The explicit member list, when the family is given by one.
    fn explicit(&self) -> Option<&ExplicitFamily> {
        None
    }
}

/// An undirected simple graph with named vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    vertex_names: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_names: Vec<String>,
}

impl GraphSpec {
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        edge_names: Vec<String>,
    ) -> Result<Self, SetsysError> {
        let n = vertex_names.len();
        for &(u, v) in &edges {
            if u >= n {
                return Err(SetsysError::BadEndpoint(u));
            }
            if v >= n {
                return Err(SetsysError::BadEndpoint(v));
            }
            if u == v {
                return Err(SetsysError::SelfLoop(u));
            }
        }
        assert_eq!(edges.len(), edge_names.len(), "one name per edge");
        Ok(GraphSpec {
            vertex_names,
            edges,
            edge_names,
        })
    }

    /// Unnamed graph on `n` vertices `v0..`, edges named `u-v`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, SetsysError> {
        let vertex_names = (0..n).map(|i| format!("v{i}")).collect();
        let edge_names = edges.iter().map(|(u, v)| format!("v{u}-v{v}")).collect();
        GraphSpec::new(vertex_names, edges.to_vec(), edge_names)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }
}

/// Vertex sets inducing a connected subgraph, of size at least `min_size`.
#[derive(Clone, Debug)]
pub struct ConnectedVertexFamily {
    n: usize,
    adjacency: Vec<Pattern>,
    min_size: usize,
    minimals: Vec<Pattern>,
}

impl ConnectedVertexFamily {
    pub fn new(graph: &GraphSpec, min_size: usize) -> Result<Self, SetsysError> {
        Self::from_adjacency(graph.vertex_count(), graph.edges(), min_size)
    }

    fn from_adjacency(
        n: usize,
        edges: &[(usize, usize)],
        min_size: usize,
    ) -> Result<Self, SetsysError> {
        if n > MAX_ITEMS {
            return Err(SetsysError::UniverseTooLarge(n));
        }
        if min_size > n || n == 0 {
            return Err(SetsysError::EmptyFamily);
        }
        let mut adjacency = vec![Pattern::empty(); n];
        for &(u, v) in edges {
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        let mut fam = ConnectedVertexFamily {
            n,
            adjacency,
            min_size: min_size.max(1),
            minimals: Vec::new(),
        };
        fam.minimals = fam.connected_sets_of_size(fam.min_size);
        if fam.minimals.is_empty() {
            return Err(SetsysError::EmptyFamily);
        }
        Ok(fam)
    }

    pub fn min_size(&self) -> usize {
        self.min_size
    }

    fn neighbourhood(&self, p: &Pattern) -> Pattern {
        p.iter()
            .fold(Pattern::empty(), |acc, v| acc.union(&self.adjacency[v]))
    }

    /// Vertices of `within` reachable from `seed` inside the subgraph induced by `within`.
    pub fn component(&self, seed: &Pattern, within: &Pattern) -> Pattern {
        let mut comp = seed.intersection(within);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let next = self
                .neighbourhood(&frontier)
                .intersection(within)
                .difference(&comp);
            comp = comp.union(&next);
            frontier = next;
        }
        comp
    }

    fn is_connected(&self, p: &Pattern) -> bool {
        match p.first() {
            None => false,
            Some(v) => self.component(&Pattern::singleton(v), p) == *p,
        }
    }

    fn connected_sets_of_size(&self, k: usize) -> Vec<Pattern> {
        let mut level: BTreeSet<Pattern> = (0..self.n).map(Pattern::singleton).collect();
        for _ in 1..k {
            let mut next = BTreeSet::new();
            for p in &level {
                for v in self.neighbourhood(p).difference(p).iter() {
                    next.insert(p.with(v));
                }
            }
            level = next;
        }
        level.into_iter().collect()
    }
}

impl Family for ConnectedVertexFamily {
    fn universe(&self) -> usize {
        self.n
    }

    fn contains(&self, p: &Pattern) -> bool {
        p.len() >= self.min_size && p.is_subset(&Pattern::full(self.n)) && self.is_connected(p)
    }

    fn minimals(&self) -> &[Pattern] {
        &self.minimals
    }

    fn anchor(&self, p: &Pattern) -> Option<Pattern> {
        if self.min_size == 1 {
            p.first().map(Pattern::singleton)
        } else {
            self.minimals.iter().find(|m| m.is_subset(p)).copied()
        }
    }

    fn augmentations(&self, p: &Pattern) -> Vec<usize> {
        if self.contains(p) {
            self.neighbourhood(p).difference(p).to_vec()
        } else {
            (0..self.n)
                .filter(|&e| !p.contains(e) && self.contains(&p.with(e)))
                .collect()
        }
    }

    fn project(&self, m: &Pattern, x: &Pattern) -> Pattern {
        self.component(m, x)
    }
}

/// Edge sets spanning a connected subgraph; items are edges.
#[derive(Clone, Debug)]
pub struct ConnectedEdgeFamily {
    // Connected edge sets are the connected vertex sets of the line graph.
    line: ConnectedVertexFamily,
}

impl ConnectedEdgeFamily {
    pub fn new(graph: &GraphSpec) -> Result<Self, SetsysError> {
        let edges = graph.edges();
        let mut line_edges = Vec::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    line_edges.push((i, j));
                }
            }
        }
        Ok(ConnectedEdgeFamily {
            line: ConnectedVertexFamily::from_adjacency(edges.len(), &line_edges, 1)?,
        })
    }
}

impl Family for ConnectedEdgeFamily {
    fn universe(&self) -> usize {
        self.line.universe()
    }

    fn contains(&self, p: &Pattern) -> bool {
        self.line.contains(p)
    }

    fn minimals(&self) -> &[Pattern] {
        self.line.minimals()
    }

    fn anchor(&self, p: &Pattern) -> Option<Pattern> {
        self.line.anchor(p)
    }

    fn augmentations(&self, p: &Pattern) -> Vec<usize> {
        self.line.augmentations(p)
    }

    fn project(&self, m: &Pattern, x: &Pattern) -> Pattern {
        self.line.project(m, x)
    }
}

/// Position sets of a sequence of length `n` whose consecutive chosen
/// positions are at most `k` apart. `k = 1` gives contiguous words.
#[derive(Clone, Debug)]
pub struct KGapFamily {
    n: usize,
    k: usize,
    minimals: Vec<Pattern>,
}

impl KGapFamily {
    pub fn new(n: usize, k: usize) -> Result<Self, SetsysError> {
        if n == 0 {
            return Err(SetsysError::EmptyFamily);
        }
        if n > MAX_ITEMS {
            return Err(SetsysError::UniverseTooLarge(n));
        }
        if k == 0 {
            return Err(SetsysError::ZeroGap);
        }
        Ok(KGapFamily {
            n,
            k,
            minimals: (0..n).map(Pattern::singleton).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_gap(&self) -> usize {
        self.k
    }

    fn span(p: &Pattern) -> Option<(usize, usize)> {
        let lo = p.first()?;
        let hi = p.iter().last()?;
        Some((lo, hi))
    }
}

impl Family for KGapFamily {
    fn universe(&self) -> usize {
        self.n
    }

    fn contains(&self, p: &Pattern) -> bool {
        if p.is_empty() || !p.is_subset(&Pattern::full(self.n)) {
            return false;
        }
        let items = p.to_vec();
        items.windows(2).all(|w| w[1] - w[0] <= self.k)
    }

    fn minimals(&self) -> &[Pattern] {
        &self.minimals
    }

    fn anchor(&self, p: &Pattern) -> Option<Pattern> {
        p.first().map(Pattern::singleton)
    }

    fn augmentations(&self, p: &Pattern) -> Vec<usize> {
        if !self.contains(p) {
            return (0..self.n)
                .filter(|&e| !p.contains(e) && self.contains(&p.with(e)))
                .collect();
        }
        let (lo, hi) = Self::span(p).expect("members are nonempty");
        let from = lo.saturating_sub(self.k);
        let to = (hi + self.k).min(self.n - 1);
        (from..=to).filter(|&e| !p.contains(e)).collect()
    }

    fn project(&self, m: &Pattern, x: &Pattern) -> Pattern {
        let Some((mut lo, mut hi)) = Self::span(m) else {
            return Pattern::empty();
        };
        // Walk outwards from the span of m while the next chosen position is within k.
        while let Some(prev) = (lo.saturating_sub(self.k)..lo)
            .rev()
            .find(|&i| x.contains(i))
        {
            lo = prev;
        }
        while let Some(next) = (hi + 1..=(hi + self.k).min(self.n - 1)).find(|&i| x.contains(i)) {
            hi = next;
        }
        x.iter().filter(|&i| i >= lo && i <= hi).collect()
    }
}

/// The whole powerset `2^S`: a lattice with the single minimal element `∅`.
#[derive(Clone, Debug)]
pub struct PowersetFamily {
    n: usize,
    minimals: Vec<Pattern>,
}

impl PowersetFamily {
    pub fn new(n: usize) -> Result<Self, SetsysError> {
        if n > MAX_ITEMS {
            return Err(SetsysError::UniverseTooLarge(n));
        }
        Ok(PowersetFamily {
            n,
            minimals: vec![Pattern::empty()],
        })
    }
}

impl Family for PowersetFamily {
    fn universe(&self) -> usize {
        self.n
    }

    fn contains(&self, p: &Pattern) -> bool {
        p.is_subset(&Pattern::full(self.n))
    }

    fn minimals(&self) -> &[Pattern] {
        &self.minimals
    }

    fn anchor(&self, _p: &Pattern) -> Option<Pattern> {
        Some(Pattern::empty())
    }

    fn augmentations(&self, p: &Pattern) -> Vec<usize> {
        Pattern::full(self.n).difference(p).to_vec()
    }

    fn project(&self, _m: &Pattern, x: &Pattern) -> Pattern {
        *x
    }
}

/// A family listed member by member, checked to be a subconfluence of `2^S` on construction.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    universe: usize,
    members: Vec<Pattern>,
    lookup: HashSet<Pattern>,
    minimals: Vec<Pattern>,
}

impl ExplicitFamily {
    pub fn new(patterns: Vec<Pattern>, universe: usize) -> Result<Self, SetsysError> {
        let fam = Self::unchecked(patterns, universe)?;
        if let Some((t, x, y)) = fam.subconfluence_violation() {
            return Err(SetsysError::NotSubconfluence { t, x, y });
        }
        Ok(fam)
    }

    fn unchecked(mut patterns: Vec<Pattern>, universe: usize) -> Result<Self, SetsysError> {
        if universe > MAX_ITEMS {
            return Err(SetsysError::UniverseTooLarge(universe));
        }
        if patterns.is_empty() {
            return Err(SetsysError::EmptyFamily);
        }
        let full = Pattern::full(universe);
        for p in &patterns {
            if let Some(item) = p.difference(&full).first() {
                return Err(SetsysError::ItemOutOfRange { item, universe });
            }
        }
        patterns.sort();
        patterns.dedup();
        let minimals = patterns
            .iter()
            .copied()
            .filter(|x| !patterns.iter().any(|y| y != x && y.is_subset(x)))
            .collect();
        let lookup = patterns.iter().copied().collect();
        Ok(ExplicitFamily {
            universe,
            members: patterns,
            lookup,
            minimals,
        })
    }

    /// For member lists already known to be subconfluences.
    pub(crate) fn trusted(patterns: Vec<Pattern>, universe: usize) -> Self {
        Self::unchecked(patterns, universe).expect("trusted member list")
    }

    /// A member lies below both `x` and `y` exactly when a minimal one does,
    /// so the scan runs over pairs and minimals only.
    fn subconfluence_violation(&self) -> Option<(Pattern, Pattern, Pattern)> {
        for (i, x) in self.members.iter().enumerate() {
            for y in &self.members[i + 1..] {
                let meet = x.intersection(y);
                if let Some(t) = self.minimals.iter().find(|m| m.is_subset(&meet)) {
                    if !self.lookup.contains(&x.union(y)) {
                        return Some((*t, *x, *y));
                    }
                }
            }
        }
        None
    }

    /// Members in pattern order.
    pub fn members(&self) -> &[Pattern] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Checks that every pair `t1 ⊂ t2` of members is linked by single-item
    /// augmentations inside the family. It suffices that some `e ∈ t2 \ t1`
    /// keeps `t1 ∪ {e}` in the family: repeating the step walks up to `t2`.
    pub fn is_strongly_accessible(&self) -> Result<(), (Pattern, Pattern)> {
        for t1 in &self.members {
            for t2 in &self.members {
                if t1 == t2 || !t1.is_subset(t2) {
                    continue;
                }
                let step = t2
                    .difference(t1)
                    .iter()
                    .any(|e| self.lookup.contains(&t1.with(e)));
                if !step {
                    return Err((*t1, *t2));
                }
            }
        }
        Ok(())
    }
}

impl Family for ExplicitFamily {
    fn universe(&self) -> usize {
        self.universe
    }

    fn contains(&self, p: &Pattern) -> bool {
        self.lookup.contains(p)
    }

    fn minimals(&self) -> &[Pattern] {
        &self.minimals
    }

    fn project(&self, m: &Pattern, x: &Pattern) -> Pattern {
        self.members
            .iter()
            .filter(|q| m.is_subset(q) && q.is_subset(x))
            .fold(*m, |acc, q| acc.union(q))
    }

    fn explicit(&self) -> Option<&ExplicitFamily> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        Pattern::from_items(s.bytes().map(|b| (b - b'a') as usize))
    }

    fn path(n: usize) -> GraphSpec {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        GraphSpec::from_edges(n, &edges).unwrap()
    }

    /// 4-cycle 1-2-3-4 with edges a=12, c=23, b=34, d=41 (items a..d in that order).
    fn square_graph() -> GraphSpec {
        GraphSpec::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![(0, 1), (2, 3), (1, 2), (3, 0)],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap()
    }

    #[test]
    fn graph_validation() {
        assert_eq!(
            GraphSpec::from_edges(2, &[(0, 0)]),
            Err(SetsysError::SelfLoop(0))
        );
        assert_eq!(
            GraphSpec::from_edges(2, &[(0, 2)]),
            Err(SetsysError::BadEndpoint(2))
        );
    }

    #[test]
    fn vertex_family_on_path() {
        let f = ConnectedVertexFamily::new(&path(4), 1).unwrap();
        assert!(!f.contains(&pat("ac")));
        assert!(f.contains(&pat("abc")));
        assert!(!f.contains(&Pattern::empty()));
        assert_eq!(f.project(&pat("a"), &pat("abd")), pat("ab"));
        assert_eq!(f.minimals().len(), 4);
        assert_eq!(f.augmentations(&pat("b")), vec![0, 2]);
    }

    #[test]
    fn vertex_family_min_size() {
        let f = ConnectedVertexFamily::new(&path(4), 2).unwrap();
        assert_eq!(f.minimals(), &[pat("ab"), pat("bc"), pat("cd")]);
        assert!(!f.contains(&pat("a")));
        assert_eq!(f.anchor(&pat("bcd")), Some(pat("bc")));
        assert!(matches!(
            ConnectedVertexFamily::new(&path(4), 5),
            Err(SetsysError::EmptyFamily)
        ));
        // no connected triple in a graph without edges
        let empty = GraphSpec::from_edges(3, &[]).unwrap();
        assert!(ConnectedVertexFamily::new(&empty, 2).is_err());
    }

    #[test]
    fn edge_family_of_the_square() {
        let f = ConnectedEdgeFamily::new(&square_graph()).unwrap();
        for w in ["a", "b", "abc", "abd", "abcd"] {
            assert!(f.contains(&pat(w)), "{w}");
        }
        assert!(!f.contains(&pat("ab")));
        assert!(!f.contains(&pat("cd")));
        assert!(f.contains(&pat("c")));
        assert_eq!(f.project(&pat("a"), &pat("abcd")), pat("abcd"));
        assert_eq!(f.project(&pat("a"), &pat("ab")), pat("a"));
        assert_eq!(f.minimals(), &[pat("a"), pat("b"), pat("c"), pat("d")]);
    }

    #[test]
    fn kgap_words() {
        // positions 1..5 are items 0..4
        let f = KGapFamily::new(5, 2).unwrap();
        assert!(f.contains(&Pattern::from_items([0, 2, 3])));
        let g = KGapFamily::new(5, 1).unwrap();
        assert!(!g.contains(&Pattern::from_items([0, 2])));
        assert_eq!(
            g.project(&Pattern::singleton(2), &Pattern::from_items([0, 2, 3, 4])),
            Pattern::from_items([2, 3, 4])
        );
        assert_eq!(f.augmentations(&Pattern::singleton(0)), vec![1, 2]);
        assert_eq!(KGapFamily::new(5, 0).unwrap_err(), SetsysError::ZeroGap);
    }

    #[test]
    fn kgap_matches_connected_vertices_of_gap_graph() {
        for k in 1..=3 {
            let n = 7;
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).filter(move |j| j - i <= k).map(move |j| (i, j)))
                .collect();
            let graph =
                ConnectedVertexFamily::new(&GraphSpec::from_edges(n, &edges).unwrap(), 1).unwrap();
            let words = KGapFamily::new(n, k).unwrap();
            for mask in 1u64..(1 << n) {
                let x = Pattern::from_mask(mask);
                assert_eq!(words.contains(&x), graph.contains(&x), "k={k} {x:?}");
                if words.contains(&x) {
                    assert_eq!(words.augmentations(&x), graph.augmentations(&x));
                }
                for m in x.iter() {
                    let m = Pattern::singleton(m);
                    assert_eq!(words.project(&m, &x), graph.project(&m, &x));
                }
            }
        }
    }

    #[test]
    fn explicit_family_examples() {
        let f = ExplicitFamily::new(
            ["ab", "ac", "abc", "abd", "acd", "abcd"].map(pat).to_vec(),
            5,
        )
        .unwrap();
        assert_eq!(f.minimals(), &[pat("ab"), pat("ac")]);
        assert_eq!(f.is_strongly_accessible(), Ok(()));
        assert_eq!(f.project(&pat("ab"), &pat("abde")), pat("abd"));

        let bad = ExplicitFamily::new(vec![Pattern::empty(), pat("ab"), pat("ac")], 4);
        assert_eq!(
            bad.unwrap_err(),
            SetsysError::NotSubconfluence {
                t: Pattern::empty(),
                x: pat("ab"),
                y: pat("ac")
            }
        );

        let single = ExplicitFamily::new(vec![pat("bd")], 4).unwrap();
        assert_eq!(single.minimals(), &[pat("bd")]);
        assert_eq!(
            ExplicitFamily::new(vec![], 3).unwrap_err(),
            SetsysError::EmptyFamily
        );
    }

    #[test]
    fn strong_accessibility_witness() {
        let f = ExplicitFamily::new(vec![pat("a"), pat("abc")], 3).unwrap();
        assert_eq!(f.is_strongly_accessible(), Err((pat("a"), pat("abc"))));
        let square =
            ExplicitFamily::new(["a", "b", "abc", "abd", "abcd"].map(pat).to_vec(), 4).unwrap();
        assert!(square.is_strongly_accessible().is_err());
    }

    #[test]
    fn powerset_family() {
        let f = PowersetFamily::new(3).unwrap();
        assert!(f.contains(&Pattern::empty()));
        assert_eq!(f.minimals(), &[Pattern::empty()]);
        assert_eq!(f.local_top(&Pattern::empty()), Pattern::full(3));
        assert_eq!(f.augmentations(&pat("b")), vec![0, 2]);
    }
}
