//! Seeded generators for desk-scale instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::galois::{ExtensionalAbstraction, ObjectContext};
use crate::pattern::{Extent, Pattern};
use crate::setsys::{
    ConnectedEdgeFamily, ConnectedVertexFamily, ExplicitFamily, Family, GraphSpec, KGapFamily,
    PowersetFamily,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph on `1..=max_vertices` vertices with edge probability `density`.
pub fn graph(rng: &mut impl Rng, max_vertices: usize, density: f64) -> GraphSpec {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    GraphSpec::from_edges(n, &edges).expect("generated edges are valid")
}

/// A connected graph with `n` vertices and `m` edges: a random spanning tree
/// plus extra edges. Needs `n - 1 <= m <= n(n-1)/2`.
pub fn connected_graph(rng: &mut impl Rng, n: usize, m: usize) -> GraphSpec {
    assert!(n >= 1 && m + 1 >= n && m <= n * (n - 1) / 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (u, v) = (parent.min(order[i]), parent.max(order[i]));
        edges.push((u, v));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e))
        .collect();
    rest.shuffle(rng);
    edges.extend(rest.into_iter().take(m + 1 - n));
    GraphSpec::from_edges(n, &edges).expect("generated edges are valid")
}

/// `1..=max_objects` objects over `universe` items, each item present with probability `density`.
pub fn context(
    rng: &mut impl Rng,
    universe: usize,
    max_objects: usize,
    density: f64,
) -> ObjectContext {
    let objects = rng.gen_range(1..=max_objects);
    contexts_of_size(rng, universe, objects, density)
}

pub fn contexts_of_size(
    rng: &mut impl Rng,
    universe: usize,
    objects: usize,
    density: f64,
) -> ObjectContext {
    let descriptions = (0..objects)
        .map(|_| Pattern::from_items((0..universe).filter(|_| rng.gen_bool(density))))
        .collect();
    ObjectContext::new(universe, descriptions).expect("items stay in the universe")
}

/// Identity, a frequency threshold, or a few random generators.
pub fn abstraction(rng: &mut impl Rng, objects: usize) -> ExtensionalAbstraction {
    match rng.gen_range(0..3) {
        0 => ExtensionalAbstraction::Identity,
        1 => ExtensionalAbstraction::MinSupport(rng.gen_range(1..=objects.max(1))),
        _ => {
            let count = rng.gen_range(1..=4);
            let gens = (0..count)
                .map(|_| Extent::from_objects(objects, (0..objects).filter(|_| rng.gen_bool(0.4))))
                .collect();
            ExtensionalAbstraction::Generators(gens)
        }
    }
}

/// Random patterns over `universe` items.
pub fn patterns(rng: &mut impl Rng, universe: usize, count: usize, density: f64) -> Vec<Pattern> {
    (0..count)
        .map(|_| Pattern::from_items((0..universe).filter(|_| rng.gen_bool(density))))
        .collect()
}

/// Adds `x ∪ y` for members `x, y` above a common member until nothing changes.
pub fn close_above_common(mut members: Vec<Pattern>) -> Vec<Pattern> {
    members.sort();
    members.dedup();
    loop {
        let mut added = Vec::new();
        for t in &members {
            let above: Vec<&Pattern> = members.iter().filter(|x| t.is_subset(x)).collect();
            for (i, x) in above.iter().enumerate() {
                for y in &above[i + 1..] {
                    let j = x.union(y);
                    if members.binary_search(&j).is_err() {
                        added.push(j);
                    }
                }
            }
        }
        if added.is_empty() {
            return members;
        }
        members.extend(added);
        members.sort();
        members.dedup();
    }
}

/// A random subconfluence of `2^universe` grown from a few seeds.
pub fn subconfluence(rng: &mut impl Rng, universe: usize, seeds: usize) -> Vec<Pattern> {
    let density = rng.gen_range(0.2..0.7);
    close_above_common(patterns(rng, universe, seeds.max(1), density))
}

/// Random candidate families, some of them not subconfluences.
pub fn candidate(rng: &mut impl Rng, universe: usize) -> Vec<Pattern> {
    let count = rng.gen_range(1..=8);
    let draw = rng.gen_range(0.2..0.7);
    let raw = patterns(rng, universe, count, draw);
    if rng.gen_bool(0.5) {
        close_above_common(raw)
    } else {
        let mut raw = raw;
        raw.sort();
        raw.dedup();
        raw
    }
}

/// A random subset of `0..n`.
pub fn subset(rng: &mut impl Rng, n: usize, density: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(density)).collect()
}

/// Connected vertex sets of a random graph that contain one of a few connected seeds.
/// Such families are strongly accessible subconfluences whose minimals are the minimal seeds.
pub fn seeded_connected(rng: &mut impl Rng, max_vertices: usize) -> ExplicitFamily {
    let draw = rng.gen_range(0.3..0.8);
    let g = graph(rng, max_vertices, draw);
    let fam = ConnectedVertexFamily::new(&g, 1).expect("valid graph");
    let n = g.vertex_count();
    let connected: Vec<Pattern> = (1u64..(1 << n))
        .map(Pattern::from_mask)
        .filter(|p| fam.contains(p))
        .collect();
    let small: Vec<Pattern> = connected.iter().copied().filter(|p| p.len() <= 3).collect();
    let count = rng.gen_range(1..=3);
    let seeds: Vec<Pattern> = small.choose_multiple(rng, count).copied().collect();
    let members = connected
        .into_iter()
        .filter(|p| seeds.iter().any(|s| s.is_subset(p)))
        .collect();
    ExplicitFamily::trusted(members, n)
}

/// A randomly chosen family kind with matching universe.
pub enum RandomFamily {
    Vertices(ConnectedVertexFamily),
    Edges(ConnectedEdgeFamily),
    KGap(KGapFamily),
    Powerset(PowersetFamily),
    Explicit(ExplicitFamily),
}

impl RandomFamily {
    pub fn as_family(&self) -> &dyn Family {
        match self {
            RandomFamily::Vertices(f) => f,
            RandomFamily::Edges(f) => f,
            RandomFamily::KGap(f) => f,
            RandomFamily::Powerset(f) => f,
            RandomFamily::Explicit(f) => f,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RandomFamily::Vertices(_) => "vertices",
            RandomFamily::Edges(_) => "edges",
            RandomFamily::KGap(_) => "kgap",
            RandomFamily::Powerset(_) => "powerset",
            RandomFamily::Explicit(_) => "explicit",
        }
    }
}

/// A strongly accessible family over at most 12 items.
pub fn accessible_family(rng: &mut impl Rng) -> RandomFamily {
    match rng.gen_range(0..5) {
        0 => {
            let draw = rng.gen_range(0.2..0.7);
            let g = graph(rng, 8, draw);
            let min_size = if g.edges().is_empty() {
                1
            } else {
                rng.gen_range(1..=2)
            };
            RandomFamily::Vertices(ConnectedVertexFamily::new(&g, min_size).expect("valid graph"))
        }
        1 => loop {
            let draw = rng.gen_range(0.2..0.5);
            let g = graph(rng, 6, draw);
            if !g.edges().is_empty() && g.edges().len() <= 12 {
                break RandomFamily::Edges(ConnectedEdgeFamily::new(&g).expect("valid graph"));
            }
        },
        2 => {
            let n = rng.gen_range(1..=10);
            let k = rng.gen_range(1..=3);
            RandomFamily::KGap(KGapFamily::new(n, k).expect("positive gap"))
        }
        3 => RandomFamily::Powerset(
            PowersetFamily::new(rng.gen_range(0..=8)).expect("small universe"),
        ),
        _ => RandomFamily::Explicit(seeded_connected(rng, 8)),
    }
}
