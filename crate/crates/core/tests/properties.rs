use std::collections::BTreeSet;

use proptest::prelude::*;

use confluence::oracle::{materialize, oracle_concepts, random, ListedAbstraction};
use confluence::{
    abstract_support_closure, ConnectedVertexFamily, ExtensionalAbstraction, Family, GraphSpec,
    Miner, MinerConfig, ObjectContext, Pattern,
};

fn pattern(n: usize) -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(0..n, 0..n).prop_map(Pattern::from_items)
}

fn graph() -> impl Strategy<Value = GraphSpec> {
    (1usize..=7)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let k = pairs.len();
            (
                Just(n),
                Just(pairs),
                proptest::collection::vec(any::<bool>(), k),
            )
        })
        .prop_map(|(n, pairs, keep)| {
            let edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(e, _)| e)
                .collect();
            GraphSpec::from_edges(n, &edges).unwrap()
        })
}

fn context(n: usize) -> impl Strategy<Value = ObjectContext> {
    proptest::collection::vec(pattern(n), 0..6).prop_map(move |d| ObjectContext::new(n, d).unwrap())
}

/// Brute-force connectivity of the subgraph induced by `p`.
fn connected(g: &GraphSpec, p: &Pattern) -> bool {
    let Some(start) = p.first() else { return false };
    let mut seen = Pattern::singleton(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &(a, b) in g.edges() {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && p.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
    }
    seen == *p
}

proptest! {
    #[test]
    fn set_algebra(a in pattern(70), b in pattern(70)) {
        let u = a.union(&b);
        let i = a.intersection(&b);
        prop_assert!(a.is_subset(&u) && b.is_subset(&u));
        prop_assert!(i.is_subset(&a) && i.is_subset(&b));
        prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
        prop_assert_eq!(a.difference(&b).union(&i), a);
        prop_assert_eq!(a.is_subset(&b), a.intersection(&b) == a);
    }

    #[test]
    fn order_is_lexicographic_on_item_lists(a in pattern(10), b in pattern(10)) {
        prop_assert_eq!(a.cmp(&b), a.to_vec().cmp(&b.to_vec()));
    }

    #[test]
    fn vertex_family_matches_brute_force(g in graph(), x in pattern(7)) {
        let fam = ConnectedVertexFamily::new(&g, 1).unwrap();
        let x = x.intersection(&Pattern::full(g.vertex_count()));
        prop_assert_eq!(fam.contains(&x), connected(&g, &x));
        let aug: Vec<usize> = (0..g.vertex_count())
            .filter(|&e| !x.contains(e) && connected(&g, &x.with(e)))
            .collect();
        if fam.contains(&x) {
            prop_assert_eq!(fam.augmentations(&x), aug);
        }
        if let Some(m) = x.first() {
            let m = Pattern::singleton(m);
            let p = fam.project(&m, &x);
            prop_assert!(m.is_subset(&p) && p.is_subset(&x) && fam.contains(&p));
            // every connected subset of x holding m lies inside p
            for mask in 0u64..(1 << g.vertex_count()) {
                let y = Pattern::from_mask(mask);
                if m.is_subset(&y) && y.is_subset(&x) && connected(&g, &y) {
                    prop_assert!(y.is_subset(&p));
                }
            }
        }
    }

    #[test]
    fn support_closure_is_a_closure(g in graph(), ctx in context(7)) {
        let fam = ConnectedVertexFamily::new(&g, 1).unwrap();
        let ctx = ObjectContext::new(g.vertex_count(), ctx.descriptions().iter()
            .map(|d| d.intersection(&Pattern::full(g.vertex_count()))).collect()).unwrap();
        let abs = ExtensionalAbstraction::Identity;
        let members = materialize(&fam, 256).unwrap();
        let f = |t: &Pattern| abstract_support_closure(&ctx, &fam, &abs, t).unwrap();
        for t in members.members() {
            let c = f(t);
            prop_assert!(t.is_subset(&c));
            prop_assert_eq!(f(&c), c);
            prop_assert_eq!(ctx.ext(&c), ctx.ext(t));
            for u in members.members() {
                if t.is_subset(u) {
                    prop_assert!(c.is_subset(&f(u)));
                }
            }
        }
    }

    #[test]
    fn miner_matches_oracle(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let fam = random::accessible_family(&mut rng);
        let fam = fam.as_family();
        let ctx = random::context(&mut rng, fam.universe(), 6, 0.5);
        let abs = random::abstraction(&mut rng, ctx.len());
        let Ok(members) = materialize(fam, 1024) else { return Ok(()) };
        let expected: BTreeSet<Pattern> = oracle_concepts(&ctx, members.members(), &ListedAbstraction::new(&abs, ctx.len()))
            .unwrap()
            .into_keys()
            .collect();
        let seq = Miner::new(fam, &ctx, &abs, MinerConfig::default()).unwrap();
        let listed: Vec<Pattern> = seq.mine().iter().map(|e| e.concept.intent).collect();
        let unique: BTreeSet<Pattern> = listed.iter().copied().collect();
        prop_assert_eq!(unique.len(), listed.len());
        prop_assert_eq!(unique, expected);
        let par = Miner::new(fam, &ctx, &abs, MinerConfig { parallel: true, ..MinerConfig::default() }).unwrap();
        prop_assert_eq!(seq.trace(), par.trace());
    }
}
