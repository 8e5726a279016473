//! Sequential against rayon mining on random connected graphs. Without the
//! `parallel` feature both variants run the sequential walk.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use confluence::oracle::random;
use confluence::{ConnectedVertexFamily, ExtensionalAbstraction, Miner, MinerConfig};

fn mining(c: &mut Criterion) {
    let mut group = c.benchmark_group("mine");
    group.sample_size(20);
    for (n, m, objects) in [(20, 30, 50), (28, 45, 80)] {
        let mut rng = random::rng(n as u64);
        let graph = random::connected_graph(&mut rng, n, m);
        let fam = ConnectedVertexFamily::new(&graph, 1).unwrap();
        let ctx = random::contexts_of_size(&mut rng, n, objects, 0.5);
        let abs = ExtensionalAbstraction::Identity;
        let label = format!("{n}v{m}e{objects}o");
        for (name, parallel) in [("sequential", false), ("parallel", true)] {
            let config = MinerConfig {
                parallel,
                ..MinerConfig::default()
            };
            let miner = Miner::new(&fam, &ctx, &abs, config).unwrap();
            group.bench_with_input(BenchmarkId::new(name, &label), &miner, |b, miner| {
                b.iter(|| black_box(miner.mine().len()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, mining);
criterion_main!(benches);
