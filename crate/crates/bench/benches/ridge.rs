use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use frcfr::games::GameSpec;
use frcfr::regress::{build_features, RidgeSystem};
use frcfr::Player;
use frcfr_bench::tree;

fn ridge(c: &mut Criterion) {
    let tree = tree(&GameSpec::leduc());
    let mut group = c.benchmark_group("ridge");
    for partitions in [5, 30, 90] {
        let map = build_features(&tree, Player::One, partitions, 10, 1).expect("valid features");
        let features = map
            .groups()
            .iter()
            .max_by_key(|g| g.features.len())
            .expect("nonempty group")
            .features
            .clone();
        let rows = features.len();
        let dim = map.dim();
        group.bench_function(format!("factor/n{partitions}"), |b| {
            b.iter(|| RidgeSystem::new(black_box(features.clone()), dim, 1e-3).expect("factorizes"))
        });
        let system = RidgeSystem::new(features, dim, 1e-3).expect("factorizes");
        let targets: Vec<f64> = (0..rows).map(|i| (i as f64 * 0.37).sin()).collect();
        group.bench_function(format!("solve/n{partitions}"), |b| {
            b.iter(|| system.solve(black_box(&targets)).expect("solves"))
        });
    }
    group.finish();
}

criterion_group!(benches, ridge);
criterion_main!(benches);
