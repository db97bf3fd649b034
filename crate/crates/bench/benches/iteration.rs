use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use frcfr::games::GameSpec;
use frcfr::Solver;
use frcfr_bench::{leduc_config, tree};

fn iteration(c: &mut Criterion) {
    let tree = tree(&GameSpec::leduc());
    let mut group = c.benchmark_group("leduc_iteration");
    for partitions in [0, 5, 30, 90] {
        let config = leduc_config(partitions);
        group.bench_function(format!("n{partitions}"), |b| {
            b.iter_batched_ref(
                || {
                    let mut solver = Solver::new(&tree, config.clone()).expect("valid config");
                    solver.step().expect("first iteration");
                    solver
                },
                |solver| solver.step().expect("iteration"),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn metrics(c: &mut Criterion) {
    let tree = tree(&GameSpec::leduc());
    let mut solver = Solver::new(&tree, leduc_config(0)).expect("valid config");
    for _ in 0..10 {
        solver.step().expect("iteration");
    }
    c.bench_function("leduc_metrics_row", |b| b.iter(|| solver.metrics(0.0).expect("metrics")));
}

criterion_group!(benches, iteration, metrics);
criterion_main!(benches);
