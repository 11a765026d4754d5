use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edgeflow::experiments::{london_recipe, ComparisonContext, ComparisonGrids};
use edgeflow::filters::{flow_denoise, mixed_filter};
use edgeflow::hodge::HodgeProjector;
use edgeflow::standins::london_like;
use edgeflow_bench::workload;

fn bench_flow_denoise(c: &mut Criterion) {
    let mut group = c.benchmark_group("flow_denoise");
    for edges in [500, 2_000, 10_000] {
        let (g, f) = workload(edges, 1);
        group.bench_with_input(BenchmarkId::from_parameter(edges), &edges, |b, _| {
            b.iter(|| flow_denoise(&g, &f, 1.0).unwrap())
        });
    }
    group.finish();
}

fn bench_london(c: &mut Criterion) {
    let g = london_like();
    let (_, f) = workload(g.num_edges(), 2);
    c.bench_function("hodge_projector_new/london-like", |b| {
        b.iter(|| HodgeProjector::new(&g).unwrap())
    });
    let projector = HodgeProjector::new(&g).unwrap();
    c.bench_function("decompose/london-like", |b| {
        b.iter(|| projector.decompose(&f).unwrap())
    });
    c.bench_function("mixed_filter/london-like", |b| {
        b.iter(|| mixed_filter(&g, &f, 28.0, 0.06).unwrap())
    });
    let mut ctx = ComparisonContext::new(&g, ComparisonGrids::default()).unwrap();
    let recipe = london_recipe(&g, 0);
    c.bench_function("comparison_run/london-like", |b| {
        b.iter(|| ctx.run(&recipe).unwrap())
    });
}

criterion_group!(benches, bench_flow_denoise, bench_london);
criterion_main!(benches);
