use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use supou::measures::{Drift, GeneratingQuadruple, LevyFamily, LevyPart, MeasureFamily};
use supou::simulator::{simulate_paths, Execution, SimConfig, SimPlan, TimeGrid};

fn bench_paths(c: &mut Criterion) {
    let lam = LevyFamily::positive(LevyPart::StableLike { beta0: 0.5, c: 1.0 }).unwrap();
    let pi = MeasureFamily::power_density(0.8).unwrap();
    let q = GeneratingQuadruple::new(Drift::Natural, 0.0, lam, pi).unwrap();
    let mut cfg = SimConfig::new(1e3, TimeGrid::log_points(1.0, 1e3, 40));
    cfg.n_paths = 64;
    let plan = SimPlan::new(&q, &cfg).unwrap();

    let mut g = c.benchmark_group("simulate_paths");
    g.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| simulate_paths(&plan, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_paths);
criterion_main!(benches);
