use blockshrink::estimators::EstimatorSpec;
use blockshrink::exec::Execution;
use blockshrink::model::{catalog, HolderClass};
use blockshrink::risk::{NeighborhoodSpec, RiskJob};
use blockshrink::wavelet::build_basis;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn replications(c: &mut Criterion) {
    let spec = build_basis("daub4", 3).unwrap();
    let f = catalog("alpha_cusp", &HolderClass::new(1.0, 50.0).unwrap(), 14, &spec).unwrap();
    let nb = NeighborhoodSpec::new(0.5, 0.1).unwrap();
    let mut group = c.benchmark_group("risk_64_reps");
    group.sample_size(10);
    for est in [EstimatorSpec::Blockjs, EstimatorSpec::Hybrid] {
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(est.name(), label), &exec, |b, &exec| {
                b.iter(|| {
                    RiskJob::new(&est, &f, &spec, &nb, 1 << 14, 64, 1)
                        .with_exec(exec)
                        .neighborhood_risk()
                        .unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, replications);
criterion_main!(benches);
