use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use discrim::oracle::{optimal_success, OracleOptions};
use discrim::parallel::{self, Execution};
use discrim::sampling::random_ensemble;
use discrim::sweep::{run_sweep, BoundKind, Family, SweepSpec};
use rand::rngs::StdRng;
use rand::SeedableRng;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn figure_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("three_state_sweep_181");
    group.sample_size(20);
    for bounds in [
        vec![BoundKind::Entropic, BoundKind::Srm, BoundKind::Pairwise],
        vec![
            BoundKind::Entropic,
            BoundKind::Srm,
            BoundKind::Pairwise,
            BoundKind::Oracle,
        ],
    ] {
        let label = if bounds.contains(&BoundKind::Oracle) {
            "with_oracle"
        } else {
            "closed_form"
        };
        let mut spec = SweepSpec::new(Family::ThreeStateOriginal);
        spec.bounds = bounds;
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, mode), &spec, |b, spec| {
                b.iter(|| run_sweep(spec, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle_batch(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(42);
    let ensembles: Vec<_> = (0..200).map(|_| random_ensemble(&mut rng, 4, 5)).collect();
    let opts = OracleOptions::default();
    let mut group = c.benchmark_group("oracle_batch_200");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| parallel::map(&ensembles, exec, |e| optimal_success(e, &opts).unwrap().gap))
        });
    }
    group.finish();
}

criterion_group!(benches, figure_sweep, oracle_batch);
criterion_main!(benches);
