use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ruin_core::gambler::{build_chain, GamblerSpec};
use ruin_core::kernel::{absorption_oracle, remove_coffin, simulate, SimulationOptions};
use ruin_core::par::Execution;
use ruin_core::poset::product_order;
use ruin_core::rational::q;
use ruin_core::sample::{acceptance_grid, random_spec, rng};
use ruin_core::siegmund::{antidual, verify_duality_with};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("rayon", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let half = q(1, 2);
    let spec = GamblerSpec::homogeneous(vec![10], vec![half.clone()], vec![half]).unwrap();
    let chain = build_chain(&spec).unwrap();
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        let options = SimulationOptions {
            trials: 100_000,
            seed: 1,
            execution,
            ..SimulationOptions::default()
        };
        group.bench_function(BenchmarkId::new(name, "N=10 1e5 trials"), |b| {
            b.iter(|| simulate(&chain, "(3)", &options).unwrap())
        });
    }
    group.finish();
}

fn duality_check(c: &mut Criterion) {
    let spec = random_spec(&mut rng(9), &[4, 4, 3]);
    let chain = build_chain(&spec).unwrap();
    let poset = product_order(spec.capitals()).unwrap();
    let px = antidual(&remove_coffin(&chain), &poset).unwrap();
    let mut group = c.benchmark_group("verify_duality");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "4x4x3 n<=5"), |b| {
            b.iter(|| verify_duality_with(&px, &chain, &poset, 5, execution).unwrap())
        });
    }
    group.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let specs: Vec<GamblerSpec> = acceptance_grid(3, 1);
    let mut group = c.benchmark_group("oracle_grid");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, format!("{} specs", specs.len())), |b| {
            b.iter(|| {
                execution.map(specs.len(), |k| {
                    absorption_oracle(&build_chain(&specs[k]).unwrap()).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, duality_check, oracle_sweep);
criterion_main!(benches);
