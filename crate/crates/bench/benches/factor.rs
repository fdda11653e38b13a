use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gauss_factor::beam::ensemble_cm;
use gauss_factor::factor::{evaluate, FactoringProblem, TrialStrategy};
use gauss_factor::pulse::simulate_cm;
use gauss_factor::{PhysicsConfig, Timing, DEFAULT_THRESHOLD};

const N: u64 = 263193;

fn closed_form_sweep(c: &mut Criterion) {
    let problem =
        FactoringProblem::with_strategy(N, 14, TrialStrategy::Range { min: 2, max: 200 }).unwrap();
    c.bench_function("closed_form_sweep_2_200", |b| {
        b.iter(|| evaluate(black_box(&problem), DEFAULT_THRESHOLD).unwrap())
    });
}

fn pulse_simulation(c: &mut Criterion) {
    let timing = Timing::default();
    c.bench_function("simulate_cm_m14", |b| {
        b.iter(|| simulate_cm(black_box(N), 150, 14, &timing, None).unwrap())
    });
}

fn ensemble(c: &mut Criterion) {
    let cfg = PhysicsConfig::default();
    c.bench_function("ensemble_cm_m14_64_nodes", |b| {
        b.iter(|| ensemble_cm(black_box(N), 151, 14, &cfg).unwrap())
    });
}

criterion_group!(benches, closed_form_sweep, pulse_simulation, ensemble);
criterion_main!(benches);
