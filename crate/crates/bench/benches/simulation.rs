use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qanneal_bench::{graph_cost, local_cost};
use qanneal_core::{
    build_phase_tables, run_circuit, sample_many, simulated_annealing, Ensemble, Limits, Mode, QuantumState, SaParams,
    Sampler, SamplerConfig,
};
use std::hint::black_box;

fn gates(c: &mut Criterion) {
    let mut group = c.benchmark_group("gates");
    let limits = Limits::default();
    for n in [12, 16, 20] {
        let cost = local_cost(n - 1);
        let phases = build_phase_tables(&cost, 1.0);
        let base = QuantumState::uniform_superposition(n - 1, 1, &limits).unwrap();
        group.bench_with_input(BenchmarkId::new("hadamard", n), &n, |bench, _| {
            let mut s = base.clone();
            bench.iter(|| s.apply_hadamard(n - 1).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("u_pm", n), &n, |bench, _| {
            let mut s = base.clone();
            bench.iter(|| s.apply_u_pm(n - 1, black_box(&phases)).unwrap());
        });
    }
    group.finish();
}

fn circuit(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_circuit");
    group.sample_size(20);
    let limits = Limits::default();
    for (n, b) in [(8, 4), (12, 4), (16, 2)] {
        let cost = local_cost(n);
        group.bench_function(BenchmarkId::new(format!("n{n}"), b), |bench| {
            bench.iter(|| run_circuit(black_box(&cost), b, &limits).unwrap());
        });
    }
    group.finish();
}

fn ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(20);
    let limits = Limits::default();
    let b_values: Vec<f64> = (0..16).map(|k| 2f64.powi(k - 4)).collect();
    for v in [12, 16, 20] {
        let cost = graph_cost(v);
        group.bench_with_input(BenchmarkId::new("build", v), &cost, |bench, cost| {
            bench.iter(|| Ensemble::new(black_box(cost), &limits).unwrap());
        });
        let ens = Ensemble::new(&cost, &limits).unwrap();
        group.bench_with_input(BenchmarkId::new("sweep16", v), &ens, |bench, ens| {
            bench.iter(|| ens.sweep(black_box(&b_values)).unwrap());
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let limits = Limits::default();
    let cost = local_cost(10);
    let mut group = c.benchmark_group("sample_1000");
    for mode in [Mode::ClosedForm, Mode::GateLevel] {
        let sampler = Sampler::new(&cost, 3, mode, &limits, SamplerConfig::default()).unwrap();
        group.bench_function(mode.to_string(), |bench| {
            bench.iter(|| sample_many(&sampler, 1000, black_box(1)));
        });
    }
    group.finish();
}

fn annealing(c: &mut Criterion) {
    let params = SaParams::default();
    let mut group = c.benchmark_group("simulated_annealing");
    for v in [8, 16, 32] {
        let cost = graph_cost(v);
        group.bench_with_input(BenchmarkId::from_parameter(v), &cost, |bench, cost| {
            bench.iter(|| simulated_annealing(black_box(cost), &params, 3, None).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, gates, circuit, ensemble, sampling, annealing);
criterion_main!(benches);
