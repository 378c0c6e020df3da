//! Throughput comparison of the sequential and rayon trial runners on the
//! two workload shapes that dominate the experiments: cheap greedy
//! restorations and convex solves.

use criterion::{criterion_group, criterion_main, Criterion};
use declip_core::{
    clip, clip_level_for_m, declip_bpcc, declip_tpcc, synth_sparse_signal, ClippedObservation,
    Signal, SynthSpec, TpccParams,
};
use declip_experiments::map_trials_sequential;

fn trial_set(count: usize, k: usize, m: usize) -> Vec<(Signal, ClippedObservation)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let (x, _) = synth_sparse_signal(&SynthSpec::new(128, k, seed)).unwrap();
        if let Ok(level) = clip_level_for_m(&x, m) {
            let obs = clip(&x, -level, level).unwrap();
            out.push((x, obs));
        }
    }
    out
}

fn bench_tpcc_batch(c: &mut Criterion) {
    let trials = trial_set(32, 10, 40);
    let run = |i: usize| {
        declip_tpcc(&trials[i].1, &TpccParams::default())
            .unwrap()
            .final_residual
    };
    let mut group = c.benchmark_group("tpcc_batch_32");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| map_trials_sequential(trials.len(), run))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| declip_experiments::map_trials_parallel(trials.len(), run))
    });
    group.finish();
}

fn bench_bpcc_batch(c: &mut Criterion) {
    let trials = trial_set(8, 6, 90);
    let run = |i: usize| declip_bpcc(&trials[i].1).unwrap().final_residual;
    let mut group = c.benchmark_group("bpcc_batch_8");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| map_trials_sequential(trials.len(), run))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| declip_experiments::map_trials_parallel(trials.len(), run))
    });
    group.finish();
}

criterion_group!(benches, bench_tpcc_batch, bench_bpcc_batch);
criterion_main!(benches);
