use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use radpair::compass::{angular_sweep, singlet_yield, SweepConfig, YieldMethod};
use radpair::eigh::eigh;
use radpair::superop::{expm, Superoperator};
use radpair::{propagate, st_coherence, Engine, EvolutionParams, StProjectors};
use radpair_bench::compass_fixture;

fn kernels(c: &mut Criterion) {
    let (spec, h, rho0) = compass_fixture();
    let proj = StProjectors::new(&spec.system);
    let params = EvolutionParams::for_hamiltonian(&h, 1.0, Engine::Dephasing).unwrap();

    c.bench_function("eigh_8", |b| b.iter(|| eigh(black_box(&h)).unwrap()));

    let l = Superoperator::liouvillian(&h, 1.0, &proj.qs, &proj.qt).scale(params.dt);
    c.bench_function("expm_64", |b| b.iter(|| expm(black_box(l.matrix()))));

    c.bench_function("coherence_8", |b| b.iter(|| st_coherence(black_box(&rho0), &proj).unwrap()));

    c.bench_function("yield_resolvent", |b| {
        b.iter(|| singlet_yield(black_box(&h), &rho0, &params, YieldMethod::Resolvent).unwrap())
    });

    let traj_params = params.with_stride(5);
    c.bench_function("trajectory_with_coherence", |b| {
        b.iter(|| propagate(black_box(&h), &rho0, &traj_params).unwrap())
    });

    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("n_phi_64", |b| {
        b.iter(|| angular_sweep(black_box(&spec), &params, &SweepConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
