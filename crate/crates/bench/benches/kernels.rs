use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ks_bench::{config, gaussian};
use ks_core::experiments::{bilinear_value, AmplitudeRule, BoxPairSpec};
use ks_core::solver::{duhamel_integral, etd_march, mild_map, picard_solve};
use ks_core::{Scheme, SymbolParams, Trajectory};

fn nonlinearity(c: &mut Criterion) {
    let mut group = c.benchmark_group("nonlinearity");
    for n in [256, 1024, 4096] {
        let u = gaussian(n, 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| b.iter(|| black_box(u.nonlinearity())));
    }
    group.finish();
}

fn duhamel(c: &mut Criterion) {
    let u = gaussian(512, 0.5);
    let forcing_state = u.nonlinearity();
    let nt = 65;
    let forcing = Trajectory::new(Trajectory::uniform_times(0.5, nt), vec![forcing_state; nt], 0.75).unwrap();
    let params = SymbolParams::default();
    c.bench_function("duhamel_n512_nt65", |b| {
        b.iter(|| black_box(duhamel_integral(&forcing, nt - 1, params).unwrap()))
    });
}

fn picard(c: &mut Criterion) {
    let phi = gaussian(512, 0.5);
    let cfg = config(0.2, 65, Scheme::Picard);
    let guess = picard_solve(&phi, &cfg).unwrap().trajectory;
    c.bench_function("picard_iteration_n512_nt65", |b| {
        b.iter(|| black_box(mild_map(&phi, &guess, &cfg).unwrap()))
    });
}

fn etdrk2_step(c: &mut Criterion) {
    let phi = gaussian(1024, 0.5);
    let cfg = config(1e-2, 2, Scheme::Etdrk2);
    c.bench_function("etdrk2_step_n1024", |b| b.iter(|| black_box(etd_march(&phi, &cfg).unwrap())));
}

fn bilinear(c: &mut Criterion) {
    let spec = BoxPairSpec::new(32.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
    let (phi_hat, psi_hat) = (spec.phi_profile(false), spec.psi_profile(false));
    let params = SymbolParams::default();
    c.bench_function("bilinear_value_n32", |b| {
        b.iter(|| black_box(bilinear_value(&phi_hat, &psi_hat, 1.7, params, 0.1, 64).unwrap()))
    });
}

criterion_group!(benches, nonlinearity, duhamel, picard, etdrk2_step, bilinear);
criterion_main!(benches);
