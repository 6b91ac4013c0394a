use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pfaff_core::identities::cauchy_binet_sides_with;
use pfaff_core::kernels::circular_symplectic;
use pfaff_core::pointfield::{fredholm_det_with, fredholm_rule};
use pfaff_core::qlinalg::moore_dyson_det_with;
use pfaff_core::sampler::{mcmc, ChainConfig, Ensemble};
use pfaff_core::{Exec, Quaternion, QuaternionMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn quat<R: Rng>(rng: &mut R) -> Quaternion {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    Quaternion::new(c(), c(), c(), c())
}

fn self_dual(n: usize, seed: u64) -> QuaternionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = QuaternionMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Quaternion::scalar(C64::new(rng.random_range(-1.0..1.0), 0.0));
        for j in i + 1..n {
            let q = quat(&mut rng);
            m[(i, j)] = q;
            m[(j, i)] = q.conj();
        }
    }
    m
}

fn cayley(c: &mut Criterion) {
    let x = self_dual(8, 1);
    let mut g = c.benchmark_group("cayley_det_n8");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| moore_dyson_det_with(black_box(&x), exec).unwrap()));
    }
    g.finish();
}

fn cauchy_binet(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = QuaternionMatrix::from_fn(10, 5, |_, _| quat(&mut rng));
    let mut g = c.benchmark_group("cauchy_binet_10x5");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| cauchy_binet_sides_with(black_box(&m), exec).unwrap()));
    }
    g.finish();
}

fn fredholm(c: &mut Criterion) {
    let k = circular_symplectic(3).unwrap();
    let quad = fredholm_rule(&k).unwrap();
    let s = C64::new(0.0, 0.7).exp() - 1.0;
    let mut g = c.benchmark_group("fredholm_cse3");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| fredholm_det_with(&k, black_box(s), &quad, exec).unwrap()));
    }
    g.finish();
}

fn sampler(c: &mut Criterion) {
    let cfg = ChainConfig { steps: 4_000, burn_in: 500, thin: 10, chains: 8, seed: 3, ..ChainConfig::default() };
    let mut g = c.benchmark_group("mcmc_cse4_8_chains");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| mcmc(Ensemble::Cse, 4, black_box(&cfg), exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, cayley, cauchy_binet, fredholm, sampler);
criterion_main!(benches);
