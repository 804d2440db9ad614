//! Single-thread pool against the default pool on the parallel hot paths.
//! The sequential fallback itself is measured with `--no-default-features`,
//! where both groups run the plain iterator code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbr_core::analysis::{haar_volume_mc, VolumeQuery};
use mbr_core::mbrstate::{gram, random_mbr};
use mbr_core::qcore::{haar_random_state, PauliString, PauliSum};
use mbr_core::tomography::{tomography_pipeline, GramMode, TomographyConfig};

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    let label = format!("{}-threads", default.current_num_threads());
    vec![("1-thread".into(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()), (label, default)]
}

#[cfg(feature = "parallel")]
fn run_in<R: Send>(pool: &rayon::ThreadPool, f: impl FnOnce() -> R + Send) -> R {
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(String, ())> {
    vec![("sequential".into(), ())]
}

#[cfg(not(feature = "parallel"))]
fn run_in<R: Send>(_: &(), f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn tfim_like(n: usize) -> PauliSum {
    let mut h = PauliSum::new(n);
    for q in 0..n {
        h.add(1.0, PauliString::sparse(n, &[(q, mbr_core::qcore::Pauli::Z)]).unwrap()).unwrap();
        if q + 1 < n {
            let xx = [(q, mbr_core::qcore::Pauli::X), (q + 1, mbr_core::qcore::Pauli::X)];
            h.add(0.7, PauliString::sparse(n, &xx).unwrap()).unwrap();
        }
    }
    h
}

fn bench(c: &mut Criterion) {
    let mbr = random_mbr(12, 4, 8, 1).unwrap();
    let h = tfim_like(16);
    let v = haar_random_state(16, 2).unwrap();
    let q = VolumeQuery::new(10, 16, 0.9).unwrap();
    let truth = random_mbr(8, 3, 2, 3).unwrap();
    let truth_state = mbr_core::mbrstate::assemble(&truth).unwrap().normalize().unwrap();
    let cfg = TomographyConfig { m: 100_000, m_h: 1_000_000, eps: 0.3, delta: 0.05, seed: 4, mode: GramMode::NoisyF };

    let mut g = c.benchmark_group("parallel");
    g.sample_size(10);
    for (label, pool) in pools() {
        g.bench_function(BenchmarkId::new("gram n=12 B=4 K=8", &label), |b| b.iter(|| run_in(&pool, || gram(&mbr).unwrap())));
        g.bench_function(BenchmarkId::new("pauli matvec n=16", &label), |b| b.iter(|| run_in(&pool, || h.apply_gather(v.amps()))));
        g.bench_function(BenchmarkId::new("haar volume n=10 2000 trials", &label), |b| {
            b.iter(|| run_in(&pool, || haar_volume_mc(&q, 2000, 5, false).unwrap()))
        });
        g.bench_function(BenchmarkId::new("tomography n=8 B=3", &label), |b| {
            b.iter(|| run_in(&pool, || tomography_pipeline(&truth_state, truth.bases(), &cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
