//! Sequential against parallel execution of the hot kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use lrtfim::boundstates::{classify, Thresholds};
use lrtfim::exact::FullHamiltonian;
use lrtfim::sw::{build_h2, diagonalize, Mode};
use lrtfim::{Exec, Exponent, Lattice};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    group.sample_size(20);
    for l in [4usize, 5] {
        let lat = Lattice::new(l, Exponent::Finite(3.0)).unwrap();
        for (name, exec) in POLICIES {
            let h = FullHamiltonian::with_options(&lat, 1.0, 0.3, 25, exec).unwrap();
            let x: Vec<Complex64> = (0..h.dim())
                .map(|k| Complex64::new((k as f64).sin(), (k as f64).cos()))
                .collect();
            let mut y = vec![Complex64::new(0.0, 0.0); h.dim()];
            group.bench_with_input(BenchmarkId::new(name, l), &l, |b, _| {
                b.iter(|| h.apply(black_box(&x), &mut y))
            });
        }
    }
    group.finish();
}

fn h2_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("h2_assembly");
    group.sample_size(10);
    for l in [21usize, 41] {
        let lat = Lattice::new(l, Exponent::Finite(3.0)).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, l), &l, |b, _| {
                b.iter(|| build_h2(&lat, 1.0, 0.2, Mode::Full, true, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(20);
    let lat = Lattice::new(41, Exponent::Finite(3.0)).unwrap();
    let h = build_h2(&lat, 1.0, 0.2, Mode::Full, true, Exec::default()).unwrap();
    let sol = diagonalize(&h).unwrap();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| classify(&sol, &h.basis, Thresholds::default(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matvec, h2_assembly, classification);
criterion_main!(benches);
