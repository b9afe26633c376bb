//! Krylov dynamics and eigensolvers against a dense reference built from the
//! Hamiltonian definition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use lrtfim::exact::{
    evolve, exact_eigenpairs, propagate, run_quench, FullHamiltonian, KrylovOptions, QuenchOptions,
    StateVector,
};
use lrtfim::lattice::{Exponent, Lattice};
use lrtfim::{Error, Exec};

/// `H` in the `S^z` basis, spin-1/2 operators, bit set = up.
fn reference_matrix(lat: &Lattice, j: f64, g: f64) -> DMatrix<f64> {
    let n = lat.sites();
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        let s = |i: usize| if c >> i & 1 == 1 { 0.5 } else { -0.5 };
        let mut e = 0.0;
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    e -= j / lat.kac() * s(a) * s(b) * lat.decay_sites(a, b);
                }
            }
        }
        h[(c, c)] = e;
        for k in 0..n {
            h[(c ^ 1 << k, c)] -= 0.5 * g;
        }
    }
    h
}

struct Oracle {
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl Oracle {
    fn new(lat: &Lattice, j: f64, g: f64) -> Self {
        Self {
            eig: SymmetricEigen::new(reference_matrix(lat, j, g)),
        }
    }

    fn evolve(&self, psi0: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = &self.eig.eigenvectors;
        let dim = psi0.len();
        let mut coef = vec![Complex64::new(0.0, 0.0); dim];
        for k in 0..dim {
            let c: Complex64 = (0..dim).map(|i| psi0[i] * v[(i, k)]).sum();
            coef[k] = c * Complex64::from_polar(1.0, -self.eig.eigenvalues[k] * t);
        }
        (0..dim)
            .map(|i| (0..dim).map(|k| coef[k] * v[(i, k)]).sum())
            .collect()
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_state(dim: usize, seed: u64) -> StateVector {
    // small LCG; only needs to be generic, not random
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut amps: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= n);
    StateVector { amplitudes: amps, time: 0.0 }
}

#[test]
fn matrix_matches_definition() {
    for alpha in [Exponent::Finite(2.5), Exponent::Infinite] {
        let lat = Lattice::new(3, alpha).unwrap();
        let h = FullHamiltonian::new(&lat, 1.3, 0.7).unwrap();
        let dense = h.to_dense().unwrap();
        let r = reference_matrix(&lat, 1.3, 0.7);
        let dim = h.dim();
        for a in 0..dim {
            for b in 0..dim {
                assert!((dense[a * dim + b] - r[(a, b)]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn evolution_matches_dense_exponential() {
    let lat = Lattice::new(3, Exponent::Finite(3.0)).unwrap();
    let (j, g) = (1.0, 0.5);
    let h = FullHamiltonian::new(&lat, j, g).unwrap();
    let oracle = Oracle::new(&lat, j, g);
    for (seed, t) in [(0u64, 0.05), (1, 0.7), (2, 3.0)] {
        let psi0 = if seed == 0 {
            StateVector::basis(h.dim(), 0)
        } else {
            random_state(h.dim(), seed)
        };
        let got = evolve(&psi0, &h, t, KrylovOptions::default()).unwrap();
        let want = oracle.evolve(&psi0.amplitudes, t);
        let err = max_diff(&got.amplitudes, &want);
        assert!(err < 1e-9, "t={t}: {err:e}");
        assert!((got.time - t).abs() < 1e-15);
    }
}

#[test]
fn eigenstate_only_acquires_a_phase() {
    let lat = Lattice::new(3, Exponent::Finite(2.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.8).unwrap();
    let pair = &exact_eigenpairs(&h, 1, 7).unwrap()[0];
    let psi0 = StateVector {
        amplitudes: pair.vector.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        time: 0.0,
    };
    let t = 2.5;
    let got = evolve(&psi0, &h, t, KrylovOptions::default()).unwrap();
    let phase = Complex64::from_polar(1.0, -pair.energy * t);
    let want: Vec<Complex64> = psi0.amplitudes.iter().map(|a| a * phase).collect();
    assert!(max_diff(&got.amplitudes, &want) < 1e-10);
}

#[test]
fn oversized_step_is_refused_with_a_substep_count() {
    let lat = Lattice::new(3, Exponent::Finite(3.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 1.0).unwrap();
    let psi0 = random_state(h.dim(), 3);
    let err = propagate(&psi0, &h, 10.0, 10, 1e-12).unwrap_err();
    let Error::KrylovTolerance { required_substeps, estimate, .. } = err else {
        panic!("unexpected error {err:?}");
    };
    assert!(required_substeps > 1);
    assert!(estimate > 1e-12);
    let n = required_substeps;
    let mut psi = psi0.clone();
    for _ in 0..n {
        psi = propagate(&psi, &h, 10.0 / n as f64, 10, 1e-12).unwrap();
    }
    let want = Oracle::new(&lat, 1.0, 1.0).evolve(&psi0.amplitudes, 10.0);
    assert!(max_diff(&psi.amplitudes, &want) < 1e-9);
}

#[test]
fn quench_observables_match_dense_reference() {
    let lat = Lattice::new(3, Exponent::Finite(3.0)).unwrap();
    let (j, g) = (1.0, 0.4);
    let h = FullHamiltonian::new(&lat, j, g).unwrap();
    let series = run_quench(&h, 2.0, 0.25, QuenchOptions::default()).unwrap();
    assert_eq!(series.len(), 9);
    let oracle = Oracle::new(&lat, j, g);
    let psi0 = StateVector::basis(h.dim(), 0).amplitudes;
    let n = lat.sites();
    let spin = |c: usize, i: usize| if c >> i & 1 == 1 { 0.5 } else { -0.5 };
    for (k, &t) in series.times.iter().enumerate() {
        let psi = oracle.evolve(&psi0, t);
        let mut m = 0.0;
        let mut ss = 0.0;
        for (c, a) in psi.iter().enumerate() {
            let p = a.norm_sqr();
            for i in 0..n {
                let (x, y) = lat.coords(i);
                let right = lat.site((x + 1) % 3, y);
                m += p * spin(c, i) / n as f64;
                ss += p * spin(c, i) * spin(c, right) / n as f64;
            }
        }
        assert!((series.sz_avg[k] - m).abs() < 1e-10, "t={t}");
        assert!((series.corr[k][0] - (ss - m * m)).abs() < 1e-10, "t={t}");
        let scale = 8.0 * lat.kac() * j * j / (g * g);
        assert!((series.corr_normalized[k][0] - scale * series.corr[k][0]).abs() < 1e-12);
        let hpsi = reference_matrix(&lat, j, g).map(|x| Complex64::new(x, 0.0)) * DVector::from_column_slice(&psi);
        let e: f64 = psi.iter().zip(hpsi.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        assert!((series.energy[k] - e).abs() < 1e-10);
    }
}

#[test]
fn quench_conserves_norm_and_energy() {
    let lat = Lattice::new(4, Exponent::Finite(2.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.6).unwrap();
    let s = run_quench(&h, 4.0, 0.05, QuenchOptions::default()).unwrap();
    assert_eq!(s.len(), 81);
    assert!(s.max_norm_error < 1e-9, "{:e}", s.max_norm_error);
    assert!(s.relative_energy_drift() < 1e-9, "{:e}", s.relative_energy_drift());
    // translation invariance along x: C(d) and C(L - d) coincide, and with
    // L = 4 the only separations recorded are 1 and 2
    assert_eq!(s.separations(), 2);
}

#[test]
fn zero_field_quench_is_static() {
    let lat = Lattice::new(3, Exponent::Finite(3.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.0).unwrap();
    let s = run_quench(&h, 1.0, 0.1, QuenchOptions::default()).unwrap();
    for k in 0..s.len() {
        assert!((s.sz_avg[k] + 0.5).abs() < 1e-14);
        assert!(s.corr[k][0].abs() < 1e-14);
        assert_eq!(s.corr_normalized[k][0], 0.0);
    }
}

#[test]
fn sequential_and_parallel_quenches_agree() {
    let lat = Lattice::new(4, Exponent::Finite(3.0)).unwrap();
    let seq = FullHamiltonian::with_options(&lat, 1.0, 0.5, 16, Exec::Sequential).unwrap();
    let par = FullHamiltonian::with_options(&lat, 1.0, 0.5, 16, Exec::Parallel).unwrap();
    let a = run_quench(&seq, 1.0, 0.1, QuenchOptions::default()).unwrap();
    let b = run_quench(&par, 1.0, 0.1, QuenchOptions::default()).unwrap();
    for k in 0..a.len() {
        assert!((a.sz_avg[k] - b.sz_avg[k]).abs() < 1e-12);
        for d in 0..2 {
            assert!((a.corr[k][d] - b.corr[k][d]).abs() < 1e-12);
        }
    }
}

#[test]
fn dense_eigenpairs_match_reference() {
    let lat = Lattice::new(3, Exponent::Finite(2.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.3).unwrap();
    let mut want: Vec<f64> = Oracle::new(&lat, 1.0, 0.3).eig.eigenvalues.iter().copied().collect();
    want.sort_by(f64::total_cmp);
    let got = exact_eigenpairs(&h, 6, 1).unwrap();
    for (p, w) in got.iter().zip(&want) {
        assert!((p.energy - w).abs() < 1e-10);
    }
}

#[test]
fn iterative_eigenpairs_resolve_degenerate_levels() {
    // at g = 0 the spectrum is the sorted classical energies, and the two
    // polarized states are exactly degenerate
    let lat = Lattice::new(4, Exponent::Finite(3.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.0).unwrap();
    assert!(h.dim() > lrtfim::exact::DENSE_MAX_DIM);
    let mut want = h.diagonal().to_vec();
    want.sort_by(f64::total_cmp);
    let got = exact_eigenpairs(&h, 3, 11).unwrap();
    for (p, w) in got.iter().zip(&want) {
        assert!((p.energy - w).abs() < 1e-9, "{} vs {w}", p.energy);
    }
    let overlap: f64 = got[0].vector.iter().zip(&got[1].vector).map(|(a, b)| a * b).sum();
    assert!(overlap.abs() < 1e-8);
}

#[test]
fn iterative_eigenpairs_have_small_residuals() {
    let lat = Lattice::new(4, Exponent::Finite(2.0)).unwrap();
    let h = FullHamiltonian::new(&lat, 1.0, 0.4).unwrap();
    let got = exact_eigenpairs(&h, 2, 5).unwrap();
    let mut w = vec![0.0; h.dim()];
    for p in &got {
        h.apply(&p.vector, &mut w);
        let r: f64 = w.iter().zip(&p.vector).map(|(a, b)| (a - p.energy * b).powi(2)).sum();
        assert!(r.sqrt() <= lrtfim::exact::RESIDUAL_TOL);
    }
    assert!(got[0].energy <= got[1].energy);
}
