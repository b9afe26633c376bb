//! Exact dynamics on the full `2^(L^2)` Hilbert space.
//!
//! Configurations are bit-packed integers (bit `k` set means site `k` up), so
//! lattices up to 5 x 5 are supported. The all-down state is configuration 0.

mod eigen;
mod hamiltonian;
mod krylov;
mod quench;

pub use eigen::{exact_eigenpairs, Eigenpair, DENSE_MAX_DIM, RESIDUAL_TOL};
pub use hamiltonian::{classical_energy, FullHamiltonian, DEFAULT_MAX_SITES};
pub use krylov::{evolve, propagate, KrylovOptions, StateVector, DEFAULT_KRYLOV_DIM, DEFAULT_TOL, NORM_TOL};
pub use quench::{run_quench, Quench, QuenchOptions, TimeSeries, DEFAULT_DT_RECORD};

/// Bytes needed to hold the Hamiltonian diagonal, the propagated state and a
/// Krylov space of `krylov_dim` vectors for `sites` spins.
pub fn memory_estimate(sites: usize, krylov_dim: usize) -> u64 {
    let dim = 1u64 << sites;
    // diagonal, state, scratch, Krylov basis, correlator tables (one byte each)
    dim * 8 + dim * 16 * (krylov_dim as u64 + 3) + dim * (1 + sites as u64 / 2)
}
