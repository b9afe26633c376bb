//! Numerical toolkit for the two-dimensional long-range transverse-field Ising
//! model on an `L x L` torus,
//!
//! ```text
//! H = -(J / N_a) sum_{i != j} S^z_i S^z_j / r_ij^a  -  g sum_i S^x_i
//! ```
//!
//! with Kac normalization `N_a`. The crate covers four layers:
//!
//! - [`lattice`]: torus geometry, minimum-image displacements and `N_a`.
//! - [`exact`]: the full `2^(L^2)` Hamiltonian as an implicit operator, Krylov
//!   time evolution of the polarized-state quench, and exact eigenpairs.
//! - [`sw`]: second-order Schrieffer-Wolff effective Hamiltonians for the
//!   zero-, one- and two-magnon sectors in closed form, a generic builder for
//!   arbitrary sectors, the single-magnon dispersion and gap tables.
//! - [`boundstates`] and [`spectral`]: classification of two-magnon eigenstates
//!   and Hamming-windowed Fourier spectroscopy matched against gap tables.
//!
//! Heavy loops run through [`par::Exec`], which dispatches to rayon when the
//! `parallel` feature is enabled and to plain iterators otherwise.

pub mod boundstates;
mod dense;
pub mod error;
pub mod exact;
pub mod io;
pub mod lattice;
pub mod par;
pub mod spectral;
pub mod sw;

pub use error::{Error, Result};
pub use lattice::{Displacement, Exponent, Lattice};
pub use par::Exec;
