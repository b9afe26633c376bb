//! Zero-momentum sector Hamiltonians used for gap tables.

use super::basis::{Filter, SectorBasis, DEFAULT_BASIS_CAP};
use super::closed::{build_h2, e0_effective, polarized_energy, Dispersion};
use super::generic::build_sector_generic;
use super::{EffectiveHamiltonian, Mode};
use crate::error::Result;
use crate::lattice::Lattice;
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorOptions {
    pub mode: Mode,
    /// Restrict the three-magnon sector to configurations with a
    /// nearest-neighbor pair.
    pub filter_three: bool,
    pub cap: usize,
    pub exec: Exec,
}

impl Default for SectorOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Full,
            filter_three: true,
            cap: DEFAULT_BASIS_CAP,
            exec: Exec::default(),
        }
    }
}

/// Effective Hamiltonian of the zero-momentum part of sector `nu`.
///
/// In full or asymptotic mode sectors 0 to 2 use the closed forms (the
/// one-magnon sector reduces to the band energy at Gamma and the two-magnon
/// sector to the inversion-identified relative-coordinate basis); higher
/// sectors, and every sector in generic mode, use the generic builder on a
/// translation-reduced basis.
pub fn sector_hamiltonian(
    nu: usize,
    lattice: &Lattice,
    j: f64,
    g: f64,
    opts: SectorOptions,
) -> Result<EffectiveHamiltonian> {
    let closed = opts.mode != Mode::GenericSw;
    match nu {
        0 | 1 if closed => {
            let basis = SectorBasis::configurations(lattice, nu, true, Filter::None, opts.cap)?;
            let e = if nu == 0 {
                match opts.mode {
                    Mode::Asymptotic => {
                        polarized_energy(lattice, j) - g * g * lattice.sites() as f64 / (8.0 * j)
                    }
                    _ => e0_effective(lattice, j, g)?,
                }
            } else {
                polarized_energy(lattice, j) + Dispersion::new(lattice, j, g, opts.mode)?.at(0.0, 0.0)
            };
            Ok(EffectiveHamiltonian::new(basis, vec![0.0], e, opts.mode))
        }
        2 if closed => build_h2(lattice, j, g, opts.mode, true, opts.exec),
        _ => {
            let filter = if nu == 3 && opts.filter_three {
                Filter::NearestNeighborPair
            } else {
                Filter::None
            };
            let basis = SectorBasis::configurations(lattice, nu, true, filter, opts.cap)?;
            build_sector_generic(&basis, lattice, j, g, opts.exec)
        }
    }
}
