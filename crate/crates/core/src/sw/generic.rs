//! Second-order Schrieffer-Wolff Hamiltonian of an arbitrary sector,
//!
//! ```text
//! H[m, n] = E(m) delta_mn
//!         + (g^2 / 2) sum_beta T_m,beta T_beta,n (1/(E_m - E_beta) + 1/(E_n - E_beta))
//! ```
//!
//! evaluated configuration by configuration. `T = -sum_i S^x_i` has element
//! `-1/2` between configurations that differ by one flip; only products of two
//! elements enter, so each path contributes `1/4`. Virtual states are all
//! configurations one flip away from a sector state (magnon number `nu +- 1`),
//! regardless of any filter on the sector itself.

use super::basis::{sites_of, SectorBasis};
use super::{EffectiveHamiltonian, Mode, DEFAULT_SW_GUARD};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::par::Exec;

/// Classical energy of a magnon configuration,
/// `E_0 + nu a - (2J / N_a) sum_{pairs} r^-a`.
pub fn config_energy(config: u128, lattice: &Lattice, j: f64) -> f64 {
    let n = lattice.sites() as f64;
    let sites: Vec<usize> = sites_of(config).collect();
    let a = 2.0 * j * (1.0 - 1.0 / n);
    let mut pairs = 0.0;
    for (p, &s) in sites.iter().enumerate() {
        for &t in &sites[p + 1..] {
            pairs += lattice.decay_sites(s, t);
        }
    }
    -0.5 * j * (n - 1.0) + sites.len() as f64 * a - 2.0 * j / lattice.kac() * pairs
}

/// Builds the effective Hamiltonian of `basis` with degeneracy guard
/// `guard * J`.
///
/// For a reduced basis the element between orbits `[m]` and `[n]` is
/// `sqrt(|O_m| / |O_n|) sum_{n' in O_n} H[rep(m), n']`.
pub fn build_sector_generic(
    basis: &SectorBasis,
    lattice: &Lattice,
    j: f64,
    g: f64,
    exec: Exec,
) -> Result<EffectiveHamiltonian> {
    build_sector_generic_with_guard(basis, lattice, j, g, DEFAULT_SW_GUARD, exec)
}

pub fn build_sector_generic_with_guard(
    basis: &SectorBasis,
    lattice: &Lattice,
    j: f64,
    g: f64,
    guard: f64,
    exec: Exec,
) -> Result<EffectiveHamiltonian> {
    let configs = basis.configs().ok_or_else(|| {
        Error::InvalidArgument("generic builder needs a configuration basis".into())
    })?;
    if basis.l != lattice.size() {
        return Err(Error::InvalidArgument(format!(
            "basis built for L={} used with L={}",
            basis.l,
            lattice.size()
        )));
    }
    let index = basis.index_map(lattice);
    let n = lattice.sites();
    let m = configs.len();
    let amp = 0.125 * g * g;
    let guard = guard * j;
    let rows: Vec<Result<Vec<f64>>> = exec.map_range(m, |p| {
        let cm = configs[p];
        let em = config_energy(cm, lattice, j);
        let mut row = vec![0.0; m];
        row[p] += em;
        if amp == 0.0 {
            return Ok(row);
        }
        for s in 0..n {
            let beta = cm ^ (1u128 << s);
            let eb = config_energy(beta, lattice, j);
            let dm = em - eb;
            if dm.abs() < guard {
                return Err(Error::SwDegenerate {
                    state: cm,
                    virtual_state: beta,
                    gap: dm.abs(),
                    guard,
                });
            }
            for t in 0..n {
                let cn = beta ^ (1u128 << t);
                let Some(&q) = index.get(&cn) else {
                    continue;
                };
                let en = if cn == cm { em } else { config_energy(cn, lattice, j) };
                let dn = en - eb;
                if dn.abs() < guard {
                    return Err(Error::SwDegenerate {
                        state: cn,
                        virtual_state: beta,
                        gap: dn.abs(),
                        guard,
                    });
                }
                let w = (basis.orbit_sizes[p] as f64 / basis.orbit_sizes[q] as f64).sqrt();
                row[q] += w * amp * (1.0 / dm + 1.0 / dn);
            }
        }
        Ok(row)
    });
    let mut matrix = Vec::with_capacity(m * m);
    for r in rows {
        matrix.extend(r?);
    }
    Ok(EffectiveHamiltonian::new(basis.clone(), matrix, 0.0, Mode::GenericSw))
}
