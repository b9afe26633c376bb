//! Classification of two-magnon eigenstates by inverse participation ratio
//! and mean pair separation, and real-space densities in the relative
//! coordinate.
//!
//! Amplitudes live on the basis the Hamiltonian was built in. For an
//! inversion-identified basis the IPR is taken over orbits, and the density of
//! an orbit is split evenly between `d` and `-d` when unfolded onto the grid.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Displacement;
use crate::par::Exec;
use crate::sw::{EigenSolution, SectorBasis};

/// Tolerance on `sum |psi|^2 = 1`.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Bound,
    Quasilocalized,
    Scattering,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Bound => "bound",
            Label::Quasilocalized => "quasilocalized",
            Label::Scattering => "scattering",
        })
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bound" => Ok(Label::Bound),
            "quasilocalized" => Ok(Label::Quasilocalized),
            "scattering" => Ok(Label::Scattering),
            other => Err(Error::InvalidArgument(format!("unknown label {other:?}"))),
        }
    }
}

/// IPR boundaries between the three classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `IPR >= bound_ipr` is bound.
    pub bound_ipr: f64,
    /// `IPR <= scattering_factor / M` is scattering, `M` the basis size.
    pub scattering_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            bound_ipr: 0.1,
            scattering_factor: 5.0,
        }
    }
}

impl Thresholds {
    pub fn label(&self, ipr: f64, basis_size: usize) -> Label {
        if ipr >= self.bound_ipr {
            Label::Bound
        } else if ipr <= self.scattering_factor / basis_size as f64 {
            Label::Scattering
        } else {
            Label::Quasilocalized
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateRecord {
    pub eigen_index: usize,
    pub energy: f64,
    pub ipr: f64,
    pub dbar: f64,
    pub label: Label,
}

fn check_norm(psi: &[f64]) -> Result<()> {
    let n: f64 = psi.iter().map(|x| x * x).sum();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized(n));
    }
    Ok(())
}

fn displacement_basis(basis: &SectorBasis, len: usize) -> Result<&crate::lattice::DisplacementSet> {
    let set = basis.displacements().ok_or_else(|| {
        Error::InvalidArgument("two-magnon analysis needs a displacement basis".into())
    })?;
    if set.len() != len {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            got: len,
        });
    }
    Ok(set)
}

/// `sum |psi|^4`.
pub fn ipr(psi: &[f64]) -> Result<f64> {
    check_norm(psi)?;
    Ok(psi.iter().map(|x| x.powi(4)).sum())
}

/// `sum |psi(d)|^2 |d|` with minimum-image distances.
pub fn mean_separation(psi: &[f64], basis: &SectorBasis) -> Result<f64> {
    let set = displacement_basis(basis, psi.len())?;
    Ok(psi
        .iter()
        .zip(&set.reps)
        .map(|(a, d)| a * a * d.distance())
        .sum())
}

/// Labels every eigenstate of a two-magnon solution.
pub fn classify(
    solution: &EigenSolution,
    basis: &SectorBasis,
    thresholds: Thresholds,
    exec: Exec,
) -> Result<Vec<BoundStateRecord>> {
    let m = solution.dim;
    displacement_basis(basis, m)?;
    let out: Vec<Result<BoundStateRecord>> = exec.map_range(solution.len(), |k| {
        let psi = solution.vector(k);
        let ipr = ipr(psi)?;
        Ok(BoundStateRecord {
            eigen_index: k,
            energy: solution.energies[k],
            ipr,
            dbar: mean_separation(psi, basis)?,
            label: thresholds.label(ipr, m),
        })
    });
    out.into_iter().collect()
}

/// `|psi(d)|^2` on the `L x L` grid of canonical displacements.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub l: usize,
    /// `values[(dx - lo) * L + (dy - lo)]` with `lo = -(L - 1) / 2`.
    pub values: Vec<f64>,
}

impl DensityMap {
    pub fn lo(&self) -> i32 {
        -((self.l as i32 - 1) / 2)
    }

    pub fn get(&self, d: Displacement) -> f64 {
        let d = Displacement::canonical(d.dx as i64, d.dy as i64, self.l);
        let lo = self.lo();
        self.values[(d.dx - lo) as usize * self.l + (d.dy - lo) as usize]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Displacement of the largest density (first in `(dx, dy)` order on
    /// ties).
    pub fn peak(&self) -> Displacement {
        let lo = self.lo();
        let (mut best, mut at) = (f64::NEG_INFINITY, 0);
        for (i, &v) in self.values.iter().enumerate() {
            if v > best {
                best = v;
                at = i;
            }
        }
        Displacement::new((at / self.l) as i32 + lo, (at % self.l) as i32 + lo)
    }
}

/// Unfolds `psi` onto the displacement grid.
pub fn density_map(psi: &[f64], basis: &SectorBasis) -> Result<DensityMap> {
    let set = displacement_basis(basis, psi.len())?;
    check_norm(psi)?;
    let l = set.size;
    let mut map = DensityMap {
        l,
        values: vec![0.0; l * l],
    };
    let lo = map.lo();
    for (k, a) in psi.iter().enumerate() {
        let w = a * a / set.orbit_sizes[k] as f64;
        for d in set.members(k) {
            map.values[(d.dx - lo) as usize * l + (d.dy - lo) as usize] += w;
        }
    }
    Ok(map)
}
