use super::{EffectiveHamiltonian, Mode};
use crate::dense::sym_eig;
use crate::error::{Error, Result};

/// All eigenpairs of an effective Hamiltonian, energies ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub nu: usize,
    pub mode: Mode,
    pub dim: usize,
    /// Total energies (the sector constant included).
    pub energies: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k * dim .. (k + 1) * dim]`.
    pub vectors: Vec<f64>,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }
}

/// Diagonalizes `h`.
///
/// A matrix without off-diagonal elements is returned as sorted coordinate
/// vectors, so degenerate levels are never mixed.
pub fn diagonalize(h: &EffectiveHamiltonian) -> Result<EigenSolution> {
    let m = h.dim();
    // the sector constant can dwarf the spread of levels; keep it out of the solve
    let total = &h.matrix;
    let scale = total.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(1.0);
    if h.max_asymmetry() > 1e-12 * scale {
        return Err(Error::InvalidArgument(format!(
            "effective Hamiltonian is not symmetric (deviation {:e})",
            h.max_asymmetry()
        )));
    }
    let diagonal = (0..m).all(|p| (0..m).all(|q| p == q || total[p * m + q] == 0.0));
    let (energies, vectors) = if diagonal {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&p, &q| total[p * m + p].total_cmp(&total[q * m + q]).then(p.cmp(&q)));
        let mut vecs = vec![0.0; m * m];
        for (k, &p) in order.iter().enumerate() {
            vecs[k * m + p] = 1.0;
        }
        (order.iter().map(|&p| total[p * m + p]).collect(), vecs)
    } else {
        sym_eig(m, total)?
    };
    // spot-check the extremal pairs
    for k in [0, m.saturating_sub(1)] {
        if m == 0 {
            break;
        }
        let v = &vectors[k * m..(k + 1) * m];
        let mut res = 0.0;
        for p in 0..m {
            let row = &total[p * m..(p + 1) * m];
            let hv: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            res += (hv - energies[k] * v[p]).powi(2);
        }
        let res = res.sqrt();
        if res > 1e-9 * scale * (m as f64).sqrt() {
            return Err(Error::NonConvergence { residual: res });
        }
    }
    Ok(EigenSolution {
        nu: h.basis.nu,
        mode: h.mode,
        dim: m,
        energies: energies.into_iter().map(|e: f64| e + h.constant).collect(),
        vectors,
    })
}
