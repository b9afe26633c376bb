use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::FullHamiltonian;
use crate::dense::sym_eig;
use crate::error::{Error, Result};

/// Largest dimension solved by dense diagonalization.
pub const DENSE_MAX_DIM: usize = 4096;

/// Required `||H v - E v||` for every returned pair.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// An energy with its real normalized eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: Vec<f64>,
}

/// The `k` lowest eigenpairs of `h`, ascending.
///
/// Small problems are diagonalized densely. Larger ones use Lanczos with full
/// reorthogonalization, finding one pair at a time and deflating it, so
/// degenerate multiplets are resolved. `seed` fixes the random start vectors.
pub fn exact_eigenpairs(h: &FullHamiltonian, k: usize, seed: u64) -> Result<Vec<Eigenpair>> {
    let dim = h.dim();
    let k = k.min(dim);
    if dim <= DENSE_MAX_DIM {
        let m = h.to_dense()?;
        let (vals, vecs) = sym_eig(dim, &m)?;
        return Ok((0..k)
            .map(|i| Eigenpair {
                energy: vals[i],
                vector: vecs[i * dim..(i + 1) * dim].to_vec(),
            })
            .collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Eigenpair> = Vec::with_capacity(k);
    for _ in 0..k {
        let pair = lowest_deflated(h, &found, &mut rng)?;
        found.push(pair);
    }
    found.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(found)
}

fn lowest_deflated(h: &FullHamiltonian, locked: &[Eigenpair], rng: &mut ChaCha8Rng) -> Result<Eigenpair> {
    let dim = h.dim();
    let max_basis = ((1usize << 27) / dim).clamp(20, 160).min(dim - locked.len());
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut best = f64::INFINITY;
    for _restart in 0..100 {
        project_out(&mut start, locked);
        normalize(&mut start);
        let mut basis = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        loop {
            let j = basis.len() - 1;
            h.apply(&basis[j], &mut w);
            let a = dotf(&basis[j], &w);
            alpha.push(a);
            // full reorthogonalization, twice for stability
            for _ in 0..2 {
                project_out_vecs(&mut w, &basis);
                project_out(&mut w, locked);
            }
            let b = dotf(&w, &w).sqrt();
            let last = b < 1e-12 || basis.len() == max_basis;
            if last || alpha.len() % 10 == 0 {
                let m = alpha.len();
                let mut t = vec![0.0; m * m];
                for i in 0..m {
                    t[i * m + i] = alpha[i];
                    if i + 1 < m {
                        t[i * m + i + 1] = beta[i];
                        t[(i + 1) * m + i] = beta[i];
                    }
                }
                let (_, vecs) = sym_eig(m, &t)?;
                let est = b * vecs[m - 1].abs();
                if est < 1e-10 || last {
                    let mut v = vec![0.0; dim];
                    for (bv, &c) in basis.iter().zip(&vecs[..m]) {
                        v.iter_mut().zip(bv).for_each(|(x, y)| *x += c * y);
                    }
                    normalize(&mut v);
                    h.apply(&v, &mut w);
                    let e = dotf(&v, &w);
                    let res = w
                        .iter()
                        .zip(&v)
                        .map(|(hv, x)| (hv - e * x).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    best = best.min(res);
                    if res <= RESIDUAL_TOL {
                        return Ok(Eigenpair { energy: e, vector: v });
                    }
                    start = v;
                    break;
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
    }
    Err(Error::NonConvergence { residual: best })
}

fn project_out(v: &mut [f64], locked: &[Eigenpair]) {
    for p in locked {
        let c = dotf(&p.vector, v);
        v.iter_mut().zip(&p.vector).for_each(|(x, y)| *x -= c * y);
    }
}

fn project_out_vecs(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dotf(b, v);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
}

fn normalize(v: &mut [f64]) {
    let n = dotf(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
