use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::par::Exec;

/// Largest lattice the exact engine accepts by default (5 x 5).
pub const DEFAULT_MAX_SITES: usize = 25;

/// Configurations per block of the diagonal fill; each block is one Gray-code
/// walk and an independent unit of parallel work.
const BLOCK_BITS: usize = 12;

/// Rows per parallel work item in the matrix-vector product.
const MATVEC_CHUNK: usize = 4096;

/// Classical Ising energy of a configuration.
///
/// Bit `k` of `config` set means site `k` points up (`s_k = +1`); the empty
/// configuration is the fully polarized down state.
pub fn classical_energy(config: u64, lattice: &Lattice, j: f64) -> f64 {
    let n = lattice.sites();
    let spin = |k: usize| if config >> k & 1 == 1 { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            sum += spin(a) * spin(b) * lattice.decay_sites(a, b);
        }
    }
    -0.5 * j / lattice.kac() * sum
}

/// Full transverse-field Ising Hamiltonian in the `S^z` product basis.
///
/// The diagonal (classical) part is stored; the transverse field acts as the
/// implicit rule "flip any one spin with amplitude `-g/2`" and is never
/// materialized.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    lattice: Lattice,
    j: f64,
    g: f64,
    diagonal: Vec<f64>,
    exec: Exec,
}

impl FullHamiltonian {
    pub fn new(lattice: &Lattice, j: f64, g: f64) -> Result<Self> {
        Self::with_options(lattice, j, g, DEFAULT_MAX_SITES, Exec::default())
    }

    pub fn with_options(
        lattice: &Lattice,
        j: f64,
        g: f64,
        max_sites: usize,
        exec: Exec,
    ) -> Result<Self> {
        let n = lattice.sites();
        if n > max_sites.min(32) {
            return Err(Error::LatticeTooLarge {
                sites: n,
                max: max_sites.min(32),
            });
        }
        if !(j.is_finite() && g.is_finite()) {
            return Err(Error::InvalidArgument("couplings must be finite".into()));
        }
        let diagonal = fill_diagonal(lattice, j, exec);
        Ok(Self {
            lattice: lattice.clone(),
            j,
            g,
            diagonal,
            exec,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn set_exec(&mut self, exec: Exec) {
        self.exec = exec;
    }

    pub fn sites(&self) -> usize {
        self.lattice.sites()
    }

    /// Hilbert-space dimension `2^(L^2)`.
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Matrix element of a single spin flip.
    pub fn flip_amplitude(&self) -> f64 {
        -0.5 * self.g
    }

    /// `y = H x`.
    pub fn apply<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + Send + Sync + Add<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let n = self.sites();
        let flip = self.flip_amplitude();
        let diag = &self.diagonal;
        self.exec.for_each_chunk_mut(y, MATVEC_CHUNK, |ci, out| {
            let base = ci * MATVEC_CHUNK;
            for (o, yc) in out.iter_mut().enumerate() {
                let c = base + o;
                let mut s = x[c ^ 1];
                for k in 1..n {
                    s = s + x[c ^ (1 << k)];
                }
                *yc = x[c] * diag[c] + s * flip;
            }
        });
    }

    /// Row-major dense matrix, for small oracles only.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let dim = self.dim();
        if dim > 1 << 13 {
            return Err(Error::InvalidArgument(format!(
                "refusing to materialize a {dim}x{dim} matrix"
            )));
        }
        let mut m = vec![0.0; dim * dim];
        let flip = self.flip_amplitude();
        for c in 0..dim {
            m[c * dim + c] = self.diagonal[c];
            for k in 0..self.sites() {
                m[c * dim + (c ^ (1 << k))] += flip;
            }
        }
        Ok(m)
    }
}

/// Diagonal over all `2^n` configurations.
///
/// The index range is cut into blocks of `2^BLOCK_BITS` consecutive
/// configurations. Within a block the low bits are walked in Gray-code order so
/// that each step flips one spin and the energy changes by
/// `(J / N) s_k h_k`, with the local fields `h` updated in `O(n)`.
fn fill_diagonal(lattice: &Lattice, j: f64, exec: Exec) -> Vec<f64> {
    let n = lattice.sites();
    let dim = 1usize << n;
    let w: Vec<f64> = (0..n * n)
        .map(|p| {
            let (a, b) = (p / n, p % n);
            if a == b {
                0.0
            } else {
                lattice.decay_sites(a, b)
            }
        })
        .collect();
    let scale = j / lattice.kac();
    let bits = BLOCK_BITS.min(n);
    let mut diag = vec![0.0; dim];
    exec.for_each_chunk_mut(&mut diag, 1 << bits, |block, out| {
        let base = (block << bits) as u64;
        let mut s: Vec<f64> = (0..n)
            .map(|k| if base >> k & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let mut h: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|q| s[q] * w[k * n + q]).sum())
            .collect();
        let mut e = classical_energy(base, lattice, j);
        let mut low = 0usize;
        out[0] = e;
        for step in 1..out.len() {
            let k = step.trailing_zeros() as usize;
            let sk = s[k];
            e += scale * sk * h[k];
            for q in 0..n {
                h[q] -= 2.0 * sk * w[q * n + k];
            }
            s[k] = -sk;
            low ^= 1 << k;
            out[low] = e;
        }
    });
    diag
}
