//! Lanczos approximation of `exp(-i H dt) |psi>`.
//!
//! The Krylov space is grown from the normalized state with the plain
//! three-term recurrence until the a-posteriori error estimate
//! `beta_m |[exp(-i T dt)]_{m-1,0}|` drops below the tolerance or the maximum
//! dimension is reached. On a happy breakdown (`beta_m = 0`) the space is
//! invariant and the result is exact.

use num_complex::Complex64;

use super::hamiltonian::FullHamiltonian;
use crate::dense::sym_eig;
use crate::error::{Error, Result};

pub const DEFAULT_KRYLOV_DIM: usize = 30;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Allowed deviation of the norm from one, checked on input and output.
pub const NORM_TOL: f64 = 1e-9;

/// Wavefunction in the configuration basis at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl StateVector {
    /// Product state `|config>` at `t = 0`.
    pub fn basis(dim: usize, config: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[config] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            time: 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        dot(&self.amplitudes, &other.amplitudes)
    }
}

/// Krylov settings shared by [`propagate`] and [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    pub krylov_dim: usize,
    pub tol: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            krylov_dim: DEFAULT_KRYLOV_DIM,
            tol: DEFAULT_TOL,
        }
    }
}

/// One step `exp(-i H dt)` at fixed Krylov dimension.
///
/// Refuses with [`Error::KrylovTolerance`] (naming the number of substeps the
/// step needs) when the error estimate exceeds `tol`.
pub fn propagate(
    state: &StateVector,
    h: &FullHamiltonian,
    dt: f64,
    krylov_dim: usize,
    tol: f64,
) -> Result<StateVector> {
    check_step_args(state, h, dt, krylov_dim, tol)?;
    let k = Krylov::build(h, &state.amplitudes, krylov_dim, dt, tol)?;
    let est = k.error_estimate(dt);
    if est > tol {
        return Err(Error::KrylovTolerance {
            tol,
            estimate: est,
            krylov_dim,
            required_substeps: k.required_substeps(dt, tol),
        });
    }
    let out = k.apply(dt);
    finish(out, state.time + dt)
}

/// Evolves by `t`, splitting into as many substeps as the tolerance needs.
pub fn evolve(
    state: &StateVector,
    h: &FullHamiltonian,
    t: f64,
    opts: KrylovOptions,
) -> Result<StateVector> {
    if t == 0.0 {
        check_norm(state.norm())?;
        return Ok(state.clone());
    }
    check_step_args(state, h, t, opts.krylov_dim, opts.tol)?;
    let mut psi = state.amplitudes.clone();
    let mut done = 0.0;
    let mut step = t;
    while done < t {
        let want = step.min(t - done);
        let k = Krylov::build(h, &psi, opts.krylov_dim, want, opts.tol)?;
        let mut tau = want;
        let mut halvings = 0;
        while k.error_estimate(tau) > opts.tol {
            tau *= 0.5;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::KrylovTolerance {
                    tol: opts.tol,
                    estimate: k.error_estimate(tau),
                    krylov_dim: opts.krylov_dim,
                    required_substeps: usize::MAX,
                });
            }
        }
        psi = k.apply(tau);
        done = if tau >= t - done { t } else { done + tau };
        step = if halvings == 0 { 2.0 * tau } else { tau };
    }
    finish(psi, state.time + t)
}

fn check_step_args(
    state: &StateVector,
    h: &FullHamiltonian,
    dt: f64,
    krylov_dim: usize,
    tol: f64,
) -> Result<()> {
    if state.amplitudes.len() != h.dim() {
        return Err(Error::LengthMismatch {
            expected: h.dim(),
            got: state.amplitudes.len(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    if krylov_dim < 2 {
        return Err(Error::InvalidArgument("Krylov dimension must be at least 2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = state.norm();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized(n * n));
    }
    Ok(())
}

fn finish(amplitudes: Vec<Complex64>, time: f64) -> Result<StateVector> {
    check_norm(norm(&amplitudes))?;
    Ok(StateVector { amplitudes, time })
}

fn check_norm(n: f64) -> Result<()> {
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NormDrift {
            norm: n,
            tol: NORM_TOL,
        });
    }
    Ok(())
}

struct Krylov {
    basis: Vec<Vec<Complex64>>,
    /// Eigenvalues and column-major eigenvectors of the tridiagonal `T`.
    evals: Vec<f64>,
    evecs: Vec<f64>,
    /// Coupling out of the space; zero after a happy breakdown.
    beta_out: f64,
    scale: f64,
}

impl Krylov {
    /// Grows the space until the estimate for `dt` is below `tol` or
    /// `max_dim` vectors have been generated.
    fn build(
        h: &FullHamiltonian,
        psi: &[Complex64],
        max_dim: usize,
        dt: f64,
        tol: f64,
    ) -> Result<Self> {
        let dim = psi.len();
        let scale = norm(psi);
        let max_dim = max_dim.min(dim);
        let v0: Vec<Complex64> = psi.iter().map(|z| z / scale).collect();
        let mut basis = vec![v0];
        let mut alpha: Vec<f64> = Vec::with_capacity(max_dim);
        let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        loop {
            let j = basis.len() - 1;
            h.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            for (wi, vi) in w.iter_mut().zip(&basis[j]) {
                *wi -= vi * a;
            }
            if j > 0 {
                let b = beta[j - 1];
                for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                    *wi -= vi * b;
                }
            }
            alpha.push(a);
            let b = norm(&w);
            let size = alpha.iter().map(|x| x.abs()).fold(1.0, f64::max);
            let breakdown = b <= 1e-13 * size;
            let full = alpha.len() == max_dim;
            let check = breakdown || full || (alpha.len() >= 4 && alpha.len() % 2 == 0);
            if check {
                let (evals, evecs) = tridiagonal_eig(&alpha, &beta)?;
                let k = Krylov {
                    basis: Vec::new(),
                    evals,
                    evecs,
                    beta_out: if breakdown { 0.0 } else { b },
                    scale,
                };
                if breakdown || full || k.error_estimate(dt) <= tol {
                    return Ok(Krylov { basis, ..k });
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }
    }

    fn m(&self) -> usize {
        self.evals.len()
    }

    /// Coefficients of `exp(-i T dt) e_0` in the Krylov basis.
    fn coeffs(&self, dt: f64) -> Vec<Complex64> {
        let m = self.m();
        let mut c = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m {
            let u = &self.evecs[k * m..(k + 1) * m];
            let ph = Complex64::from_polar(u[0], -self.evals[k] * dt);
            for (ci, &ui) in c.iter_mut().zip(u) {
                *ci += ph * ui;
            }
        }
        c
    }

    fn error_estimate(&self, dt: f64) -> f64 {
        if self.beta_out == 0.0 {
            return 0.0;
        }
        let c = self.coeffs(dt);
        self.scale * self.beta_out * c[self.m() - 1].norm()
    }

    /// Smallest power of two `s` whose substep passes the per-step check with
    /// a margin of 8, since each substep rebuilds its own space.
    fn required_substeps(&self, dt: f64, tol: f64) -> usize {
        let mut s = 2usize;
        while s < 1 << 40 {
            let sub = dt / s as f64;
            if self.error_estimate(sub) <= tol / 8.0 {
                return s;
            }
            s *= 2;
        }
        s
    }

    fn apply(&self, dt: f64) -> Vec<Complex64> {
        let c = self.coeffs(dt);
        let dim = self.basis[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (v, ck) in self.basis.iter().zip(&c) {
            let ck = ck * self.scale;
            for (o, vi) in out.iter_mut().zip(v) {
                *o += vi * ck;
            }
        }
        out
    }
}

fn tridiagonal_eig(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = alpha.len();
    let mut t = vec![0.0; m * m];
    for i in 0..m {
        t[i * m + i] = alpha[i];
        if i + 1 < m {
            t[(i + 1) * m + i] = beta[i];
            t[i * m + i + 1] = beta[i];
        }
    }
    sym_eig(m, &t)
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
