//! Global quench from the fully polarized down state.

use num_complex::Complex64;

use super::hamiltonian::FullHamiltonian;
use super::krylov::{dot, evolve, KrylovOptions, StateVector, NORM_TOL};
use crate::error::{Error, Result};
use crate::lattice::Exponent;
use crate::par::Exec;

/// Default spacing of recorded samples, in units of `1/J`.
pub const DEFAULT_DT_RECORD: f64 = 0.05;

/// Observables of a quench on a uniform time grid.
///
/// `corr[t][d - 1]` is the site-averaged connected correlator `C(d, t)` along
/// the x direction for `d = 1 ..= L/2`; `corr_normalized` is the same scaled
/// by `8 N_a J^2 / g^2` (zero when `g = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub l: usize,
    pub j: f64,
    pub g: f64,
    pub alpha: Exponent,
    pub dt: f64,
    pub times: Vec<f64>,
    pub sz_avg: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    pub corr_normalized: Vec<Vec<f64>>,
    pub energy: Vec<f64>,
    /// Largest `| ||psi|| - 1 |` seen over the trajectory.
    pub max_norm_error: f64,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of correlator separations.
    pub fn separations(&self) -> usize {
        self.l / 2
    }

    /// `C(d, .)` as a column.
    pub fn corr_column(&self, d: usize) -> Vec<f64> {
        self.corr.iter().map(|row| row[d - 1]).collect()
    }

    pub fn corr_normalized_column(&self, d: usize) -> Vec<f64> {
        self.corr_normalized.iter().map(|row| row[d - 1]).collect()
    }

    /// Largest `|E(t) - E(0)| / |E(0)|`.
    pub fn relative_energy_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else {
            return 0.0;
        };
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        self.energy
            .iter()
            .map(|e| (e - e0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Settings for [`run_quench`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchOptions {
    pub krylov: KrylovOptions,
}

impl Default for QuenchOptions {
    fn default() -> Self {
        Self {
            krylov: KrylovOptions::default(),
        }
    }
}

/// Evolves the all-down state under `h` and records observables every
/// `dt_record` up to `t_max`.
pub fn run_quench(
    h: &FullHamiltonian,
    t_max: f64,
    dt_record: f64,
    opts: QuenchOptions,
) -> Result<TimeSeries> {
    let mut q = Quench::new(h, t_max, dt_record, opts)?;
    while q.advance()? {}
    Ok(q.into_series())
}

/// Record-by-record driver behind [`run_quench`]; exposes the state so a
/// caller can checkpoint and resume.
pub struct Quench<'h> {
    h: &'h FullHamiltonian,
    opts: QuenchOptions,
    tables: PairTables,
    state: StateVector,
    series: TimeSeries,
    records: usize,
    scratch: Vec<Complex64>,
}

impl<'h> Quench<'h> {
    pub fn new(h: &'h FullHamiltonian, t_max: f64, dt_record: f64, opts: QuenchOptions) -> Result<Self> {
        let start = StateVector::basis(h.dim(), 0);
        Self::resume(h, start, empty_series(h, dt_record), t_max, opts)
    }

    /// Continues from `state`, appending to `series` (which must hold exactly
    /// the records up to and including `state.time`).
    pub fn resume(
        h: &'h FullHamiltonian,
        state: StateVector,
        series: TimeSeries,
        t_max: f64,
        opts: QuenchOptions,
    ) -> Result<Self> {
        let dt = series.dt;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("record spacing must be positive, got {dt}")));
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_max must be non-negative, got {t_max}")));
        }
        if state.amplitudes.len() != h.dim() {
            return Err(Error::LengthMismatch {
                expected: h.dim(),
                got: state.amplitudes.len(),
            });
        }
        let ratio = t_max / dt;
        let steps = if (ratio - ratio.round()).abs() < 1e-9 {
            ratio.round()
        } else {
            ratio.floor()
        } as usize;
        let mut q = Self {
            h,
            opts,
            tables: PairTables::new(h.lattice().size(), h.exec()),
            scratch: vec![Complex64::new(0.0, 0.0); h.dim()],
            state,
            series,
            records: steps + 1,
        };
        if q.series.is_empty() {
            q.record();
        }
        Ok(q)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn total_records(&self) -> usize {
        self.records
    }

    /// Advances by one record. Returns `false` once the grid is complete.
    pub fn advance(&mut self) -> Result<bool> {
        let k = self.series.len();
        if k >= self.records {
            return Ok(false);
        }
        let next = StateVector {
            time: self.state.time,
            ..evolve(&self.state, self.h, self.series.dt, self.opts.krylov)?
        };
        self.state = StateVector {
            amplitudes: next.amplitudes,
            time: k as f64 * self.series.dt,
        };
        self.record();
        if self.series.max_norm_error > NORM_TOL {
            return Err(Error::NormDrift {
                norm: 1.0 + self.series.max_norm_error,
                tol: NORM_TOL,
            });
        }
        Ok(self.series.len() < self.records)
    }

    pub fn into_series(self) -> TimeSeries {
        self.series
    }

    fn record(&mut self) {
        let h = self.h;
        let psi = &self.state.amplitudes;
        let obs = self.tables.measure(psi, h.exec());
        h.apply(psi, &mut self.scratch);
        let energy = dot(psi, &self.scratch).re;
        let s = &mut self.series;
        let nd = s.separations();
        let m = obs[1];
        let corr: Vec<f64> = (0..nd).map(|d| obs[2 + d] - m * m).collect();
        let factor = if h.g() == 0.0 {
            0.0
        } else {
            8.0 * h.lattice().kac() * h.j() * h.j() / (h.g() * h.g())
        };
        s.times.push(self.state.time);
        s.sz_avg.push(m);
        s.corr_normalized.push(corr.iter().map(|c| c * factor).collect());
        s.corr.push(corr);
        s.energy.push(energy);
        s.max_norm_error = s.max_norm_error.max((obs[0].sqrt() - 1.0).abs());
    }
}

fn empty_series(h: &FullHamiltonian, dt: f64) -> TimeSeries {
    TimeSeries {
        l: h.lattice().size(),
        j: h.j(),
        g: h.g(),
        alpha: h.lattice().alpha(),
        dt,
        times: Vec::new(),
        sz_avg: Vec::new(),
        corr: Vec::new(),
        corr_normalized: Vec::new(),
        energy: Vec::new(),
        max_norm_error: 0.0,
    }
}

/// Per-configuration magnetization and x-translated overlap counts.
struct PairTables {
    sites: usize,
    /// `sum_i s_i` for each configuration.
    mag: Vec<i8>,
    /// `sum_i s_i s_{i + d x}` for `d = 1 ..= L/2`, one table per `d`.
    pair: Vec<Vec<i8>>,
}

const TABLE_CHUNK: usize = 1 << 14;

impl PairTables {
    fn new(l: usize, exec: Exec) -> Self {
        let n = l * l;
        let dim = 1usize << n;
        let mut mag = vec![0i8; dim];
        exec.for_each_chunk_mut(&mut mag, TABLE_CHUNK, |ci, out| {
            for (o, m) in out.iter_mut().enumerate() {
                let c = ci * TABLE_CHUNK + o;
                *m = (2 * c.count_ones() as i32 - n as i32) as i8;
            }
        });
        let pair = (1..=l / 2)
            .map(|d| {
                let mut t = vec![0i8; dim];
                exec.for_each_chunk_mut(&mut t, TABLE_CHUNK, |ci, out| {
                    for (o, v) in out.iter_mut().enumerate() {
                        let c = ci * TABLE_CHUNK + o;
                        let diff = (c ^ shift_x(c, l, d)).count_ones() as i32;
                        *v = (n as i32 - 2 * diff) as i8;
                    }
                });
                t
            })
            .collect();
        Self { sites: n, mag, pair }
    }

    /// `[norm^2, <S^z>_avg, <S^z_i S^z_{i+d}>_avg for each d]`.
    fn measure(&self, psi: &[Complex64], exec: Exec) -> Vec<f64> {
        let nd = self.pair.len();
        let chunks = psi.len().div_ceil(TABLE_CHUNK);
        let acc = exec.map_reduce(
            chunks,
            vec![0.0; 2 + nd],
            |ci| {
                let lo = ci * TABLE_CHUNK;
                let hi = (lo + TABLE_CHUNK).min(psi.len());
                let mut a = vec![0.0; 2 + nd];
                for c in lo..hi {
                    let p = psi[c].norm_sqr();
                    a[0] += p;
                    a[1] += p * self.mag[c] as f64;
                    for (d, t) in self.pair.iter().enumerate() {
                        a[2 + d] += p * t[c] as f64;
                    }
                }
                a
            },
            |mut x, y| {
                x.iter_mut().zip(&y).for_each(|(a, b)| *a += b);
                x
            },
        );
        let n = self.sites as f64;
        let mut out = vec![acc[0], acc[1] / (2.0 * n)];
        out.extend(acc[2..].iter().map(|s| s / (4.0 * n)));
        out
    }
}

/// Configuration translated by `d` sites along x.
fn shift_x(c: usize, l: usize, d: usize) -> usize {
    let mask = (1usize << l) - 1;
    let mut out = 0;
    for y in 0..l {
        let row = (c >> (y * l)) & mask;
        let rot = ((row << d) | (row >> (l - d))) & mask;
        out |= rot << (y * l);
    }
    out
}
