//! Hamming-windowed Fourier spectroscopy of time series and assignment of
//! spectral peaks to effective-theory gaps.
//!
//! The transform follows
//!
//! ```text
//! F(w_k) = sum_n w_n [O(t_n) - mean(O)] exp(i w_k t_n),   w_k = 2 pi k / (N_t dt)
//! ```
//!
//! over the samples inside the analysis window. Magnitudes are reported raw.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::sw::{GapEntry, GapTable};

/// Default start of the analysis window, skipping the initial transient.
pub const DEFAULT_T_MIN: f64 = 5.0;

/// Default relative peak threshold.
pub const DEFAULT_REL_THRESHOLD: f64 = 0.05;

/// A window whose samples spread by at most `FLAT_TOL * max(1, max |x|)` is
/// constant up to round-off and transforms to zero.
pub const FLAT_TOL: f64 = 1e-12;

/// Bins `k <= MAIN_LOBE_BINS` lie inside the window's main lobe around
/// `w = 0`, where the residual of the removed mean and any slow drift leak.
/// Peak detection starts above them.
pub const MAIN_LOBE_BINS: usize = 2;

/// `w_n = 0.54 - 0.46 cos(2 pi n / (N - 1))`.
pub fn hamming_window(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Hamming window needs at least two samples, got {n}"
        )));
    }
    let m = (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            // mirror so w_n and w_{N-1-n} are computed identically
            let k = k.min(n - 1 - k);
            0.54 - 0.46 * (2.0 * PI * k as f64 / m).cos()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// First and last sample time actually transformed.
    pub t_window: (f64, f64),
    pub dt: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Frequency spacing `2 pi / (N_t dt)`.
    pub fn bin_width(&self) -> f64 {
        2.0 * PI / (self.len() as f64 * self.dt)
    }
}

/// Mean-removed, windowed samples of `values` on `[t_min, t_max]`, with the
/// sample spacing and the window actually used.
fn prepare(times: &[f64], values: &[f64], t_min: f64, t_max: f64) -> Result<(Vec<f64>, f64, (f64, f64))> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    if times.len() < 2 {
        return Err(Error::EmptyWindow { t_min, t_max });
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::NonUniformGrid { index: 1 });
    }
    for (i, w) in times.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
            return Err(Error::NonUniformGrid { index: i + 1 });
        }
    }
    let eps = 1e-9 * dt;
    let idx: Vec<usize> = (0..times.len())
        .filter(|&i| times[i] >= t_min - eps && times[i] <= t_max + eps)
        .collect();
    if idx.len() < 2 {
        return Err(Error::EmptyWindow { t_min, t_max });
    }
    let sel: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let mean = sel.iter().sum::<f64>() / sel.len() as f64;
    let (lo, hi) = sel.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let size = sel.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if hi - lo <= FLAT_TOL * size {
        return Ok((vec![0.0; sel.len()], dt, (times[idx[0]], times[*idx.last().unwrap()])));
    }
    let w = hamming_window(sel.len())?;
    let x = sel.iter().zip(&w).map(|(v, w)| w * (v - mean)).collect();
    Ok((x, dt, (times[idx[0]], times[*idx.last().unwrap()])))
}

/// Windowed DFT magnitudes on the full `w_k` grid via FFT.
pub fn fft_spectrum(times: &[f64], values: &[f64], t_min: f64, t_max: f64) -> Result<Spectrum> {
    let (x, dt, window) = prepare(times, values, t_min, t_max)?;
    let n = x.len();
    // exp(+i w t) is the conjugate of the forward transform; magnitudes agree
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(Spectrum {
        omegas: (0..n).map(|k| 2.0 * PI * k as f64 / (n as f64 * dt)).collect(),
        magnitudes: buf.iter().map(|z| z.norm()).collect(),
        t_window: window,
        dt,
    })
}

/// The same transform evaluated as a direct `O(N^2)` sum with the actual
/// sample times in the exponent.
pub fn direct_spectrum(times: &[f64], values: &[f64], t_min: f64, t_max: f64) -> Result<Spectrum> {
    let (x, dt, window) = prepare(times, values, t_min, t_max)?;
    let n = x.len();
    let omegas: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / (n as f64 * dt)).collect();
    let magnitudes = omegas
        .iter()
        .map(|&w| {
            x.iter()
                .enumerate()
                .map(|(i, &v)| Complex64::from_polar(v, w * (window.0 + i as f64 * dt)))
                .sum::<Complex64>()
                .norm()
        })
        .collect();
    Ok(Spectrum {
        omegas,
        magnitudes,
        t_window: window,
        dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub magnitude: f64,
}

/// Local maxima in `MAIN_LOBE_BINS < k <= N/2` reaching `rel_threshold` of
/// the largest magnitude there, refined by a parabola through the
/// log-magnitudes of three bins, in descending magnitude order.
pub fn detect_peaks(spectrum: &Spectrum, rel_threshold: f64) -> Result<Vec<Peak>> {
    if !(rel_threshold > 0.0 && rel_threshold < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "relative threshold must lie in (0, 1), got {rel_threshold}"
        )));
    }
    let mag = &spectrum.magnitudes;
    let n = mag.len();
    let first = MAIN_LOBE_BINS + 1;
    let top = n / 2;
    if top < first {
        return Ok(Vec::new());
    }
    let global = mag[first..=top].iter().fold(0.0f64, |a, &b| a.max(b));
    if global <= 0.0 {
        return Ok(Vec::new());
    }
    let bin = spectrum.bin_width();
    let mut peaks = Vec::new();
    for k in first..=top {
        let b = mag[k];
        // neighbors beyond Nyquist mirror the ones below it
        let a = mag[k - 1];
        let c = mag[(k + 1) % n];
        if !(b > a && b >= c) || b < rel_threshold * global {
            continue;
        }
        let (mut omega, mut magnitude) = (spectrum.omegas[k], b);
        if a > 0.0 && c > 0.0 {
            let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
            let den = la - 2.0 * lb + lc;
            if den < 0.0 {
                let delta = 0.5 * (la - lc) / den;
                omega += delta * bin;
                magnitude = (lb - 0.25 * (la - lc) * delta).exp();
            }
        }
        peaks.push(Peak { omega, magnitude });
    }
    peaks.sort_by(|p, q| q.magnitude.total_cmp(&p.magnitude).then(p.omega.total_cmp(&q.omega)));
    Ok(peaks)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakAssignment {
    pub peak_omega: f64,
    pub peak_magnitude: f64,
    pub assigned_gap: Option<GapEntry>,
    /// `|w - delta|`; infinite when unassigned.
    pub residual: f64,
}

/// Assigns each peak to a gap within `tol`, greedily by ascending residual;
/// every peak and every gap is used at most once. The result follows the
/// order of `peaks` and does not depend on it otherwise.
pub fn match_gaps(peaks: &[Peak], gaps: &GapTable, tol: f64) -> Result<Vec<PeakAssignment>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("matching tolerance must be positive, got {tol}")));
    }
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (p, pk) in peaks.iter().enumerate() {
        // gaps are sorted by delta, so only a window needs scanning
        let lo = gaps.entries.partition_point(|g| g.delta < pk.omega - tol);
        for (gi, g) in gaps.entries.iter().enumerate().skip(lo) {
            if g.delta > pk.omega + tol {
                break;
            }
            cand.push(((pk.omega - g.delta).abs(), p, gi));
        }
    }
    cand.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(peaks[x.1].omega.total_cmp(&peaks[y.1].omega))
            .then(peaks[y.1].magnitude.total_cmp(&peaks[x.1].magnitude))
            .then(x.2.cmp(&y.2))
    });
    let mut peak_used = vec![false; peaks.len()];
    let mut gap_used = vec![false; gaps.len()];
    let mut out: Vec<PeakAssignment> = peaks
        .iter()
        .map(|p| PeakAssignment {
            peak_omega: p.omega,
            peak_magnitude: p.magnitude,
            assigned_gap: None,
            residual: f64::INFINITY,
        })
        .collect();
    for (r, p, gi) in cand {
        if peak_used[p] || gap_used[gi] {
            continue;
        }
        peak_used[p] = true;
        gap_used[gi] = true;
        out[p].assigned_gap = Some(gaps.entries[gi]);
        out[p].residual = r;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_values() {
        let w = hamming_window(11).unwrap();
        assert!((w[0] - 0.08).abs() < 1e-15);
        assert!((w[5] - 1.0).abs() < 1e-15);
        for n in 0..11 {
            assert_eq!(w[n], w[10 - n]);
        }
        assert!(hamming_window(1).is_err());
    }

    #[test]
    fn non_uniform_grid_is_rejected() {
        let t = [0.0, 0.1, 0.2, 0.35];
        assert!(matches!(
            fft_spectrum(&t, &[0.0; 4], 0.0, 1.0),
            Err(Error::NonUniformGrid { index: 3 })
        ));
        assert!(matches!(
            fft_spectrum(&[0.0, 0.1, 0.2], &[0.0; 3], 5.0, 6.0),
            Err(Error::EmptyWindow { .. })
        ));
    }
}
