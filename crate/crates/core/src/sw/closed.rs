//! Closed-form effective Hamiltonians of the zero-, one- and two-magnon
//! sectors.
//!
//! With `a = 2J(1 - 1/L^2)` the cost of an isolated magnon and
//! `b(d) = 2J / (N_a |d|^a)` the classical pair binding, every second-order
//! denominator has the form `a - B` for a sum `B` of pair bindings; `f(B)`
//! below is `1 / (a - B)`.

use std::f64::consts::PI;

use super::basis::SectorBasis;
use super::{EffectiveHamiltonian, Mode, DEFAULT_SW_GUARD};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_displacements, Displacement, DisplacementIter, Exponent, Lattice};
use crate::par::Exec;

/// Energy of the fully polarized state, `-J (L^2 - 1) / 2`.
pub fn polarized_energy(lattice: &Lattice, j: f64) -> f64 {
    -0.5 * j * (lattice.sites() as f64 - 1.0)
}

/// Shared coefficients of the closed forms.
#[derive(Debug, Clone)]
pub(crate) struct Kernel<'a> {
    pub lattice: &'a Lattice,
    pub j: f64,
    pub g2: f64,
    pub a: f64,
    pub bscale: f64,
    pub guard: f64,
}

impl<'a> Kernel<'a> {
    pub fn new(lattice: &'a Lattice, j: f64, g: f64) -> Result<Self> {
        if !(j > 0.0 && j.is_finite()) {
            return Err(Error::InvalidArgument(format!("J must be positive, got {j}")));
        }
        if !g.is_finite() {
            return Err(Error::InvalidArgument(format!("g must be finite, got {g}")));
        }
        let n = lattice.sites() as f64;
        Ok(Self {
            lattice,
            j,
            g2: g * g,
            a: 2.0 * j * (1.0 - 1.0 / n),
            bscale: 2.0 * j / lattice.kac(),
            guard: DEFAULT_SW_GUARD * j,
        })
    }

    pub fn b(&self, d: Displacement) -> f64 {
        self.bscale * self.lattice.decay(d)
    }

    /// `1 / (a - big_b)`, refusing near-zero denominators. The error names the
    /// sector state and the offending virtual state as configurations.
    ///
    /// Every use is multiplied by `g^2`, so at zero field there is nothing to
    /// expand and 0 is returned.
    pub fn f(&self, big_b: f64, state: &[Displacement], virt: &[Displacement]) -> Result<f64> {
        if self.g2 == 0.0 {
            return Ok(0.0);
        }
        let den = self.a - big_b;
        if den.abs() < self.guard {
            return Err(Error::SwDegenerate {
                state: self.config(state),
                virtual_state: self.config(virt),
                gap: den.abs(),
                guard: self.guard,
            });
        }
        Ok(1.0 / den)
    }

    /// Configuration with a magnon at the origin and one at each displacement.
    fn config(&self, ds: &[Displacement]) -> u128 {
        let l = self.lattice.size();
        let mut c = 1u128;
        for d in ds {
            let x = (d.dx as i64).rem_euclid(l as i64) as usize;
            let y = (d.dy as i64).rem_euclid(l as i64) as usize;
            let s = self.lattice.site(x, y);
            if s < 128 {
                c |= 1u128 << s;
            }
        }
        c
    }
}

/// Zero-magnon energy to second order, `E_0 - g^2 L^2 / (4 a)`.
pub fn e0_effective(lattice: &Lattice, j: f64, g: f64) -> Result<f64> {
    let k = Kernel::new(lattice, j, g)?;
    Ok(polarized_energy(lattice, j) - k.g2 * lattice.sites() as f64 / (4.0 * k.a))
}

/// Diagonal element of the one-magnon effective Hamiltonian (same on every
/// site).
pub fn h1_onsite(lattice: &Lattice, j: f64, g: f64, mode: Mode) -> Result<f64> {
    let k = Kernel::new(lattice, j, g)?;
    let e0 = polarized_energy(lattice, j);
    match mode {
        Mode::Asymptotic => Ok(e0 + 2.0 * j - k.g2 * lattice.sites() as f64 / (8.0 * j)),
        _ => {
            let mut s = 0.0;
            for d in DisplacementIter::new(lattice.size()) {
                s += k.f(k.b(d), &[], &[d])?;
            }
            Ok(e0 + k.a + k.g2 / (4.0 * k.a) - 0.25 * k.g2 * s)
        }
    }
}

/// One-magnon hopping amplitude over displacement `d`.
pub fn h1_hop(lattice: &Lattice, j: f64, g: f64, d: Displacement, mode: Mode) -> Result<f64> {
    let k = Kernel::new(lattice, j, g)?;
    hop1(&k, d, mode)
}

fn hop1(k: &Kernel, d: Displacement, mode: Mode) -> Result<f64> {
    match mode {
        Mode::Asymptotic => Ok(-k.g2 / (8.0 * k.j * k.lattice.kac()) * k.lattice.decay(d)),
        _ => Ok(0.25 * k.g2 * (1.0 / k.a - k.f(k.b(d), &[], &[d])?)),
    }
}

/// One-magnon effective Hamiltonian over site positions (site order),
/// `L^2 x L^2`. `constant` holds the on-site energy; `matrix` the hopping.
pub fn build_h1(lattice: &Lattice, j: f64, g: f64, mode: Mode, exec: Exec) -> Result<EffectiveHamiltonian> {
    let mode = closed_mode(mode)?;
    let k = Kernel::new(lattice, j, g)?;
    let onsite = h1_onsite(lattice, j, g, mode)?;
    let l = lattice.size();
    let n = lattice.sites();
    // hopping per relative offset, indexed like the lattice coupling table
    let mut table = vec![0.0; n];
    for d in DisplacementIter::new(l) {
        let ux = (d.dx as i64).rem_euclid(l as i64) as usize;
        let uy = (d.dy as i64).rem_euclid(l as i64) as usize;
        table[ux * l + uy] = hop1(&k, d, mode)?;
    }
    let rows = exec.map_range(n, |p| {
        let (px, py) = lattice.coords(p);
        (0..n)
            .map(|q| {
                let (qx, qy) = lattice.coords(q);
                table[((qx + l - px) % l) * l + (qy + l - py) % l]
            })
            .collect::<Vec<f64>>()
    });
    let basis = SectorBasis::configurations(lattice, 1, false, Default::default(), usize::MAX)?;
    Ok(EffectiveHamiltonian::new(basis, rows.concat(), onsite, mode))
}

/// Single-magnon band `E_1(k) - E_0` for arbitrary wavevectors.
#[derive(Debug, Clone)]
pub struct Dispersion {
    onsite: f64,
    hops: Vec<(Displacement, f64)>,
}

impl Dispersion {
    pub fn new(lattice: &Lattice, j: f64, g: f64, mode: Mode) -> Result<Self> {
        let mode = closed_mode(mode)?;
        let k = Kernel::new(lattice, j, g)?;
        let onsite = h1_onsite(lattice, j, g, mode)? - polarized_energy(lattice, j);
        let hops = DisplacementIter::new(lattice.size())
            .map(|d| hop1(&k, d, mode).map(|t| (d, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { onsite, hops })
    }

    /// Band energy relative to the polarized state at `(kx, ky)`.
    pub fn at(&self, kx: f64, ky: f64) -> f64 {
        self.onsite
            + self
                .hops
                .iter()
                .map(|(d, t)| t * (kx * d.dx as f64 + ky * d.dy as f64).cos())
                .sum::<f64>()
    }
}

/// `E_1(k) - E_0` at one wavevector.
pub fn dispersion(lattice: &Lattice, j: f64, g: f64, k: (f64, f64), mode: Mode) -> Result<f64> {
    Ok(Dispersion::new(lattice, j, g, mode)?.at(k.0, k.1))
}

/// One sample of the band along a high-symmetry path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    /// Arc length along the path.
    pub s: f64,
    pub kx: f64,
    pub ky: f64,
    pub energy: f64,
    /// Index of the corner the segment starts from.
    pub segment: usize,
}

/// Corners of the X - M - Gamma - X - S path.
pub const PATH_CORNERS: [(&str, f64, f64); 5] = [
    ("X", PI, 0.0),
    ("M", PI, PI),
    ("G", 0.0, 0.0),
    ("X", PI, 0.0),
    ("S", PI / 2.0, PI / 2.0),
];

/// Band along X - M - Gamma - X - S with `per_segment` intervals per leg.
pub fn dispersion_path(
    lattice: &Lattice,
    j: f64,
    g: f64,
    mode: Mode,
    per_segment: usize,
) -> Result<Vec<PathPoint>> {
    let per_segment = per_segment.max(1);
    let disp = Dispersion::new(lattice, j, g, mode)?;
    let mut out = Vec::new();
    let mut s0 = 0.0;
    for (seg, w) in PATH_CORNERS.windows(2).enumerate() {
        let (_, x0, y0) = w[0];
        let (_, x1, y1) = w[1];
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        let first = if seg == 0 { 0 } else { 1 };
        for i in first..=per_segment {
            let t = i as f64 / per_segment as f64;
            let (kx, ky) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            out.push(PathPoint {
                s: s0 + t * len,
                kx,
                ky,
                energy: disp.at(kx, ky),
                segment: seg,
            });
        }
        s0 += len;
    }
    Ok(out)
}

/// Sector constant `E_2` of the two-magnon Hamiltonian.
///
/// Full mode uses the exact finite-size value, which equals twice the
/// one-magnon on-site energy minus the zero-magnon energy.
pub fn e2_constant(lattice: &Lattice, j: f64, g: f64, mode: Mode) -> Result<f64> {
    let e0 = polarized_energy(lattice, j);
    match closed_mode(mode)? {
        Mode::Asymptotic => Ok(e0 + 4.0 * j - g * g * lattice.sites() as f64 / (8.0 * j)),
        _ => Ok(2.0 * h1_onsite(lattice, j, g, Mode::Full)? - e0_effective(lattice, j, g)?),
    }
}

/// Continuum integral `int d^2r |r|^-a |r - R|^-a` at `|R| = 1`, with disks of
/// radius 1/2 (one lattice spacing in diameter) removed around both
/// singular points.
pub fn continuum_f1(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "continuum pair integral diverges for exponent {alpha}"
        )));
    }
    // theta-integral at radius r (both half planes), excluding |r - R| < 1/2
    let ring = |r: f64| -> f64 {
        let c0 = (r * r + 0.75) / (2.0 * r);
        let th0 = if c0 < 1.0 { c0.acos() } else { 0.0 };
        let m = 400;
        let h = (PI - th0) / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let th = th0 + i as f64 * h;
            let q2 = r * r + 1.0 - 2.0 * r * th.cos();
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * q2.powf(-0.5 * alpha);
        }
        2.0 * s * h / 3.0 * r.powf(-alpha) * r
    };
    let simpson = |lo: f64, hi: f64, m: usize, f: &dyn Fn(f64) -> f64| {
        let h = (hi - lo) / m as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..m {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
        }
        s * h / 3.0
    };
    let near = simpson(0.5, 1.5, 2000, &ring) + simpson(1.5, 4.0, 1000, &ring);
    // r = e^u on the far field
    let far = simpson(4f64.ln(), 400f64.ln(), 1000, &|u: f64| {
        let r = u.exp();
        ring(r) * r
    });
    let tail = 2.0 * PI * 400f64.powf(2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
    Ok(near + far + tail)
}

/// Two-magnon closed forms for one parameter set.
pub struct TwoMagnon<'a> {
    k: Kernel<'a>,
    mode: Mode,
    /// Zero-field part of the full diagonal that does not depend on `d`.
    shift: f64,
    /// `-g^2 F(1) / (8 J N_a^2)`; zero in the nearest-neighbor limit.
    du_coeff: f64,
}

impl<'a> TwoMagnon<'a> {
    pub fn new(lattice: &'a Lattice, j: f64, g: f64, mode: Mode) -> Result<Self> {
        let mode = closed_mode(mode)?;
        let k = Kernel::new(lattice, j, g)?;
        let (shift, du_coeff) = match mode {
            Mode::Asymptotic => {
                let c = match lattice.alpha() {
                    Exponent::Infinite => 0.0,
                    Exponent::Finite(a) => {
                        -k.g2 * continuum_f1(a)? / (8.0 * j * lattice.kac().powi(2))
                    }
                };
                (0.0, c)
            }
            _ => {
                let n = lattice.sites() as f64;
                let mut s1 = 0.0;
                for d in DisplacementIter::new(lattice.size()) {
                    s1 += k.f(k.b(d), &[], &[d])? - 1.0 / k.a;
                }
                let shift = -k.g2 / (2.0 * k.a) + 0.25 * k.g2 * ((n - 2.0) / k.a + 2.0 * s1);
                (shift, 0.0)
            }
        };
        Ok(Self {
            k,
            mode,
            shift,
            du_coeff,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Diagonal potential `U(d)` relative to the sector constant.
    pub fn u(&self, d: Displacement) -> Result<f64> {
        check_nonzero(d)?;
        let k = &self.k;
        let lat = k.lattice;
        let l = lat.size();
        let d = Displacement::canonical(d.dx as i64, d.dy as i64, l);
        match self.mode {
            Mode::Asymptotic => {
                let direct = -(2.0 * k.j - k.g2 / (2.0 * k.j)) / lat.kac() * lat.decay(d);
                let du = match lat.alpha() {
                    Exponent::Infinite => 0.0,
                    Exponent::Finite(a) => self.du_coeff * d.distance().powf(-2.0 * (a - 1.0)),
                };
                Ok(direct + du)
            }
            _ => {
                let bd = k.b(d);
                let mut s = 0.0;
                for x in DisplacementIter::new(l) {
                    if x == d {
                        continue;
                    }
                    let xd = x.sub(d, l);
                    s += k.f(k.b(x) + k.b(xd), &[d], &[d, x])?;
                }
                let own = k.f(bd, &[d], &[])?;
                Ok(-bd + 0.25 * k.g2 * (2.0 * own - s) + self.shift)
            }
        }
    }

    /// Amplitude for one magnon to move so that the pair displacement changes
    /// from `d` to `e` while the other stays put.
    pub fn hop(&self, d: Displacement, e: Displacement) -> Result<f64> {
        check_nonzero(d)?;
        check_nonzero(e)?;
        let k = &self.k;
        let l = k.lattice.size();
        let c = d.sub(e, l);
        if c.is_zero() {
            return Err(Error::InvalidArgument(format!("pair hop needs d != d', got {d} twice")));
        }
        match self.mode {
            Mode::Asymptotic => Ok(-k.g2 / (8.0 * k.j * k.lattice.kac()) * k.lattice.decay(c)),
            _ => {
                let (bd, be, bc) = (k.b(d), k.b(e), k.b(c));
                Ok(0.125
                    * k.g2
                    * (k.f(bd, &[d], &[])? + k.f(be, &[e], &[])?
                        - k.f(be + bc, &[d], &[d, e])?
                        - k.f(bd + bc, &[e], &[d, e])?))
            }
        }
    }
}

fn check_nonzero(d: Displacement) -> Result<()> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("displacement must be nonzero".into()));
    }
    Ok(())
}

fn closed_mode(mode: Mode) -> Result<Mode> {
    match mode {
        Mode::GenericSw => Err(Error::InvalidArgument(
            "closed forms are available in full or asymptotic mode only".into(),
        )),
        m => Ok(m),
    }
}

/// `U(d)` in the given mode, relative to the sector constant.
pub fn u_potential(d: Displacement, lattice: &Lattice, j: f64, g: f64, mode: Mode) -> Result<f64> {
    TwoMagnon::new(lattice, j, g, mode)?.u(d)
}

/// Single-mover pair hopping amplitude between displacements `d` and `e`.
pub fn pair_hop(
    d: Displacement,
    e: Displacement,
    lattice: &Lattice,
    j: f64,
    g: f64,
    mode: Mode,
) -> Result<f64> {
    TwoMagnon::new(lattice, j, g, mode)?.hop(d, e)
}

/// Two-magnon effective Hamiltonian over relative displacements.
///
/// In the pinned basis either magnon can move, so the off-diagonal element
/// between `d` and `e` is twice the single-mover amplitude. With
/// `identify_inversion` the states `d` and `-d` (the same pair of identical
/// magnons) are merged: element `(p, q)` becomes
/// `sqrt(|O_p| / |O_q|) sum_{e in O_q} H(rep_p, e)`, which is the
/// Hamiltonian of the inversion-symmetric subspace.
pub fn build_h2(
    lattice: &Lattice,
    j: f64,
    g: f64,
    mode: Mode,
    identify_inversion: bool,
    exec: Exec,
) -> Result<EffectiveHamiltonian> {
    let tm = TwoMagnon::new(lattice, j, g, mode)?;
    let constant = e2_constant(lattice, j, g, tm.mode)?;
    let set = enumerate_displacements(lattice.size(), identify_inversion)?;
    let m = set.len();
    let element = |d: Displacement, e: Displacement| -> Result<f64> {
        if d == e {
            tm.u(d)
        } else {
            Ok(2.0 * tm.hop(d, e)?)
        }
    };
    let rows: Vec<Result<Vec<f64>>> = exec.map_range(m, |p| {
        let r = set.reps[p];
        let sp = set.orbit_sizes[p] as f64;
        (0..m)
            .map(|q| {
                let sq = set.orbit_sizes[q] as f64;
                let mut v = 0.0;
                for e in set.members(q) {
                    v += element(e, r)?;
                }
                Ok((sp / sq).sqrt() * v)
            })
            .collect()
    });
    let mut matrix = Vec::with_capacity(m * m);
    for r in rows {
        matrix.extend(r?);
    }
    // symmetrize away rounding differences of the two summation orders
    for p in 0..m {
        for q in p + 1..m {
            let avg = 0.5 * (matrix[p * m + q] + matrix[q * m + p]);
            matrix[p * m + q] = avg;
            matrix[q * m + p] = avg;
        }
    }
    Ok(EffectiveHamiltonian::new(
        SectorBasis::two_magnon(set),
        matrix,
        constant,
        tm.mode,
    ))
}
