//! Periodic square lattice, minimum-image geometry and Kac normalization.
//!
//! Sites are indexed row-major, `site = y * L + x`. Displacements are stored
//! in canonical minimum-image form with both components in `(-L/2, L/2]`; at
//! the half period of an even lattice the positive component `+L/2` is kept.

use std::fmt;

use crate::error::{Error, Result};

/// Power-law exponent of the Ising coupling.
///
/// `Infinite` is the nearest-neighbor limit: `r^-a` is 1 at `r = 1` and 0
/// everywhere else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// `r^-a` evaluated from the squared integer distance.
    pub fn decay(self, norm2: i64) -> f64 {
        debug_assert!(norm2 > 0);
        match self {
            Exponent::Infinite => {
                if norm2 == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Exponent::Finite(a) => (norm2 as f64).powf(-0.5 * a),
        }
    }

    /// Numeric value, `+inf` in the nearest-neighbor limit.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(a) => a,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(a) => write!(f, "{a}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let a: f64 = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse exponent {s:?}")))?;
        if a.is_infinite() && a > 0.0 {
            return Ok(Exponent::Infinite);
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exponent must be positive, got {a}"
            )));
        }
        Ok(Exponent::Finite(a))
    }
}

/// Canonical minimum-image displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Displacement {
    pub dx: i32,
    pub dy: i32,
}

impl Displacement {
    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    /// Maps arbitrary integer components onto the canonical image for size `l`.
    pub fn canonical(dx: i64, dy: i64, l: usize) -> Self {
        Self {
            dx: wrap(dx, l),
            dy: wrap(dy, l),
        }
    }

    pub fn is_zero(self) -> bool {
        self.dx == 0 && self.dy == 0
    }

    pub fn norm2(self) -> i64 {
        let (x, y) = (self.dx as i64, self.dy as i64);
        x * x + y * y
    }

    pub fn distance(self) -> f64 {
        (self.norm2() as f64).sqrt()
    }

    pub fn neg(self, l: usize) -> Self {
        Self::canonical(-(self.dx as i64), -(self.dy as i64), l)
    }

    pub fn sub(self, other: Self, l: usize) -> Self {
        Self::canonical(
            self.dx as i64 - other.dx as i64,
            self.dy as i64 - other.dy as i64,
            l,
        )
    }
}

impl fmt::Display for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dx, self.dy)
    }
}

fn wrap(c: i64, l: usize) -> i32 {
    let l = l as i64;
    let m = c.rem_euclid(l);
    (if m > l / 2 { m - l } else { m }) as i32
}

/// Minimum-image displacement from `site_i` to `site_j` on an `l x l` torus.
pub fn min_image_disp(site_i: usize, site_j: usize, l: usize) -> Result<Displacement> {
    let n = l * l;
    for s in [site_i, site_j] {
        if s >= n {
            return Err(Error::SiteOutOfRange { site: s, sites: n });
        }
    }
    let (xi, yi) = ((site_i % l) as i64, (site_i / l) as i64);
    let (xj, yj) = ((site_j % l) as i64, (site_j / l) as i64);
    Ok(Displacement::canonical(xj - xi, yj - yi, l))
}

/// `N_a = (L^2 - 1)^-1 sum_{i<j} r_ij^-a` under the minimum-image metric.
///
/// By translation invariance the pair sum is `L^2 / 2` times the sum over the
/// `L^2 - 1` nonzero displacements from a single site.
pub fn kac_norm(l: usize, alpha: Exponent) -> Result<f64> {
    check_size(l)?;
    let n = (l * l) as f64;
    let per_site: f64 = DisplacementIter::new(l).map(|d| alpha.decay(d.norm2())).sum();
    Ok(0.5 * n * per_site / (n - 1.0))
}

fn check_size(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidLattice(format!("linear size must be >= 2, got {l}")));
    }
    if l > 1 << 14 {
        return Err(Error::InvalidLattice(format!("linear size {l} is unreasonably large")));
    }
    Ok(())
}

/// Iterates all nonzero canonical displacements, `dx` major then `dy`, each
/// running upward through `(-L/2, L/2]`.
#[derive(Debug, Clone)]
pub struct DisplacementIter {
    lo: i32,
    hi: i32,
    dx: i32,
    dy: i32,
}

impl DisplacementIter {
    pub fn new(l: usize) -> Self {
        let hi = (l / 2) as i32;
        let lo = hi + 1 - l as i32;
        Self { lo, hi, dx: lo, dy: lo }
    }
}

impl Iterator for DisplacementIter {
    type Item = Displacement;

    fn next(&mut self) -> Option<Displacement> {
        loop {
            if self.dx > self.hi {
                return None;
            }
            let d = Displacement::new(self.dx, self.dy);
            if self.dy == self.hi {
                self.dy = self.lo;
                self.dx += 1;
            } else {
                self.dy += 1;
            }
            if !d.is_zero() {
                return Some(d);
            }
        }
    }
}

/// Nonzero displacements, optionally reduced to one representative per
/// `{d, -d}` orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementSet {
    pub size: usize,
    pub identify_inversion: bool,
    pub reps: Vec<Displacement>,
    /// Number of displacements in each orbit (1 or 2; always 1 without
    /// identification).
    pub orbit_sizes: Vec<u8>,
}

impl DisplacementSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// All members of orbit `k` (the representative first).
    pub fn members(&self, k: usize) -> impl Iterator<Item = Displacement> + '_ {
        let d = self.reps[k];
        let other = d.neg(self.size);
        std::iter::once(d).chain((self.orbit_sizes[k] == 2).then_some(other))
    }

    /// Index of the orbit containing `d`, if any.
    pub fn index_of(&self, d: Displacement) -> Option<usize> {
        let d = Displacement::canonical(d.dx as i64, d.dy as i64, self.size);
        if d.is_zero() {
            return None;
        }
        let l = self.size;
        let slot = |d: Displacement| {
            let h = (l / 2) as i32;
            let lo = h + 1 - l as i32;
            (d.dx - lo) as usize * l + (d.dy - lo) as usize
        };
        // Dense table would be cheaper for repeated lookups; callers that need
        // that build `OrbitTable`.
        let target = slot(d);
        self.reps
            .iter()
            .enumerate()
            .find(|(k, _)| self.members(*k).any(|m| slot(m) == target))
            .map(|(k, _)| k)
    }
}

/// Dense lookup from any canonical displacement to its orbit index.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    size: usize,
    lo: i32,
    slots: Vec<u32>,
}

impl OrbitTable {
    pub fn new(set: &DisplacementSet) -> Self {
        let l = set.size;
        let lo = (l / 2) as i32 + 1 - l as i32;
        let mut slots = vec![u32::MAX; l * l];
        for k in 0..set.len() {
            for m in set.members(k) {
                slots[(m.dx - lo) as usize * l + (m.dy - lo) as usize] = k as u32;
            }
        }
        Self { size: l, lo, slots }
    }

    pub fn get(&self, d: Displacement) -> Option<usize> {
        let d = Displacement::canonical(d.dx as i64, d.dy as i64, self.size);
        let v = self.slots[(d.dx - self.lo) as usize * self.size + (d.dy - self.lo) as usize];
        (v != u32::MAX).then_some(v as usize)
    }
}

/// All `L^2 - 1` nonzero canonical displacements; with `identify_inversion`
/// one representative per `{d, -d}` orbit (the first met in iteration order).
pub fn enumerate_displacements(l: usize, identify_inversion: bool) -> Result<DisplacementSet> {
    check_size(l)?;
    let all: Vec<Displacement> = DisplacementIter::new(l).collect();
    if !identify_inversion {
        let n = all.len();
        return Ok(DisplacementSet {
            size: l,
            identify_inversion,
            reps: all,
            orbit_sizes: vec![1; n],
        });
    }
    let lo = (l / 2) as i32 + 1 - l as i32;
    let slot = |d: Displacement| (d.dx - lo) as usize * l + (d.dy - lo) as usize;
    let mut seen = vec![false; l * l];
    let mut reps = Vec::with_capacity(all.len() / 2 + 2);
    let mut orbit_sizes = Vec::with_capacity(all.len() / 2 + 2);
    for d in all {
        if seen[slot(d)] {
            continue;
        }
        let m = d.neg(l);
        seen[slot(d)] = true;
        seen[slot(m)] = true;
        reps.push(d);
        orbit_sizes.push(if m == d { 1 } else { 2 });
    }
    Ok(DisplacementSet {
        size: l,
        identify_inversion,
        reps,
        orbit_sizes,
    })
}

/// Torus geometry with its Kac constant and a precomputed coupling table.
#[derive(Debug, Clone)]
pub struct Lattice {
    size: usize,
    alpha: Exponent,
    kac: f64,
    /// `r^-a` indexed by `(dx mod L) * L + (dy mod L)`; zero at the origin.
    decay: Vec<f64>,
}

impl Lattice {
    pub fn new(size: usize, alpha: Exponent) -> Result<Self> {
        check_size(size)?;
        if let Exponent::Finite(a) = alpha {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidLattice(format!(
                    "exponent must be positive, got {a}"
                )));
            }
        }
        let mut decay = vec![0.0; size * size];
        for ux in 0..size {
            for uy in 0..size {
                let d = Displacement::canonical(ux as i64, uy as i64, size);
                if !d.is_zero() {
                    decay[ux * size + uy] = alpha.decay(d.norm2());
                }
            }
        }
        let n = (size * size) as f64;
        let per_site: f64 = decay.iter().sum();
        let kac = 0.5 * n * per_site / (n - 1.0);
        Ok(Self {
            size,
            alpha,
            kac,
            decay,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sites(&self) -> usize {
        self.size * self.size
    }

    pub fn alpha(&self) -> Exponent {
        self.alpha
    }

    /// Kac constant `N_a`.
    pub fn kac(&self) -> f64 {
        self.kac
    }

    pub fn site(&self, x: usize, y: usize) -> usize {
        (y % self.size) * self.size + (x % self.size)
    }

    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.size, site / self.size)
    }

    pub fn disp(&self, site_i: usize, site_j: usize) -> Result<Displacement> {
        min_image_disp(site_i, site_j, self.size)
    }

    /// `r^-a` for a displacement given by arbitrary integer components.
    #[inline]
    pub fn decay_of(&self, dx: i64, dy: i64) -> f64 {
        let l = self.size as i64;
        self.decay[(dx.rem_euclid(l) * l + dy.rem_euclid(l)) as usize]
    }

    #[inline]
    pub fn decay(&self, d: Displacement) -> f64 {
        self.decay_of(d.dx as i64, d.dy as i64)
    }

    /// `r_ij^-a` between two sites.
    #[inline]
    pub fn decay_sites(&self, i: usize, j: usize) -> f64 {
        let l = self.size;
        let dx = (j % l + l - i % l) % l;
        let dy = (j / l + l - i / l) % l;
        self.decay[dx * l + dy]
    }

    /// Largest minimum-image distance on this torus.
    pub fn max_distance(&self) -> f64 {
        let h = (self.size / 2) as f64;
        (2.0 * h * h).sqrt()
    }
}
