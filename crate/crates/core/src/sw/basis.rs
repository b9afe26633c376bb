use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::lattice::{DisplacementSet, Lattice};

/// Default cap on the number of states of a generic sector basis.
pub const DEFAULT_BASIS_CAP: usize = 50_000;

/// Largest lattice representable with bit-packed `u128` configurations.
pub const MAX_CONFIG_SITES: usize = 128;

/// Optional restriction of a sector basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    None,
    /// Keep configurations with at least two magnons on nearest-neighbor sites.
    NearestNeighborPair,
}

impl Filter {
    pub fn accepts(self, config: u128, lattice: &Lattice) -> bool {
        match self {
            Filter::None => true,
            Filter::NearestNeighborPair => has_nn_pair(config, lattice),
        }
    }
}

/// How the states of a sector are labeled.
#[derive(Debug, Clone, PartialEq)]
pub enum States {
    /// Bit-packed configurations (bit `k` set: magnon on site `k`). In a
    /// reduced basis each entry is the smallest configuration of its
    /// translation orbit and stands for the normalized zero-momentum
    /// superposition over that orbit.
    Configurations(Vec<u128>),
    /// Relative coordinate of two magnons, one pinned at the origin.
    Displacements(DisplacementSet),
}

/// Basis of a magnon-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    pub nu: usize,
    pub l: usize,
    pub states: States,
    /// Translation-orbit size of each state (all 1 when not reduced; for
    /// displacements the `{d, -d}` orbit size).
    pub orbit_sizes: Vec<usize>,
    /// Zero-momentum reduction applied.
    pub reduced: bool,
    pub filter: Filter,
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.orbit_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit_sizes.is_empty()
    }

    pub fn configs(&self) -> Option<&[u128]> {
        match &self.states {
            States::Configurations(c) => Some(c),
            States::Displacements(_) => None,
        }
    }

    pub fn displacements(&self) -> Option<&DisplacementSet> {
        match &self.states {
            States::Displacements(d) => Some(d),
            States::Configurations(_) => None,
        }
    }

    /// Two-magnon basis in the relative coordinate.
    pub fn two_magnon(set: DisplacementSet) -> Self {
        let orbit_sizes = set.orbit_sizes.iter().map(|&s| s as usize).collect();
        Self {
            nu: 2,
            l: set.size,
            reduced: set.identify_inversion,
            states: States::Displacements(set),
            orbit_sizes,
            filter: Filter::None,
        }
    }

    /// All `nu`-magnon configurations, optionally reduced to zero momentum and
    /// filtered. Fails when more than `cap` states would result.
    pub fn configurations(
        lattice: &Lattice,
        nu: usize,
        reduced: bool,
        filter: Filter,
        cap: usize,
    ) -> Result<Self> {
        let n = lattice.sites();
        if n > MAX_CONFIG_SITES {
            return Err(Error::InvalidLattice(format!(
                "{n} sites exceed the {MAX_CONFIG_SITES}-site limit of the configuration basis"
            )));
        }
        if nu > n {
            return Err(Error::InvalidArgument(format!(
                "{nu} magnons do not fit on {n} sites"
            )));
        }
        let total = binomial(n, nu);
        let bound = if reduced { total.div_ceil(n as u128) } else { total };
        // reduced bases can be up to n times smaller than the unreduced count
        if bound > cap as u128 {
            return Err(Error::BasisTooLarge {
                states: bound.min(usize::MAX as u128) as usize,
                cap,
            });
        }
        let (configs, orbit_sizes) = if reduced {
            let tr = Translations::new(lattice);
            let mut seen = HashSet::new();
            let mut reps = Vec::new();
            for_each_subset(n - 1, nu.saturating_sub(1), |rest| {
                let c = if nu == 0 { 0 } else { (rest << 1) | 1 };
                let r = tr.canonical(c);
                if seen.insert(r) && filter.accepts(r, lattice) {
                    reps.push(r);
                }
            });
            if nu == 0 {
                reps = vec![0];
            }
            reps.sort_unstable();
            let sizes = reps.iter().map(|&r| tr.orbit(r).len()).collect();
            (reps, sizes)
        } else {
            let mut all = Vec::new();
            for_each_subset(n, nu, |c| {
                if filter.accepts(c, lattice) {
                    all.push(c);
                }
            });
            all.sort_unstable();
            let sizes = vec![1; all.len()];
            (all, sizes)
        };
        if configs.len() > cap {
            return Err(Error::BasisTooLarge {
                states: configs.len(),
                cap,
            });
        }
        Ok(Self {
            nu,
            l: lattice.size(),
            states: States::Configurations(configs),
            orbit_sizes,
            reduced,
            filter,
        })
    }

    /// Map from every configuration covered by the basis to its state index.
    pub(crate) fn index_map(&self, lattice: &Lattice) -> HashMap<u128, usize> {
        let configs = self.configs().expect("configuration basis");
        let mut map = HashMap::with_capacity(self.orbit_sizes.iter().sum());
        if self.reduced {
            let tr = Translations::new(lattice);
            for (k, &c) in configs.iter().enumerate() {
                for m in tr.orbit(c) {
                    map.insert(m, k);
                }
            }
        } else {
            for (k, &c) in configs.iter().enumerate() {
                map.insert(c, k);
            }
        }
        map
    }
}

/// Site permutations of all `L^2` lattice translations.
pub(crate) struct Translations {
    n: usize,
    /// `perm[t * n + s]` is the image of site `s` under translation `t`.
    perm: Vec<u8>,
}

impl Translations {
    pub(crate) fn new(lattice: &Lattice) -> Self {
        let l = lattice.size();
        let n = lattice.sites();
        let mut perm = vec![0u8; n * n];
        for t in 0..n {
            let (tx, ty) = lattice.coords(t);
            for s in 0..n {
                let (x, y) = lattice.coords(s);
                perm[t * n + s] = lattice.site((x + tx) % l, (y + ty) % l) as u8;
            }
        }
        Self { n, perm }
    }

    pub(crate) fn apply(&self, t: usize, config: u128) -> u128 {
        let p = &self.perm[t * self.n..(t + 1) * self.n];
        let mut out = 0u128;
        let mut c = config;
        while c != 0 {
            let s = c.trailing_zeros() as usize;
            out |= 1u128 << p[s];
            c &= c - 1;
        }
        out
    }

    /// Smallest configuration in the translation orbit.
    pub(crate) fn canonical(&self, config: u128) -> u128 {
        (0..self.n).map(|t| self.apply(t, config)).min().unwrap_or(config)
    }

    /// Distinct members of the orbit, sorted.
    pub(crate) fn orbit(&self, config: u128) -> Vec<u128> {
        let mut v: Vec<u128> = (0..self.n).map(|t| self.apply(t, config)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Sites of a configuration in ascending order.
pub(crate) fn sites_of(config: u128) -> impl Iterator<Item = usize> {
    let mut c = config;
    std::iter::from_fn(move || {
        (c != 0).then(|| {
            let s = c.trailing_zeros() as usize;
            c &= c - 1;
            s
        })
    })
}

fn has_nn_pair(config: u128, lattice: &Lattice) -> bool {
    let l = lattice.size();
    sites_of(config).any(|s| {
        let (x, y) = lattice.coords(s);
        let right = lattice.site((x + 1) % l, y);
        let up = lattice.site(x, (y + 1) % l);
        (right != s && config >> right & 1 == 1) || (up != s && config >> up & 1 == 1)
    })
}

/// Calls `f` with every `k`-subset of `0..n` as a bitmask.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(u128)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(idx.iter().fold(0u128, |c, &s| c | 1u128 << s));
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for q in i + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
