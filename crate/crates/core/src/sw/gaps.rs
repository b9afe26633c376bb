use super::{EigenSolution, Mode};
use crate::error::{Error, Result};

/// Levels of one sector entering a gap table.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorLevels {
    pub nu: usize,
    pub mode: Mode,
    /// Ascending.
    pub energies: Vec<f64>,
}

impl From<&EigenSolution> for SectorLevels {
    fn from(s: &EigenSolution) -> Self {
        Self {
            nu: s.nu,
            mode: s.mode,
            energies: s.energies.clone(),
        }
    }
}

/// `|E_i^nu - E_j^nu'|` with 1-based level indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapEntry {
    pub nu: usize,
    pub nu_prime: usize,
    pub i: usize,
    pub j: usize,
    pub delta: f64,
    /// Modes of the two Hamiltonians the levels came from.
    pub modes: (Mode, Mode),
}

/// Gap list sorted by ascending `delta`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapTable {
    pub entries: Vec<GapEntry>,
}

impl GapTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, nu: usize, nu_prime: usize, i: usize, j: usize) -> Option<&GapEntry> {
        self.entries
            .iter()
            .find(|e| e.nu == nu && e.nu_prime == nu_prime && e.i == i && e.j == j)
    }
}

/// All gaps between the lowest `max_levels` levels of every pair of sectors.
///
/// Pairs are formed with the smaller magnon number first.
pub fn gap_table(sectors: &[SectorLevels], max_levels: usize) -> Result<GapTable> {
    if sectors.len() < 2 {
        return Err(Error::InvalidArgument(
            "a gap table needs at least two sectors".into(),
        ));
    }
    let mut entries = Vec::new();
    for (p, a) in sectors.iter().enumerate() {
        for b in &sectors[p + 1..] {
            let (a, b) = if b.nu < a.nu { (b, a) } else { (a, b) };
            for (i, ea) in a.energies.iter().take(max_levels).enumerate() {
                for (j, eb) in b.energies.iter().take(max_levels).enumerate() {
                    entries.push(GapEntry {
                        nu: a.nu,
                        nu_prime: b.nu,
                        i: i + 1,
                        j: j + 1,
                        delta: (ea - eb).abs(),
                        modes: (a.mode, b.mode),
                    });
                }
            }
        }
    }
    sort_entries(&mut entries);
    Ok(GapTable { entries })
}

/// [`gap_table`] plus the spacings `E_j - E_i` (`i < j`) inside every sector
/// whose magnon number is listed in `within`.
///
/// Exact eigenstates are dressed mixtures, so transitions between two levels
/// of the same sector also show up in quench spectra.
pub fn gap_table_within(sectors: &[SectorLevels], max_levels: usize, within: &[usize]) -> Result<GapTable> {
    let mut entries = gap_table(sectors, max_levels)?.entries;
    for s in sectors.iter().filter(|s| within.contains(&s.nu)) {
        let e: Vec<f64> = s.energies.iter().take(max_levels).copied().collect();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                entries.push(GapEntry {
                    nu: s.nu,
                    nu_prime: s.nu,
                    i: i + 1,
                    j: j + 1,
                    delta: (e[j] - e[i]).abs(),
                    modes: (s.mode, s.mode),
                });
            }
        }
    }
    sort_entries(&mut entries);
    Ok(GapTable { entries })
}

fn sort_entries(entries: &mut [GapEntry]) {
    entries.sort_by(|x, y| {
        x.delta
            .total_cmp(&y.delta)
            .then((x.nu, x.nu_prime, x.i, x.j).cmp(&(y.nu, y.nu_prime, y.i, y.j)))
    });
}
