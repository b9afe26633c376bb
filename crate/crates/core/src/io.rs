//! CSV and plain-text formats.
//!
//! Numbers are written with 17 significant digits so that reading a file back
//! reproduces every `f64` exactly. Lines starting with `#` are comments; the
//! first one carries run parameters as `key=value` pairs.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::boundstates::{BoundStateRecord, DensityMap};
use crate::error::{Error, Result};
use crate::exact::TimeSeries;
use crate::lattice::Exponent;
use crate::spectral::{Peak, PeakAssignment, Spectrum};
use crate::sw::{EigenSolution, GapTable, PathPoint};

/// Shortest text that round-trips `x` exactly (at most 17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

/// A `# key=value key=value` comment line.
pub fn param_line(params: &[(&str, String)]) -> String {
    let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}", body.join(" "))
}

/// Parsed contents of a numeric CSV file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// `key=value` pairs found in comment lines.
    pub params: BTreeMap<String, String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    fn param<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.params.get(key).ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("missing parameter {key:?} in the comment header"),
        })?;
        v.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("cannot parse parameter {key}={v:?}"),
        })
    }
}

/// Reads a CSV of numbers with one header row; `#` lines are comments.
pub fn read_table(reader: impl BufRead) -> Result<Table> {
    let mut t = Table::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(c) = s.strip_prefix('#') {
            for kv in c.split_whitespace() {
                if let Some((k, v)) = kv.split_once('=') {
                    t.params.insert(k.to_string(), v.to_string());
                }
            }
            continue;
        }
        if t.header.is_empty() {
            t.header = s.split(',').map(|h| h.trim().to_string()).collect();
            continue;
        }
        let row = s
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a number: {:?}", f.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != t.header.len() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {} fields, found {}", t.header.len(), row.len()),
            });
        }
        t.rows.push(row);
    }
    if t.header.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no header row".into(),
        });
    }
    Ok(t)
}

fn write_row(w: &mut impl Write, fields: impl IntoIterator<Item = String>) -> Result<()> {
    let v: Vec<String> = fields.into_iter().collect();
    writeln!(w, "{}", v.join(","))?;
    Ok(())
}

fn write_comment(w: &mut impl Write, comment: &str) -> Result<()> {
    for line in comment.lines() {
        if line.starts_with('#') {
            writeln!(w, "{line}")?;
        } else {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

/// Time series with columns `t, sz_avg, C_1.., Ctilde_1.., energy`.
pub fn write_time_series(w: &mut impl Write, s: &TimeSeries, extra: &[(&str, String)]) -> Result<()> {
    let mut params = vec![
        ("L", s.l.to_string()),
        ("J", fmt_f64(s.j)),
        ("g", fmt_f64(s.g)),
        ("alpha", s.alpha.to_string()),
        ("dt", fmt_f64(s.dt)),
    ];
    params.extend(extra.iter().cloned());
    writeln!(w, "{}", param_line(&params))?;
    let nd = s.separations();
    let mut head = vec!["t".to_string(), "sz_avg".to_string()];
    head.extend((1..=nd).map(|d| format!("C_{d}")));
    head.extend((1..=nd).map(|d| format!("Ctilde_{d}")));
    head.push("energy".into());
    write_row(w, head)?;
    for k in 0..s.len() {
        let mut row = vec![fmt_f64(s.times[k]), fmt_f64(s.sz_avg[k])];
        row.extend(s.corr[k].iter().map(|&x| fmt_f64(x)));
        row.extend(s.corr_normalized[k].iter().map(|&x| fmt_f64(x)));
        row.push(fmt_f64(s.energy[k]));
        write_row(w, row)?;
    }
    Ok(())
}

/// Inverse of [`write_time_series`].
pub fn read_time_series(reader: impl BufRead) -> Result<TimeSeries> {
    let t = read_table(reader)?;
    let l: usize = t.param("L")?;
    let alpha: Exponent = t.param("alpha")?;
    let nd = l / 2;
    let expect = 3 + 2 * nd;
    if t.header.len() != expect {
        return Err(Error::Parse {
            line: 2,
            msg: format!("expected {expect} columns for L={l}, found {}", t.header.len()),
        });
    }
    Ok(TimeSeries {
        l,
        j: t.param("J")?,
        g: t.param("g")?,
        alpha,
        dt: t.param("dt")?,
        times: t.rows.iter().map(|r| r[0]).collect(),
        sz_avg: t.rows.iter().map(|r| r[1]).collect(),
        corr: t.rows.iter().map(|r| r[2..2 + nd].to_vec()).collect(),
        corr_normalized: t.rows.iter().map(|r| r[2 + nd..2 + 2 * nd].to_vec()).collect(),
        energy: t.rows.iter().map(|r| r[2 + 2 * nd]).collect(),
        max_norm_error: 0.0,
    })
}

/// `index, energy` plus, when `records` is given, `ipr, dbar, label`.
pub fn write_eigen(
    w: &mut impl Write,
    comment: &str,
    sol: &EigenSolution,
    records: Option<&[BoundStateRecord]>,
) -> Result<()> {
    write_comment(w, comment)?;
    match records {
        None => {
            write_row(w, ["index", "energy"].map(String::from))?;
            for (k, e) in sol.energies.iter().enumerate() {
                write_row(w, [k.to_string(), fmt_f64(*e)])?;
            }
        }
        Some(recs) => {
            write_row(w, ["index", "energy", "ipr", "dbar", "label"].map(String::from))?;
            for r in recs {
                write_row(
                    w,
                    [
                        r.eigen_index.to_string(),
                        fmt_f64(r.energy),
                        fmt_f64(r.ipr),
                        fmt_f64(r.dbar),
                        r.label.to_string(),
                    ],
                )?;
            }
        }
    }
    Ok(())
}

/// Bound-state records, `eigen_index, energy, ipr, dbar, label`.
pub fn write_records(w: &mut impl Write, comment: &str, recs: &[BoundStateRecord]) -> Result<()> {
    write_comment(w, comment)?;
    write_row(w, ["eigen_index", "energy", "ipr", "dbar", "label"].map(String::from))?;
    for r in recs {
        write_row(
            w,
            [
                r.eigen_index.to_string(),
                fmt_f64(r.energy),
                fmt_f64(r.ipr),
                fmt_f64(r.dbar),
                r.label.to_string(),
            ],
        )?;
    }
    Ok(())
}

/// `nu, nu_prime, i, j, delta`.
pub fn write_gaps(w: &mut impl Write, comment: &str, gaps: &GapTable) -> Result<()> {
    write_comment(w, comment)?;
    write_row(w, ["nu", "nu_prime", "i", "j", "delta"].map(String::from))?;
    for g in &gaps.entries {
        write_row(
            w,
            [
                g.nu.to_string(),
                g.nu_prime.to_string(),
                g.i.to_string(),
                g.j.to_string(),
                fmt_f64(g.delta),
            ],
        )?;
    }
    Ok(())
}

/// Reads the output of [`write_gaps`].
pub fn read_gaps(reader: impl BufRead) -> Result<GapTable> {
    let t = read_table(reader)?;
    if t.header != ["nu", "nu_prime", "i", "j", "delta"] {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected gap table header {:?}", t.header),
        });
    }
    let mut entries: Vec<crate::sw::GapEntry> = t
        .rows
        .iter()
        .map(|r| crate::sw::GapEntry {
            nu: r[0] as usize,
            nu_prime: r[1] as usize,
            i: r[2] as usize,
            j: r[3] as usize,
            delta: r[4],
            modes: (crate::sw::Mode::Full, crate::sw::Mode::Full),
        })
        .collect();
    entries.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    Ok(GapTable { entries })
}

/// `omega, magnitude`.
pub fn write_spectrum(w: &mut impl Write, comment: &str, s: &Spectrum) -> Result<()> {
    write_comment(w, comment)?;
    write_row(w, ["omega", "magnitude"].map(String::from))?;
    for (o, m) in s.omegas.iter().zip(&s.magnitudes) {
        write_row(w, [fmt_f64(*o), fmt_f64(*m)])?;
    }
    Ok(())
}

/// `omega, magnitude` of detected peaks.
pub fn write_peaks(w: &mut impl Write, comment: &str, peaks: &[Peak]) -> Result<()> {
    write_comment(w, comment)?;
    write_row(w, ["omega", "magnitude"].map(String::from))?;
    for p in peaks {
        write_row(w, [fmt_f64(p.omega), fmt_f64(p.magnitude)])?;
    }
    Ok(())
}

/// `peak_omega, magnitude, nu, nu_prime, i, j, delta, residual`; unassigned
/// peaks leave the gap fields empty.
pub fn write_assignments(w: &mut impl Write, comment: &str, a: &[PeakAssignment]) -> Result<()> {
    write_comment(w, comment)?;
    write_row(
        w,
        ["peak_omega", "magnitude", "nu", "nu_prime", "i", "j", "delta", "residual"].map(String::from),
    )?;
    for p in a {
        let gap = match p.assigned_gap {
            Some(g) => [
                g.nu.to_string(),
                g.nu_prime.to_string(),
                g.i.to_string(),
                g.j.to_string(),
                fmt_f64(g.delta),
                fmt_f64(p.residual),
            ],
            None => Default::default(),
        };
        let mut row = vec![fmt_f64(p.peak_omega), fmt_f64(p.peak_magnitude)];
        row.extend(gap);
        write_row(w, row)?;
    }
    Ok(())
}

/// `s, kx, ky, energy` along the high-symmetry path.
pub fn write_dispersion(w: &mut impl Write, comment: &str, pts: &[PathPoint]) -> Result<()> {
    write_comment(w, comment)?;
    write_row(w, ["s", "kx", "ky", "energy"].map(String::from))?;
    for p in pts {
        write_row(w, [fmt_f64(p.s), fmt_f64(p.kx), fmt_f64(p.ky), fmt_f64(p.energy)])?;
    }
    Ok(())
}

/// Density on the displacement grid as an `L x L` whitespace-separated
/// matrix; row `r` is `dx = lo + r`, column `c` is `dy = lo + c`.
pub fn write_density_map(w: &mut impl Write, header: &[(&str, String)], map: &DensityMap) -> Result<()> {
    let mut params = header.to_vec();
    params.push(("lo", map.lo().to_string()));
    writeln!(w, "{}", param_line(&params))?;
    for r in 0..map.l {
        let row: Vec<String> = (0..map.l).map(|c| fmt_f64(map.values[r * map.l + c])).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
