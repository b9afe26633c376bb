//! The five subcommands.

use std::path::Path;

use lrtfim::boundstates::{classify, density_map, Label};
use lrtfim::exact::{memory_estimate, FullHamiltonian, KrylovOptions, Quench, QuenchOptions, DEFAULT_MAX_SITES};
use lrtfim::io::{self, fmt_f64, param_line};
use lrtfim::spectral::{detect_peaks, fft_spectrum, match_gaps};
use lrtfim::sw::{build_h2, diagonalize, dispersion_path, gap_table_within, sector_hamiltonian, SectorLevels, SectorOptions};
use lrtfim::{Exec, Lattice};

use crate::checkpoint;
use crate::config::RunConfig;
use crate::manifest::Run;
use crate::CliError;

const CHECKPOINT_STATE: &str = "checkpoint.bin";
const CHECKPOINT_SERIES: &str = "checkpoint_series.csv";

fn lattice(c: &RunConfig) -> Result<Lattice, CliError> {
    Ok(Lattice::new(c.l, c.exponent()?)?)
}

fn header(c: &RunConfig, run: &Run) -> Result<String, CliError> {
    Ok(param_line(&[
        ("L", c.l.to_string()),
        ("alpha", c.exponent()?.to_string()),
        ("J", fmt_f64(c.j)),
        ("g", fmt_f64(c.g)),
        ("mode", c.mode()?.to_string()),
        ("manifest", run.manifest_name()),
    ]))
}

pub fn effective(c: &RunConfig, threads: usize) -> Result<(), CliError> {
    if c.sectors.is_empty() {
        return Err(CliError::Config("sectors: at least one sector is required".into()));
    }
    let lat = lattice(c)?;
    let mut run = Run::new("effective", c, threads)?;
    let head = header(c, &run)?;
    let opts = SectorOptions {
        mode: c.mode()?,
        filter_three: c.filter_three,
        ..SectorOptions::default()
    };
    let mut levels = Vec::new();
    for &nu in &c.sectors {
        let h = sector_hamiltonian(nu, &lat, c.j, c.g, opts)?;
        let sol = diagonalize(&h)?;
        let name = format!("eigen_nu{nu}.csv");
        io::write_eigen(&mut run.create(&name)?, &format!("{head} nu={nu}"), &sol, None)?;
        println!("sector {nu}: {} levels, lowest {}", sol.len(), fmt_f64(sol.energies[0]));
        levels.push(SectorLevels::from(&sol));
    }
    if levels.len() >= 2 {
        let gaps = gap_table_within(&levels, c.max_levels.unwrap_or(usize::MAX), &c.intra_sectors)?;
        io::write_gaps(&mut run.create("gaps.csv")?, &head, &gaps)?;
        if let Some(e) = gaps.find(0, 1, 1, 1) {
            println!("gap 0<->1 (1,1): {}", fmt_f64(e.delta));
        }
    }
    let m = run.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}

pub fn boundstates(c: &RunConfig, threads: usize) -> Result<(), CliError> {
    let lat = lattice(c)?;
    let mut run = Run::new("boundstates", c, threads)?;
    let head = header(c, &run)?;
    let exec = Exec::default();
    let h = build_h2(&lat, c.j, c.g, c.mode()?, true, exec)?;
    let sol = diagonalize(&h)?;
    let recs = classify(&sol, &h.basis, c.thresholds(), exec)?;
    io::write_records(&mut run.create("records.csv")?, &head, &recs)?;
    if let Some(&k) = c.density_maps.iter().find(|&&k| k >= sol.len()) {
        return Err(CliError::Config(format!(
            "density_maps: index {k} out of range for {} eigenstates",
            sol.len()
        )));
    }
    let mut maps = c.density_maps.clone();
    if c.bound_maps {
        maps.extend(recs.iter().filter(|r| r.label == Label::Bound).map(|r| r.eigen_index));
    }
    maps.sort_unstable();
    maps.dedup();
    for k in maps {
        let map = density_map(sol.vector(k), &h.basis)?;
        let peak = map.peak();
        let params = [
            ("L", c.l.to_string()),
            ("eigen_index", k.to_string()),
            ("energy", fmt_f64(sol.energies[k])),
            ("manifest", run.manifest_name()),
        ];
        io::write_density_map(&mut run.create(&format!("density_{k}.txt"))?, &params, &map)?;
        println!("state {k}: density peak at {peak} (|d| = {:.4})", peak.distance());
    }
    let count = |l: Label| recs.iter().filter(|r| r.label == l).count();
    println!(
        "{} states: {} bound, {} quasilocalized, {} scattering",
        recs.len(),
        count(Label::Bound),
        count(Label::Quasilocalized),
        count(Label::Scattering)
    );
    let m = run.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}

pub fn quench(c: &RunConfig, resume: bool, threads: usize) -> Result<(), CliError> {
    let sites = c.l * c.l;
    if sites > DEFAULT_MAX_SITES {
        return Err(CliError::Budget(format!(
            "{sites} sites exceed the exact-engine limit of {DEFAULT_MAX_SITES}"
        )));
    }
    let need = memory_estimate(sites, c.krylov_dim);
    let budget = c.budget_mb.saturating_mul(1 << 20);
    if need > budget {
        return Err(CliError::Budget(format!(
            "L={} needs about {} MiB, above budget_mb = {}",
            c.l,
            need.div_ceil(1 << 20),
            c.budget_mb
        )));
    }
    let lat = lattice(c)?;
    let mut run = Run::new("quench", c, threads)?;
    let h = FullHamiltonian::new(&lat, c.j, c.g)?;
    let opts = QuenchOptions {
        krylov: KrylovOptions {
            krylov_dim: c.krylov_dim,
            tol: c.krylov_tol,
        },
    };
    let state_path = c.output_dir.join(CHECKPOINT_STATE);
    let series_path = c.output_dir.join(CHECKPOINT_SERIES);
    let mut q = if resume {
        let state = checkpoint::load(&state_path, h.dim())?;
        let f = std::fs::File::open(&series_path)
            .map_err(|e| CliError::Config(format!("{}: {e}", series_path.display())))?;
        let series = io::read_time_series(std::io::BufReader::new(f))?;
        let same = series.l == c.l
            && series.j == c.j
            && series.g == c.g
            && series.alpha == lat.alpha()
            && series.dt == c.dt;
        if !same {
            return Err(CliError::Config(
                "checkpoint was written with different L, J, g, alpha or dt".into(),
            ));
        }
        run.inputs.push(state_path.display().to_string());
        Quench::resume(&h, state, series, c.t_max, opts)?
    } else {
        Quench::new(&h, c.t_max, c.dt, opts)?
    };
    let save = |q: &Quench| -> Result<(), CliError> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&series_path)?);
        io::write_time_series(&mut w, q.series(), &[])?;
        drop(w);
        checkpoint::save(&state_path, q.state())
    };
    let mut since = 0;
    while q.advance()? {
        since += 1;
        if c.checkpoint_every > 0 && since == c.checkpoint_every {
            since = 0;
            save(&q)?;
        }
    }
    // the final state is kept so `--resume` can extend the run to a later t_max
    if c.checkpoint_every > 0 {
        save(&q)?;
    }
    let series = q.into_series();
    let extra = [
        ("mode", "exact".to_string()),
        ("manifest", run.manifest_name()),
    ];
    io::write_time_series(&mut run.create("series.csv")?, &series, &extra)?;
    println!(
        "{} records to t = {}; max norm error {:e}, relative energy drift {:e}",
        series.len(),
        fmt_f64(*series.times.last().unwrap_or(&0.0)),
        series.max_norm_error,
        series.relative_energy_drift()
    );
    let m = run.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}

pub fn spectrum(c: &RunConfig, series_file: &Path, gaps_file: Option<&Path>, threads: usize) -> Result<(), CliError> {
    let open = |p: &Path| {
        std::fs::File::open(p)
            .map(std::io::BufReader::new)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
    };
    let series = io::read_time_series(open(series_file)?)?;
    let gaps = match gaps_file {
        Some(p) => Some(io::read_gaps(open(p)?)?),
        None => None,
    };
    let mut run = Run::new("spectrum", c, threads)?;
    run.inputs.push(series_file.display().to_string());
    if let Some(p) = gaps_file {
        run.inputs.push(p.display().to_string());
    }
    let mut channels = vec![("sz".to_string(), series.sz_avg.clone())];
    for d in 1..=series.separations() {
        channels.push((format!("C{d}"), series.corr_column(d)));
    }
    let head = param_line(&[
        ("series", series_file.display().to_string()),
        ("t_min", fmt_f64(c.t_min)),
        ("t_max", fmt_f64(c.t_max)),
        ("rel_threshold", fmt_f64(c.rel_threshold)),
        ("manifest", run.manifest_name()),
    ]);
    for (name, values) in &channels {
        let spec = fft_spectrum(&series.times, values, c.t_min, c.t_max)?;
        let peaks = detect_peaks(&spec, c.rel_threshold)?;
        let comment = format!("{head} channel={name}");
        io::write_spectrum(&mut run.create(&format!("spectrum_{name}.csv"))?, &comment, &spec)?;
        io::write_peaks(&mut run.create(&format!("peaks_{name}.csv"))?, &comment, &peaks)?;
        let mut line = format!("{name}: {} peaks", peaks.len());
        if let Some(p) = peaks.first() {
            line += &format!(", dominant at {}", fmt_f64(p.omega));
        }
        if let Some(g) = &gaps {
            let tol = spec.bin_width();
            let a = match_gaps(&peaks, g, tol)?;
            io::write_assignments(&mut run.create(&format!("assignments_{name}.csv"))?, &comment, &a)?;
            if let Some(gap) = a.first().and_then(|x| x.assigned_gap) {
                line += &format!(" -> {}<->{} ({},{})", gap.nu, gap.nu_prime, gap.i, gap.j);
            }
            let missing = a.iter().filter(|x| x.assigned_gap.is_none()).count();
            line += &format!(", {missing} unassigned");
        }
        println!("{line}");
    }
    let m = run.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}

pub fn dispersion(c: &RunConfig, threads: usize) -> Result<(), CliError> {
    let lat = lattice(c)?;
    let mut run = Run::new("dispersion", c, threads)?;
    let head = header(c, &run)?;
    let pts = dispersion_path(&lat, c.j, c.g, c.mode()?, c.path_points)?;
    io::write_dispersion(&mut run.create("dispersion.csv")?, &head, &pts)?;
    let m = run.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}
