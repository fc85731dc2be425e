use std::f64::consts::PI;

use spectra_core::closed_form::{
    h_alpha_spectrum, infinite_well_spectrum, quasi_periodic_eigenbasis, AnalyticState, CalogeroParams,
    MultitrapParams,
};
use spectra_core::direct_integral::band_structure;
use spectra_core::discrete::{assemble, eigensolve};
use spectra_core::dynamics::{leakage, MultitrapSystem};
use spectra_core::kinematics::{fourier_transform, symmetric_momenta, uncertainty_product};
use spectra_core::wavefunction::inner_product;
use spectra_core::{BoundaryCondition, Grid, Interval, PotentialSpec, Propagator, WaveFunction};

use crate::args::{BandsArgs, EvolveArgs, LeakageArgs, MomentumArgs, SpectrumArgs};
use crate::output::{Cell, Report, Table};
use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn exactly_one(flags: &[(&str, bool)]) -> Result<usize, CliError> {
    let set: Vec<usize> = flags.iter().enumerate().filter(|(_, f)| f.1).map(|(i, _)| i).collect();
    match set.as_slice() {
        [i] => Ok(*i),
        _ => {
            let names: Vec<String> = flags.iter().map(|f| format!("--{}", f.0)).collect();
            Err(invalid(format!("choose exactly one of {}", names.join(", "))))
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let (a, b) = s.split_once("..").ok_or_else(|| invalid(format!("range `{s}` is not of the form a..b")))?;
    let a: i64 = a.trim().parse().map_err(|_| invalid(format!("bad range start in `{s}`")))?;
    let b: i64 = b.trim().parse().map_err(|_| invalid(format!("bad range end in `{s}`")))?;
    if a > b {
        return Err(invalid(format!("empty range `{s}`")));
    }
    Ok((a, b))
}

fn unit_cell(n: usize, periodic: bool) -> Result<Grid<f64>, CliError> {
    let iv = Interval::unit_cell();
    Ok(if periodic { Grid::periodic(iv, n)? } else { Grid::new(iv, n)? })
}

fn rel(fd: f64, exact: f64) -> f64 {
    (fd - exact).abs() / exact.abs().max(1.0)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Report, CliError> {
    let which = exactly_one(&[("well", a.well), ("calogero", a.calogero), ("halpha", a.halpha)])?;
    let mut table = Table::new(&["label", "eigenvalue_closed_form", "eigenvalue_fd", "rel_error"]);
    let mut report = Report::default();
    let (labels, exact, fd): (Vec<i64>, Vec<f64>, Option<Vec<f64>>) = match which {
        0 => {
            let s = infinite_well_spectrum::<f64>(a.nmax);
            let fd = if a.fd {
                let n = a.grid_n.unwrap_or(1999);
                let op = assemble(&unit_cell(n, false)?, &PotentialSpec::Zero, &BoundaryCondition::Dirichlet)?;
                Some(eigensolve(&op, a.nmax + 1)?.eigenvalues().to_vec())
            } else {
                None
            };
            (s.labels().to_vec(), s.eigenvalues().to_vec(), fd)
        }
        1 => {
            let params = CalogeroParams::new(a.gamma)?;
            if a.k == 0 {
                return Err(invalid("--k must be positive"));
            }
            let exact: Vec<f64> = (0..a.k as u32).map(|n| params.level(n)).collect();
            let fd = if a.fd {
                let n = a.grid_n.unwrap_or(2400);
                let g = Grid::new(Interval::new(0.0, 12.0)?, n)?;
                let op = assemble(&g, &PotentialSpec::Calogero(a.gamma), &BoundaryCondition::Dirichlet)?;
                Some(eigensolve(&op, a.k)?.eigenvalues().to_vec())
            } else {
                None
            };
            ((0..a.k as i64).collect(), exact, fd)
        }
        _ => {
            let (lo, hi) = parse_range(&a.n)?;
            let s = h_alpha_spectrum(a.alpha, lo..=hi);
            let fd = if a.fd {
                let n = a.grid_n.unwrap_or(2000);
                let op = assemble(&unit_cell(n, true)?, &PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(a.alpha))?;
                // Enough levels to contain every requested one.
                let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
                let levels = eigensolve(&op, (2 * reach + 2).min(n))?.eigenvalues().to_vec();
                let mut pool = levels;
                let matched = s
                    .eigenvalues()
                    .iter()
                    .map(|&e| {
                        let (i, _) = pool
                            .iter()
                            .enumerate()
                            .min_by(|x, y| (x.1 - e).abs().total_cmp(&(y.1 - e).abs()))
                            .expect("non-empty");
                        pool.remove(i)
                    })
                    .collect();
                Some(matched)
            } else {
                None
            };
            report.note("alpha", a.alpha);
            (s.labels().to_vec(), s.eigenvalues().to_vec(), fd)
        }
    };
    let mut worst: f64 = 0.0;
    for (i, (&l, &e)) in labels.iter().zip(&exact).enumerate() {
        let f = fd.as_ref().map(|v| v[i]);
        let r = f.map(|f| rel(f, e));
        worst = worst.max(r.unwrap_or(0.0));
        table.push(vec![Cell::Int(l), e.into(), f.into(), r.into()]);
    }
    if fd.is_some() {
        report.note("max_rel_error", worst);
    }
    report.table = table;
    Ok(report)
}

fn times(tmax: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(tmax > 0.0 && tmax.is_finite()) || steps == 0 {
        return Err(invalid("need tmax > 0 and steps > 0"));
    }
    Ok((0..=steps).map(|i| tmax * i as f64 / steps as f64).collect())
}

pub fn evolve(a: &EvolveArgs) -> Result<Report, CliError> {
    if a.grid_n < 3 {
        return Err(invalid("--grid-n must be at least 3"));
    }
    let periodic = a.alpha.is_some();
    let g = unit_cell(a.grid_n, periodic)?;
    let psi0 = match a.well_state {
        Some(n) => {
            let s = AnalyticState::WellMode { n }.sample(&g);
            WaveFunction::new(g.clone(), s.into_values())?.normalize()?
        }
        None => {
            if a.width.is_nan() || a.width <= 0.0 {
                return Err(invalid("--width must be positive"));
            }
            let (c, w) = (a.center, a.width);
            WaveFunction::from_real(g.clone(), |x| x * (PI - x) * (-(x - c) * (x - c) / (2.0 * w * w)).exp())
                .normalize()?
        }
    };
    let bc = a.alpha.map_or(BoundaryCondition::Dirichlet, BoundaryCondition::quasi_periodic);
    let prop = match a.cn_dt {
        Some(dt) => Propagator::crank_nicolson(assemble(&g, &PotentialSpec::Zero, &bc)?, dt)?,
        None => {
            let basis = match a.alpha {
                Some(alpha) => quasi_periodic_eigenbasis(alpha, a.grid_n),
                None => infinite_well_spectrum(a.grid_n - 1),
            };
            Propagator::spectral(basis, &g)?
        }
    };
    let ts = times(a.tmax, a.steps)?;
    let states = prop.evolve_series(&psi0, &ts)?;
    let mut table = Table::new(&["t", "norm", "survival", "mean_x"]);
    let h = g.h();
    let xs = g.points();
    let mut drift: f64 = 0.0;
    for (t, s) in ts.iter().zip(&states) {
        let norm = s.norm();
        drift = drift.max((norm - 1.0).abs());
        let survival = inner_product(&psi0, s)?.norm_sqr();
        let mean_x: f64 = h * xs.iter().zip(s.values()).map(|(x, v)| x * v.norm_sqr()).sum::<f64>();
        table.push(vec![(*t).into(), norm.into(), survival.into(), mean_x.into()]);
    }
    let mut report = Report { table, ..Report::default() };
    report.note("boundary", if periodic { "quasi_periodic" } else { "dirichlet" });
    report.note("max_norm_drift", drift);
    Ok(report)
}

pub fn leakage_cmd(a: &LeakageArgs) -> Result<Report, CliError> {
    let which = exactly_one(&[("multitrap", a.multitrap), ("calogero", a.calogero), ("free", a.free)])?;
    let ts = times(a.tmax, a.steps)?;
    let rep = if which == 0 {
        if a.neighbours < 0 {
            return Err(invalid("--neighbours must be non-negative"));
        }
        let params = MultitrapParams::new(a.q)?;
        let sys = MultitrapSystem::new(params, a.cell - a.neighbours..=a.cell + a.neighbours, a.m)?;
        let cell = sys.cell(a.cell)?;
        let (left, w) = (cell.a(), cell.length());
        let psi0 = WaveFunction::from_real(sys.grid().clone(), |x| {
            if cell.contains(x) {
                let u = (x - left) / w * PI;
                u * (PI - u) * (-(u - 1.2) * (u - 1.2) * 3.0).exp()
            } else {
                0.0
            }
        })
        .normalize()?;
        leakage(sys.propagator(), &psi0, &cell, &ts)?
    } else {
        let l = a.half_width;
        if l.is_nan() || l <= 2.0 {
            return Err(invalid("--half-width must exceed 2"));
        }
        let g = Grid::new(Interval::new(-l, l)?, a.grid_n)?;
        let v = if which == 1 { PotentialSpec::Calogero(a.gamma) } else { PotentialSpec::Zero };
        let prop = Propagator::crank_nicolson(assemble(&g, &v, &BoundaryCondition::Dirichlet)?, a.dt)?;
        let psi0 = WaveFunction::from_real(g.clone(), |x: f64| if x > 0.0 { x * x * (-(x - 2.0) * (x - 2.0)).exp() } else { 0.0 })
            .normalize()?;
        leakage(&prop, &psi0, &Interval::new(0.0, l)?, &ts)?
    };
    let mut table = Table::new(&["t", "inside", "leaked"]);
    for i in 0..rep.times.len() {
        table.push(vec![rep.times[i].into(), rep.inside_mass[i].into(), rep.leaked_mass[i].into()]);
    }
    let mut report = Report { table, ..Report::default() };
    report.note("max_leaked", rep.max_leaked());
    Ok(report)
}

pub fn momentum(a: &MomentumArgs) -> Result<Report, CliError> {
    let g = unit_cell(a.grid_n, false)?;
    let psi = AnalyticState::WellMode { n: a.well_state }.sample(&g);
    let psi = WaveFunction::new(g, psi.into_values())?;
    let ps = symmetric_momenta(a.pmax, a.dp)?;
    let dist = fourier_transform(&psi, &ps)?;
    let u = uncertainty_product(&psi)?;
    let mut table = Table::new(&["p", "density"]);
    let mut at_zero = None;
    for (p, d) in dist.p_grid.iter().zip(&dist.density) {
        if *p == 0.0 {
            at_zero = Some(*d);
        }
        table.push(vec![(*p).into(), (*d).into()]);
    }
    let mut report = Report { table, ..Report::default() };
    report.note("density_at_zero", at_zero);
    report.note("window_mass", dist.total());
    report.note("delta_q", u.delta_q);
    report.note("delta_p", u.delta_p);
    report.note("uncertainty_product", u.product);
    Ok(report)
}

pub fn bands(a: &BandsArgs) -> Result<Report, CliError> {
    let v = match a.potential.as_str() {
        "zero" => PotentialSpec::Zero,
        "bump" => PotentialSpec::bump(a.height, a.center, a.half_width, 256)?,
        other => return Err(invalid(format!("unknown potential `{other}` (zero or bump)"))),
    };
    if a.alphas < 2 || a.k == 0 {
        return Err(invalid("need at least two alphas and one band"));
    }
    let alphas: Vec<f64> = (0..a.alphas).map(|i| 2.0 * PI * i as f64 / (a.alphas - 1) as f64).collect();
    let bt = band_structure(&v, &alphas, a.k, a.grid_n)?;
    let mut cols = vec!["alpha".to_string(), "alpha_over_pi".to_string()];
    cols.extend((0..a.k).map(|j| format!("E{j}")));
    let mut table = Table { columns: cols, rows: Vec::new() };
    for (i, &al) in alphas.iter().enumerate() {
        let mut row = vec![Cell::Float(al), Cell::Float(al / PI)];
        row.extend(bt.bands.iter().map(|b| Cell::Float(b[i])));
        table.push(row);
    }
    let mut report = Report { table, ..Report::default() };
    for (j, gap) in bt.gaps().iter().enumerate() {
        report.note(&format!("gap_{j}_{}", j + 1), *gap);
    }
    let continuous = bt.continuity().iter().all(|c| c.continuous);
    report.note("bands_continuous", if continuous { "true" } else { "false" });
    Ok(report)
}

