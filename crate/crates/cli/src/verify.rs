use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::boundary::boundary_residual;
use spectra_core::closed_form::ladder::h_alpha_level;
use spectra_core::closed_form::{
    h_alpha_spectrum, infinite_well_spectrum, laguerre, momentum_spectrum, AnalyticState, CalogeroParams,
    MultitrapParams,
};
use spectra_core::direct_integral::{band_structure, decompose, reconstruct, spectrum_union_check, LineFunction};
use spectra_core::discrete::{assemble, eigensolve};
use spectra_core::dynamics::{extension_divergence, leakage, MultitrapSystem};
use spectra_core::extension::{assemble_extension_element, build_u_alpha, classify_extension, deficiency_basis, ExtensionClass};
use spectra_core::kinematics::{fourier_transform, symmetric_momenta, uncertainty_product};
use spectra_core::wavefunction::{inner_product, restrict_indicator};
use spectra_core::{BoundaryCondition, Grid, Interval, PotentialSpec, Propagator, Result, WaveFunction};

use crate::args::VerifyArgs;
use crate::output::{Cell, Report, Table};

#[derive(Clone, Copy)]
enum Rel {
    AtMost,
    AtLeast,
}

struct Check {
    name: &'static str,
    value: f64,
    bound: f64,
    rel: Rel,
}

impl Check {
    fn pass(&self) -> bool {
        match self.rel {
            Rel::AtMost => self.value <= self.bound,
            Rel::AtLeast => self.value >= self.bound,
        }
    }
}

type Invariant = fn(&mut ChaCha8Rng) -> Result<(f64, f64, Rel)>;

fn cell(n: usize) -> Grid<f64> {
    Grid::new(Interval::unit_cell(), n).expect("valid grid")
}

fn ring(n: usize) -> Grid<f64> {
    Grid::periodic(Interval::unit_cell(), n).expect("valid grid")
}

fn ladder_exact(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut worst: f64 = 0.0;
    for r in [0.0, 0.5, 1.0] {
        for n in -4..=4_i64 {
            let p = 2.0 * n as f64 + r;
            worst = worst.max((h_alpha_level(n, r) - p * p).abs());
            let e = h_alpha_spectrum(r * PI, n..=n).eigenvalues()[0];
            worst = worst.max((e - p * p).abs());
        }
    }
    Ok((worst, 1e-12, Rel::AtMost))
}

fn plane_waves_orthonormal(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let alpha = rng.random_range(0.0..2.0 * PI);
    let states = momentum_spectrum(alpha, -3..=3).sampled(&ring(128))?;
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(a, b)? - Complex::new(want, 0.0)).norm());
        }
    }
    Ok((worst, 1e-10, Rel::AtMost))
}

fn laguerre_sum(n: usize, a: f64, y: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let binom: f64 = (k + 1..=n).map(|j| (a + j as f64) / (j - k) as f64).product();
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            (-1f64).powi(k as i32) * binom * y.powi(k as i32) / fact
        })
        .sum()
}

fn laguerre_recurrence(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (a, y) = (rng.random_range(0.0..4.0), rng.random_range(0.0..6.0));
        for n in 0..=6 {
            worst = worst.max((laguerre(n, a, y) - laguerre_sum(n, a, y)).abs());
        }
    }
    Ok((worst, 1e-10, Rel::AtMost))
}

fn deficiency_exponents(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let b = deficiency_basis::<f64>();
    let mut worst: f64 = 0.0;
    for m in b.plus() {
        worst = worst.max((m.kinetic_eigenvalue() - Complex::new(0.0, 2.0)).norm());
    }
    for m in b.minus() {
        worst = worst.max((m.kinetic_eigenvalue() - Complex::new(0.0, -2.0)).norm());
    }
    Ok((worst, 0.0, Rel::AtMost))
}

fn core_function(rng: &mut ChaCha8Rng, g: &Grid<f64>) -> WaveFunction<f64> {
    let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    WaveFunction::from_fn(g.clone(), move |x| Complex::new(a + x.cos(), b * (2.0 * x).sin()) * x.sin().powi(4))
}

fn u_alpha_boundary(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = cell(400);
    let mut worst: f64 = 0.0;
    for i in 0..32 {
        let alpha = 2.0 * PI * i as f64 / 32.0;
        let u = build_u_alpha(alpha)?.matrix;
        let f = core_function(rng, &g);
        let w = [
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        ];
        let el = assemble_extension_element(&u, &f, w)?;
        worst = worst.max(boundary_residual(&el.boundary_data(), alpha)?);
    }
    Ok((worst, 1e-8, Rel::AtMost))
}

fn classify_round_trip(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut worst: f64 = 0.0;
    for i in 0..32 {
        let alpha = 2.0 * PI * i as f64 / 32.0;
        let d = match classify_extension(build_u_alpha(alpha)?.matrix.matrix())? {
            ExtensionClass::QuasiPeriodic(a) => {
                let d = (a - alpha).abs();
                d.min(2.0 * PI - d)
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(d);
    }
    Ok((worst, 1e-10, Rel::AtMost))
}

fn u_alpha_unitary(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut worst: f64 = 0.0;
    for alpha in [0.0, PI / 2.0, PI, 1.5 * PI] {
        worst = worst.max(build_u_alpha(alpha)?.matrix.matrix().unitarity_defect().1);
    }
    Ok((worst, 1e-12, Rel::AtMost))
}

fn dirichlet_fd(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let op = assemble(&cell(999), &PotentialSpec::Zero, &BoundaryCondition::Dirichlet)?;
    let s = eigensolve(&op, 5)?;
    let worst = s
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(n, e)| (e - ((n + 1) * (n + 1)) as f64).abs() / ((n + 1) * (n + 1)) as f64)
        .fold(0.0, f64::max);
    Ok((worst, 1e-4, Rel::AtMost))
}

fn calogero_fd(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = Grid::new(Interval::new(0.0, 12.0)?, 1200)?;
    let op = assemble(&g, &PotentialSpec::Calogero(2.0), &BoundaryCondition::Dirichlet)?;
    let s = eigensolve(&op, 2)?;
    let p = CalogeroParams::<f64>::new(2.0)?;
    let worst = (0..2).map(|n| (s.eigenvalues()[n] - p.level(n as u32)).abs() / p.level(n as u32)).fold(0.0, f64::max);
    Ok((worst, 1e-2, Rel::AtMost))
}

fn quasi_periodic_hermitian(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let op = assemble(&ring(64), &PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(alpha))?;
        worst = worst.max(op.hermiticity_defect());
    }
    Ok((worst, 1e-12, Rel::AtMost))
}

fn packet(g: &Grid<f64>) -> Result<WaveFunction<f64>> {
    WaveFunction::from_real(g.clone(), |x| x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp()).normalize()
}

fn spectral_norm(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = cell(127);
    let prop = Propagator::spectral(infinite_well_spectrum(126), &g)?;
    let psi0 = packet(&g)?;
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let t = rng.random_range(0.0..20.0);
        worst = worst.max((prop.evolve(&psi0, t)?.norm() - 1.0).abs());
    }
    Ok((worst, 1e-10, Rel::AtMost))
}

fn well_revival(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = cell(127);
    let prop = Propagator::spectral(infinite_well_spectrum(126), &g)?;
    let psi0 = packet(&g)?;
    let f = inner_product(&psi0, &prop.evolve(&psi0, 2.0 * PI)?)?.norm_sqr();
    Ok((f, 1.0 - 1e-8, Rel::AtLeast))
}

fn multitrap_leak(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let sys = MultitrapSystem::new(MultitrapParams::new(1.0)?, -1..=1, 127)?;
    let c = sys.cell(0)?;
    let psi0 = WaveFunction::from_real(sys.grid().clone(), |x| {
        if c.contains(x) {
            x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp()
        } else {
            0.0
        }
    })
    .normalize()?;
    let rep = leakage(sys.propagator(), &psi0, &c, &[1.0, 5.0, 10.0])?;
    Ok((rep.max_leaked(), 1e-9, Rel::AtMost))
}

fn free_leak(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = Grid::new(Interval::new(-12.0, 12.0)?, 600)?;
    let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::Dirichlet)?;
    let prop = Propagator::crank_nicolson(op, 1e-2)?;
    let psi0 = WaveFunction::from_real(g.clone(), |x: f64| if x > 0.0 { x * x * (-(x - 2.0) * (x - 2.0)).exp() } else { 0.0 })
        .normalize()?;
    let rep = leakage(&prop, &psi0, &Interval::new(0.0, 12.0)?, &[1.0])?;
    Ok((rep.leaked_mass[0], 0.01, Rel::AtLeast))
}

fn plancherel(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let psi = AnalyticState::WellMode { n: 0 }.sample(&cell(1999));
    let d = fourier_transform(&psi, &symmetric_momenta(40.0, 0.01)?)?;
    Ok(((1.0 - d.total()).abs(), 1e-4, Rel::AtMost))
}

fn ground_uncertainty(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let psi = AnalyticState::WellMode { n: 0 }.sample(&cell(1999));
    let u = uncertainty_product(&psi)?;
    Ok(((u.product - (PI * PI / 12.0 - 0.5).sqrt()).abs(), 1e-6, Rel::AtMost))
}

fn heisenberg(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = cell(999);
    let mut worst = f64::INFINITY;
    for _ in 0..4 {
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let psi = WaveFunction::from_real(g.clone(), |x| {
            c.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).sin()).sum()
        });
        if psi.norm() < 1e-6 {
            continue;
        }
        worst = worst.min(uncertainty_product(&psi.normalize()?)?.product);
    }
    Ok((worst, 0.5 - 1e-6, Rel::AtLeast))
}

fn gaussian_line(rng: &mut ChaCha8Rng) -> Result<LineFunction<f64>> {
    let (c, k) = (rng.random_range(2.8..3.5), rng.random_range(-3.0..3.0));
    LineFunction::from_fn(0..=1, 100, move |x: f64| {
        Complex::from_polar((-(x - c) * (x - c) / 0.2).exp(), k * x)
    })
}

fn fiber_round_trip(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let f = gaussian_line(rng)?;
    let back = reconstruct(&decompose(&f, 64)?)?;
    let err = (f.h() * f.values().iter().zip(back.values()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>()).sqrt();
    Ok((err, 1e-8, Rel::AtMost))
}

fn fiber_parseval(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let f = gaussian_line(rng)?;
    let m = rng.random_range(2..40);
    Ok(((decompose(&f, m)?.mean_norm_sqr() - f.norm_sqr()).abs(), 1e-8, Rel::AtMost))
}

fn free_bands(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let alphas: Vec<f64> = (0..8).map(|i| 2.0 * PI * i as f64 / 8.0).collect();
    let bt = band_structure(&PotentialSpec::Zero, &alphas, 6, 400)?;
    let mut worst: f64 = 0.0;
    for (i, &a) in alphas.iter().enumerate() {
        let exact = h_alpha_spectrum(a, -3..=3);
        for j in 0..6 {
            let e = exact.eigenvalues()[j];
            worst = worst.max((bt.bands[j][i] - e).abs() / e.max(1.0));
        }
    }
    Ok((worst, 1e-3, Rel::AtMost))
}

fn union_check(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let mut es = vec![0.0, 1.0, 5.0, 17.3];
    es.extend((0..8).map(|_| rng.random_range(0.0..100.0)));
    let covered = spectrum_union_check(&es).iter().filter(|w| w.is_some()).count();
    let missing = (es.len() - covered) as f64;
    let negative_rejected = spectrum_union_check(&[-1.0])[0].is_none();
    Ok((if negative_rejected { missing } else { missing + 1.0 }, 0.0, Rel::AtMost))
}

fn inequivalence(_: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = ring(256);
    let psi0 = WaveFunction::new(g.clone(), AnalyticState::WellMode { n: 0 }.sample(&g).into_values())?;
    let rep = extension_divergence(&psi0, 0.0, 0.5)?;
    let drift = (rep.norm_dirichlet - 1.0).abs().max((rep.norm_alpha - 1.0).abs());
    Ok((if drift <= 1e-10 { rep.distance } else { 0.0 }, 0.1, Rel::AtLeast))
}

fn random_state(rng: &mut ChaCha8Rng, g: &Grid<f64>) -> WaveFunction<f64> {
    let c: Vec<Complex<f64>> = (0..6).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    WaveFunction::from_fn(g.clone(), move |x| c.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).sin()).sum())
}

fn wavefunction_algebra(rng: &mut ChaCha8Rng) -> Result<(f64, f64, Rel)> {
    let g = cell(128);
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let (f, h, k) = (random_state(rng, &g), random_state(rng, &g), random_state(rng, &g));
        let s = Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let lin = inner_product(&f, &h.axpy(s, &k)?)? - inner_product(&f, &h)? - s * inner_product(&f, &k)?;
        worst = worst.max(lin.norm());
        worst = worst.max((f.normalize()?.norm_sqr() - 1.0).abs());
        let a = rng.random_range(0.0..2.0);
        let region = Interval::new(a, a + 1.0)?;
        let once = restrict_indicator(&f, &region);
        if restrict_indicator(&once, &region) != once {
            worst = f64::INFINITY;
        }
    }
    Ok((worst, 1e-12, Rel::AtMost))
}

const SUITE: &[(&str, Invariant)] = &[
    ("closed_form.ladder_exact", ladder_exact),
    ("closed_form.plane_waves_orthonormal", plane_waves_orthonormal),
    ("closed_form.laguerre_recurrence", laguerre_recurrence),
    ("extension.deficiency_exponents", deficiency_exponents),
    ("extension.u_alpha_unitary", u_alpha_unitary),
    ("extension.u_alpha_boundary_residual", u_alpha_boundary),
    ("extension.classify_round_trip", classify_round_trip),
    ("discrete.dirichlet_well", dirichlet_fd),
    ("discrete.calogero", calogero_fd),
    ("discrete.quasi_periodic_hermitian", quasi_periodic_hermitian),
    ("dynamics.spectral_norm", spectral_norm),
    ("dynamics.well_revival", well_revival),
    ("dynamics.multitrap_leakage", multitrap_leak),
    ("dynamics.free_particle_leaks", free_leak),
    ("dynamics.extension_inequivalence", inequivalence),
    ("kinematics.plancherel", plancherel),
    ("kinematics.ground_uncertainty", ground_uncertainty),
    ("kinematics.heisenberg_bound", heisenberg),
    ("direct_integral.round_trip", fiber_round_trip),
    ("direct_integral.parseval", fiber_parseval),
    ("direct_integral.free_bands", free_bands),
    ("direct_integral.spectrum_union", union_check),
    ("core.wavefunction_algebra", wavefunction_algebra),
];

/// Runs the selected invariants; the boolean is true when all pass.
pub fn run(args: &VerifyArgs, seed: u64) -> (Report, bool) {
    let mut table = Table::new(&["invariant", "status", "value", "relation", "bound"]);
    let (mut passed, mut failed) = (0_i64, 0_i64);
    for (i, (name, check)) in SUITE.iter().enumerate() {
        if let Some(filter) = &args.only {
            if !args.all && !name.contains(filter.as_str()) {
                continue;
            }
        }
        // Each invariant draws from its own stream, so filtering does not
        // change the draws of the others.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let result = check(&mut rng).map(|(value, bound, rel)| Check { name, value, bound, rel });
        let (status, value, relation, bound) = match &result {
            Ok(c) => {
                let rel = match c.rel {
                    Rel::AtMost => "<=",
                    Rel::AtLeast => ">=",
                };
                (if c.pass() { "pass" } else { "FAIL" }, Cell::Float(c.value), rel, Cell::Float(c.bound))
            }
            Err(e) => ("FAIL", Cell::Text(format!("error: {e}").replace(',', ";")), "", Cell::Empty),
        };
        if status == "pass" {
            passed += 1;
        } else {
            failed += 1;
        }
        let label = result.as_ref().map_or(*name, |c| c.name);
        table.push(vec![label.into(), status.into(), value, relation.into(), bound]);
    }
    let mut report = Report { table, ..Report::default() };
    report.note("passed", passed);
    report.note("failed", failed);
    (report, failed == 0 && passed > 0)
}
