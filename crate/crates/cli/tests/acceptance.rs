//! One line per acceptance criterion. Criteria listed in `UNATTAINABLE` are
//! expected to fail as stated; every other criterion must pass.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex;
use num_rational::Ratio;
use spectra_core::boundary::boundary_residual;
use spectra_core::closed_form::ladder::{h_alpha_level, momentum_level};
use spectra_core::closed_form::{h_alpha_spectrum, infinite_well_spectrum, momentum_spectrum, AnalyticState, MultitrapParams};
use spectra_core::direct_integral::{
    band_structure, decompose, evolve_fibers, reconstruct, reconstruct_on, spectrum_union_check, LineFunction,
};
use spectra_core::discrete::{assemble, eigensolve};
use spectra_core::dynamics::{extension_divergence, leakage, MultitrapSystem};
use spectra_core::extension::{assemble_extension_element, build_u_alpha, deficiency_basis, UAlphaSource};
use spectra_core::kinematics::{fourier_transform, symmetric_momenta, uncertainty_product};
use spectra_core::matrix2::UnitaryMatrix2;
use spectra_core::wavefunction::inner_product;
use spectra_core::{BoundaryCondition, Grid, Interval, PotentialSpec, Propagator, WaveFunction};

/// Sub-checks that cannot hold as written, with the reason.
const UNATTAINABLE: &[(&str, &str)] = &[(
    "7a density(0) = 4/pi^3",
    "the stated value contradicts the stated convention; the quadrature oracle gives 4/pi^2 (check 7a')",
)];

struct Sub {
    name: String,
    ok: bool,
    detail: String,
}

fn sub(name: &str, ok: bool, detail: String) -> Sub {
    Sub { name: name.to_string(), ok, detail }
}

fn le(name: &str, value: f64, tol: f64) -> Sub {
    sub(name, value <= tol, format!("{value:.3e} <= {tol:.0e}"))
}

fn ge(name: &str, value: f64, bound: f64) -> Sub {
    sub(name, value >= bound, format!("{value:.6e} >= {bound:e}"))
}

fn cell(n: usize) -> Grid<f64> {
    Grid::new(Interval::unit_cell(), n).unwrap()
}

fn ring(n: usize) -> Grid<f64> {
    Grid::periodic(Interval::unit_cell(), n).unwrap()
}

fn c1_closed_form() -> Vec<Sub> {
    type Q = Ratio<i64>;
    let mut out = Vec::new();
    let mut exact = true;
    let mut worst: f64 = 0.0;
    for (r, alpha) in [(Q::new(0, 1), 0.0), (Q::new(1, 2), PI / 2.0), (Q::new(1, 1), PI)] {
        let p_spec = momentum_spectrum(alpha, -4..=4);
        for n in -4..=4_i64 {
            let p = Q::from_integer(2 * n) + r;
            exact &= momentum_level(n, r) == p && h_alpha_level(n, r) == p * p;
            let pf = *p.numer() as f64 / *p.denom() as f64;
            worst = worst.max((p_spec.eigenvalue_for(n).unwrap() - pf).abs());
            worst = worst.max((h_alpha_spectrum(alpha, n..=n).eigenvalues()[0] - pf * pf).abs());
        }
    }
    out.push(sub("1a rational ladder p = 2n + alpha/pi, E = p^2", exact, "exact".into()));
    out.push(le("1b floating spectra vs rational", worst, 1e-12));
    let rot = h_alpha_spectrum(0.0, -3..=3);
    let paired = (1..=3).all(|n| rot.eigenvalue_for(n) == rot.eigenvalue_for(-n)) && rot.eigenvalues()[0] == 0.0;
    out.push(sub("1c plane rotator double degeneracy", paired, format!("{:?}", rot.eigenvalues())));
    out
}

fn c2_fd_convergence() -> Vec<Sub> {
    let op = assemble(&cell(1999), &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
    let s = eigensolve(&op, 10).unwrap();
    let worst = (0..10).map(|n| {
        let e = ((n + 1) * (n + 1)) as f64;
        (s.eigenvalues()[n] - e).abs() / e
    });
    let worst = worst.fold(0.0, f64::max);
    let errs: Vec<f64> = [99, 199, 399]
        .iter()
        .map(|&n| {
            let op = assemble(&cell(n), &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
            let s = eigensolve(&op, 5).unwrap();
            (0..5).map(|k| (s.eigenvalues()[k] - ((k + 1) * (k + 1)) as f64).abs() / ((k + 1) * (k + 1)) as f64).fold(0.0, f64::max)
        })
        .collect();
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).ln() / 2f64.ln()).collect();
    let ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.3);
    vec![
        le("2a lowest 10 levels at n=1999", worst, 1e-4),
        sub("2b convergence order 2 +- 0.3", ok, format!("orders {orders:.3?}")),
    ]
}

fn c3_calogero() -> Vec<Sub> {
    let g = Grid::new(Interval::new(0.0, 12.0).unwrap(), 2400).unwrap();
    let levels = |gamma: f64| {
        let op = assemble(&g, &PotentialSpec::Calogero(gamma), &BoundaryCondition::Dirichlet).unwrap();
        eigensolve(&op, 2).unwrap().eigenvalues().to_vec()
    };
    let rel = |got: &[f64], want: [f64; 2]| got.iter().zip(want).map(|(g, w)| (g - w).abs() / w).fold(0.0, f64::max);
    // 4n + 2 + sqrt(1 + 4 gamma)
    let strong = rel(&levels(2.0), [2.0 + 3.0, 6.0 + 3.0]);
    let weak = rel(&levels(0.0), [3.0, 7.0]);
    vec![le("3a gamma=2 gives 5, 9", strong, 1e-2), le("3b gamma=0 gives 3, 7", weak, 1e-2)]
}

fn c4_extensions() -> Vec<Sub> {
    let b = deficiency_basis::<f64>();
    let exps = b.plus().iter().all(|m| m.kinetic_eigenvalue() == Complex::new(0.0, 2.0))
        && b.minus().iter().all(|m| m.kinetic_eigenvalue() == Complex::new(0.0, -2.0));
    let g = cell(600);
    let mut worst: f64 = 0.0;
    for i in 0..32 {
        let alpha = 2.0 * PI * i as f64 / 32.0;
        let u = build_u_alpha(alpha).unwrap().matrix;
        let phase = 0.3 + i as f64 * 0.1;
        let f = WaveFunction::from_fn(g.clone(), move |x| Complex::new(x.cos() + phase, (2.0 * x).sin()) * x.sin().powi(4));
        let el = assemble_extension_element(&u, &f, [Complex::new(0.7, -0.2 * phase), Complex::new(-1.1, 0.4)]).unwrap();
        worst = worst.max(boundary_residual(&el.boundary_data(), alpha).unwrap());
    }
    let el = assemble_extension_element(&UnitaryMatrix2::minus_identity(), &WaveFunction::zeros(g), [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]).unwrap();
    let bd = el.boundary_data();
    let (reported, report) = match build_u_alpha(0.0).unwrap().source {
        UAlphaSource::Derived { entry, defect } => {
            (true, format!("typeset matrix not unitary, entry {entry:?} defect {defect:.4}; derived U in use"))
        }
        UAlphaSource::Printed => (true, "typeset matrix unitary".into()),
    };
    vec![
        sub("4a -s^2 = +-2i exactly", exps, "exact complex arithmetic".into()),
        le("4b U_alpha boundary residual at 32 alpha", worst, 1e-8),
        le("4c U = -1 endpoint values", bd.value[0].norm().max(bd.value[1].norm()), 1e-10),
        sub("4d unitarity of the typeset U_alpha reported", reported, report),
    ]
}

fn c5_impenetrability() -> Vec<Sub> {
    let sys = MultitrapSystem::new(MultitrapParams::new(1.0).unwrap(), -1..=1, 255).unwrap();
    let c = sys.cell(0).unwrap();
    let psi0 = WaveFunction::from_real(sys.grid().clone(), |x: f64| {
        if c.contains(x) { x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp() } else { 0.0 }
    })
    .normalize()
    .unwrap();
    let ts: Vec<f64> = (1..=20).map(|i| i as f64 * 0.5).collect();
    let trap = leakage(sys.propagator(), &psi0, &c, &ts).unwrap().max_leaked();

    let line_leak = |v: &PotentialSpec<f64>, n: usize| {
        let g = Grid::new(Interval::new(-12.0, 12.0).unwrap(), n).unwrap();
        let prop = Propagator::crank_nicolson(assemble(&g, v, &BoundaryCondition::Dirichlet).unwrap(), 1e-3).unwrap();
        let psi0 = WaveFunction::from_real(g.clone(), |x: f64| if x > 0.0 { x * x * (-(x - 2.0) * (x - 2.0)).exp() } else { 0.0 })
            .normalize()
            .unwrap();
        leakage(&prop, &psi0, &Interval::new(0.0, 12.0).unwrap(), &[1.0]).unwrap().leaked_mass[0]
    };
    let leaks: Vec<f64> = [600, 1200, 2400].iter().map(|&n| line_leak(&PotentialSpec::Calogero(2.0), n)).collect();
    let free = line_leak(&PotentialSpec::Zero, 1200);
    vec![
        le("5a multitrap leakage for t <= 10", trap, 1e-9),
        sub("5b Calogero leakage decreases under refinement", leaks[1] < leaks[0] && leaks[2] < leaks[1], format!("{:.3e} > {:.3e} > {:.3e}", leaks[0], leaks[1], leaks[2])),
        ge("5c free particle leaks by t=1", free, 0.01),
    ]
}

fn c6_unitarity() -> Vec<Sub> {
    let g = cell(255);
    let prop = Propagator::spectral(infinite_well_spectrum(254), &g).unwrap();
    let psi0 = WaveFunction::from_real(g.clone(), |x: f64| x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp()).normalize().unwrap();
    let drift = [0.3, 1.0, 4.0, 25.0].iter().map(|&t| (prop.evolve(&psi0, t).unwrap().norm() - 1.0).abs()).fold(0.0, f64::max);
    let fid = inner_product(&psi0, &prop.evolve(&psi0, 2.0 * PI).unwrap()).unwrap().norm_sqr();
    vec![le("6a spectral norm drift", drift, 1e-10), ge("6b revival fidelity at 2 pi", fid, 1.0 - 1e-8)]
}

fn c7_kinematics() -> Vec<Sub> {
    let psi = AnalyticState::WellMode { n: 0 }.sample(&cell(1999));
    let d0 = fourier_transform(&psi, &[0.0]).unwrap().density[0];
    // int_0^pi sqrt(2/pi) sin x dx = 2 sqrt(2/pi); density = 2 pi |(1/2pi) int|^2.
    let oracle = 2.0 * PI * (2.0 * (2.0 / PI).sqrt() / (2.0 * PI)).powi(2);
    let mass = fourier_transform(&psi, &symmetric_momenta(40.0, 0.01).unwrap()).unwrap().total();
    let u = uncertainty_product(&psi).unwrap();
    let target = (PI * PI / 12.0 - 0.5).sqrt();
    let dp = (0..=5)
        .map(|n| {
            let s = AnalyticState::WellMode { n }.sample(&cell(1999));
            (uncertainty_product(&s).unwrap().delta_p - (n + 1) as f64).abs()
        })
        .fold(0.0, f64::max);
    vec![
        sub("7a density(0) = 4/pi^3", (d0 - 4.0 / PI.powi(3)).abs() <= 1e-6, format!("{d0:.9} vs {:.9}", 4.0 / PI.powi(3))),
        sub("7a' density(0) = 4/pi^2 (quadrature oracle)", (d0 - oracle).abs() <= 1e-6, format!("{d0:.9} vs {oracle:.9}")),
        le("7b Plancherel mass on [-40, 40]", (1.0 - mass).abs(), 1e-4),
        le("7c uncertainty product", (u.product - target).abs(), 1e-6),
        ge("7d product above 1/2", u.product, 0.5),
        le("7e delta P = n + 1 for n <= 5", dp, 1e-8),
    ]
}

fn two_cell_gaussian(m: usize) -> LineFunction<f64> {
    LineFunction::from_fn(0..=1, m, |x: f64| {
        let d = x - PI;
        Complex::from_polar((-d * d / (2.0 * 0.35 * 0.35)).exp(), 2.0 * x)
    })
    .unwrap()
}

fn c8_direct_integral() -> Vec<Sub> {
    let l2 = |a: &LineFunction<f64>, b: &LineFunction<f64>| {
        (a.h() * a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>()).sqrt()
    };
    let f = two_cell_gaussian(200);
    let rt = l2(&f, &reconstruct(&decompose(&f, 64).unwrap()).unwrap());

    let alphas: Vec<f64> = (0..16).map(|i| 2.0 * PI * i as f64 / 16.0).collect();
    let bt = band_structure(&PotentialSpec::Zero, &alphas, 6, 800).unwrap();
    let mut band_err: f64 = 0.0;
    for (i, &a) in alphas.iter().enumerate() {
        // Lowest six of (2n + a/pi)^2.
        let mut exact: Vec<f64> = (-4..=4).map(|n: i64| (2.0 * n as f64 + a / PI).powi(2)).collect();
        exact.sort_by(f64::total_cmp);
        for (band, e) in bt.bands.iter().zip(&exact).take(6) {
            band_err = band_err.max((band[i] - e).abs() / e.max(1.0));
        }
    }

    let (m, k_half, t) = (1200, 4_i64, 0.2);
    let f = two_cell_gaussian(m);
    let norm = f.norm_sqr().sqrt();
    let dec = decompose(&f, 64).unwrap();
    let fibered = reconstruct_on(&evolve_fibers(&dec, &PotentialSpec::Zero, t, 40).unwrap(), -k_half..=k_half - 1).unwrap();
    let h = PI / m as f64;
    let span = k_half as f64 * PI;
    let line = Grid::new(Interval::new(-span - h / 2.0, span + h / 2.0).unwrap(), 2 * k_half as usize * m).unwrap();
    let start: Vec<Complex<f64>> = line
        .points()
        .iter()
        .map(|&x| {
            if (0.0..2.0 * PI).contains(&x) {
                let d = x - PI;
                Complex::from_polar((-d * d / (2.0 * 0.35 * 0.35)).exp(), 2.0 * x) / norm
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    let psi0 = WaveFunction::new(line.clone(), start).unwrap();
    let op = assemble(&line, &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
    let psi = Propagator::crank_nicolson(op, 1e-4).unwrap().evolve(&psi0, t).unwrap();
    let reference = LineFunction::new(-k_half..=k_half - 1, m, psi.values().iter().map(|v| v * norm).collect()).unwrap();
    let dyn_err = l2(&fibered, &reference) / norm;

    let union = spectrum_union_check(&[0.0, 1.0, 5.0, 17.3]);
    let union_ok = union.iter().zip([0.0, 1.0, 5.0, 17.3]).all(|(w, e)| {
        w.is_some_and(|w| ((2.0 * w.n as f64 + w.alpha / PI).powi(2) - e).abs() <= 1e-12 * e.max(1.0))
    });
    vec![
        le("8a round trip, two-cell Gaussian, M=64", rt, 1e-8),
        le("8b free bands vs (2n + alpha/pi)^2", band_err, 1e-3),
        le("8c fibered vs line evolution at t=0.2", dyn_err, 1e-3),
        sub("8d union check for E in {0, 1, 5, 17.3}", union_ok, union
            .iter()
            .map(|w| w.map_or("none".to_string(), |w| format!("(n={}, alpha/pi={:.4})", w.n, w.alpha / PI)))
            .collect::<Vec<_>>()
            .join(" ")),
    ]
}

fn c9_inequivalence() -> Vec<Sub> {
    let g = ring(512);
    let psi0 = WaveFunction::new(g.clone(), AnalyticState::WellMode { n: 0 }.sample(&g).into_values()).unwrap();
    let rep = extension_divergence(&psi0, 0.0, 0.5).unwrap();
    let drift = (rep.norm_dirichlet - 1.0).abs().max((rep.norm_alpha - 1.0).abs());
    vec![ge("9a L2 distance at t=0.5", rep.distance, 0.1), le("9b norm drift of both", drift, 1e-10)]
}

fn c10_determinism() -> Vec<Sub> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spectra"))
            .args(["verify", "--all", "--seed", "7"])
            .env("SPECTRA_THREADS", "2")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    vec![
        sub("10a both runs exit 0", a.status.success() && b.status.success(), format!("{:?} {:?}", a.status.code(), b.status.code())),
        sub("10b byte-identical reports", a.stdout == b.stdout && !a.stdout.is_empty(), format!("{} bytes", a.stdout.len())),
    ]
}

type Criterion = (&'static str, fn() -> Vec<Sub>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form fidelity", c1_closed_form),
        ("FD convergence", c2_fd_convergence),
        ("Calogero", c3_calogero),
        ("extension machinery", c4_extensions),
        ("impenetrability", c5_impenetrability),
        ("unitarity and revival", c6_unitarity),
        ("kinematics", c7_kinematics),
        ("direct integral", c8_direct_integral),
        ("extension inequivalence", c9_inequivalence),
        ("determinism", c10_determinism),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let subs = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = subs.iter().all(|s| s.ok);
        println!("criterion {:>2} {}: {name} ({secs:.2}s)", i + 1, if ok { "PASS" } else { "FAIL" });
        for s in &subs {
            let known = UNATTAINABLE.iter().find(|u| u.0 == s.name);
            let tag = match (s.ok, known) {
                (true, None) => "pass",
                (false, Some(_)) => "FAIL (known)",
                (false, None) => "FAIL",
                (true, Some(_)) => "pass (listed as unattainable)",
            };
            println!("    {tag}: {} [{}]", s.name, s.detail);
            if let (false, Some(u)) = (s.ok, known) {
                println!("      reason: {}", u.1);
            }
            if s.ok == known.is_some() {
                unexpected.push(s.name.clone());
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
