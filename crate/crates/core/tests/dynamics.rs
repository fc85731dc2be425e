use std::f64::consts::PI;

use spectra_core::boundary::BoundaryCondition;
use spectra_core::closed_form::{infinite_well_spectrum, multitrap_ground_state, AnalyticState, MultitrapParams};
use spectra_core::discrete::{assemble, PotentialSpec};
use spectra_core::dynamics::{
    detect_barriers, extension_divergence, hamiltonian_from_ground_state, leakage, Curvature, MultitrapSystem,
    Propagator,
};
use spectra_core::grid::Grid;
use spectra_core::interval::Interval;
use spectra_core::wavefunction::{inner_product, restrict_indicator, WaveFunction};

fn well_grid(n: usize) -> Grid<f64> {
    Grid::new(Interval::new(0.0, PI).unwrap(), n).unwrap()
}

fn packet(g: &Grid<f64>) -> WaveFunction<f64> {
    WaveFunction::from_real(g.clone(), |x| x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp()).normalize().unwrap()
}

#[test]
fn well_revives_at_two_pi() {
    let g = well_grid(255);
    let prop = Propagator::spectral(infinite_well_spectrum(254), &g).unwrap();
    let psi0 = packet(&g);
    let psi = prop.evolve(&psi0, 2.0 * PI).unwrap();
    let fidelity = inner_product(&psi0, &psi).unwrap().norm_sqr();
    assert!(fidelity >= 1.0 - 1e-8, "{fidelity}");
    for t in [0.1, 1.0, 3.7, 50.0] {
        assert!((prop.evolve(&psi0, t).unwrap().norm() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn spectral_evolution_composes() {
    let g = well_grid(255);
    let prop = Propagator::spectral(infinite_well_spectrum(254), &g).unwrap();
    let psi0 = packet(&g);
    let a = prop.evolve(&prop.evolve(&psi0, 0.4).unwrap().normalize().unwrap(), 0.9).unwrap();
    let b = prop.evolve(&psi0, 1.3).unwrap();
    assert!(a.distance(&b).unwrap() <= 1e-9);
}

#[test]
fn crank_nicolson_keeps_the_norm_over_many_steps() {
    let g = well_grid(400);
    let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
    let psi0 = packet(&g);
    let psi = Propagator::crank_nicolson(op, 1e-4).unwrap().evolve(&psi0, 1.0).unwrap();
    assert!((psi.norm() - 1.0).abs() <= 1e-8);
}

#[test]
fn multitrap_packet_stays_in_its_trap() {
    let sys = MultitrapSystem::new(MultitrapParams::new(1.0).unwrap(), -1..=1, 255).unwrap();
    let cell = sys.cell(0).unwrap();
    let psi0 = WaveFunction::from_real(sys.grid().clone(), |x| {
        if cell.contains(x) {
            x * (PI - x) * (-(x - 1.2) * (x - 1.2) * 3.0).exp()
        } else {
            0.0
        }
    })
    .normalize()
    .unwrap();
    let rep = leakage(sys.propagator(), &psi0, &cell, &[0.1, 1.0, 10.0]).unwrap();
    assert!(rep.max_leaked() <= 1e-9);
    for (i, l) in rep.inside_mass.iter().zip(&rep.leaked_mass) {
        assert!((i + l - 1.0).abs() <= 1e-9);
    }
    // chi_G commutes with the evolution on states supported in G.
    let evolved = sys.propagator().evolve(&psi0, 2.5).unwrap();
    let a = restrict_indicator(&evolved, &cell);
    let b = sys.propagator().evolve(&restrict_indicator(&psi0, &cell), 2.5).unwrap();
    assert!(a.distance(&b).unwrap() <= 1e-9);
}

fn half_line_packet(g: &Grid<f64>) -> WaveFunction<f64> {
    WaveFunction::from_real(g.clone(), |x| if x > 0.0 { x * x * (-(x - 2.0) * (x - 2.0)).exp() } else { 0.0 })
        .normalize()
        .unwrap()
}

fn line_leak(potential: &PotentialSpec<f64>, n: usize) -> f64 {
    let g = Grid::new(Interval::new(-12.0, 12.0).unwrap(), n).unwrap();
    let op = assemble(&g, potential, &BoundaryCondition::Dirichlet).unwrap();
    let prop = Propagator::crank_nicolson(op, 1e-3).unwrap();
    let cell = Interval::new(0.0, 12.0).unwrap();
    leakage(&prop, &half_line_packet(&g), &cell, &[1.0]).unwrap().leaked_mass[0]
}

#[test]
fn calogero_barrier_leakage_shrinks_under_refinement() {
    let v = PotentialSpec::Calogero(2.0);
    let leaks: Vec<f64> = [600, 1200, 2400].iter().map(|&n| line_leak(&v, n)).collect();
    assert!(leaks[1] < leaks[0] && leaks[2] < leaks[1], "{leaks:?}");
    assert!(leaks[2] < 1e-9, "{leaks:?}");
}

#[test]
fn free_particle_leaks() {
    assert!(line_leak(&PotentialSpec::Zero, 1200) > 0.01);
}

#[test]
fn inequivalent_extensions_diverge() {
    let g = Grid::<f64>::periodic(Interval::unit_cell(), 512).unwrap();
    let psi0 = AnalyticState::WellMode { n: 0 }.sample(&g);
    let psi0 = WaveFunction::new(g.clone(), psi0.into_values()).unwrap();
    assert!(psi0.is_normalized());
    let rep = extension_divergence(&psi0, 0.0, 0.5).unwrap();
    assert!(rep.distance >= 0.1, "{rep:?}");
    assert!(rep.distance <= 2.0);
    assert!((rep.norm_dirichlet - 1.0).abs() <= 1e-10 && (rep.norm_alpha - 1.0).abs() <= 1e-10);
    assert!(extension_divergence(&psi0, 0.0, 0.0).unwrap().distance <= 1e-12);
}

#[test]
fn barrier_detection_examples() {
    let g = Grid::new(Interval::new(-2.0 * PI, 2.0 * PI).unwrap(), 799).unwrap();
    let phi = multitrap_ground_state(&MultitrapParams::new(1.0).unwrap(), &g);
    let b = detect_barriers(&phi, 0.5).unwrap();
    assert_eq!(b.len(), 3, "{b:?}");
    for (x, w) in b.iter().zip([-PI, 0.0, PI]) {
        assert!((x - w).abs() < 1e-9);
    }
    let g = Grid::new(Interval::<f64>::new(-1.0, 1.0).unwrap(), 100).unwrap();
    let sq = WaveFunction::from_real(g.clone(), |x| x * x);
    let b = detect_barriers(&sq, 0.5).unwrap();
    assert_eq!(b.len(), 1);
    assert!(b[0].abs() < 1e-12);
    let flat = WaveFunction::from_real(g, |_| 1.0);
    assert!(detect_barriers(&flat, 0.5).unwrap().is_empty());
}

#[test]
fn ground_state_potentials() {
    let q = 2.0;
    let g = Grid::new(Interval::new(0.0, 2.0 * PI).unwrap(), 399).unwrap();
    let phi = multitrap_ground_state(&MultitrapParams::new(q).unwrap(), &g);
    let d2 = |x: f64| -q * q * (q * x).sin();
    let rec = hamiltonian_from_ground_state(&phi, Curvature::Analytic(&d2)).unwrap();
    assert!(rec.residual <= 1e-6);
    for (v, m) in rec.values().iter().zip(&rec.masked) {
        if !m {
            assert!((v + q * q).abs() < 1e-9);
        }
    }
    assert!(rec.masked.iter().any(|m| *m));

    let g = Grid::new(Interval::<f64>::new(0.5, 3.0).unwrap(), 200).unwrap();
    let phi = WaveFunction::from_real(g.clone(), |x| x * x);
    let rec = hamiltonian_from_ground_state(&phi, Curvature::Analytic(&|_| 2.0)).unwrap();
    for (x, v) in g.points().iter().zip(rec.values()) {
        assert!((v - 2.0 / (x * x)).abs() < 1e-12);
    }
    let rec = hamiltonian_from_ground_state(&phi, Curvature::FiniteDifference).unwrap();
    for (x, v) in g.points().iter().zip(rec.values()) {
        assert!((v - 2.0 / (x * x)).abs() < 1e-8);
    }
}
