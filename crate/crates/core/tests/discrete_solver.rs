use std::f64::consts::PI;

use spectra_core::boundary::BoundaryCondition;
use spectra_core::closed_form::{h_alpha_spectrum, infinite_well_spectrum};
use spectra_core::discrete::{assemble, convergence_report, eigensolve, PotentialSpec};
use spectra_core::grid::Grid;
use spectra_core::interval::Interval;

fn well_grid(n: usize) -> Grid<f64> {
    Grid::new(Interval::new(0.0, PI).unwrap(), n).unwrap()
}

#[test]
fn dirichlet_well_lowest_ten_levels() {
    let op = assemble(&well_grid(1999), &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
    let s = eigensolve(&op, 10).unwrap();
    for (k, &l) in s.eigenvalues().iter().enumerate() {
        let e = ((k + 1) * (k + 1)) as f64;
        assert!((l - e).abs() / e < 1e-4, "level {k}: {l}");
    }
}

#[test]
fn dirichlet_refinement_is_second_order() {
    let grids: Vec<_> = [99, 199, 399].iter().map(|&n| well_grid(n)).collect();
    let rep = convergence_report(
        (&PotentialSpec::Zero, &BoundaryCondition::Dirichlet),
        &infinite_well_spectrum(5),
        &grids,
        5,
    )
    .unwrap();
    assert!((rep.order() - 2.0).abs() <= 0.3, "{:?}", rep.orders);
    assert!(rep.is_monotone());
}

#[test]
fn periodic_refinement_is_second_order() {
    let grids: Vec<_> =
        [100, 200, 400].iter().map(|&n| Grid::periodic(Interval::<f64>::unit_cell(), n).unwrap()).collect();
    let rep = convergence_report(
        (&PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(0.0)),
        &h_alpha_spectrum(0.0, -3..=3),
        &grids,
        5,
    )
    .unwrap();
    assert!((rep.order() - 2.0).abs() <= 0.3, "{:?}", rep.orders);
}

#[test]
fn quarter_flux_ground_state() {
    let g = Grid::periodic(Interval::<f64>::unit_cell(), 2000).unwrap();
    let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(PI / 2.0)).unwrap();
    let s = eigensolve(&op, 3).unwrap();
    assert!((s.eigenvalues()[0] - 0.25).abs() / 0.25 < 1e-3);
    assert!((s.eigenvalues()[1] - 2.25).abs() / 2.25 < 1e-3);
}

#[test]
fn calogero_half_line_levels() {
    let g = Grid::new(Interval::<f64>::new(0.0, 12.0).unwrap(), 2400).unwrap();
    let op = assemble(&g, &PotentialSpec::Calogero(2.0), &BoundaryCondition::Dirichlet).unwrap();
    let s = eigensolve(&op, 2).unwrap();
    assert!((s.eigenvalues()[0] - 5.0).abs() / 5.0 < 1e-2, "{:?}", s.eigenvalues());
    assert!((s.eigenvalues()[1] - 9.0).abs() / 9.0 < 1e-2);
}

#[test]
fn mirrored_calogero_levels_come_in_pairs() {
    let g = Grid::new(Interval::<f64>::new(-12.0, 12.0).unwrap(), 2400).unwrap();
    let op = assemble(&g, &PotentialSpec::Calogero(2.0), &BoundaryCondition::Dirichlet).unwrap();
    let s = eigensolve(&op, 4).unwrap();
    let e = s.eigenvalues();
    for j in 0..2 {
        assert!((e[2 * j] - e[2 * j + 1]).abs() <= 1e-6 * e[2 * j], "{e:?}");
    }
    assert!(s.orthonormality_defect().unwrap().unwrap() <= 1e-8);
}

#[test]
fn plane_rotator_levels_are_paired() {
    let g = Grid::periodic(Interval::<f64>::unit_cell(), 400).unwrap();
    let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(0.0)).unwrap();
    let s = eigensolve(&op, 9).unwrap();
    let e = s.eigenvalues();
    assert!(e[0].abs() < 1e-9);
    for j in 0..4 {
        assert!((e[2 * j + 1] - e[2 * j + 2]).abs() <= 1e-9 * e[2 * j + 1], "{e:?}");
    }
}
