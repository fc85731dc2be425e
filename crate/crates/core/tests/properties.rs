use std::f64::consts::PI;

use num_complex::Complex;
use proptest::prelude::*;
use spectra_core::direct_integral::{decompose, reconstruct, LineFunction};
use spectra_core::discrete::{assemble, eigensolve, PotentialSpec};
use spectra_core::extension::{build_u_alpha, classify_extension, ExtensionClass};
use spectra_core::wavefunction::{inner_product, restrict_indicator, WaveFunction};
use spectra_core::{BoundaryCondition, Grid, Grid32, Interval, Interval32, WaveFunction32};

fn grid() -> Grid<f64> {
    Grid::new(Interval::new(0.0, PI).unwrap(), 64).unwrap()
}

fn state(coeffs: &[(f64, f64)]) -> WaveFunction<f64> {
    let g = grid();
    let values = g
        .points()
        .iter()
        .zip(coeffs.iter().cycle())
        .map(|(x, &(a, b))| Complex::new(a * x.sin(), b * (2.0 * x).sin()))
        .collect();
    WaveFunction::new(g, values).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn normalize_gives_unit_norm(c in coeffs()) {
        let f = state(&c);
        prop_assume!(f.norm() > 1e-6);
        prop_assert!((f.normalize().unwrap().norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn restriction_is_idempotent(c in coeffs(), a in 0.0..PI, w in 0.01..PI) {
        let f = state(&c);
        let region = Interval::new(a, a + w).unwrap();
        let once = restrict_indicator(&f, &region);
        prop_assert_eq!(restrict_indicator(&once, &region), once);
    }

    #[test]
    fn inner_product_is_sesquilinear(a in coeffs(), b in coeffs(), c in coeffs(), s in (-3.0..3.0f64, -3.0..3.0f64)) {
        let (f, g, h) = (state(&a), state(&b), state(&c));
        let s = Complex::new(s.0, s.1);
        let lin = inner_product(&f, &g.axpy(s, &h).unwrap()).unwrap();
        let want = inner_product(&f, &g).unwrap() + s * inner_product(&f, &h).unwrap();
        prop_assert!((lin - want).norm() <= 1e-12 * (1.0 + want.norm()));
        let anti = inner_product(&g.axpy(s, &h).unwrap(), &f).unwrap();
        let want = inner_product(&g, &f).unwrap() + s.conj() * inner_product(&h, &f).unwrap();
        prop_assert!((anti - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn classification_inverts_u_alpha(alpha in 0.0..2.0 * PI) {
        let u = build_u_alpha(alpha).unwrap();
        match classify_extension(u.matrix.matrix()).unwrap() {
            ExtensionClass::QuasiPeriodic(a) => {
                let d = (a - u.alpha).abs();
                prop_assert!(d.min(2.0 * PI - d) <= 1e-10);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn fiber_map_is_an_isometry(c in coeffs(), m in 2usize..12, cells in 1i64..3) {
        let f = LineFunction::from_fn(0..=cells - 1, 16, |x: f64| {
            let (a, b) = c[(x * 3.0) as usize % c.len()];
            Complex::new(a, b) * (x * 0.5).sin().powi(2)
        }).unwrap();
        let d = decompose(&f, m).unwrap();
        prop_assert!((d.mean_norm_sqr() - f.norm_sqr()).abs() <= 1e-8 * f.norm_sqr().max(1.0));
        if cells as usize <= m {
            let back = reconstruct(&d).unwrap();
            for (x, y) in back.values().iter().zip(f.values()) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn quasi_periodic_operators_are_hermitian(alpha in 0.0..2.0 * PI, n in 3usize..40) {
        let g = Grid::periodic(Interval::unit_cell(), n).unwrap();
        let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::quasi_periodic(alpha)).unwrap();
        prop_assert!(op.hermiticity_defect() <= 1e-12);
    }
}

#[test]
fn single_precision_pipeline() {
    let g: Grid32 = Grid::new(Interval32::new(0.0, std::f32::consts::PI).unwrap(), 199).unwrap();
    let psi: WaveFunction32 = WaveFunction::from_real(g.clone(), |x| x.sin()).normalize().unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-5);
    let op = assemble(&g, &PotentialSpec::Zero, &BoundaryCondition::Dirichlet).unwrap();
    let s = eigensolve(&op, 3).unwrap();
    for (n, e) in s.eigenvalues().iter().enumerate() {
        let want = ((n + 1) * (n + 1)) as f32;
        assert!((e - want).abs() < 1e-3 * want, "{e} vs {want}");
    }
}
