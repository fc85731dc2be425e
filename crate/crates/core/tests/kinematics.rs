use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::closed_form::AnalyticState;
use spectra_core::grid::Grid;
use spectra_core::interval::Interval;
use spectra_core::kinematics::{
    fourier_transform, probability_momentum, probability_position, symmetric_momenta, uncertainty_product,
};
use spectra_core::wavefunction::WaveFunction;

fn well_grid(n: usize) -> Grid<f64> {
    Grid::new(Interval::new(0.0, PI).unwrap(), n).unwrap()
}

fn ground(n: usize) -> WaveFunction<f64> {
    AnalyticState::WellMode { n: 0 }.sample(&well_grid(n))
}

/// `2 pi |f~(p)|^2` for `sqrt(2/pi) sin x` on `[0, pi]`, from the closed-form
/// integral `int_0^pi sin x e^{-ipx} dx = (1 + e^{-i p pi}) / (1 - p^2)`.
fn ground_density(p: f64) -> f64 {
    let amp2 = if (p.abs() - 1.0).abs() < 1e-9 {
        PI * PI / 4.0
    } else {
        // |1 + e^{-i p pi}|^2 = 2 + 2 cos(p pi)
        (2.0 + 2.0 * (p * PI).cos()) / ((1.0 - p * p) * (1.0 - p * p))
    };
    2.0 * PI * (2.0 / PI) * amp2 / (4.0 * PI * PI)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / (2 * m) as f64;
    let mut s = f(a) + f(b);
    for i in 1..2 * m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn density_at_rest_matches_closed_form() {
    let d = fourier_transform(&ground(1999), &[0.0]).unwrap();
    assert!((d.density[0] - ground_density(0.0)).abs() < 1e-6, "{}", d.density[0]);
    assert!((ground_density(0.0) - 4.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn plancherel_mass_converges() {
    let f = ground(1999);
    let mut defects = Vec::new();
    for pmax in [20.0, 40.0, 80.0] {
        let d = fourier_transform(&f, &symmetric_momenta(pmax, 0.01).unwrap()).unwrap();
        let defect = (1.0 - d.total()).abs();
        assert!(defect <= 1.0 / pmax, "{pmax}: {defect}");
        defects.push(defect);
    }
    assert!(defects[1] < defects[0] && defects[2] < defects[1], "{defects:?}");
    assert!(defects[1] <= 1e-4);
}

#[test]
fn small_momentum_window_matches_oracle() {
    let d = fourier_transform(&ground(1999), &symmetric_momenta(2.0, 0.001).unwrap()).unwrap();
    let got = probability_momentum(&d, &Interval::new(-1.0, 1.0).unwrap()).unwrap();
    let want = simpson(ground_density, -1.0, 1.0, 4000);
    assert!(got > 0.0 && got < 1.0);
    assert!((got - want).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn real_states_split_momentum_evenly() {
    let d = fourier_transform(&ground(1999), &symmetric_momenta(80.0, 0.01).unwrap()).unwrap();
    let half = probability_momentum(&d, &Interval::new(0.0, 80.0).unwrap()).unwrap();
    assert!((half - 0.5).abs() < 1e-6, "{half}");
    for (i, &p) in d.p_grid.iter().enumerate() {
        let j = d.p_grid.len() - 1 - i;
        assert!((d.p_grid[j] + p).abs() < 1e-12);
        assert!((d.density[i] - d.density[j]).abs() < 1e-12);
    }
}

#[test]
fn highly_excited_state_peaks_near_its_wavenumber() {
    let f = AnalyticState::WellMode { n: 19 }.sample(&well_grid(1999));
    let d = fourier_transform(&f, &symmetric_momenta(40.0, 0.1).unwrap()).unwrap();
    let mut idx: Vec<usize> = (0..d.density.len()).collect();
    idx.sort_by(|&a, &b| d.density[b].partial_cmp(&d.density[a]).unwrap());
    let mut peaks = [d.p_grid[idx[0]], d.p_grid[idx[1]]];
    peaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((peaks[0] + 20.0).abs() <= 0.1 && (peaks[1] - 20.0).abs() <= 0.1, "{peaks:?}");
}

#[test]
fn translation_leaves_density_unchanged() {
    let f = ground(400);
    let g = f.shifted(2.5);
    let p = symmetric_momenta(10.0, 0.25).unwrap();
    let a = fourier_transform(&f, &p).unwrap();
    let b = fourier_transform(&g, &p).unwrap();
    for (i, &pi) in p.iter().enumerate() {
        assert!((a.density[i] - b.density[i]).abs() < 1e-10);
        let phase = num_complex::Complex::from_polar(1.0, -pi * 2.5);
        assert!((a.amplitude[i] * phase - b.amplitude[i]).norm() < 1e-10);
    }
}

#[test]
fn position_probabilities() {
    let f = ground(1001);
    let half = probability_position(&f, &Interval::new(0.0, PI / 2.0).unwrap()).unwrap();
    assert!((half - 0.5).abs() < 1e-8);
    let all = probability_position(&f, &Interval::new(-1.0, 4.0).unwrap()).unwrap();
    assert!((all - 1.0).abs() < 1e-10);
    assert_eq!(probability_position(&f, &Interval::new(5.0, 6.0).unwrap()).unwrap(), 0.0);
    let m = Interval::new(0.3, 1.7).unwrap();
    let rest = [Interval::new(0.0, 0.3).unwrap(), Interval::new(1.7, PI).unwrap()];
    let total = probability_position(&f, &m).unwrap()
        + rest.iter().map(|r| probability_position(&f, r).unwrap()).sum::<f64>();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn ground_state_uncertainty() {
    let u = uncertainty_product(&ground(1999)).unwrap();
    let dq = (PI * PI / 12.0 - 0.5).sqrt();
    assert!((u.delta_q - dq).abs() < 1e-6, "{}", u.delta_q);
    assert!((u.delta_p - 1.0).abs() < 1e-8, "{}", u.delta_p);
    assert!((u.product - dq).abs() < 1e-6);
    assert!(u.product >= 0.5);
}

#[test]
fn eigenstate_momentum_spread_is_wavenumber() {
    for n in 0..6 {
        let f = AnalyticState::WellMode { n }.sample(&well_grid(1999));
        let u = uncertainty_product(&f).unwrap();
        assert!((u.delta_p - (n + 1) as f64).abs() < 1e-8, "{n}: {}", u.delta_p);
        assert!(u.mean_p.abs() < 1e-12);
    }
}

#[test]
fn narrow_gaussian_saturates_the_bound() {
    let g = well_grid(1999);
    let f = WaveFunction::from_real(g, |x| (-(x - PI / 2.0).powi(2) / (4.0 * 0.04)).exp()).normalize().unwrap();
    let u = uncertainty_product(&f).unwrap();
    assert!((u.product - 0.5).abs() < 1e-3, "{}", u.product);
}

#[test]
fn heisenberg_bound_on_random_confined_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = well_grid(801);
    for _ in 0..25 {
        let c: Vec<f64> = (0..6).map(|_| rng.random::<f64>() - 0.5).collect();
        let s: Vec<f64> = (0..6).map(|_| rng.random::<f64>() - 0.5).collect();
        let f = WaveFunction::from_fn(g.clone(), |x| {
            (0..6)
                .map(|k| num_complex::Complex::new(c[k], s[k]) * ((k + 1) as f64 * x).sin())
                .sum()
        })
        .normalize()
        .unwrap();
        assert!(uncertainty_product(&f).unwrap().product >= 0.5 - 1e-6);
    }
}
