//! Position and momentum statistics of a state confined to an interval,
//! taken over the whole line.
//!
//! The state is extended by zero outside its interval and transformed with
//! `f~(p) = (1/2pi) int f(x) e^{-ipx} dx`, so that the momentum density is
//! `2pi |f~(p)|^2` and Parseval reads `int |f|^2 dx = 2pi int |f~|^2 dp`. No
//! periodisation is involved: the momentum is a continuous variable.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{ensure, Result};
use crate::grid::Layout;
use crate::interval::Interval;
use crate::scalar::{cis, Real, C};
use crate::wavefunction::{require_normalized, WaveFunction};

/// The Fourier convention of a [`MomentumDistribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierConvention {
    /// `f~(p) = (1/2pi) int f e^{-ipx} dx`, density `2pi |f~|^2`.
    InversePrefactor,
}

/// Momentum amplitudes and density on a set of momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution<T> {
    pub p_grid: Vec<T>,
    pub amplitude: Vec<C<T>>,
    pub density: Vec<T>,
    pub convention: FourierConvention,
}

impl<T: Real> MomentumDistribution<T> {
    /// `[min p, max p]`.
    pub fn window(&self) -> Result<Interval<T>> {
        ensure!(self.p_grid.len() >= 2, Domain, "a momentum window needs at least two points");
        Interval::new(self.p_grid[0], self.p_grid[self.p_grid.len() - 1])
    }

    /// Trapezoid integral of the density over the whole window.
    pub fn total(&self) -> T {
        trapezoid(&self.p_grid, &self.density)
    }
}

fn trapezoid<T: Real>(x: &[T], y: &[T]) -> T {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| (xs[1] - xs[0]) * (ys[0] + ys[1]) / T::of(2.0)).sum()
}

/// Uniformly spaced momenta `-p_max, -p_max + dp, ..., p_max`.
pub fn symmetric_momenta<T: Real>(p_max: T, dp: T) -> Result<Vec<T>> {
    ensure!(p_max > T::zero() && dp > T::zero(), Domain, "momentum window and step must be positive");
    let half = (p_max / dp).round().to_usize().unwrap_or(0);
    ensure!(half >= 1, Domain, "momentum step wider than the window");
    let step = p_max / T::of_usize(half);
    Ok((0..=2 * half).map(|i| (T::of_usize(i) - T::of_usize(half)) * step).collect())
}

/// Transform of the piecewise-linear interpolant of `f`, vanishing at the ends
/// of its interval: each sample carries a hat function of half-width `h`,
/// whose transform is exact, giving
/// `f~(p) = (1/2pi) h sinc^2(ph/2) sum_j f_j e^{-i p x_j}`.
pub fn fourier_transform<T: Real>(f: &WaveFunction<T>, p_grid: &[T]) -> Result<MomentumDistribution<T>> {
    require_normalized(f, "fourier_transform")?;
    ensure!(
        p_grid.windows(2).all(|w| w[0] < w[1]),
        Domain,
        "momenta must be strictly increasing"
    );
    let h = f.grid().h();
    let xs = f.grid().points();
    let two_pi = T::two_pi();
    let amplitude: Vec<C<T>> = p_grid
        .par_iter()
        .map(|&p| {
            let u = p * h / T::of(2.0);
            let sinc = if u.abs() < T::of(1e-4) { T::one() - u * u / T::of(6.0) } else { u.sin() / u };
            let mut acc = Complex::new(T::zero(), T::zero());
            for (&x, &v) in xs.iter().zip(f.values()) {
                acc += v * cis(-p * x);
            }
            acc * (h * sinc * sinc / two_pi)
        })
        .collect();
    let density = amplitude.iter().map(|a| two_pi * a.norm_sqr()).collect();
    Ok(MomentumDistribution {
        p_grid: p_grid.to_vec(),
        amplitude,
        density,
        convention: FourierConvention::InversePrefactor,
    })
}

/// `int_M |f|^2 dx`.
pub fn probability_position<T: Real>(f: &WaveFunction<T>, region: &Interval<T>) -> Result<T> {
    require_normalized(f, "probability_position")?;
    let dens: Vec<T> = f.values().iter().map(|v| v.norm_sqr()).collect();
    let ends = f.boundary().map(|b| [b.value[0].norm_sqr(), b.value[1].norm_sqr()]);
    Ok(f.grid().integrate_over(&dens, ends, region))
}

/// `int_K density dp` by the trapezoid rule, with the density interpolated
/// linearly at the ends of `K`. `K` must lie inside the computed window.
pub fn probability_momentum<T: Real>(dist: &MomentumDistribution<T>, k: &Interval<T>) -> Result<T> {
    let w = dist.window()?;
    ensure!(
        !k.is_half_line() && k.a() >= w.a() && k.b() <= w.b(),
        Domain,
        "momentum interval [{}, {}] exceeds the computed window [{}, {}]",
        k.a(),
        k.b(),
        w.a(),
        w.b()
    );
    let (p, d) = (&dist.p_grid, &dist.density);
    let mut total = T::zero();
    for i in 0..p.len() - 1 {
        let (u, v) = (p[i].max(k.a()), p[i + 1].min(k.b()));
        if v > u {
            let at = |x: T| d[i] + (d[i + 1] - d[i]) * (x - p[i]) / (p[i + 1] - p[i]);
            total += (v - u) * (at(u) + at(v)) / T::of(2.0);
        }
    }
    Ok(total)
}

/// Position and momentum spreads of a normalized state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty<T> {
    pub mean_q: T,
    pub mean_p: T,
    pub delta_q: T,
    pub delta_p: T,
    pub product: T,
}

/// Sixth-order central first derivative, with odd reflection across both
/// ends (the state vanishes there). On nodal grids the derivative is also
/// returned at the two endpoints, as `[f'(a), f'(x_1), ..., f'(x_n), f'(b)]`.
fn derivative<T: Real>(f: &WaveFunction<T>) -> Vec<C<T>> {
    let v = f.values();
    let n = v.len() as i64;
    let h = f.grid().h();
    let zero = Complex::new(T::zero(), T::zero());
    let nodal = f.grid().layout() == Layout::Nodal;
    // Extended index: nodal knots are a = 0, x_j = j (1..=n), b = n + 1;
    // cell-centred samples are j = 0..n-1.
    let sample = |k: i64| -> C<T> {
        if nodal {
            let period = 2 * (n + 1);
            let k = k.rem_euclid(period);
            if k == 0 || k == n + 1 {
                zero
            } else if k <= n {
                v[(k - 1) as usize]
            } else {
                -v[(period - k - 1) as usize]
            }
        } else {
            let period = 2 * n;
            let k = k.rem_euclid(period);
            if k < n {
                v[k as usize]
            } else {
                -v[(period - 1 - k) as usize]
            }
        }
    };
    let c = [T::of(45.0 / 60.0), T::of(-9.0 / 60.0), T::of(1.0 / 60.0)];
    let d = |k: i64| -> C<T> {
        let mut acc = zero;
        for (m, &cm) in c.iter().enumerate() {
            let m = m as i64 + 1;
            acc += (sample(k + m) - sample(k - m)) * cm;
        }
        acc / h
    };
    if nodal {
        (0..=n + 1).map(d).collect()
    } else {
        (0..n).map(d).collect()
    }
}

/// `Delta Q`, `Delta P` and their product, with `<P> = Im int conj(f) f'`
/// and `<P^2> = int |f'|^2`.
pub fn uncertainty_product<T: Real>(f: &WaveFunction<T>) -> Result<Uncertainty<T>> {
    require_normalized(f, "uncertainty_product")?;
    let grid = f.grid();
    let xs = grid.points();
    let nodal = grid.layout() == Layout::Nodal;
    let dens: Vec<T> = f.values().iter().map(|v| v.norm_sqr()).collect();
    let moment = |k: i32| -> T {
        let s: Vec<T> = xs.iter().zip(&dens).map(|(&x, &d)| x.powi(k) * d).collect();
        grid.integrate(&s, None)
    };
    let mean_q = moment(1);
    let var_q = (moment(2) - mean_q * mean_q).max(T::zero());
    let df = derivative(f);
    let (interior, ends) = if nodal {
        let last = df.len() - 1;
        (&df[1..last], Some([df[0].norm_sqr(), df[last].norm_sqr()]))
    } else {
        (&df[..], None)
    };
    let cross: Vec<T> = f.values().iter().zip(interior).map(|(v, d)| (v.conj() * d).im).collect();
    let mean_p = grid.integrate(&cross, None);
    let sq: Vec<T> = interior.iter().map(|d| d.norm_sqr()).collect();
    let p2 = grid.integrate(&sq, ends);
    let var_p = (p2 - mean_p * mean_p).max(T::zero());
    let (dq, dp) = (var_q.sqrt(), var_p.sqrt());
    Ok(Uncertainty { mean_q, mean_p, delta_q: dq, delta_p: dp, product: dq * dp })
}
