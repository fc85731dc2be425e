use num_complex::Complex;

use super::laguerre::{laguerre, laguerre_dy, laguerre_dyy};
use crate::boundary::BoundaryData;
use crate::grid::Grid;
use crate::interval::Interval;
use crate::scalar::{cis, re, Real, C};
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Positive,
    Negative,
}

/// Closed-form states with analytic first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticState<T> {
    /// `sqrt(2/pi) sin((n+1) x)` on `[0, pi]`, zero outside.
    WellMode { n: usize },
    /// `e_n^alpha(x) = pi^{-1/2} exp(i (2n + alpha/pi) x)` on `[0, pi]`.
    PlaneWave { n: i64, alpha: T },
    /// Calogero eigenfunction `x^{order + 1/2} e^{-x^2/2} L_n^{order}(x^2)` on one
    /// half-line (mirrored for [`HalfLine::Negative`]), unnormalized.
    Calogero { n: usize, order: T, side: HalfLine },
    /// `x^n`, the generalized ground state of the centrifugal barrier.
    Power { n: u32 },
    /// `sin(q x)`, the generalized ground state of the multitrap Hamiltonian.
    Sine { q: T },
    /// `coeff * exp(exponent * x)` on `[0, pi]`.
    Exponential { coeff: T, exponent: C<T> },
}

impl<T: Real> AnalyticState<T> {
    pub fn is_generalized(&self) -> bool {
        matches!(self, Self::Power { .. } | Self::Sine { .. })
    }

    /// Closed support, `None` for the whole line.
    pub fn support(&self) -> Option<Interval<T>> {
        match self {
            Self::WellMode { .. } | Self::PlaneWave { .. } | Self::Exponential { .. } => {
                Some(Interval::unit_cell())
            }
            Self::Calogero { side: HalfLine::Positive, .. } => Interval::half_line(T::zero()).ok(),
            _ => None,
        }
    }

    /// Value, first and second derivative at `x`.
    pub fn jet(&self, x: T) -> [C<T>; 3] {
        let zero = re(T::zero());
        let pi = T::PI();
        let in_cell = x >= T::zero() && x <= pi;
        match *self {
            Self::WellMode { n } => {
                if !in_cell {
                    return [zero; 3];
                }
                let k = T::of_usize(n + 1);
                let a = (T::of(2.0) / pi).sqrt();
                let (s, c) = (k * x).sin_cos();
                [re(a * s), re(a * k * c), re(-a * k * k * s)]
            }
            Self::PlaneWave { n, alpha } => {
                if !in_cell {
                    return [zero; 3];
                }
                let k = T::of_i64(2 * n) + alpha / pi;
                let v = cis(k * x) / pi.sqrt();
                let ik = Complex::new(T::zero(), k);
                [v, v * ik, v * ik * ik]
            }
            Self::Exponential { coeff, exponent } => {
                if !in_cell {
                    return [zero; 3];
                }
                let v = (exponent * x).exp() * coeff;
                [v, v * exponent, v * exponent * exponent]
            }
            Self::Power { n } => {
                let nf = T::from_u32(n).unwrap();
                let d1 = if n >= 1 { nf * x.powi(n as i32 - 1) } else { T::zero() };
                let d2 = if n >= 2 { nf * (nf - T::one()) * x.powi(n as i32 - 2) } else { T::zero() };
                [re(x.powi(n as i32)), re(d1), re(d2)]
            }
            Self::Sine { q } => {
                let (s, c) = (q * x).sin_cos();
                [re(s), re(q * c), re(-q * q * s)]
            }
            Self::Calogero { n, order, side } => {
                let (y, sign) = match side {
                    HalfLine::Positive => (x, T::one()),
                    HalfLine::Negative => (-x, -T::one()),
                };
                if y <= T::zero() {
                    return [zero; 3];
                }
                let [f, d1, d2] = calogero_jet(n, order, y);
                [re(f), re(sign * d1), re(d2)]
            }
        }
    }

    pub fn value(&self, x: T) -> C<T> {
        self.jet(x)[0]
    }

    pub fn derivative(&self, x: T) -> C<T> {
        self.jet(x)[1]
    }

    pub fn second_derivative(&self, x: T) -> C<T> {
        self.jet(x)[2]
    }

    /// Exact endpoint data on `interval`, sup norms taken over `samples`.
    pub fn boundary_data(&self, interval: &Interval<T>, samples: &[T]) -> BoundaryData<T> {
        let [va, da, _] = self.jet(interval.a());
        let [vb, db, _] = self.jet(interval.b());
        let mut sv = va.norm().max(vb.norm());
        let mut sd = da.norm().max(db.norm());
        for &x in samples {
            let [v, d, _] = self.jet(x);
            sv = sv.max(v.norm());
            sd = sd.max(d.norm());
        }
        BoundaryData { value: [va, vb], derivative: [da, db], sup_value: sv, sup_derivative: sd }
    }

    /// Samples on `grid`, carrying exact endpoint data.
    pub fn sample(&self, grid: &Grid<T>) -> WaveFunction<T> {
        let pts = grid.points();
        let values = pts.iter().map(|&x| self.value(x)).collect();
        let bd = self.boundary_data(grid.interval(), &pts);
        let wf = WaveFunction::new(grid.clone(), values).expect("length matches grid");
        let wf = wf.with_boundary(bd);
        if self.is_generalized() {
            wf.into_generalized()
        } else {
            wf
        }
    }
}

/// `f = x^a e^{-x^2/2} P(x)` with `a = order + 1/2` and `P(x) = L_n(x^2)`.
fn calogero_jet<T: Real>(n: usize, order: T, x: T) -> [T; 3] {
    let a = order + T::of(0.5);
    let y = x * x;
    let g = x.powf(a) * (-y / T::of(2.0)).exp();
    let u = a / x - x;
    let g1 = g * u;
    let g2 = g * (u * u - a / y - T::one());
    let p = laguerre(n, order, y);
    let p1 = T::of(2.0) * x * laguerre_dy(n, order, y);
    let p2 = T::of(2.0) * laguerre_dy(n, order, y) + T::of(4.0) * y * laguerre_dyy(n, order, y);
    [g * p, g1 * p + g * p1, g2 * p + T::of(2.0) * g1 * p1 + g * p2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(s: AnalyticState<f64>, x: f64) {
        let eps = 1e-4;
        let [v, d1, d2] = s.jet(x);
        let (vp, vm) = (s.value(x + eps), s.value(x - eps));
        let fd1 = (vp - vm) / (2.0 * eps);
        let fd2 = (vp - v * 2.0 + vm) / (eps * eps);
        let scale = 1.0 + v.norm() + d1.norm() + d2.norm();
        assert!((d1 - fd1).norm() < 1e-6 * scale, "{s:?} d1 at {x}");
        assert!((d2 - fd2).norm() < 1e-4 * scale, "{s:?} d2 at {x}");
    }

    #[test]
    fn derivatives_agree_with_finite_differences() {
        fd_check(AnalyticState::WellMode { n: 3 }, 0.7);
        fd_check(AnalyticState::PlaneWave { n: -2, alpha: 1.1 }, 2.0);
        fd_check(AnalyticState::Power { n: 3 }, 1.3);
        fd_check(AnalyticState::Sine { q: 2.5 }, 0.4);
        fd_check(AnalyticState::Exponential { coeff: 0.3, exponent: Complex::new(1.0, -1.0) }, 1.0);
        for n in 0..4 {
            fd_check(AnalyticState::Calogero { n, order: 1.5, side: HalfLine::Positive }, 1.7);
            fd_check(AnalyticState::Calogero { n, order: 0.5, side: HalfLine::Negative }, -0.9);
        }
    }

    #[test]
    fn mirror_copy_lives_on_negative_axis() {
        let p = AnalyticState::Calogero { n: 1, order: 1.5, side: HalfLine::Positive };
        let m = AnalyticState::Calogero { n: 1, order: 1.5, side: HalfLine::Negative };
        assert_eq!(p.value(-1.0).norm(), 0.0);
        assert_eq!(m.value(1.0).norm(), 0.0);
        assert!((p.value(1.2) - m.value(-1.2)).norm() < 1e-15);
    }
}
