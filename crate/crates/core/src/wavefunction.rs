use num_complex::Complex;

use crate::boundary::BoundaryData;
use crate::error::{ensure, Error, Result};
use crate::grid::{Grid, Layout};
use crate::interval::Interval;
use crate::scalar::{Real, C};

/// Complex amplitudes sampled on a [`Grid`].
///
/// `normalized` is set whenever the quadrature norm is 1 within `1e-10`.
/// `generalized` marks non-normalisable states (scattering-type ground
/// states); norm-dependent operations reject them.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T> {
    grid: Grid<T>,
    values: Vec<C<T>>,
    normalized: bool,
    generalized: bool,
    boundary: Option<BoundaryData<T>>,
}

impl<T: Real> WaveFunction<T> {
    pub fn new(grid: Grid<T>, values: Vec<C<T>>) -> Result<Self> {
        ensure!(
            values.len() == grid.n(),
            GridMismatch,
            "{} samples for a grid of {} points",
            values.len(),
            grid.n()
        );
        let mut wf = Self { grid, values, normalized: false, generalized: false, boundary: None };
        wf.refresh_flag();
        Ok(wf)
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> C<T>) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        let mut wf = Self { grid, values, normalized: false, generalized: false, boundary: None };
        wf.refresh_flag();
        wf
    }

    pub fn from_real(grid: Grid<T>, f: impl Fn(T) -> T) -> Self {
        Self::from_fn(grid, |x| Complex::new(f(x), T::zero()))
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        let n = grid.n();
        Self::new(grid, vec![Complex::new(T::zero(), T::zero()); n]).expect("matching length")
    }

    /// Attach exact endpoint data; nodal quadrature then includes the
    /// endpoint terms of the trapezoid rule.
    pub fn with_boundary(mut self, data: BoundaryData<T>) -> Self {
        self.boundary = Some(data);
        self.refresh_flag();
        self
    }

    /// Mark as a generalized (non-L^2) state.
    pub fn into_generalized(mut self) -> Self {
        self.generalized = true;
        self.normalized = false;
        self
    }

    fn refresh_flag(&mut self) {
        self.normalized =
            !self.generalized && (self.norm_sqr() - T::one()).abs() <= T::tol(1e-10);
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[C<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C<T>> {
        self.values
    }

    pub fn boundary(&self) -> Option<&BoundaryData<T>> {
        self.boundary.as_ref()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    /// Quadrature of `conj(self) * other`.
    pub fn inner(&self, other: &WaveFunction<T>) -> Result<C<T>> {
        inner_product(self, other)
    }

    pub fn norm_sqr(&self) -> T {
        let dens: Vec<T> = self.values.iter().map(|v| v.norm_sqr()).collect();
        let ends = self.boundary.map(|b| [b.value[0].norm_sqr(), b.value[1].norm_sqr()]);
        self.grid.integrate(&dens, ends)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn normalize(&self) -> Result<Self> {
        ensure!(!self.generalized, Precondition, "cannot normalize a generalized (non-L^2) state");
        let n = self.norm();
        ensure!(n > T::zero() && n.is_finite(), Domain, "cannot normalize a zero or non-finite state");
        Ok(self.scale(Complex::new(T::one() / n, T::zero())))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        if let Some(b) = out.boundary.as_mut() {
            b.value = [b.value[0] * s, b.value[1] * s];
            b.derivative = [b.derivative[0] * s, b.derivative[1] * s];
            b.sup_value *= s.norm();
            b.sup_derivative *= s.norm();
        }
        out.refresh_flag();
        out
    }

    /// `self + s * other` on the samples. Endpoint data is dropped.
    pub fn axpy(&self, s: C<T>, other: &WaveFunction<T>) -> Result<Self> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b * s).collect();
        Self::new(self.grid.clone(), values)
    }

    /// L^2 distance to `other`.
    pub fn distance(&self, other: &WaveFunction<T>) -> Result<T> {
        Ok(self.axpy(Complex::new(-T::one(), T::zero()), other)?.norm())
    }

    /// Same samples on the mesh translated by `s`.
    pub fn shifted(&self, s: T) -> Self {
        Self { grid: self.grid.shifted(s), ..self.clone() }
    }

    pub fn restrict(&self, region: &Interval<T>) -> Self {
        restrict_indicator(self, region)
    }

    fn check_grid(&self, other: &WaveFunction<T>) -> Result<()> {
        ensure!(self.grid.same_as(&other.grid), GridMismatch, "wavefunctions live on different grids");
        Ok(())
    }

    /// Endpoint values and derivatives. Exact data is returned when present;
    /// otherwise one-sided second-order extrapolation from the three samples
    /// nearest each end.
    pub fn boundary_data(&self) -> Result<BoundaryData<T>> {
        if let Some(b) = self.boundary {
            return Ok(b);
        }
        let n = self.grid.n();
        ensure!(n >= 3, Domain, "extrapolation needs at least three samples");
        let h = self.grid.h();
        let v = &self.values;
        let r = |x: f64| Complex::new(T::of(x), T::zero());
        let extrapolate = |f1: C<T>, f2: C<T>, f3: C<T>| -> (C<T>, C<T>) {
            match self.grid.layout() {
                Layout::Nodal => (
                    f1 * r(3.0) - f2 * r(3.0) + f3,
                    (f1 * r(-2.5) + f2 * r(4.0) - f3 * r(1.5)) / h,
                ),
                Layout::CellCentered => (
                    (f1 * r(15.0) - f2 * r(10.0) + f3 * r(3.0)) / T::of(8.0),
                    (f1 * r(-2.0) + f2 * r(3.0) - f3) / h,
                ),
            }
        };
        let (va, da) = extrapolate(v[0], v[1], v[2]);
        let (vb, db) = extrapolate(v[n - 1], v[n - 2], v[n - 3]);
        let mut sup_d = da.norm().max(db.norm());
        for j in 1..n - 1 {
            sup_d = sup_d.max(((v[j + 1] - v[j - 1]) / (h * T::of(2.0))).norm());
        }
        Ok(BoundaryData {
            value: [va, vb],
            derivative: [da, -db],
            sup_value: self.max_abs().max(va.norm()).max(vb.norm()),
            sup_derivative: sup_d,
        })
    }
}

/// L^2 pairing `<f, g>`, conjugate-linear in `f`.
pub fn inner_product<T: Real>(f: &WaveFunction<T>, g: &WaveFunction<T>) -> Result<C<T>> {
    f.check_grid(g)?;
    let body = f
        .values
        .iter()
        .zip(&g.values)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b);
    let ends = match (f.grid.layout(), f.boundary, g.boundary) {
        (Layout::Nodal, Some(bf), Some(bg)) => {
            (bf.value[0].conj() * bg.value[0] + bf.value[1].conj() * bg.value[1]) / T::of(2.0)
        }
        _ => Complex::new(T::zero(), T::zero()),
    };
    Ok((body + ends) * f.grid.h())
}

/// `chi_G f`: samples outside the closed region are zeroed. Idempotent.
pub fn restrict_indicator<T: Real>(f: &WaveFunction<T>, region: &Interval<T>) -> WaveFunction<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let values = f
        .grid
        .points()
        .into_iter()
        .zip(&f.values)
        .map(|(x, v)| if region.contains(x) { *v } else { zero })
        .collect();
    let boundary = f.boundary.map(|mut b| {
        let ends = [f.grid.interval().a(), f.grid.interval().b()];
        for (k, x) in ends.into_iter().enumerate() {
            if !region.contains(x) {
                b.value[k] = zero;
                b.derivative[k] = zero;
            }
        }
        b
    });
    let mut out = WaveFunction {
        grid: f.grid.clone(),
        values,
        normalized: false,
        generalized: f.generalized,
        boundary,
    };
    out.refresh_flag();
    out
}

impl<T: Real> From<WaveFunction<T>> for Vec<C<T>> {
    fn from(wf: WaveFunction<T>) -> Self {
        wf.values
    }
}

/// Helper for callers that want a uniform error when a state must be normalized.
pub(crate) fn require_normalized<T: Real>(f: &WaveFunction<T>, what: &str) -> Result<()> {
    if f.is_generalized() {
        return Err(Error::Precondition(format!("{what}: generalized state has no L^2 norm")));
    }
    let n = f.norm_sqr();
    ensure!(
        (n - T::one()).abs() <= T::tol(1e-8),
        Precondition,
        "{what}: state must be normalized (norm^2 = {n})"
    );
    Ok(())
}
