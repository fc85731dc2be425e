use crate::error::{ensure, Result};
use crate::interval::Interval;
use crate::scalar::Real;

/// Placement of the `n` sample points inside the interval. Neither layout
/// samples the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `x_j = a + j h`, `j = 1..=n`, `h = (b - a) / (n + 1)`. Boundary values
    /// are implicit (zero for Dirichlet data) and enter through the stencil.
    Nodal,
    /// `x_j = a + (j - 1/2) h`, `j = 1..=n`, `h = (b - a) / n`. The ring
    /// `x_n -> x_1` has the same spacing `h` across the identified endpoints,
    /// which is what quasi-periodic stencils need.
    CellCentered,
}

/// Uniform mesh on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    interval: Interval<T>,
    n: usize,
    h: T,
    layout: Layout,
}

impl<T: Real> Grid<T> {
    /// Nodal grid with `n` interior points.
    pub fn new(interval: Interval<T>, n: usize) -> Result<Self> {
        Self::with_layout(interval, n, Layout::Nodal)
    }

    /// Cell-centred grid with `n` points, for quasi-periodic problems.
    pub fn periodic(interval: Interval<T>, n: usize) -> Result<Self> {
        Self::with_layout(interval, n, Layout::CellCentered)
    }

    pub fn with_layout(interval: Interval<T>, n: usize, layout: Layout) -> Result<Self> {
        ensure!(!interval.is_half_line(), Domain, "grids need a finite interval");
        ensure!(n > 0, Domain, "grid needs at least one point");
        let h = match layout {
            Layout::Nodal => interval.length() / T::of_usize(n + 1),
            Layout::CellCentered => interval.length() / T::of_usize(n),
        };
        ensure!(h > T::zero(), Domain, "non-positive spacing");
        Ok(Self { interval, n, h, layout })
    }

    pub fn interval(&self) -> &Interval<T> {
        &self.interval
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Position of sample `j` (zero based).
    pub fn x(&self, j: usize) -> T {
        let offset = match self.layout {
            Layout::Nodal => T::of_usize(j + 1),
            Layout::CellCentered => T::of_usize(j) + T::of(0.5),
        };
        self.interval.a() + offset * self.h
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Same mesh, translated by `s`.
    pub fn shifted(&self, s: T) -> Self {
        Self { interval: self.interval.shifted(s), ..self.clone() }
    }

    /// Exact structural equality of two meshes.
    pub fn same_as(&self, other: &Grid<T>) -> bool {
        self.n == other.n
            && self.layout == other.layout
            && self.interval.a() == other.interval.a()
            && self.interval.b() == other.interval.b()
    }

    /// Composite rule on the samples: trapezoid with zero endpoint values for
    /// nodal grids (plus the optional endpoint terms), periodic trapezoid
    /// (midpoint) for cell-centred grids.
    pub fn integrate(&self, samples: &[T], endpoints: Option<[T; 2]>) -> T {
        debug_assert_eq!(samples.len(), self.n);
        let body: T = samples.iter().copied().sum();
        let ends = match (self.layout, endpoints) {
            (Layout::Nodal, Some([fa, fb])) => (fa + fb) / T::of(2.0),
            _ => T::zero(),
        };
        self.h * (body + ends)
    }

    /// Integral over `region` of the function the quadrature represents:
    /// the piecewise-linear interpolant through the samples and the endpoint
    /// values (zero when absent) on nodal grids, one constant per cell on
    /// cell-centred grids. Over the whole interval this equals
    /// [`Grid::integrate`].
    pub fn integrate_over(&self, samples: &[T], endpoints: Option<[T; 2]>, region: &Interval<T>) -> T {
        debug_assert_eq!(samples.len(), self.n);
        let (ra, rb) = (region.a(), region.b());
        let overlap = |lo: T, hi: T| -> Option<(T, T)> {
            let u = lo.max(ra);
            let v = if region.is_half_line() { hi } else { hi.min(rb) };
            (v > u).then_some((u, v))
        };
        let mut total = T::zero();
        match self.layout {
            Layout::Nodal => {
                let [fa, fb] = endpoints.unwrap_or([T::zero(); 2]);
                let knot = |k: usize| -> (T, T) {
                    if k == 0 {
                        (self.interval.a(), fa)
                    } else if k == self.n + 1 {
                        (self.interval.b(), fb)
                    } else {
                        (self.x(k - 1), samples[k - 1])
                    }
                };
                for k in 0..=self.n {
                    let ((x0, y0), (x1, y1)) = (knot(k), knot(k + 1));
                    if let Some((u, v)) = overlap(x0, x1) {
                        let at = |x: T| y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                        total += (v - u) * (at(u) + at(v)) / T::of(2.0);
                    }
                }
            }
            Layout::CellCentered => {
                let half = self.h / T::of(2.0);
                for (j, &y) in samples.iter().enumerate() {
                    let x = self.x(j);
                    if let Some((u, v)) = overlap(x - half, x + half) {
                        total += (v - u) * y;
                    }
                }
            }
        }
        total
    }
}
