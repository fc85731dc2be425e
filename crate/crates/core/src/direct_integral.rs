//! Decomposition of functions on the line into fibers on `[0, pi]`.
//!
//! For `f` with compact support, `g_alpha(x) = sum_k e^{-ik alpha} f(x + k pi)`
//! satisfies `g_alpha(pi) = e^{i alpha} g_alpha(0)`. In the convention of
//! [`BoundaryCondition::QuasiPeriodic`] (`g(0) = e^{i beta} g(pi)`) this is
//! `beta = 2 pi - alpha`; [`FiberDecomposition::condition`] returns it. With
//! `M` equally spaced `alpha` the map is inverted exactly by
//! `f(x + k pi) = (1/M) sum_alpha e^{ik alpha} g_alpha(x)` as long as the
//! support spans at most `M` cells.

use std::ops::RangeInclusive;

use num_complex::Complex;
use rayon::prelude::*;

use crate::boundary::{BoundaryCondition, BoundaryData};
use crate::discrete::{assemble, eigensolve, DiscreteOperator, PotentialSpec};
use crate::dynamics::Propagator;
use crate::error::{ensure, Error, Result};
use crate::grid::{Grid, Layout};
use crate::interval::Interval;
use crate::scalar::{cis, wrap_angle, Real, C};
use crate::wavefunction::WaveFunction;

/// A function on the line, zero outside the cells `cells` (cell `k` is
/// `[k pi, (k+1) pi]`), sampled at `m` cell-centred points per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFunction<T> {
    cells: RangeInclusive<i64>,
    m: usize,
    values: Vec<C<T>>,
}

impl<T: Real> LineFunction<T> {
    pub fn new(cells: RangeInclusive<i64>, m: usize, values: Vec<C<T>>) -> Result<Self> {
        ensure!(!cells.is_empty() && m >= 4, Domain, "need a non-empty cell range and m >= 4");
        let k = (cells.end() - cells.start() + 1) as usize;
        ensure!(values.len() == k * m, GridMismatch, "{} samples for {k} cells of {m}", values.len());
        Ok(Self { cells, m, values })
    }

    pub fn from_fn(cells: RangeInclusive<i64>, m: usize, f: impl Fn(T) -> C<T>) -> Result<Self> {
        let k0 = *cells.start();
        let count = (cells.end() - k0 + 1).max(0) as usize;
        let h = T::PI() / T::of_usize(m);
        let values = (0..count * m)
            .map(|i| f(T::of_i64(k0) * T::PI() + (T::of_usize(i) + T::of(0.5)) * h))
            .collect();
        Self::new(cells, m, values)
    }

    /// Reinterpret a state on a cell-aligned, cell-centred grid.
    pub fn from_wave_function(wf: &WaveFunction<T>) -> Result<Self> {
        let g = wf.grid();
        let iv = g.interval();
        let k0 = (iv.a() / T::PI()).round();
        let k1 = (iv.b() / T::PI()).round();
        let tol = T::tol(1e-9);
        ensure!(
            g.layout() == Layout::CellCentered
                && (iv.a() - k0 * T::PI()).abs() <= tol
                && (iv.b() - k1 * T::PI()).abs() <= tol,
            GridMismatch,
            "line functions need a cell-centred grid with ends at multiples of pi"
        );
        let (k0, k1) = (k0.to_i64().unwrap_or(0), k1.to_i64().unwrap_or(0));
        let cells = (k1 - k0) as usize;
        ensure!(cells >= 1 && g.n().is_multiple_of(cells), GridMismatch, "samples do not split evenly into cells");
        Self::new(k0..=k1 - 1, g.n() / cells, wf.values().to_vec())
    }

    pub fn cells(&self) -> &RangeInclusive<i64> {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        (self.cells.end() - self.cells.start() + 1) as usize
    }

    pub fn points_per_cell(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[C<T>] {
        &self.values
    }

    pub fn h(&self) -> T {
        T::PI() / T::of_usize(self.m)
    }

    /// Cell-centred grid covering the window.
    pub fn grid(&self) -> Grid<T> {
        let a = T::of_i64(*self.cells.start()) * T::PI();
        let b = T::of_i64(*self.cells.end() + 1) * T::PI();
        Grid::periodic(Interval::new(a, b).expect("non-empty window"), self.values.len()).expect("valid grid")
    }

    pub fn wave_function(&self) -> WaveFunction<T> {
        WaveFunction::new(self.grid(), self.values.clone()).expect("length matches")
    }

    pub fn norm_sqr(&self) -> T {
        self.h() * self.values.iter().map(|v| v.norm_sqr()).sum::<T>()
    }

    fn cell_slice(&self, k: i64) -> Option<&[C<T>]> {
        if !self.cells.contains(&k) {
            return None;
        }
        let i = (k - self.cells.start()) as usize * self.m;
        Some(&self.values[i..i + self.m])
    }

    fn sample(&self, i: i64) -> C<T> {
        // Global sample index: point (i + 1/2) h from the origin.
        let first = self.cells.start() * self.m as i64;
        let j = i - first;
        if j < 0 || j >= self.values.len() as i64 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.values[j as usize]
        }
    }

    /// Value and derivative at `x` of the cubic through the four nearest
    /// samples (the function is zero outside its window).
    pub fn interpolate(&self, x: T) -> (C<T>, C<T>) {
        let h = self.h();
        let u = x / h - T::of(0.5);
        let i0 = u.floor();
        let t = u - i0;
        let i0 = i0.to_i64().unwrap_or(0);
        let f = [self.sample(i0 - 1), self.sample(i0), self.sample(i0 + 1), self.sample(i0 + 2)];
        let one = T::one();
        let two = T::of(2.0);
        let six = T::of(6.0);
        // Lagrange weights on nodes -1, 0, 1, 2 and their derivatives.
        let w = [
            -t * (t - one) * (t - two) / six,
            (t + one) * (t - one) * (t - two) / two,
            -(t + one) * t * (t - two) / two,
            (t + one) * t * (t - one) / six,
        ];
        let dw = [
            -(T::of(3.0) * t * t - T::of(6.0) * t + two) / six,
            (T::of(3.0) * t * t - T::of(4.0) * t - one) / two,
            -(T::of(3.0) * t * t - T::of(2.0) * t - two) / two,
            (T::of(3.0) * t * t - one) / six,
        ];
        let mut v = Complex::new(T::zero(), T::zero());
        let mut d = v;
        for k in 0..4 {
            v += f[k] * w[k];
            d += f[k] * dw[k];
        }
        (v, d / h)
    }
}

/// Fibers `g_alpha` for `alpha = 2 pi i / M`, `i = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberDecomposition<T> {
    pub alphas: Vec<T>,
    pub fibers: Vec<WaveFunction<T>>,
    /// Cells covered by the source window.
    pub source_window: RangeInclusive<i64>,
}

impl<T: Real> FiberDecomposition<T> {
    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    /// Boundary condition met by fiber `i`, in the `g(0) = e^{i beta} g(pi)`
    /// convention: `beta = 2 pi - alpha_i`.
    pub fn condition(&self, i: usize) -> BoundaryCondition<T> {
        BoundaryCondition::quasi_periodic(T::two_pi() - self.alphas[i])
    }

    /// `(1/M) sum_alpha ||g_alpha||^2`.
    pub fn mean_norm_sqr(&self) -> T {
        self.fibers.iter().map(|g| g.norm_sqr()).sum::<T>() / T::of_usize(self.m())
    }

    /// Same fibers with new samples (e.g. after evolution), keeping the
    /// alphas and window.
    pub fn with_fibers(&self, fibers: Vec<WaveFunction<T>>) -> Result<Self> {
        ensure!(fibers.len() == self.m(), Domain, "fiber count changed");
        Ok(Self { alphas: self.alphas.clone(), fibers, source_window: self.source_window.clone() })
    }
}

fn cell_grid<T: Real>(m: usize) -> Grid<T> {
    Grid::periodic(Interval::unit_cell(), m).expect("valid cell grid")
}

/// Split `f` into `M >= 2` fibers.
pub fn decompose<T: Real>(f: &LineFunction<T>, m_fibers: usize) -> Result<FiberDecomposition<T>> {
    ensure!(m_fibers >= 2, Domain, "need at least two fibers, got {m_fibers}");
    let alphas: Vec<T> = (0..m_fibers).map(|i| T::two_pi() * T::of_usize(i) / T::of_usize(m_fibers)).collect();
    let grid = cell_grid::<T>(f.m);
    let ks: Vec<i64> = f.cells.clone().collect();
    // Endpoint data from the interpolant: g(0) = sum_k e^{-ik a} f(k pi) and
    // g(pi) = sum_k e^{-ik a} f((k+1) pi).
    let edge: Vec<(C<T>, C<T>)> =
        (*f.cells.start()..=*f.cells.end() + 1).map(|k| f.interpolate(T::of_i64(k) * T::PI())).collect();
    let fibers = alphas
        .par_iter()
        .map(|&alpha| {
            let zero = Complex::new(T::zero(), T::zero());
            let mut values = vec![zero; f.m];
            let mut bd = BoundaryData { value: [zero; 2], derivative: [zero; 2], sup_value: T::zero(), sup_derivative: T::zero() };
            for (idx, &k) in ks.iter().enumerate() {
                let phase = cis(-T::of_i64(k) * alpha);
                for (v, s) in values.iter_mut().zip(f.cell_slice(k).expect("in window")) {
                    *v += *s * phase;
                }
                bd.value[0] += edge[idx].0 * phase;
                bd.derivative[0] += edge[idx].1 * phase;
                bd.value[1] += edge[idx + 1].0 * phase;
                bd.derivative[1] += edge[idx + 1].1 * phase;
            }
            let wf = WaveFunction::new(grid.clone(), values)?;
            let b = wf.boundary_data()?;
            bd.sup_value = wf.max_abs().max(bd.value[0].norm()).max(bd.value[1].norm());
            bd.sup_derivative = b.sup_derivative.max(bd.derivative[0].norm()).max(bd.derivative[1].norm());
            Ok(wf.with_boundary(bd))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberDecomposition { alphas, fibers, source_window: f.cells.clone() })
}

/// Inverse of [`decompose`] on the source window.
pub fn reconstruct<T: Real>(dec: &FiberDecomposition<T>) -> Result<LineFunction<T>> {
    reconstruct_on(dec, dec.source_window.clone())
}

/// Inverse map evaluated on `cells`, which may differ from the source window
/// (e.g. after evolution has spread the state) but must span at most `M`
/// cells: beyond that, cells `k` and `k + M` are indistinguishable.
pub fn reconstruct_on<T: Real>(dec: &FiberDecomposition<T>, cells: RangeInclusive<i64>) -> Result<LineFunction<T>> {
    let m_fibers = dec.m();
    ensure!(!cells.is_empty(), Domain, "empty cell range");
    let span = (cells.end() - cells.start() + 1) as usize;
    if span > m_fibers {
        return Err(Error::Aliasing(format!("{span} cells cannot be resolved by {m_fibers} fibers")));
    }
    let m = dec.fibers[0].grid().n();
    let inv = T::one() / T::of_usize(m_fibers);
    let values: Vec<C<T>> = cells
        .clone()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&k| {
            let phases: Vec<C<T>> = dec.alphas.iter().map(|&a| cis(T::of_i64(k) * a) * inv).collect();
            (0..m).map(move |j| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (p, g) in phases.iter().zip(&dec.fibers) {
                    acc += *p * g.values()[j];
                }
                acc
            })
        })
        .collect();
    LineFunction::new(cells, m, values)
}

/// `H_{V,alpha} = -d^2/dx^2 + V` on `[0, pi]` with `g(0) = e^{i alpha} g(pi)`,
/// `g'(0) = e^{i alpha} g'(pi)`, on a cell-centred grid of `n` points. `V`
/// must be [`PotentialSpec::Zero`] or [`PotentialSpec::PeriodicCell`].
pub fn fiber_hamiltonian<T: Real>(v: &PotentialSpec<T>, alpha: T, n: usize) -> Result<DiscreteOperator<T>> {
    ensure!(
        matches!(v, PotentialSpec::Zero | PotentialSpec::PeriodicCell(_)),
        Domain,
        "fiber Hamiltonians take a periodic cell potential"
    );
    assemble(&cell_grid(n), v, &BoundaryCondition::quasi_periodic(alpha))
}

/// Evolve every fiber for time `t` under `H_{V, 2 pi - alpha}` using its `k`
/// lowest eigenpairs on the fiber grid, fibers in parallel. Reconstructing the
/// result gives the evolution of the source under `-d^2/dx^2 + V` on the line.
pub fn evolve_fibers<T: Real>(
    dec: &FiberDecomposition<T>,
    v: &PotentialSpec<T>,
    t: T,
    k: usize,
) -> Result<FiberDecomposition<T>> {
    let fibers = dec
        .fibers
        .par_iter()
        .zip(&dec.alphas)
        .map(|(g, &alpha)| {
            let s = g.norm();
            if s == T::zero() {
                return Ok(g.clone());
            }
            let op = fiber_hamiltonian(v, T::two_pi() - alpha, g.grid().n())?;
            let prop = Propagator::spectral(eigensolve(&op, k)?, g.grid())?;
            let unit = g.scale(Complex::new(T::one() / s, T::zero()));
            Ok(prop.evolve(&unit, t)?.scale(Complex::new(s, T::zero())))
        })
        .collect::<Result<Vec<_>>>()?;
    dec.with_fibers(fibers)
}

/// `bands[j][i] = E_j(alphas[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTable<T> {
    pub alphas: Vec<T>,
    pub bands: Vec<Vec<T>>,
    /// Lower bound of the potential, used by the continuity bound.
    pub v_min: T,
}

/// Continuity of one band across the sampled alphas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandContinuity<T> {
    pub max_jump: T,
    pub bound: T,
    pub continuous: bool,
}

impl<T: Real> BandTable<T> {
    pub fn band(&self, j: usize) -> &[T] {
        &self.bands[j]
    }

    /// Adjacent-alpha jumps against `C * d_alpha`, with
    /// `C = 2 max(first-step slope, (2/pi) sqrt(E_max - V_min))`; the second
    /// term is the slope `dE/d alpha` of the free band `(2n + alpha/pi)^2`.
    pub fn continuity(&self) -> Vec<BandContinuity<T>> {
        self.bands
            .iter()
            .map(|band| {
                let mut max_jump = T::zero();
                let mut bound = T::zero();
                for i in 1..band.len() {
                    let da = self.alphas[i] - self.alphas[i - 1];
                    max_jump = max_jump.max((band[i] - band[i - 1]).abs() / da);
                }
                if band.len() >= 2 {
                    let da = self.alphas[1] - self.alphas[0];
                    let first = (band[1] - band[0]).abs() / da;
                    let e_max = band.iter().copied().fold(T::neg_infinity(), T::max);
                    let free = T::of(2.0) / T::PI() * (e_max - self.v_min).max(T::zero()).sqrt();
                    bound = T::of(2.0) * first.max(free);
                }
                BandContinuity { max_jump, bound, continuous: max_jump <= bound }
            })
            .collect()
    }

    /// `min_alpha E_{j+1} - max_alpha E_j` for each adjacent pair; positive
    /// values are gaps in the union of the bands.
    pub fn gaps(&self) -> Vec<T> {
        self.bands
            .windows(2)
            .map(|w| {
                let top = w[0].iter().copied().fold(T::neg_infinity(), T::max);
                let bottom = w[1].iter().copied().fold(T::infinity(), T::min);
                bottom - top
            })
            .collect()
    }
}

/// The `k` lowest eigenvalues of `H_{V,alpha}` for each alpha, fibers solved
/// in parallel.
pub fn band_structure<T: Real>(v: &PotentialSpec<T>, alphas: &[T], k: usize, n: usize) -> Result<BandTable<T>> {
    let per_alpha: Vec<Vec<T>> = alphas
        .par_iter()
        .map(|&a| Ok(eigensolve(&fiber_hamiltonian(v, a, n)?, k)?.eigenvalues().to_vec()))
        .collect::<Result<_>>()?;
    let bands = (0..k).map(|j| per_alpha.iter().map(|e| e[j]).collect()).collect();
    let v_min = v.sample(&cell_grid(n))?.into_iter().fold(T::infinity(), T::min);
    Ok(BandTable { alphas: alphas.to_vec(), bands, v_min })
}

/// A fiber eigenvalue equal to a given energy: `(2n + alpha/pi)^2 = E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandWitness<T> {
    pub energy: T,
    pub n: i64,
    pub alpha: T,
}

/// For each `E >= 0`, the label `n = floor(sqrt(E)/2)` and `alpha = pi (sqrt(E) - 2n)`
/// of the free fiber level hitting `E`; `None` for negative energies.
pub fn spectrum_union_check<T: Real>(energies: &[T]) -> Vec<Option<BandWitness<T>>> {
    energies
        .iter()
        .map(|&e| {
            if e < T::zero() || !e.is_finite() {
                return None;
            }
            let r = e.sqrt();
            let n = (r / T::of(2.0)).floor();
            let alpha = wrap_angle(T::PI() * (r - T::of(2.0) * n));
            let level = T::of(2.0) * n + alpha / T::PI();
            let ok = (level * level - e).abs() <= T::tol(1e-12) * e.max(T::one());
            ok.then(|| BandWitness { energy: e, n: n.to_i64().unwrap_or(0), alpha })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_cell_fibers_are_the_function() {
        let f = LineFunction::from_fn(0..=0, 32, |x: f64| Complex::new(x.sin().powi(2), 0.0)).unwrap();
        let d = decompose(&f, 4).unwrap();
        for g in &d.fibers {
            assert_eq!(g.values(), f.values());
        }
        let back = reconstruct(&decompose(&f, 2).unwrap()).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn shifted_function_picks_up_phase() {
        let f = LineFunction::from_fn(1..=1, 32, |x: f64| Complex::new((x - PI).sin().powi(2), 0.0)).unwrap();
        let d = decompose(&f, 8).unwrap();
        let g0 = LineFunction::from_fn(0..=0, 32, |x: f64| Complex::new(x.sin().powi(2), 0.0)).unwrap();
        for (a, g) in d.alphas.iter().zip(&d.fibers) {
            for (x, y) in g.values().iter().zip(g0.values()) {
                assert!((*x - *y * cis(-a)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn wide_support_aliases() {
        let f = LineFunction::from_fn(-2..=2, 16, |x: f64| Complex::new((-x * x).exp(), 0.0)).unwrap();
        let err = reconstruct(&decompose(&f, 4).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Aliasing(_)));
    }

    #[test]
    fn union_witnesses() {
        let w = spectrum_union_check(&[0.0, 5.0, -1.0]);
        assert_eq!(w[0].unwrap().n, 0);
        assert_eq!(w[0].unwrap().alpha, 0.0);
        assert_eq!(w[1].unwrap().n, 1);
        assert!((w[1].unwrap().alpha / PI - (5f64.sqrt() - 2.0)).abs() < 1e-12);
        assert!(w[2].is_none());
    }
}
