//! Unitary evolution `psi(t) = exp(-i H t) psi(0)`, confinement diagnostics,
//! and the map from a generalized ground state to its Hamiltonian.

use std::ops::RangeInclusive;

use num_complex::Complex;
use rayon::prelude::*;

use crate::closed_form::{quasi_periodic_eigenbasis, AnalyticState, MultitrapParams};
use crate::discrete::{BandForm, BandLu, DiscreteOperator, PotentialSpec};
use crate::error::{ensure, Error, Result};
use crate::grid::{Grid, Layout};
use crate::interval::Interval;
use crate::scalar::{cis, Real, C};
use crate::spectrum::{Eigenfunction, Spectrum, SpectrumKind};
use crate::wavefunction::{inner_product, require_normalized, restrict_indicator, WaveFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method<T> {
    /// `sum_n e^{-i E_n t} <phi_n, psi> phi_n` over an orthonormal basis.
    SpectralSum,
    /// Cayley steps `(1 + i H dt/2) psi_{k+1} = (1 - i H dt/2) psi_k`. The
    /// step is shortened to `t / ceil(t / dt)` so that `t` is hit exactly.
    CrankNicolson { dt: T },
}

#[derive(Debug, Clone)]
enum Engine<T> {
    Spectral { energies: Vec<T>, states: Vec<WaveFunction<T>> },
    Cayley { op: DiscreteOperator<T>, form: BandForm<T>, dt: T },
}

/// Time evolution on a fixed grid.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    grid: Grid<T>,
    basis: Option<Spectrum<T>>,
    method: Method<T>,
    engine: Engine<T>,
}

impl<T: Real> Propagator<T> {
    /// Spectral propagator over the eigenfunctions of `basis`, sampled on
    /// `grid`. The sampled set must be orthonormal in the grid quadrature.
    pub fn spectral(basis: Spectrum<T>, grid: &Grid<T>) -> Result<Self> {
        let states = basis.sampled(grid)?;
        let analytic = basis
            .eigenfunctions()
            .is_some_and(|ef| ef.iter().any(|e| matches!(e, Eigenfunction::Analytic(_))));
        if analytic {
            let d = orthonormality_defect(&states)?;
            ensure!(
                d <= T::tol(1e-8),
                Precondition,
                "basis is not orthonormal on this grid (defect {d:e})"
            );
        }
        Ok(Self {
            grid: grid.clone(),
            method: Method::SpectralSum,
            engine: Engine::Spectral { energies: basis.eigenvalues().to_vec(), states },
            basis: Some(basis),
        })
    }

    pub fn crank_nicolson(op: DiscreteOperator<T>, dt: T) -> Result<Self> {
        ensure!(dt > T::zero() && dt.is_finite(), Domain, "time step must be positive");
        let form = BandForm::new(&op);
        Ok(Self {
            grid: op.grid().clone(),
            basis: None,
            method: Method::CrankNicolson { dt },
            engine: Engine::Cayley { op, form, dt },
        })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn method(&self) -> Method<T> {
        self.method
    }

    pub fn basis(&self) -> Option<&Spectrum<T>> {
        self.basis.as_ref()
    }

    /// `exp(-i H t) psi0`.
    pub fn evolve(&self, psi0: &WaveFunction<T>, t: T) -> Result<WaveFunction<T>> {
        Ok(self.evolve_series(psi0, &[t])?.pop().expect("one time requested"))
    }

    /// States at each of the ascending `times`. Crank-Nicolson continues from
    /// the previous time instead of restarting.
    pub fn evolve_series(&self, psi0: &WaveFunction<T>, times: &[T]) -> Result<Vec<WaveFunction<T>>> {
        ensure!(psi0.grid().same_as(&self.grid), GridMismatch, "initial state lives on another grid");
        require_normalized(psi0, "evolve")?;
        ensure!(
            times.iter().all(|t| t.is_finite() && *t >= T::zero()),
            Domain,
            "evolution times must be finite and non-negative"
        );
        match &self.engine {
            Engine::Spectral { energies, states } => {
                let coeffs: Vec<C<T>> =
                    states.par_iter().map(|s| inner_product(s, psi0)).collect::<Result<_>>()?;
                times.iter().map(|&t| spectral_sum(&self.grid, energies, states, &coeffs, t)).collect()
            }
            Engine::Cayley { op, form, dt } => {
                ensure!(
                    times.windows(2).all(|w| w[0] <= w[1]),
                    Domain,
                    "Crank-Nicolson times must be ascending"
                );
                let mut out = Vec::with_capacity(times.len());
                let mut psi: Vec<C<T>> = psi0.values().to_vec();
                let mut now = T::zero();
                let norm0 = psi0.norm();
                for &t in times {
                    let span = t - now;
                    if span > T::zero() {
                        psi = cayley_steps(op, form, *dt, span, psi)?;
                    }
                    now = t;
                    let wf = WaveFunction::new(self.grid.clone(), psi.clone())?;
                    let drift = (wf.norm() - norm0).abs();
                    ensure!(drift <= T::tol(1e-8), Numerical, "Crank-Nicolson norm drift {drift:e}");
                    out.push(wf);
                }
                Ok(out)
            }
        }
    }
}

fn orthonormality_defect<T: Real>(states: &[WaveFunction<T>]) -> Result<T> {
    let rows: Vec<T> = (0..states.len())
        .into_par_iter()
        .map(|i| {
            let mut worst = T::zero();
            for j in i..states.len() {
                let ip = inner_product(&states[i], &states[j])?;
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((ip - Complex::new(target, T::zero())).norm());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(T::zero(), T::max))
}

fn spectral_sum<T: Real>(
    grid: &Grid<T>,
    energies: &[T],
    states: &[WaveFunction<T>],
    coeffs: &[C<T>],
    t: T,
) -> Result<WaveFunction<T>> {
    let weights: Vec<C<T>> = energies.iter().zip(coeffs).map(|(&e, &c)| cis(-e * t) * c).collect();
    let values: Vec<C<T>> = (0..grid.n())
        .into_par_iter()
        .map(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (w, s) in weights.iter().zip(states) {
                acc += *w * s.values()[j];
            }
            acc
        })
        .collect();
    WaveFunction::new(grid.clone(), values)
}

fn cayley_steps<T: Real>(
    op: &DiscreteOperator<T>,
    form: &BandForm<T>,
    dt: T,
    span: T,
    mut psi: Vec<C<T>>,
) -> Result<Vec<C<T>>> {
    let steps = (span / dt - T::of(1e-9)).ceil().max(T::one());
    let h = span / steps;
    let steps = steps.to_usize().ok_or_else(|| Error::Domain("too many time steps".into()))?;
    let half = Complex::new(T::zero(), h / T::of(2.0));
    let lu = BandLu::factor(form, Complex::new(T::one(), T::zero()), half, true)?;
    for _ in 0..steps {
        let a = op.apply(&psi);
        let rhs: Vec<C<T>> = psi.iter().zip(&a).map(|(p, ap)| *p - half * *ap).collect();
        psi = lu.solve(&rhs);
    }
    Ok(psi)
}

/// Probability inside and outside a cell over time.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport<T> {
    pub times: Vec<T>,
    pub inside_mass: Vec<T>,
    pub leaked_mass: Vec<T>,
}

impl<T: Real> LeakageReport<T> {
    pub fn max_leaked(&self) -> T {
        self.leaked_mass.iter().copied().fold(T::zero(), T::max)
    }
}

/// Track how much of `psi0`, initially inside the closed `cell`, is found
/// outside it at each of `times`.
pub fn leakage<T: Real>(
    prop: &Propagator<T>,
    psi0: &WaveFunction<T>,
    cell: &Interval<T>,
    times: &[T],
) -> Result<LeakageReport<T>> {
    let initial = complement(psi0, cell)?.norm_sqr();
    ensure!(
        initial <= T::tol(1e-12),
        Precondition,
        "initial state has mass {initial:e} outside the cell"
    );
    let states = prop.evolve_series(psi0, times)?;
    let mut inside_mass = Vec::with_capacity(times.len());
    let mut leaked_mass = Vec::with_capacity(times.len());
    for s in &states {
        inside_mass.push(restrict_indicator(s, cell).norm_sqr());
        leaked_mass.push(complement(s, cell)?.norm_sqr());
    }
    Ok(LeakageReport { times: times.to_vec(), inside_mass, leaked_mass })
}

fn complement<T: Real>(f: &WaveFunction<T>, cell: &Interval<T>) -> Result<WaveFunction<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let values = f
        .grid()
        .points()
        .into_iter()
        .zip(f.values())
        .map(|(x, v)| if cell.contains(x) { zero } else { *v })
        .collect();
    WaveFunction::new(f.grid().clone(), values)
}

/// `H_q = -d^2/dx^2 - q^2` restricted to a run of consecutive traps, built
/// as the direct sum of per-trap Dirichlet problems.
#[derive(Debug, Clone)]
pub struct MultitrapSystem<T> {
    params: MultitrapParams<T>,
    cells: RangeInclusive<i64>,
    grid: Grid<T>,
    propagator: Propagator<T>,
}

impl<T: Real> MultitrapSystem<T> {
    /// Traps `cells` (trap `c` is `(c pi/q, (c+1) pi/q)`), `m` interior
    /// points per trap. The nodes `c pi/q` are grid points, and every basis
    /// state vanishes there, so no probability can cross them.
    pub fn new(params: MultitrapParams<T>, cells: RangeInclusive<i64>, m: usize) -> Result<Self> {
        ensure!(!cells.is_empty(), Domain, "no traps selected");
        ensure!(m >= 1, Domain, "each trap needs at least one interior point");
        let (c0, c1) = (*cells.start(), *cells.end());
        let w = params.cell_width();
        let count = (c1 - c0 + 1) as usize;
        let a = T::of_i64(c0) * w;
        let b = T::of_i64(c1 + 1) * w;
        let grid = Grid::new(Interval::new(a, b)?, count * (m + 1) - 1)?;
        let q = params.q();
        let norm = (T::of(2.0) * q / T::PI()).sqrt();
        let zero = Complex::new(T::zero(), T::zero());
        let mut modes: Vec<(T, i64, WaveFunction<T>)> = Vec::with_capacity(count * m);
        for cell in 0..count {
            let start = cell * (m + 1);
            let left = a + T::of_usize(cell) * w;
            for r in 1..=m {
                let k = T::of_usize(r) * q;
                let mut values = vec![zero; grid.n()];
                for s in 0..m {
                    let x = grid.x(start + s);
                    values[start + s] = Complex::new(norm * (k * (x - left)).sin(), T::zero());
                }
                let label = (c0 + cell as i64) * m as i64 + (r as i64 - 1);
                modes.push((k * k - q * q, label, WaveFunction::new(grid.clone(), values)?));
            }
        }
        modes.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite").then(x.1.cmp(&y.1)));
        let labels = modes.iter().map(|m| m.1).collect();
        let energies = modes.iter().map(|m| m.0).collect();
        let states = modes.into_iter().map(|m| Eigenfunction::Sampled(m.2)).collect();
        let basis = Spectrum::new(SpectrumKind::Hamiltonian, labels, energies, Some(states))?;
        let propagator = Propagator::spectral(basis, &grid)?;
        Ok(Self { params, cells, grid, propagator })
    }

    pub fn params(&self) -> &MultitrapParams<T> {
        &self.params
    }

    pub fn cells(&self) -> &RangeInclusive<i64> {
        &self.cells
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn propagator(&self) -> &Propagator<T> {
        &self.propagator
    }

    /// Closed interval of trap `c`.
    pub fn cell(&self, c: i64) -> Result<Interval<T>> {
        ensure!(self.cells.contains(&c), Domain, "trap {c} is not part of this system");
        let w = self.params.cell_width();
        Interval::new(T::of_i64(c) * w, T::of_i64(c + 1) * w)
    }
}

/// Comparison of the infinite-well and quasi-periodic evolutions of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport<T> {
    pub distance: T,
    pub norm_dirichlet: T,
    pub norm_alpha: T,
}

/// `|| e^{-i H_{-1} t} psi0 - e^{-i H_alpha t} psi0 ||` with both evolutions
/// spectral. `psi0` must live on a cell-centred grid of `[0, pi]`, where both
/// the sine family and `n` consecutive plane waves are complete orthogonal
/// sets.
pub fn extension_divergence<T: Real>(psi0: &WaveFunction<T>, alpha: T, t: T) -> Result<DivergenceReport<T>> {
    let grid = psi0.grid();
    let iv = grid.interval();
    ensure!(
        grid.layout() == Layout::CellCentered
            && iv.a().abs() <= T::tol(1e-12)
            && (iv.b() - T::PI()).abs() <= T::tol(1e-12),
        Precondition,
        "extension_divergence needs a state on a cell-centred grid of [0, pi]"
    );
    let n = grid.n();
    let mut energies = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for k in 1..=n {
        let wf = AnalyticState::WellMode { n: k - 1 }.sample(grid);
        let wf = WaveFunction::new(grid.clone(), wf.into_values())?.normalize()?;
        energies.push(T::of_usize(k * k));
        states.push(Eigenfunction::Sampled(wf));
    }
    let well = Spectrum::new(SpectrumKind::Hamiltonian, (0..n as i64).collect(), energies, Some(states))?;
    let dirichlet = Propagator::spectral(well, grid)?.evolve(psi0, t)?;
    let quasi = Propagator::spectral(quasi_periodic_eigenbasis(alpha, n), grid)?.evolve(psi0, t)?;
    Ok(DivergenceReport {
        distance: dirichlet.distance(&quasi)?,
        norm_dirichlet: dirichlet.norm(),
        norm_alpha: quasi.norm(),
    })
}

/// Points within this many samples of each candidate enter the exponent fit.
const FIT_WINDOW: usize = 4;
/// Slack on the fitted vanishing exponent.
const FIT_TOLERANCE: f64 = 0.1;

/// Candidate zeros of real samples: (near-)zero samples, sign changes
/// (linear root), and small local minima of `|phi|` (parabolic vertex).
fn zero_candidates<T: Real>(xs: &[T], phi: &[T]) -> Vec<(T, usize)> {
    let n = phi.len();
    let max = phi.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tiny = T::tol(1e-12) * max;
    let is_zero = |j: usize| phi[j].abs() <= tiny;
    let mut out = Vec::new();
    for j in 0..n {
        if is_zero(j) {
            out.push((xs[j], j));
            continue;
        }
        if j + 1 < n && !is_zero(j + 1) && phi[j] * phi[j + 1] < T::zero() {
            let x0 = xs[j] - phi[j] * (xs[j + 1] - xs[j]) / (phi[j + 1] - phi[j]);
            out.push((x0, j));
        }
        if j > 0 && j + 1 < n {
            let (a, b, c) = (phi[j - 1].abs(), phi[j].abs(), phi[j + 1].abs());
            let same_sign = phi[j - 1] * phi[j] > T::zero() && phi[j] * phi[j + 1] > T::zero();
            // `b <= c` admits a minimum shared by two equal samples.
            if same_sign && b < a && b <= c {
                let h = xs[j + 1] - xs[j];
                let curv = a - T::of(2.0) * b + c;
                let x0 = xs[j] + h * (a - c) / (T::of(2.0) * curv);
                out.push((x0, j));
            }
        }
    }
    out
}

/// Least-squares slope of `log|phi|` against `log|x - x0|` over the
/// `FIT_WINDOW` samples nearest `x0` on each side.
fn vanishing_exponent<T: Real>(xs: &[T], phi: &[T], x0: T, j: usize) -> Option<T> {
    let n = phi.len();
    let lo = j.saturating_sub(FIT_WINDOW + 1);
    let hi = (j + FIT_WINDOW + 2).min(n);
    let mut left: Vec<usize> = (lo..hi).filter(|&i| xs[i] < x0).collect();
    let mut right: Vec<usize> = (lo..hi).filter(|&i| xs[i] > x0).collect();
    left.sort_by(|&a, &b| (x0 - xs[a]).partial_cmp(&(x0 - xs[b])).expect("finite"));
    right.sort_by(|&a, &b| (xs[a] - x0).partial_cmp(&(xs[b] - x0)).expect("finite"));
    let h = if n > 1 { (xs[1] - xs[0]).abs() } else { T::one() };
    let pts: Vec<(T, T)> = left
        .into_iter()
        .take(FIT_WINDOW)
        .chain(right.into_iter().take(FIT_WINDOW))
        .filter(|&i| phi[i] != T::zero() && (xs[i] - x0).abs() > T::tol(1e-9) * h)
        .map(|i| ((xs[i] - x0).abs().ln(), phi[i].abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = T::of_usize(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / m;
    let my = pts.iter().map(|p| p.1).sum::<T>() / m;
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= T::zero() {
        return None;
    }
    Some(sxy / sxx)
}

fn real_samples<T: Real>(phi: &WaveFunction<T>) -> Result<Vec<T>> {
    let scale = phi.max_abs();
    ensure!(scale > T::zero(), Domain, "the ground state vanishes identically");
    ensure!(
        phi.values().iter().all(|v| v.im.abs() <= T::tol(1e-12) * scale),
        Domain,
        "ground states must be real valued"
    );
    Ok(phi.values().iter().map(|v| v.re).collect())
}

/// Zeros `x0` of `phi` with local vanishing exponent `beta >= threshold`
/// (less the fit tolerance), i.e. points where `phi (x - x0)^{-threshold}`
/// stays bounded: impenetrable barriers.
pub fn detect_barriers<T: Real>(phi: &WaveFunction<T>, threshold_exponent: T) -> Result<Vec<T>> {
    let values = real_samples(phi)?;
    let xs = phi.grid().points();
    let mut out: Vec<T> = Vec::new();
    for (x0, j) in zero_candidates(&xs, &values) {
        if let Some(beta) = vanishing_exponent(&xs, &values, x0, j) {
            if beta >= threshold_exponent - T::of(FIT_TOLERANCE) {
                out.push(x0);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out.dedup_by(|a, b| (*a - *b).abs() <= phi.grid().h() / T::of(2.0));
    Ok(out)
}

/// [`detect_barriers`] with the default exponent `1/2`.
pub fn detect_barriers_default<T: Real>(phi: &WaveFunction<T>) -> Result<Vec<T>> {
    detect_barriers(phi, T::of(0.5))
}

/// How `phi''` is obtained.
pub enum Curvature<'a, T> {
    /// Closed-form second derivative.
    Analytic(&'a dyn Fn(T) -> T),
    /// Central second difference (one-sided at the ends).
    FiniteDifference,
}

/// Potential `V = phi'' / phi` of the Hamiltonian with zero-energy ground
/// state `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedPotential<T> {
    /// Custom samples; masked points are filled by linear interpolation.
    pub potential: PotentialSpec<T>,
    /// `true` where `phi` is too close to a zero for `V` to be evaluated.
    pub masked: Vec<bool>,
    /// `max |-phi'' + V phi| / max |phi''|` over unmasked points.
    pub residual: T,
}

impl<T: Real> ReconstructedPotential<T> {
    pub fn values(&self) -> &[T] {
        match &self.potential {
            PotentialSpec::Custom(v) => v,
            _ => unreachable!("always custom"),
        }
    }
}

/// The Hamiltonian `-d^2/dx^2 + V` that annihilates `phi`. Points within
/// `2h` of a zero of `phi` are masked.
pub fn hamiltonian_from_ground_state<T: Real>(
    phi: &WaveFunction<T>,
    curvature: Curvature<'_, T>,
) -> Result<ReconstructedPotential<T>> {
    let values = real_samples(phi)?;
    let grid = phi.grid();
    let xs = grid.points();
    let n = xs.len();
    let h = grid.h();
    let zeros: Vec<T> = zero_candidates(&xs, &values)
        .into_iter()
        .filter(|&(x0, j)| {
            // Only genuine zeros, not minima of |phi| away from zero.
            values[j].abs() <= T::tol(1e-12) * phi.max_abs()
                || (j + 1 < n && values[j] * values[j + 1] < T::zero() && (x0 - xs[j]).abs() <= h)
        })
        .map(|c| c.0)
        .collect();
    let reach = T::of(2.0) * h * (T::one() + T::tol(1e-9));
    let masked: Vec<bool> = xs.iter().map(|&x| zeros.iter().any(|&z| (x - z).abs() <= reach)).collect();
    ensure!(masked.iter().any(|m| !m), Domain, "the ground state leaves no point to evaluate V on");
    let second: Vec<T> = match curvature {
        Curvature::Analytic(f) => xs.iter().map(|&x| f(x)).collect(),
        Curvature::FiniteDifference => {
            ensure!(n >= 4, Domain, "finite differences need at least four samples");
            let h2 = h * h;
            (0..n)
                .map(|j| {
                    if j == 0 {
                        (T::of(2.0) * values[0] - T::of(5.0) * values[1] + T::of(4.0) * values[2] - values[3]) / h2
                    } else if j == n - 1 {
                        (T::of(2.0) * values[n - 1] - T::of(5.0) * values[n - 2] + T::of(4.0) * values[n - 3]
                            - values[n - 4])
                            / h2
                    } else {
                        (values[j - 1] - T::of(2.0) * values[j] + values[j + 1]) / h2
                    }
                })
                .collect()
        }
    };
    let mut v: Vec<Option<T>> =
        (0..n).map(|j| if masked[j] { None } else { Some(second[j] / values[j]) }).collect();
    let mut residual = T::zero();
    let scale = (0..n).filter(|&j| !masked[j]).fold(T::zero(), |m, j| m.max(second[j].abs()));
    for j in 0..n {
        if let Some(vj) = v[j] {
            residual = residual.max((-second[j] + vj * values[j]).abs());
        }
    }
    let residual = if scale > T::zero() { residual / scale } else { residual };
    fill_masked(&xs, &mut v);
    let filled = v.into_iter().map(|x| x.expect("filled")).collect();
    Ok(ReconstructedPotential { potential: PotentialSpec::Custom(filled), masked, residual })
}

fn fill_masked<T: Real>(xs: &[T], v: &mut [Option<T>]) {
    let known: Vec<usize> = (0..v.len()).filter(|&j| v[j].is_some()).collect();
    for j in 0..v.len() {
        if v[j].is_some() {
            continue;
        }
        let left = known.iter().rev().find(|&&k| k < j).copied();
        let right = known.iter().find(|&&k| k > j).copied();
        v[j] = match (left, right) {
            (Some(l), Some(r)) => {
                let w = (xs[j] - xs[l]) / (xs[r] - xs[l]);
                Some(v[l].unwrap() * (T::one() - w) + v[r].unwrap() * w)
            }
            (Some(l), None) => v[l],
            (None, Some(r)) => v[r],
            (None, None) => None,
        };
    }
}
