//! Exact spectra and eigenfunctions of the solvable models: the
//! quasi-periodic momentum and kinetic families on `[0, pi]`, the infinite
//! well, the Calogero problem and the generalized ground states of the
//! centrifugal and multitrap Hamiltonians. These serve as oracles for the
//! discrete solver.

use std::ops::RangeInclusive;

pub mod ladder;
mod laguerre;
mod states;

pub use laguerre::{laguerre, laguerre_dy, laguerre_dyy};
pub use states::{AnalyticState, HalfLine};

use crate::error::{ensure, Result};
use crate::grid::Grid;
use crate::scalar::{wrap_angle, Real};
use crate::spectrum::{Eigenfunction, Spectrum, SpectrumKind};
use crate::wavefunction::WaveFunction;

/// Coupling of `x^2 + gamma / x^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalogeroParams<T> {
    gamma: T,
    order: T,
}

impl<T: Real> CalogeroParams<T> {
    pub fn new(gamma: T) -> Result<Self> {
        let disc = T::one() + T::of(4.0) * gamma;
        ensure!(disc > T::zero(), Domain, "Calogero coupling needs gamma > -1/4, got {gamma}");
        Ok(Self { gamma, order: disc.sqrt() / T::of(2.0) })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Laguerre order `(1 + 4 gamma)^{1/2} / 2`.
    pub fn order(&self) -> T {
        self.order
    }

    pub fn level(&self, n: u32) -> T {
        ladder::calogero_level(n, T::of(2.0) * self.order)
    }
}

/// `H_q = -d^2/dx^2 - q^2` with barriers at `n pi / q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultitrapParams<T> {
    q: T,
}

impl<T: Real> MultitrapParams<T> {
    pub fn new(q: T) -> Result<Self> {
        ensure!(q > T::zero() && q.is_finite(), Domain, "multitrap needs q > 0, got {q}");
        Ok(Self { q })
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// Width `pi / q` of one trap.
    pub fn cell_width(&self) -> T {
        T::PI() / self.q
    }
}

/// Eigenpairs of `p_alpha = -i d/dx`: `p_n = 2n + alpha/pi` with
/// `e_n^alpha(x) = pi^{-1/2} exp(i (2n + alpha/pi) x)`. Returned in label order.
///
/// These eigenfunctions satisfy `psi(pi) = e^{i alpha} psi(0)`, i.e. they belong
/// to [`crate::BoundaryCondition::QuasiPeriodic`] with parameter `2 pi - alpha`.
pub fn momentum_spectrum<T: Real>(alpha: T, n_range: RangeInclusive<i64>) -> Spectrum<T> {
    let alpha = wrap_angle(alpha);
    let r = alpha / T::PI();
    let labels: Vec<i64> = n_range.collect();
    let eigenvalues = labels.iter().map(|&n| ladder::momentum_level(n, r)).collect();
    let ef = labels.iter().map(|&n| Eigenfunction::Analytic(AnalyticState::PlaneWave { n, alpha })).collect();
    Spectrum::new(SpectrumKind::Momentum, labels, eigenvalues, Some(ef)).expect("closed form is valid")
}

/// `H_alpha = p_alpha^2`: eigenvalues `(2n + alpha/pi)^2`, sorted ascending
/// (ties by label), same eigenfunctions as [`momentum_spectrum`].
pub fn h_alpha_spectrum<T: Real>(alpha: T, n_range: RangeInclusive<i64>) -> Spectrum<T> {
    let alpha = wrap_angle(alpha);
    let r = alpha / T::PI();
    let mut states: Vec<(T, i64)> = n_range.map(|n| (ladder::h_alpha_level(n, r), n)).collect();
    states.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let labels = states.iter().map(|s| s.1).collect();
    let eigenvalues = states.iter().map(|s| s.0).collect();
    let ef = states
        .iter()
        .map(|&(_, n)| Eigenfunction::Analytic(AnalyticState::PlaneWave { n, alpha }))
        .collect();
    Spectrum::new(SpectrumKind::Hamiltonian, labels, eigenvalues, Some(ef)).expect("closed form is valid")
}

/// Orthonormal eigenbasis of the kinetic operator under the quasi-periodic
/// condition `g(0) = e^{i alpha} g(pi)`: the plane waves `e_n^{2pi - alpha}`,
/// sorted by energy. `count` states, centred on the lowest.
pub fn quasi_periodic_eigenbasis<T: Real>(alpha: T, count: usize) -> Spectrum<T> {
    let beta = wrap_angle(T::two_pi() - wrap_angle(alpha));
    let half = (count / 2) as i64;
    let lo = -half;
    let hi = lo + count as i64 - 1;
    h_alpha_spectrum(beta, lo..=hi)
}

/// Infinite well on `[0, pi]`: `E_n = (n+1)^2`, `psi_n = sqrt(2/pi) sin((n+1)x)`.
pub fn infinite_well_spectrum<T: Real>(n_max: usize) -> Spectrum<T> {
    let labels: Vec<i64> = (0..=n_max as i64).collect();
    let eigenvalues = (0..=n_max).map(|n| ladder::well_level(n as u32)).collect();
    let ef = (0..=n_max).map(|n| Eigenfunction::Analytic(AnalyticState::WellMode { n })).collect();
    Spectrum::new(SpectrumKind::Hamiltonian, labels, eigenvalues, Some(ef)).expect("closed form is valid")
}

/// Calogero levels `4n + 2 + (1 + 4 gamma)^{1/2}`. Every level is doubly
/// degenerate: one copy on each half-line, listed positive side first.
pub fn calogero_spectrum<T: Real>(params: &CalogeroParams<T>, n_max: usize) -> Spectrum<T> {
    let mut labels = Vec::with_capacity(2 * (n_max + 1));
    let mut eigenvalues = Vec::with_capacity(2 * (n_max + 1));
    let mut ef = Vec::with_capacity(2 * (n_max + 1));
    for n in 0..=n_max {
        let e = params.level(n as u32);
        for side in [HalfLine::Positive, HalfLine::Negative] {
            labels.push(n as i64);
            eigenvalues.push(e);
            ef.push(Eigenfunction::Analytic(AnalyticState::Calogero { n, order: params.order(), side }));
        }
    }
    Spectrum::new(SpectrumKind::Hamiltonian, labels, eigenvalues, Some(ef)).expect("closed form is valid")
}

/// `n (n - 1)`, the coupling for which `x^n` is the zero-energy solution of
/// `-d^2/dx^2 + coupling / x^2`.
pub fn centrifugal_coupling<T: Real>(n: u32) -> T {
    let nf = T::from_u32(n).unwrap();
    nf * (nf - T::one())
}

/// Samples of the generalized ground state `x^n` on a grid inside `(0, inf)`.
pub fn centrifugal_ground_state<T: Real>(n: u32, grid: &Grid<T>) -> Result<WaveFunction<T>> {
    ensure!(n >= 2, Domain, "centrifugal ground state needs n >= 2, got {n}");
    ensure!(grid.interval().a() >= T::zero(), Domain, "centrifugal ground state lives on (0, x_max]");
    Ok(AnalyticState::Power { n }.sample(grid))
}

/// Samples of the generalized ground state `sin(q x)`.
pub fn multitrap_ground_state<T: Real>(params: &MultitrapParams<T>, grid: &Grid<T>) -> WaveFunction<T> {
    AnalyticState::Sine { q: params.q() }.sample(grid)
}
