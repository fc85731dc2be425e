//! Quantum mechanics on the interval `[0, pi]` in units `hbar = 2m = 1`:
//! closed-form spectra, the self-adjoint extensions of `-d^2/dx^2`, finite
//! difference solvers, unitary evolution across impenetrable barriers,
//! momentum-space kinematics and the fiber decomposition of the line.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! closed-form ladders in [`closed_form::ladder`] also evaluate exactly over
//! rationals. The `*64` and `*32` aliases below fix the scalar.

// Negated float comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod boundary;
pub mod closed_form;
pub mod direct_integral;
pub mod discrete;
pub mod dynamics;
pub mod error;
pub mod extension;
pub mod grid;
pub mod interval;
pub mod kinematics;
pub mod matrix2;
pub mod scalar;
pub mod spectrum;
pub mod wavefunction;

pub use boundary::{BoundaryCondition, BoundaryData};
pub use direct_integral::{BandTable, FiberDecomposition, LineFunction};
pub use discrete::{DiscreteOperator, PotentialSpec};
pub use dynamics::{Method, Propagator};
pub use error::{Error, Result};
pub use grid::{Grid, Layout};
pub use interval::Interval;
pub use kinematics::{MomentumDistribution, Uncertainty};
pub use matrix2::{Matrix2, UnitaryMatrix2};
pub use scalar::{Real, C};
pub use spectrum::{Eigenfunction, Spectrum, SpectrumKind};
pub use wavefunction::WaveFunction;

pub type Interval64 = Interval<f64>;
pub type Grid64 = Grid<f64>;
pub type WaveFunction64 = WaveFunction<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type BoundaryCondition64 = BoundaryCondition<f64>;
pub type PotentialSpec64 = PotentialSpec<f64>;
pub type DiscreteOperator64 = DiscreteOperator<f64>;
pub type Propagator64 = Propagator<f64>;
pub type LineFunction64 = LineFunction<f64>;
pub type FiberDecomposition64 = FiberDecomposition<f64>;

pub type Interval32 = Interval<f32>;
pub type Grid32 = Grid<f32>;
pub type WaveFunction32 = WaveFunction<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type BoundaryCondition32 = BoundaryCondition<f32>;
pub type PotentialSpec32 = PotentialSpec<f32>;
pub type DiscreteOperator32 = DiscreteOperator<f32>;
pub type Propagator32 = Propagator<f32>;
