//! Finite-difference Hamiltonians `-d^2/dx^2 + V` and their eigenpairs.
//!
//! The stencil is the second-order `(-1, 2, -1) / h^2`. Dirichlet operators
//! live on nodal grids, where the implicit zero endpoint values drop out of
//! the stencil. Quasi-periodic operators live on a cell-centred grid of
//! `[0, pi]`: the ghost value left of `x_1` is `e^{i alpha} g(x_n)`, which
//! adds the corner entries `A[0][n-1] = -e^{i alpha} / h^2` and
//! `A[n-1][0] = -e^{-i alpha} / h^2`.

mod band;
mod dense;
mod eigen;

use num_complex::Complex;

use crate::boundary::BoundaryCondition;
use crate::error::{ensure, Result};
use crate::extension::{classify_extension, ExtensionClass};
use crate::grid::{Grid, Layout};
use crate::scalar::{cis, Real, C};
use crate::spectrum::Spectrum;

pub(crate) use band::{BandForm, BandLu};
pub use dense::{dense_eigensolve, jacobi_eigen};
pub use eigen::eigensolve;

/// Potential term of a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec<T> {
    Zero,
    /// `x^2 + gamma / x^2`, on either half-line.
    Calogero(T),
    /// `n (n - 1) / x^2`.
    Centrifugal(u32),
    /// Samples of a continuous `V` on the closed uniform mesh of `[0, pi]`,
    /// both endpoints included, where they must vanish. The potential is
    /// linearly interpolated and repeated with period `pi`.
    PeriodicCell(Vec<T>),
    /// One value per grid point.
    Custom(Vec<T>),
}

impl<T: Real> PotentialSpec<T> {
    /// Validated periodic cell potential.
    pub fn periodic_cell(samples: Vec<T>) -> Result<Self> {
        check_cell(&samples)?;
        Ok(Self::PeriodicCell(samples))
    }

    /// Smooth bump `height * cos^2(pi (x - center) / (2 w))` for
    /// `|x - center| < w`, sampled at `m + 1` points of `[0, pi]`.
    pub fn bump(height: T, center: T, half_width: T, m: usize) -> Result<Self> {
        ensure!(m >= 2, Domain, "a cell potential needs at least 3 samples");
        ensure!(half_width > T::zero(), Domain, "bump width must be positive");
        let samples = (0..=m)
            .map(|i| {
                let x = T::PI() * T::of_usize(i) / T::of_usize(m);
                let u = (x - center) / half_width;
                if u.abs() < T::one() {
                    let c = (T::FRAC_PI_2() * u).cos();
                    height * c * c
                } else {
                    T::zero()
                }
            })
            .collect();
        Self::periodic_cell(samples)
    }

    /// Samples on the points of `grid`.
    pub fn sample(&self, grid: &Grid<T>) -> Result<Vec<T>> {
        let xs = grid.points();
        let singular = |name: &str| -> Result<()> {
            let near = T::tol(1e-9) * grid.h();
            ensure!(
                xs.iter().all(|x| x.abs() > near),
                Domain,
                "the {name} potential is singular at a grid point (x = 0)"
            );
            Ok(())
        };
        match self {
            Self::Zero => Ok(vec![T::zero(); xs.len()]),
            Self::Calogero(gamma) => {
                singular("Calogero")?;
                Ok(xs.iter().map(|&x| x * x + *gamma / (x * x)).collect())
            }
            Self::Centrifugal(n) => {
                singular("centrifugal")?;
                let c = T::of_usize(*n as usize) * (T::of_usize(*n as usize) - T::one());
                Ok(xs.iter().map(|&x| c / (x * x)).collect())
            }
            Self::PeriodicCell(samples) => {
                check_cell(samples)?;
                let m = samples.len() - 1;
                let step = T::PI() / T::of_usize(m);
                Ok(xs
                    .iter()
                    .map(|&x| {
                        let u = (x % T::PI() + T::PI()) % T::PI() / step;
                        let i = u.floor().to_usize().unwrap_or(0).min(m - 1);
                        let w = u - T::of_usize(i);
                        samples[i] * (T::one() - w) + samples[i + 1] * w
                    })
                    .collect())
            }
            Self::Custom(values) => {
                ensure!(
                    values.len() == grid.n(),
                    GridMismatch,
                    "custom potential has {} samples for {} grid points",
                    values.len(),
                    grid.n()
                );
                ensure!(values.iter().all(|v| v.is_finite()), Domain, "non-finite potential sample");
                Ok(values.clone())
            }
        }
    }
}

fn check_cell<T: Real>(samples: &[T]) -> Result<()> {
    ensure!(samples.len() >= 3, Domain, "a cell potential needs at least 3 samples");
    ensure!(samples.iter().all(|v| v.is_finite()), Domain, "non-finite potential sample");
    let scale = samples.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let ends = samples[0].abs().max(samples[samples.len() - 1].abs());
    ensure!(
        ends <= T::tol(1e-12) * scale,
        Domain,
        "cell potential must vanish at both endpoints (got {ends:e})"
    );
    Ok(())
}

/// Hermitian FD matrix: real diagonal, first off-diagonal, and the corner
/// `A[0][n-1]` (its conjugate sits at `A[n-1][0]`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator<T> {
    grid: Grid<T>,
    bc: BoundaryCondition<T>,
    potential: PotentialSpec<T>,
    diag: Vec<T>,
    off: Vec<C<T>>,
    corner: C<T>,
}

impl<T: Real> DiscreteOperator<T> {
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    /// The condition actually discretised (general `U` is resolved to its
    /// named family).
    pub fn bc(&self) -> &BoundaryCondition<T> {
        &self.bc
    }

    pub fn potential(&self) -> &PotentialSpec<T> {
        &self.potential
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    /// `A[j][j + 1]`.
    pub fn off(&self) -> &[C<T>] {
        &self.off
    }

    /// `A[0][n - 1]`.
    pub fn corner(&self) -> C<T> {
        self.corner
    }

    pub fn entry(&self, r: usize, c: usize) -> C<T> {
        let n = self.n();
        let mut v = Complex::new(T::zero(), T::zero());
        if r == c {
            v += Complex::new(self.diag[r], T::zero());
        }
        if c == r + 1 {
            v += self.off[r];
        }
        if r == c + 1 {
            v += self.off[c].conj();
        }
        if n > 1 && r == 0 && c == n - 1 {
            v += self.corner;
        }
        if n > 1 && r == n - 1 && c == 0 {
            v += self.corner.conj();
        }
        v
    }

    pub fn dense(&self) -> Vec<Vec<C<T>>> {
        let n = self.n();
        (0..n).map(|r| (0..n).map(|c| self.entry(r, c)).collect()).collect()
    }

    /// `max |A - A^H|` over the dense matrix.
    pub fn hermiticity_defect(&self) -> T {
        let a = self.dense();
        let n = self.n();
        let mut worst = T::zero();
        for r in 0..n {
            for c in 0..n {
                worst = worst.max((a[r][c] - a[c][r].conj()).norm());
            }
        }
        worst
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.off.iter().all(|v| v.im == T::zero()) && self.corner.im == T::zero()
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        let n = self.n();
        debug_assert_eq!(v.len(), n);
        let mut out: Vec<C<T>> = (0..n).map(|j| v[j] * self.diag[j]).collect();
        for j in 0..n.saturating_sub(1) {
            out[j] += self.off[j] * v[j + 1];
            out[j + 1] += self.off[j].conj() * v[j];
        }
        if n > 1 {
            out[0] += self.corner * v[n - 1];
            out[n - 1] += self.corner.conj() * v[0];
        }
        out
    }

    /// Whether reversing the index order maps the matrix onto itself.
    pub fn has_reflection_symmetry(&self) -> bool {
        let n = self.n();
        let scale = self.diag.iter().fold(T::one(), |m, d| m.max(d.abs()));
        let tol = T::tol(1e-12) * scale;
        (0..n).all(|j| (self.diag[j] - self.diag[n - 1 - j]).abs() <= tol)
            && (0..n.saturating_sub(1)).all(|j| (self.off[j] - self.off[n - 2 - j].conj()).norm() <= tol)
            && self.corner.im.abs() <= tol
    }
}

/// Assemble `-d^2/dx^2 + V` under `bc`.
///
/// Dirichlet needs a nodal grid; quasi-periodic needs a cell-centred grid of
/// `[0, pi]` with at least three points. A general `U` is classified and
/// routed to one of those two families; other members of `U(2)` are not
/// discretised.
pub fn assemble<T: Real>(
    grid: &Grid<T>,
    potential: &PotentialSpec<T>,
    bc: &BoundaryCondition<T>,
) -> Result<DiscreteOperator<T>> {
    let bc = match bc {
        BoundaryCondition::GeneralU(u) => match classify_extension(u.matrix())? {
            ExtensionClass::InfiniteWell => BoundaryCondition::Dirichlet,
            ExtensionClass::QuasiPeriodic(a) => BoundaryCondition::QuasiPeriodic(a),
            ExtensionClass::Other => {
                return Err(crate::error::Error::Domain(
                    "only the infinite-well and quasi-periodic extensions are discretised".into(),
                ))
            }
        },
        other => *other,
    };
    let n = grid.n();
    let h2 = grid.h() * grid.h();
    let v = potential.sample(grid)?;
    let two = T::of(2.0) / h2;
    let diag: Vec<T> = v.iter().map(|&vj| two + vj).collect();
    let off = vec![Complex::new(-T::one() / h2, T::zero()); n.saturating_sub(1)];
    let corner = match bc {
        BoundaryCondition::Dirichlet => {
            ensure!(grid.layout() == Layout::Nodal, Precondition, "Dirichlet operators need a nodal grid");
            Complex::new(T::zero(), T::zero())
        }
        BoundaryCondition::QuasiPeriodic(alpha) => {
            let iv = grid.interval();
            ensure!(
                grid.layout() == Layout::CellCentered
                    && iv.a().abs() <= T::tol(1e-12)
                    && (iv.b() - T::PI()).abs() <= T::tol(1e-12),
                Precondition,
                "quasi-periodic operators need a cell-centred grid of [0, pi]"
            );
            ensure!(n >= 3, Domain, "quasi-periodic operators need at least 3 points");
            -cis(alpha) / h2
        }
        BoundaryCondition::GeneralU(_) => unreachable!("resolved above"),
    };
    Ok(DiscreteOperator { grid: grid.clone(), bc, potential: potential.clone(), diag, off, corner })
}

/// One row of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub n: usize,
    pub h: T,
    /// Largest `|lambda - E| / max(|E|, 1)` over the compared levels.
    pub max_rel_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub rows: Vec<ConvergenceRow<T>>,
    /// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for successive rows.
    pub orders: Vec<T>,
}

impl<T: Real> ConvergenceReport<T> {
    /// Order estimated from the two finest grids.
    pub fn order(&self) -> T {
        *self.orders.last().expect("at least two grids")
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_rel_error < w[0].max_rel_error)
    }
}

/// Compare the `k` lowest FD eigenvalues on each grid with the `k` lowest
/// levels of `oracle`. The error is relative, with the denominator floored
/// at 1 so that zero modes are measured absolutely.
pub fn convergence_report<T: Real>(
    problem: (&PotentialSpec<T>, &BoundaryCondition<T>),
    oracle: &Spectrum<T>,
    grids: &[Grid<T>],
    k: usize,
) -> Result<ConvergenceReport<T>> {
    ensure!(grids.len() >= 2, Domain, "a refinement study needs at least two grids");
    ensure!(oracle.len() >= k, Domain, "oracle has {} levels, {k} requested", oracle.len());
    ensure!(
        grids.windows(2).all(|w| w[1].h() < w[0].h()),
        Domain,
        "grids must be ordered by decreasing spacing"
    );
    let mut exact = oracle.eigenvalues().to_vec();
    exact.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let (potential, bc) = problem;
    let mut rows = Vec::with_capacity(grids.len());
    for grid in grids {
        let op = assemble(grid, potential, bc)?;
        let spec = eigensolve(&op, k)?;
        let err = spec
            .eigenvalues()
            .iter()
            .zip(&exact)
            .map(|(&l, &e)| (l - e).abs() / e.abs().max(T::one()))
            .fold(T::zero(), T::max);
        rows.push(ConvergenceRow { n: grid.n(), h: grid.h(), max_rel_error: err });
    }
    let orders = rows
        .windows(2)
        .map(|w| (w[0].max_rel_error / w[1].max_rel_error).ln() / (w[0].h / w[1].h).ln())
        .collect();
    Ok(ConvergenceReport { rows, orders })
}
