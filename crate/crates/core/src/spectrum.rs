use crate::closed_form::AnalyticState;
use crate::error::{ensure, Result};
use crate::grid::Grid;
use crate::scalar::Real;
use crate::wavefunction::{inner_product, WaveFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Signed labels, eigenvalues in label order (e.g. `p_alpha`).
    Momentum,
    /// Eigenvalues sorted ascending.
    Hamiltonian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Eigenfunction<T> {
    Sampled(WaveFunction<T>),
    Analytic(AnalyticState<T>),
}

impl<T: Real> Eigenfunction<T> {
    /// Samples on `grid`; sampled eigenfunctions must already live there.
    pub fn on_grid(&self, grid: &Grid<T>) -> Result<WaveFunction<T>> {
        match self {
            Eigenfunction::Sampled(wf) => {
                ensure!(wf.grid().same_as(grid), GridMismatch, "eigenfunction sampled on another grid");
                Ok(wf.clone())
            }
            Eigenfunction::Analytic(s) => Ok(s.sample(grid)),
        }
    }
}

/// Ordered eigenvalues with labels and optional eigenfunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    kind: SpectrumKind,
    labels: Vec<i64>,
    eigenvalues: Vec<T>,
    eigenfunctions: Option<Vec<Eigenfunction<T>>>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(
        kind: SpectrumKind,
        labels: Vec<i64>,
        eigenvalues: Vec<T>,
        eigenfunctions: Option<Vec<Eigenfunction<T>>>,
    ) -> Result<Self> {
        ensure!(labels.len() == eigenvalues.len(), Domain, "labels and eigenvalues differ in length");
        ensure!(eigenvalues.iter().all(|e| e.is_finite()), Domain, "non-finite eigenvalue");
        if kind == SpectrumKind::Hamiltonian {
            ensure!(
                eigenvalues.windows(2).all(|w| w[0] <= w[1]),
                Domain,
                "Hamiltonian spectrum must be sorted ascending"
            );
        }
        if let Some(ef) = &eigenfunctions {
            ensure!(ef.len() == eigenvalues.len(), Domain, "eigenfunction count mismatch");
        }
        let s = Self { kind, labels, eigenvalues, eigenfunctions };
        if let Some(d) = s.orthonormality_defect()? {
            ensure!(d <= T::tol(1e-8), InternalConsistency, "eigenfunctions not orthonormal: defect {d:e}");
        }
        Ok(s)
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenfunctions(&self) -> Option<&[Eigenfunction<T>]> {
        self.eigenfunctions.as_deref()
    }

    /// Eigenvalue of the first state carrying `label`.
    pub fn eigenvalue_for(&self, label: i64) -> Option<T> {
        self.labels.iter().position(|&l| l == label).map(|i| self.eigenvalues[i])
    }

    /// Distinct eigenvalues, exact ties merged.
    pub fn levels(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.len());
        for &e in &self.eigenvalues {
            if out.last() != Some(&e) {
                out.push(e);
            }
        }
        out
    }

    /// All eigenfunctions sampled on `grid`.
    pub fn sampled(&self, grid: &Grid<T>) -> Result<Vec<WaveFunction<T>>> {
        let ef = self.eigenfunctions.as_ref().ok_or_else(|| {
            crate::error::Error::Precondition("spectrum carries no eigenfunctions".into())
        })?;
        ef.iter().map(|e| e.on_grid(grid)).collect()
    }

    /// Largest `|<v_i, v_j> - delta_ij|` over sampled eigenfunctions, or
    /// `None` if there are none to check.
    pub fn orthonormality_defect(&self) -> Result<Option<T>> {
        let Some(ef) = &self.eigenfunctions else { return Ok(None) };
        let sampled: Vec<&WaveFunction<T>> = ef
            .iter()
            .filter_map(|e| match e {
                Eigenfunction::Sampled(w) => Some(w),
                Eigenfunction::Analytic(_) => None,
            })
            .collect();
        if sampled.is_empty() {
            return Ok(None);
        }
        let mut worst = T::zero();
        for i in 0..sampled.len() {
            for j in i..sampled.len() {
                let ip = inner_product(sampled[i], sampled[j])?;
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((ip - num_complex::Complex::new(target, T::zero())).norm());
            }
        }
        Ok(Some(worst))
    }
}
