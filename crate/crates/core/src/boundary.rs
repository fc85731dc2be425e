use crate::error::{ensure, Result};
use crate::matrix2::UnitaryMatrix2;
use crate::scalar::{cis, wrap_angle, Real, C};

/// Selects the self-adjoint extension of `-d^2/dx^2` on `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition<T> {
    /// `g(a) = g(b) = 0`, the infinite well (`U = -1`).
    Dirichlet,
    /// `g(0) = e^{i alpha} g(pi)`, `g'(0) = e^{i alpha} g'(pi)`, with alpha in `[0, 2 pi)`.
    QuasiPeriodic(T),
    /// An arbitrary member of the `U(2)` family.
    GeneralU(UnitaryMatrix2<T>),
}

impl<T: Real> BoundaryCondition<T> {
    /// Quasi-periodic condition with alpha reduced modulo `2 pi`.
    pub fn quasi_periodic(alpha: T) -> Self {
        Self::QuasiPeriodic(wrap_angle(alpha))
    }
}

/// Values and first derivatives of a function at the two ends of its
/// interval, plus the sup norms used to scale residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData<T> {
    pub value: [C<T>; 2],
    pub derivative: [C<T>; 2],
    pub sup_value: T,
    pub sup_derivative: T,
}

impl<T: Real> BoundaryData<T> {
    /// Quasi-periodic mismatch `max(|g(0) - e^{ia} g(pi)|, |g'(0) - e^{ia} g'(pi)|)`
    /// divided by `max(sup|g|, sup|g'|)`.
    pub fn quasi_periodic_residual(&self, alpha: T) -> Result<T> {
        let scale = self.sup_value.max(self.sup_derivative);
        ensure!(scale > T::zero(), Domain, "boundary residual of the zero function is undefined");
        let chi = cis(alpha);
        let dv = (self.value[0] - chi * self.value[1]).norm();
        let dd = (self.derivative[0] - chi * self.derivative[1]).norm();
        Ok(dv.max(dd) / scale)
    }

    /// `max(|g(0)|, |g(pi)|)` relative to `sup|g|`.
    pub fn dirichlet_residual(&self) -> Result<T> {
        let scale = self.sup_value.max(self.sup_derivative);
        ensure!(scale > T::zero(), Domain, "boundary residual of the zero function is undefined");
        Ok(self.value[0].norm().max(self.value[1].norm()) / scale)
    }
}

/// Boundary residual of `g` against the quasi-periodic condition with phase
/// `e^{i alpha}`.
pub fn boundary_residual<T: Real>(g: &BoundaryData<T>, alpha: T) -> Result<T> {
    g.quasi_periodic_residual(alpha)
}
