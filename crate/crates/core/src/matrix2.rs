use std::fmt;
use std::ops::Mul;

use num_complex::Complex;

use crate::error::{ensure, Result};
use crate::scalar::{Real, C};

/// Plain complex 2x2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2<T> {
    pub m: [[C<T>; 2]; 2],
}

impl<T: Real> Matrix2<T> {
    pub fn new(u11: C<T>, u12: C<T>, u21: C<T>, u22: C<T>) -> Self {
        Self { m: [[u11, u12], [u21, u22]] }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        let m = self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn det(&self) -> C<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() {
            return None;
        }
        let m = self.m;
        Some(Self::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d))
    }

    pub fn apply(&self, v: [C<T>; 2]) -> [C<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    /// Worst entry of `U^dagger U - I`, as `((row, col), modulus)`.
    pub fn unitarity_defect(&self) -> ((usize, usize), T) {
        let g = self.adjoint() * *self;
        let id = Self::identity();
        let mut worst = ((0, 0), T::zero());
        for i in 0..2 {
            for j in 0..2 {
                let d = (g.m[i][j] - id.m[i][j]).norm();
                if d > worst.1 {
                    worst = ((i, j), d);
                }
            }
        }
        worst
    }
}

impl<T: Real> Mul for Matrix2<T> {
    type Output = Matrix2<T>;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<T: Real> fmt::Display for Matrix2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// A 2x2 matrix certified unitary on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryMatrix2<T>(Matrix2<T>);

impl<T: Real> UnitaryMatrix2<T> {
    /// Accepts `m` if `U^dagger U = I` and `|det U| = 1` within `1e-12`.
    pub fn new(m: Matrix2<T>) -> Result<Self> {
        Self::with_tolerance(m, T::tol(1e-12))
    }

    pub fn with_tolerance(m: Matrix2<T>, tol: T) -> Result<Self> {
        let ((i, j), d) = m.unitarity_defect();
        ensure!(
            d <= tol,
            Domain,
            "matrix is not unitary: entry ({},{}) of U^dagger U - I has modulus {d:e}",
            i + 1,
            j + 1
        );
        let det = m.det().norm();
        ensure!((det - T::one()).abs() <= tol, Domain, "|det U| = {det} differs from 1");
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `U = -1`, the infinite-well extension.
    pub fn minus_identity() -> Self {
        Self(Matrix2::identity().scaled(Complex::new(-T::one(), T::zero())))
    }

    pub fn matrix(&self) -> &Matrix2<T> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C<T> {
        self.0.m[i][j]
    }
}
