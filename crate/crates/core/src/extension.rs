//! Self-adjoint extensions of the closed kinetic operator on `[0, pi]`.
//!
//! The closure of `-d^2/dx^2` on `C_0^inf(0, pi)` has deficiency indices
//! `(2, 2)`. Its extensions `H_U` are labelled by `U in U(2)` through the map
//! `W = U I : N_- -> N_+`, and act on `g = f + w_- + W w_-` as
//! `H_U g = H f - 2i w_- + 2i W w_-`. Here `W psi_-^j = sum_i U_ij psi_+^i`.

use num_complex::Complex;

use crate::boundary::BoundaryData;
use crate::closed_form::AnalyticState;
use crate::error::{ensure, Error, Result};
use crate::grid::{Grid, Layout};
use crate::interval::Interval;
use crate::matrix2::{Matrix2, UnitaryMatrix2};
use crate::scalar::{cis, cplx, re, wrap_angle, Real, C};
use crate::wavefunction::WaveFunction;

/// `coeff * exp(exponent * x)` on `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMode<T> {
    pub coeff: T,
    pub exponent: C<T>,
}

impl<T: Real> ExpMode<T> {
    pub fn state(&self) -> AnalyticState<T> {
        AnalyticState::Exponential { coeff: self.coeff, exponent: self.exponent }
    }

    pub fn value(&self, x: T) -> C<T> {
        (self.exponent * x).exp() * self.coeff
    }

    pub fn derivative(&self, x: T) -> C<T> {
        self.value(x) * self.exponent
    }

    /// `-s^2`: the eigenvalue of `-d^2/dx^2` on this mode.
    pub fn kinetic_eigenvalue(&self) -> C<T> {
        -(self.exponent * self.exponent)
    }

    /// Exact `int_0^pi conj(self) other dx`.
    pub fn inner(&self, other: &ExpMode<T>) -> C<T> {
        let sigma = self.exponent.conj() + other.exponent;
        let c = self.coeff * other.coeff;
        if sigma.norm() == T::zero() {
            return re(c * T::PI());
        }
        ((sigma * T::PI()).exp() - re(T::one())) / sigma * c
    }

    fn scaled(&self, s: T) -> Self {
        Self { coeff: self.coeff * s, exponent: self.exponent }
    }
}

/// Bases of the deficiency subspaces `N_+` (`-psi'' = 2i psi`) and `N_-`
/// (`-psi'' = -2i psi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficiencyBasis<T> {
    pub psi_plus_1: ExpMode<T>,
    pub psi_plus_2: ExpMode<T>,
    pub psi_minus_1: ExpMode<T>,
    pub psi_minus_2: ExpMode<T>,
}

/// The four exponentials with their textbook normalisation constants
/// `(e^{2pi} - 1)^{-1/2}` and `(1 - e^{-2pi})^{-1/2}`. With those constants each
/// mode has squared norm `1/2`; see [`DeficiencyBasis::orthonormalized`].
pub fn deficiency_basis<T: Real>() -> DeficiencyBasis<T> {
    let two_pi = T::two_pi();
    let c1 = T::one() / (two_pi.exp() - T::one()).sqrt();
    let c2 = T::one() / (T::one() - (-two_pi).exp()).sqrt();
    let one = T::one();
    DeficiencyBasis {
        psi_plus_1: ExpMode { coeff: c1, exponent: cplx(one, -one) },
        psi_plus_2: ExpMode { coeff: c2, exponent: cplx(-one, one) },
        psi_minus_1: ExpMode { coeff: c1, exponent: cplx(one, one) },
        psi_minus_2: ExpMode { coeff: c2, exponent: cplx(-one, -one) },
    }
}

impl<T: Real> DeficiencyBasis<T> {
    pub fn plus(&self) -> [ExpMode<T>; 2] {
        [self.psi_plus_1, self.psi_plus_2]
    }

    pub fn minus(&self) -> [ExpMode<T>; 2] {
        [self.psi_minus_1, self.psi_minus_2]
    }

    /// Same subspaces, every vector rescaled by `sqrt(2)` to unit norm. The
    /// matrix of `W` is unchanged because both bases scale alike.
    pub fn orthonormalized(&self) -> Self {
        let s = T::of(2.0).sqrt();
        Self {
            psi_plus_1: self.psi_plus_1.scaled(s),
            psi_plus_2: self.psi_plus_2.scaled(s),
            psi_minus_1: self.psi_minus_1.scaled(s),
            psi_minus_2: self.psi_minus_2.scaled(s),
        }
    }

    /// Exact Gram matrices `(<psi_+^i, psi_+^j>, <psi_-^i, psi_-^j>)`.
    pub fn gram(&self) -> (Matrix2<T>, Matrix2<T>) {
        let g = |v: [ExpMode<T>; 2]| {
            Matrix2::new(v[0].inner(&v[0]), v[0].inner(&v[1]), v[1].inner(&v[0]), v[1].inner(&v[1]))
        };
        (g(self.plus()), g(self.minus()))
    }

    /// Deficiency part `w_- + W w_-` as a list of modes with coefficients.
    fn combination(&self, u: &UnitaryMatrix2<T>, w_minus: [C<T>; 2]) -> [(C<T>, ExpMode<T>); 4] {
        let ww = u.matrix().apply(w_minus);
        [
            (w_minus[0], self.psi_minus_1),
            (w_minus[1], self.psi_minus_2),
            (ww[0], self.psi_plus_1),
            (ww[1], self.psi_plus_2),
        ]
    }
}

/// Eq.-(19)-style matrix exactly as typeset:
/// `u11 = u22 = -(1+i)/2`,
/// `u12 = (i-1)/2 chi (1 + chi e^pi) / (1 + conj(chi) e^pi)`, `u21 = conj(u12)`.
pub fn printed_u_alpha<T: Real>(alpha: T) -> Matrix2<T> {
    let chi = cis(alpha);
    let e = T::PI().exp();
    let one = re(T::one());
    let half = T::of(0.5);
    let d = cplx(-half, -half);
    let u12 = cplx(-half, half) * chi * (one + chi * e) / (one + chi.conj() * e);
    Matrix2::new(d, u12, u12.conj(), d)
}

/// The unitary `U` whose extension `H_U` carries the quasi-periodic
/// condition `g(0) = e^{i alpha} g(pi)`, `g'(0) = e^{i alpha} g'(pi)`.
///
/// Writing the two boundary functionals on the deficiency modes as matrices
/// `M_+`, `M_-`, the condition on `w_- + W w_-` for every `w_-` is
/// `M_- + M_+ U = 0`.
pub fn u_from_boundary_conditions<T: Real>(alpha: T) -> Result<UnitaryMatrix2<T>> {
    let basis = deficiency_basis::<T>();
    let chi = cis(alpha);
    let pi = T::PI();
    let functionals = |m: &ExpMode<T>| {
        [m.value(T::zero()) - chi * m.value(pi), m.derivative(T::zero()) - chi * m.derivative(pi)]
    };
    let cols = |v: [ExpMode<T>; 2]| {
        let (a, b) = (functionals(&v[0]), functionals(&v[1]));
        Matrix2::new(a[0], b[0], a[1], b[1])
    };
    let m_plus = cols(basis.plus());
    let m_minus = cols(basis.minus());
    let inv = m_plus
        .inverse()
        .ok_or_else(|| Error::Numerical("boundary functionals singular on N_+".into()))?;
    let u = (inv * m_minus).scaled(re(-T::one()));
    UnitaryMatrix2::with_tolerance(u, T::tol(1e-10))
        .map_err(|e| Error::InternalConsistency(format!("derived U_alpha: {e}")))
}

/// Where the matrix returned by [`build_u_alpha`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UAlphaSource<T> {
    /// The typeset matrix passed the unitarity gate.
    Printed,
    /// The typeset matrix failed the gate at `entry` (1-based, of `U^dagger U - I`)
    /// by `defect`; the matrix was derived from the boundary conditions instead.
    Derived { entry: (usize, usize), defect: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UAlpha<T> {
    pub alpha: T,
    pub matrix: UnitaryMatrix2<T>,
    pub printed: Matrix2<T>,
    pub source: UAlphaSource<T>,
}

/// `U_alpha` for the quasi-periodic family. The typeset matrix is tried
/// first; when it fails `U^dagger U = I` within `1e-10`, the offending entry is
/// reported in [`UAlphaSource::Derived`] and the boundary-condition
/// derivation is used.
pub fn build_u_alpha<T: Real>(alpha: T) -> Result<UAlpha<T>> {
    let alpha = wrap_angle(alpha);
    let printed = printed_u_alpha(alpha);
    let ((i, j), defect) = printed.unitarity_defect();
    if defect <= T::tol(1e-10) {
        let matrix = UnitaryMatrix2::with_tolerance(printed, T::tol(1e-10))?;
        return Ok(UAlpha { alpha, matrix, printed, source: UAlphaSource::Printed });
    }
    let matrix = u_from_boundary_conditions(alpha)?;
    Ok(UAlpha { alpha, matrix, printed, source: UAlphaSource::Derived { entry: (i + 1, j + 1), defect } })
}

/// Named members of the `U(2)` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionClass<T> {
    /// `U = -1`: Dirichlet walls.
    InfiniteWell,
    /// `U = U_alpha`.
    QuasiPeriodic(T),
    Other,
}

/// Identify `U` as the infinite well, a quasi-periodic `U_alpha`, or neither.
pub fn classify_extension<T: Real>(u: &Matrix2<T>) -> Result<ExtensionClass<T>> {
    let u = UnitaryMatrix2::new(*u)?;
    let m = u.matrix();
    let tol = T::tol(1e-10);
    if m.max_abs_diff(UnitaryMatrix2::minus_identity().matrix()) <= tol {
        return Ok(ExtensionClass::InfiniteWell);
    }
    // u12 = (i-1)/2 (chi + E) / (1 + chi E) with E = e^pi; invert the Moebius map.
    let e = re(T::PI().exp());
    let one = re(T::one());
    let f = m.m[0][1] / cplx(-T::of(0.5), T::of(0.5));
    let denom = f * e - one;
    if denom.norm() == T::zero() {
        return Ok(ExtensionClass::Other);
    }
    let chi = (e - f) / denom;
    if (chi.norm() - T::one()).abs() > T::tol(1e-8) {
        return Ok(ExtensionClass::Other);
    }
    let alpha = wrap_angle(chi.arg());
    let candidate = build_u_alpha(alpha)?;
    if candidate.matrix.matrix().max_abs_diff(m) <= tol {
        Ok(ExtensionClass::QuasiPeriodic(alpha))
    } else {
        Ok(ExtensionClass::Other)
    }
}

/// `g = f + w_- + W w_-` with `H_U g` from the defining formula.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionElement<T> {
    pub f: WaveFunction<T>,
    pub w_minus: [C<T>; 2],
    pub u: UnitaryMatrix2<T>,
    pub g: WaveFunction<T>,
    /// `H f - 2i w_- + 2i W w_-`, with `H f = -f''` by the interior stencil.
    pub h_u_g: WaveFunction<T>,
}

impl<T: Real> ExtensionElement<T> {
    /// Exact endpoint data of `g` (the `f` part vanishes there).
    pub fn boundary_data(&self) -> BoundaryData<T> {
        *self.g.boundary().expect("assembled elements carry endpoint data")
    }
}

/// Central second difference with zero boundary values, `-f''`.
pub(crate) fn minus_laplacian<T: Real>(f: &WaveFunction<T>) -> Vec<C<T>> {
    let v = f.values();
    let n = v.len();
    let h2 = f.grid().h() * f.grid().h();
    let zero = re(T::zero());
    (0..n)
        .map(|j| {
            let l = if j > 0 { v[j - 1] } else { zero };
            let r = if j + 1 < n { v[j + 1] } else { zero };
            (v[j] * T::of(2.0) - l - r) / h2
        })
        .collect()
}

fn central_derivative<T: Real>(f: &WaveFunction<T>) -> Vec<C<T>> {
    let v = f.values();
    let n = v.len();
    let h = f.grid().h();
    let zero = re(T::zero());
    (0..n)
        .map(|j| {
            let l = if j > 0 { v[j - 1] } else { zero };
            let r = if j + 1 < n { v[j + 1] } else { zero };
            (r - l) / (h * T::of(2.0))
        })
        .collect()
}

/// Build the element of `D(H_U)` generated by `f in D(H)` and `w_- in N_-`.
///
/// `f` must live on a nodal grid of `[0, pi]` and vanish together with its
/// derivative at both ends. The check extrapolates to the edges, so it allows
/// a relative slack of `8 h^2` for the second-order extrapolation error.
pub fn assemble_extension_element<T: Real>(
    u: &UnitaryMatrix2<T>,
    f: &WaveFunction<T>,
    w_minus: [C<T>; 2],
) -> Result<ExtensionElement<T>> {
    let grid: &Grid<T> = f.grid();
    let cell = Interval::<T>::unit_cell();
    ensure!(
        grid.layout() == Layout::Nodal
            && (grid.interval().a() - cell.a()).abs() <= T::tol(1e-14)
            && (grid.interval().b() - cell.b()).abs() <= T::tol(1e-14),
        Precondition,
        "extension elements are built on a nodal grid of [0, pi]"
    );
    let fb = f.boundary_data()?;
    let scale = fb.sup_value.max(fb.sup_derivative);
    let edge = [fb.value[0], fb.value[1], fb.derivative[0], fb.derivative[1]]
        .iter()
        .fold(T::zero(), |m, v| m.max(v.norm()));
    let slack = T::tol(1e-6).max(T::of(8.0) * grid.h() * grid.h());
    ensure!(
        edge <= slack * scale,
        Precondition,
        "f is not in the closed domain: boundary value/derivative {edge:e} vs scale {scale:e}"
    );

    let basis = deficiency_basis::<T>();
    let parts = basis.combination(u, w_minus);
    let pts = grid.points();
    let defect_at = |x: T| {
        parts.iter().fold([re(T::zero()); 2], |acc, (c, m)| {
            [acc[0] + *c * m.value(x), acc[1] + *c * m.derivative(x)]
        })
    };

    let two_i = cplx(T::zero(), T::of(2.0));
    let h_f = minus_laplacian(f);
    let df = central_derivative(f);
    let mut g = Vec::with_capacity(pts.len());
    let mut hg = Vec::with_capacity(pts.len());
    let mut sup_v = T::zero();
    let mut sup_d = T::zero();
    for (j, &x) in pts.iter().enumerate() {
        let [dv, dd] = defect_at(x);
        let gj = f.values()[j] + dv;
        let mut hj = h_f[j];
        for (k, (c, m)) in parts.iter().enumerate() {
            // N_- modes enter with -2i, N_+ modes with +2i.
            let sign = if k < 2 { -two_i } else { two_i };
            hj += sign * *c * m.value(x);
        }
        sup_v = sup_v.max(gj.norm());
        sup_d = sup_d.max((df[j] + dd).norm());
        g.push(gj);
        hg.push(hj);
    }
    let [va, da] = defect_at(T::zero());
    let [vb, db] = defect_at(T::PI());
    let bd = BoundaryData {
        value: [va, vb],
        derivative: [da, db],
        sup_value: sup_v.max(va.norm()).max(vb.norm()),
        sup_derivative: sup_d.max(da.norm()).max(db.norm()),
    };
    Ok(ExtensionElement {
        f: f.clone(),
        w_minus,
        u: *u,
        g: WaveFunction::new(grid.clone(), g)?.with_boundary(bd),
        h_u_g: WaveFunction::new(grid.clone(), hg)?,
    })
}

/// `w_- + W w_-` evaluated at `x`, for callers that want the deficiency part alone.
pub fn deficiency_part<T: Real>(u: &UnitaryMatrix2<T>, w_minus: [C<T>; 2], x: T) -> C<T> {
    deficiency_basis::<T>()
        .combination(u, w_minus)
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (c, m)| acc + *c * m.value(x))
}
