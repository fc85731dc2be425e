//! Banded storage of the FD operators.
//!
//! A tridiagonal matrix with corner entries is cyclic; interleaving the
//! indices as `0, n-1, 1, n-2, ...` turns it into a Hermitian band matrix of
//! half-bandwidth 2. Shifted solves on that band are `O(n)`, and Givens bulge
//! chasing reduces it to real tridiagonal form in `O(n^2)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::DiscreteOperator;

/// Lower band of a Hermitian matrix in a permuted ordering.
#[derive(Debug, Clone)]
pub(crate) struct BandForm<T> {
    /// `perm[i]` is the original index stored at band position `i`.
    pub perm: Vec<usize>,
    /// Half-bandwidth.
    pub p: usize,
    pub diag: Vec<T>,
    /// `lower[m - 1][j] = A'[j + m][j]`.
    pub lower: Vec<Vec<C<T>>>,
    /// Infinity norm of the matrix.
    pub norm: T,
}

impl<T: Real> BandForm<T> {
    pub fn new(op: &DiscreteOperator<T>) -> Self {
        let n = op.n();
        let cyclic = op.corner() != Complex::new(T::zero(), T::zero()) && n > 2;
        let (perm, p) = if cyclic { (interleave(n), 2) } else { ((0..n).collect(), 1) };
        let diag: Vec<T> = perm.iter().map(|&i| op.diag()[i]).collect();
        let lower = (1..=p)
            .map(|m| {
                (0..n.saturating_sub(m))
                    .map(|j| op.entry(perm[j + m], perm[j]))
                    .collect()
            })
            .collect();
        let norm = (0..n)
            .map(|i| {
                op.diag()[i].abs()
                    + if i + 1 < n { op.off()[i].norm() } else { T::zero() }
                    + if i > 0 { op.off()[i - 1].norm() } else { T::zero() }
                    + if i == 0 || i + 1 == n { op.corner().norm() } else { T::zero() }
            })
            .fold(T::zero(), T::max);
        Self { perm, p, diag, lower, norm }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    fn low(&self, i: usize, j: usize) -> C<T> {
        self.lower[i - j - 1][j]
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.n();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            for m in 1..=self.p {
                if i >= m {
                    r += self.low(i, i - m).norm();
                }
                if i + m < n {
                    r += self.low(i + m, i).norm();
                }
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Unitarily equivalent real symmetric tridiagonal matrix
    /// `(diagonal, off-diagonal moduli)`, by Givens bulge chasing on the band.
    pub fn tridiagonal(&self) -> (Vec<T>, Vec<T>) {
        let n = self.n();
        if self.p == 1 {
            return (self.diag.clone(), self.lower[0].iter().map(|v| v.norm()).collect());
        }
        let mut w = Chase::new(self);
        for j in 0..n.saturating_sub(2) {
            for m in (2..=self.p).rev() {
                let mut r = j + m;
                let mut col = j;
                while r < n && w.get(r, col) != Complex::new(T::zero(), T::zero()) {
                    w.rotate(r, col);
                    // The rotation in plane (r - 1, r) leaves a bulge p + 1
                    // below the diagonal in column r - 1.
                    col = r - 1;
                    r = col + self.p + 1;
                }
            }
        }
        let diag = (0..n).map(|i| w.get(i, i).re).collect();
        let off = (0..n - 1).map(|i| w.get(i + 1, i).norm()).collect();
        (diag, off)
    }
}

/// Lower band with room for one bulge diagonal.
struct Chase<T> {
    width: usize,
    lo: Vec<Vec<C<T>>>,
}

impl<T: Real> Chase<T> {
    fn new(form: &BandForm<T>) -> Self {
        let n = form.n();
        let width = form.p + 2;
        let mut lo = vec![vec![Complex::new(T::zero(), T::zero()); width]; n];
        for i in 0..n {
            lo[i][0] = Complex::new(form.diag[i], T::zero());
            for m in 1..=form.p.min(i) {
                lo[i][m] = form.low(i, i - m);
            }
        }
        Self { width, lo }
    }

    fn get(&self, i: usize, j: usize) -> C<T> {
        if i >= j {
            if i - j < self.width {
                self.lo[i][i - j]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        } else {
            self.get(j, i).conj()
        }
    }

    fn set(&mut self, i: usize, j: usize, v: C<T>) {
        if i >= j {
            debug_assert!(i - j < self.width || v.norm() == T::zero());
            if i - j < self.width {
                self.lo[i][i - j] = v;
            }
        } else {
            self.set(j, i, v.conj());
        }
    }

    /// Zero `A[r][col]` with a rotation in the plane `(r - 1, r)`, applied
    /// from both sides.
    fn rotate(&mut self, r: usize, col: usize) {
        let n = self.lo.len();
        let (p, q) = (r - 1, r);
        let ap = self.get(p, col);
        let aq = self.get(q, col);
        let rr = (ap.norm_sqr() + aq.norm_sqr()).sqrt();
        let (c, s) = if ap.norm() == T::zero() {
            (T::zero(), aq.conj() / rr)
        } else {
            (ap.norm() / rr, ap / ap.norm() * aq.conj() / rr)
        };
        let reach = self.width;
        let lo_k = p.saturating_sub(reach);
        let hi_k = (q + reach).min(n - 1);
        // At most 2 * width neighbours; width is p + 2 <= 4.
        let zero = Complex::new(T::zero(), T::zero());
        let mut rows = [(0usize, zero, zero); 16];
        let mut len = 0;
        for k in lo_k..=hi_k {
            if k == p || k == q {
                continue;
            }
            let (x, y) = (self.get(p, k), self.get(q, k));
            rows[len] = (k, x * c + y * s, -s.conj() * x + y * c);
            len += 1;
        }
        let (app, apq, aqq) = (self.get(p, p), self.get(p, q), self.get(q, q));
        // B = G [[app, apq], [conj(apq), aqq]] G^H with G = [[c, s], [-conj(s), c]].
        let g = [[Complex::new(c, T::zero()), s], [-s.conj(), Complex::new(c, T::zero())]];
        let a = [[app, apq], [apq.conj(), aqq]];
        let mut b = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..2 {
                    for l in 0..2 {
                        acc += g[i][k] * a[k][l] * g[j][l].conj();
                    }
                }
                b[i][j] = acc;
            }
        }
        for &(k, x, y) in &rows[..len] {
            self.set(p, k, x);
            self.set(q, k, y);
        }
        self.set(p, p, Complex::new(b[0][0].re, T::zero()));
        self.set(q, q, Complex::new(b[1][1].re, T::zero()));
        self.set(q, p, b[1][0]);
        self.set(q, col, Complex::new(T::zero(), T::zero()));
    }
}

/// Eigenvalues of a real symmetric tridiagonal matrix strictly below
/// `sigma` (Sturm count).
pub(crate) fn sturm_count<T: Real>(diag: &[T], off: &[T], sigma: T, pivmin: T) -> usize {
    let mut count = 0;
    let mut d = T::one();
    for i in 0..diag.len() {
        let b2 = if i == 0 { T::zero() } else { off[i - 1] * off[i - 1] };
        d = diag[i] - sigma - if i == 0 { T::zero() } else { b2 / d };
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < T::zero() {
            count += 1;
        }
    }
    count
}

fn interleave(n: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0, n - 1);
    while lo <= hi {
        perm.push(lo);
        if hi != lo {
            perm.push(hi);
        }
        lo += 1;
        if hi == 0 {
            break;
        }
        hi -= 1;
    }
    perm
}

/// LU factorisation with partial pivoting of `s I + t A`, in band storage.
#[derive(Debug, Clone)]
pub(crate) struct BandLu<T> {
    perm: Vec<usize>,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<C<T>>,
    ipiv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    /// Factor `s I + t A`. Exactly singular pivots are replaced by
    /// `eps * |t| * |A|`, which is what inverse iteration wants; callers that
    /// need a genuine solve pass `strict`.
    pub fn factor(form: &BandForm<T>, s: C<T>, t: C<T>, strict: bool) -> Result<Self> {
        let n = form.n();
        let (kl, ku) = (form.p, form.p);
        let kv = kl + ku;
        let ld = 2 * kl + ku + 1;
        let zero = Complex::new(T::zero(), T::zero());
        let mut ab = vec![zero; ld * n];
        let at = |r: usize, c: usize| c * ld + kv + r - c;
        for j in 0..n {
            ab[at(j, j)] = s + t * form.diag[j];
            for m in 1..=form.p {
                if j + m < n {
                    let v = form.low(j + m, j);
                    ab[at(j + m, j)] = t * v;
                    ab[at(j, j + m)] = t * v.conj();
                }
            }
        }
        let tiny = T::epsilon() * (t.norm() * form.norm + s.norm()).max(T::min_positive_value());
        let mut ipiv = vec![0; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = ab[at(j, j)].norm();
            for i in 1..=km {
                let v = ab[at(j + i, j)].norm();
                if v > best {
                    best = v;
                    jp = i;
                }
            }
            ipiv[j] = j + jp;
            if best <= tiny {
                if strict {
                    return Err(Error::Numerical(format!("singular pivot at row {j}")));
                }
                ab[at(j + jp, j)] = Complex::new(tiny, T::zero());
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    ab.swap(at(j, c), at(j + jp, c));
                }
            }
            let piv = ab[at(j, j)];
            for i in 1..=km {
                let idx = at(j + i, j);
                ab[idx] /= piv;
            }
            for c in (j + 1)..=ju {
                let u = ab[at(j, c)];
                if u == zero {
                    continue;
                }
                for i in 1..=km {
                    let li = ab[at(j + i, j)];
                    let idx = at(j + i, c);
                    ab[idx] -= li * u;
                }
            }
        }
        Ok(Self { perm: form.perm.clone(), kl, ku, ld, ab, ipiv })
    }

    /// Solve in the original index order.
    pub fn solve(&self, rhs: &[C<T>]) -> Vec<C<T>> {
        let n = self.perm.len();
        let kv = self.kl + self.ku;
        let at = |r: usize, c: usize| c * self.ld + kv + r - c;
        let mut b: Vec<C<T>> = self.perm.iter().map(|&i| rhs[i]).collect();
        for j in 0..n {
            b.swap(j, self.ipiv[j]);
            let km = self.kl.min(n - 1 - j);
            let bj = b[j];
            for i in 1..=km {
                b[j + i] -= self.ab[at(j + i, j)] * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[at(j, j)];
            let bj = b[j];
            for i in j.saturating_sub(kv)..j {
                b[i] -= self.ab[at(i, j)] * bj;
            }
        }
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, &i) in self.perm.iter().enumerate() {
            out[i] = b[k];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_preserves_the_spectrum() {
        use crate::boundary::BoundaryCondition;
        use crate::discrete::{assemble, jacobi_eigen, PotentialSpec};
        use crate::grid::Grid;
        use crate::interval::Interval;
        let g = Grid::periodic(Interval::unit_cell(), 11).unwrap();
        let v: Vec<f64> = (0..11).map(|j| (j as f64 * 0.7).sin() * 5.0).collect();
        let op = assemble(&g, &PotentialSpec::Custom(v), &BoundaryCondition::quasi_periodic(2.1)).unwrap();
        let (d, e) = BandForm::new(&op).tridiagonal();
        let t: Vec<Vec<C<f64>>> = (0..11)
            .map(|i| {
                (0..11)
                    .map(|j| {
                        let x = if i == j {
                            d[i]
                        } else if i + 1 == j {
                            e[i]
                        } else if j + 1 == i {
                            e[j]
                        } else {
                            0.0
                        };
                        Complex::new(x, 0.0)
                    })
                    .collect()
            })
            .collect();
        let (a, _) = jacobi_eigen(&op.dense()).unwrap();
        let (b, _) = jacobi_eigen(&t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * op.diag()[0].abs(), "{x} vs {y}");
        }
    }

    #[test]
    fn interleave_covers_all_indices() {
        for n in 1..9 {
            let mut p = interleave(n);
            assert_eq!(p.len(), n);
            p.sort_unstable();
            assert_eq!(p, (0..n).collect::<Vec<_>>());
        }
        assert_eq!(interleave(5), vec![0, 4, 1, 3, 2]);
    }
}
