//! Cyclic Jacobi diagonalisation of small dense Hermitian matrices. Slow but
//! unconditionally robust; used for subspace rotations and as a reference
//! for the banded solver.

use num_complex::Complex;

use crate::error::{ensure, Result};
use crate::scalar::{Real, C};
use crate::spectrum::{Eigenfunction, Spectrum, SpectrumKind};
use crate::wavefunction::WaveFunction;

use super::DiscreteOperator;

/// Eigenvalues (ascending) and eigenvectors (`vectors[k]` belongs to
/// `values[k]`) of a Hermitian matrix given by rows.
#[allow(clippy::type_complexity)]
pub fn jacobi_eigen<T: Real>(matrix: &[Vec<C<T>>]) -> Result<(Vec<T>, Vec<Vec<C<T>>>)> {
    let n = matrix.len();
    ensure!(matrix.iter().all(|r| r.len() == n), Domain, "matrix is not square");
    let zero = Complex::new(T::zero(), T::zero());
    let mut a: Vec<Vec<C<T>>> = matrix.to_vec();
    let mut v: Vec<Vec<C<T>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex::new(T::one(), T::zero()) } else { zero }).collect())
        .collect();
    let scale = a.iter().flatten().fold(T::zero(), |m, x| m.max(x.norm()));
    let off = |a: &Vec<Vec<C<T>>>| {
        let mut s = T::zero();
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x.norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let target = T::epsilon() * scale * T::of_usize(n.max(1));
    let mut sweep = 0;
    while off(&a) > target {
        sweep += 1;
        ensure!(sweep <= 100, Numerical, "Jacobi sweeps did not converge");
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q][q].re - a[p][p].re) / (T::of(2.0) * r);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g = [
                    [Complex::new(c, T::zero()), Complex::new(s, T::zero())],
                    [-phase.conj() * s, phase.conj() * c],
                ];
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * g[0][0] + y * g[1][0];
                    row[q] = x * g[0][1] + y * g[1][1];
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = g[0][0].conj() * x + g[1][0].conj() * y;
                    a[q][k] = g[0][1].conj() * x + g[1][1].conj() * y;
                }
                a[p][q] = zero;
                a[q][p] = zero;
                a[p][p].im = T::zero();
                a[q][q].im = T::zero();
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * g[0][0] + y * g[1][0];
                    row[q] = x * g[0][1] + y * g[1][1];
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).expect("finite").then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i][i].re).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|i| v[i][k]).collect()).collect();
    Ok((values, vectors))
}

/// Dense reference solve of the `k` lowest eigenpairs, `O(n^3)`.
pub fn dense_eigensolve<T: Real>(op: &DiscreteOperator<T>, k: usize) -> Result<Spectrum<T>> {
    ensure!(k <= op.n(), Domain, "{k} eigenpairs requested from a {}-point operator", op.n());
    let (values, vectors) = jacobi_eigen(&op.dense())?;
    let scale = T::one() / op.grid().h().sqrt();
    let funcs = vectors
        .into_iter()
        .take(k)
        .map(|v| {
            let wf = WaveFunction::new(op.grid().clone(), v.into_iter().map(|x| x * scale).collect())?;
            Ok(Eigenfunction::Sampled(wf))
        })
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(SpectrumKind::Hamiltonian, (0..k as i64).collect(), values[..k].to_vec(), Some(funcs))
}
