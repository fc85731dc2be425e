//! Lowest eigenpairs of the banded FD operators: bisection on inertia counts
//! for the eigenvalues, inverse iteration for the vectors.
//!
//! Degenerate clusters are made reproducible. When index reversal is a
//! symmetry of the matrix the cluster is rotated onto reflection eigenvectors
//! (even before odd); otherwise vectors are ordered by the position of their
//! largest component. Each vector is finally phased so that its largest
//! component is real and positive.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure, Result};
use crate::scalar::{Real, C};
use crate::spectrum::{Eigenfunction, Spectrum, SpectrumKind};
use crate::wavefunction::WaveFunction;

use super::band::{sturm_count, BandForm, BandLu};
use super::dense::jacobi_eigen;
use super::DiscreteOperator;

const SEED: u64 = 0x5eed_f1d0;
const INVERSE_STEPS: usize = 4;

/// The `k` lowest eigenpairs, ascending. Eigenvectors are normalised in the
/// grid quadrature.
pub fn eigensolve<T: Real>(op: &DiscreteOperator<T>, k: usize) -> Result<Spectrum<T>> {
    let n = op.n();
    ensure!(k <= n, Domain, "{k} eigenpairs requested from a {n}-point operator");
    let form = BandForm::new(op);
    let values = lowest_eigenvalues(&form, k);
    let vectors = eigenvectors(op, &form, &values)?;
    let scale = T::one() / op.grid().h().sqrt();
    let funcs = vectors
        .into_iter()
        .map(|v| {
            let wf = WaveFunction::new(op.grid().clone(), v.into_iter().map(|x| x * scale).collect())?;
            Ok(Eigenfunction::Sampled(wf))
        })
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(SpectrumKind::Hamiltonian, (0..k as i64).collect(), values, Some(funcs))
}

fn lowest_eigenvalues<T: Real>(form: &BandForm<T>, k: usize) -> Vec<T> {
    let (d, e) = form.tridiagonal();
    let norm = form.norm.max(T::one());
    let pivmin = T::min_positive_value().sqrt() * norm;
    let (glo, ghi) = form.gershgorin();
    let pad = T::epsilon() * norm * T::of(4.0);
    let (glo, ghi) = (glo - pad, ghi + pad);
    let abs_tol = T::epsilon() * norm * T::of(2.0);
    let mut out = Vec::with_capacity(k);
    let mut floor = glo;
    for i in 0..k {
        // Invariant: count(lo) <= i < count(hi).
        let mut lo = floor;
        let mut hi = ghi;
        for _ in 0..256 {
            let width = hi - lo;
            if width <= abs_tol.max(T::epsilon() * T::of(2.0) * (lo.abs() + hi.abs())) {
                break;
            }
            let mid = lo + width / T::of(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&d, &e, mid, pivmin) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mid = lo + (hi - lo) / T::of(2.0);
        // Independent bisections of a degenerate level may land an ulp apart.
        out.push(out.last().map_or(mid, |&prev: &T| prev.max(mid)));
        floor = lo;
    }
    out
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
}

fn project_out<T: Real>(v: &mut [C<T>], basis: &[Vec<C<T>>]) {
    // Two passes of classical Gram-Schmidt keep orthogonality at round-off.
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= *y * c;
            }
        }
    }
}

fn eigenvectors<T: Real>(op: &DiscreteOperator<T>, form: &BandForm<T>, values: &[T]) -> Result<Vec<Vec<C<T>>>> {
    let n = op.n();
    let scale = form.norm.max(T::one());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut vectors: Vec<Vec<C<T>>> = Vec::with_capacity(values.len());
    // Vectors whose eigenvalues are this close (relative to |A|) are kept
    // mutually orthogonal during the iteration.
    let group_gap = T::of(1e-3) * scale;
    let mut group_start = 0;
    for (i, &lambda) in values.iter().enumerate() {
        if i > 0 && lambda - values[i - 1] > group_gap {
            group_start = i;
        }
        let lu = BandLu::factor(form, Complex::new(-lambda, T::zero()), Complex::new(T::one(), T::zero()), false)?;
        let mut v: Vec<C<T>> = (0..n)
            .map(|_| {
                let re: f64 = rng.random::<f64>() - 0.5;
                let im: f64 = rng.random::<f64>() - 0.5;
                Complex::new(T::of(re), T::of(im))
            })
            .collect();
        if op.is_real_symmetric() {
            v.iter_mut().for_each(|x| x.im = T::zero());
        }
        project_out(&mut v, &vectors[group_start..]);
        let mut nv = norm(&v);
        ensure!(nv > T::zero(), Numerical, "degenerate start vector");
        v.iter_mut().for_each(|x| *x /= nv);
        for _ in 0..INVERSE_STEPS {
            let mut w = lu.solve(&v);
            project_out(&mut w, &vectors[group_start..]);
            nv = norm(&w);
            ensure!(nv.is_finite() && nv > T::zero(), Numerical, "inverse iteration broke down at eigenvalue {i}");
            v = w.into_iter().map(|x| x / nv).collect();
        }
        vectors.push(v);
    }
    canonicalize(op, values, &mut vectors)?;
    Ok(vectors)
}

/// Index of the largest component, ties going to the lowest index.
fn peak<T: Real>(v: &[C<T>]) -> usize {
    let max = v.iter().fold(T::zero(), |m, x| m.max(x.norm()));
    let cut = max * (T::one() - T::of(1e-9));
    v.iter().position(|x| x.norm() >= cut).unwrap_or(0)
}

fn canonicalize<T: Real>(op: &DiscreteOperator<T>, values: &[T], vectors: &mut [Vec<C<T>>]) -> Result<()> {
    let n = op.n();
    let norm_a = op.diag().iter().fold(T::one(), |m, d| m.max(d.abs()));
    let symmetric = op.has_reflection_symmetry();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() {
            let tol = (T::of(1e-9) * values[end].abs()).max(T::of(64.0) * T::epsilon() * norm_a);
            if values[end] - values[start] <= tol {
                end += 1;
            } else {
                break;
            }
        }
        if end - start > 1 {
            let cluster = &mut vectors[start..end];
            if symmetric {
                let m = cluster.len();
                let reflect = |v: &Vec<C<T>>| -> Vec<C<T>> { (0..n).map(|j| v[n - 1 - j]).collect() };
                let parity: Vec<Vec<C<T>>> = (0..m)
                    .map(|a| (0..m).map(|b| dot(&cluster[a], &reflect(&cluster[b]))).collect())
                    .collect();
                let (ev, evec) = jacobi_eigen(&parity)?;
                let rotated: Vec<Vec<C<T>>> = (0..m)
                    .rev()
                    .map(|col| {
                        let c = &evec[col];
                        let _ = ev[col];
                        (0..n).map(|j| (0..m).map(|b| cluster[b][j] * c[b]).sum()).collect()
                    })
                    .collect();
                cluster.clone_from_slice(&rotated);
            } else {
                cluster.sort_by_key(|v| peak(v));
            }
        }
        start = end;
    }
    for v in vectors.iter_mut() {
        let p = v[peak(v)];
        let phase = p.conj() / p.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
    Ok(())
}
