//! Eigendecomposition of normal matrices through the complex Schur form.
//!
//! For a normal matrix the Schur factor is diagonal, so the accumulated
//! unitary from Hessenberg reduction plus shifted QR is already an
//! orthonormal eigenbasis, including inside degenerate eigenspaces.

use num_complex::Complex64;

use super::qr::householder;
use super::{ComplexMatrix, Tolerances};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Unitary similarity to upper Hessenberg form: `A = Q H Q^dagger`.
pub fn hessenberg(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.ensure_square()?;
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let (v, beta, alpha) = householder(&x);
        if beta == 0.0 {
            continue;
        }
        let off = k + 1;
        // H <- P H
        for j in k..n {
            let s: Complex64 = (off..n).map(|i| v[i - off].conj() * h[(i, j)]).sum::<Complex64>() * beta;
            for i in off..n {
                let vi = v[i - off];
                h[(i, j)] -= vi * s;
            }
        }
        h[(off, k)] = alpha;
        for i in off + 1..n {
            h[(i, k)] = ZERO;
        }
        // H <- H P, Q <- Q P
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let row = m.row_mut(i);
                let s: Complex64 = (off..n).map(|j| row[j] * v[j - off]).sum::<Complex64>() * beta;
                for j in off..n {
                    row[j] -= s * v[j - off].conj();
                }
            }
        }
    }
    Ok((h, q))
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

#[inline]
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: Complex64, from: usize) {
    let cols = m.cols();
    for j in from..cols {
        let a = m[(p, j)];
        let b = m[(q, j)];
        m[(p, j)] = a * c + s * b;
        m[(q, j)] = b * c - s.conj() * a;
    }
}

/// Right-multiplies columns `p, q` by `G^dagger` on rows `0..to`.
#[inline]
fn rotate_cols(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: Complex64, to: usize) {
    for i in 0..to {
        let row = m.row_mut(i);
        let a = row[p];
        let b = row[q];
        row[p] = a * c + b * s.conj();
        row[q] = b * c - a * s;
    }
}

/// Complex Schur decomposition `A = Z T Z^dagger` by single-shift QR with
/// Wilkinson shifts.
pub fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.ensure_square()?;
    let (mut t, mut z) = hessenberg(a)?;
    if n == 1 {
        return Ok((t, z));
    }
    let eps = f64::EPSILON;
    let norm = t.frobenius_norm();
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let diag = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            if sub <= eps * diag || sub <= eps * norm {
                t[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::Numerical("QR iteration failed to converge".into()));
        }

        let shift = if iter % 11 == 10 {
            // exceptional shift to break cycles
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            let a11 = t[(hi - 1, hi - 1)];
            let a12 = t[(hi - 1, hi)];
            let a21 = t[(hi, hi - 1)];
            let a22 = t[(hi, hi)];
            let half_tr = (a11 + a22) * 0.5;
            let disc = ((a11 - a22) * 0.5).powi(2) + a12 * a21;
            let root = disc.sqrt();
            let l1 = half_tr + root;
            let l2 = half_tr - root;
            if (l1 - a22).norm() <= (l2 - a22).norm() {
                l1
            } else {
                l2
            }
        };

        // implicit single-shift sweep over lo..=hi
        let (c, s) = givens(t[(lo, lo)] - shift, t[(lo + 1, lo)]);
        rotate_rows(&mut t, lo, lo + 1, c, s, lo);
        rotate_cols(&mut t, lo, lo + 1, c, s, (lo + 3).min(hi + 1).max(lo + 2));
        rotate_cols(&mut z, lo, lo + 1, c, s, n);
        for k in lo + 1..hi {
            let (c, s) = givens(t[(k, k - 1)], t[(k + 1, k - 1)]);
            rotate_rows(&mut t, k, k + 1, c, s, k - 1);
            t[(k + 1, k - 1)] = ZERO;
            rotate_cols(&mut t, k, k + 1, c, s, (k + 3).min(hi + 1));
            rotate_cols(&mut z, k, k + 1, c, s, n);
        }
    }
    Ok((t, z))
}

/// Eigenpairs of a normal matrix.
#[derive(Debug, Clone)]
pub struct NormalEigen {
    pub values: Vec<Complex64>,
    /// Unitary matrix whose columns are the eigenvectors, in `values` order.
    pub vectors: ComplexMatrix,
    /// `||M V - V diag(values)||_F`.
    pub residual: f64,
}

/// `||M M^dagger - M^dagger M||_F`.
pub fn normality_residual(m: &ComplexMatrix) -> f64 {
    let mh = m.adjoint();
    (&(m * &mh) - &(&mh * m)).frobenius_norm()
}

/// Eigendecomposition of a normal matrix.
///
/// Fails with [`Error::NonNormal`] when the commutator residual exceeds
/// `eig_residual * ||M||^2`, and with [`Error::Numerical`] when the computed
/// pairs violate the residual or unitarity contract.
pub fn eig_normal(m: &ComplexMatrix, tol: &Tolerances) -> Result<NormalEigen> {
    let n = m.ensure_square()?;
    let mnorm = m.frobenius_norm();
    let comm = normality_residual(m);
    if comm > tol.eig_residual * mnorm * mnorm {
        return Err(Error::NonNormal { residual: comm / (mnorm * mnorm).max(f64::MIN_POSITIVE) });
    }
    let (t, vectors) = schur(m)?;
    let values = t.diagonal();
    let mv = m * &vectors;
    let mut res = 0.0;
    for i in 0..n {
        for j in 0..n {
            res += (mv[(i, j)] - vectors[(i, j)] * values[j]).norm_sqr();
        }
    }
    let residual = res.sqrt();
    if residual > tol.eig_residual * mnorm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::Numerical(format!("eigen residual {residual:e} exceeds tolerance")));
    }
    let unit = vectors.unitarity_residual();
    if unit > tol.unitarity_bound(n) {
        return Err(Error::Numerical(format!("eigenvector unitarity residual {unit:e} exceeds tolerance")));
    }
    Ok(NormalEigen { values, vectors, residual })
}

/// Singular values in ascending order, from the Hermitian embedding
/// `[[0, A], [A^dagger, 0]]` whose spectrum is `{+s_i, -s_i}`. This keeps
/// small singular values at absolute accuracy `eps ||A||`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.ensure_square()?;
    let ah = a.adjoint();
    let mut big = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, n + j)] = a[(i, j)];
            big[(n + i, j)] = ah[(i, j)];
        }
    }
    let (t, _) = schur(&big)?;
    let mut vals: Vec<f64> = t.diagonal().iter().map(|z| z.re).collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut sv: Vec<f64> = vals[..n].iter().map(|&x| x.max(0.0)).collect();
    sv.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(sv)
}
