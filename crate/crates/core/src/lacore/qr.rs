use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::Result;

/// Computes a complex Householder reflector for `x`.
///
/// Returns `(v, beta)` with `v[0] = 1` such that `(1 - beta v v^dagger) x = alpha e_1`
/// and the resulting `alpha`. When `x` is already a multiple of `e_1`, `beta = 0`.
pub(crate) fn householder(x: &[Complex64]) -> (Vec<Complex64>, f64, Complex64) {
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); x.len()];
        v[0] = Complex64::new(1.0, 0.0);
        return (v, 0.0, x[0]);
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
    let alpha = -phase * norm;
    let v0 = x[0] - alpha;
    let mut v: Vec<Complex64> = x.iter().map(|&z| z / v0).collect();
    v[0] = Complex64::new(1.0, 0.0);
    let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (v, 2.0 / vnorm2, alpha)
}

/// Householder QR of a square matrix: `A = Q R` with `Q` unitary and `R`
/// upper triangular (entries below the diagonal are exact zeros).
pub fn qr_householder(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.ensure_square()?;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        let (v, beta, alpha) = householder(&x);
        if beta == 0.0 {
            continue;
        }
        // R <- H R on rows k.., columns k..
        for j in k..n {
            let s: Complex64 = (k..n).map(|i| v[i - k].conj() * r[(i, j)]).sum::<Complex64>() * beta;
            for i in k..n {
                let vi = v[i - k];
                r[(i, j)] -= vi * s;
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = Complex64::new(0.0, 0.0);
        }
        // Q <- Q H
        for i in 0..n {
            let s: Complex64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum::<Complex64>() * beta;
            for j in k..n {
                let vj = v[j - k].conj();
                q[(i, j)] -= s * vj;
            }
        }
    }
    Ok((q, r))
}
