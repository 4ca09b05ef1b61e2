//! Pfaffians of skew-symmetric matrices.
//!
//! Two O(n^3) reductions to skew-tridiagonal form (unitary Householder and
//! pivoted Gauss elimination in the Parlett-Reid style) plus the polynomial
//! Pfaffian of an arbitrary matrix, evaluated as a signed sum over perfect
//! matchings. The polynomial form exists to serve as an oracle.

use crate::error::{Error, Result};
use crate::lacore::{householder, Complex64, ComplexMatrix};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest dimension accepted by [`pf_polynomial`].
pub const POLYNOMIAL_MAX_DIM: usize = 12;

/// Relative pivot threshold below which Parlett-Reid declares the matrix
/// singular.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// A square matrix validated to satisfy `A = -A^T` up to
/// `1e-12 (1 + ||A||_F)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(ComplexMatrix);

impl SkewMatrix {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        a.ensure_square()?;
        let residual = a.skew_residual();
        if residual > 1e-12 * (1.0 + a.frobenius_norm()) {
            return Err(Error::NotSkew { residual });
        }
        Ok(Self(a))
    }

    /// `(A - A^T) / 2`, skew by construction.
    pub fn antisymmetrize(a: &ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        Ok(Self(ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] - a[(j, i)]) * 0.5)))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }
}

impl AsRef<ComplexMatrix> for SkewMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Pfaffian by unitary Householder tridiagonalization.
///
/// Each reflector `H` acts as `A <- H A H^T`; its determinant is `-1`. The
/// Pfaffian of the final skew-tridiagonal matrix is the product of the
/// entries `T[2k, 2k+1]`.
pub fn pf_skew_householder(a: &SkewMatrix) -> Complex64 {
    let n = a.dim();
    if n % 2 == 1 {
        return ZERO;
    }
    let mut m = a.0.as_slice().to_vec();
    let mut pf = ONE;
    let mut x = Vec::with_capacity(n);
    let mut w = vec![ZERO; n];
    for i in 0..n - 2 {
        x.clear();
        x.extend((i + 1..n).map(|r| m[r * n + i]));
        let (v, beta, alpha) = householder(&x);
        m[(i + 1) * n + i] = alpha;
        m[i * n + i + 1] = -alpha;
        for r in i + 2..n {
            m[r * n + i] = ZERO;
            m[i * n + r] = ZERO;
        }
        if beta != 0.0 {
            let off = i + 1;
            let len = n - off;
            let vc: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            // w = beta * B conj(v)
            for (r, wr) in w[..len].iter_mut().enumerate() {
                let row = &m[(off + r) * n + off..(off + r) * n + n];
                let dot: Complex64 = row.iter().zip(&vc).map(|(&b, &c)| b * c).sum();
                *wr = dot * beta;
            }
            // B += v w^T - w v^T
            for r in 0..len {
                let (vr, wr) = (v[r], w[r]);
                let row = &mut m[(off + r) * n + off..(off + r) * n + n];
                for ((b, &wc), &vcol) in row.iter_mut().zip(&w[..len]).zip(&v) {
                    *b += vr * wc - wr * vcol;
                }
            }
            pf = -pf;
        }
        if i % 2 == 0 {
            pf *= -alpha;
        }
    }
    pf * m[(n - 2) * n + n - 1]
}

/// Pfaffian by skew Gauss elimination with partial pivoting.
///
/// Returns exactly zero when the best available pivot falls below
/// [`PIVOT_THRESHOLD`] times `||A||_F`.
pub fn pf_skew_parlett_reid(a: &SkewMatrix) -> Complex64 {
    let n = a.dim();
    if n % 2 == 1 {
        return ZERO;
    }
    let threshold = PIVOT_THRESHOLD * a.0.frobenius_norm();
    let mut m = a.0.clone();
    let mut pf = ONE;
    let mut tau = vec![ZERO; n];
    let mut col = vec![ZERO; n];
    for k in (0..n - 1).step_by(2) {
        let (kp, best) = (k + 1..n)
            .map(|r| (r, m[(r, k)].norm()))
            .fold((k + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold || best == 0.0 {
            return ZERO;
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_cols(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            let len = n - k - 2;
            for j in 0..len {
                tau[j] = m[(k, k + 2 + j)] / pivot;
                col[j] = m[(k + 2 + j, k + 1)];
            }
            // A[k+2.., k+2..] += tau col^T - col tau^T
            for r in 0..len {
                let (tr, cr) = (tau[r], col[r]);
                let row = &mut m.row_mut(k + 2 + r)[k + 2..];
                for ((b, &cc), &tc) in row.iter_mut().zip(&col[..len]).zip(&tau[..len]) {
                    *b += tr * cc - cr * tc;
                }
            }
        }
    }
    pf
}

/// Polynomial Pfaffian of an arbitrary even-dimensional matrix,
/// `1/(2^n n!) sum_pi sgn(pi) prod_i a[pi(2i-1), pi(2i)]`.
///
/// Evaluated over the `(2n-1)!!` perfect matchings: grouping the `2^n n!`
/// permutations that induce one matching turns each matching's contribution
/// into `sgn(M) prod (a_ij - a_ji) / 2`. Odd dimension gives zero.
pub fn pf_polynomial(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.ensure_square()?;
    if n % 2 == 1 {
        return Ok(ZERO);
    }
    if n > POLYNOMIAL_MAX_DIM {
        return Err(Error::SizeGuard { dim: n, max: POLYNOMIAL_MAX_DIM });
    }
    let half = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] - a[(j, i)]) * 0.5);
    let mut free: Vec<usize> = (0..n).collect();
    Ok(matching_sum(&half, &mut free))
}

/// Expansion along the smallest free index: pairing it with the element at
/// position `p` of the remaining list contributes sign `(-1)^(p-1)`.
fn matching_sum(a: &ComplexMatrix, free: &mut Vec<usize>) -> Complex64 {
    if free.is_empty() {
        return ONE;
    }
    let first = free.remove(0);
    let mut total = ZERO;
    for p in 0..free.len() {
        let partner = free.remove(p);
        let entry = a[(first, partner)];
        if entry != ZERO {
            let sub = matching_sum(a, free);
            if p % 2 == 0 {
                total += entry * sub;
            } else {
                total -= entry * sub;
            }
        }
        free.insert(p, partner);
    }
    free.insert(0, first);
    total
}
