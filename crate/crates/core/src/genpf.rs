//! Generalized Pfaffians of non-antisymmetric matrices.
//!
//! * Normal-form Pfaffian: for conjugate-normal `A = U Sigma U^T` of size
//!   `2n` with non-singular antisymmetric part,
//!   `pf(A) = i^(n^2) det(U) sqrt(|det Sigma|)`. It squares to `det(A)`.
//! * Antisymmetrized Pfaffian: `pf((A - A^T) / 2)`, defined for every matrix
//!   and equal to the Pfaffian polynomial evaluated on `A`.
//! * For conjugate-normal `A` the two differ by the positive factor
//!   `sqrt(det(A) / det((A - A^T) / 2))`.

use crate::error::{Error, Result};
use crate::lacore::{det_lu, inverse, Complex64, ComplexMatrix, Lu, Tolerances};
use crate::mgen;
use crate::pfbase::{pf_polynomial, pf_skew_householder, SkewMatrix};
use crate::wigner::{antisymmetric_part, is_conjugate_normal, wigner_normal_form, NormalForm, SigmaBlock};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Blocks with `|s|` or `sigma` below this fraction of `||A||_F` count as zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;

/// Largest tolerated `|Im r / Re r|` for the ratio `r = det(A) / det(A_as)`.
pub const RATIO_PHASE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfMethod {
    NormalForm,
    Antisymmetrized,
    Relation,
    Polynomial,
}

impl PfMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PfMethod::NormalForm => "normal_form",
            PfMethod::Antisymmetrized => "antisymmetrized",
            PfMethod::Relation => "relation",
            PfMethod::Polynomial => "polynomial",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfDiagnostics {
    pub det_a: Complex64,
    /// Determinant of `(A - A^T) / 2`.
    pub det_as: Complex64,
    pub conjugate_normal_residual: f64,
    pub singular: bool,
    /// Relative gap to the value recomputed through the determinant ratio,
    /// when that route is applicable.
    pub cross_check_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfResult {
    pub value: Complex64,
    pub method: PfMethod,
    pub diagnostics: PfDiagnostics,
}

/// `i^(n^2)` on the exact four-cycle.
pub fn i_pow_n_squared(n: usize) -> Complex64 {
    match (n % 4) * (n % 4) % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => -ONE,
        _ => Complex64::new(0.0, -1.0),
    }
}

fn relative(lhs: Complex64, rhs: Complex64) -> f64 {
    let diff = (lhs - rhs).norm();
    if diff == 0.0 {
        0.0
    } else if rhs.norm() > 0.0 {
        diff / rhs.norm()
    } else {
        diff
    }
}

/// Evaluates `i^(n^2) det(U) prod |s|` on a normal form.
///
/// Returns `Ok(None)` for numerically singular forms (a zero block).
pub fn pfaffian_from_normal_form(nf: &NormalForm, a_norm: f64) -> Result<Option<Complex64>> {
    let zero = SINGULAR_THRESHOLD * a_norm;
    let singular = nf.blocks().iter().any(|b| match *b {
        SigmaBlock::OffDiag { s, .. } => s.norm() <= zero,
        SigmaBlock::Real1 { sigma, .. } => sigma <= zero,
    });
    if singular {
        return Ok(None);
    }
    if let Some(SigmaBlock::Real1 { sigma, .. }) = nf.blocks().iter().find(|b| matches!(b, SigmaBlock::Real1 { .. })) {
        return Err(Error::PositiveRealEigenvalue { omega: sigma * sigma });
    }
    let magnitude: f64 = nf
        .blocks()
        .iter()
        .map(|b| match *b {
            SigmaBlock::OffDiag { s, multiplicity } => s.norm().powi(multiplicity as i32),
            SigmaBlock::Real1 { .. } => 1.0,
        })
        .product();
    Ok(Some(i_pow_n_squared(nf.half_dim()) * nf.det_u() * magnitude))
}

fn checked_conjugate_normal(a: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let (ok, residual) = is_conjugate_normal(a, tol)?;
    if ok {
        Ok(residual)
    } else {
        Err(Error::NotConjugateNormal { residual })
    }
}

/// `sqrt(r)` for the determinant ratio, after checking `r` is positive real.
fn ratio_root(det_a: Complex64, det_as: Complex64) -> Result<f64> {
    if det_as == ZERO {
        return Err(Error::Singular);
    }
    let r = det_a / det_as;
    if !(r.re > 0.0) || (r.im / r.re).abs() > RATIO_PHASE_TOLERANCE {
        return Err(Error::RatioNotPositive { re: r.re, im: r.im });
    }
    Ok(r.re.sqrt())
}

/// Normal-form Pfaffian of a conjugate-normal matrix.
///
/// Singular inputs give `0` with `singular = true`. A non-singular input
/// whose `A A*` has a positive real eigenvalue has no Pfaffian and yields
/// [`Error::PositiveRealEigenvalue`]; odd dimensions always land in one of
/// these two cases.
pub fn generalized_pfaffian(a: &ComplexMatrix, tol: &Tolerances) -> Result<PfResult> {
    let residual = checked_conjugate_normal(a, tol)?;
    let nf = wigner_normal_form(a, tol)?;
    generalized_pfaffian_with_form(a, &nf, residual)
}

/// Same as [`generalized_pfaffian`] with a precomputed normal form.
pub fn generalized_pfaffian_with_form(a: &ComplexMatrix, nf: &NormalForm, cn_residual: f64) -> Result<PfResult> {
    let det_a = det_lu(a)?;
    let a_as = antisymmetric_part(a)?;
    let det_as = det_lu(&a_as)?;
    let value = pfaffian_from_normal_form(nf, a.frobenius_norm())?;
    let (value, singular, cross_check_residual) = match value {
        None => (ZERO, true, None),
        Some(v) => {
            let check = ratio_root(det_a, det_as).ok().map(|root| {
                let via = pf_skew_householder(&SkewMatrix::antisymmetrize(a).expect("square")) * root;
                relative(via, v)
            });
            (v, false, check)
        }
    };
    Ok(PfResult {
        value,
        method: PfMethod::NormalForm,
        diagnostics: PfDiagnostics { det_a, det_as, conjugate_normal_residual: cn_residual, singular, cross_check_residual },
    })
}

/// `pf((A - A^T) / 2)`, defined for every square matrix (odd dimension
/// gives zero).
pub fn antisymmetrized_pfaffian(a: &ComplexMatrix) -> Result<PfResult> {
    let skew = SkewMatrix::antisymmetrize(a)?;
    let value = pf_skew_householder(&skew);
    let det_a = det_lu(a)?;
    let det_as = det_lu(skew.matrix())?;
    let (_, residual) = is_conjugate_normal(a, &Tolerances::default())?;
    Ok(PfResult {
        value,
        method: PfMethod::Antisymmetrized,
        diagnostics: PfDiagnostics {
            det_a,
            det_as,
            conjugate_normal_residual: residual,
            singular: value == ZERO,
            cross_check_residual: None,
        },
    })
}

fn via_relation(a: &ComplexMatrix, tol: &Tolerances, method: PfMethod) -> Result<PfResult> {
    let residual = checked_conjugate_normal(a, tol)?;
    let skew = SkewMatrix::antisymmetrize(a)?;
    let det_a = det_lu(a)?;
    let det_as = det_lu(skew.matrix())?;
    let root = ratio_root(det_a, det_as)?;
    let tilde = match method {
        PfMethod::Polynomial => pf_polynomial(a)?,
        _ => pf_skew_householder(&skew),
    };
    Ok(PfResult {
        value: tilde * root,
        method,
        diagnostics: PfDiagnostics {
            det_a,
            det_as,
            conjugate_normal_residual: residual,
            singular: false,
            cross_check_residual: None,
        },
    })
}

/// `sqrt(det(A) / det((A - A^T)/2)) * pf((A - A^T)/2)` for conjugate-normal
/// `A` with non-singular antisymmetric part.
pub fn generalized_pfaffian_via_relation(a: &ComplexMatrix, tol: &Tolerances) -> Result<PfResult> {
    via_relation(a, tol, PfMethod::Relation)
}

/// The relation route with the antisymmetrized Pfaffian taken from the
/// matching polynomial (dimension at most 12).
pub fn generalized_pfaffian_via_polynomial(a: &ComplexMatrix, tol: &Tolerances) -> Result<PfResult> {
    via_relation(a, tol, PfMethod::Polynomial)
}

/// Directional derivative `pf(A) tr(A^-1 dA) / 2`.
pub fn pfaffian_derivative(a: &ComplexMatrix, da: &ComplexMatrix, tol: &Tolerances) -> Result<Complex64> {
    if da.rows() != a.rows() || da.cols() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "direction is {}x{}, matrix is {}x{}",
            da.rows(),
            da.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let pf = generalized_pfaffian(a, tol)?;
    if pf.diagnostics.singular {
        return Err(Error::Singular);
    }
    let x = Lu::new(a)?.solve(da)?;
    Ok(pf.value * x.trace() * 0.5)
}

/// One evaluated identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Relative residual `|lhs - rhs| / |rhs|`; radians for the phase check.
    pub residual: f64,
    pub threshold: f64,
    /// Set when the identity does not apply to this input.
    pub skipped: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.skipped || self.residual <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().filter(|c| !c.skipped).map(|c| c.residual).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub threshold: f64,
    pub phase_threshold: f64,
    /// Seed of the random unitary used for the congruence check.
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { threshold: 1e-8, phase_threshold: 1e-7, seed: 0x5eed }
    }
}

/// Runs the identity battery with default thresholds.
pub fn identity_report(a: &ComplexMatrix, b: &ComplexMatrix, lambda: Complex64, tol: &Tolerances) -> Result<IdentityReport> {
    identity_report_with(a, b, lambda, tol, &ReportOptions::default())
}

/// Evaluates the algebraic identities of the normal-form Pfaffian on `A`:
/// determinant, scaling by `lambda`, transpose, adjoint, inverse, direct sum
/// with `A^dagger`, tensor product with the symmetric `B`, a row/column
/// interchange, unitary congruence, the determinant-ratio relation and the
/// phase agreement with the antisymmetrized Pfaffian. The adjoint and inverse
/// checks carry the factor `(-1)^n`, as for the classical Pfaffian.
pub fn identity_report_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    lambda: Complex64,
    tol: &Tolerances,
    opts: &ReportOptions,
) -> Result<IdentityReport> {
    let dim = a.ensure_square()?;
    let m = b.ensure_square()?;
    let sym_residual = (b - &b.transpose()).frobenius_norm();
    if sym_residual > 1e-12 * (1.0 + b.frobenius_norm()) {
        return Err(Error::NotSymmetric { residual: sym_residual });
    }
    let n = dim / 2;
    let pf = |x: &ComplexMatrix| generalized_pfaffian(x, tol);
    let base = pf(a)?;
    let p = base.value;
    let singular = base.diagnostics.singular;
    let sign_n = if n % 2 == 0 { ONE } else { -ONE };

    let mut checks = Vec::new();
    let mut push = |name: &'static str, lhs: Complex64, rhs: Complex64, threshold: f64, skipped: bool| {
        checks.push(IdentityCheck { name, lhs, rhs, residual: if skipped { 0.0 } else { relative(lhs, rhs) }, threshold, skipped });
    };
    let t = opts.threshold;

    push("determinant", p * p, base.diagnostics.det_a, t, false);
    push("scaling", pf(&a.scale(lambda))?.value, lambda.powu(n as u32) * p, t, false);
    push("transpose", pf(&a.transpose())?.value, sign_n * p, t, false);
    let adj = pf(&a.adjoint())?.value;
    push("adjoint", adj, sign_n * p.conj(), t, false);
    if singular {
        push("inverse", ZERO, ZERO, t, true);
    } else {
        let inv = inverse(a)?;
        push("inverse", pf(&inv)?.value, sign_n / p, t, false);
    }
    push("direct_sum", pf(&a.direct_sum(&a.adjoint()))?.value, p * adj, t, false);

    let det_b = det_lu(b)?;
    let exp = n * m * (m.saturating_sub(1)) / 2;
    let tensor_sign = if exp % 2 == 0 { ONE } else { -ONE };
    let tensor_rhs = tensor_sign * p.powu(m as u32) * det_b.powu(n as u32);
    push("tensor", pf(&a.kron(b))?.value, tensor_rhs, t, false);

    let mut swapped = a.clone();
    swapped.swap_rows(0, dim - 1);
    swapped.swap_cols(0, dim - 1);
    push("row_swap", pf(&swapped)?.value, -p, t, dim < 2);

    let u = mgen::random_unitary(dim, opts.seed);
    let congruent = &(&u * a) * &u.transpose();
    push("unitary_congruence", pf(&congruent)?.value, det_lu(&u)? * p, t, false);

    if singular {
        push("relation", ZERO, ZERO, t, true);
        push("phase", ZERO, ZERO, opts.phase_threshold, true);
    } else {
        let rel = generalized_pfaffian_via_relation(a, tol)?.value;
        push("relation", rel, p, t, false);
        let tilde = antisymmetrized_pfaffian(a)?.value;
        let applicable = tilde.norm() >= 1e-6;
        let diff = if applicable { (tilde / p).arg().abs() } else { 0.0 };
        checks.push(IdentityCheck {
            name: "phase",
            lhs: Complex64::new(tilde.arg(), 0.0),
            rhs: Complex64::new(p.arg(), 0.0),
            residual: diff,
            threshold: opts.phase_threshold,
            skipped: !applicable,
        });
    }
    Ok(IdentityReport { checks })
}
