//! Dense complex matrices and the kernels the rest of the crate builds on.

mod eig;
mod lu;
mod matrix;
mod qr;
mod tol;

pub use eig::{eig_normal, hessenberg, normality_residual, schur, singular_values, NormalEigen};
pub use lu::{det_lu, inverse, Lu};
pub use matrix::{inner, vec_norm, ComplexMatrix};
pub use qr::qr_householder;
pub use tol::Tolerances;

pub(crate) use qr::householder;

pub use num_complex::Complex64;

/// Principal square root, branch cut on the negative real axis, evaluated
/// so that exact inputs like `2i` give exact roots like `1 + i`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return if z.re >= 0.0 { c64(z.re.sqrt(), 0.0) } else { c64(0.0, (-z.re).sqrt()) };
    }
    let t = ((z.norm() + z.re.abs()) * 0.5).sqrt();
    if z.re >= 0.0 {
        c64(t, z.im / (2.0 * t))
    } else {
        c64(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
