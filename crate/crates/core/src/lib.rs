//! Wigner normal form of conjugate-normal matrices and two generalizations
//! of the Pfaffian to non-antisymmetric matrices.
//!
//! * [`lacore`]: dense complex matrix type, LU, QR, normal eigensolver.
//! * [`pfbase`]: Pfaffians of skew-symmetric matrices and the polynomial
//!   (perfect-matching) Pfaffian of arbitrary matrices.
//! * [`wigner`]: conjugate-normality test and the normal form `A = U Sigma U^T`.
//! * [`genpf`]: the normal-form Pfaffian, the antisymmetrized Pfaffian, the
//!   relation between them, the derivative and an identity battery.
//! * [`mgen`]: seeded generators for test matrices of every spectral class.
//! * [`cli`]: file formats and the command front-end used by the binary.

pub mod cli;
pub mod error;
pub mod genpf;
pub mod lacore;
pub mod mgen;
pub mod pfbase;
pub mod wigner;

pub use error::{Error, Result};
pub use lacore::{c64, Complex64, ComplexMatrix, Tolerances};
