//! Seeded generators for test matrices.
//!
//! Uniforms come from ChaCha8 seeded with a `u64`; Gaussians are drawn by
//! Box-Muller in row-major order, so fixtures are bit-stable across
//! platforms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lacore::{principal_sqrt, qr_householder, Complex64, ComplexMatrix, Tolerances};
use crate::pfbase::SkewMatrix;
use crate::wigner::{reconstruct, NormalForm, SigmaBlock};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard complex Gaussian, real and imaginary parts each `N(0, 1)`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    Complex64::new(r * c, r * s)
}

pub fn random_ginibre_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Square matrix of i.i.d. standard complex Gaussians.
pub fn random_ginibre(dim: usize, seed: u64) -> ComplexMatrix {
    random_ginibre_with(dim, &mut rng_from_seed(seed))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre_with(dim, rng);
    let (mut q, r) = qr_householder(&g).expect("square input");
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(dim, &mut rng_from_seed(seed))
}

/// `(G - G^T) / 2` for a Ginibre `G`.
pub fn random_skew(dim: usize, seed: u64) -> SkewMatrix {
    SkewMatrix::antisymmetrize(&random_ginibre(dim, seed)).expect("square input")
}

/// Random complex symmetric matrix `(G + G^T) / 2`.
pub fn random_symmetric(dim: usize, seed: u64) -> ComplexMatrix {
    let g = random_ginibre(dim, seed);
    ComplexMatrix::from_fn(dim, dim, |i, j| (g[(i, j)] + g[(j, i)]) * 0.5)
}

/// Spectral class of one entry of a [`SpectrumSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecClass {
    ComplexPair,
    NegativeReal,
    PositiveReal,
    Zero,
}

/// One eigenvalue of `A A*` with its multiplicity.
///
/// For `complex_pair`, `omega` (with `Im > 0`) and its conjugate each appear
/// `multiplicity` times, using `2 * multiplicity` dimensions. For the real
/// classes `multiplicity` counts dimensions directly; `negative_real` needs
/// it even.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub class: SpecClass,
    #[serde(with = "complex_pair_json", default = "zero_omega")]
    pub omega: Complex64,
    pub multiplicity: usize,
}

fn zero_omega() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

mod complex_pair_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Prescribed spectrum of `A A*` plus the seed for the unitary factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    pub blocks: Vec<SpectrumEntry>,
    #[serde(default)]
    pub seed: u64,
    /// Optional expected matrix size, checked against the blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl SpectrumSpec {
    pub fn new(blocks: Vec<SpectrumEntry>, seed: u64) -> Self {
        Self { blocks, seed, dim: None }
    }

    pub fn entry(class: SpecClass, omega: Complex64, multiplicity: usize) -> SpectrumEntry {
        SpectrumEntry { class, omega, multiplicity }
    }

    pub fn assembled_dim(&self) -> usize {
        self.blocks
            .iter()
            .map(|e| match e.class {
                SpecClass::ComplexPair => 2 * e.multiplicity,
                _ => e.multiplicity,
            })
            .sum()
    }

    /// Checks the class conventions and translates to normal-form blocks.
    pub fn sigma_blocks(&self) -> Result<Vec<SigmaBlock>> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidSpec("spectrum has no entries".into()));
        }
        let mut out = Vec::with_capacity(self.blocks.len());
        for e in &self.blocks {
            let w = e.omega;
            if e.multiplicity == 0 {
                return Err(Error::InvalidSpec("multiplicity must be positive".into()));
            }
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::InvalidSpec("omega must be finite".into()));
            }
            let block = match e.class {
                SpecClass::ComplexPair => {
                    if !(w.im > 0.0) {
                        return Err(Error::InvalidSpec(format!("complex_pair needs Im omega > 0, got {w}")));
                    }
                    SigmaBlock::OffDiag { s: principal_sqrt(w), multiplicity: e.multiplicity }
                }
                SpecClass::NegativeReal => {
                    if w.im != 0.0 || !(w.re < 0.0) {
                        return Err(Error::InvalidSpec(format!("negative_real needs real omega < 0, got {w}")));
                    }
                    if e.multiplicity % 2 == 1 {
                        return Err(Error::InvalidSpec("negative_real multiplicity must be even".into()));
                    }
                    SigmaBlock::OffDiag {
                        s: Complex64::new(0.0, (-w.re).sqrt()),
                        multiplicity: e.multiplicity / 2,
                    }
                }
                SpecClass::PositiveReal => {
                    if w.im != 0.0 || !(w.re > 0.0) {
                        return Err(Error::InvalidSpec(format!("positive_real needs real omega > 0, got {w}")));
                    }
                    SigmaBlock::Real1 { sigma: w.re.sqrt(), multiplicity: e.multiplicity }
                }
                SpecClass::Zero => {
                    if w != zero_omega() {
                        return Err(Error::InvalidSpec(format!("zero class needs omega = 0, got {w}")));
                    }
                    SigmaBlock::Real1 { sigma: 0.0, multiplicity: e.multiplicity }
                }
            };
            out.push(block);
        }
        let dim = self.assembled_dim();
        if let Some(d) = self.dim {
            if d != dim {
                return Err(Error::InvalidSpec(format!("spectrum assembles to {dim} dimensions, expected {d}")));
            }
        }
        Ok(out)
    }
}

/// `A = U Sigma U^T` for the prescribed spectrum and a random unitary `U`,
/// together with the normal form used to build it.
pub fn conjugate_normal_with_form(spec: &SpectrumSpec) -> Result<(ComplexMatrix, NormalForm)> {
    let blocks = spec.sigma_blocks()?;
    let u = random_unitary(spec.assembled_dim(), spec.seed);
    let nf = NormalForm::from_parts(u, blocks, &Tolerances::default())?;
    Ok((reconstruct(&nf), nf))
}

/// Conjugate-normal matrix whose `A A*` has the prescribed spectrum.
pub fn random_conjugate_normal(spec: &SpectrumSpec) -> Result<ComplexMatrix> {
    conjugate_normal_with_form(spec).map(|(a, _)| a)
}

/// Random spectrum with `half_dim` off-diagonal pairs and no non-negative
/// real eigenvalues, so the normal-form Pfaffian is defined.
///
/// Mixes complex pairs and negative reals, `|omega|` in `[0.25, 4]`, with
/// `Im omega >= 0.05 |omega|` for complex entries and distinct entries at
/// least `1e-3` apart. When `degeneracy > 1` the first entry is repeated
/// that many times (a negative-real first entry then spans
/// `2 * degeneracy` eigenvalues).
pub fn random_pfaffian_spectrum(half_dim: usize, degeneracy: usize, seed: u64) -> SpectrumSpec {
    assert!(half_dim >= 1);
    let degeneracy = degeneracy.clamp(1, half_dim);
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut taken: Vec<Complex64> = Vec::new();
    let mut draw = |rng: &mut ChaCha8Rng| -> (SpecClass, Complex64) {
        loop {
            let r = 0.25 * 16f64.powf(rng.gen::<f64>());
            let (class, w) = if rng.gen::<f64>() < 0.3 {
                (SpecClass::NegativeReal, Complex64::new(-r, 0.0))
            } else {
                let theta = 0.05 + (PI - 0.1) * rng.gen::<f64>();
                (SpecClass::ComplexPair, Complex64::from_polar(r, theta))
            };
            if taken.iter().all(|&t| (t - w).norm() >= 1e-3) {
                taken.push(w);
                return (class, w);
            }
        }
    };
    let mut blocks = Vec::new();
    let mut remaining = half_dim;
    let (class, w) = draw(&mut rng);
    blocks.push(match class {
        SpecClass::NegativeReal => SpectrumSpec::entry(class, w, 2 * degeneracy),
        _ => SpectrumSpec::entry(class, w, degeneracy),
    });
    remaining -= degeneracy;
    while remaining > 0 {
        let (class, w) = draw(&mut rng);
        blocks.push(match class {
            SpecClass::NegativeReal => SpectrumSpec::entry(class, w, 2),
            _ => SpectrumSpec::entry(class, w, 1),
        });
        remaining -= 1;
    }
    SpectrumSpec::new(blocks, seed)
}
