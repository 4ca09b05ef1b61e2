#![allow(dead_code)]

use genpfaff::lacore::Lu;
use genpfaff::mgen::{self, SpecClass, SpectrumEntry, SpectrumSpec};
use genpfaff::wigner::{assemble_sigma, reconstruct, NormalForm, SigmaBlock};
use genpfaff::{c64, Complex64, ComplexMatrix, Tolerances};
use itertools::Itertools;
use rand::Rng;

/// Sign of a permutation given as a vector of images, by cycle counting.
pub fn permutation_sign(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// `(1 / (2^n n!)) sum_pi sgn(pi) prod_i a[pi(2i), pi(2i+1)]` over all
/// `(2n)!` permutations, evaluated literally.
pub fn permutation_pfaffian(a: &ComplexMatrix) -> Complex64 {
    let dim = a.rows();
    assert!(dim % 2 == 0 && dim <= 8, "permutation oracle is factorial");
    let n = dim / 2;
    let mut acc = c64(0.0, 0.0);
    for p in (0..dim).permutations(dim) {
        let mut term = c64(permutation_sign(&p), 0.0);
        for i in 0..n {
            term *= a[(p[2 * i], p[2 * i + 1])];
        }
        acc += term;
    }
    let norm = (1..=n).map(|k| 2.0 * k as f64).product::<f64>();
    acc / norm
}

/// Leibniz formula for the determinant.
pub fn leibniz_det(a: &ComplexMatrix) -> Complex64 {
    let dim = a.rows();
    assert!(dim <= 8);
    let mut acc = c64(0.0, 0.0);
    for p in (0..dim).permutations(dim) {
        let mut term = c64(permutation_sign(&p), 0.0);
        for (i, &j) in p.iter().enumerate() {
            term *= a[(i, j)];
        }
        acc += term;
    }
    acc
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Half-dimension and degeneracy for corpus member `k`: sizes `2n` from 2
/// to 40, and every fifth member degenerate (2- to 4-fold).
pub fn corpus_shape(k: usize) -> (usize, usize) {
    let half = 1 + (k * 7 + k / 20) % 20;
    let degeneracy = if k % 5 == 0 { (2 + k / 5 % 3).min(half) } else { 1 };
    (half, degeneracy)
}

/// The mixed complex / negative-real corpus used for the Pfaffian checks.
pub fn pfaffian_corpus(count: usize, seed: u64) -> Vec<(SpectrumSpec, ComplexMatrix)> {
    (0..count)
        .map(|k| {
            let (half, deg) = corpus_shape(k);
            let spec = mgen::random_pfaffian_spectrum(half, deg, seed.wrapping_add(k as u64));
            let a = mgen::random_conjugate_normal(&spec).expect("generator accepts its own spectra");
            (spec, a)
        })
        .collect()
}

pub fn is_degenerate(spec: &SpectrumSpec) -> bool {
    spec.blocks.iter().any(|e| match e.class {
        SpecClass::NegativeReal => e.multiplicity > 2,
        _ => e.multiplicity > 1,
    })
}

/// Spectrum spanning every class, including positive reals and zeros.
pub fn all_class_spectrum(seed: u64) -> SpectrumSpec {
    let mut rng = mgen::rng_from_seed(seed);
    let mut blocks: Vec<SpectrumEntry> = Vec::new();
    let mut used: Vec<Complex64> = Vec::new();
    let entries = rng.gen_range(1..=5);
    for _ in 0..entries {
        let mult = if rng.gen_bool(0.3) { rng.gen_range(2..=3) } else { 1 };
        let entry = loop {
            let r = 0.25 + 3.75 * rng.gen::<f64>();
            let e = match rng.gen_range(0..4) {
                0 => SpectrumSpec::entry(SpecClass::ComplexPair, Complex64::from_polar(r, 0.1 + 2.9 * rng.gen::<f64>()), mult),
                1 => SpectrumSpec::entry(SpecClass::NegativeReal, c64(-r, 0.0), 2 * mult),
                2 => SpectrumSpec::entry(SpecClass::PositiveReal, c64(r, 0.0), mult),
                _ => SpectrumSpec::entry(SpecClass::Zero, c64(0.0, 0.0), mult),
            };
            let w = e.omega;
            if used.iter().all(|&u| (u - w).norm() >= 1e-2 && (u - w.conj()).norm() >= 1e-2) {
                used.push(w);
                break e;
            }
        };
        blocks.push(entry);
    }
    SpectrumSpec::new(blocks, seed)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let g = mgen::random_ginibre(dim, seed);
    (&g + &g.adjoint()).scale(c64(0.5, 0.0))
}

/// `A(x) = U0 C(x) Sigma(x) C(x)^T U0^T` with the Cayley transform
/// `C(x) = (1 - i x H / 2)^-1 (1 + i x H / 2)` and `|s_k|` scaled by
/// `1 + x d_k`, which keeps `A(x)` conjugate-normal.
pub struct DerivativePath {
    u0: ComplexMatrix,
    h: ComplexMatrix,
    blocks: Vec<(Complex64, f64)>,
}

impl DerivativePath {
    pub fn new(half: usize, seed: u64) -> DerivativePath {
        let spec = mgen::random_pfaffian_spectrum(half, 1, seed);
        let blocks = spec
            .sigma_blocks()
            .unwrap()
            .into_iter()
            .enumerate()
            .flat_map(|(k, b)| match b {
                SigmaBlock::OffDiag { s, multiplicity } => vec![(s, 0.3 * ((k % 3) as f64 - 1.0)); multiplicity],
                SigmaBlock::Real1 { .. } => unreachable!(),
            })
            .collect();
        DerivativePath { u0: mgen::random_unitary(2 * half, seed ^ 0x55), h: random_hermitian(2 * half, seed ^ 0xaa), blocks }
    }

    pub fn at(&self, x: f64) -> ComplexMatrix {
        let dim = self.u0.rows();
        let ixh = self.h.scale(c64(0.0, 0.5 * x));
        let id = ComplexMatrix::identity(dim);
        let c = Lu::new(&(&id - &ixh)).unwrap().solve(&(&id + &ixh)).unwrap();
        let u = &self.u0 * &c;
        let blocks = self
            .blocks
            .iter()
            .map(|&(s, d)| SigmaBlock::OffDiag { s: s * (1.0 + x * d), multiplicity: 1 })
            .collect();
        reconstruct(&NormalForm::from_parts(u, blocks, &Tolerances::default()).unwrap())
    }

    pub fn derivative_at_zero(&self) -> ComplexMatrix {
        let n = self.blocks.len();
        let sigma = assemble_sigma(
            &self.blocks.iter().map(|&(s, _)| SigmaBlock::OffDiag { s, multiplicity: 1 }).collect::<Vec<_>>(),
        );
        let mut dsigma = ComplexMatrix::zeros(2 * n, 2 * n);
        for (k, &(s, d)) in self.blocks.iter().enumerate() {
            dsigma[(k, n + k)] = s * d;
            dsigma[(n + k, k)] = s.conj() * d;
        }
        let ih = self.h.scale(c64(0.0, 1.0));
        let inner = &(&(&ih * &sigma) + &dsigma) + &(&sigma * &ih.transpose());
        &(&self.u0 * &inner) * &self.u0.transpose()
    }
}
