//! Wigner normal form of conjugate-normal matrices.
//!
//! A conjugate-normal `A` (`A^T A* = A A^dagger`) is the linear part of the
//! normal antilinear map `v -> A conj(v)`. It factors as `A = U Sigma U^T`
//! with `U` unitary and `Sigma` Hermitian:
//!
//! ```text
//! Sigma = [ 0        sqrt(W) ]  (+)  diag(sigma_1, ..., sigma_r)
//!         [ sqrt(W)*    0    ]
//! ```
//!
//! where `sqrt(W)` is diagonal and holds the square roots of one half of the
//! complex and negative-real eigenvalues of `A A*`, and the `sigma_k >= 0`
//! are square roots of its non-negative eigenvalues. The construction works
//! eigenspace by eigenspace of `A A*`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lacore::{det_lu, eig_normal, inner, principal_sqrt, vec_norm, Complex64, ComplexMatrix, Tolerances};
use crate::mgen;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Non-negative eigenvalues with `sqrt(w) <= ZERO_SIGMA * ||A||_F` give zero blocks.
pub const ZERO_SIGMA: f64 = 1e-10;

/// One diagonal block (with repetition count) of the normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaBlock {
    /// `multiplicity` copies of `[[0, s], [conj(s), 0]]`, collected into the
    /// off-diagonal quadrants. `Im s >= 0` and `s` is never a non-negative real.
    OffDiag { s: Complex64, multiplicity: usize },
    /// `multiplicity` copies of the `1x1` block `sigma >= 0`.
    Real1 { sigma: f64, multiplicity: usize },
}

impl SigmaBlock {
    pub fn multiplicity(&self) -> usize {
        match *self {
            SigmaBlock::OffDiag { multiplicity, .. } | SigmaBlock::Real1 { multiplicity, .. } => multiplicity,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SigmaBlock::OffDiag { s, multiplicity } => {
                if !(s.im >= 0.0) || (s.im == 0.0 && s.re >= 0.0) || multiplicity == 0 {
                    return Err(Error::InvalidSpec(format!("invalid off-diagonal block s = {s}")));
                }
            }
            SigmaBlock::Real1 { sigma, multiplicity } => {
                if !(sigma >= 0.0) || multiplicity == 0 {
                    return Err(Error::InvalidSpec(format!("invalid real block sigma = {sigma}")));
                }
            }
        }
        Ok(())
    }
}

/// Spectral class of an eigenvalue cluster of `A A*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralClass {
    ComplexPair,
    NegativeReal,
    NonNegativeReal,
}

/// A group of numerically equal eigenvalues of `A A*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub omega: Complex64,
    pub multiplicity: usize,
    pub class: SpectralClass,
    /// Index of the conjugate cluster, for [`SpectralClass::ComplexPair`].
    pub partner: Option<usize>,
    /// Rayleigh quotient of `A^T A*` over the eigenspace; equals `|omega|`.
    pub mu: f64,
    /// Columns of [`SpectralPairing::eigvectors`] spanning the eigenspace.
    pub members: Vec<usize>,
}

/// Clustered, classified and conjugate-paired spectrum of `A A*`.
#[derive(Debug, Clone)]
pub struct SpectralPairing {
    pub clusters: Vec<Cluster>,
    pub eigvectors: ComplexMatrix,
    /// Base cluster tolerance that was applied.
    pub cluster: f64,
    /// Absolute roundoff floor of the computed spectrum, added to every radius.
    pub floor: f64,
}

impl SpectralPairing {
    /// Radius within which eigenvalues near modulus `omega_abs` are merged.
    pub fn radius(&self, omega_abs: f64) -> f64 {
        self.cluster * (1.0 + omega_abs) + self.floor
    }
}

/// `U`, the ordered block list and the cached `det(U)`.
#[derive(Debug, Clone)]
pub struct NormalForm {
    u: ComplexMatrix,
    blocks: Vec<SigmaBlock>,
    half_dim: usize,
    det_u: Complex64,
}

impl NormalForm {
    /// Assembles a normal form from a unitary factor and a block list.
    pub fn from_parts(u: ComplexMatrix, blocks: Vec<SigmaBlock>, tol: &Tolerances) -> Result<Self> {
        let n = u.ensure_square()?;
        for b in &blocks {
            b.validate()?;
        }
        let dim = sigma_dim(&blocks);
        if dim != n {
            return Err(Error::DimensionMismatch(format!("blocks span {dim} dimensions, U is {n}x{n}")));
        }
        let unit = u.unitarity_residual();
        if unit > tol.unitarity_bound(n) {
            return Err(Error::Numerical(format!("U is not unitary (residual {unit:e})")));
        }
        let half_dim = off_diag_count(&blocks);
        let det_u = det_lu(&u)?;
        Ok(Self { u, blocks, half_dim, det_u })
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn blocks(&self) -> &[SigmaBlock] {
        &self.blocks
    }

    /// Number of `2x2` off-diagonal blocks.
    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn det_u(&self) -> Complex64 {
        self.det_u
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn has_real_blocks(&self) -> bool {
        self.blocks.iter().any(|b| matches!(b, SigmaBlock::Real1 { .. }))
    }

    /// The Hermitian middle factor.
    pub fn sigma(&self) -> ComplexMatrix {
        assemble_sigma(&self.blocks)
    }

    /// `||U^dagger U - 1||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        self.u.unitarity_residual()
    }
}

fn sigma_dim(blocks: &[SigmaBlock]) -> usize {
    blocks
        .iter()
        .map(|b| match *b {
            SigmaBlock::OffDiag { multiplicity, .. } => 2 * multiplicity,
            SigmaBlock::Real1 { multiplicity, .. } => multiplicity,
        })
        .sum()
}

fn off_diag_count(blocks: &[SigmaBlock]) -> usize {
    blocks
        .iter()
        .map(|b| match *b {
            SigmaBlock::OffDiag { multiplicity, .. } => multiplicity,
            SigmaBlock::Real1 { .. } => 0,
        })
        .sum()
}

/// Builds `Sigma` in the collected layout: every `s` on the diagonal of the
/// upper-right quadrant, every `conj(s)` on the lower-left one, the real
/// blocks appended on the diagonal.
pub fn assemble_sigma(blocks: &[SigmaBlock]) -> ComplexMatrix {
    let dim = sigma_dim(blocks);
    let half = off_diag_count(blocks);
    let mut sigma = ComplexMatrix::zeros(dim.max(1), dim.max(1));
    let mut p = 0;
    let mut q = 2 * half;
    for b in blocks {
        match *b {
            SigmaBlock::OffDiag { s, multiplicity } => {
                for _ in 0..multiplicity {
                    sigma[(p, half + p)] = s;
                    sigma[(half + p, p)] = s.conj();
                    p += 1;
                }
            }
            SigmaBlock::Real1 { sigma: x, multiplicity } => {
                for _ in 0..multiplicity {
                    sigma[(q, q)] = Complex64::new(x, 0.0);
                    q += 1;
                }
            }
        }
    }
    sigma
}

/// Tests `A^T A* = A A^dagger`. The residual is
/// `||A^T A* - A A^dagger||_F / (1 + ||A||_F^2)`.
pub fn is_conjugate_normal(a: &ComplexMatrix, tol: &Tolerances) -> Result<(bool, f64)> {
    a.ensure_square()?;
    let norm = a.frobenius_norm();
    let lhs = &a.transpose() * &a.conj();
    let rhs = a * &a.adjoint();
    let residual = (&lhs - &rhs).frobenius_norm() / (1.0 + norm * norm);
    Ok((residual <= tol.eig_residual, residual))
}

/// `(A - A^T) / 2`.
pub fn antisymmetric_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] - a[(j, i)]) * 0.5))
}

/// The antilinear action `v -> A conj(v)`.
fn antilinear(a: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let vc: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    a.matvec(&vc)
}

fn require_conjugate_normal(a: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let (ok, residual) = is_conjugate_normal(a, tol)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotConjugateNormal { residual })
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Eigendecomposes `A A*`, clusters its spectrum and labels each cluster.
pub fn classify_spectrum(a: &ComplexMatrix, tol: &Tolerances) -> Result<SpectralPairing> {
    tol.validate()?;
    let n = a.ensure_square()?;
    require_conjugate_normal(a, tol)?;
    let lambda = a * &a.conj();
    let eig = eig_normal(&lambda, tol)?;
    let values = &eig.values;
    let a_norm = a.frobenius_norm();
    let floor = 4.0 * eig.residual.max(n as f64 * f64::EPSILON * a_norm * a_norm);
    let radius = |w: f64| tol.cluster_radius(w) + floor;

    // single-linkage clustering
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius(values[i].norm().max(values[j].norm())) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }

    let m = &a.transpose() * &a.conj();
    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|members| {
            let k = members.len() as f64;
            let omega = members.iter().map(|&i| values[i]).sum::<Complex64>() / k;
            let mu = members
                .iter()
                .map(|&i| {
                    let v = eig.vectors.column(i);
                    inner(&v, &m.matvec(&v)).re
                })
                .sum::<f64>()
                / k;
            let class = if omega.im.abs() <= radius(omega.norm()) {
                if omega.re >= -(tol.cluster + floor) {
                    SpectralClass::NonNegativeReal
                } else {
                    SpectralClass::NegativeReal
                }
            } else {
                SpectralClass::ComplexPair
            };
            Cluster { omega, multiplicity: members.len(), class, partner: None, mu, members }
        })
        .collect();

    // conjugate pairing of complex clusters
    let upper: Vec<usize> = (0..clusters.len())
        .filter(|&c| clusters[c].class == SpectralClass::ComplexPair && clusters[c].omega.im > 0.0)
        .collect();
    for &u in &upper {
        let target = clusters[u].omega.conj();
        let best = (0..clusters.len())
            .filter(|&c| {
                clusters[c].class == SpectralClass::ComplexPair && clusters[c].omega.im < 0.0 && clusters[c].partner.is_none()
            })
            .min_by(|&x, &y| {
                (clusters[x].omega - target).norm().total_cmp(&(clusters[y].omega - target).norm())
            });
        match best {
            Some(l) if (clusters[l].omega - target).norm() <= 2.0 * radius(target.norm()) => {
                if clusters[l].multiplicity != clusters[u].multiplicity {
                    return Err(Error::SpectralConsistency(format!(
                        "eigenvalue {} has multiplicity {} but its conjugate has {}",
                        clusters[u].omega, clusters[u].multiplicity, clusters[l].multiplicity
                    )));
                }
                clusters[u].partner = Some(l);
                clusters[l].partner = Some(u);
            }
            _ => {
                return Err(Error::SpectralConsistency(format!(
                    "eigenvalue {} has no conjugate partner",
                    clusters[u].omega
                )))
            }
        }
    }
    for c in &clusters {
        match c.class {
            SpectralClass::ComplexPair if c.partner.is_none() => {
                return Err(Error::SpectralConsistency(format!("eigenvalue {} has no conjugate partner", c.omega)));
            }
            SpectralClass::NegativeReal if c.multiplicity % 2 == 1 => {
                return Err(Error::SpectralConsistency(format!(
                    "negative eigenvalue {} has odd multiplicity {}",
                    c.omega.re, c.multiplicity
                )));
            }
            _ => {}
        }
    }
    Ok(SpectralPairing { clusters, eigvectors: eig.vectors, cluster: tol.cluster, floor })
}

/// Multiplies `v` by a phase making its first non-negligible entry positive
/// real.
fn fix_phase(v: &mut [Complex64]) {
    let norm = vec_norm(v);
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-10 * norm) {
        let ph = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= ph;
        }
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Removes the components along the orthonormal vectors in `basis`.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let c = inner(b, v);
        for (x, &y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Takes the candidate with the largest component outside `chosen`,
/// returning it projected and normalized.
fn next_direction(candidates: &mut Vec<Vec<Complex64>>, chosen: &[Vec<Complex64>], canonical: bool) -> Result<Vec<Complex64>> {
    let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
    for (idx, c) in candidates.iter().enumerate() {
        let mut p = c.clone();
        project_out(&mut p, chosen);
        project_out(&mut p, chosen);
        let n = vec_norm(&p);
        if best.as_ref().map_or(true, |b| n > b.2) {
            best = Some((idx, p, n));
        }
    }
    let (idx, mut v, n) = best.ok_or_else(|| Error::Numerical("eigenspace exhausted".into()))?;
    if n < 1e-6 {
        return Err(Error::Numerical("eigenspace basis degenerated during deflation".into()));
    }
    candidates.remove(idx);
    normalize(&mut v);
    if canonical {
        fix_phase(&mut v);
    }
    Ok(v)
}

/// `phase(s) * Av / |Av|`, the Kramers partner of `v`.
fn partner(a: &ComplexMatrix, v: &[Complex64], s: Complex64) -> Result<Vec<Complex64>> {
    let mut w = antilinear(a, v);
    let mu = s.norm_sqr();
    if mu == 0.0 || vec_norm(&w) == 0.0 {
        return Err(Error::Numerical("vanishing antilinear image in a non-zero eigenspace".into()));
    }
    let scale = s / mu;
    for x in w.iter_mut() {
        *x *= scale;
    }
    // Exact inputs stay exact; only renormalize on visible drift.
    let n = vec_norm(&w);
    if (n - 1.0).abs() > 4.0 * f64::EPSILON {
        for x in w.iter_mut() {
            *x /= n;
        }
    }
    Ok(w)
}

/// Mean of `|v^dagger A conj(w)|` over the pairs of a sector. The
/// eigenvalue of `A conj(A)` fixes `|s|^2` only to `eps ||A||^2`, so `|s|` is
/// read off the constructed basis instead.
fn measured_modulus(a: &ComplexMatrix, pairs: &[(Vec<Complex64>, Vec<Complex64>)]) -> f64 {
    pairs.iter().map(|(v, w)| inner(v, &antilinear(a, w)).norm()).sum::<f64>() / pairs.len() as f64
}

struct OffSector {
    s: Complex64,
    pairs: Vec<(Vec<Complex64>, Vec<Complex64>)>,
}

struct RealSector {
    sigma: f64,
    vectors: Vec<Vec<Complex64>>,
}

fn cluster_basis(pairing: &SpectralPairing, c: &Cluster, rng: Option<&mut ChaCha8Rng>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = c.members.iter().map(|&i| pairing.eigvectors.column(i)).collect();
    match rng {
        Some(rng) => {
            // random unitary mixing inside the eigenspace
            let k = basis.len();
            let mix = mgen::random_unitary_with(k, rng);
            let dim = basis[0].len();
            let mixed: Vec<Vec<Complex64>> = (0..k)
                .map(|j| {
                    let mut out = vec![ZERO; dim];
                    for (i, b) in basis.iter().enumerate() {
                        let coeff = mix[(i, j)];
                        for (o, &x) in out.iter_mut().zip(b) {
                            *o += coeff * x;
                        }
                    }
                    out
                })
                .collect();
            basis = mixed;
        }
        None => {
            for b in basis.iter_mut() {
                fix_phase(b);
            }
        }
    }
    basis
}

fn build_normal_form(a: &ComplexMatrix, tol: &Tolerances, mut rng: Option<&mut ChaCha8Rng>) -> Result<NormalForm> {
    let n = a.ensure_square()?;
    let pairing = classify_spectrum(a, tol)?;
    let a_norm = a.frobenius_norm();
    let canonical = rng.is_none();
    let mut off: Vec<OffSector> = Vec::new();
    let mut real: Vec<RealSector> = Vec::new();

    for c in &pairing.clusters {
        match c.class {
            SpectralClass::ComplexPair => {
                if c.omega.im < 0.0 {
                    continue;
                }
                let s = principal_sqrt(c.omega);
                let basis = cluster_basis(&pairing, c, rng.as_deref_mut());
                let pairs = basis
                    .into_iter()
                    .map(|v| partner(a, &v, s).map(|w| (v, w)))
                    .collect::<Result<Vec<_>>>()?;
                let s = s * (measured_modulus(a, &pairs) / s.norm());
                off.push(OffSector { s, pairs });
            }
            SpectralClass::NegativeReal => {
                let s = I * c.omega.re.abs().sqrt();
                let mut candidates = cluster_basis(&pairing, c, rng.as_deref_mut());
                let mut chosen: Vec<Vec<Complex64>> = Vec::new();
                let mut pairs = Vec::new();
                for _ in 0..c.multiplicity / 2 {
                    let v = next_direction(&mut candidates, &chosen, canonical)?;
                    let mut w = partner(a, &v, s)?;
                    project_out(&mut w, &chosen);
                    normalize(&mut w);
                    chosen.push(v.clone());
                    chosen.push(w.clone());
                    pairs.push((v, w));
                }
                let s = I * measured_modulus(a, &pairs);
                off.push(OffSector { s, pairs });
            }
            SpectralClass::NonNegativeReal => {
                let mut candidates = cluster_basis(&pairing, c, rng.as_deref_mut());
                // Dropping sigma <= ZERO_SIGMA * ||A||_F stays within the
                // reconstruction tolerance.
                if c.omega.norm().sqrt() <= ZERO_SIGMA * a_norm || c.omega.norm() <= pairing.floor {
                    real.push(RealSector { sigma: 0.0, vectors: candidates });
                    continue;
                }
                let omega = c.omega.re.abs();
                let inv_root = 1.0 / omega.sqrt();
                let mut chosen: Vec<Vec<Complex64>> = Vec::new();
                for _ in 0..c.multiplicity {
                    let v = next_direction(&mut candidates, &chosen, canonical)?;
                    let av = antilinear(a, &v);
                    // u = v + Av / sqrt(w) and u' = i v - i Av / sqrt(w) are both
                    // invariant under v -> A conj(v) / sqrt(w); at least one has
                    // norm >= sqrt(2).
                    let u1: Vec<Complex64> = v.iter().zip(&av).map(|(&x, &y)| x + y * inv_root).collect();
                    let u2: Vec<Complex64> = v.iter().zip(&av).map(|(&x, &y)| I * x - I * y * inv_root).collect();
                    let mut u = if vec_norm(&u1) >= vec_norm(&u2) { u1 } else { u2 };
                    project_out(&mut u, &chosen);
                    normalize(&mut u);
                    chosen.push(u);
                }
                let sigma = chosen.iter().map(|u| inner(u, &antilinear(a, u)).norm()).sum::<f64>() / chosen.len() as f64;
                real.push(RealSector { sigma, vectors: chosen });
            }
        }
    }

    // block ordering
    match rng.as_deref_mut() {
        None => {
            off.sort_by(|x, y| {
                y.s.norm().total_cmp(&x.s.norm()).then_with(|| x.s.arg().total_cmp(&y.s.arg()))
            });
            real.sort_by(|x, y| x.sigma.total_cmp(&y.sigma));
        }
        Some(rng) => {
            off = off
                .into_iter()
                .flat_map(|sec| sec.pairs.into_iter().map(move |p| OffSector { s: sec.s, pairs: vec![p] }))
                .collect();
            real = real
                .into_iter()
                .flat_map(|sec| sec.vectors.into_iter().map(move |v| RealSector { sigma: sec.sigma, vectors: vec![v] }))
                .collect();
            off.shuffle(rng);
            real.shuffle(rng);
        }
    }

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for sec in &off {
        columns.extend(sec.pairs.iter().map(|p| p.0.clone()));
        blocks.push(SigmaBlock::OffDiag { s: sec.s, multiplicity: sec.pairs.len() });
    }
    for sec in &off {
        columns.extend(sec.pairs.iter().map(|p| p.1.clone()));
    }
    for sec in &real {
        columns.extend(sec.vectors.iter().cloned());
        blocks.push(SigmaBlock::Real1 { sigma: sec.sigma, multiplicity: sec.vectors.len() });
    }
    if columns.len() != n {
        return Err(Error::Numerical(format!("constructed {} basis vectors for dimension {n}", columns.len())));
    }
    let u = ComplexMatrix::from_columns(&columns);
    let nf = NormalForm::from_parts(u, blocks, tol)?;
    let residual = (&reconstruct(&nf) - a).frobenius_norm();
    if residual > tol.reconstruct * a.frobenius_norm() {
        return Err(Error::Numerical(format!("normal-form reconstruction residual {residual:e} exceeds tolerance")));
    }
    Ok(nf)
}

/// Computes the normal form `A = U Sigma U^T` in canonical ordering:
/// off-diagonal blocks by descending `|s|` then ascending `arg s`, real blocks
/// ascending.
pub fn wigner_normal_form(a: &ComplexMatrix, tol: &Tolerances) -> Result<NormalForm> {
    build_normal_form(a, tol, None)
}

/// Computes a normal form under a randomized gauge: each eigenspace basis is
/// mixed by a random unitary before pairing, and blocks are split to
/// multiplicity one and shuffled. `det(U)`-derived quantities must not change.
pub fn wigner_normal_form_gauged(a: &ComplexMatrix, tol: &Tolerances, seed: u64) -> Result<NormalForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_normal_form(a, tol, Some(&mut rng))
}

/// `U Sigma U^T`.
pub fn reconstruct(nf: &NormalForm) -> ComplexMatrix {
    &(&nf.u * &nf.sigma()) * &nf.u.transpose()
}

/// `(Sigma - Sigma^T) / 2 = i Im(Sigma)`, the normal form of the
/// antisymmetric part in the same basis.
pub fn antisymmetric_sigma(nf: &NormalForm) -> ComplexMatrix {
    nf.sigma().map(|z| Complex64::new(0.0, z.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lacore::c64;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn phase_matrix() -> ComplexMatrix {
        let p = Complex64::from_polar(1.0, PI / 3.0);
        ComplexMatrix::from_rows(&[[ZERO, p], [p.conj(), ZERO]])
    }

    #[test]
    fn conjugate_normality_flags() {
        let j = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        assert!(is_conjugate_normal(&j, &tol()).unwrap().0);
        let u = mgen::random_unitary(5, 3);
        assert!(is_conjugate_normal(&u, &tol()).unwrap().0);
        let skew = mgen::random_skew(6, 4).into_inner();
        assert!(is_conjugate_normal(&skew, &tol()).unwrap().0);
        let jordan = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let (flag, residual) = is_conjugate_normal(&jordan, &tol()).unwrap();
        assert!(!flag);
        // ||[[1,1],[1,2]] - [[2,1],[1,1]]||_F / (1 + 3)
        assert!((residual - 2f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn antisymmetric_part_cases() {
        let sym = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 3.0]]);
        assert_eq!(antisymmetric_part(&sym).unwrap(), ComplexMatrix::zeros(2, 2));
        let skew = mgen::random_skew(4, 1).into_inner();
        assert_eq!(antisymmetric_part(&skew).unwrap(), skew);
        let a = ComplexMatrix::from_rows(&[[ZERO, c64(1.0, 1.0)], [c64(1.0, -1.0), ZERO]]);
        let expected = ComplexMatrix::from_rows(&[[ZERO, c64(0.0, 1.0)], [c64(0.0, -1.0), ZERO]]);
        assert_eq!(antisymmetric_part(&a).unwrap(), expected);
    }

    #[test]
    fn classify_phase_matrix() {
        let sp = classify_spectrum(&phase_matrix(), &tol()).unwrap();
        assert_eq!(sp.clusters.len(), 2);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let up = sp.clusters.iter().find(|c| c.omega.im > 0.0).unwrap();
        assert_eq!(up.class, SpectralClass::ComplexPair);
        assert!((up.omega - w).norm() < 1e-14);
        assert!(up.partner.is_some());
        assert!((up.mu - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classify_negative_and_positive() {
        let j = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let sp = classify_spectrum(&j, &tol()).unwrap();
        assert_eq!(sp.clusters.len(), 1);
        assert_eq!(sp.clusters[0].class, SpectralClass::NegativeReal);
        assert_eq!(sp.clusters[0].multiplicity, 2);
        assert!((sp.clusters[0].omega - c64(-1.0, 0.0)).norm() < 1e-15);

        let d = ComplexMatrix::from_real_rows(&[[3.0, 0.0], [0.0, 5.0]]);
        let sp = classify_spectrum(&d, &tol()).unwrap();
        let mut omegas: Vec<f64> = sp.clusters.iter().map(|c| c.omega.re).collect();
        omegas.sort_by(f64::total_cmp);
        assert_eq!(omegas, vec![9.0, 25.0]);
        assert!(sp.clusters.iter().all(|c| c.class == SpectralClass::NonNegativeReal));
    }

    #[test]
    fn classify_rejects_non_conjugate_normal() {
        let jordan = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(classify_spectrum(&jordan, &tol()), Err(Error::NotConjugateNormal { .. })));
    }

    #[test]
    fn normal_form_of_phase_matrix_is_itself() {
        let a = phase_matrix();
        let nf = wigner_normal_form(&a, &tol()).unwrap();
        assert_eq!(nf.blocks().len(), 1);
        match nf.blocks()[0] {
            SigmaBlock::OffDiag { s, multiplicity } => {
                assert_eq!(multiplicity, 1);
                assert!((s - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-14);
            }
            _ => panic!("expected off-diagonal block"),
        }
        assert!(nf.u().identity_residual() < 1e-14);
        assert!((&reconstruct(&nf) - &a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn normal_form_of_unit_skew() {
        let a = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let nf = wigner_normal_form(&a, &tol()).unwrap();
        assert_eq!(nf.blocks(), &[SigmaBlock::OffDiag { s: c64(0.0, 1.0), multiplicity: 1 }]);
        assert!((nf.det_u() - c64(0.0, -1.0)).norm() < 1e-15);
        assert!((&reconstruct(&nf) - &a).frobenius_norm() < 1e-15);
    }

    #[test]
    fn normal_form_of_scalar_multiple_of_identity() {
        let c = Complex64::from_polar(2.0, PI / 5.0);
        let a = ComplexMatrix::from_diag(&[c, c]);
        let nf = wigner_normal_form(&a, &tol()).unwrap();
        assert_eq!(nf.blocks().len(), 1);
        match nf.blocks()[0] {
            SigmaBlock::Real1 { sigma, multiplicity } => {
                assert_eq!(multiplicity, 2);
                assert!((sigma - 2.0).abs() < 1e-14);
            }
            _ => panic!("expected real block"),
        }
        // U = e^{i pi/10} V with V real orthogonal is the full gauge freedom here
        let u = nf.u();
        let ph = Complex64::from_polar(1.0, -PI / 10.0);
        let real_part = u.scale(ph);
        assert!(real_part.as_slice().iter().all(|z| z.im.abs() < 1e-13));
        assert!((&reconstruct(&nf) - &a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn reconstruct_real_blocks_with_identity() {
        let blocks = vec![
            SigmaBlock::Real1 { sigma: 3.0, multiplicity: 1 },
            SigmaBlock::Real1 { sigma: 5.0, multiplicity: 1 },
        ];
        let nf = NormalForm::from_parts(ComplexMatrix::identity(2), blocks, &tol()).unwrap();
        assert_eq!(reconstruct(&nf), ComplexMatrix::from_real_rows(&[[3.0, 0.0], [0.0, 5.0]]));
    }

    #[test]
    fn singular_matrix_yields_zero_blocks() {
        let a = ComplexMatrix::zeros(3, 3);
        let nf = wigner_normal_form(&a, &tol()).unwrap();
        assert_eq!(nf.blocks(), &[SigmaBlock::Real1 { sigma: 0.0, multiplicity: 3 }]);
    }

    #[test]
    fn from_parts_rejects_bad_blocks() {
        let bad = vec![SigmaBlock::OffDiag { s: c64(1.0, 0.0), multiplicity: 1 }];
        assert!(NormalForm::from_parts(ComplexMatrix::identity(2), bad, &tol()).is_err());
        let wrong_dim = vec![SigmaBlock::Real1 { sigma: 1.0, multiplicity: 3 }];
        assert!(NormalForm::from_parts(ComplexMatrix::identity(2), wrong_dim, &tol()).is_err());
    }

    #[test]
    fn sigma_layout_is_collected() {
        let blocks = vec![
            SigmaBlock::OffDiag { s: c64(0.0, 2.0), multiplicity: 1 },
            SigmaBlock::OffDiag { s: c64(1.0, 1.0), multiplicity: 1 },
            SigmaBlock::Real1 { sigma: 0.5, multiplicity: 1 },
        ];
        let s = assemble_sigma(&blocks);
        assert_eq!(s[(0, 2)], c64(0.0, 2.0));
        assert_eq!(s[(2, 0)], c64(0.0, -2.0));
        assert_eq!(s[(1, 3)], c64(1.0, 1.0));
        assert_eq!(s[(3, 1)], c64(1.0, -1.0));
        assert_eq!(s[(4, 4)], c64(0.5, 0.0));
        assert_eq!(s, s.adjoint());
    }
}
