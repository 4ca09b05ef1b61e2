//! Library kernels against brute-force oracles.

mod common;

use common::{leibniz_det, permutation_pfaffian, rel};
use genpfaff::lacore::det_lu;
use genpfaff::mgen::{random_ginibre, random_skew};
use genpfaff::pfbase::{pf_polynomial, pf_skew_householder, pf_skew_parlett_reid, SkewMatrix};
use genpfaff::{c64, ComplexMatrix};

#[test]
fn polynomial_matches_permutation_sum() {
    for dim in [2, 4, 6, 8] {
        let trials = if dim == 8 { 3 } else { 20 };
        for seed in 0..trials {
            let a = random_ginibre(dim, 1000 + seed);
            let oracle = permutation_pfaffian(&a);
            let got = pf_polynomial(&a).unwrap();
            assert!(rel(got, oracle) <= 1e-12, "dim {dim} seed {seed}: {got} vs {oracle}");
        }
    }
}

#[test]
fn permutation_sum_of_hand_examples() {
    let a = ComplexMatrix::from_real_rows(&[vec![5.0, 7.0], vec![2.0, 9.0]]);
    assert!((permutation_pfaffian(&a) - c64(2.5, 0.0)).norm() < 1e-15);

    let (p, q, r, s, t, u) = (c64(1.0, 2.0), c64(-0.5, 1.0), c64(3.0, 0.0), c64(0.0, -1.0), c64(2.0, 2.0), c64(-1.0, 0.25));
    let z = c64(0.0, 0.0);
    let skew = ComplexMatrix::from_rows(&[vec![z, p, q, r], vec![-p, z, s, t], vec![-q, -s, z, u], vec![-r, -t, -u, z]]);
    let expansion = p * u - q * t + r * s;
    assert!((permutation_pfaffian(&skew) - expansion).norm() < 1e-14);
    assert!((pf_polynomial(&skew).unwrap() - expansion).norm() < 1e-14);
}

#[test]
fn determinant_matches_leibniz() {
    for dim in 1..=6 {
        for seed in 0..5 {
            let a = random_ginibre(dim, 2000 + 10 * dim as u64 + seed);
            let oracle = leibniz_det(&a);
            let got = det_lu(&a).unwrap();
            assert!(rel(got, oracle) <= 1e-12, "dim {dim}: {got} vs {oracle}");
        }
    }
}

#[test]
fn skew_kernels_agree_with_matching_sum() {
    for dim in [2, 4, 6, 8, 10, 12] {
        let a = random_skew(dim, 3000 + dim as u64);
        let poly = pf_polynomial(a.matrix()).unwrap();
        let hh = pf_skew_householder(&a);
        let pr = pf_skew_parlett_reid(&a);
        let scale = 1f64.max(a.matrix().frobenius_norm().powi(dim as i32 / 2));
        assert!((hh - poly).norm() <= 1e-11 * scale, "householder dim {dim}");
        assert!((pr - poly).norm() <= 1e-11 * scale, "parlett-reid dim {dim}");
        assert!(rel(hh, pr) <= 1e-10);
    }
}

#[test]
fn skew_pfaffian_squared_is_determinant() {
    for dim in [2, 4, 8, 16, 32, 64] {
        let a = random_skew(dim, 4000 + dim as u64);
        let det = det_lu(a.matrix()).unwrap();
        for pf in [pf_skew_householder(&a), pf_skew_parlett_reid(&a)] {
            assert!(rel(pf * pf, det) <= 1e-9, "dim {dim}");
        }
    }
}

#[test]
fn antisymmetrized_polynomial_on_arbitrary_matrices() {
    for dim in [2, 4, 6] {
        let a = random_ginibre(dim, 5000 + dim as u64);
        let skew = SkewMatrix::antisymmetrize(&a).unwrap();
        assert!(rel(permutation_pfaffian(&a), pf_skew_householder(&skew)) <= 1e-12);
    }
}
