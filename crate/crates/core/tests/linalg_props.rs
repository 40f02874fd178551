mod common;

use common::{max_abs_diff, pinv_from_gram_eigen, rank_matrix};
use nalgebra::DMatrix;
use oblique_core::linalg::{
    num_rank, orth_proj, pinv, principal_angle_cos_oracle, psd_sqrt_pinv, Tolerance,
};
use oblique_core::random::ProblemGenerator;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 1usize..=7, 1usize..=7)
        .prop_flat_map(|(seed, r, c)| (Just(seed), Just(r), Just(c), 0..=r.min(c)))
}

#[test]
fn pinv_matches_gram_eigen_oracle() {
    let tol = Tolerance::default();
    let mut gen = ProblemGenerator::new(11);
    for _ in 0..50 {
        let m = rank_matrix(&mut gen, 5, 3, 2);
        let oracle = pinv_from_gram_eigen(&m, 1e-8);
        assert!(max_abs_diff(&pinv(&m, &tol).unwrap(), &oracle) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn moore_penrose_axioms((seed, rows, cols, rank) in shape()) {
        let tol = Tolerance::default();
        let m = rank_matrix(&mut ProblemGenerator::new(seed), rows, cols, rank);
        let mp = pinv(&m, &tol).unwrap();
        prop_assert!(max_abs_diff(&(&m * &mp * &m), &m) <= 1e-9);
        prop_assert!(max_abs_diff(&(&mp * &m * &mp), &mp) <= 1e-9);
        let left = &m * &mp;
        let right = &mp * &m;
        prop_assert!(max_abs_diff(&left.transpose(), &left) <= 1e-9);
        prop_assert!(max_abs_diff(&right.transpose(), &right) <= 1e-9);
        prop_assert!(max_abs_diff(&pinv(&m.transpose(), &tol).unwrap(), &mp.transpose()) <= 1e-9);
    }

    #[test]
    fn range_and_kernel_identities((seed, rows, cols, rank) in shape()) {
        prop_assume!(rank > 0);
        let tol = Tolerance::default();
        let m = rank_matrix(&mut ProblemGenerator::new(seed), rows, cols, rank);
        let p_m = orth_proj(&m, &tol).unwrap();
        let p_mmt = orth_proj(&(&m * m.transpose()), &tol).unwrap();
        prop_assert!(max_abs_diff(&p_m, &p_mmt) <= 1e-9);
        prop_assert_eq!(num_rank(&(m.transpose() * &m), &tol), num_rank(&m.transpose(), &tol));
        prop_assert_eq!(num_rank(&m, &tol), rank);
    }

    #[test]
    fn orth_proj_is_orthogonal_projector((seed, rows, cols, rank) in shape()) {
        prop_assume!(rank > 0);
        let tol = Tolerance::default();
        let m = rank_matrix(&mut ProblemGenerator::new(seed), rows, cols, rank);
        let p = orth_proj(&m, &tol).unwrap();
        prop_assert!(max_abs_diff(&(&p * &p), &p) <= 1e-12);
        prop_assert!(max_abs_diff(&p.transpose(), &p) <= 1e-12);
        prop_assert!(max_abs_diff(&(&p * &m), &m) <= 1e-9 * m.amax().max(1.0));
    }

    #[test]
    fn psd_sqrt_pinv_squares_to_pinv((seed, n, _c, rank) in shape()) {
        let tol = Tolerance::default();
        let rank = rank.min(n);
        let a = rank_matrix(&mut ProblemGenerator::new(seed), n, n.max(1), rank);
        let m = &a * a.transpose();
        let x = psd_sqrt_pinv(&m, &tol).unwrap();
        prop_assert!(max_abs_diff(&x.transpose(), &x) <= 1e-12 * x.amax().max(1.0));
        prop_assert!(max_abs_diff(&(&x * &m), &(&m * &x)) <= 1e-9);
        let mp = pinv(&m, &tol).unwrap();
        prop_assert!(max_abs_diff(&(&x * &x), &mp) <= 1e-9 * mp.amax().max(1.0));
        // PSD: all eigenvalues nonnegative
        let eig = nalgebra::SymmetricEigen::new(x.clone());
        prop_assert!(eig.eigenvalues.min() >= -1e-12 * x.amax().max(1.0));
    }

    #[test]
    fn principal_angle_ignores_spanning_set(seed in any::<u64>(), n in 2usize..=8) {
        let tol = Tolerance::default();
        let mut gen = ProblemGenerator::new(seed);
        let ks = 1 + (seed as usize) % n;
        let kw = ks + (seed as usize / 7) % (n - ks + 1);
        let s = gen.gaussian_matrix(n, ks);
        let w = gen.gaussian_matrix(n, kw);
        let base = principal_angle_cos_oracle(&s, &w, &tol).unwrap();
        // invertible recombinations and a redundant spanning set
        let mix_s = gen.gaussian_matrix(ks, ks);
        prop_assume!(mix_s.determinant().abs() > 1e-3);
        let w_redundant = &w * gen.gaussian_matrix(kw, 2 * kw);
        let again = principal_angle_cos_oracle(&(s * mix_s), &w_redundant, &tol).unwrap();
        prop_assert!((base - again).abs() <= 1e-9);
    }
}

#[test]
fn zero_matrix_has_zero_pinv() {
    let z = DMatrix::<f64>::zeros(3, 2);
    assert_eq!(
        pinv(&z, &Tolerance::default()).unwrap(),
        DMatrix::zeros(2, 3)
    );
}
