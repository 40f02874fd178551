#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use oblique_core::random::ProblemGenerator;

/// Pseudoinverse assembled from the eigendecomposition of `M^T M`:
/// `sigma_i = sqrt(lambda_i)`, `u_i = M v_i / sigma_i`, `M^+ = sum v_i u_i^T / sigma_i`.
/// Eigenvalues at or below `rel * lambda_max` are dropped.
pub fn pinv_from_gram_eigen(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.transpose() * m);
    let lmax = eig.eigenvalues.max().max(0.0);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= rel * lmax {
            continue;
        }
        let s = l.sqrt();
        let v = eig.eigenvectors.column(i).into_owned();
        let u = m * &v / s;
        out += v * u.transpose() / s;
    }
    out
}

/// Gaussian `rows x cols` matrix of the given rank.
pub fn rank_matrix(
    gen: &mut ProblemGenerator,
    rows: usize,
    cols: usize,
    rank: usize,
) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(rows, cols);
    }
    gen.gaussian_matrix(rows, rank) * gen.gaussian_matrix(rank, cols)
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).amax()
}
