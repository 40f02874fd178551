//! Tolerance-aware dense linear algebra.
//!
//! Every routine that has to decide whether a singular value (or an
//! eigenvalue of a PSD matrix) is zero does so through a [`Tolerance`], using a
//! cutoff relative to the largest one. Operators from the sampling model are
//! plain `DMatrix<f64>` values.

use faer::Mat;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Numerical tolerances shared by all operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff. `None` selects `max(rows, cols) * eps`.
    pub rel_rank_tol: Option<f64>,
    /// Slack used when asserting symmetry and positive semidefiniteness.
    pub abs_check_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel_rank_tol: None,
            abs_check_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rel_rank_tol: Option<f64>, abs_check_tol: f64) -> Result<Self> {
        if let Some(rel) = rel_rank_tol {
            if !(rel.is_finite() && rel > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "rel_rank_tol must be positive, got {rel}"
                )));
            }
        }
        if !(abs_check_tol.is_finite() && abs_check_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "abs_check_tol must be positive, got {abs_check_tol}"
            )));
        }
        Ok(Tolerance {
            rel_rank_tol,
            abs_check_tol,
        })
    }

    pub fn with_rel_rank_tol(rel: f64) -> Result<Self> {
        Tolerance::new(Some(rel), Tolerance::default().abs_check_tol)
    }

    /// Relative cutoff for a `rows x cols` matrix.
    pub fn relative(&self, rows: usize, cols: usize) -> f64 {
        self.rel_rank_tol
            .unwrap_or_else(|| rows.max(cols) as f64 * f64::EPSILON)
    }

    /// Absolute threshold below which a singular value counts as zero.
    pub fn cutoff(&self, rows: usize, cols: usize, largest: f64) -> f64 {
        self.relative(rows, cols) * largest
    }
}

pub(crate) fn ensure_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidInput(format!("{what} is empty")));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "{what} contains non-finite entries"
        )));
    }
    Ok(())
}

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD with singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct SortedSvd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<f64>,
}

impl SortedSvd {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let svd = to_faer(m)
            .thin_svd()
            .expect("SVD failed to converge on a finite matrix");
        let s = svd.S().column_vector();
        SortedSvd {
            u: from_faer(svd.U()),
            singular_values: DVector::from_fn(s.nrows(), |i, _| s[i]),
            v_t: from_faer(svd.V()).transpose(),
        }
    }

    pub fn largest(&self) -> f64 {
        self.singular_values.get(0).copied().unwrap_or(0.0)
    }

    /// Number of singular values above the tolerance cutoff.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let smax = self.largest();
        if smax <= 0.0 {
            return 0;
        }
        let cut = tol.cutoff(self.u.nrows(), self.v_t.ncols(), smax);
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }

    fn pinv_of_rank(&self, rank: usize) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.v_t.ncols(), self.u.nrows());
        for i in 0..rank {
            let v = self.v_t.row(i).transpose();
            out += (v * self.u.column(i).transpose()) / self.singular_values[i];
        }
        out
    }

    /// Leading `rank` left singular vectors.
    pub fn range_basis(&self, rank: usize) -> DMatrix<f64> {
        self.u.columns(0, rank).into_owned()
    }

    /// Leading `rank` right singular vectors, as columns.
    pub fn corange_basis(&self, rank: usize) -> DMatrix<f64> {
        self.v_t.rows(0, rank).transpose()
    }
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pinv(m: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    ensure_finite(m, "matrix")?;
    let svd = SortedSvd::new(m);
    let r = svd.rank(tol);
    Ok(svd.pinv_of_rank(r))
}

/// Pseudoinverse of the best rank-`rank` approximation of `m`.
///
/// Used when the rank of a product is known from its factors, which is more
/// reliable than thresholding the product's own singular values.
pub fn pinv_truncated(m: &DMatrix<f64>, rank: usize) -> Result<DMatrix<f64>> {
    ensure_finite(m, "matrix")?;
    let svd = SortedSvd::new(m);
    if rank > svd.singular_values.len() || (rank > 0 && svd.singular_values[rank - 1] <= 0.0) {
        return Err(Error::Numerical(format!(
            "matrix does not have {rank} nonzero singular values"
        )));
    }
    Ok(svd.pinv_of_rank(rank))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of the symmetric
/// part of a square matrix.
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = to_faer(&sym)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigendecomposition failed to converge on a finite matrix");
    let s = eig.S().column_vector();
    (DVector::from_fn(s.nrows(), |i, _| s[i]), from_faer(eig.U()))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `(M^+)^{1/2}` for a symmetric positive semidefinite `M`.
///
/// Eigenvalues at or below `rel * lambda_max` are mapped to zero, slightly
/// negative ones (within `abs_check_tol` of the matrix scale) are clamped.
pub fn psd_sqrt_pinv(m: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    let (eigenvalues, eigenvectors) = checked_psd_eigen(m, tol)?;
    let n = m.nrows();
    let lmax = eigenvalues.max();
    let cut = tol.cutoff(n, n, lmax);
    let rank = eigenvalues
        .iter()
        .filter(|&&l| lmax > 0.0 && l > cut)
        .count();
    Ok(sqrt_pinv_from_eigen(&eigenvalues, &eigenvectors, rank))
}

/// Like [`psd_sqrt_pinv`], keeping exactly the `rank` largest eigenvalues.
pub fn psd_sqrt_pinv_truncated(
    m: &DMatrix<f64>,
    rank: usize,
    tol: &Tolerance,
) -> Result<DMatrix<f64>> {
    let (eigenvalues, eigenvectors) = checked_psd_eigen(m, tol)?;
    let n = eigenvalues.len();
    if rank > n || (rank > 0 && eigenvalues[n - rank] <= 0.0) {
        return Err(Error::Numerical(format!(
            "matrix does not have {rank} positive eigenvalues"
        )));
    }
    Ok(sqrt_pinv_from_eigen(&eigenvalues, &eigenvectors, rank))
}

fn checked_psd_eigen(m: &DMatrix<f64>, tol: &Tolerance) -> Result<(DVector<f64>, DMatrix<f64>)> {
    ensure_finite(m, "matrix")?;
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = max_abs(m).max(1.0);
    let asym = max_abs(&(m - m.transpose()));
    if asym > tol.abs_check_tol * scale {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (max |M - M^T| = {asym:.3e})"
        )));
    }
    let (eigenvalues, eigenvectors) = sym_eigen(m);
    let lmin = eigenvalues.min();
    if lmin < -tol.abs_check_tol * scale {
        return Err(Error::InvalidInput(format!(
            "matrix is indefinite (smallest eigenvalue {lmin:.3e})"
        )));
    }
    Ok((eigenvalues, eigenvectors))
}

/// Eigenvalues are ascending, so the `rank` largest are the trailing ones.
fn sqrt_pinv_from_eigen(
    eigenvalues: &DVector<f64>,
    eigenvectors: &DMatrix<f64>,
    rank: usize,
) -> DMatrix<f64> {
    let n = eigenvalues.len();
    let keep = eigenvectors.columns(n - rank, rank);
    let scaled = DMatrix::from_fn(n, rank, |i, j| {
        keep[(i, j)] / eigenvalues[n - rank + j].sqrt()
    });
    scaled * keep.transpose()
}

/// Orthogonal projector onto the column space of `m`, i.e. `M M^+`.
pub fn orth_proj(m: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    let basis = orthonormal_basis(m, tol)?;
    Ok(&basis * basis.transpose())
}

/// Orthonormal basis (as columns) of the column space of `m`.
///
/// The result has zero columns when `m` has numerical rank zero.
pub fn orthonormal_basis(m: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    ensure_finite(m, "matrix")?;
    let svd = SortedSvd::new(m);
    Ok(svd.range_basis(svd.rank(tol)))
}

/// Orthonormal basis of the orthogonal complement of the column space of `m`.
pub fn orth_complement(m: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let p = orth_proj(m, tol)?;
    let residual = DMatrix::identity(n, n) - p;
    let svd = SortedSvd::new(&residual);
    // residual is an exact projector up to rounding: its singular values are 0 or 1
    let r = svd.singular_values.iter().filter(|&&s| s > 0.5).count();
    Ok(svd.range_basis(r))
}

/// Largest singular value (spectral norm). Zero for the zero matrix.
pub fn op_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    SortedSvd::new(m).largest()
}

pub fn num_rank(m: &DMatrix<f64>, tol: &Tolerance) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    SortedSvd::new(m).rank(tol)
}

/// Singular values above the rank cutoff, largest first.
pub fn nonzero_singular_values(m: &DMatrix<f64>, tol: &Tolerance) -> Vec<f64> {
    let svd = SortedSvd::new(m);
    let r = svd.rank(tol);
    svd.singular_values.iter().take(r).copied().collect()
}

/// Ratio of the largest to the smallest nonzero singular value.
pub fn condition_number(m: &DMatrix<f64>, tol: &Tolerance) -> Result<f64> {
    ensure_finite(m, "matrix")?;
    let s = nonzero_singular_values(m, tol);
    ratio_of_extremes(&s)
}

/// Ratio of the largest to the `rank`-th largest singular value.
pub fn condition_number_truncated(m: &DMatrix<f64>, rank: usize) -> Result<f64> {
    ensure_finite(m, "matrix")?;
    let svd = SortedSvd::new(m);
    let s: Vec<f64> = svd.singular_values.iter().take(rank).copied().collect();
    ratio_of_extremes(&s)
}

fn ratio_of_extremes(s: &[f64]) -> Result<f64> {
    match (s.first(), s.last()) {
        (Some(hi), Some(lo)) => Ok(hi / lo),
        _ => Err(Error::InvalidInput(
            "condition number of a zero matrix".into(),
        )),
    }
}

/// Cosine of the angle from span(S) to span(W): the minimum of `|P_W s|` over
/// unit vectors `s` in span(S).
///
/// Computed from orthonormal bases of both spans, independently of the
/// eigenvalue route used in the diagnostics module.
pub fn principal_angle_cos_oracle(
    s_basis: &DMatrix<f64>,
    w_basis: &DMatrix<f64>,
    tol: &Tolerance,
) -> Result<f64> {
    if s_basis.nrows() != w_basis.nrows() {
        return Err(Error::DimensionMismatch {
            context: "principal angle",
            expected: s_basis.nrows(),
            found: w_basis.nrows(),
        });
    }
    let qs = orthonormal_basis(s_basis, tol)?;
    let qw = orthonormal_basis(w_basis, tol)?;
    if qs.ncols() == 0 || qw.ncols() == 0 {
        return Err(Error::InvalidInput("subspace has numerical rank 0".into()));
    }
    if qw.ncols() < qs.ncols() {
        // some direction of S is orthogonal to W
        return Ok(0.0);
    }
    let cross = qw.transpose() * &qs;
    let smin = SortedSvd::new(&cross)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(smin.clamp(0.0, 1.0))
}
