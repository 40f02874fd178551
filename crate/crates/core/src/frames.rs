//! Finite frame sequences in `R^n`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, num_rank, SortedSvd, Tolerance};

/// An ordered, finite list of vectors in `R^n`, stored column-wise as its
/// synthesis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    synthesis: DMatrix<f64>,
}

/// Optimal lower and upper frame bounds of a frame for its span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_tight(&self, rel: f64) -> bool {
        self.upper - self.lower <= rel * self.upper
    }
}

impl FrameSequence {
    /// Builds a frame from row-listed vectors of length `ambient_dim`.
    pub fn new(ambient_dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be >= 1".into()));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidInput("frame has no vectors".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                context: "frame vector",
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let synthesis = DMatrix::from_fn(ambient_dim, vectors.len(), |r, c| vectors[c][r]);
        Self::from_synthesis(synthesis)
    }

    /// Builds a frame whose vectors are the columns of `synthesis`.
    pub fn from_synthesis(synthesis: DMatrix<f64>) -> Result<Self> {
        ensure_finite(&synthesis, "frame")?;
        if synthesis.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidInput(
                "frame consists of zero vectors only".into(),
            ));
        }
        Ok(FrameSequence { synthesis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.synthesis.nrows()
    }

    /// Number of frame vectors.
    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.synthesis.column(j).into_owned()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        self.synthesis
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    /// The `n x m` synthesis matrix whose columns are the frame vectors.
    pub fn synthesis(&self) -> &DMatrix<f64> {
        &self.synthesis
    }

    /// The analysis matrix, `f -> (<f, u_j>)_j`.
    pub fn analysis(&self) -> DMatrix<f64> {
        self.synthesis.transpose()
    }

    /// Frame operator `S = U U^T`.
    pub fn frame_operator(&self) -> DMatrix<f64> {
        &self.synthesis * self.synthesis.transpose()
    }

    /// Dimension of the spanned subspace.
    pub fn span_dim(&self, tol: &Tolerance) -> usize {
        num_rank(&self.synthesis, tol)
    }

    /// Extreme nonzero eigenvalues of the frame operator, obtained as squared
    /// extreme nonzero singular values of the synthesis matrix.
    pub fn frame_bounds(&self, tol: &Tolerance) -> Result<FrameBounds> {
        let svd = SortedSvd::new(&self.synthesis);
        let r = svd.rank(tol);
        if r == 0 {
            return Err(Error::InvalidInput("frame has numerical rank 0".into()));
        }
        Ok(FrameBounds {
            lower: svd.singular_values[r - 1].powi(2),
            upper: svd.singular_values[0].powi(2),
        })
    }

    /// Canonical tight frame `{S^{+/2} u_j}`, a tight frame for the same span
    /// with bound 1.
    pub fn canonical_tight(&self, tol: &Tolerance) -> Result<FrameSequence> {
        // U = Y diag(s) Z^T  =>  S^{+/2} U = Y_r Z_r^T
        let svd = SortedSvd::new(&self.synthesis);
        let r = svd.rank(tol);
        if r == 0 {
            return Err(Error::InvalidInput("frame has numerical rank 0".into()));
        }
        let tight = svd.range_basis(r) * svd.v_t.rows(0, r);
        Ok(FrameSequence { synthesis: tight })
    }

    /// True when the frame vectors are linearly independent.
    pub fn is_riesz(&self, tol: &Tolerance) -> bool {
        self.span_dim(tol) == self.len()
    }

    /// Returns the frame with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<FrameSequence> {
        Self::from_synthesis(&self.synthesis * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::psd_sqrt_pinv;
    use nalgebra::dmatrix;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, eps: f64) -> bool {
        a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= eps)
    }

    fn example_frame() -> FrameSequence {
        FrameSequence::new(2, &[vec![0.0, 1.0], vec![0.8, 1.0]]).unwrap()
    }

    #[test]
    fn synthesis_examples() {
        let f = FrameSequence::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(f.synthesis(), &DMatrix::<f64>::identity(2, 2));
        assert_eq!(example_frame().synthesis(), &dmatrix![0.0, 0.8; 1.0, 1.0]);
        let single = FrameSequence::new(2, &[vec![3.0, 4.0]]).unwrap();
        assert_eq!(single.synthesis(), &dmatrix![3.0; 4.0]);
        assert_eq!(single.analysis(), dmatrix![3.0, 4.0]);
    }

    #[test]
    fn rejects_invalid_frames() {
        assert!(FrameSequence::new(2, &[]).is_err());
        assert!(FrameSequence::new(2, &[vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(matches!(
            FrameSequence::new(2, &[vec![1.0, 0.0, 0.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(FrameSequence::new(2, &[vec![f64::INFINITY, 0.0]]).is_err());
        // zero vectors inside a nonzero frame are fine
        assert!(FrameSequence::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0]]).is_ok());
    }

    #[test]
    fn frame_operator_examples() {
        let f = FrameSequence::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(f.frame_operator(), DMatrix::<f64>::identity(2, 2));
        // u1 u1^T + u2 u2^T = [[0,0],[0,1]] + [[0.64,0.8],[0.8,1]]
        let s = example_frame().frame_operator();
        assert!(close(&s, &dmatrix![0.64, 0.8; 0.8, 2.0], 1e-15));
        let rep = FrameSequence::new(2, &[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(rep.frame_operator(), dmatrix![2.0, 0.0; 0.0, 0.0]);
    }

    #[test]
    fn frame_bounds_examples() {
        let tol = Tolerance::default();
        let onb = FrameSequence::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let b = onb.frame_bounds(&tol).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);

        let rep = FrameSequence::new(2, &[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let b = rep.frame_bounds(&tol).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-14 && (b.upper - 2.0).abs() < 1e-14);

        // Mercedes-Benz frame: S = sum of (cos t, sin t)(cos t, sin t)^T
        // = [[3/2, 0], [0, 3/2]] for t = 90, 210, 330 degrees.
        let vs: Vec<Vec<f64>> = [90.0_f64, 210.0, 330.0]
            .iter()
            .map(|d| vec![d.to_radians().cos(), d.to_radians().sin()])
            .collect();
        let etf = FrameSequence::new(2, &vs).unwrap();
        let b = etf.frame_bounds(&tol).unwrap();
        assert!((b.lower - 1.5).abs() < 1e-14 && (b.upper - 1.5).abs() < 1e-14);
        assert!(b.is_tight(1e-12));
    }

    #[test]
    fn canonical_tight_examples() {
        let tol = Tolerance::default();
        let onb = FrameSequence::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let t = onb.canonical_tight(&tol).unwrap();
        assert!(close(t.synthesis(), onb.synthesis(), 1e-14));

        let one = FrameSequence::new(2, &[vec![2.0, 0.0]]).unwrap();
        let t = one.canonical_tight(&tol).unwrap();
        assert!(close(t.synthesis(), &dmatrix![1.0; 0.0], 1e-15));

        // independent route: S^{+/2} from the eigendecomposition of S
        let f = example_frame();
        let t = f.canonical_tight(&tol).unwrap();
        let b = t.frame_bounds(&tol).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-9);
        let m = psd_sqrt_pinv(&f.frame_operator(), &tol).unwrap() * f.synthesis();
        assert!(close(&m, t.synthesis(), 1e-12));
        assert!(close(
            &(&m * m.transpose()),
            &DMatrix::identity(2, 2),
            1e-12
        ));
    }

    #[test]
    fn riesz_examples() {
        let tol = Tolerance::default();
        let onb = FrameSequence::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(onb.is_riesz(&tol));
        let col = FrameSequence::new(2, &[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(!col.is_riesz(&tol));
        assert!(example_frame().is_riesz(&tol));
    }
}
