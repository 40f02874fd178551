//! Seeded generator of random feasible sampling problems.
//!
//! Frames are Gaussian: a random basis of the subspace times a Gaussian mixing
//! matrix, so a frame of `redundancy * dim` vectors spans exactly `dim`
//! dimensions. The reconstruction basis is a random mix of a component inside
//! U and a component in general position, and problems are redrawn until
//! `cos(phi_GU)` exceeds [`ProblemGenerator::min_cos`].

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::diagnostics::angle_cos;
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::linalg::Tolerance;
use crate::projections::SamplingProblem;

pub const DEFAULT_SEED: u64 = 0x0b11_9e5a_3d1e_2016;

const MAX_ATTEMPTS: usize = 1000;

/// Dimensions of a random problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemShape {
    pub ambient_dim: usize,
    pub dim_u: usize,
    pub dim_g: usize,
    pub len_u: usize,
    pub len_g: usize,
}

pub struct ProblemGenerator {
    rng: ChaCha8Rng,
    pub min_cos: f64,
    pub tol: Tolerance,
}

impl ProblemGenerator {
    pub fn new(seed: u64) -> Self {
        ProblemGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            min_cos: 0.05,
            tol: Tolerance::default(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| self.rng.sample(StandardNormal))
    }

    pub fn gaussian_vector(&mut self, len: usize) -> DVector<f64> {
        DVector::from_fn(len, |_, _| self.rng.sample(StandardNormal))
    }

    /// `len` vectors spanning the column space of `basis`.
    pub fn frame_for(&mut self, basis: &DMatrix<f64>, len: usize) -> Result<FrameSequence> {
        let dim = basis.ncols();
        let synthesis = if len == dim {
            basis.clone()
        } else {
            basis * self.gaussian_matrix(dim, len)
        };
        FrameSequence::from_synthesis(synthesis)
    }

    /// Draws a random shape: ambient dimension in `dims`, `dim_g <= dim_u`,
    /// frame redundancy 1 to 3.
    pub fn shape(&mut self, dims: std::ops::RangeInclusive<usize>) -> ProblemShape {
        let ambient_dim = self.rng.random_range(dims);
        let dim_u = self.rng.random_range(1..=ambient_dim);
        let dim_g = self.rng.random_range(1..=dim_u);
        let len_u = dim_u * self.rng.random_range(1..=3usize);
        let len_g = dim_g * self.rng.random_range(1..=3usize);
        ProblemShape {
            ambient_dim,
            dim_u,
            dim_g,
            len_u,
            len_g,
        }
    }

    pub fn problem_with_shape(&mut self, shape: ProblemShape) -> Result<SamplingProblem> {
        let ProblemShape {
            ambient_dim: n,
            dim_u,
            dim_g,
            len_u,
            len_g,
        } = shape;
        if dim_u == 0 || dim_g == 0 || dim_g > dim_u || dim_u > n || len_u < dim_u || len_g < dim_g
        {
            return Err(Error::InvalidInput(format!(
                "unusable problem shape {shape:?}"
            )));
        }
        for _ in 0..MAX_ATTEMPTS {
            let u_basis = self.gaussian_matrix(n, dim_u);
            let inside = &u_basis * self.gaussian_matrix(dim_u, dim_g);
            let spread: f64 = self.rng.random_range(0.0..1.5);
            let g_basis = inside + self.gaussian_matrix(n, dim_g) * spread;
            let u = self.frame_for(&u_basis, len_u)?;
            let g = self.frame_for(&g_basis, len_g)?;
            let p = SamplingProblem::new(u, g)?;
            if p.sampling().span_dim(&self.tol) != dim_u
                || p.reconstruction().span_dim(&self.tol) != dim_g
            {
                continue;
            }
            if angle_cos(&p, &self.tol)? > self.min_cos {
                return Ok(p);
            }
        }
        Err(Error::Numerical(format!(
            "no feasible problem of shape {shape:?} after {MAX_ATTEMPTS} draws"
        )))
    }

    /// A random feasible problem with ambient dimension in `dims`.
    pub fn problem(&mut self, dims: std::ops::RangeInclusive<usize>) -> Result<SamplingProblem> {
        let shape = self.shape(dims);
        self.problem_with_shape(shape)
    }
}
