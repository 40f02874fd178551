//! Sampling and reconstruction in different subspaces by oblique projections.
//!
//! A signal `f` in `R^n` is observed through inner products with a sampling
//! frame `{u_j}` and reconstructed in the span of a second frame `{g_k}`.
//! Two reconstructions are provided: generalized sampling, the oblique
//! projection onto G along `S(G)^perp`, and frame-independent sampling, the
//! oblique projection onto G along `P_U(G)^perp`, which depends only on the
//! spaces and has the smallest possible quasi-optimality constant.

pub mod diagnostics;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod planar;
pub mod projections;
pub mod random;

pub use diagnostics::{full_report, DiagnosticsReport};
pub use error::{Error, Result};
pub use frames::{FrameBounds, FrameSequence};
pub use linalg::Tolerance;
pub use projections::{
    build, check_feasible, consistent_build, fis_build, gs_build, measure, reconstruct,
    Measurements, Method, ReconstructionOperator, SamplingProblem,
};
