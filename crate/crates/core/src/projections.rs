//! Reconstruction operators built from a sampling frame `{u_j}` and a
//! reconstruction frame `{g_k}`.
//!
//! Each operator is materialized as three matrices: the coefficient map
//! `measurements -> c`, the measurement-to-signal map `Q = G * coeff_map`, and
//! the induced projection `P = Q U^T`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diagnostics::angle_cos;
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::linalg::{num_rank, orth_proj, pinv_truncated, psd_sqrt_pinv_truncated, Tolerance};

/// `cos(phi_GU)` must exceed this for a problem to count as feasible.
pub const FEASIBILITY_THRESHOLD: f64 = 1e-10;

/// Sampling frame and reconstruction frame in a common ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingProblem {
    sampling: FrameSequence,
    reconstruction: FrameSequence,
}

impl SamplingProblem {
    pub fn new(sampling: FrameSequence, reconstruction: FrameSequence) -> Result<Self> {
        if sampling.ambient_dim() != reconstruction.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "reconstruction frame ambient dimension",
                expected: sampling.ambient_dim(),
                found: reconstruction.ambient_dim(),
            });
        }
        Ok(SamplingProblem {
            sampling,
            reconstruction,
        })
    }

    /// Frame `{u_j}` spanning the sampling space U.
    pub fn sampling(&self) -> &FrameSequence {
        &self.sampling
    }

    /// Frame `{g_k}` spanning the reconstruction space G.
    pub fn reconstruction(&self) -> &FrameSequence {
        &self.reconstruction
    }

    pub fn ambient_dim(&self) -> usize {
        self.sampling.ambient_dim()
    }

    /// Same reconstruction frame, different sampling frame.
    pub fn with_sampling(&self, sampling: FrameSequence) -> Result<Self> {
        SamplingProblem::new(sampling, self.reconstruction.clone())
    }

    /// `U^T G`, the cross-Gram matrix between the two frames.
    pub fn cross_gram(&self) -> DMatrix<f64> {
        self.sampling.analysis() * self.reconstruction.synthesis()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Oblique projection onto G along `S(G)^perp`.
    Generalized,
    /// Oblique projection onto G along `P_U(G)^perp`.
    FrameIndependent,
    /// Oblique projection onto G along `U^perp`; requires `dim U = dim G`.
    Consistent,
}

impl Method {
    pub fn short_name(&self) -> &'static str {
        match self {
            Method::Generalized => "gs",
            Method::FrameIndependent => "fis",
            Method::Consistent => "consistent",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gs" | "generalized" => Ok(Method::Generalized),
            "fis" | "frame_independent" => Ok(Method::FrameIndependent),
            "consistent" => Ok(Method::Consistent),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// A measurement-to-signal map together with the projection it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionOperator {
    pub method: Method,
    /// `n x m`, measurements to signal.
    pub q: DMatrix<f64>,
    /// `n x n`, equal to `Q U^T`.
    pub p: DMatrix<f64>,
    /// `|G| x m`, measurements to minimal-norm coefficients.
    pub coeff_map: DMatrix<f64>,
    reconstruction_synthesis: DMatrix<f64>,
}

impl ReconstructionOperator {
    fn assemble(
        method: Method,
        problem: &SamplingProblem,
        coeff_map: DMatrix<f64>,
    ) -> ReconstructionOperator {
        let g = problem.reconstruction().synthesis().clone();
        let q = &g * &coeff_map;
        let p = &q * problem.sampling().analysis();
        ReconstructionOperator {
            method,
            q,
            p,
            coeff_map,
            reconstruction_synthesis: g,
        }
    }

    /// Number of measurements the operator consumes.
    pub fn measurement_len(&self) -> usize {
        self.q.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.q.nrows()
    }
}

/// Inner products `<f, u_j>` of a signal with the sampling frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    pub values: DVector<f64>,
}

impl Measurements {
    pub fn new(values: DVector<f64>) -> Self {
        Measurements { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds a perturbation vector of the same length.
    pub fn perturbed(&self, noise: &DVector<f64>) -> Result<Measurements> {
        if noise.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "noise vector",
                expected: self.len(),
                found: noise.len(),
            });
        }
        Ok(Measurements::new(&self.values + noise))
    }
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub signal: DVector<f64>,
    pub coefficients: DVector<f64>,
}

/// Outcome of the feasibility test, with both criteria exposed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub cos_phi: f64,
    /// Injectivity of `U^T G`; only meaningful when G is a Riesz sequence.
    pub cross_gram_injective: Option<bool>,
}

impl Feasibility {
    pub fn by_angle(&self) -> bool {
        self.cos_phi > FEASIBILITY_THRESHOLD
    }

    pub fn is_feasible(&self) -> bool {
        self.by_angle() && self.cross_gram_injective.unwrap_or(true)
    }

    /// True unless the angle test and the injectivity test disagree.
    pub fn criteria_agree(&self) -> bool {
        self.cross_gram_injective
            .is_none_or(|inj| inj == self.by_angle())
    }
}

pub fn feasibility(p: &SamplingProblem, tol: &Tolerance) -> Result<Feasibility> {
    let cos_phi = angle_cos(p, tol)?;
    let g = p.reconstruction();
    let cross_gram_injective = g
        .is_riesz(tol)
        .then(|| num_rank(&p.cross_gram(), tol) == g.len());
    Ok(Feasibility {
        cos_phi,
        cross_gram_injective,
    })
}

/// Whether `cos(phi_GU)` is positive, i.e. whether the oblique projections
/// onto G exist. Never errors; numerical failures count as infeasible.
pub fn check_feasible(p: &SamplingProblem, tol: &Tolerance) -> bool {
    feasibility(p, tol).is_ok_and(|f| f.is_feasible())
}

fn require_feasible(p: &SamplingProblem, tol: &Tolerance) -> Result<()> {
    let f = feasibility(p, tol)?;
    if f.is_feasible() {
        Ok(())
    } else {
        Err(Error::Infeasible { cos_phi: f.cos_phi })
    }
}

/// `W = (U^T U)^{+/2}`, truncated at `dim U`.
pub fn sampling_weight(p: &SamplingProblem, tol: &Tolerance) -> Result<DMatrix<f64>> {
    let u = p.sampling();
    psd_sqrt_pinv_truncated(&(u.analysis() * u.synthesis()), u.span_dim(tol), tol)
}

// For a feasible problem the kernels of G, U^T G and W U^T G coincide, so both
// pseudoinverses below are taken at rank dim G, read off G itself.

/// Generalized sampling: `Q = G (U^T G)^+`.
pub fn gs_build(p: &SamplingProblem, tol: &Tolerance) -> Result<ReconstructionOperator> {
    require_feasible(p, tol)?;
    let dim_g = p.reconstruction().span_dim(tol);
    let coeff_map = pinv_truncated(&p.cross_gram(), dim_g)?;
    Ok(ReconstructionOperator::assemble(
        Method::Generalized,
        p,
        coeff_map,
    ))
}

/// Frame-independent sampling: `Q = G (W U^T G)^+ W` with `W = (U^T U)^{+/2}`.
pub fn fis_build(p: &SamplingProblem, tol: &Tolerance) -> Result<ReconstructionOperator> {
    require_feasible(p, tol)?;
    let dim_g = p.reconstruction().span_dim(tol);
    let weight = sampling_weight(p, tol)?;
    let weighted = &weight * p.cross_gram();
    let coeff_map = pinv_truncated(&weighted, dim_g)? * weight;
    Ok(ReconstructionOperator::assemble(
        Method::FrameIndependent,
        p,
        coeff_map,
    ))
}

/// Consistent reconstruction, available when `dim U = dim G`. It coincides
/// with generalized sampling in that case.
pub fn consistent_build(p: &SamplingProblem, tol: &Tolerance) -> Result<ReconstructionOperator> {
    let dim_u = p.sampling().span_dim(tol);
    let dim_g = p.reconstruction().span_dim(tol);
    if dim_u != dim_g {
        return Err(Error::Unsupported(format!(
            "consistent reconstruction needs dim U = dim G, got {dim_u} and {dim_g}"
        )));
    }
    require_feasible(p, tol)?;
    if num_rank(&p.cross_gram(), tol) < dim_g {
        return Err(Error::Numerical(
            "U^T G is not invertible on span(G)".into(),
        ));
    }
    let mut op = gs_build(p, tol)?;
    op.method = Method::Consistent;
    Ok(op)
}

pub fn build(
    method: Method,
    p: &SamplingProblem,
    tol: &Tolerance,
) -> Result<ReconstructionOperator> {
    match method {
        Method::Generalized => gs_build(p, tol),
        Method::FrameIndependent => fis_build(p, tol),
        Method::Consistent => consistent_build(p, tol),
    }
}

fn check_signal(p: &SamplingProblem, f: &DVector<f64>) -> Result<()> {
    if f.len() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "signal",
            expected: p.ambient_dim(),
            found: f.len(),
        });
    }
    Ok(())
}

/// Samples `f` with the sampling frame.
pub fn measure(p: &SamplingProblem, f: &DVector<f64>) -> Result<Measurements> {
    check_signal(p, f)?;
    Ok(Measurements::new(p.sampling().analysis() * f))
}

/// Applies the operator to measurements, returning the reconstructed signal
/// and its minimal-norm coefficients in the reconstruction frame.
pub fn reconstruct(op: &ReconstructionOperator, b: &Measurements) -> Result<Reconstruction> {
    if b.len() != op.measurement_len() {
        return Err(Error::DimensionMismatch {
            context: "measurements",
            expected: op.measurement_len(),
            found: b.len(),
        });
    }
    let coefficients = &op.coeff_map * &b.values;
    let signal = &op.reconstruction_synthesis * &coefficients;
    Ok(Reconstruction {
        signal,
        coefficients,
    })
}

/// `max_k |<P_U (P f - f), g_k>|`. Vanishes for every `f` exactly when P is
/// the frame-independent projection.
pub fn consistency_residual(
    op: &ReconstructionOperator,
    p: &SamplingProblem,
    f: &DVector<f64>,
    tol: &Tolerance,
) -> Result<f64> {
    check_signal(p, f)?;
    if op.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "operator",
            expected: p.ambient_dim(),
            found: op.ambient_dim(),
        });
    }
    let pu = orth_proj(p.sampling().synthesis(), tol)?;
    let diff = &op.p * f - f;
    let inner = p.reconstruction().analysis() * (pu * diff);
    Ok(inner.amax())
}
