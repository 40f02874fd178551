//! Stability and quasi-optimality diagnostics of a sampling problem.
//!
//! `mu` of an operator is the smallest constant with
//! `|f - F f| <= mu |f - P_G f|` for all `f`; for an oblique projection onto G
//! it equals the operator norm of the projection. `eta` is the norm of the
//! measurement-to-signal map `Q`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::FrameBounds;
use crate::linalg::{
    condition_number_truncated, op_norm, orth_proj, principal_angle_cos_oracle, psd_sqrt_pinv,
    sym_eigen, SortedSvd, Tolerance,
};
use crate::projections::{
    feasibility, fis_build, gs_build, sampling_weight, ReconstructionOperator, SamplingProblem,
};

/// Slack applied to every inequality checked in a report.
pub const INEQUALITY_SLACK: f64 = 1e-8;

/// `cos(phi_GU)` through the eigenvalue formula
/// `lambda_min((G^T G)^{-1/2} G^T P_U G (G^T G)^{-1/2})`.
///
/// Only defined when the reconstruction frame is a Riesz sequence; returns
/// `None` otherwise.
pub fn angle_cos_eigen(p: &SamplingProblem, tol: &Tolerance) -> Result<Option<f64>> {
    let g = p.reconstruction();
    if !g.is_riesz(tol) {
        return Ok(None);
    }
    let gram_isqrt = psd_sqrt_pinv(&(g.analysis() * g.synthesis()), tol)?;
    let pu = orth_proj(p.sampling().synthesis(), tol)?;
    let form = &gram_isqrt * g.analysis() * pu * g.synthesis() * &gram_isqrt;
    let lmin = sym_eigen(&form).0.min();
    Ok(Some(lmin.clamp(0.0, 1.0).sqrt()))
}

/// `cos(phi_GU) = inf { |P_U g| : g in G, |g| = 1 }`.
pub fn angle_cos(p: &SamplingProblem, tol: &Tolerance) -> Result<f64> {
    match angle_cos_eigen(p, tol)? {
        Some(c) => Ok(c),
        None => principal_angle_cos_oracle(
            p.reconstruction().synthesis(),
            p.sampling().synthesis(),
            tol,
        ),
    }
}

pub fn eta_of(op: &ReconstructionOperator) -> f64 {
    op_norm(&op.q)
}

/// Verifies that `op.p` is a projection onto span(G).
pub fn check_projection_onto_g(op: &ReconstructionOperator, p: &SamplingProblem) -> Result<()> {
    let proj = &op.p;
    let scale = op_norm(proj).max(1.0);
    let idem = (proj * proj - proj).amax();
    if idem > INEQUALITY_SLACK * scale * scale {
        return Err(Error::InvalidOperator(format!(
            "P is not idempotent (max |P^2 - P| = {idem:.3e})"
        )));
    }
    let g = p.reconstruction().synthesis();
    let fix = (proj * g - g).amax();
    if fix > INEQUALITY_SLACK * scale * g.amax().max(1.0) {
        return Err(Error::InvalidOperator(format!(
            "P does not fix span(G) (max |P g - g| = {fix:.3e})"
        )));
    }
    Ok(())
}

/// Quasi-optimality constant of a projection onto G, its operator norm.
pub fn mu_of(op: &ReconstructionOperator, p: &SamplingProblem) -> Result<f64> {
    check_projection_onto_g(op, p)?;
    Ok(op_norm(&op.p))
}

/// Signal attaining `|f - P f| = mu |f - P_G f|`: the top right singular
/// vector of `I - P`.
pub fn quasi_optimality_witness(op: &ReconstructionOperator) -> DVector<f64> {
    let n = op.p.nrows();
    let residual = DMatrix::identity(n, n) - &op.p;
    let svd = SortedSvd::new(&residual);
    svd.v_t.row(0).transpose()
}

/// `(U^T U)^{+/2} U^T G`, the matrix of the weighted least-squares problem
/// solved by frame-independent sampling.
pub fn weighted_cross_gram(p: &SamplingProblem, tol: &Tolerance) -> Result<DMatrix<f64>> {
    Ok(sampling_weight(p, tol)? * p.cross_gram())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionNumbers {
    /// Pseudo condition number of the reconstruction synthesis matrix.
    pub kappa_g: f64,
    /// Pseudo condition number of `(U^T U)^{+/2} U^T G`.
    pub kappa_weighted: f64,
}

/// The three norms compared by the pointwise coefficient sandwich
/// `cos(phi) |G c| <= |W U^T G c| <= |G c|`, and the frame-bound version
/// `sqrt(C) cos(phi) |c| <= |W U^T G c| <= sqrt(D) |c|` for `c` orthogonal to
/// the kernel of G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSandwich {
    pub synthesized: f64,
    pub weighted: f64,
    pub coefficient: f64,
}

impl CoefficientSandwich {
    /// Largest amount by which `cos|Gc| <= |WU^TGc| <= |Gc|` is violated.
    pub fn synthesis_violation(&self, cos_phi: f64) -> f64 {
        (cos_phi * self.synthesized - self.weighted)
            .max(self.weighted - self.synthesized)
            .max(0.0)
    }

    /// Largest amount by which the frame-bound sandwich is violated.
    pub fn frame_bound_violation(&self, cos_phi: f64, g_bounds: &FrameBounds) -> f64 {
        (g_bounds.lower.sqrt() * cos_phi * self.coefficient - self.weighted)
            .max(self.weighted - g_bounds.upper.sqrt() * self.coefficient)
            .max(0.0)
    }
}

/// Evaluates both coefficient sandwiches at `c`, after projecting `c` onto
/// the orthogonal complement of the kernel of G.
pub fn coefficient_sandwich(
    p: &SamplingProblem,
    weighted: &DMatrix<f64>,
    c: &DVector<f64>,
    tol: &Tolerance,
) -> Result<CoefficientSandwich> {
    let g = p.reconstruction();
    if c.len() != g.len() {
        return Err(Error::DimensionMismatch {
            context: "coefficient vector",
            expected: g.len(),
            found: c.len(),
        });
    }
    let corange = orth_proj(&g.analysis(), tol)?;
    let c = corange * c;
    Ok(CoefficientSandwich {
        synthesized: (g.synthesis() * &c).norm(),
        weighted: (weighted * &c).norm(),
        coefficient: c.norm(),
    })
}

/// Condition numbers of G and of the weighted cross-Gram matrix. Both
/// coefficient sandwiches are checked along the right singular vectors of
/// both matrices; a violation is reported as a numerical failure.
pub fn kappa_of(p: &SamplingProblem, tol: &Tolerance) -> Result<ConditionNumbers> {
    let feas = feasibility(p, tol)?;
    if !feas.is_feasible() {
        return Err(Error::Infeasible {
            cos_phi: feas.cos_phi,
        });
    }
    let g = p.reconstruction().synthesis();
    let weighted = weighted_cross_gram(p, tol)?;
    let dim_g = p.reconstruction().span_dim(tol);
    let kappa_g = condition_number_truncated(g, dim_g)?;
    let kappa_weighted = condition_number_truncated(&weighted, dim_g)?;

    let g_bounds = p.reconstruction().frame_bounds(tol)?;
    for m in [g, &weighted] {
        let svd = SortedSvd::new(m);
        for c in svd.v_t.row_iter() {
            let c = c.transpose();
            let s = coefficient_sandwich(p, &weighted, &c, tol)?;
            let worst = s
                .synthesis_violation(feas.cos_phi)
                .max(s.frame_bound_violation(feas.cos_phi, &g_bounds));
            if worst > INEQUALITY_SLACK * s.coefficient.max(1.0) * g_bounds.upper.sqrt().max(1.0) {
                return Err(Error::Numerical(format!(
                    "coefficient sandwich violated by {worst:.3e}"
                )));
            }
        }
    }
    Ok(ConditionNumbers {
        kappa_g,
        kappa_weighted,
    })
}

/// `dist_to_g * sqrt(mu^2 - 1) + noise_norm * eta`, the bound on
/// `|P_G f - Q(U^T f + c)|` for operators with `eta = |Q|`.
pub fn error_bound(mu: f64, eta: f64, dist_to_g: f64, noise_norm: f64) -> Result<f64> {
    if mu.is_nan() || mu < 1.0 - 1e-12 {
        return Err(Error::InvalidInput(format!("mu must be >= 1, got {mu}")));
    }
    for (name, v) in [
        ("eta", eta),
        ("dist_to_g", dist_to_g),
        ("noise_norm", noise_norm),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{name} must be a nonnegative number, got {v}"
            )));
        }
    }
    Ok(dist_to_g * (mu * mu - 1.0).max(0.0).sqrt() + noise_norm * eta)
}

/// Every quantity reported for a sampling problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub cos_phi: f64,
    pub feasible: bool,
    pub mu_fis: Option<f64>,
    pub mu_gs: Option<f64>,
    pub eta_fis: Option<f64>,
    pub eta_gs: Option<f64>,
    pub kappa_g: Option<f64>,
    pub kappa_weighted: Option<f64>,
    pub u_bounds: FrameBounds,
    pub g_bounds: FrameBounds,
    pub dim_u: usize,
    pub dim_g: usize,
    /// `dim U = dim G`: generalized and frame-independent sampling coincide.
    pub coincide_dim: bool,
    /// The sampling frame is tight: both methods coincide.
    pub coincide_tight: bool,
    /// First inequality that failed to hold, if any.
    pub violation: Option<String>,
}

fn first_violation(r: &DiagnosticsReport) -> Option<String> {
    let (Some(mu_fis), Some(mu_gs), Some(eta_fis), Some(eta_gs), Some(kg), Some(kw)) = (
        r.mu_fis,
        r.mu_gs,
        r.eta_fis,
        r.eta_gs,
        r.kappa_g,
        r.kappa_weighted,
    ) else {
        return None;
    };
    let slack = INEQUALITY_SLACK;
    let c = r.cos_phi;
    let (a, b) = (r.u_bounds.lower, r.u_bounds.upper);
    let checks = [
        ("eta_fis >= 1/sqrt(B)", eta_fis >= 1.0 / b.sqrt() - slack),
        (
            "eta_fis <= 1/(sqrt(A) cos_phi)",
            eta_fis <= 1.0 / (a.sqrt() * c) + slack,
        ),
        ("mu_fis = 1/cos_phi", (mu_fis - 1.0 / c).abs() <= slack),
        ("mu_gs >= 1", mu_gs >= 1.0 - slack),
        (
            "mu_gs <= sqrt(B/A)/cos_phi",
            mu_gs <= (b / a).sqrt() / c + slack,
        ),
        ("kappa_weighted >= cos_phi kappa_G", kw >= c * kg - slack),
        ("kappa_weighted <= kappa_G/cos_phi", kw <= kg / c + slack),
        ("mu_fis <= mu_gs", mu_fis <= mu_gs + slack),
        ("eta_gs <= eta_fis", eta_gs <= eta_fis + slack),
    ];
    checks
        .iter()
        .find(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string())
}

/// Computes every diagnostic. Infeasible problems yield a report with
/// `feasible = false` and the operator-dependent fields left empty.
pub fn full_report(p: &SamplingProblem, tol: &Tolerance) -> Result<DiagnosticsReport> {
    let feas = feasibility(p, tol)?;
    let u_bounds = p.sampling().frame_bounds(tol)?;
    let g_bounds = p.reconstruction().frame_bounds(tol)?;
    let dim_u = p.sampling().span_dim(tol);
    let dim_g = p.reconstruction().span_dim(tol);
    let mut report = DiagnosticsReport {
        cos_phi: feas.cos_phi,
        feasible: feas.is_feasible(),
        mu_fis: None,
        mu_gs: None,
        eta_fis: None,
        eta_gs: None,
        kappa_g: None,
        kappa_weighted: None,
        u_bounds,
        g_bounds,
        dim_u,
        dim_g,
        coincide_dim: dim_u == dim_g,
        coincide_tight: u_bounds.is_tight(1e-9),
        violation: None,
    };
    if !report.feasible {
        return Ok(report);
    }
    let fis = fis_build(p, tol)?;
    let gs = gs_build(p, tol)?;
    let kappa = kappa_of(p, tol)?;
    report.mu_fis = Some(mu_of(&fis, p)?);
    report.mu_gs = Some(mu_of(&gs, p)?);
    report.eta_fis = Some(eta_of(&fis));
    report.eta_gs = Some(eta_of(&gs));
    report.kappa_g = Some(kappa.kappa_g);
    report.kappa_weighted = Some(kappa.kappa_weighted);
    report.violation = first_violation(&report);
    Ok(report)
}
