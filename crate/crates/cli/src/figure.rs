//! Planar figure data: the ellipse `{x : |U^T (p - x)| <= 1}` and its images
//! under the two projections.

use nalgebra::DVector;
use oblique_core::diagnostics::eta_of;
use oblique_core::linalg::{num_rank, psd_sqrt_pinv};
use oblique_core::{fis_build, gs_build, SamplingProblem, Tolerance};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::format::number;

pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub center: [f64; 2],
    pub g_direction: [f64; 2],
    pub segment_fis: [[f64; 2]; 2],
    pub segment_gs: [[f64; 2]; 2],
    pub eta_fis: f64,
    pub eta_gs: f64,
    pub ellipse_boundary: Vec<[f64; 2]>,
}

fn pair(v: &DVector<f64>) -> [f64; 2] {
    [v[0], v[1]]
}

fn segment(center: &DVector<f64>, dir: &DVector<f64>, half: f64) -> [[f64; 2]; 2] {
    [pair(&(center - dir * half)), pair(&(center + dir * half))]
}

impl FigureData {
    pub fn compute(
        p: &SamplingProblem,
        signal: &DVector<f64>,
        samples: usize,
        tol: &Tolerance,
    ) -> Result<FigureData> {
        if p.ambient_dim() != 2 {
            return Err(CliError::Unsupported(format!(
                "figures need ambient_dim = 2, got {}",
                p.ambient_dim()
            )));
        }
        if p.reconstruction().len() != 1 {
            return Err(CliError::Unsupported(format!(
                "figures need exactly one reconstruction vector, got {}",
                p.reconstruction().len()
            )));
        }
        if signal.len() != 2 {
            return Err(CliError::Input(format!(
                "signal: expected 2 entries, found {}",
                signal.len()
            )));
        }
        if samples == 0 {
            return Err(CliError::Input("samples: must be at least 1".into()));
        }
        let u = p.sampling().synthesis();
        if num_rank(u, tol) < 2 {
            return Err(CliError::Unsupported(
                "sampling vectors do not span the plane; the ellipse is degenerate".into(),
            ));
        }

        let g = p.reconstruction().vector(0);
        let g_hat = &g / g.norm();

        let fis = fis_build(p, tol)?;
        let gs = gs_build(p, tol)?;
        let (eta_fis, eta_gs) = (eta_of(&fis), eta_of(&gs));

        let root = psd_sqrt_pinv(&p.sampling().frame_operator(), tol)?;
        let ellipse_boundary = (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                let y = &root * DVector::from_column_slice(&[theta.cos(), theta.sin()]);
                pair(&(signal - y))
            })
            .collect();

        Ok(FigureData {
            center: pair(signal),
            g_direction: pair(&g_hat),
            segment_fis: segment(&(&fis.p * signal), &g_hat, eta_fis),
            segment_gs: segment(&(&gs.p * signal), &g_hat, eta_gs),
            eta_fis,
            eta_gs,
            ellipse_boundary,
        })
    }

    /// `kind,index,x,y` rows: center, g_direction, both segments, then the
    /// boundary in order of increasing angle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,index,x,y\n");
        let mut row = |kind: &str, i: usize, pt: &[f64; 2]| {
            out.push_str(&format!("{kind},{i},{},{}\n", number(pt[0]), number(pt[1])));
        };
        row("center", 0, &self.center);
        row("g_direction", 0, &self.g_direction);
        for (i, pt) in self.segment_fis.iter().enumerate() {
            row("segment_fis", i, pt);
        }
        for (i, pt) in self.segment_gs.iter().enumerate() {
            row("segment_gs", i, pt);
        }
        for (i, pt) in self.ellipse_boundary.iter().enumerate() {
            row("boundary", i, pt);
        }
        out
    }

    pub fn half_length(segment: &[[f64; 2]; 2]) -> f64 {
        let dx = segment[1][0] - segment[0][0];
        let dy = segment[1][1] - segment[0][1];
        0.5 * dx.hypot(dy)
    }
}
