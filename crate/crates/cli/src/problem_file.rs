//! JSON problem files.
//!
//! ```json
//! {
//!   "ambient_dim": 2,
//!   "sampling_vectors": [[0.0, 1.0], [0.8, 1.0]],
//!   "reconstruction_vectors": [[1.0, 0.0]],
//!   "signal": [3.0, 5.0],
//!   "noise": [0.01, -0.02],
//!   "tolerance": { "rel_rank_tol": 1e-12, "abs_check_tol": 1e-9 }
//! }
//! ```
//!
//! `signal`, `noise` and `tolerance` (and each of its fields) are optional.

use std::fs;
use std::path::Path;

use nalgebra::DVector;
use oblique_core::{FrameSequence, SamplingProblem, Tolerance};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_rank_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_check_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ambient_dim: usize,
    pub sampling_vectors: Vec<Vec<f64>>,
    pub reconstruction_vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
}

fn check_vectors(field: &str, vectors: &[Vec<f64>], dim: usize) -> Result<()> {
    if vectors.is_empty() {
        return Err(CliError::Input(format!(
            "{field}: at least one vector is required"
        )));
    }
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(CliError::Input(format!(
                "{field}[{i}]: expected {dim} entries, found {}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Input(format!("{field}[{i}]: non-finite entry")));
        }
    }
    if vectors.iter().flatten().all(|&x| x == 0.0) {
        return Err(CliError::Input(format!("{field}: all vectors are zero")));
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient_dim == 0 {
            return Err(CliError::Input("ambient_dim: must be at least 1".into()));
        }
        check_vectors("sampling_vectors", &self.sampling_vectors, self.ambient_dim)?;
        check_vectors(
            "reconstruction_vectors",
            &self.reconstruction_vectors,
            self.ambient_dim,
        )?;
        if let Some(signal) = &self.signal {
            if signal.len() != self.ambient_dim {
                return Err(CliError::Input(format!(
                    "signal: expected {} entries, found {}",
                    self.ambient_dim,
                    signal.len()
                )));
            }
        }
        if let Some(noise) = &self.noise {
            if noise.len() != self.sampling_vectors.len() {
                return Err(CliError::Input(format!(
                    "noise: expected {} entries (one per sampling vector), found {}",
                    self.sampling_vectors.len(),
                    noise.len()
                )));
            }
        }
        if let Some(t) = &self.tolerance {
            for (name, v) in [
                ("rel_rank_tol", t.rel_rank_tol),
                ("abs_check_tol", t.abs_check_tol),
            ] {
                if let Some(v) = v {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(CliError::Input(format!(
                            "tolerance.{name}: must be positive, got {v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<SamplingProblem> {
        let u = FrameSequence::new(self.ambient_dim, &self.sampling_vectors)?;
        let g = FrameSequence::new(self.ambient_dim, &self.reconstruction_vectors)?;
        Ok(SamplingProblem::new(u, g)?)
    }

    pub fn signal(&self) -> Option<DVector<f64>> {
        self.signal.as_deref().map(DVector::from_column_slice)
    }

    pub fn noise(&self) -> Option<DVector<f64>> {
        self.noise.as_deref().map(DVector::from_column_slice)
    }

    /// Applies the file's tolerance overrides on top of `base`.
    pub fn tolerance(&self, base: Tolerance) -> Tolerance {
        let Some(t) = &self.tolerance else {
            return base;
        };
        Tolerance {
            rel_rank_tol: t.rel_rank_tol.or(base.rel_rank_tol),
            abs_check_tol: t.abs_check_tol.unwrap_or(base.abs_check_tol),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "ambient_dim": 2,
        "sampling_vectors": [[0.0, 1.0], [0.8, 1.0]],
        "reconstruction_vectors": [[1.0, 0.0]],
        "signal": [3.0, 5.0]
    }"#;

    #[test]
    fn parses_example() {
        let f = ProblemFile::parse(EXAMPLE).unwrap();
        assert_eq!(f.ambient_dim, 2);
        assert_eq!(f.signal().unwrap().as_slice(), &[3.0, 5.0]);
        assert!(f.noise().is_none());
        let p = f.problem().unwrap();
        assert_eq!(p.sampling().len(), 2);
    }

    #[test]
    fn reports_location_of_syntax_errors() {
        let err = ProblemFile::parse("{\n  \"ambient_dim\": 2,\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_bad_fields() {
        let cases = [
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0]], "reconstruction_vectors": [[1.0, 0.0]]}"#,
                "sampling_vectors[0]",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0, 0.0]], "reconstruction_vectors": []}"#,
                "reconstruction_vectors",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0, 0.0]], "reconstruction_vectors": [[1.0, 0.0]], "noise": [1.0, 2.0]}"#,
                "noise",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0, 0.0]], "reconstruction_vectors": [[1.0, 0.0]], "signal": [1.0]}"#,
                "signal",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[0.0, 0.0]], "reconstruction_vectors": [[1.0, 0.0]]}"#,
                "all vectors are zero",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0, 0.0]], "reconstruction_vectors": [[1.0, 0.0]], "tolerance": {"rel_rank_tol": -1}}"#,
                "tolerance.rel_rank_tol",
            ),
            (
                r#"{"ambient_dim": 2, "sampling_vectors": [[1.0, 0.0]], "reconstruction_vectors": [[1.0, 0.0]], "extra": 1}"#,
                "unknown field",
            ),
        ];
        for (text, needle) in cases {
            let err = ProblemFile::parse(text).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "{err} should mention {needle}"
            );
        }
    }

    #[test]
    fn tolerance_overrides_layer_on_base() {
        let mut f = ProblemFile::parse(EXAMPLE).unwrap();
        let base = Tolerance::default();
        assert_eq!(f.tolerance(base), base);
        f.tolerance = Some(ToleranceOverrides {
            rel_rank_tol: Some(1e-12),
            abs_check_tol: None,
        });
        let t = f.tolerance(base);
        assert_eq!(t.rel_rank_tol, Some(1e-12));
        assert_eq!(t.abs_check_tol, base.abs_check_tol);
    }

    #[test]
    fn json_round_trip() {
        let f = ProblemFile::parse(EXAMPLE).unwrap();
        let again = ProblemFile::parse(&f.to_json()).unwrap();
        assert_eq!(f, again);
        assert_eq!(f.problem().unwrap(), again.problem().unwrap());
    }
}
