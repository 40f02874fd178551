//! The two planar reference problems and their tabulated values.
//!
//! Both use the reconstruction vector `g = (1, 0)` and the signal `p = (3, 5)`.
//! The first samples with `u1 = (0, 1), u2 = (4/5, 1)`, the second with
//! `u1 = (1, 0), u2 = (1, 4/5)`.

use nalgebra::DVector;

use crate::frames::FrameSequence;
use crate::projections::{Method, SamplingProblem};

/// Reference signal shared by both problems.
pub const SIGNAL: [f64; 2] = [3.0, 5.0];

/// Absolute tolerance for comparing against the tabulated values.
pub const TABLE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Eta,
    Mu,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Eta => "eta",
            Quantity::Mu => "mu",
        }
    }
}

/// One tabulated value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    pub method: Method,
    pub quantity: Quantity,
    pub expected: f64,
}

#[derive(Debug, Clone)]
pub struct PlanarExample {
    pub name: &'static str,
    pub sampling: [[f64; 2]; 2],
    pub reconstruction: [f64; 2],
    pub table: [TableCell; 4],
}

impl PlanarExample {
    pub fn problem(&self) -> SamplingProblem {
        let u = FrameSequence::new(2, &self.sampling.map(|v| v.to_vec())).unwrap();
        let g = FrameSequence::new(2, &[self.reconstruction.to_vec()]).unwrap();
        SamplingProblem::new(u, g).unwrap()
    }

    pub fn signal(&self) -> DVector<f64> {
        DVector::from_column_slice(&SIGNAL)
    }
}

const fn cell(method: Method, quantity: Quantity, expected: f64) -> TableCell {
    TableCell {
        method,
        quantity,
        expected,
    }
}

pub fn first_example() -> PlanarExample {
    PlanarExample {
        name: "example1",
        sampling: [[0.0, 1.0], [0.8, 1.0]],
        reconstruction: [1.0, 0.0],
        table: [
            cell(Method::FrameIndependent, Quantity::Eta, 1.77),
            cell(Method::FrameIndependent, Quantity::Mu, 1.0),
            cell(Method::Generalized, Quantity::Eta, 1.25),
            cell(Method::Generalized, Quantity::Mu, 1.6),
        ],
    }
}

pub fn second_example() -> PlanarExample {
    PlanarExample {
        name: "example2",
        sampling: [[1.0, 0.0], [1.0, 0.8]],
        reconstruction: [1.0, 0.0],
        table: [
            cell(Method::FrameIndependent, Quantity::Eta, 1.0),
            cell(Method::FrameIndependent, Quantity::Mu, 1.0),
            cell(Method::Generalized, Quantity::Eta, 0.71),
            cell(Method::Generalized, Quantity::Mu, 1.08),
        ],
    }
}

pub fn all() -> [PlanarExample; 2] {
    [first_example(), second_example()]
}
