//! The noise family `M = (1 − λ)I + λB`, where every row of `B` is the bias
//! vector `b`: with probability `λ` a reviewer ignores the paper and reports
//! a signal drawn from `b`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, CalibrationError, Result};
use crate::linalg::Matrix;
use crate::model::{JointMatrix, StateVector, PROBABILITY_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseRepr", into = "NoiseRepr")]
pub struct NoiseModel {
    lambda: f64,
    bias: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NoiseRepr {
    lambda: f64,
    bias: Vec<f64>,
}

impl TryFrom<NoiseRepr> for NoiseModel {
    type Error = CalibrationError;

    fn try_from(r: NoiseRepr) -> Result<Self> {
        Self::new(r.lambda, r.bias)
    }
}

impl From<NoiseModel> for NoiseRepr {
    fn from(m: NoiseModel) -> Self {
        Self {
            lambda: m.lambda,
            bias: m.bias,
        }
    }
}

impl NoiseModel {
    pub fn new(lambda: f64, bias: Vec<f64>) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(invalid(format!("noise level {lambda} is outside [0, 1)")));
        }
        // reuse the state checks for the bias distribution
        StateVector::new(bias.clone()).map_err(|e| invalid(format!("bias: {e}")))?;
        Ok(Self { lambda, bias })
    }

    /// The identity (noise-free) model on `dim` signals.
    pub fn none(dim: usize) -> Self {
        Self {
            lambda: 0.0,
            bias: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn dim(&self) -> usize {
        self.bias.len()
    }

    pub fn matrix(&self) -> Matrix {
        let keep = 1.0 - self.lambda;
        Matrix::from_fn(self.dim(), |i, j| {
            let diag = if i == j { keep } else { 0.0 };
            diag + self.lambda * self.bias[j]
        })
    }

    /// `ŵ = (1 − λ)w + λb`.
    pub fn apply_to_state(&self, w: &StateVector) -> StateVector {
        assert_eq!(w.dim(), self.dim(), "state and noise dimensions differ");
        let keep = 1.0 - self.lambda;
        StateVector::new_unchecked(
            w.as_slice()
                .iter()
                .zip(&self.bias)
                .map(|(x, b)| keep * x + self.lambda * b)
                .collect(),
        )
    }

    /// `Û = Mᵀ U M`.
    pub fn apply_to_joint(&self, u: &JointMatrix) -> JointMatrix {
        assert_eq!(u.dim(), self.dim(), "joint and noise dimensions differ");
        JointMatrix::new_unchecked(u.matrix().congruence(&self.matrix()))
    }

    /// `det M = (1 − λ)^(d − 1)`.
    pub fn determinant(&self) -> f64 {
        noise_determinant(self.lambda, self.dim())
    }
}

pub fn noise_determinant(lambda: f64, dim: usize) -> f64 {
    (1.0 - lambda).powi(dim as i32 - 1)
}

/// Recovers `(λ, b)` from a 2×2 row-stochastic noise matrix.
///
/// Any invertible binary noise with `M[1][1] > M[0][1]` is in the family.
/// At `λ = 0` the bias is unidentifiable and is reported as `[0.5, 0.5]`.
pub fn decompose_binary(m: &Matrix) -> Result<NoiseModel> {
    if m.dim() != 2 {
        return Err(CalibrationError::DimensionMismatch {
            expected: 2,
            actual: m.dim(),
        });
    }
    for (s, row) in m.rows().enumerate() {
        let sum: f64 = row.iter().sum();
        if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) || (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(invalid(format!("noise row {s} is not a probability vector")));
        }
    }
    if m[(1, 1)] <= m[(0, 1)] || m.determinant() == 0.0 {
        return Err(CalibrationError::NotInFamily);
    }
    let lambda = 1.0 - m[(1, 1)] + m[(0, 1)];
    if lambda <= 0.0 {
        return Ok(NoiseModel::none(2));
    }
    let accept = m[(0, 1)] / lambda;
    NoiseModel::new(lambda, vec![1.0 - accept, accept])
}
