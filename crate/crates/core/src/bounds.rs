//! Closed-form upper bounds on the probability that the empirical score
//! ranks the worse of two papers higher (ties counted as one half).
//!
//! Bounds are returned unclipped; a value above one is vacuous.

use crate::error::{CalibrationError, Result};
use crate::model::{JointMatrix, ScoreMap, StateVector};
use crate::noise::NoiseModel;

/// A pair of papers with known clean states, ordered so that paper B is
/// strictly better than paper A.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInput {
    clean_states: (StateVector, StateVector),
    noises: (NoiseModel, NoiseModel),
    reviewer_counts: (u64, u64),
    score_map: ScoreMap,
    joint: Option<JointMatrix>,
}

impl BoundInput {
    pub fn new(
        clean_states: (StateVector, StateVector),
        noises: (NoiseModel, NoiseModel),
        reviewer_counts: (u64, u64),
        score_map: ScoreMap,
    ) -> Result<Self> {
        let d = score_map.dim();
        for dim in [
            clean_states.0.dim(),
            clean_states.1.dim(),
            noises.0.dim(),
            noises.1.dim(),
        ] {
            if dim != d {
                return Err(CalibrationError::DimensionMismatch {
                    expected: d,
                    actual: dim,
                });
            }
        }
        if reviewer_counts.0 == 0 || reviewer_counts.1 == 0 {
            return Err(CalibrationError::Invalid("reviewer counts must be positive".into()));
        }
        let a = score_map.expectation(clean_states.0.as_slice());
        let b = score_map.expectation(clean_states.1.as_slice());
        if !(a < b) {
            return Err(CalibrationError::UnorderedPair { a, b });
        }
        Ok(Self {
            clean_states,
            noises,
            reviewer_counts,
            score_map,
            joint: None,
        })
    }

    /// Binary papers described by their clean accept probabilities, scored 0 / 1.
    pub fn binary(
        accept: (f64, f64),
        noises: (NoiseModel, NoiseModel),
        reviewer_counts: (u64, u64),
    ) -> Result<Self> {
        Self::new(
            (StateVector::binary(accept.0)?, StateVector::binary(accept.1)?),
            noises,
            reviewer_counts,
            ScoreMap::binary(),
        )
    }

    /// Attaches the clean prior joint matrix needed by [`lemma_ideal_bound`].
    pub fn with_joint(mut self, joint: JointMatrix) -> Result<Self> {
        if joint.dim() != self.score_map.dim() {
            return Err(CalibrationError::DimensionMismatch {
                expected: self.score_map.dim(),
                actual: joint.dim(),
            });
        }
        self.joint = Some(joint);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.score_map.dim()
    }

    pub fn clean_states(&self) -> &(StateVector, StateVector) {
        &self.clean_states
    }

    pub fn noises(&self) -> &(NoiseModel, NoiseModel) {
        &self.noises
    }

    pub fn reviewer_counts(&self) -> (u64, u64) {
        self.reviewer_counts
    }

    pub fn score_map(&self) -> &ScoreMap {
        &self.score_map
    }

    pub fn joint(&self) -> Option<&JointMatrix> {
        self.joint.as_ref()
    }

    fn noisy_states(&self) -> (StateVector, StateVector) {
        (
            self.noises.0.apply_to_state(&self.clean_states.0),
            self.noises.1.apply_to_state(&self.clean_states.1),
        )
    }

    fn quality_gap(&self) -> f64 {
        self.score_map.expectation(self.clean_states.1.as_slice())
            - self.score_map.expectation(self.clean_states.0.as_slice())
    }

    /// `1/(n_A (1−λ_A)²) + 1/(n_B (1−λ_B)²)`.
    fn effective_variance(&self) -> f64 {
        let term = |n: u64, lambda: f64| 1.0 / (n as f64 * (1.0 - lambda).powi(2));
        term(self.reviewer_counts.0, self.noises.0.lambda())
            + term(self.reviewer_counts.1, self.noises.1.lambda())
    }

    /// The concentration term shared by both theorems, with the exponent
    /// multiplied by `exponent_scale`.
    fn concentration_term(&self, exponent_scale: f64) -> f64 {
        let gap = self.quality_gap();
        let range = self.score_map.range();
        (-2.0 * gap * gap * exponent_scale / (range * range * self.effective_variance())).exp()
    }
}

/// Binary bound: unanimous-vote terms plus the concentration term.
pub fn binary_error_bound(input: &BoundInput) -> Result<f64> {
    if input.dim() != 2 {
        return Err(CalibrationError::DimensionMismatch {
            expected: 2,
            actual: input.dim(),
        });
    }
    let (wa, wb) = input.noisy_states();
    let (a1, b1) = (wa.as_slice()[1], wb.as_slice()[1]);
    let (na, nb) = input.reviewer_counts;
    let (na, nb) = (na as f64, nb as f64);
    let a_all_accept = a1.powf(na);
    let b_all_reject = (1.0 - b1).powf(nb);
    let both_unanimous_tie = a_all_accept * b1.powf(nb) + (1.0 - a1).powf(na) * b_all_reject;

    let gap = input.clean_states.1.as_slice()[1] - input.clean_states.0.as_slice()[1];
    let exp_term = (-2.0 * gap * gap / input.effective_variance()).exp();
    Ok(a_all_accept + b_all_reject - 0.5 * both_unanimous_tie + exp_term)
}

/// General bound: missing-signal terms plus the concentration term.
pub fn general_error_bound(input: &BoundInput) -> f64 {
    let (wa, wb) = input.noisy_states();
    let (na, nb) = input.reviewer_counts;
    let missing = |w: &StateVector, n: u64| -> f64 {
        w.as_slice().iter().map(|x| (1.0 - x).powf(n as f64)).sum()
    };
    missing(&wa, na) + missing(&wb, nb) + input.concentration_term(1.0)
}

/// Concentration term when the noisy prediction matrices are known exactly;
/// the exponent carries an extra `det(U)^(−1/(d−1))`.
pub fn lemma_ideal_bound(input: &BoundInput) -> Result<f64> {
    let joint = input
        .joint
        .as_ref()
        .ok_or_else(|| CalibrationError::Invalid("the known-prediction bound needs a joint matrix".into()))?;
    let det = joint.determinant();
    if !(det > 0.0) {
        return Err(CalibrationError::NonPositiveDeterminant { det });
    }
    let factor = det.powf(-1.0 / (input.dim() as f64 - 1.0));
    Ok(input.concentration_term(factor))
}

/// The concentration term alone (the last summand of [`general_error_bound`]).
pub fn concentration_term(input: &BoundInput) -> f64 {
    input.concentration_term(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn clean(lambda: f64) -> NoiseModel {
        NoiseModel::new(lambda, vec![0.5, 0.5]).unwrap()
    }

    fn worked_input() -> BoundInput {
        BoundInput::binary((0.2, 0.8), (clean(0.0), clean(0.0)), (5, 5)).unwrap()
    }

    #[test]
    fn worked_binary_value() {
        // term by term: 0.2^5 + 0.2^5 − ½·2·(0.2^5 · 0.8^5) + e^{−1.8}
        let expected = 2.0 * 0.00032 - 0.00032 * 0.32768 + (-1.8_f64).exp();
        let got = binary_error_bound(&worked_input()).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.16584).abs() < 1e-5);
    }

    #[test]
    fn bound_vanishes_with_many_reviewers() {
        let input = BoundInput::binary((0.2, 0.8), (clean(0.0), clean(0.0)), (1_000_000, 1_000_000)).unwrap();
        assert!(binary_error_bound(&input).unwrap() < 1e-300);
    }

    #[test]
    fn bound_is_vacuous_near_total_noise() {
        let lambda = 1.0 - 1e-9;
        let input = BoundInput::binary((0.2, 0.8), (clean(lambda), clean(lambda)), (5, 5)).unwrap();
        assert!(binary_error_bound(&input).unwrap() >= 1.0);
    }

    #[test]
    fn general_exp_term_matches_binary_on_two_signals() {
        let input = BoundInput::binary((0.3, 0.6), (clean(0.2), clean(0.4)), (4, 7)).unwrap();
        let gap: f64 = 0.3;
        let variance = 1.0 / (4.0 * 0.8_f64.powi(2)) + 1.0 / (7.0 * 0.6_f64.powi(2));
        assert!((concentration_term(&input) - (-2.0 * gap * gap / variance).exp()).abs() < 1e-15);
    }

    #[test]
    fn unordered_pair_is_rejected() {
        let uniform = StateVector::uniform(3);
        let r = BoundInput::new(
            (uniform.clone(), uniform),
            (NoiseModel::none(3), NoiseModel::none(3)),
            (3, 3),
            ScoreMap::indices(3),
        );
        assert!(matches!(r, Err(CalibrationError::UnorderedPair { .. })));
        assert!(BoundInput::binary((0.8, 0.2), (clean(0.0), clean(0.0)), (5, 5)).is_err());
    }

    #[test]
    fn single_reviewer_general_bound_is_vacuous() {
        let input = BoundInput::new(
            (
                StateVector::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap(),
                StateVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
            ),
            (NoiseModel::none(4), NoiseModel::none(4)),
            (1, 1),
            ScoreMap::indices(4),
        )
        .unwrap();
        let concentration = concentration_term(&input);
        assert!((general_error_bound(&input) - (6.0 + concentration)).abs() < 1e-12);
        assert!(general_error_bound(&input) > 1.0);
    }

    #[test]
    fn lemma_bound_scales_exponent_by_inverse_determinant() {
        let u = JointMatrix::new(Matrix::from_rows(&[[0.31, 0.19], [0.19, 0.31]]).unwrap()).unwrap();
        let input = worked_input().with_joint(u).unwrap();
        let theorem = concentration_term(&input);
        let lemma = lemma_ideal_bound(&input).unwrap();
        assert!((lemma.ln() / theorem.ln() - 1.0 / 0.06).abs() < 1e-9);
        assert!(lemma <= theorem);
    }

    #[test]
    fn lemma_bound_needs_joint() {
        assert!(lemma_ideal_bound(&worked_input()).is_err());
    }
}
