//! Prior-free calibration of noisy ratings from reviewers' peer predictions.
//!
//! Reviewers report a rating and a prediction of a random peer's rating.
//! The predictions reveal the (noisy) prior, and the surprisal-based score
//! compares a paper's ratings against that prior, normalised by the
//! correlation between reviewers, so that rankings survive paper-specific
//! noise of the form `(1 − λ)I + λB`.
//!
//! Modules:
//! - [`model`]: states, priors, joint and prediction matrices, review bundles
//! - [`noise`]: the noise family and its action on states and joints
//! - [`scoring`]: ideal and empirical scores, baselines, pairwise comparison
//! - [`bounds`]: closed-form error-probability bounds
//! - [`montecarlo`]: pairwise accuracy experiments and bound validation
//! - [`cli`]: the `surprisal` command-line front end

pub mod bounds;
pub mod bundle_io;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod noise;
pub mod scoring;
pub mod svg;

pub use error::{CalibrationError, Result};
pub use linalg::Matrix;
pub use model::{
    beta_noisy_model, sample_reviews, BetaPrior, DiscretePrior, FrequencyVector, JointMatrix,
    NoisyModel, PredictionMatrix, Prior, ReviewBundle, ScoreMap, SignalSet, StateVector,
};
pub use noise::{decompose_binary, noise_determinant, NoiseModel};
pub use scoring::{
    baseline_score, compare, empirical_score_binary, empirical_score_general,
    invariant_surprisal_vector, quadratic_surprisal, sp_inspired_score, surprisal_score,
    CalibratedScore, RankOutcome,
};
