//! The signal-prediction model.
//!
//! A paper has a *state* `w`: the distribution of the signal a random
//! reviewer emits for it. Papers are drawn from a prior over states, which
//! induces the joint matrix `U[s][t] = Pr[X_i = s, X_j = t]` for two
//! reviewers of the same paper, its marginal `q`, and the row-stochastic
//! prediction matrix `P[s][t] = U[s][t] / q[s]`: a Bayesian reviewer who saw
//! `s` predicts a peer's signal with row `P[s]`.
//!
//! Signals are referred to by index into a [`SignalSet`].

use rand::Rng;
use rand_distr::Beta;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CalibrationError, Result};
use crate::linalg::Matrix;
use crate::noise::NoiseModel;

/// Tolerance on probability vectors and distributions built by the library.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;
/// Tolerance on reviewer-reported prediction vectors and averaged rows.
pub const PREDICTION_TOLERANCE: f64 = 1e-9;
/// Largest Bayes-symmetry residual accepted by strict prior reconstruction.
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

fn check_probability_vector(v: &[f64], tol: f64, what: &str) -> Result<()> {
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
        return Err(invalid(format!("{what}: entry {i} = {x} is not a probability")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(invalid(format!("{what}: entries sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Numeric score attached to each signal, indexed like the signal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ScoreMap(Vec<f64>);

impl ScoreMap {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(invalid("a score map needs at least two signals"));
        }
        if scores.iter().any(|x| !x.is_finite()) {
            return Err(invalid("scores must be finite"));
        }
        for i in 0..scores.len() {
            for j in (i + 1)..scores.len() {
                if scores[i] == scores[j] {
                    return Err(invalid(format!(
                        "score map is not injective: signals {i} and {j} both score {}",
                        scores[i]
                    )));
                }
            }
        }
        Ok(Self(scores))
    }

    /// `φ(s) = s` for signals `0..d`.
    pub fn indices(dim: usize) -> Self {
        Self((0..dim).map(|s| s as f64).collect())
    }

    /// The binary map `reject → 0`, `accept → 1`.
    pub fn binary() -> Self {
        Self(vec![0.0, 1.0])
    }

    /// The binary map `reject → -1`, `accept → +1` used by the SP-inspired score.
    pub fn binary_signed() -> Self {
        Self(vec![-1.0, 1.0])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `E_v φ = Σ_s φ(s) v_s`.
    pub fn expectation(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(p, x)| p * x).sum()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }
}

impl TryFrom<Vec<f64>> for ScoreMap {
    type Error = CalibrationError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ScoreMap> for Vec<f64> {
    fn from(m: ScoreMap) -> Self {
        m.0
    }
}

/// Ordered signal alphabet with its score map.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    labels: Vec<String>,
    scores: ScoreMap,
}

impl SignalSet {
    pub fn new(labels: Vec<String>, scores: ScoreMap) -> Result<Self> {
        if labels.len() != scores.dim() {
            return Err(CalibrationError::DimensionMismatch {
                expected: labels.len(),
                actual: scores.dim(),
            });
        }
        for i in 0..labels.len() {
            if labels[i + 1..].contains(&labels[i]) {
                return Err(invalid(format!("duplicate signal label {:?}", labels[i])));
            }
        }
        Ok(Self { labels, scores })
    }

    /// `reject` / `accept` scored 0 / 1.
    pub fn binary() -> Self {
        Self {
            labels: vec!["reject".into(), "accept".into()],
            scores: ScoreMap::binary(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, signal: usize) -> &str {
        &self.labels[signal]
    }

    pub fn scores(&self) -> &ScoreMap {
        &self.scores
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Distribution of a single reviewer's signal for one paper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(invalid("a state needs at least two signals"));
        }
        check_probability_vector(&w, PROBABILITY_TOLERANCE, "state")?;
        Ok(Self(w))
    }

    pub(crate) fn new_unchecked(w: Vec<f64>) -> Self {
        Self(w)
    }

    /// Binary state with `Pr[accept] = accept`.
    pub fn binary(accept: f64) -> Result<Self> {
        Self::new(vec![1.0 - accept, accept])
    }

    pub fn uniform(dim: usize) -> Self {
        Self(vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Draws a signal index.
    pub fn sample_signal<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (s, p) in self.0.iter().enumerate() {
            acc += p;
            if u < acc {
                return s;
            }
        }
        // u landed in the rounding slack past the last cumulative sum
        self.0.iter().rposition(|&p| p > 0.0).unwrap_or(self.0.len() - 1)
    }
}

impl TryFrom<Vec<f64>> for StateVector {
    type Error = CalibrationError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StateVector> for Vec<f64> {
    fn from(s: StateVector) -> Self {
        s.0
    }
}

/// Finite prior over states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscretePriorRepr", into = "DiscretePriorRepr")]
pub struct DiscretePrior {
    states: Vec<StateVector>,
    probabilities: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DiscretePriorRepr {
    states: Vec<StateVector>,
    probabilities: Vec<f64>,
}

impl TryFrom<DiscretePriorRepr> for DiscretePrior {
    type Error = CalibrationError;

    fn try_from(r: DiscretePriorRepr) -> Result<Self> {
        Self::new(r.states.into_iter().zip(r.probabilities).collect())
    }
}

impl From<DiscretePrior> for DiscretePriorRepr {
    fn from(p: DiscretePrior) -> Self {
        Self {
            states: p.states,
            probabilities: p.probabilities,
        }
    }
}

impl DiscretePrior {
    pub fn new(states: Vec<(StateVector, f64)>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(invalid("a prior needs at least one state"));
        };
        let dim = first.0.dim();
        if let Some((bad, _)) = states.iter().find(|(w, _)| w.dim() != dim) {
            return Err(CalibrationError::DimensionMismatch {
                expected: dim,
                actual: bad.dim(),
            });
        }
        let (states, probabilities): (Vec<_>, Vec<_>) = states.into_iter().unzip();
        check_probability_vector(&probabilities, PROBABILITY_TOLERANCE, "prior probabilities")?;
        Ok(Self {
            states,
            probabilities,
        })
    }

    /// Equally weighted states.
    pub fn uniform(states: Vec<StateVector>) -> Result<Self> {
        let p = 1.0 / states.len() as f64;
        Self::new(states.into_iter().map(|w| (w, p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> impl Iterator<Item = (&StateVector, f64)> {
        self.states.iter().zip(self.probabilities.iter().copied())
    }

    /// `U = Wᵀ diag(q_state) W`.
    pub fn joint_matrix(&self) -> JointMatrix {
        let d = self.dim();
        let mut u = Matrix::zeros(d);
        for (w, p) in self.states() {
            let w = w.as_slice();
            for s in 0..d {
                for t in 0..d {
                    u[(s, t)] += p * w[s] * w[t];
                }
            }
        }
        JointMatrix(u)
    }

    pub fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> &StateVector {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (w, p) in self.states() {
            acc += p;
            if u < acc {
                return w;
            }
        }
        self.states.last().expect("non-empty prior")
    }
}

/// Beta prior on `Pr[accept]` for binary signals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BetaPriorRepr")]
pub struct BetaPrior {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct BetaPriorRepr {
    alpha: f64,
    beta: f64,
}

impl TryFrom<BetaPriorRepr> for BetaPrior {
    type Error = CalibrationError;

    fn try_from(r: BetaPriorRepr) -> Result<Self> {
        Self::new(r.alpha, r.beta)
    }
}

impl BetaPrior {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(invalid(format!("Beta({alpha}, {beta}) needs positive finite parameters")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(E[w], E[w²])` for `w ~ Beta(α, β)`.
    pub fn moments(&self) -> (f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        let m1 = a / (a + b);
        let m2 = a * (a + 1.0) / ((a + b) * (a + b + 1.0));
        (m1, m2)
    }

    pub fn joint_matrix(&self) -> JointMatrix {
        let (m1, m2) = self.moments();
        let off = m1 - m2;
        JointMatrix(Matrix::from_fn(2, |s, t| match (s, t) {
            (0, 0) => 1.0 - 2.0 * m1 + m2,
            (1, 1) => m2,
            _ => off,
        }))
    }

    pub fn distribution(&self) -> Beta<f64> {
        Beta::new(self.alpha, self.beta).expect("validated parameters")
    }
}

/// Either prior family accepted by the experiment harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    Beta(BetaPrior),
    Discrete(DiscretePrior),
}

impl Prior {
    pub fn dim(&self) -> usize {
        match self {
            Prior::Beta(_) => 2,
            Prior::Discrete(p) => p.dim(),
        }
    }

    pub fn joint_matrix(&self) -> JointMatrix {
        match self {
            Prior::Beta(b) => b.joint_matrix(),
            Prior::Discrete(p) => p.joint_matrix(),
        }
    }
}

/// Symmetric joint distribution of two reviewers' signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct JointMatrix(Matrix);

impl JointMatrix {
    pub fn new(u: Matrix) -> Result<Self> {
        if u.dim() < 2 {
            return Err(invalid("joint matrix must be at least 2x2"));
        }
        check_probability_vector(u.as_slice(), PREDICTION_TOLERANCE, "joint matrix")?;
        let r = u.symmetry_residual();
        if r > PREDICTION_TOLERANCE {
            return Err(invalid(format!("joint matrix is not symmetric (residual {r:e})")));
        }
        Ok(Self(u))
    }

    pub(crate) fn new_unchecked(u: Matrix) -> Self {
        Self(u)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Signal prior `q`: the row sums.
    pub fn marginal(&self) -> StateVector {
        StateVector(self.0.row_sums())
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.0.symmetric_eigenvalues().first().is_some_and(|&e| e >= -tol)
    }

    /// `P[s][t] = U[s][t] / q[s]`.
    pub fn prediction_matrix(&self) -> Result<PredictionMatrix> {
        let q = self.0.row_sums();
        if let Some(signal) = q.iter().position(|&x| x <= 0.0) {
            return Err(CalibrationError::ZeroMarginal { signal });
        }
        Ok(PredictionMatrix(Matrix::from_fn(self.dim(), |s, t| {
            self.0[(s, t)] / q[s]
        })))
    }
}

impl TryFrom<Matrix> for JointMatrix {
    type Error = CalibrationError;

    fn try_from(m: Matrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<JointMatrix> for Matrix {
    fn from(j: JointMatrix) -> Self {
        j.0
    }
}

/// Row-stochastic matrix of Bayesian peer predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct PredictionMatrix(Matrix);

/// Prior recovered from a prediction matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorReconstruction {
    pub q: StateVector,
    /// `max |q_s P[s][t] − q_t P[t][s]|`; zero for a Bayes-consistent matrix.
    pub symmetry_residual: f64,
}

impl PredictionMatrix {
    pub fn new(p: Matrix) -> Result<Self> {
        if p.dim() < 2 {
            return Err(invalid("prediction matrix must be at least 2x2"));
        }
        for (s, row) in p.rows().enumerate() {
            check_probability_vector(row, PREDICTION_TOLERANCE, &format!("prediction row {s}"))?;
        }
        Ok(Self(p))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn row(&self, s: usize) -> &[f64] {
        self.0.row(s)
    }

    /// Recovers `q_s = (Σ_t P[s][t] / P[t][s])⁻¹` with `0/0 ≡ 0`, renormalised
    /// to sum to one. A ratio `x/0` with `x > 0` is infinite and sends `q_s`
    /// to zero. Returns `None` when every entry vanishes.
    ///
    /// No consistency check is made; see [`Self::reconstruct_prior`].
    pub fn lenient_marginal(&self) -> Option<Vec<f64>> {
        let d = self.dim();
        let p = &self.0;
        let mut q: Vec<f64> = (0..d)
            .map(|s| {
                let total: f64 = (0..d)
                    .map(|t| {
                        let (num, den) = (p[(s, t)], p[(t, s)]);
                        if num == 0.0 {
                            0.0
                        } else {
                            num / den
                        }
                    })
                    .sum();
                if total > 0.0 {
                    1.0 / total
                } else {
                    0.0
                }
            })
            .collect();
        let sum: f64 = q.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return None;
        }
        q.iter_mut().for_each(|x| *x /= sum);
        Some(q)
    }

    pub fn symmetry_residual(&self, q: &[f64]) -> f64 {
        let d = self.dim();
        let mut r = 0.0_f64;
        for s in 0..d {
            for t in (s + 1)..d {
                r = r.max((q[s] * self.0[(s, t)] - q[t] * self.0[(t, s)]).abs());
            }
        }
        r
    }

    /// Reconstructs the signal prior and rejects matrices that no prior
    /// could have produced.
    pub fn reconstruct_prior(&self) -> Result<PriorReconstruction> {
        let q = self
            .lenient_marginal()
            .ok_or(CalibrationError::InconsistentPrediction {
                residual: f64::INFINITY,
            })?;
        let residual = self.symmetry_residual(&q);
        if residual > SYMMETRY_TOLERANCE {
            return Err(CalibrationError::InconsistentPrediction { residual });
        }
        Ok(PriorReconstruction {
            q: StateVector(q),
            symmetry_residual: residual,
        })
    }

    pub fn marginal(&self) -> Result<StateVector> {
        self.reconstruct_prior().map(|r| r.q)
    }

    /// `U[s][t] = q_s P[s][t]` with `q` from [`Self::marginal`].
    pub fn joint_matrix(&self) -> Result<JointMatrix> {
        let q = self.marginal()?;
        Ok(JointMatrix(scale_rows(&self.0, q.as_slice())))
    }
}

impl TryFrom<Matrix> for PredictionMatrix {
    type Error = CalibrationError;

    fn try_from(m: Matrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<PredictionMatrix> for Matrix {
    fn from(p: PredictionMatrix) -> Self {
        p.0
    }
}

pub(crate) fn scale_rows(m: &Matrix, by: &[f64]) -> Matrix {
    Matrix::from_fn(m.dim(), |s, t| by[s] * m[(s, t)])
}

/// Noisy prior `q̂`, joint `Û` and predictions `P̂` of a binary Beta model.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyModel {
    pub prior: StateVector,
    pub joint: JointMatrix,
    pub prediction: PredictionMatrix,
}

impl NoisyModel {
    /// Pushes a clean joint matrix through `noise`.
    pub fn from_clean_joint(joint: &JointMatrix, noise: &NoiseModel) -> Result<Self> {
        let noisy = noise.apply_to_joint(joint);
        let prediction = noisy.prediction_matrix()?;
        Ok(Self {
            prior: noisy.marginal(),
            joint: noisy,
            prediction,
        })
    }
}

/// Closed-form noisy model for a Beta prior on `Pr[accept]`.
pub fn beta_noisy_model(prior: &BetaPrior, noise: &NoiseModel) -> Result<NoisyModel> {
    if noise.dim() != 2 {
        return Err(CalibrationError::DimensionMismatch {
            expected: 2,
            actual: noise.dim(),
        });
    }
    NoisyModel::from_clean_joint(&prior.joint_matrix(), noise)
}

/// Empirical signal frequencies `v_s = #{i : x_i = s} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector(Vec<f64>);

impl FrequencyVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, s: usize) -> f64 {
        self.0[s]
    }
}

/// Reported ratings and peer predictions of one paper's reviewers.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewBundle {
    dim: usize,
    ratings: Vec<usize>,
    // row-major n × dim
    predictions: Vec<f64>,
}

impl ReviewBundle {
    pub fn new(dim: usize, ratings: Vec<usize>, predictions: Vec<Vec<f64>>) -> Result<Self> {
        if ratings.len() != predictions.len() {
            return Err(invalid(format!(
                "{} ratings but {} prediction vectors",
                ratings.len(),
                predictions.len()
            )));
        }
        for (i, p) in predictions.iter().enumerate() {
            if p.len() != dim {
                return Err(invalid(format!(
                    "prediction {i} has {} entries, expected {dim}",
                    p.len()
                )));
            }
        }
        Self::from_flat(dim, ratings, predictions.concat())
    }

    pub fn from_flat(dim: usize, ratings: Vec<usize>, predictions: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(invalid("bundles need at least two signals"));
        }
        if ratings.is_empty() {
            return Err(invalid("a bundle needs at least one reviewer"));
        }
        if predictions.len() != ratings.len() * dim {
            return Err(invalid("prediction buffer does not match ratings"));
        }
        if let Some((i, r)) = ratings.iter().enumerate().find(|(_, &r)| r >= dim) {
            return Err(invalid(format!("rating {i} = {r} is not a signal index below {dim}")));
        }
        for (i, p) in predictions.chunks_exact(dim).enumerate() {
            check_probability_vector(p, PREDICTION_TOLERANCE, &format!("prediction {i}"))?;
        }
        Ok(Self {
            dim,
            ratings,
            predictions,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn ratings(&self) -> &[usize] {
        &self.ratings
    }

    pub fn prediction(&self, reviewer: usize) -> &[f64] {
        &self.predictions[reviewer * self.dim..(reviewer + 1) * self.dim]
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        for &r in &self.ratings {
            c[r] += 1;
        }
        c
    }

    pub fn frequencies(&self) -> FrequencyVector {
        let n = self.len() as f64;
        FrequencyVector(self.counts().into_iter().map(|c| c as f64 / n).collect())
    }

    /// Row `s` is the mean prediction of the reviewers who reported `s`.
    ///
    /// The mean is accumulated as offsets from the group's first vector, so a
    /// group of identical predictions reproduces that vector bit-for-bit.
    pub fn prediction_matrix(&self) -> Result<PredictionMatrix> {
        let d = self.dim;
        let mut first: Vec<Option<usize>> = vec![None; d];
        let mut count = vec![0usize; d];
        let mut offset = Matrix::zeros(d);
        for (i, &s) in self.ratings.iter().enumerate() {
            count[s] += 1;
            match first[s] {
                None => first[s] = Some(i),
                Some(f) => {
                    let (base, p) = (self.prediction(f), self.prediction(i));
                    for t in 0..d {
                        offset[(s, t)] += p[t] - base[t];
                    }
                }
            }
        }
        if let Some(signal) = first.iter().position(Option::is_none) {
            return Err(CalibrationError::MissingSignal { signal });
        }
        let p = Matrix::from_fn(d, |s, t| {
            let base = self.prediction(first[s].unwrap())[t];
            base + offset[(s, t)] / count[s] as f64
        });
        Ok(PredictionMatrix(p))
    }
}

/// Draws `n` reviewers of a paper with noisy state `state`; every reviewer's
/// prediction is the row of `prediction` for the signal they report.
pub fn sample_reviews<R: Rng + ?Sized>(
    state: &StateVector,
    prediction: &PredictionMatrix,
    n: usize,
    rng: &mut R,
) -> Result<ReviewBundle> {
    let d = state.dim();
    if prediction.dim() != d {
        return Err(CalibrationError::DimensionMismatch {
            expected: d,
            actual: prediction.dim(),
        });
    }
    if n == 0 {
        return Err(invalid("a bundle needs at least one reviewer"));
    }
    let mut ratings = Vec::with_capacity(n);
    let mut predictions = Vec::with_capacity(n * d);
    for _ in 0..n {
        let s = state.sample_signal(rng);
        ratings.push(s);
        predictions.extend_from_slice(prediction.row(s));
    }
    Ok(ReviewBundle {
        dim: d,
        ratings,
        predictions,
    })
}
