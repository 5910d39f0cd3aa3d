//! Score functions and the pairwise comparison rule.
//!
//! The central quantity is the surprisal-based score
//!
//! ```text
//! S(w, U) = (E_w φ − E_q φ) · det(U)^(−1 / (2(d − 1)))
//! ```
//!
//! which is unchanged when `(w, U)` is pushed through any noise in the
//! `(1 − λ)I + λB` family. The empirical variants estimate it from one
//! paper's ratings and peer predictions.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{CalibrationError, Result};
use crate::linalg::{dot, Matrix};
use crate::model::{scale_rows, JointMatrix, ReviewBundle, ScoreMap, StateVector};

/// A calibrated score. `Undefined` is incomparable and forces the baseline
/// fallback in [`compare`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CalibratedScore {
    NegInf,
    Finite(f64),
    PosInf,
    Undefined,
}

impl CalibratedScore {
    pub fn is_defined(&self) -> bool {
        !matches!(self, CalibratedScore::Undefined)
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            CalibratedScore::NegInf => Some(f64::NEG_INFINITY),
            CalibratedScore::Finite(x) => Some(x),
            CalibratedScore::PosInf => Some(f64::INFINITY),
            CalibratedScore::Undefined => None,
        }
    }

    /// Total order for sorting many papers: `Undefined` sorts below
    /// everything else. Pairwise decisions should use [`compare`].
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self.value(), other.value()) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
        }
    }
}

impl PartialOrd for CalibratedScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value()?.partial_cmp(&other.value()?)
    }
}

impl fmt::Display for CalibratedScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalibratedScore::NegInf => f.write_str("-inf"),
            CalibratedScore::Finite(x) => write!(f, "{x}"),
            CalibratedScore::PosInf => f.write_str("+inf"),
            CalibratedScore::Undefined => f.write_str("undefined"),
        }
    }
}

/// Why an empirical score came out `Undefined`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UndefinedCause {
    MissingSignal { signal: usize },
    /// Binary predictions with `P̂[1][1] ≤ P̂[0][1]`.
    SanityGate,
    NonPositiveDeterminant { det: f64 },
    ZeroPrior { signal: usize },
    DegeneratePrior,
}

impl fmt::Display for UndefinedCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UndefinedCause::MissingSignal { signal } => {
                write!(f, "no reviewer reported signal {signal}")
            }
            UndefinedCause::SanityGate => f.write_str(
                "sanity gate failed: accepting reviewers predict fewer accepts than rejecting ones",
            ),
            UndefinedCause::NonPositiveDeterminant { det } => {
                write!(f, "reconstructed joint matrix has determinant {det:e} <= 0")
            }
            UndefinedCause::ZeroPrior { signal } => {
                write!(f, "reconstructed prior of reported signal {signal} is zero")
            }
            UndefinedCause::DegeneratePrior => f.write_str("prior cannot be reconstructed"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub score: CalibratedScore,
    pub cause: Option<UndefinedCause>,
}

impl ScoreReport {
    fn defined(score: CalibratedScore) -> Self {
        Self { score, cause: None }
    }

    fn undefined(cause: UndefinedCause) -> Self {
        Self {
            score: CalibratedScore::Undefined,
            cause: Some(cause),
        }
    }
}

/// Outcome of ranking paper A against paper B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankOutcome {
    FirstHigher,
    SecondHigher,
    Tie,
}

impl RankOutcome {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => RankOutcome::FirstHigher,
            Ordering::Less => RankOutcome::SecondHigher,
            Ordering::Equal => RankOutcome::Tie,
        }
    }

    /// Breaks a tie with a fair coin from `rng`.
    pub fn resolve<R: Rng + ?Sized>(self, rng: &mut R) -> Self {
        match self {
            RankOutcome::Tie if rng.random_bool(0.5) => RankOutcome::FirstHigher,
            RankOutcome::Tie => RankOutcome::SecondHigher,
            other => other,
        }
    }
}

/// Ranks two papers. If either calibrated score is undefined, both papers
/// fall back to their baseline scores.
pub fn compare(a: CalibratedScore, b: CalibratedScore, baseline_a: f64, baseline_b: f64) -> RankOutcome {
    match a.partial_cmp(&b) {
        Some(o) => RankOutcome::from_ordering(o),
        None => RankOutcome::from_ordering(baseline_a.total_cmp(&baseline_b)),
    }
}

fn check_dims(w: &StateVector, u: &JointMatrix) -> Result<()> {
    if w.dim() != u.dim() {
        return Err(CalibrationError::DimensionMismatch {
            expected: u.dim(),
            actual: w.dim(),
        });
    }
    Ok(())
}

fn det_scale(det: f64, dim: usize) -> f64 {
    det.powf(-1.0 / (2.0 * (dim as f64 - 1.0)))
}

/// `det(U)^(−1/(2(d−1))) · (w − q)`.
pub fn invariant_surprisal_vector(w: &StateVector, u: &JointMatrix) -> Result<Vec<f64>> {
    check_dims(w, u)?;
    let det = u.determinant();
    if !(det > 0.0) {
        return Err(CalibrationError::NonPositiveDeterminant { det });
    }
    let scale = det_scale(det, u.dim());
    let q = u.marginal();
    Ok(w.as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(ws, qs)| scale * (ws - qs))
        .collect())
}

/// `(E_w φ − E_q φ) · det(U)^(−1/(2(d−1)))`.
pub fn surprisal_score(w: &StateVector, u: &JointMatrix, phi: &ScoreMap) -> Result<f64> {
    if phi.dim() != u.dim() {
        return Err(CalibrationError::DimensionMismatch {
            expected: u.dim(),
            actual: phi.dim(),
        });
    }
    let v = invariant_surprisal_vector(w, u)?;
    Ok(phi.expectation(&v))
}

/// `(w − q) U⁻¹ (w − q)ᵀ`, invariant under every invertible noise.
pub fn quadratic_surprisal(w: &StateVector, u: &JointMatrix) -> Result<f64> {
    check_dims(w, u)?;
    let q = u.marginal();
    let diff: Vec<f64> = w.as_slice().iter().zip(q.as_slice()).map(|(a, b)| a - b).collect();
    let x = u.matrix().solve(&diff)?;
    Ok(dot(&diff, &x))
}

/// Mean rating `E_v̂ φ`.
pub fn baseline_score(bundle: &ReviewBundle, phi: &ScoreMap) -> f64 {
    phi.expectation(bundle.frequencies().as_slice())
}

/// Binary empirical score with a reason when it is undefined.
///
/// Signal 1 is "accept". Unanimous bundles score `±∞`.
pub fn explain_binary(bundle: &ReviewBundle) -> Result<ScoreReport> {
    if bundle.dim() != 2 {
        return Err(CalibrationError::DimensionMismatch {
            expected: 2,
            actual: bundle.dim(),
        });
    }
    let counts = bundle.counts();
    if counts[0] == 0 {
        return Ok(ScoreReport::defined(CalibratedScore::PosInf));
    }
    if counts[1] == 0 {
        return Ok(ScoreReport::defined(CalibratedScore::NegInf));
    }
    let accept = counts[1] as f64 / bundle.len() as f64;
    let p = bundle.prediction_matrix()?;
    let p = p.matrix();
    let (p01, p10, p11) = (p[(0, 1)], p[(1, 0)], p[(1, 1)]);
    let gap = p11 - p01;
    if !(gap > 0.0) {
        return Ok(ScoreReport::undefined(UndefinedCause::SanityGate));
    }
    let (q0, q1) = if p01 + p10 > 0.0 {
        (p10 / (p01 + p10), p01 / (p01 + p10))
    } else {
        (0.5, 0.5)
    };
    let det = q0 * q1 * gap;
    if !(det > 0.0) {
        return Ok(ScoreReport::undefined(UndefinedCause::NonPositiveDeterminant { det }));
    }
    Ok(ScoreReport::defined(CalibratedScore::Finite((accept - q1) / det.sqrt())))
}

pub fn empirical_score_binary(bundle: &ReviewBundle) -> Result<CalibratedScore> {
    explain_binary(bundle).map(|r| r.score)
}

struct Reconstructed {
    freq: Vec<f64>,
    prediction: Matrix,
    prior: Vec<f64>,
}

fn reconstruct(bundle: &ReviewBundle) -> std::result::Result<Reconstructed, UndefinedCause> {
    let prediction = match bundle.prediction_matrix() {
        Ok(p) => p,
        Err(CalibrationError::MissingSignal { signal }) => {
            return Err(UndefinedCause::MissingSignal { signal })
        }
        Err(_) => return Err(UndefinedCause::DegeneratePrior),
    };
    let prior = prediction.lenient_marginal().ok_or(UndefinedCause::DegeneratePrior)?;
    Ok(Reconstructed {
        freq: bundle.frequencies().as_slice().to_vec(),
        prediction: prediction.matrix().clone(),
        prior,
    })
}

/// General empirical score with a reason when it is undefined.
pub fn explain_general(bundle: &ReviewBundle, phi: &ScoreMap) -> Result<ScoreReport> {
    let d = bundle.dim();
    if phi.dim() != d {
        return Err(CalibrationError::DimensionMismatch {
            expected: d,
            actual: phi.dim(),
        });
    }
    let r = match reconstruct(bundle) {
        Ok(r) => r,
        Err(cause) => return Ok(ScoreReport::undefined(cause)),
    };
    let joint = scale_rows(&r.prediction, &r.prior);
    let lu = joint.lu();
    let det = lu.determinant();
    if lu.is_singular() || !(det > 0.0) {
        return Ok(ScoreReport::undefined(UndefinedCause::NonPositiveDeterminant { det }));
    }
    let gap = phi.expectation(&r.freq) - phi.expectation(&r.prior);
    Ok(ScoreReport::defined(CalibratedScore::Finite(gap * det_scale(det, d))))
}

pub fn empirical_score_general(bundle: &ReviewBundle, phi: &ScoreMap) -> Result<CalibratedScore> {
    explain_general(bundle, phi).map(|r| r.score)
}

/// `Σ_s φ(s) v̂_s / q̂_s`.
pub fn explain_sp_inspired(bundle: &ReviewBundle, phi: &ScoreMap) -> Result<ScoreReport> {
    if phi.dim() != bundle.dim() {
        return Err(CalibrationError::DimensionMismatch {
            expected: bundle.dim(),
            actual: phi.dim(),
        });
    }
    let r = match reconstruct(bundle) {
        Ok(r) => r,
        Err(cause) => return Ok(ScoreReport::undefined(cause)),
    };
    let mut total = 0.0;
    for (s, (&v, &q)) in r.freq.iter().zip(&r.prior).enumerate() {
        if v == 0.0 {
            continue;
        }
        if q <= 0.0 {
            return Ok(ScoreReport::undefined(UndefinedCause::ZeroPrior { signal: s }));
        }
        total += phi.as_slice()[s] * v / q;
    }
    Ok(ScoreReport::defined(CalibratedScore::Finite(total)))
}

pub fn sp_inspired_score(bundle: &ReviewBundle, phi: &ScoreMap) -> Result<CalibratedScore> {
    explain_sp_inspired(bundle, phi).map(|r| r.score)
}
