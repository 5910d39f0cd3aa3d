//! JSON form of a review bundle:
//!
//! ```json
//! {"signals": ["reject", "accept"], "scores": [0, 1],
//!  "ratings": ["accept", "accept", "reject"],
//!  "predictions": [[0.69, 0.31], [0.69, 0.31], [0.77, 0.23]]}
//! ```
//!
//! Labels may be JSON strings or numbers; numbers are matched by their
//! textual form.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Result};
use crate::model::{ReviewBundle, ScoreMap, SignalSet, PREDICTION_TOLERANCE};
use crate::scoring::CalibratedScore;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(serde_json::Number),
}

impl Label {
    fn key(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub signals: Vec<Label>,
    pub scores: Vec<f64>,
    pub ratings: Vec<Label>,
    pub predictions: Vec<Vec<f64>>,
}

/// A validated bundle together with its signal alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBundle {
    pub signals: SignalSet,
    pub bundle: ReviewBundle,
}

impl BundleFile {
    pub fn validate(&self) -> Result<LabeledBundle> {
        let labels: Vec<String> = self.signals.iter().map(Label::key).collect();
        if labels.len() < 2 {
            return Err(invalid("signals: need at least two signals"));
        }
        if self.scores.len() != labels.len() {
            return Err(invalid(format!(
                "scores: {} entries for {} signals",
                self.scores.len(),
                labels.len()
            )));
        }
        let scores = ScoreMap::new(self.scores.clone()).map_err(|e| invalid(format!("scores: {e}")))?;
        let signals = SignalSet::new(labels, scores).map_err(|e| invalid(format!("signals: {e}")))?;
        if self.ratings.is_empty() {
            return Err(invalid("ratings: need at least one reviewer"));
        }
        if self.ratings.len() != self.predictions.len() {
            return Err(invalid(format!(
                "predictions: {} vectors for {} ratings",
                self.predictions.len(),
                self.ratings.len()
            )));
        }
        let d = signals.dim();
        let ratings = self
            .ratings
            .iter()
            .enumerate()
            .map(|(i, r)| {
                signals
                    .index_of(&r.key())
                    .ok_or_else(|| invalid(format!("ratings[{i}]: unknown signal {:?}", r.key())))
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, p) in self.predictions.iter().enumerate() {
            if p.len() != d {
                return Err(invalid(format!("predictions[{i}]: {} entries, expected {d}", p.len())));
            }
            if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(invalid(format!("predictions[{i}]: entry {x} is not a probability")));
            }
            let sum: f64 = p.iter().sum();
            if (sum - 1.0).abs() > PREDICTION_TOLERANCE {
                return Err(invalid(format!("predictions[{i}]: entries sum to {sum}, expected 1")));
            }
        }
        let bundle = ReviewBundle::new(d, ratings, self.predictions.clone())?;
        Ok(LabeledBundle { signals, bundle })
    }
}

impl LabeledBundle {
    pub fn to_file(&self) -> BundleFile {
        let b = &self.bundle;
        BundleFile {
            signals: self.signals.labels().iter().cloned().map(Label::Text).collect(),
            scores: self.signals.scores().as_slice().to_vec(),
            ratings: b
                .ratings()
                .iter()
                .map(|&s| Label::Text(self.signals.label(s).to_string()))
                .collect(),
            predictions: (0..b.len()).map(|i| b.prediction(i).to_vec()).collect(),
        }
    }
}

/// Parses and validates a bundle. JSON syntax errors carry line and column.
pub fn parse_bundle(text: &str) -> Result<LabeledBundle> {
    let file: BundleFile = serde_json::from_str(text)
        .map_err(|e| invalid(format!("line {} column {}: {e}", e.line(), e.column())))?;
    file.validate()
}

/// Finite scores become JSON numbers; the rest become `"+inf"`, `"-inf"`
/// or `"undefined"`.
pub fn score_to_json(score: CalibratedScore) -> Value {
    match score {
        CalibratedScore::Finite(x) => serde_json::json!(x),
        other => Value::String(other.to_string()),
    }
}

pub fn score_from_json(v: &Value) -> Option<CalibratedScore> {
    match v {
        Value::Number(n) => n.as_f64().map(CalibratedScore::Finite),
        Value::String(s) => match s.as_str() {
            "+inf" => Some(CalibratedScore::PosInf),
            "-inf" => Some(CalibratedScore::NegInf),
            "undefined" => Some(CalibratedScore::Undefined),
            _ => None,
        },
        _ => None,
    }
}
