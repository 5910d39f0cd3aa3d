//! Monte Carlo harness for pairwise paper comparisons.
//!
//! Each trial draws two papers from a binary prior, pushes each through its
//! own noise, samples perfect-Bayesian reviewers for both, and records
//! whether each scoring method ranks the truly better paper higher. Ties
//! count one half.
//!
//! Every trial owns a ChaCha8 stream keyed by `(seed, grid index)` and
//! selected by the trial index, so results do not depend on scheduling or
//! on the number of worker threads.

use std::fmt;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{binary_error_bound, BoundInput};
use crate::error::{invalid, CalibrationError, Result};
use crate::model::{
    beta_noisy_model, sample_reviews, NoisyModel, PredictionMatrix, Prior, ReviewBundle, ScoreMap,
    StateVector,
};
use crate::noise::NoiseModel;
use crate::scoring::{
    baseline_score, compare, empirical_score_binary, sp_inspired_score, CalibratedScore,
    RankOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiasMode {
    /// Paper A leans accept, paper B leans reject.
    Opposite,
    /// Both papers lean accept.
    Same,
}

impl BiasMode {
    pub fn biases(self) -> ([f64; 2], [f64; 2]) {
        match self {
            BiasMode::Opposite => ([0.0, 1.0], [1.0, 0.0]),
            BiasMode::Same => ([0.0, 1.0], [0.0, 1.0]),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BiasMode::Opposite => "opposite",
            BiasMode::Same => "same",
        }
    }
}

impl fmt::Display for BiasMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Surprisal,
    Baseline,
    SpInspired,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Surprisal, Method::Baseline, Method::SpInspired];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Surprisal => "surprisal",
            Method::Baseline => "baseline",
            Method::SpInspired => "sp_inspired",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One experiment: a prior, a reviewer count, paper A's noise and a sweep
/// over paper B's noise level. Biases are fixed by the bias mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExperimentRepr", into = "ExperimentRepr")]
pub struct ExperimentConfig {
    prior: Prior,
    n_reviewers: usize,
    noise_a: NoiseModel,
    noise_b_grid: Vec<NoiseModel>,
    bias_mode: BiasMode,
    trials: u64,
    master_seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ExperimentRepr {
    prior: Prior,
    n_reviewers: usize,
    noise_a: f64,
    noise_b_grid: Vec<f64>,
    bias_mode: BiasMode,
    trials: u64,
    master_seed: u64,
}

impl TryFrom<ExperimentRepr> for ExperimentConfig {
    type Error = CalibrationError;

    fn try_from(r: ExperimentRepr) -> Result<Self> {
        Self::new(
            r.prior,
            r.n_reviewers,
            r.noise_a,
            &r.noise_b_grid,
            r.bias_mode,
            r.trials,
            r.master_seed,
        )
    }
}

impl From<ExperimentConfig> for ExperimentRepr {
    fn from(c: ExperimentConfig) -> Self {
        Self {
            noise_a: c.noise_a.lambda(),
            noise_b_grid: c.lambda_b_grid(),
            prior: c.prior,
            n_reviewers: c.n_reviewers,
            bias_mode: c.bias_mode,
            trials: c.trials,
            master_seed: c.master_seed,
        }
    }
}

impl ExperimentConfig {
    pub fn new(
        prior: Prior,
        n_reviewers: usize,
        lambda_a: f64,
        lambda_b_grid: &[f64],
        bias_mode: BiasMode,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        if prior.dim() != 2 {
            return Err(invalid("the experiment harness compares binary ratings only"));
        }
        if let Prior::Discrete(d) = &prior {
            let first = d.states().next().map(|(w, _)| w.as_slice()[1]);
            if d.states().all(|(w, _)| Some(w.as_slice()[1]) == first) {
                return Err(invalid("a discrete prior needs states of different quality"));
            }
        }
        if n_reviewers == 0 {
            return Err(invalid("nReviewers must be at least 1"));
        }
        if trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if lambda_b_grid.is_empty() {
            return Err(invalid("noiseBGrid must not be empty"));
        }
        let (bias_a, bias_b) = bias_mode.biases();
        let noise_a = NoiseModel::new(lambda_a, bias_a.to_vec())?;
        let noise_b_grid = lambda_b_grid
            .iter()
            .map(|&l| NoiseModel::new(l, bias_b.to_vec()))
            .collect::<Result<_>>()?;
        Ok(Self {
            prior,
            n_reviewers,
            noise_a,
            noise_b_grid,
            bias_mode,
            trials,
            master_seed,
        })
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn n_reviewers(&self) -> usize {
        self.n_reviewers
    }

    pub fn noise_a(&self) -> &NoiseModel {
        &self.noise_a
    }

    pub fn noise_b_grid(&self) -> &[NoiseModel] {
        &self.noise_b_grid
    }

    pub fn lambda_b_grid(&self) -> Vec<f64> {
        self.noise_b_grid.iter().map(NoiseModel::lambda).collect()
    }

    pub fn bias_mode(&self) -> BiasMode {
        self.bias_mode
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn with_trials(mut self, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        self.trials = trials;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }
}

/// `λ_B ∈ {0.00, 0.05, …, 0.90}`.
pub fn default_lambda_b_grid() -> Vec<f64> {
    (0..=18).map(|k| k as f64 / 20.0).collect()
}

/// A cross product of experiments sharing one trial count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SweepConfig {
    pub priors: Vec<Prior>,
    pub bias_modes: Vec<BiasMode>,
    pub n_reviewers: Vec<usize>,
    pub noise_a: Vec<f64>,
    pub noise_b_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
}

impl SweepConfig {
    /// Three Beta priors × two bias modes × `n ∈ {3, 5}` × `λ_A ∈ {0, 0.3, 0.6}`.
    pub fn paper_grid(trials: u64, master_seed: u64) -> Result<Self> {
        Ok(Self {
            priors: vec![
                Prior::Beta(crate::model::BetaPrior::new(0.5, 0.5)?),
                Prior::Beta(crate::model::BetaPrior::new(1.0, 1.0)?),
                Prior::Beta(crate::model::BetaPrior::new(3.0, 3.0)?),
            ],
            bias_modes: vec![BiasMode::Opposite, BiasMode::Same],
            n_reviewers: vec![3, 5],
            noise_a: vec![0.0, 0.3, 0.6],
            noise_b_grid: default_lambda_b_grid(),
            trials,
            master_seed,
        })
    }

    /// Expands to one experiment per scenario, each with its own seed derived
    /// from the master seed and the scenario's position.
    pub fn experiments(&self) -> Result<Vec<ExperimentConfig>> {
        let mut out = Vec::new();
        for prior in &self.priors {
            for &mode in &self.bias_modes {
                for &n in &self.n_reviewers {
                    for &lambda_a in &self.noise_a {
                        let seed = mix64(self.master_seed ^ mix64(out.len() as u64 + 1));
                        out.push(ExperimentConfig::new(
                            prior.clone(),
                            n,
                            lambda_a,
                            &self.noise_b_grid,
                            mode,
                            self.trials,
                            seed,
                        )?);
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(invalid("sweep expands to no experiments"));
        }
        Ok(out)
    }
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The random stream owned by one trial.
pub fn trial_rng(master_seed: u64, grid_index: u64, trial_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&grid_index.to_le_bytes());
    key[16..24].copy_from_slice(&mix64(master_seed).to_le_bytes());
    key[24..].copy_from_slice(&mix64(grid_index ^ 0x5eed).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index);
    rng
}

/// How one method fared on one trial, relative to the truly better paper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Correct,
    Tie,
    Wrong,
}

impl Verdict {
    /// `better_is_a` says which paper has the higher clean quality.
    pub fn judge(outcome: RankOutcome, better_is_a: bool) -> Self {
        match (outcome, better_is_a) {
            (RankOutcome::Tie, _) => Verdict::Tie,
            (RankOutcome::FirstHigher, true) | (RankOutcome::SecondHigher, false) => Verdict::Correct,
            _ => Verdict::Wrong,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub surprisal: Verdict,
    pub baseline: Verdict,
    pub sp_inspired: Verdict,
    /// Raw rank outcomes, paper A first.
    pub ranks: [RankOutcome; 3],
}

impl TrialOutcome {
    pub fn verdict(&self, m: Method) -> Verdict {
        match m {
            Method::Surprisal => self.surprisal,
            Method::Baseline => self.baseline,
            Method::SpInspired => self.sp_inspired,
        }
    }
}

#[derive(Debug, Clone)]
struct PaperModel {
    noise: NoiseModel,
    prediction: PredictionMatrix,
}

impl PaperModel {
    fn new(prior: &Prior, noise: &NoiseModel) -> Result<Self> {
        let model = match prior {
            Prior::Beta(b) => beta_noisy_model(b, noise)?,
            Prior::Discrete(_) => NoisyModel::from_clean_joint(&prior.joint_matrix(), noise)?,
        };
        Ok(Self {
            noise: noise.clone(),
            prediction: model.prediction,
        })
    }

    fn review<R: Rng>(&self, accept: f64, n: usize, rng: &mut R) -> ReviewBundle {
        let noisy = self
            .noise
            .apply_to_state(&StateVector::new_unchecked(vec![1.0 - accept, accept]));
        sample_reviews(&noisy, &self.prediction, n, rng).expect("validated dimensions")
    }
}

enum Sampler<'a> {
    Beta(Beta<f64>),
    Discrete(&'a crate::model::DiscretePrior),
}

impl Sampler<'_> {
    fn accept_rate<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Beta(b) => b.sample(rng),
            Sampler::Discrete(d) => d.sample_state(rng).as_slice()[1],
        }
    }
}

/// Everything a trial needs that does not depend on the trial index.
struct GridPoint<'a> {
    sampler: Sampler<'a>,
    paper_a: PaperModel,
    paper_b: PaperModel,
    n: usize,
    seed: u64,
    grid_index: u64,
}

impl<'a> GridPoint<'a> {
    fn new(config: &'a ExperimentConfig, grid_index: usize) -> Result<Self> {
        let noise_b = config
            .noise_b_grid
            .get(grid_index)
            .ok_or_else(|| invalid(format!("grid index {grid_index} out of range")))?;
        let sampler = match &config.prior {
            Prior::Beta(b) => Sampler::Beta(b.distribution()),
            Prior::Discrete(d) => Sampler::Discrete(d),
        };
        Ok(Self {
            sampler,
            paper_a: PaperModel::new(&config.prior, &config.noise_a)?,
            paper_b: PaperModel::new(&config.prior, noise_b)?,
            n: config.n_reviewers,
            seed: config.master_seed,
            grid_index: grid_index as u64,
        })
    }

    fn run(&self, trial_index: u64) -> TrialOutcome {
        let mut rng = trial_rng(self.seed, self.grid_index, trial_index);
        let accept_a = self.sampler.accept_rate(&mut rng);
        let mut accept_b = self.sampler.accept_rate(&mut rng);
        while accept_b == accept_a {
            accept_b = self.sampler.accept_rate(&mut rng);
        }
        let bundle_a = self.paper_a.review(accept_a, self.n, &mut rng);
        let bundle_b = self.paper_b.review(accept_b, self.n, &mut rng);
        judge_pair(&bundle_a, &bundle_b, accept_a > accept_b)
    }
}

/// Scores two binary bundles with every method and judges the rankings.
pub fn judge_pair(a: &ReviewBundle, b: &ReviewBundle, better_is_a: bool) -> TrialOutcome {
    let binary = ScoreMap::binary();
    let signed = ScoreMap::binary_signed();
    let base_a = baseline_score(a, &binary);
    let base_b = baseline_score(b, &binary);
    let surprisal = |x: &ReviewBundle| empirical_score_binary(x).expect("binary bundle");
    let sp = |x: &ReviewBundle| sp_inspired_score(x, &signed).expect("binary bundle");

    let ranks = [
        compare(surprisal(a), surprisal(b), base_a, base_b),
        compare(CalibratedScore::Finite(base_a), CalibratedScore::Finite(base_b), base_a, base_b),
        compare(sp(a), sp(b), base_a, base_b),
    ];
    TrialOutcome {
        surprisal: Verdict::judge(ranks[0], better_is_a),
        baseline: Verdict::judge(ranks[1], better_is_a),
        sp_inspired: Verdict::judge(ranks[2], better_is_a),
        ranks,
    }
}

/// Runs trial `trial_index` at grid point `grid_index`.
pub fn run_trial(config: &ExperimentConfig, grid_index: usize, trial_index: u64) -> Result<TrialOutcome> {
    Ok(GridPoint::new(config, grid_index)?.run(trial_index))
}

/// Integer counts of verdicts; merging is exact and order-free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: u64,
    pub ties: u64,
    pub wrong: u64,
}

impl Tally {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Correct => self.correct += 1,
            Verdict::Tie => self.ties += 1,
            Verdict::Wrong => self.wrong += 1,
        }
    }

    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            correct: self.correct + o.correct,
            ties: self.ties + o.ties,
            wrong: self.wrong + o.wrong,
        }
    }

    pub fn trials(&self) -> u64 {
        self.correct + self.ties + self.wrong
    }

    /// `(#correct + ½·#ties) / trials`.
    pub fn accuracy(&self) -> f64 {
        (self.correct as f64 + 0.5 * self.ties as f64) / self.trials() as f64
    }

    /// `(#wrong + ½·#ties) / trials`.
    pub fn error_rate(&self) -> f64 {
        (self.wrong as f64 + 0.5 * self.ties as f64) / self.trials() as f64
    }

    pub fn std_error(&self) -> f64 {
        let p = self.accuracy();
        (p * (1.0 - p) / self.trials() as f64).sqrt()
    }
}

/// Accuracy of one method at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyResult {
    pub prior: Prior,
    pub bias_mode: BiasMode,
    pub n_reviewers: usize,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub method: Method,
    pub tally: Tally,
    pub accuracy: f64,
    pub std_error: f64,
    pub trials: u64,
}

fn tally_grid_point(point: &GridPoint<'_>, trials: u64) -> [Tally; 3] {
    let step = |mut acc: [Tally; 3], t: u64| {
        let outcome = point.run(t);
        for (tally, m) in acc.iter_mut().zip(Method::ALL) {
            tally.add(outcome.verdict(m));
        }
        acc
    };
    let merge = |a: [Tally; 3], b: [Tally; 3]| [a[0].merge(b[0]), a[1].merge(b[1]), a[2].merge(b[2])];
    (0..trials)
        .into_par_iter()
        .fold(|| [Tally::default(); 3], step)
        .reduce(|| [Tally::default(); 3], merge)
}

/// Accuracy of every method at every grid point, grid-major then method
/// order (surprisal, baseline, SP-inspired).
pub fn estimate_accuracy(config: &ExperimentConfig) -> Result<Vec<AccuracyResult>> {
    let mut out = Vec::with_capacity(config.noise_b_grid.len() * 3);
    for (g, noise_b) in config.noise_b_grid.iter().enumerate() {
        let point = GridPoint::new(config, g)?;
        let tallies = tally_grid_point(&point, config.trials);
        for (tally, method) in tallies.into_iter().zip(Method::ALL) {
            out.push(AccuracyResult {
                prior: config.prior.clone(),
                bias_mode: config.bias_mode,
                n_reviewers: config.n_reviewers,
                lambda_a: config.noise_a.lambda(),
                lambda_b: noise_b.lambda(),
                method,
                tally,
                accuracy: tally.accuracy(),
                std_error: tally.std_error(),
                trials: tally.trials(),
            });
        }
    }
    Ok(out)
}

/// Runs every experiment of a sweep in order.
pub fn run_sweep(experiments: &[ExperimentConfig]) -> Result<Vec<AccuracyResult>> {
    let mut out = Vec::new();
    for e in experiments {
        out.extend(estimate_accuracy(e)?);
    }
    Ok(out)
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Empirical error of the binary empirical score for two fixed clean
/// papers, next to the closed-form bound for the same inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub tally: Tally,
    pub empirical_error: f64,
    pub std_error: f64,
    pub bound: f64,
}

impl BoundCheck {
    /// `empirical ≤ bound + k·SE`.
    pub fn holds_within(&self, k: f64) -> bool {
        self.empirical_error <= self.bound + k * self.std_error
    }
}

/// Simulates a fixed pair of binary papers. Paper B (second accept rate) must
/// be strictly better. Predictions come from `prior`, which the bound does
/// not depend on.
pub fn validate_bound(
    accept: (f64, f64),
    noises: (NoiseModel, NoiseModel),
    counts: (usize, usize),
    prior: &Prior,
    trials: u64,
    seed: u64,
) -> Result<BoundCheck> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let input = BoundInput::binary(accept, noises.clone(), (counts.0 as u64, counts.1 as u64))?;
    let bound = binary_error_bound(&input)?;
    let paper_a = PaperModel::new(prior, &noises.0)?;
    let paper_b = PaperModel::new(prior, &noises.1)?;
    let step = |mut acc: Tally, t: u64| {
        let mut rng = trial_rng(seed, u64::MAX, t);
        let a = paper_a.review(accept.0, counts.0, &mut rng);
        let b = paper_b.review(accept.1, counts.1, &mut rng);
        let base_a = baseline_score(&a, &ScoreMap::binary());
        let base_b = baseline_score(&b, &ScoreMap::binary());
        let sa = empirical_score_binary(&a).expect("binary bundle");
        let sb = empirical_score_binary(&b).expect("binary bundle");
        acc.add(Verdict::judge(compare(sa, sb, base_a, base_b), false));
        acc
    };
    let tally = (0..trials)
        .into_par_iter()
        .fold(Tally::default, step)
        .reduce(Tally::default, Tally::merge);
    let p = tally.error_rate();
    Ok(BoundCheck {
        tally,
        empirical_error: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        bound,
    })
}

pub const CSV_HEADER: [&str; 10] = [
    "prior_alpha",
    "prior_beta",
    "bias_mode",
    "n_reviewers",
    "lambda_A",
    "lambda_B",
    "method",
    "trials",
    "accuracy",
    "std_error",
];

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// Writes one row per result. Discrete priors leave the Beta columns empty.
pub fn write_csv<W: Write>(results: &[AccuracyResult], out: W) -> Result<()> {
    let io = |e: csv::Error| invalid(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in results {
        let (alpha, beta) = match &r.prior {
            Prior::Beta(b) => (fmt6(b.alpha()), fmt6(b.beta())),
            Prior::Discrete(_) => (String::new(), String::new()),
        };
        w.write_record([
            alpha,
            beta,
            r.bias_mode.to_string(),
            r.n_reviewers.to_string(),
            fmt6(r.lambda_a),
            fmt6(r.lambda_b),
            r.method.to_string(),
            r.trials.to_string(),
            fmt6(r.accuracy),
            fmt6(r.std_error),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| invalid(format!("csv: {e}")))?;
    Ok(())
}

/// A parsed CSV row.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub prior_alpha: Option<f64>,
    pub prior_beta: Option<f64>,
    pub bias_mode: BiasMode,
    pub n_reviewers: usize,
    #[serde(rename = "lambda_A")]
    pub lambda_a: f64,
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
    pub method: String,
    pub trials: u64,
    pub accuracy: f64,
    pub std_error: f64,
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| invalid(format!("csv: {e}")))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(invalid("unexpected CSV header"));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| invalid(format!("csv: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BetaPrior, DiscretePrior};

    fn beta(a: f64, b: f64) -> Prior {
        Prior::Beta(BetaPrior::new(a, b).unwrap())
    }

    fn config(mode: BiasMode, lambda_a: f64, grid: &[f64], trials: u64) -> ExperimentConfig {
        ExperimentConfig::new(beta(1.0, 1.0), 3, lambda_a, grid, mode, trials, 42).unwrap()
    }

    #[test]
    fn bias_modes_fix_bias_vectors() {
        let c = config(BiasMode::Opposite, 0.3, &[0.1], 1);
        assert_eq!(c.noise_a().bias(), &[0.0, 1.0]);
        assert_eq!(c.noise_b_grid()[0].bias(), &[1.0, 0.0]);
        let c = config(BiasMode::Same, 0.3, &[0.1], 1);
        assert_eq!(c.noise_b_grid()[0].bias(), &[0.0, 1.0]);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let p = beta(1.0, 1.0);
        assert!(ExperimentConfig::new(p.clone(), 3, 0.0, &[], BiasMode::Same, 10, 0).is_err());
        assert!(ExperimentConfig::new(p.clone(), 3, 0.0, &[0.1], BiasMode::Same, 0, 0).is_err());
        assert!(ExperimentConfig::new(p.clone(), 0, 0.0, &[0.1], BiasMode::Same, 1, 0).is_err());
        assert!(ExperimentConfig::new(p, 3, 1.0, &[0.1], BiasMode::Same, 1, 0).is_err());
        let single = Prior::Discrete(
            DiscretePrior::new(vec![(StateVector::binary(0.3).unwrap(), 1.0)]).unwrap(),
        );
        assert!(ExperimentConfig::new(single, 3, 0.0, &[0.1], BiasMode::Same, 1, 0).is_err());
    }

    #[test]
    fn paper_grid_has_36_scenarios_of_19_points() {
        let sweep = SweepConfig::paper_grid(10, 1).unwrap();
        let e = sweep.experiments().unwrap();
        assert_eq!(e.len(), 36);
        assert!(e.iter().all(|c| c.noise_b_grid().len() == 19));
        assert_eq!(e[0].lambda_b_grid()[18], 0.9);
        let seeds: std::collections::HashSet<u64> = e.iter().map(|c| c.master_seed()).collect();
        assert_eq!(seeds.len(), 36);
    }

    #[test]
    fn trials_replay_exactly() {
        let c = config(BiasMode::Opposite, 0.3, &[0.0, 0.5], 1);
        for t in [0, 1, 977, u64::MAX] {
            assert_eq!(run_trial(&c, 1, t).unwrap(), run_trial(&c, 1, t).unwrap());
        }
        assert!(run_trial(&c, 2, 0).is_err());
    }

    #[test]
    fn trial_streams_differ() {
        let mut a = trial_rng(1, 0, 0);
        let mut b = trial_rng(1, 0, 1);
        let mut c = trial_rng(1, 1, 0);
        let (x, y, z): (u64, u64, u64) = (a.random(), b.random(), c.random());
        assert!(x != y && x != z && y != z);
    }

    #[test]
    fn extreme_papers_are_always_ranked_correctly() {
        let prior = Prior::Discrete(
            DiscretePrior::uniform(vec![StateVector::binary(0.0).unwrap(), StateVector::binary(1.0).unwrap()])
                .unwrap(),
        );
        let c = ExperimentConfig::new(prior, 3, 0.0, &[0.0], BiasMode::Same, 500, 9).unwrap();
        for r in estimate_accuracy(&c).unwrap() {
            assert_eq!(r.tally.correct, 500, "{}", r.method);
        }
    }

    #[test]
    fn single_trial_accuracy_is_discrete() {
        let c = config(BiasMode::Opposite, 0.0, &[0.4], 1);
        for r in estimate_accuracy(&c).unwrap() {
            assert!([0.0, 0.5, 1.0].contains(&r.accuracy));
        }
    }

    #[test]
    fn zero_noise_same_bias_surprisal_matches_baseline() {
        let c = config(BiasMode::Same, 0.0, &[0.0], 1);
        for t in 0..5_000 {
            let o = run_trial(&c, 0, t).unwrap();
            assert_eq!(o.ranks[0], o.ranks[1], "trial {t}");
        }
    }

    #[test]
    fn std_error_scales_with_root_trials() {
        let small = estimate_accuracy(&config(BiasMode::Opposite, 0.3, &[0.5], 20_000)).unwrap();
        let large = estimate_accuracy(&config(BiasMode::Opposite, 0.3, &[0.5], 80_000)).unwrap();
        for (s, l) in small.iter().zip(&large) {
            let ratio = s.std_error / l.std_error;
            assert!((ratio / 2.0 - 1.0).abs() < 0.1, "{}: ratio {ratio}", s.method);
        }
    }

    #[test]
    fn accuracy_and_error_rate_are_complementary() {
        let t = Tally { correct: 7, ties: 3, wrong: 5 };
        assert!((t.accuracy() + t.error_rate() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let results = estimate_accuracy(&config(BiasMode::Same, 0.3, &[0.0, 0.45], 200)).unwrap();
        let mut buf = Vec::new();
        write_csv(&results, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("prior_alpha,prior_beta,bias_mode,n_reviewers,lambda_A,lambda_B,method,trials,accuracy,std_error\n"));
        let rows = read_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 6);
        for (row, r) in rows.iter().zip(&results) {
            assert_eq!(row.method, r.method.as_str());
            assert_eq!(fmt6(row.accuracy), fmt6(r.accuracy));
            assert_eq!(fmt6(row.std_error), fmt6(r.std_error));
            assert_eq!(row.lambda_b, r.lambda_b);
            assert_eq!(row.trials, 200);
        }
    }

    #[test]
    fn config_json_round_trip() {
        let c = config(BiasMode::Opposite, 0.3, &[0.0, 0.45], 200);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"noiseBGrid\""));
        assert!(json.contains("\"nReviewers\""));
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn deterministic_bundles_never_err() {
        let check = validate_bound(
            (0.0, 1.0),
            (NoiseModel::none(2), NoiseModel::none(2)),
            (1, 1),
            &beta(1.0, 1.0),
            2_000,
            5,
        )
        .unwrap();
        assert_eq!(check.empirical_error, 0.0);
    }
}
