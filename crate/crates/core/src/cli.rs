//! The `surprisal` command-line tool.
//!
//! Exit codes: 0 success, 1 failed self-check (`demo`), 2 malformed input
//! or configuration, 3 unwritable output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{binary_error_bound, general_error_bound, lemma_ideal_bound, BoundInput};
use crate::bundle_io::{parse_bundle, score_to_json, LabeledBundle};
use crate::error::CalibrationError;
use crate::linalg::Matrix;
use crate::model::{BetaPrior, DiscretePrior, JointMatrix, Prior, ReviewBundle, ScoreMap, StateVector};
use crate::montecarlo::{
    run_sweep, with_threads, write_csv, AccuracyResult, ExperimentConfig, Method, SweepConfig,
};
use crate::noise::NoiseModel;
use crate::scoring::{
    baseline_score, explain_binary, explain_general, explain_sp_inspired, surprisal_score,
    ScoreReport, UndefinedCause,
};
use crate::svg::{Chart, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "surprisal", version, about = "Noise-robust calibration of peer ratings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score one paper's review bundle (JSON file, `-` for stdin).
    Score {
        bundle: PathBuf,
        /// Comma-separated score per signal, overriding the bundle's scores.
        #[arg(long, allow_hyphen_values = true)]
        scores: Option<String>,
    },
    /// Run pairwise accuracy experiments and write CSV.
    Simulate {
        /// JSON experiment or sweep configuration.
        #[arg(long, conflicts_with = "paper_grid")]
        config: Option<PathBuf>,
        /// Use the built-in grid: three Beta priors, both bias modes,
        /// n in {3, 5}, lambda_A in {0, 0.3, 0.6}.
        #[arg(long)]
        paper_grid: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one SVG chart per scenario next to the CSV.
        #[arg(long, requires = "out")]
        svg: bool,
    },
    /// Evaluate the error-probability bounds for two papers.
    Bound {
        /// Clean state of paper A: one accept probability or a full vector.
        #[arg(long)]
        state_a: String,
        #[arg(long)]
        state_b: String,
        #[arg(long, default_value_t = 0.0)]
        lambda_a: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_b: f64,
        /// Bias vector of paper A (uniform when omitted).
        #[arg(long)]
        bias_a: Option<String>,
        #[arg(long)]
        bias_b: Option<String>,
        #[arg(long)]
        n_a: u64,
        #[arg(long)]
        n_b: u64,
        #[arg(long, allow_hyphen_values = true)]
        scores: Option<String>,
        /// Clean joint matrix for the known-prediction bound, rows split by `;`.
        #[arg(long, conflicts_with = "beta")]
        joint: Option<String>,
        /// Binary Beta prior `ALPHA,BETA` supplying the clean joint matrix.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Walk through the three-paper-type example with self-checks.
    Demo,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn output(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_OUTPUT,
            message: message.into(),
        }
    }
}

impl From<CalibrationError> for Failure {
    fn from(e: CalibrationError) -> Self {
        Failure::input(e.to_string())
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Score { bundle, scores } => cmd_score(&bundle, scores.as_deref(), stdout, stderr),
        Command::Simulate {
            config,
            paper_grid,
            seed,
            trials,
            threads,
            out,
            svg,
        } => cmd_simulate(
            SimulateArgs {
                config,
                paper_grid,
                seed,
                trials,
                threads,
                out,
                svg,
            },
            stdout,
            stderr,
        ),
        Command::Bound {
            state_a,
            state_b,
            lambda_a,
            lambda_b,
            bias_a,
            bias_b,
            n_a,
            n_b,
            scores,
            joint,
            beta,
        } => cmd_bound(
            BoundArgs {
                state_a,
                state_b,
                lambda_a,
                lambda_b,
                bias_a,
                bias_b,
                n_a,
                n_b,
                scores,
                joint,
                beta,
            },
            stdout,
        ),
        Command::Demo => cmd_demo(stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn parse_list(flag: &str, s: &str) -> std::result::Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Failure::input(format!("--{flag}: {x:?} is not a number")))
        })
        .collect()
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(stdout: &mut dyn Write, value: &Value) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json values serialise");
    writeln!(stdout, "{text}").map_err(|e| Failure::output(format!("stdout: {e}")))
}

fn describe_cause(cause: UndefinedCause, bundle: &LabeledBundle) -> String {
    match cause {
        UndefinedCause::MissingSignal { signal } => format!(
            "missing signal: no reviewer reported {:?}",
            bundle.signals.label(signal)
        ),
        UndefinedCause::ZeroPrior { signal } => format!(
            "reconstructed prior of reported signal {:?} is zero",
            bundle.signals.label(signal)
        ),
        other => other.to_string(),
    }
}

fn cmd_score(
    path: &Path,
    scores: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult {
    let text = read_input(path)?;
    let labeled = parse_bundle(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let bundle: &ReviewBundle = &labeled.bundle;
    let d = bundle.dim();
    let phi = match scores {
        Some(s) => ScoreMap::new(parse_list("scores", s)?).map_err(|e| Failure::input(format!("--scores: {e}")))?,
        None => labeled.signals.scores().clone(),
    };
    if phi.dim() != d {
        return Err(Failure::input(format!("--scores: {} values for {d} signals", phi.dim())));
    }

    let (surprisal, sp): (ScoreReport, ScoreReport) = if d == 2 {
        if phi.as_slice()[1] < phi.as_slice()[0] {
            return Err(Failure::input(
                "binary bundles must list the favourable signal second",
            ));
        }
        (explain_binary(bundle)?, explain_sp_inspired(bundle, &ScoreMap::binary_signed())?)
    } else {
        (explain_general(bundle, &phi)?, explain_sp_inspired(bundle, &phi)?)
    };
    for (name, report) in [("surprisal", &surprisal), ("sp_inspired", &sp)] {
        if let Some(cause) = report.cause {
            let _ = writeln!(stderr, "warning: {name} score undefined: {}", describe_cause(cause, &labeled));
        }
    }

    let reconstruction = bundle
        .prediction_matrix()
        .ok()
        .and_then(|p| p.lenient_marginal().map(|q| (p.symmetry_residual(&q), q)));
    if let Some((residual, _)) = &reconstruction {
        if *residual > crate::model::SYMMETRY_TOLERANCE {
            let _ = writeln!(
                stderr,
                "warning: predictions are not Bayes-consistent (symmetry residual {residual:e})"
            );
        }
    }
    let (residual, prior) = match reconstruction {
        Some((r, q)) => (json!(r), json!(q)),
        None => (Value::Null, Value::Null),
    };

    emit(
        stdout,
        &json!({
            "reviewers": bundle.len(),
            "surprisal": score_to_json(surprisal.score),
            "baseline": baseline_score(bundle, &phi),
            "sp_inspired": score_to_json(sp.score),
            "reconstructed_prior": prior,
            "symmetry_residual": residual,
        }),
    )?;
    Ok(EXIT_OK)
}

struct SimulateArgs {
    config: Option<PathBuf>,
    paper_grid: bool,
    seed: Option<u64>,
    trials: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    svg: bool,
}

/// Default trial count per grid point for the built-in grid.
pub const DEFAULT_TRIALS: u64 = 200_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

fn load_experiments(args: &SimulateArgs) -> std::result::Result<Vec<ExperimentConfig>, Failure> {
    let experiments = match (&args.config, args.paper_grid) {
        (Some(path), _) => {
            let text = read_input(path)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| {
                Failure::input(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
            })?;
            let fail = |e: serde_json::Error| Failure::input(format!("{}: {e}", path.display()));
            if value.get("priors").is_some() {
                let mut sweep: SweepConfig = serde_json::from_value(value).map_err(fail)?;
                if let Some(t) = args.trials {
                    sweep.trials = t;
                }
                if let Some(s) = args.seed {
                    sweep.master_seed = s;
                }
                sweep.experiments()?
            } else {
                let mut e: ExperimentConfig = serde_json::from_value(value).map_err(fail)?;
                if let Some(t) = args.trials {
                    e = e.with_trials(t)?;
                }
                if let Some(s) = args.seed {
                    e = e.with_seed(s);
                }
                vec![e]
            }
        }
        (None, true) => SweepConfig::paper_grid(
            args.trials.unwrap_or(DEFAULT_TRIALS),
            args.seed.unwrap_or(DEFAULT_SEED),
        )?
        .experiments()?,
        (None, false) => return Err(Failure::input("simulate needs --config FILE or --paper-grid")),
    };
    if experiments.iter().any(|e| e.trials() == 0) {
        return Err(Failure::input("trials must be at least 1"));
    }
    Ok(experiments)
}

fn prior_tag(prior: &Prior) -> String {
    match prior {
        Prior::Beta(b) => format!("beta{}-{}", b.alpha(), b.beta()),
        Prior::Discrete(_) => "discrete".into(),
    }
}

fn scenario_chart(results: &[AccuracyResult]) -> (String, String) {
    let first = &results[0];
    let tag = format!(
        "{}_{}_n{}_la{:.2}",
        prior_tag(&first.prior),
        first.bias_mode,
        first.n_reviewers,
        first.lambda_a
    );
    let series = |method: Method, color| Series {
        name: method.as_str(),
        color,
        points: results
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.lambda_b, r.accuracy))
            .collect(),
    };
    let x_max = results.iter().map(|r| r.lambda_b).fold(0.0, f64::max).max(1e-9);
    let chart = Chart {
        title: format!(
            "{} prior, {} bias, n = {}, lambda_A = {:.2}",
            prior_tag(&first.prior),
            first.bias_mode,
            first.n_reviewers,
            first.lambda_a
        ),
        x_label: "lambda_B",
        y_label: "accuracy",
        x_range: (0.0, x_max),
        y_range: (0.5, 1.0),
        series: vec![
            series(Method::Surprisal, "red"),
            series(Method::Baseline, "green"),
            series(Method::SpInspired, "blue"),
        ],
    };
    (tag, chart.render())
}

fn cmd_simulate(args: SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let experiments = load_experiments(&args)?;
    if args.threads == Some(0) {
        return Err(Failure::input("--threads must be at least 1"));
    }

    // open the destination before spending time on trials
    let mut file = match &args.out {
        Some(path) => Some(BufWriter::new(
            File::create(path).map_err(|e| Failure::output(format!("{}: {e}", path.display())))?,
        )),
        None => None,
    };

    let _ = writeln!(
        stderr,
        "running {} scenario(s), {} trials per grid point",
        experiments.len(),
        experiments[0].trials()
    );
    let results = match args.threads {
        Some(t) => with_threads(t, || run_sweep(&experiments))??,
        None => run_sweep(&experiments)?,
    };

    match (&mut file, &args.out) {
        (Some(f), Some(path)) => {
            write_csv(&results, &mut *f).map_err(|e| Failure::output(format!("{}: {e}", path.display())))?;
            f.flush().map_err(|e| Failure::output(format!("{}: {e}", path.display())))?;
        }
        _ => write_csv(&results, &mut *stdout).map_err(|e| Failure::output(e.to_string()))?,
    }

    if args.svg {
        let out = args.out.as_ref().expect("clap requires --out with --svg");
        let dir = out.parent().unwrap_or(Path::new("."));
        let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("accuracy");
        let per = results.len() / experiments.len();
        for chunk in results.chunks(per) {
            let (tag, svg) = scenario_chart(chunk);
            let path = dir.join(format!("{stem}_{tag}.svg"));
            std::fs::write(&path, svg).map_err(|e| Failure::output(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(EXIT_OK)
}

struct BoundArgs {
    state_a: String,
    state_b: String,
    lambda_a: f64,
    lambda_b: f64,
    bias_a: Option<String>,
    bias_b: Option<String>,
    n_a: u64,
    n_b: u64,
    scores: Option<String>,
    joint: Option<String>,
    beta: Option<String>,
}

fn parse_state(flag: &str, s: &str) -> std::result::Result<StateVector, Failure> {
    let v = parse_list(flag, s)?;
    let state = if v.len() == 1 { StateVector::binary(v[0]) } else { StateVector::new(v) };
    state.map_err(|e| Failure::input(format!("--{flag}: {e}")))
}

fn parse_noise(flag: &str, lambda: f64, bias: Option<&str>, d: usize) -> std::result::Result<NoiseModel, Failure> {
    let bias = match bias {
        Some(b) => parse_list(flag, b)?,
        None => vec![1.0 / d as f64; d],
    };
    NoiseModel::new(lambda, bias).map_err(|e| Failure::input(format!("--{flag}: {e}")))
}

fn cmd_bound(args: BoundArgs, stdout: &mut dyn Write) -> CliResult {
    let wa = parse_state("state-a", &args.state_a)?;
    let wb = parse_state("state-b", &args.state_b)?;
    let d = wa.dim();
    let phi = match &args.scores {
        Some(s) => ScoreMap::new(parse_list("scores", s)?).map_err(|e| Failure::input(format!("--scores: {e}")))?,
        None => ScoreMap::indices(d),
    };
    let na = parse_noise("bias-a", args.lambda_a, args.bias_a.as_deref(), d)?;
    let nb = parse_noise("bias-b", args.lambda_b, args.bias_b.as_deref(), d)?;
    let mut input = BoundInput::new((wa, wb), (na, nb), (args.n_a, args.n_b), phi)?;

    let joint = match (&args.joint, &args.beta) {
        (Some(j), _) => {
            let rows = j
                .split(';')
                .map(|r| parse_list("joint", r))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let m = Matrix::from_rows(&rows).map_err(|e| Failure::input(format!("--joint: {e}")))?;
            Some(JointMatrix::new(m).map_err(|e| Failure::input(format!("--joint: {e}")))?)
        }
        (None, Some(b)) => {
            let v = parse_list("beta", b)?;
            if v.len() != 2 {
                return Err(Failure::input("--beta expects ALPHA,BETA"));
            }
            Some(BetaPrior::new(v[0], v[1])?.joint_matrix())
        }
        (None, None) => None,
    };
    if let Some(j) = joint {
        input = input.with_joint(j)?;
    }

    let binary = if d == 2 { Some(binary_error_bound(&input)?) } else { None };
    let general = general_error_bound(&input);
    let lemma = match input.joint() {
        Some(_) => Some(lemma_ideal_bound(&input)?),
        None => None,
    };
    let vacuous = |b: Option<f64>| b.map(|x| x > 1.0);
    emit(
        stdout,
        &json!({
            "binary": binary,
            "general": general,
            "lemma": lemma,
            "vacuous": {
                "binary": vacuous(binary),
                "general": general > 1.0,
                "lemma": vacuous(lemma),
            },
        }),
    )?;
    Ok(EXIT_OK)
}

struct Checker<'a> {
    out: &'a mut dyn Write,
    failures: usize,
}

impl Checker<'_> {
    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(self.out, "  [{}] {what}", if ok { "ok" } else { "FAILED" });
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }
}

fn fmt_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:.4}")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn close(a: &Matrix, rows: &[[f64; 2]], tol: f64) -> bool {
    a.max_abs_diff(&Matrix::from_rows(rows).expect("2x2")) <= tol
}

fn cmd_demo(stdout: &mut dyn Write) -> CliResult {
    let mut c = Checker {
        out: stdout,
        failures: 0,
    };
    let binary = ScoreMap::binary();

    c.line("Clean setting: three paper types with Pr[accept] = 0.2, 0.5, 0.8, equally likely");
    let states: Vec<StateVector> = [0.2, 0.5, 0.8]
        .iter()
        .map(|&a| StateVector::binary(a))
        .collect::<Result<_, _>>()?;
    let prior = DiscretePrior::uniform(states)?;
    let u = prior.joint_matrix();
    let p = u.prediction_matrix()?;
    let q = p.marginal()?;
    c.line(format!("  U = {}", fmt_matrix(u.matrix())));
    c.check("U = [[0.31, 0.19], [0.19, 0.31]]", close(u.matrix(), &[[0.31, 0.19], [0.19, 0.31]], 1e-12));
    c.line(format!("  P = {}", fmt_matrix(p.matrix())));
    c.check("P = [[0.62, 0.38], [0.38, 0.62]]", close(p.matrix(), &[[0.62, 0.38], [0.38, 0.62]], 1e-12));
    c.line(format!("  q reconstructed from P = {:?}", q.as_slice()));
    c.check("q = [0.5, 0.5]", (q.as_slice()[0] - 0.5).abs() < 1e-12);

    c.line("");
    c.line("Noisy setting: half of the reviewers of a hard paper reject without reading");
    let noise = NoiseModel::new(0.5, vec![1.0, 0.0])?;
    c.line(format!("  M = {}", fmt_matrix(&noise.matrix())));
    let noisy_u = noise.apply_to_joint(&u);
    let noisy_p = noisy_u.prediction_matrix()?;
    c.line(format!("  U^ = M^T U M = {}", fmt_matrix(noisy_u.matrix())));
    c.check("U^ ~ [[0.58, 0.17], [0.17, 0.08]]", close(noisy_u.matrix(), &[[0.58, 0.17], [0.17, 0.08]], 0.005));
    c.line(format!("  P^ = {}", fmt_matrix(noisy_p.matrix())));
    c.check("P^ = [[0.77, 0.23], [0.69, 0.31]]", close(noisy_p.matrix(), &[[0.77, 0.23], [0.69, 0.31]], 1e-12));
    c.check(
        "P^ within 0.01 of the rounded [[0.77, 0.23], [0.68, 0.32]]",
        close(noisy_p.matrix(), &[[0.77, 0.23], [0.68, 0.32]], 0.01 + 1e-9),
    );
    c.check(
        &format!("det M = (1 - lambda)^(d-1) = {}", noise.determinant()),
        (noise.matrix().determinant() - noise.determinant()).abs() < 1e-12,
    );

    c.line("");
    c.line("Invariant score of the Pr[accept] = 0.8 paper before and after noise");
    let w = StateVector::binary(0.8)?;
    let noisy_w = noise.apply_to_state(&w);
    let clean_score = surprisal_score(&w, &u, &binary)?;
    let noisy_score = surprisal_score(&noisy_w, &noisy_u, &binary)?;
    c.line(format!("  w  = {:?}, S = {clean_score:.6}", w.as_slice()));
    c.line(format!("  w^ = {:?}, S = {noisy_score:.6}", noisy_w.as_slice()));
    c.check("scores agree", (clean_score - noisy_score).abs() < 1e-12);
    c.check("the noisy paper's mean rating fell below one half", noisy_w.as_slice()[1] < 0.5);

    c.line("");
    c.line("Three reviewers of the noisy paper: accept, accept, reject");
    let bundle = ReviewBundle::new(
        2,
        vec![1, 1, 0],
        vec![noisy_p.row(1).to_vec(), noisy_p.row(1).to_vec(), noisy_p.row(0).to_vec()],
    )?;
    let s = explain_binary(&bundle)?.score;
    let sp = explain_sp_inspired(&bundle, &ScoreMap::binary_signed())?.score;
    let base = baseline_score(&bundle, &binary);
    c.line(format!("  surprisal = {s}, baseline = {base:.6}, sp_inspired = {sp}"));
    let expected = (2.0 / 3.0 - 0.25) / (0.75_f64 * 0.25 * 0.08).sqrt();
    c.check(
        &format!("surprisal = (2/3 - 0.25) / sqrt(0.75 * 0.25 * 0.08) = {expected:.6}"),
        s.value().is_some_and(|x| (x - expected).abs() < 1e-9),
    );

    c.line("");
    if c.failures == 0 {
        c.line("all checks passed");
        Ok(EXIT_OK)
    } else {
        c.line(format!("{} check(s) failed", c.failures));
        Ok(EXIT_CHECK_FAILED)
    }
}
