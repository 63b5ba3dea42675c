//! Erdős–Rényi sampling and Monte Carlo experiments on neighborhood complexes.
//!
//! Trial `i` of an experiment draws from a ChaCha8 stream keyed by
//! `trial_seed(master, i)`, the SplitMix64 output at position `i + 1` of the
//! sequence started at `master`. Trials share no state, so per-trial rows are
//! identical under any execution order or thread count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::max_weighted_sigma_defect;
use crate::complex::{
    binomial, missing_face_count, neighborhood_complex_up_to, Graph, SimplicialComplex, VertexId,
    DEFAULT_FACE_CAP,
};
use crate::error::{Error, Result};
use crate::laplacian::betti_numbers;
use crate::par::{map_indexed, Execution};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)` on vertices `0..n`; pairs are visited in lexicographic order,
/// one uniform draw each.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    sample_gnp_with(n, p, &mut rng)
}

pub fn sample_gnp_with(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new((0..n as VertexId).collect(), &edges).expect("labels 0..n are distinct")
}

/// `E|X̄(k)| = C(n, k+1) (1 − p^{k+1})^{n−k−1}` for `X = N[G(n, p)]`.
pub fn expected_missing_faces(n: usize, p: f64, k: usize) -> f64 {
    if k + 1 > n {
        return 0.0;
    }
    binomial(n, k + 1) as f64 * (1.0 - p.powi(k as i32 + 1)).powi((n - k - 1) as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub missing_k: u64,
    pub missing_k1: u64,
    pub ok: bool,
}

/// `(n − k − 1) |X̄(k)| ≤ (k + 2) |X̄(k+1)|` over the vertex universe.
pub fn order_inequality_check(
    x: &SimplicialComplex,
    universe: &[VertexId],
    k: usize,
) -> Result<OrderCheck> {
    let n = universe.len();
    if k + 2 > n {
        return Err(Error::InvalidParameter(format!(
            "order check needs k + 2 <= n, got k={k}, n={n}"
        )));
    }
    let missing_k = missing_face_count(x, universe, k);
    let missing_k1 = missing_face_count(x, universe, k + 1);
    let ok = (n - k - 1) as u128 * missing_k as u128 <= (k + 2) as u128 * missing_k1 as u128;
    Ok(OrderCheck {
        missing_k,
        missing_k1,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExpectationCheck,
    OrderCheck,
    Main3,
    Conjecture1Evidence,
    Conjecture2Evidence,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::ExpectationCheck => "expectation-check",
            Mode::OrderCheck => "order-check",
            Mode::Main3 => "main3",
            Mode::Conjecture1Evidence => "conjecture1-evidence",
            Mode::Conjecture2Evidence => "conjecture2-evidence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GnpConfig {
    pub mode: Mode,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub s: usize,
    pub trials: usize,
    pub seed: u64,
    pub face_cap: usize,
}

impl GnpConfig {
    pub fn new(mode: Mode, n: usize, p: f64, k: usize, s: usize, trials: usize, seed: u64) -> Self {
        GnpConfig {
            mode,
            n,
            p,
            k,
            s,
            trials,
            seed,
            face_cap: DEFAULT_FACE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.p > 0.0 && self.p < 1.0) {
            return bad(format!("p must lie in (0, 1), got {}", self.p));
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.k + 2 > self.n {
            return bad(format!("need k + 2 <= n, got k={}, n={}", self.k, self.n));
        }
        match self.mode {
            Mode::Main3 | Mode::Conjecture1Evidence if !(self.k >= self.s && self.s >= 1) => {
                bad(format!(
                    "{} needs k >= s >= 1, got k={}, s={}",
                    self.mode.name(),
                    self.k,
                    self.s
                ))
            }
            Mode::Conjecture2Evidence if self.s != 0 => bad(format!(
                "conjecture2-evidence is the s = 0 case, got s={}",
                self.s
            )),
            _ if self.s > self.k + 1 => {
                bad(format!("need s <= k + 1, got k={}, s={}", self.k, self.s))
            }
            _ => Ok(()),
        }
    }

    /// Highest Betti index reported in the CSV, `k − s + 1`.
    pub fn betti_top(&self) -> usize {
        self.k + 1 - self.s
    }

    fn computes_betti(&self) -> bool {
        matches!(
            self.mode,
            Mode::Main3 | Mode::Conjecture1Evidence | Mode::Conjecture2Evidence
        )
    }

    /// Highest face dimension that must be materialized.
    fn materialized_dim(&self) -> usize {
        let for_counts = self.k + 1;
        if self.computes_betti() {
            for_counts.max(self.betti_top() + 1)
        } else {
            for_counts
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    /// `|X̄(j)|` for `j = 0..=k+1`; empty when skipped.
    pub missing_counts: Vec<u64>,
    /// `b̃_0..=b̃_{k−s+1}` for the modes that compute them.
    pub betti: Option<Vec<usize>>,
    /// `Δ(k)`, taken as 0 when `X(k)` is empty.
    pub delta_k: Option<usize>,
    pub graph_complete: bool,
    pub order_ok: bool,
    pub skipped: bool,
}

impl TrialResult {
    fn skipped(trial: usize, seed: u64) -> Self {
        TrialResult {
            trial,
            seed,
            missing_counts: Vec::new(),
            betti: None,
            delta_k: None,
            graph_complete: false,
            order_ok: true,
            skipped: true,
        }
    }

    pub fn missing(&self, j: usize) -> Option<u64> {
        self.missing_counts.get(j).copied()
    }
}

/// One sample of `N[G(n, p)]`, materialized up to the dimension the mode needs.
pub fn run_trial(config: &GnpConfig, trial: usize) -> Result<TrialResult> {
    let seed = trial_seed(config.seed, trial as u64);
    let g = sample_gnp(config.n, config.p, seed);
    let x = match neighborhood_complex_up_to(&g, Some(config.materialized_dim()), config.face_cap) {
        Ok(x) => x,
        Err(Error::FaceBudget { .. }) => return Ok(TrialResult::skipped(trial, seed)),
        Err(e) => return Err(e),
    };
    let universe = g.vertices();
    let k = config.k;
    let missing_counts: Vec<u64> = (0..=k + 1)
        .map(|j| missing_face_count(&x, universe, j))
        .collect();
    let order = order_inequality_check(&x, universe, k)?;
    let delta_k = match max_weighted_sigma_defect(&x, k) {
        Ok(d) => d,
        Err(Error::NoFaces(_)) => 0,
        Err(e) => return Err(e),
    };
    let betti = if config.computes_betti() {
        Some(betti_numbers(&x, config.betti_top())?)
    } else {
        None
    };
    Ok(TrialResult {
        trial,
        seed,
        graph_complete: missing_counts[1] == 0,
        missing_counts,
        betti,
        delta_k: Some(delta_k),
        order_ok: order.ok,
        skipped: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(count)`.
    pub std_err: f64,
    pub count: usize,
}

impl Moments {
    pub fn of(values: &[f64]) -> Option<Self> {
        let count = values.len();
        if count == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let var = if count > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        Some(Moments {
            mean,
            std_err: (var / count as f64).sqrt(),
            count,
        })
    }

    /// `(mean − expected) / std_err`; `None` when the standard error is zero
    /// and the mean differs from `expected`.
    pub fn z_score(&self, expected: f64) -> Option<f64> {
        let diff = self.mean - expected;
        if self.std_err > 0.0 {
            Some(diff / self.std_err)
        } else if diff.abs() <= 1e-12 * expected.abs().max(1.0) {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Statistical acceptance conventions used for fixed-`n` experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub max_abs_z: f64,
    pub min_vanishing_fraction: f64,
    pub min_complete_fraction: f64,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    max_abs_z: 3.0,
    min_vanishing_fraction: 0.9,
    min_complete_fraction: 0.9,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdicts {
    /// `|z| ≤ 3` for the mean of `|X̄(k)|` (expectation-check).
    pub expectation_ok: Option<bool>,
    /// The counting inequality held in every completed trial.
    pub order_ok: bool,
    /// Joint vanishing fraction at least 0.9 (main3).
    pub vanishing_ok: Option<bool>,
    /// Complete-`G_X` fraction at least 0.9 (main3).
    pub complete_ok: Option<bool>,
    /// `mean Δ(k) ≤ (k+2) E|X̄(k+1)| + 3 SE`.
    pub markov_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub config: GnpConfig,
    pub completed: usize,
    pub skipped: usize,
    pub missing_k: Option<Moments>,
    pub expected_missing_k: f64,
    pub z_missing_k: Option<f64>,
    pub missing_k1: Option<Moments>,
    pub expected_missing_k1: f64,
    pub z_missing_k1: Option<f64>,
    pub order_pass: usize,
    pub order_fail: usize,
    pub complete_fraction: Option<f64>,
    pub delta_k: Option<Moments>,
    /// `(k+2) E|X̄(k+1)|`.
    pub delta_k_markov_bound: f64,
    /// Trials with `Δ(k) < n`.
    pub delta_below_n_fraction: Option<f64>,
    /// Trials violating `Δ(k) ≤ (k+2) |X̄(k+1)|` (must be zero).
    pub delta_chain_violations: usize,
    /// Fraction of trials with `b̃_j = 0`, for `j = 0..=k−s+1`.
    pub betti_vanishing: Vec<f64>,
    /// Fraction of trials with every reported `b̃_j = 0`.
    pub joint_vanishing: Option<f64>,
    pub thresholds: Thresholds,
    pub verdicts: Verdicts,
    pub notes: Vec<String>,
    pub wall_clock_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub trials: Vec<TrialResult>,
    pub summary: Summary,
}

pub fn run_experiment(config: &GnpConfig, exec: Execution) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let trials = map_indexed(config.trials, exec, |i| run_trial(config, i))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(config, &trials, start.elapsed().as_secs_f64());
    Ok(ExperimentReport { trials, summary })
}

fn fraction(hits: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| hits as f64 / total as f64)
}

/// Aggregates over completed trials, in trial order.
pub fn summarize(config: &GnpConfig, trials: &[TrialResult], wall_clock_secs: f64) -> Summary {
    let done: Vec<&TrialResult> = trials.iter().filter(|t| !t.skipped).collect();
    let k = config.k;
    let column = |j: usize| -> Vec<f64> {
        done.iter()
            .filter_map(|t| t.missing(j))
            .map(|c| c as f64)
            .collect()
    };
    let missing_k = Moments::of(&column(k));
    let missing_k1 = Moments::of(&column(k + 1));
    let expected_missing_k = expected_missing_faces(config.n, config.p, k);
    let expected_missing_k1 = expected_missing_faces(config.n, config.p, k + 1);
    let z_missing_k = missing_k.and_then(|m| m.z_score(expected_missing_k));
    let z_missing_k1 = missing_k1.and_then(|m| m.z_score(expected_missing_k1));

    let order_pass = done.iter().filter(|t| t.order_ok).count();
    let complete_fraction = fraction(done.iter().filter(|t| t.graph_complete).count(), done.len());

    let deltas: Vec<f64> = done
        .iter()
        .filter_map(|t| t.delta_k)
        .map(|d| d as f64)
        .collect();
    let delta_k = Moments::of(&deltas);
    let delta_k_markov_bound = (k + 2) as f64 * expected_missing_k1;
    let delta_below_n_fraction = fraction(
        done.iter()
            .filter(|t| t.delta_k.is_some_and(|d| d < config.n))
            .count(),
        done.len(),
    );
    let delta_chain_violations = done
        .iter()
        .filter(|t| match (t.delta_k, t.missing(k + 1)) {
            (Some(d), Some(m)) => d as u64 > (k + 2) as u64 * m,
            _ => false,
        })
        .count();

    let with_betti: Vec<&Vec<usize>> = done.iter().filter_map(|t| t.betti.as_ref()).collect();
    let betti_vanishing = if with_betti.is_empty() {
        Vec::new()
    } else {
        (0..=config.betti_top())
            .map(|j| {
                with_betti.iter().filter(|b| b[j] == 0).count() as f64 / with_betti.len() as f64
            })
            .collect()
    };
    let joint_vanishing = fraction(
        with_betti
            .iter()
            .filter(|b| b.iter().all(|&x| x == 0))
            .count(),
        with_betti.len(),
    );

    let is = |m: Mode| config.mode == m;
    let verdicts = Verdicts {
        expectation_ok: is(Mode::ExpectationCheck)
            .then(|| z_missing_k.is_some_and(|z| z.abs() <= THRESHOLDS.max_abs_z)),
        order_ok: order_pass == done.len(),
        vanishing_ok: is(Mode::Main3)
            .then(|| joint_vanishing.is_some_and(|f| f >= THRESHOLDS.min_vanishing_fraction)),
        complete_ok: is(Mode::Main3)
            .then(|| complete_fraction.is_some_and(|f| f >= THRESHOLDS.min_complete_fraction)),
        markov_ok: delta_k
            .map(|m| m.mean <= delta_k_markov_bound + THRESHOLDS.max_abs_z * m.std_err),
    };

    let mut notes = vec![
        "Betti numbers are over the reals; integer torsion is not examined.".to_string(),
        "Fractions and z-scores are fixed-n proxies for almost-always statements.".to_string(),
    ];
    match config.mode {
        Mode::Conjecture1Evidence => notes.push(
            "Evidence only: connectivity is tracked through reduced Betti numbers; the fundamental group is not examined."
                .into(),
        ),
        Mode::Conjecture2Evidence => {
            notes.push(format!("Evidence only: b̃_{} vanishing fraction, no pass threshold.", k + 1))
        }
        _ => {}
    }

    Summary {
        config: config.clone(),
        completed: done.len(),
        skipped: trials.len() - done.len(),
        missing_k,
        expected_missing_k,
        z_missing_k,
        missing_k1,
        expected_missing_k1,
        z_missing_k1,
        order_pass,
        order_fail: done.len() - order_pass,
        complete_fraction,
        delta_k,
        delta_k_markov_bound,
        delta_below_n_fraction,
        delta_chain_violations,
        betti_vanishing,
        joint_vanishing,
        thresholds: THRESHOLDS,
        verdicts,
        notes,
        wall_clock_secs,
    }
}

/// Per-trial CSV: `trial, seed, n, p, k, s, missing_k, missing_k1,
/// betti_0..betti_{k−s+1}, delta_k, graph_complete, order_ok, skipped`.
pub fn trials_csv(config: &GnpConfig, trials: &[TrialResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "trial",
        "seed",
        "n",
        "p",
        "k",
        "s",
        "missing_k",
        "missing_k1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..=config.betti_top()).map(|j| format!("betti_{j}")));
    header.extend(
        ["delta_k", "graph_complete", "order_ok", "skipped"]
            .iter()
            .map(|s| s.to_string()),
    );
    w.write_record(&header)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for t in trials {
        let mut row = vec![
            t.trial.to_string(),
            t.seed.to_string(),
            config.n.to_string(),
            config.p.to_string(),
            config.k.to_string(),
            config.s.to_string(),
            opt(t.missing(config.k).map(|c| c.to_string())),
            opt(t.missing(config.k + 1).map(|c| c.to_string())),
        ];
        for j in 0..=config.betti_top() {
            row.push(opt(t.betti.as_ref().map(|b| b[j].to_string())));
        }
        row.push(opt(t.delta_k.map(|d| d.to_string())));
        if t.skipped {
            row.extend([String::new(), String::new()]);
        } else {
            row.push(t.graph_complete.to_string());
            row.push(t.order_ok.to_string());
        }
        row.push(t.skipped.to_string());
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

pub fn summary_json(summary: &Summary) -> String {
    serde_json::to_string_pretty(summary).expect("summary fields serialize")
}
