//! Randomized property suites over small complexes and matrices.
//!
//! Each trial draws from its own ChaCha8 stream keyed by
//! `trial_seed(master, trial)`, so a failing trial is reproducible in
//! isolation. Failures carry the offending complex in the input file format.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    cohomology_dim_bound, flag_gap_comparison, spectral_lower_bounds, subcomplex_bounds,
    SLACK_REL_TOL,
};
use crate::complex::{
    flag_complex, max_weighted_sigma_defect, neighborhood_complex, sigma_partition, ComplexFile,
    Simplex, SimplicialComplex, VertexId,
};
use crate::error::{Error, Result};
use crate::laplacian::{
    betti_from_boundaries, graph_laplacian_plus_j, laplacian_explicit, laplacian_from_boundaries,
    laplacian_nullity, pq_decomposition, spectral_nullity, LaplacianSource,
};
use crate::linalg::{additive_compound, subset_sums_exhaustive, sym_eigenvalues, SymmetricMatrix};
use crate::par::{map_indexed, Execution};
use crate::random::{order_inequality_check, rng_from_seed, sample_gnp_with, trial_seed};

const EIGEN_TOL: f64 = 1e-10;

/// Probability that a candidate face is dropped by the random generators.
const DELETE_PROBABILITY: f64 = 1.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Exact nullity of `L_k` against Betti numbers from boundary ranks.
    Hodge,
    /// Explicit Laplacian formula against `∂∂ᵀ + ∂ᵀ∂`.
    Lemma21,
    /// `L_k = Q − P` and `Q` inside the compound of `L(G_X) + J`.
    Pq,
    /// Compound spectra against subset sums of eigenvalues.
    Compound,
    /// Lower bound from the graph spectrum, plus the cohomology count.
    Main1,
    /// Eigenvalue stability under passing to a subcomplex.
    Main2,
    /// Per-face degree inequality, `∼₁` partner count and `λ_max(P)`.
    Eq3,
    /// Missing-face counting inequality on neighborhood complexes.
    Order,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Hodge,
        Suite::Lemma21,
        Suite::Pq,
        Suite::Compound,
        Suite::Main1,
        Suite::Main2,
        Suite::Eq3,
        Suite::Order,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hodge => "hodge",
            Suite::Lemma21 => "lemma21",
            Suite::Pq => "pq",
            Suite::Compound => "compound",
            Suite::Main1 => "main1",
            Suite::Main2 => "main2",
            Suite::Eq3 => "eq3",
            Suite::Order => "order",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
    /// The complex under test; for subcomplex checks, the ambient one.
    pub complex: Option<ComplexFile>,
    pub subcomplex: Option<ComplexFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    /// Individual assertions evaluated across all trials.
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub max_vertices: usize,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let min = if self.suite == Suite::Order { 2 } else { 1 };
        if self.max_vertices < min {
            return Err(Error::InvalidParameter(format!(
                "suite {} needs --max-vertices >= {min}",
                self.suite
            )));
        }
        if self.suite == Suite::Compound && self.max_vertices > 12 {
            return Err(Error::InvalidParameter(
                "compound suite supports at most 12 rows".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one trial: assertions evaluated and the first failure message.
struct TrialOutcome {
    checks: usize,
    failure: Option<String>,
    complex: Option<ComplexFile>,
    subcomplex: Option<ComplexFile>,
}

/// Accumulates assertions within a trial.
#[derive(Default)]
struct Checker {
    checks: usize,
    failure: Option<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn absorb<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || e.to_string());
                None
            }
        }
    }
}

pub fn run_suite(config: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    config.validate()?;
    let outcomes = map_indexed(config.trials, exec, |i| {
        let seed = trial_seed(config.seed, i as u64);
        (
            seed,
            run_trial(config.suite, &mut rng_from_seed(seed), config.max_vertices),
        )
    });
    let mut checks = 0;
    let mut failures = Vec::new();
    for (trial, (seed, out)) in outcomes.into_iter().enumerate() {
        checks += out.checks;
        if let Some(message) = out.failure {
            failures.push(Failure {
                trial,
                seed,
                message,
                complex: out.complex,
                subcomplex: out.subcomplex,
            });
        }
    }
    Ok(SuiteReport {
        suite: config.suite,
        trials: config.trials,
        checks,
        failures,
    })
}

fn run_trial(suite: Suite, rng: &mut ChaCha8Rng, max_vertices: usize) -> TrialOutcome {
    let mut c = Checker::default();
    let (complex, subcomplex) = match suite {
        Suite::Compound => {
            check_compound(&mut c, &random_symmetric(rng, max_vertices));
            (None, None)
        }
        Suite::Order => {
            let x = check_order(&mut c, rng, max_vertices);
            (Some(x), None)
        }
        Suite::Main2 => {
            let x = random_complex(rng, max_vertices);
            let sub = random_subcomplex(rng, &x);
            check_main2(&mut c, &x, &sub);
            (Some(x), Some(sub))
        }
        _ => {
            let x = random_complex(rng, max_vertices);
            match suite {
                Suite::Hodge => check_hodge(&mut c, &x),
                Suite::Lemma21 => check_lemma21(&mut c, &x),
                Suite::Pq => check_pq(&mut c, &x),
                Suite::Main1 => check_main1(&mut c, &x),
                Suite::Eq3 => check_eq3(&mut c, &x),
                _ => unreachable!("handled above"),
            }
            (Some(x), None)
        }
    };
    let keep = c.failure.is_some();
    TrialOutcome {
        checks: c.checks,
        failure: c.failure,
        complex: complex.filter(|_| keep).map(|x| x.to_file()),
        subcomplex: subcomplex.filter(|_| keep).map(|x| x.to_file()),
    }
}

/// Flag complex of `G(m, 1/2)` with `m` uniform in `1..=max_vertices`, then
/// each face of dimension ≥ 2 is dropped with probability 1/3, in increasing
/// dimension; a face whose facet was dropped is dropped too.
pub fn random_complex(rng: &mut impl Rng, max_vertices: usize) -> SimplicialComplex {
    let m = rng.random_range(1..=max_vertices.max(1));
    let g = sample_gnp_with(m, 0.5, rng);
    thin(rng, &flag_complex(&g), 2)
}

/// Subcomplex of `x` on the same vertices: each face of dimension ≥ 1 is
/// dropped with probability 1/3 together with every face containing it.
pub fn random_subcomplex(rng: &mut impl Rng, x: &SimplicialComplex) -> SimplicialComplex {
    thin(rng, x, 1)
}

fn thin(rng: &mut impl Rng, x: &SimplicialComplex, min_dim: usize) -> SimplicialComplex {
    let mut kept: Vec<Simplex> = Vec::new();
    let mut alive: std::collections::HashSet<Simplex> = std::collections::HashSet::new();
    for d in 0..=x.dim().max(0) as usize {
        for face in x.faces(d) {
            let survives = if d < min_dim {
                true
            } else {
                face.facets().all(|f| alive.contains(&f)) && !rng.random_bool(DELETE_PROBABILITY)
            };
            if survives {
                alive.insert(face.clone());
                kept.push(face.clone());
            }
        }
    }
    SimplicialComplex::from_maximal_faces(x.vertices().to_vec(), kept)
        .expect("faces of x use x's vertices")
}

/// Symmetric matrix of order uniform in `1..=max_order`, entries uniform in
/// `[-5, 5)`.
pub fn random_symmetric(rng: &mut impl Rng, max_order: usize) -> SymmetricMatrix {
    let n = rng.random_range(1..=max_order.clamp(1, 6));
    SymmetricMatrix::from_fn(n, |_, _| rng.random_range(-5.0..5.0))
}

fn dims(x: &SimplicialComplex) -> std::ops::RangeInclusive<usize> {
    0..=x.dim().max(0) as usize
}

fn check_hodge(c: &mut Checker, x: &SimplicialComplex) {
    let top = x.dim().max(0) as usize;
    let betti = betti_from_boundaries(x, top);
    for k in dims(x) {
        let nullity = laplacian_nullity(x, k);
        c.check(nullity == betti[k], || {
            format!(
                "k={k}: dim ker L_k = {nullity} but b̃_k = {} from boundary ranks",
                betti[k]
            )
        });
        if let Some(spectral) = c.absorb(spectral_nullity(x, k)) {
            c.check(spectral == nullity, || {
                format!("k={k}: spectral nullity {spectral} != exact {nullity}")
            });
        }
    }
}

fn check_lemma21(c: &mut Checker, x: &SimplicialComplex) {
    for k in dims(x) {
        let explicit = laplacian_explicit(x, k);
        let product = laplacian_from_boundaries(x, k);
        c.check(explicit == product, || {
            format!("k={k}: explicit Laplacian differs from boundary product")
        });
    }
}

fn check_pq(c: &mut Checker, x: &SimplicialComplex) {
    let position: HashMap<VertexId, usize> = x
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let lj = graph_laplacian_plus_j(&x.underlying_graph());
    for k in dims(x) {
        let Some(bundle) = c.absorb(pq_decomposition(x, k, LaplacianSource::Boundaries)) else {
            return;
        };
        c.check(
            bundle.q.sub(&bundle.p) == laplacian_from_boundaries(x, k),
            || format!("k={k}: Q - P != L_k"),
        );
        let Some(compound) = c.absorb(additive_compound(&lj, k + 1)) else {
            return;
        };
        // Compound rows are k+1-subsets of vertex positions in lexicographic
        // order, which is the face order since positions follow vertex order.
        let subsets = crate::linalg::k_subsets(x.n(), k + 1);
        let row_of: HashMap<Vec<usize>, usize> = subsets
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let rows: Vec<usize> = x
            .faces(k)
            .iter()
            .map(|f| row_of[&f.vertices().iter().map(|v| position[v]).collect::<Vec<_>>()])
            .collect();
        let sub = compound.principal_submatrix(&rows);
        c.check(sub == bundle.q, || {
            format!("k={k}: Q is not the X(k) block of (L(G_X)+J)^[k+1]")
        });
    }
}

fn check_compound(c: &mut Checker, m: &SymmetricMatrix) {
    let Some(eigs) = c.absorb(sym_eigenvalues(m, EIGEN_TOL)) else {
        return;
    };
    let tol = 1e-8 * m.frobenius_norm().max(1.0);
    for k in 1..=m.order() {
        let Some(compound) = c.absorb(additive_compound(m, k)) else {
            return;
        };
        let Some(spec) = c.absorb(sym_eigenvalues(&compound, EIGEN_TOL)) else {
            return;
        };
        let Some(sums) = c.absorb(subset_sums_exhaustive(&eigs.eigenvalues, k)) else {
            return;
        };
        let worst = spec
            .eigenvalues
            .iter()
            .zip(&sums)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.check(spec.len() == sums.len() && worst <= tol, || {
            format!(
                "k={k}: compound spectrum deviates from subset sums by {worst:e} for M = {:?}",
                m.rows()
            )
        });
    }
}

fn check_main1(c: &mut Checker, x: &SimplicialComplex) {
    for k in dims(x) {
        if let Some(r) = c.absorb(spectral_lower_bounds(x, k)) {
            c.check(r.holds(SLACK_REL_TOL), || {
                format!(
                    "k={k}: lower bound exceeds λ_i(L_k); min slack {:?}",
                    r.min_slack()
                )
            });
        }
        if let Some(b) = c.absorb(cohomology_dim_bound(x, k)) {
            c.check(b.bound >= b.betti as u64, || {
                format!(
                    "k={k}: cohomology bound {} below b̃_k = {}",
                    b.bound, b.betti
                )
            });
        }
        c.absorb(flag_gap_comparison(x, k));
    }
}

fn check_main2(c: &mut Checker, x: &SimplicialComplex, sub: &SimplicialComplex) {
    for k in dims(sub) {
        if let Some(r) = c.absorb(subcomplex_bounds(x, sub, k)) {
            c.check(r.holds(SLACK_REL_TOL), || {
                format!(
                    "k={k}: subcomplex bound exceeds λ_i; min slack {:?}",
                    r.min_slack()
                )
            });
        }
    }
}

/// `τ ∈ X(k)` with `|σ ∩ τ| = k`, `σ ∪ τ ∉ X` and `σ △ τ ∈ X`, by direct
/// enumeration of `X(k)`.
fn sim1_partners(x: &SimplicialComplex, sigma: &Simplex) -> usize {
    let k = sigma.len() - 1;
    x.faces(k)
        .iter()
        .filter(|tau| {
            let common = sigma
                .vertices()
                .iter()
                .filter(|v| tau.contains(**v))
                .count();
            if common != k {
                return false;
            }
            let union: Vec<VertexId> = sigma
                .vertices()
                .iter()
                .chain(tau.vertices())
                .copied()
                .collect();
            let diff: Vec<VertexId> = union
                .iter()
                .copied()
                .filter(|&v| !(sigma.contains(v) && tau.contains(v)))
                .collect();
            !x.contains(Simplex::new(union).vertices()) && x.contains(Simplex::new(diff).vertices())
        })
        .count()
}

fn check_eq3(c: &mut Checker, x: &SimplicialComplex) {
    let n = x.n();
    for k in dims(x) {
        for sigma in x.faces(k) {
            let Some(part) = c.absorb(sigma_partition(x, sigma)) else {
                return;
            };
            let deg_sum: usize = sigma.vertices().iter().map(|&v| x.degree(&[v])).sum();
            let rhs = k * n + x.degree(sigma.vertices()) + part.total();
            c.check(deg_sum <= rhs, || {
                format!(
                    "{:?}: vertex degree sum {deg_sum} exceeds kn + deg(σ) + Σ|σ[j]| = {rhs}",
                    sigma.vertices()
                )
            });
            let partners = sim1_partners(x, sigma);
            c.check(partners == part.j_weighted(), || {
                format!(
                    "{:?}: {partners} ∼₁ partners but Σ j|σ[j]| = {}",
                    sigma.vertices(),
                    part.j_weighted()
                )
            });
        }
        let Some(bundle) = c.absorb(pq_decomposition(x, k, LaplacianSource::Explicit)) else {
            return;
        };
        let Some(delta) = c.absorb(max_weighted_sigma_defect(x, k)) else {
            return;
        };
        let Some(spec) = c.absorb(sym_eigenvalues(&bundle.p, EIGEN_TOL)) else {
            return;
        };
        let bound = (k * n + delta) as f64;
        let top = spec.max().unwrap_or(0.0);
        c.check(
            top <= bound + 1e-8 * bundle.p.frobenius_norm().max(1.0),
            || format!("k={k}: λ_max(P) = {top} exceeds kn + Δ(k) = {bound}"),
        );
    }
}

/// Neighborhood complex of `G(m, p)` with `m` uniform in `2..=max_vertices`
/// and `p` uniform in `[0.1, 0.9)`, checked at every `k` with `k + 2 ≤ m`.
fn check_order(c: &mut Checker, rng: &mut impl Rng, max_vertices: usize) -> SimplicialComplex {
    let m = rng.random_range(2..=max_vertices.max(2));
    let p = rng.random_range(0.1..0.9);
    let g = sample_gnp_with(m, p, rng);
    let x = neighborhood_complex(&g);
    for k in 0..=m - 2 {
        if let Some(r) = c.absorb(order_inequality_check(&x, g.vertices(), k)) {
            c.check(r.ok, || {
                format!(
                    "k={k}, n={m}: (n-k-1)·{} > (k+2)·{} on the neighborhood complex",
                    r.missing_k, r.missing_k1
                )
            });
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_produce_valid_complexes() {
        let mut rng = rng_from_seed(11);
        let mut saw_non_flag = false;
        for _ in 0..100 {
            let x = random_complex(&mut rng, 7);
            x.check_invariants().unwrap();
            saw_non_flag |= x != flag_complex(&x.underlying_graph());
            let sub = random_subcomplex(&mut rng, &x);
            sub.check_invariants().unwrap();
            sub.check_subcomplex_of(&x).unwrap();
            assert_eq!(sub.vertices(), x.vertices());
        }
        assert!(saw_non_flag);
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for suite in Suite::ALL {
            let cfg = VerifyConfig {
                suite,
                trials: 10,
                seed: 3,
                max_vertices: 7,
            };
            let r = run_suite(&cfg, Execution::Sequential).unwrap();
            assert!(r.passed(), "{suite}: {:?}", r.failures);
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn sim1_partners_on_hollow_square() {
        // 4-cycle 1-2-3-4 plus the diagonal edge {1,3} and no triangles:
        // {1,2} and {2,3} share 2, their union is a missing triangle, and
        // the symmetric difference {1,3} is an edge.
        let x = SimplicialComplex::from_maximal_faces(
            vec![1, 2, 3, 4],
            vec![
                [1, 2].into(),
                [2, 3].into(),
                [3, 4].into(),
                [1, 4].into(),
                [1, 3].into(),
            ],
        )
        .unwrap();
        assert_eq!(sim1_partners(&x, &Simplex::new(vec![1, 2])), 2);
        let part = sigma_partition(&x, &Simplex::new(vec![1, 2])).unwrap();
        assert_eq!(part.j_weighted(), 2);
    }
}
