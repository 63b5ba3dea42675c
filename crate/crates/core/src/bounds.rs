//! Computable certificates for the eigenvalue and cohomology bounds.
//!
//! Every bound is reported per eigenvalue index together with the computed
//! eigenvalue and the slack `actual − bound`, so tight cases are visible.
//! All inequalities are exact statements; the slack tolerance
//! `1e-8 · max(1, ‖L_k‖_F)` only absorbs eigensolver error.

use serde::Serialize;

use crate::complex::{
    dk_parameter, flag_complex_up_to, max_weighted_sigma_defect, sigma_partition, SimplicialComplex,
};
use crate::error::{Error, Result};
use crate::laplacian::{
    betti_numbers, graph_laplacian, graph_laplacian_plus_j, laplacian_from_boundaries,
};
use crate::linalg::{smallest_subset_sums, sym_eigenvalues, threshold_count, Spectrum};

/// Relative slack tolerance for all eigenvalue inequalities.
pub const SLACK_REL_TOL: f64 = 1e-8;

const EIGEN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub i: usize,
    pub lower_bound: f64,
    pub actual: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub per_index: Vec<BoundRow>,
    /// Amount subtracted from the leading term: `kn + Δ(k)` for the main
    /// bound, `(k+2) · max degree defect` for the subcomplex bound.
    pub correction: f64,
    /// `Δ(k)` or the maximal degree defect.
    pub defect: usize,
    pub vacuous: bool,
    pub scale: f64,
}

impl BoundReport {
    fn vacuous(k: usize, n: usize) -> Self {
        BoundReport {
            k,
            n,
            per_index: Vec::new(),
            correction: 0.0,
            defect: 0,
            vacuous: true,
            scale: 1.0,
        }
    }

    pub fn min_slack(&self) -> Option<f64> {
        self.per_index
            .iter()
            .map(|r| r.slack)
            .min_by(f64::total_cmp)
    }

    /// Every slack is at least `-rel_tol · scale`.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.per_index
            .iter()
            .all(|r| r.slack >= -rel_tol * self.scale)
    }
}

fn spectrum(m: &crate::linalg::SymmetricMatrix) -> Result<Spectrum> {
    sym_eigenvalues(m, EIGEN_TOL)
}

/// Spectrum of `L(G_X) + J`.
pub fn graph_plus_j_spectrum(x: &SimplicialComplex) -> Result<Spectrum> {
    spectrum(&graph_laplacian_plus_j(&x.underlying_graph()))
}

/// `λ_i(L_k(X)) ≥ S_{k+1,i}(L(G_X)+J) − kn − Δ(k)` for `1 ≤ i ≤ f_k(X)`.
pub fn spectral_lower_bounds(x: &SimplicialComplex, k: usize) -> Result<BoundReport> {
    let n = x.n();
    let fk = x.f(k);
    if fk == 0 {
        return Ok(BoundReport::vacuous(k, n));
    }
    let delta = max_weighted_sigma_defect(x, k)?;
    let correction = (k * n + delta) as f64;
    let leading = smallest_subset_sums(&graph_plus_j_spectrum(x)?.eigenvalues, k + 1, fk)?;
    let lk = laplacian_from_boundaries(x, k);
    let actual = spectrum(&lk)?;
    let per_index = leading
        .iter()
        .zip(&actual.eigenvalues)
        .enumerate()
        .map(|(idx, (&s, &lambda))| {
            let lower_bound = s - correction;
            BoundRow {
                i: idx + 1,
                lower_bound,
                actual: lambda,
                slack: lambda - lower_bound,
            }
        })
        .collect();
    Ok(BoundReport {
        k,
        n,
        per_index,
        correction,
        defect: delta,
        vacuous: false,
        scale: lk.frobenius_norm().max(1.0),
    })
}

/// The flag-complex bound `S_{k+1,i}(L(G_X)+J) − kn`, without correction.
pub fn flag_lower_bounds(x: &SimplicialComplex, k: usize) -> Result<Vec<f64>> {
    let fk = x.f(k);
    if fk == 0 {
        return Ok(Vec::new());
    }
    let sums = smallest_subset_sums(&graph_plus_j_spectrum(x)?.eigenvalues, k + 1, fk)?;
    Ok(sums.into_iter().map(|s| s - (k * x.n()) as f64).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohomologyBound {
    pub k: usize,
    /// Number of `(k+1)`-subsets of the spectrum of `L(G_X)+J` summing to at
    /// most `threshold`.
    pub bound: u64,
    pub threshold: f64,
    /// Subsets whose sum is within the numerical cushion of the threshold.
    pub near_ties: u64,
    /// Exact `b̃_k` over the reals.
    pub betti: usize,
    pub vacuous: bool,
}

/// Upper bound on `dim H̃^k(X; R)` from the main eigenvalue bound.
pub fn cohomology_dim_bound(x: &SimplicialComplex, k: usize) -> Result<CohomologyBound> {
    if x.f(k) == 0 {
        return Ok(CohomologyBound {
            k,
            bound: 0,
            threshold: 0.0,
            near_ties: 0,
            betti: 0,
            vacuous: true,
        });
    }
    let delta = max_weighted_sigma_defect(x, k)?;
    let threshold = (k * x.n() + delta) as f64;
    let spec = graph_plus_j_spectrum(x)?;
    let count = threshold_count(&spec.eigenvalues, k + 1, threshold)?;
    let betti = betti_numbers(x, k)?[k];
    Ok(CohomologyBound {
        k,
        bound: count.count,
        threshold,
        near_ties: count.near_ties,
        betti,
        vacuous: false,
    })
}

/// `λ_i(L_k(X')) ≥ λ_i(L_k(X)) − (k+2) max_{σ∈X'(k)} (deg_X(σ) − deg_{X'}(σ))`.
/// The subcomplex relation is verified face by face.
pub fn subcomplex_bounds(
    x: &SimplicialComplex,
    sub: &SimplicialComplex,
    k: usize,
) -> Result<BoundReport> {
    sub.check_subcomplex_of(x)?;
    let fk = sub.f(k);
    if fk == 0 {
        return Ok(BoundReport::vacuous(k, sub.n()));
    }
    let defect = sub
        .faces(k)
        .iter()
        .map(|s| x.degree(s.vertices()) - sub.degree(s.vertices()))
        .max()
        .unwrap_or(0);
    let correction = ((k + 2) * defect) as f64;
    let l_ambient = laplacian_from_boundaries(x, k);
    let l_sub = laplacian_from_boundaries(sub, k);
    let ambient = spectrum(&l_ambient)?;
    let actual = spectrum(&l_sub)?;
    let per_index = (1..=fk)
        .map(|i| {
            let lower_bound = ambient.lambda(i) - correction;
            let lambda = actual.lambda(i);
            BoundRow {
                i,
                lower_bound,
                actual: lambda,
                slack: lambda - lower_bound,
            }
        })
        .collect();
    Ok(BoundReport {
        k,
        n: sub.n(),
        per_index,
        correction,
        defect,
        vacuous: false,
        scale: l_sub
            .frobenius_norm()
            .max(l_ambient.frobenius_norm())
            .max(1.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VanishingOutcome {
    /// The strict inequality holds, so `H̃^k(X; R) = 0`.
    Vanishes,
    Inconclusive,
    /// The `k`-skeleton of `X` is not that of the flag complex of `G_X`.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingVerdict {
    pub k: usize,
    pub outcome: VanishingOutcome,
    pub lambda2: Option<f64>,
    pub threshold: Option<f64>,
    /// `D_k(X, k+1)`.
    pub dk: Option<usize>,
    pub betti: usize,
}

/// Vanishing criterion `λ_2(L(G_X)) > kn/(k+1) + (k+2)/(k+1) · D_k(X, k+1)`
/// for complexes whose `k`-skeleton is flag. A positive verdict is checked
/// against the exact Betti number.
pub fn spectral_vanishing_check(x: &SimplicialComplex, k: usize) -> Result<VanishingVerdict> {
    if k < 1 {
        return Err(Error::InvalidParameter(
            "vanishing criterion needs k >= 1".into(),
        ));
    }
    let betti = betti_numbers(x, k)?[k];
    let g = x.underlying_graph();
    let flag_skeleton = flag_complex_up_to(&g, Some(k));
    if x.skeleton(k) != flag_skeleton || x.n() < 2 {
        return Ok(VanishingVerdict {
            k,
            outcome: VanishingOutcome::Inapplicable,
            lambda2: None,
            threshold: None,
            dk: None,
            betti,
        });
    }
    let n = x.n() as f64;
    let kf = k as f64;
    let lambda2 = spectrum(&graph_laplacian(&g))?.lambda(2);
    let dk = dk_parameter(x, k, k + 1)?;
    let threshold = kf * n / (kf + 1.0) + (kf + 2.0) / (kf + 1.0) * dk as f64;
    let outcome = if lambda2 > threshold + SLACK_REL_TOL * threshold.max(1.0) {
        VanishingOutcome::Vanishes
    } else {
        VanishingOutcome::Inconclusive
    };
    if outcome == VanishingOutcome::Vanishes && betti != 0 {
        return Err(Error::IdentityViolated(format!(
            "vanishing criterion holds at k={k} but b̃_{k} = {betti}"
        )));
    }
    Ok(VanishingVerdict {
        k,
        outcome,
        lambda2: Some(lambda2),
        threshold: Some(threshold),
        dk: Some(dk),
        betti,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagGapComparison {
    pub k: usize,
    /// `Δ(k) = max Σ_j (j+1) |σ[j]|`.
    pub delta: usize,
    /// `(k+2) · max_σ Σ_j |σ[j]|`.
    pub alternative: usize,
    /// `max_σ (deg_Y(σ) − deg_X(σ))` with `Y` the flag complex of `G_X`.
    pub max_flag_degree_gap: usize,
}

/// Compares `Δ(k)` with the correction obtained by going through the flag
/// complex of `G_X`, checking `deg_Y(σ) − deg_X(σ) = Σ_j |σ[j]|` per face.
pub fn flag_gap_comparison(x: &SimplicialComplex, k: usize) -> Result<FlagGapComparison> {
    if x.f(k) == 0 {
        return Err(Error::NoFaces(k));
    }
    let y = flag_complex_up_to(&x.underlying_graph(), Some(k + 1));
    let mut delta = 0;
    let mut max_total = 0;
    let mut max_gap = 0;
    for sigma in x.faces(k) {
        let part = sigma_partition(x, sigma)?;
        let gap = y.degree(sigma.vertices()) - x.degree(sigma.vertices());
        if gap != part.total() {
            return Err(Error::IdentityViolated(format!(
                "deg_Y - deg_X = {gap} but Σ|σ[j]| = {} at {:?}",
                part.total(),
                sigma.vertices()
            )));
        }
        delta = delta.max(part.weighted());
        max_total = max_total.max(part.total());
        max_gap = max_gap.max(gap);
    }
    let alternative = (k + 2) * max_total;
    if delta > alternative {
        return Err(Error::IdentityViolated(format!(
            "Δ({k}) = {delta} exceeds {alternative}"
        )));
    }
    Ok(FlagGapComparison {
        k,
        delta,
        alternative,
        max_flag_degree_gap: max_gap,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::complex::{flag_complex, Graph, Simplex, VertexId};

    fn cx(vertices: &[VertexId], maximal: &[&[VertexId]]) -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(
            vertices.to_vec(),
            maximal.iter().map(|f| Simplex::new(f.to_vec())).collect(),
        )
        .unwrap()
    }

    fn triangle_boundary() -> SimplicialComplex {
        cx(&[1, 2, 3], &[&[1, 2], &[1, 3], &[2, 3]])
    }

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new((0..n).collect(), &edges).unwrap()
    }

    #[test]
    fn lower_bound_tight_on_full_simplex() {
        let full = SimplicialComplex::full_simplex(vec![0, 1, 2, 3]).unwrap();
        let r = spectral_lower_bounds(&full, 1).unwrap();
        assert_eq!(r.per_index.len(), 6);
        for row in &r.per_index {
            assert_abs_diff_eq!(row.lower_bound, 4.0, epsilon = 1e-9);
            assert_abs_diff_eq!(row.actual, 4.0, epsilon = 1e-9);
        }
        assert_eq!(r.defect, 0);
    }

    #[test]
    fn lower_bound_on_triangle_boundary() {
        let r = spectral_lower_bounds(&triangle_boundary(), 1).unwrap();
        assert_eq!(r.defect, 3);
        assert_eq!(r.correction, 6.0);
        let want = [(0.0, 0.0), (0.0, 3.0), (0.0, 3.0)];
        for (row, (b, a)) in r.per_index.iter().zip(want) {
            assert_abs_diff_eq!(row.lower_bound, b, epsilon = 1e-9);
            assert_abs_diff_eq!(row.actual, a, epsilon = 1e-9);
        }
        assert!(r.holds(SLACK_REL_TOL));
        assert!(
            spectral_lower_bounds(&triangle_boundary(), 2)
                .unwrap()
                .vacuous
        );
    }

    #[test]
    fn flag_case_has_no_correction_beyond_kn() {
        let flag = flag_complex(&cycle(5));
        let r = spectral_lower_bounds(&flag, 1).unwrap();
        assert_eq!(r.defect, 0);
        let plain = flag_lower_bounds(&flag, 1).unwrap();
        let got: Vec<f64> = r.per_index.iter().map(|row| row.lower_bound).collect();
        assert_eq!(got, plain);
    }

    #[test]
    fn cohomology_bounds() {
        let c = cohomology_dim_bound(&triangle_boundary(), 1).unwrap();
        assert_eq!((c.bound, c.betti, c.threshold), (3, 1, 6.0));
        let full = SimplicialComplex::full_simplex(vec![0, 1, 2, 3, 4]).unwrap();
        for k in 0..4 {
            let c = cohomology_dim_bound(&full, k).unwrap();
            assert_eq!((c.bound, c.betti), (0, 0));
        }
        let c5 = cohomology_dim_bound(&flag_complex(&cycle(5)), 1).unwrap();
        assert_eq!(c5.betti, 1);
        assert!(c5.bound >= 1);
    }

    #[test]
    fn subcomplex_bound_examples() {
        let full = cx(&[1, 2, 3], &[&[1, 2, 3]]);
        let tb = triangle_boundary();
        let same = subcomplex_bounds(&tb, &tb, 1).unwrap();
        assert!(same.per_index.iter().all(|r| r.slack == 0.0));

        let r = subcomplex_bounds(&full, &tb, 1).unwrap();
        assert_eq!(r.correction, 3.0);
        assert_abs_diff_eq!(r.per_index[0].lower_bound, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.per_index[0].slack, 0.0, epsilon = 1e-9);

        let k4 = flag_complex(&Graph::complete(vec![1, 2, 3, 4]));
        let sub = cx(
            &[1, 2, 3, 4],
            &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3]],
        );
        let r = subcomplex_bounds(&k4, &sub, 1).unwrap();
        assert!(r.holds(SLACK_REL_TOL));
        assert!(r.min_slack().unwrap() > 0.0);

        assert!(matches!(
            subcomplex_bounds(&tb, &full, 1),
            Err(Error::NotSubcomplex(_))
        ));
    }

    #[test]
    fn vanishing_criterion() {
        let k5 = SimplicialComplex::full_simplex(vec![0, 1, 2, 3, 4]).unwrap();
        let v = spectral_vanishing_check(&k5, 1).unwrap();
        assert_eq!(v.outcome, VanishingOutcome::Vanishes);
        assert_abs_diff_eq!(v.lambda2.unwrap(), 5.0, epsilon = 1e-9);
        assert_eq!(v.betti, 0);

        let v = spectral_vanishing_check(&triangle_boundary(), 1).unwrap();
        assert_eq!(v.outcome, VanishingOutcome::Inconclusive);
        assert_eq!(v.dk, Some(1));
        assert_abs_diff_eq!(v.threshold.unwrap(), 3.0, epsilon = 1e-12);
        assert_eq!(v.betti, 1);

        // {1,2,3} is a clique of G_X but not a face.
        let not_flag = cx(&[1, 2, 3, 4], &[&[1, 2], &[1, 3], &[2, 3], &[3, 4]]);
        assert_eq!(
            spectral_vanishing_check(&not_flag, 2).unwrap().outcome,
            VanishingOutcome::Inapplicable
        );
        assert!(spectral_vanishing_check(&k5, 0).is_err());
    }

    #[test]
    fn flag_gap_examples() {
        let r = flag_gap_comparison(&triangle_boundary(), 1).unwrap();
        assert_eq!((r.delta, r.alternative, r.max_flag_degree_gap), (3, 3, 1));
        let r = flag_gap_comparison(&flag_complex(&cycle(6)), 1).unwrap();
        assert_eq!((r.delta, r.alternative), (0, 0));
    }
}
