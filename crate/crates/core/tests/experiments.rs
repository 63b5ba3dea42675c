use lapbound::complex::{binomial, neighborhood_complex};
use lapbound::par::Execution;
use lapbound::random::{
    expected_missing_faces, order_inequality_check, run_experiment, sample_gnp, trial_seed,
    GnpConfig, Mode, Moments,
};

#[test]
fn closed_form_expectation_agrees_on_a_grid() {
    let grid = [
        (8, 1, 0.5),
        (9, 0, 0.3),
        (10, 1, 0.4),
        (10, 2, 0.6),
        (11, 1, 0.55),
        (12, 0, 0.2),
        (12, 2, 0.7),
        (13, 1, 0.65),
        (14, 2, 0.75),
        (15, 1, 0.6),
    ];
    let mut agreeing = 0;
    for (i, &(n, k, p)) in grid.iter().enumerate() {
        let cfg = GnpConfig::new(Mode::ExpectationCheck, n, p, k, 1, 10_000, 1000 + i as u64);
        let s = run_experiment(&cfg, Execution::default()).unwrap().summary;
        if s.z_missing_k.is_some_and(|z| z.abs() <= 3.0) {
            agreeing += 1;
        }
    }
    assert!(
        agreeing >= 9,
        "{agreeing}/10 grid points within 3 standard errors"
    );
}

#[test]
fn expectation_by_direct_enumeration() {
    // Independent count: a (k+1)-set is missing iff no vertex outside it is
    // adjacent to all of its members.
    let (n, k, p) = (9usize, 1usize, 0.5);
    let counts: Vec<f64> = (0..4000)
        .map(|t| {
            let g = sample_gnp(n, p, trial_seed(31, t));
            let vs: Vec<u32> = (0..n as u32).collect();
            subsets_of(&vs, k + 1)
                .into_iter()
                .filter(|s| {
                    !vs.iter()
                        .any(|&w| !s.contains(&w) && s.iter().all(|&v| g.has_edge(v, w)))
                })
                .count() as f64
        })
        .collect();
    let m = Moments::of(&counts).unwrap();
    let z = m.z_score(expected_missing_faces(n, p, k)).unwrap();
    assert!(z.abs() <= 3.0, "z = {z}");
    assert_eq!(binomial(n, k + 1), 36);
}

fn subsets_of(vs: &[u32], size: usize) -> Vec<Vec<u32>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &v) in vs.iter().enumerate() {
        for mut rest in subsets_of(&vs[i + 1..], size - 1) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

#[test]
fn counting_inequality_holds_per_sample() {
    for t in 0..500 {
        let g = sample_gnp(12, 0.4, trial_seed(4, t));
        let x = neighborhood_complex(&g);
        for k in 0..=10 {
            let r = order_inequality_check(&x, g.vertices(), k).unwrap();
            assert!(r.ok, "trial {t} k={k}: {r:?}");
        }
    }
}

#[test]
fn dense_samples_have_complete_skeleton_and_bounded_defect() {
    let cfg = GnpConfig::new(Mode::Main3, 30, 0.65, 1, 1, 30, 12);
    let s = run_experiment(&cfg, Execution::default()).unwrap().summary;
    assert!(s.complete_fraction.unwrap() >= 0.9);
    assert_eq!(s.delta_chain_violations, 0);
    assert_eq!(s.verdicts.markov_ok, Some(true));
    assert!(s.delta_below_n_fraction.unwrap() >= 0.9);
}

#[test]
fn conjecture_modes_report_evidence_only() {
    let c1 = GnpConfig::new(Mode::Conjecture1Evidence, 16, 0.7, 2, 1, 4, 3);
    let s = run_experiment(&c1, Execution::default()).unwrap().summary;
    assert_eq!(s.betti_vanishing.len(), 3);
    assert!(s.verdicts.vanishing_ok.is_none());
    assert!(s.notes.iter().any(|n| n.contains("fundamental group")));

    let c2 = GnpConfig::new(Mode::Conjecture2Evidence, 14, 0.7, 1, 0, 4, 3);
    let r = run_experiment(&c2, Execution::default()).unwrap();
    assert!(r
        .trials
        .iter()
        .all(|t| t.betti.as_ref().unwrap().len() == 3));
    assert!(r.summary.verdicts.vanishing_ok.is_none());
}

#[test]
fn reports_are_reproducible() {
    let cfg = GnpConfig::new(Mode::Main3, 12, 0.6, 1, 1, 1, 77);
    let a = run_experiment(&cfg, Execution::Sequential).unwrap();
    let b = run_experiment(&cfg, Execution::Sequential).unwrap();
    assert_eq!(a.trials, b.trials);
    assert_eq!(a.summary.joint_vanishing, b.summary.joint_vanishing);
}
