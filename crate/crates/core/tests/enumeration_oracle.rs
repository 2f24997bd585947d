use std::collections::BTreeSet;

use noncong_core::canonical::canonical_pair;
use noncong_core::oracle::brute_force_classes;
use noncong_core::pairs::{enumerate_classes, multiplicity_audit};
use noncong_core::Permutation;

#[test]
fn small_counts() {
    let counts: Vec<usize> = (1..=6).map(|mu| enumerate_classes(mu).keys.len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 2, 1, 8]);
}

#[test]
fn key_sets_match_brute_force() {
    for mu in 1..=8 {
        let oracle: BTreeSet<_> = brute_force_classes(mu)
            .values()
            .map(|p| canonical_pair(&p.sigma_s, &p.sigma_r).unwrap())
            .collect();
        let e = enumerate_classes(mu);
        let ours: BTreeSet<_> = e.keys.iter().cloned().collect();
        assert_eq!(ours.len(), e.keys.len(), "duplicate keys at mu={mu}");
        assert_eq!(ours, oracle, "mu={mu}");
    }
}

#[test]
fn emitted_pairs_are_admissible() {
    for mu in 1..=10 {
        let e = enumerate_classes(mu);
        assert!(e.stats.candidates_generated >= e.stats.classes_emitted);
        for p in e.pairs() {
            assert!(p.sigma_s.then(&p.sigma_s).is_identity());
            assert!(p.sigma_r.pow(3).is_identity());
            assert!(p.is_transitive(), "{p:?}");
        }
    }
}

#[test]
fn multiplicity_bounds() {
    for mu in 1..=12 {
        let report = multiplicity_audit(mu);
        for g in &report.graphs {
            assert!(g.max_multiplicity <= g.labelled_edge_bound(), "mu={mu}: {g:?}");
            assert!(g.candidates >= g.classes);
        }
        if mu <= 8 {
            assert!(report.passed(), "mu={mu}");
        }
    }
}

/// A matched double edge lets its two copies swap roles, which the vertex
/// automorphism group does not see.
#[test]
fn vertex_bound_fails_on_matched_double_edge() {
    let report = multiplicity_audit(9);
    let bad: Vec<_> = report.violations().collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].graph.to_string(), "B3 W0 ; (1,2) (1,2) (2,3) (3,3)");
    assert_eq!((bad[0].multiplicity_bound(), bad[0].max_multiplicity), (1, 2));
    let r = Permutation::parse("(1 2 3)(4 5 6)(7 8 9)", None).unwrap();
    let a = Permutation::parse("(1 4)(2 5)(6 9)(7 8)", None).unwrap();
    let b = Permutation::parse("(1 4)(3 6)(5 9)(7 8)", None).unwrap();
    assert_eq!(canonical_pair(&a, &r).unwrap(), canonical_pair(&b, &r).unwrap());
}
