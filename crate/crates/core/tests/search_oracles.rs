//! Exhaustive searches against closed forms, frozen counts, and each other.

use xfam_core::cert::ExtremalClass;
use xfam_core::compress::upset;
use xfam_core::family::{canonicalize_seq, Family, FamilySeq, GroundSize, Subset};
use xfam_core::formulas::{ak_m, katona_families, katona_m, main_bound};
use xfam_core::gen::{random_family, rng_for};
use xfam_core::oracle::{
    brute_cross_pair_uniform, brute_m, brute_m_uniform, brute_multi, enumerate_monotone,
    verify_theorem,
};
use xfam_core::Error;

fn gs(n: u8) -> GroundSize {
    GroundSize::new(n).expect("valid ground size")
}

#[test]
fn monotone_enumeration_matches_known_counts() {
    // Monotone-family counts including the empty family.
    assert_eq!(enumerate_monotone(gs(2), true, false).unwrap().len(), 6);
    assert_eq!(enumerate_monotone(gs(3), true, false).unwrap().len(), 20);
    assert_eq!(enumerate_monotone(gs(4), true, false).unwrap().len(), 168);
    assert_eq!(enumerate_monotone(gs(3), false, false).unwrap().len(), 19);
}

#[test]
fn monotone_enumeration_caps_without_opt_in() {
    assert!(matches!(
        enumerate_monotone(gs(5), true, false),
        Err(Error::CapExceeded(_))
    ));
    // Opt-in unlocks n = 5: 7581 including empty.
    assert_eq!(enumerate_monotone(gs(5), true, true).unwrap().len(), 7581);
}

#[test]
fn monotone_enumeration_yields_distinct_monotone_families() {
    let fams = enumerate_monotone(gs(4), true, false).unwrap();
    for f in &fams {
        assert!(f.is_monotone());
    }
    let mut sorted = fams.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), fams.len());
}

#[test]
fn single_family_search_agrees_with_closed_form() {
    for n in 1..=6u8 {
        for t in 1..=n {
            let found = brute_m(gs(n), t).unwrap();
            let predicted = katona_m(n as u32, t as u32).unwrap();
            assert_eq!(found.optimum as u128, predicted, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn single_family_witnesses_are_the_threshold_constructions() {
    // At t >= 2 the optimal family is unique up to isomorphism.
    for n in 2..=6u8 {
        for t in 2..=n {
            let found = brute_m(gs(n), t).unwrap();
            assert!(found.census_complete, "n = {n}, t = {t}");
            assert_eq!(
                found.classes.len(),
                1,
                "n = {n}, t = {t}: {} optimal classes",
                found.classes.len()
            );
            let (reference, _) = katona_families(gs(n), t).unwrap();
            let canon = xfam_core::family::canonicalize_family(&reference).unwrap();
            assert_eq!(found.classes[0], canon, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn single_family_t1_has_many_witnesses() {
    // At t = 1 every maximal intersecting family has size 2^(n-1); the
    // census is larger than one class.
    let found = brute_m(gs(4), 1).unwrap();
    assert_eq!(found.optimum, 8);
    assert!(found.classes.len() > 1, "{}", found.classes.len());
    for c in &found.classes {
        assert_eq!(c.len(), 8);
        assert!(c.is_t_intersecting(1));
    }
}

#[test]
fn single_family_search_rejects_bad_params() {
    assert!(brute_m(gs(4), 0).is_err());
    assert!(brute_m(gs(4), 5).is_err());
    assert!(matches!(brute_m(gs(8), 2), Err(Error::CapExceeded(_))));
}

#[test]
fn uniform_search_agrees_with_closed_form() {
    for n in 1..=8u8 {
        for k in 1..=4u8.min(n) {
            for t in 1..k {
                if n as u32 + t as u32 <= 2 * k as u32 {
                    continue;
                }
                let found = brute_m_uniform(gs(n), k, t).unwrap();
                let predicted = ak_m(n as u32, k as u32, t as u32).unwrap();
                assert_eq!(
                    found.optimum as u128, predicted,
                    "n = {n}, k = {k}, t = {t}"
                );
            }
        }
    }
}

#[test]
fn uniform_search_census_flag() {
    // Strict EKR regime (n > 2k): complete census, the star is the only
    // optimal class.
    let found = brute_m_uniform(gs(7), 3, 1).unwrap();
    assert_eq!(found.optimum, 15);
    assert!(found.census_complete);
    assert_eq!(found.classes.len(), 1);
    // Boundary regime n = 2k: still complete, but many optimal classes
    // (one 3-set per complementary pair, chosen coherently).
    let found = brute_m_uniform(gs(6), 3, 1).unwrap();
    assert_eq!(found.optimum, 10);
    assert!(found.census_complete);
    assert_eq!(found.classes.len(), 13);
    // Half-layer instance: 2^35 optimal families; value exact, census
    // explicitly flagged as sampled.
    let found = brute_m_uniform(gs(8), 4, 1).unwrap();
    assert_eq!(found.optimum, 35);
    assert!(!found.census_complete);
    assert!(!found.classes.is_empty());
    for c in &found.classes {
        assert_eq!(c.len(), 35);
        assert!(c.is_t_intersecting(1));
    }
}

#[test]
fn uniform_search_respects_vertex_cap() {
    // C(13,4) = 715 > 500.
    assert!(matches!(
        brute_m_uniform(gs(13), 4, 2),
        Err(Error::CapExceeded(_))
    ));
}

#[test]
fn cross_pair_uniform_frozen_values() {
    // Maximum of |A|+|B| over cross t-intersecting pairs of k-uniform
    // families (both non-empty).
    // (4,2,2): pairs of 2-sets meeting in 2 elements are equal sets; the
    // best is A = B = {X} plus nothing else -> 2.
    assert_eq!(brute_cross_pair_uniform(gs(4), 2, 2).unwrap(), 2);
    // (4,2,1): K' analogue; frozen from a hand count: star at one point on
    // both sides gives 3 + 3 = 6; the lattice search confirms 6.
    assert_eq!(brute_cross_pair_uniform(gs(4), 2, 1).unwrap(), 6);
    // (5,2,1): stars give 4 + 4 = 8.
    assert_eq!(brute_cross_pair_uniform(gs(5), 2, 1).unwrap(), 8);
}

#[test]
fn cross_pair_rejects_oversized_layers() {
    // C(10,5) = 252 > 30.
    assert!(matches!(
        brute_cross_pair_uniform(gs(10), 5, 2),
        Err(Error::CapExceeded(_))
    ));
}

#[test]
fn multi_search_agrees_with_main_bound() {
    for n in 1..=4u8 {
        for t in 1..=n {
            for m in 2..=3u8 {
                let out = brute_multi(gs(n), t, m, false).unwrap();
                let bound = main_bound(n as u32, t as u32, m as u32).unwrap();
                assert_eq!(
                    out.optimum as u128, bound.value,
                    "n = {n}, t = {t}, m = {m}"
                );
            }
        }
    }
}

#[test]
fn multi_search_witness_census_key_cells() {
    // (4,2,2): only the case-(a) tuple achieves 12.
    let out = brute_multi(gs(4), 2, 2, false).unwrap();
    assert_eq!(out.optimum, 12);
    assert_eq!(out.witnesses.len(), 1);
    assert_eq!(out.witnesses[0].class, ExtremalClass::CaseA);
    // (4,2,3): only the case-(b) triple achieves 15.
    let out = brute_multi(gs(4), 2, 3, false).unwrap();
    assert_eq!(out.optimum, 15);
    assert_eq!(out.witnesses.len(), 1);
    assert_eq!(out.witnesses[0].class, ExtremalClass::CaseB);
    // (3,2,3): a tie with two distinct optimal classes.
    let out = brute_multi(gs(3), 2, 3, false).unwrap();
    assert_eq!(out.optimum, 6);
    assert_eq!(out.witnesses.len(), 2);
    let mut labels: Vec<ExtremalClass> = out.witnesses.iter().map(|w| w.class).collect();
    labels.sort_by_key(|c| c.as_str());
    assert_eq!(labels, vec![ExtremalClass::CaseA, ExtremalClass::CaseB]);
}

#[test]
fn multi_search_witnesses_achieve_optimum_and_cross() {
    for (n, t, m) in [(3u8, 2u8, 2u8), (4, 2, 2), (4, 3, 3)] {
        let out = brute_multi(gs(n), t, m, false).unwrap();
        assert!(!out.witnesses.is_empty());
        for w in &out.witnesses {
            assert_eq!(w.seq.norm(), out.optimum, "n = {n}, t = {t}, m = {m}");
            assert!(w.seq.is_pairwise_cross_t_intersecting());
            assert!(!w.seq.any_empty());
            // Census entries are canonical and therefore distinct.
            assert_eq!(canonicalize_seq(&w.seq).unwrap(), w.seq);
        }
    }
}

#[test]
fn multi_search_caps_and_overrides() {
    assert!(matches!(
        brute_multi(gs(5), 2, 2, false),
        Err(Error::CapExceeded(_))
    ));
    assert!(matches!(
        brute_multi(gs(4), 2, 5, false),
        Err(Error::CapExceeded(_))
    ));
    assert!(matches!(
        brute_multi(gs(6), 2, 2, true),
        Err(Error::CapExceeded(_))
    ));
}

#[test]
fn monotone_restriction_soundness() {
    // Replacing each family of a random tuple by its superset closure never
    // decreases the norm and never breaks the cross predicate.
    let mut rng = rng_for(940, 0);
    let mut non_monotone_seen = 0;
    for trial in 0..500 {
        let a = random_family(&mut rng, gs(4), 0.3).unwrap();
        let b = random_family(&mut rng, gs(4), 0.3).unwrap();
        let t = 1 + (trial % 3) as u8;
        let seq = FamilySeq::new(gs(4), t, vec![a, b]).unwrap();
        if !seq.families().iter().all(|f| f.is_monotone()) {
            non_monotone_seen += 1;
        }
        let closed = xfam_core::compress::upset_seq(&seq).unwrap();
        assert!(closed.norm() >= seq.norm(), "trial {trial}");
        if seq.is_pairwise_cross_t_intersecting() {
            assert!(
                closed.is_pairwise_cross_t_intersecting(),
                "trial {trial}: closure broke the cross predicate"
            );
        }
    }
    assert!(non_monotone_seen >= 400, "sampler too tame: {non_monotone_seen}");
}

#[test]
fn theorem_verification_certificate_shape() {
    let cert = verify_theorem(3, 2, 2, 7, false).unwrap();
    assert_eq!((cert.n, cert.t, cert.m), (3, 2, 2));
    assert_eq!(cert.optimum, 5);
    assert!(cert.matched);
    assert!(cert.classes_match);
    assert_eq!(cert.extremal_class, ExtremalClass::CaseA);
    assert_eq!(cert.seed, 7);
    assert_eq!(cert.witnesses.len(), 1);
    cert.recheck().unwrap();
}

#[test]
fn theorem_verification_t1_degenerate_class() {
    let cert = verify_theorem(2, 1, 2, 0, false).unwrap();
    assert!(cert.matched);
    assert_eq!(cert.extremal_class, ExtremalClass::T1Degenerate);
    assert_eq!(cert.optimum, 4);
    cert.recheck().unwrap();
}

#[test]
fn degenerate_smallest_cell() {
    // (1,1,m): each family can only be {{1}}; norm = m.
    for m in 2..=3u8 {
        let out = brute_multi(gs(1), 1, m, false).unwrap();
        assert_eq!(out.optimum, m as u64);
    }
}

#[test]
fn full_ground_set_always_admissible() {
    // The tuple ([n] alone in every slot) is cross for every t <= n, so the
    // optimum is at least m.
    for n in 1..=4u8 {
        for t in 1..=n {
            let top = upset(&Family::new(gs(n), vec![Subset(gs(n).full_mask())]).unwrap()).unwrap();
            let seq = FamilySeq::new(gs(n), t, vec![top.clone(), top]).unwrap();
            assert!(seq.is_pairwise_cross_t_intersecting(), "n = {n}, t = {t}");
            let out = brute_multi(gs(n), t, 2, false).unwrap();
            assert!(out.optimum >= 2, "n = {n}, t = {t}");
        }
    }
}
