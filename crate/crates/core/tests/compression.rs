//! Shifting, closures, generating families, extents, exchange stability.

use std::collections::BTreeSet;
use xfam_core::compress::{
    exchange, exchange_subset, extent_report, family_extent, generating_family, is_exchange_stable_on,
    is_shifted, minus_decomposition, seq_extent, seq_symmetric_extent, shift, shift_closure,
    shift_closure_family, symmetric_extent, upset, upset_seq, GeneratingFamily,
};
use xfam_core::family::{Family, FamilySeq, GroundSize, Subset};
use xfam_core::gen::{
    random_cross_seq, random_family, random_monotone_family, random_monotone_shifted_family,
    rng_for,
};
use xfam_core::Error;

fn gs(n: u8) -> GroundSize {
    GroundSize::new(n).expect("valid ground size")
}

fn fam(n: u8, masks: &[u32]) -> Family {
    Family::new(gs(n), masks.iter().copied().map(Subset).collect()).expect("valid family")
}

#[test]
fn shift_moves_unblocked_members() {
    // {2,3} shifts to {1,3} when {1,3} is absent.
    let f = fam(3, &[0b110]);
    let out = shift(&f, 1, 2).unwrap();
    assert_eq!(out.members(), &[Subset(0b101)]);
    // Blocked when {1,3} is already present: both stay.
    let g = fam(3, &[0b110, 0b101]);
    let out = shift(&g, 1, 2).unwrap();
    assert_eq!(out, g);
}

#[test]
fn shift_ignores_members_missing_j_or_containing_i() {
    let f = fam(3, &[0b001, 0b011]);
    assert_eq!(shift(&f, 1, 3).unwrap(), f);
    assert_eq!(shift(&f, 2, 3).unwrap(), f);
}

#[test]
fn shift_rejects_bad_indices() {
    let f = fam(3, &[0b001]);
    assert!(matches!(shift(&f, 2, 2), Err(Error::InvalidParams(_))));
    assert!(shift(&f, 3, 1).is_err());
    assert!(shift(&f, 1, 4).is_err());
}

#[test]
fn shift_preserves_cardinality_randomized() {
    let mut rng = rng_for(910, 0);
    for trial in 0..300 {
        let f = random_family(&mut rng, gs(6), 0.2).unwrap();
        for i in 1..6u8 {
            for j in (i + 1)..=6 {
                let out = shift(&f, i, j).unwrap();
                assert_eq!(out.len(), f.len(), "trial {trial}, i = {i}, j = {j}");
                let mut before: Vec<u8> = f.members().iter().map(|s| s.card()).collect();
                let mut after: Vec<u8> = out.members().iter().map(|s| s.card()).collect();
                before.sort_unstable();
                after.sort_unstable();
                assert_eq!(before, after, "trial {trial}: member sizes preserved");
            }
        }
    }
}

#[test]
fn is_shifted_examples() {
    assert!(is_shifted(&fam(3, &[0b001])));
    assert!(!is_shifted(&fam(3, &[0b010])));
    assert!(is_shifted(&fam(3, &[0b001, 0b010, 0b011])));
    assert!(is_shifted(&Family::empty(gs(3))));
}

#[test]
fn shift_closure_reaches_fixpoint_and_preserves_size() {
    let mut rng = rng_for(911, 0);
    for trial in 0..300 {
        let f = random_family(&mut rng, gs(6), 0.15).unwrap();
        let c = shift_closure_family(&f).unwrap();
        assert!(is_shifted(&c), "trial {trial}");
        assert_eq!(c.len(), f.len(), "trial {trial}");
        assert_eq!(shift_closure_family(&c).unwrap(), c, "trial {trial}");
    }
}

#[test]
fn shift_closure_preserves_cross_predicate() {
    // Randomized at n <= 6: closure of a cross sequence stays cross and
    // keeps every family size.
    let mut produced = 0;
    for trial in 0..400 {
        let mut rng = rng_for(912, trial);
        let Ok(seq) = random_cross_seq(&mut rng, gs(6), 2, 2, 4) else {
            continue;
        };
        produced += 1;
        let closed = shift_closure(&seq).unwrap();
        assert!(
            closed.is_pairwise_cross_t_intersecting(),
            "trial {trial}: {seq:?}"
        );
        for (a, b) in seq.families().iter().zip(closed.families()) {
            assert_eq!(a.len(), b.len(), "trial {trial}");
        }
        assert!(closed.families().iter().all(is_shifted), "trial {trial}");
    }
    assert!(produced >= 100, "only {produced} cross instances generated");
}

#[test]
fn upset_is_superset_closure() {
    let f = fam(3, &[0b001]);
    let up = upset(&f).unwrap();
    assert_eq!(
        up.members(),
        &[Subset(0b001), Subset(0b011), Subset(0b101), Subset(0b111)]
    );
    assert!(up.is_monotone());
    // Closure of the empty family is empty; of {∅} is everything.
    assert!(upset(&Family::empty(gs(3))).unwrap().is_empty());
    let everything = upset(&Family::new(gs(3), vec![Subset(0)]).unwrap()).unwrap();
    assert_eq!(everything.len(), 8);
}

#[test]
fn upset_idempotent_and_monotone_randomized() {
    let mut rng = rng_for(913, 0);
    for trial in 0..200 {
        let f = random_family(&mut rng, gs(6), 0.1).unwrap();
        let up = upset(&f).unwrap();
        assert!(up.is_monotone(), "trial {trial}");
        assert_eq!(upset(&up).unwrap(), up, "trial {trial}");
        for s in f.members() {
            assert!(up.contains(*s), "trial {trial}");
        }
    }
}

#[test]
fn generating_family_round_trips() {
    let mut rng = rng_for(914, 0);
    for trial in 0..200 {
        // upset ∘ generating_family = identity on monotone families.
        let f = random_monotone_family(&mut rng, gs(6)).unwrap();
        let g = generating_family(&f).unwrap();
        assert!(g.family().is_antichain(), "trial {trial}");
        assert_eq!(upset(g.family()).unwrap(), f, "trial {trial}");
        // generating_family ∘ upset = identity on antichains.
        let back = generating_family(&upset(g.family()).unwrap()).unwrap();
        assert_eq!(back.family(), g.family(), "trial {trial}");
    }
}

#[test]
fn generating_family_rejects_empty() {
    assert!(matches!(
        generating_family(&Family::empty(gs(3))),
        Err(Error::EmptyFamily)
    ));
}

#[test]
fn from_antichain_validates() {
    assert!(GeneratingFamily::from_antichain(fam(3, &[0b011, 0b101])).is_ok());
    assert!(GeneratingFamily::from_antichain(fam(3, &[0b001, 0b011])).is_err());
    assert!(GeneratingFamily::from_antichain(Family::empty(gs(3))).is_err());
}

#[test]
fn extent_and_boundary_report() {
    // Gens {1,2}, {1,3}: extent 3, boundary = {{1,3}}, sizes tallied.
    let f = upset(&fam(4, &[0b0011, 0b0101])).unwrap();
    let g = generating_family(&f).unwrap();
    let report = extent_report(&g);
    assert_eq!(report.extent, 3);
    assert_eq!(report.boundary.members(), &[Subset(0b0101)]);
    assert_eq!(report.per_size.get(&2).map(|f| f.len()), Some(1));
    assert_eq!(family_extent(&f).unwrap(), 3);
}

#[test]
fn extent_of_full_upset_is_small() {
    // The whole powerset above {1} has extent 1.
    let f = upset(&fam(5, &[0b00001])).unwrap();
    assert_eq!(family_extent(&f).unwrap(), 1);
    // The family {[n]} has extent n.
    let top = fam(5, &[0b11111]);
    assert_eq!(family_extent(&top).unwrap(), 5);
}

#[test]
fn seq_extent_is_max_over_families() {
    let a = upset(&fam(4, &[0b0001])).unwrap();
    let b = upset(&fam(4, &[0b0110])).unwrap();
    let s = FamilySeq::new(gs(4), 1, vec![a, b]).unwrap();
    assert_eq!(seq_extent(&s).unwrap(), 3);
}

#[test]
fn exchange_subset_swaps_when_applicable() {
    let a = Subset(0b011);
    assert_eq!(exchange_subset(a, 1, 3), Subset(0b110));
    assert_eq!(exchange_subset(a, 3, 1), Subset(0b110));
    assert_eq!(exchange_subset(a, 1, 2), a); // both present
    assert_eq!(exchange_subset(Subset(0b100), 1, 2), Subset(0b100)); // both absent
}

#[test]
fn exchange_is_involution_and_preserves_cardinality() {
    let mut rng = rng_for(915, 0);
    for trial in 0..200 {
        let f = random_family(&mut rng, gs(5), 0.25).unwrap();
        for i in 1..5u8 {
            for j in (i + 1)..=5 {
                let once = exchange(&f, i, j).unwrap();
                let twice = exchange(&once, i, j).unwrap();
                assert_eq!(twice, f, "trial {trial}, i = {i}, j = {j}");
                assert_eq!(once.len(), f.len(), "trial {trial}");
            }
        }
    }
}

#[test]
fn symmetric_extent_examples() {
    // Fully symmetric families are stable through n.
    assert_eq!(symmetric_extent(&Family::empty(gs(4))), 4);
    assert_eq!(symmetric_extent(&fam(4, &[0b1111])), 4);
    let layer = fam(3, &[0b011, 0b101, 0b110]);
    assert_eq!(symmetric_extent(&layer), 3);
    // {⊇{1}} is stable on [1] only: exchanging 1 with 2 moves {1} to {2}.
    let star = upset(&fam(3, &[0b001])).unwrap();
    assert_eq!(symmetric_extent(&star), 1);
    assert!(is_exchange_stable_on(&star, 1));
    assert!(!is_exchange_stable_on(&star, 2));
}

#[test]
fn seq_symmetric_extent_is_min() {
    let star = upset(&fam(4, &[0b0001])).unwrap();
    let everything = upset(&fam(4, &[0b0001, 0b0010, 0b0100, 0b1000])).unwrap();
    let s = FamilySeq::new(gs(4), 1, vec![star, everything]).unwrap();
    assert_eq!(seq_symmetric_extent(&s), 1);
}

#[test]
fn minus_decomposition_partitions() {
    let mut rng = rng_for(916, 0);
    for trial in 0..200 {
        let f = random_monotone_shifted_family(&mut rng, gs(6)).unwrap();
        let s = symmetric_extent(&f);
        if s >= 6 {
            continue;
        }
        let d = minus_decomposition(&f, s).unwrap();
        // Classes are disjoint and union to the unstable part.
        let mut seen: BTreeSet<Subset> = BTreeSet::new();
        let mut total = 0usize;
        for (i, cls) in &d.classes {
            for &a in cls.members() {
                assert_eq!(
                    (a.0 & ((1u32 << s) - 1)).count_ones(),
                    *i as u32,
                    "trial {trial}: class key matches [s]-part size"
                );
                assert!(seen.insert(a), "trial {trial}: classes overlap");
            }
            total += cls.len();
        }
        assert_eq!(total, d.minus.len(), "trial {trial}");
        for &a in d.minus.members() {
            assert!(seen.contains(&a), "trial {trial}");
            assert!(f.contains(a), "trial {trial}: unstable part inside family");
        }
        // Unstable part non-empty when the symmetric extent is below n.
        assert!(!d.minus.is_empty(), "trial {trial}: {f:?} at s = {s}");
    }
}

#[test]
fn minus_membership_matches_definition() {
    let mut rng = rng_for(917, 0);
    for trial in 0..150 {
        let f = random_family(&mut rng, gs(5), 0.3).unwrap();
        for s in 1..5u8 {
            let d = minus_decomposition(&f, s).unwrap();
            for &a in f.members() {
                let unstable = (1..=s).any(|i| {
                    let image = exchange_subset(a, i, s + 1);
                    image != a && !f.contains(image)
                });
                assert_eq!(
                    d.minus.contains(a),
                    unstable,
                    "trial {trial}, s = {s}, member {a:?}"
                );
            }
        }
    }
}

#[test]
fn minus_decomposition_projection_traces() {
    let mut rng = rng_for(918, 0);
    for trial in 0..150 {
        let f = random_monotone_shifted_family(&mut rng, gs(5)).unwrap();
        let s = symmetric_extent(&f);
        if s >= 5 {
            continue;
        }
        let d = minus_decomposition(&f, s).unwrap();
        let tail_mask = !((1u32 << (s + 1)) - 1);
        for (i, cls) in &d.classes {
            if cls.is_empty() {
                continue;
            }
            let expect: BTreeSet<Subset> = cls
                .members()
                .iter()
                .map(|a| Subset(a.0 & tail_mask))
                .collect();
            let got: BTreeSet<Subset> = d.projections[i].members().iter().copied().collect();
            assert_eq!(expect, got, "trial {trial}, class {i}");
        }
    }
}

#[test]
fn minus_decomposition_rejects_bad_s() {
    let f = fam(4, &[0b0011]);
    assert!(minus_decomposition(&f, 0).is_err());
    assert!(minus_decomposition(&f, 4).is_err());
    assert!(minus_decomposition(&f, 3).is_ok());
}

#[test]
fn upset_seq_closes_each_family() {
    let a = fam(3, &[0b001]);
    let b = fam(3, &[0b110]);
    let s = FamilySeq::new(gs(3), 1, vec![a, b]).unwrap();
    let up = upset_seq(&s).unwrap();
    assert!(up.families().iter().all(|f| f.is_monotone()));
    assert_eq!(up.families()[0].len(), 4);
    assert_eq!(up.families()[1].len(), 2);
}

#[test]
fn monotone_shifted_sampler_guarantees_hold() {
    let mut rng = rng_for(919, 0);
    for trial in 0..100 {
        let f = random_monotone_shifted_family(&mut rng, gs(5)).unwrap();
        assert!(!f.is_empty(), "trial {trial}");
        assert!(f.is_monotone(), "trial {trial}");
        assert!(is_shifted(&f), "trial {trial}");
    }
}
