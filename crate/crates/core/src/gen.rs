//! Seeded random instance generators for property testing and trial runs.
//!
//! All sampling flows through a counter-mode RNG keyed by (seed, stream) so
//! any trial can be replayed in isolation. Generators either return an
//! instance satisfying the requested structural guarantees or fail with a
//! parameter error after a bounded number of attempts — they never return a
//! best-effort instance that silently misses a guarantee.

use crate::compress::{
    generating_family, minus_decomposition, seq_extent, seq_symmetric_extent, shift_closure,
    upset, upset_seq,
};
use crate::error::{Error, Result};
use crate::family::{Family, FamilySeq, GroundSize, Subset};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A replayable RNG for one trial: `seed` selects the run, `stream` the
/// trial within it.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A family in which each non-empty subset of the ground set appears
/// independently with probability `density`. May be empty.
pub fn random_family(rng: &mut ChaCha8Rng, n: GroundSize, density: f64) -> Result<Family> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParams(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let members: Vec<Subset> = (1..n.subset_count() as u32)
        .filter(|_| rng.gen_bool(density))
        .map(Subset)
        .collect();
    Family::new(n, members)
}

/// A random non-empty monotone family (the superset closure of a random
/// family, with one guaranteed seed member).
pub fn random_monotone_family(rng: &mut ChaCha8Rng, n: GroundSize) -> Result<Family> {
    let density = rng.gen_range(0.02..0.3);
    let mut base = random_family(rng, n, density)?;
    if base.is_empty() {
        let mask = rng.gen_range(1..n.subset_count() as u32);
        base = Family::new(n, vec![Subset(mask)])?;
    }
    upset(&base)
}

/// A random non-empty monotone shifted family.
pub fn random_monotone_shifted_family(rng: &mut ChaCha8Rng, n: GroundSize) -> Result<Family> {
    use crate::compress::shift_closure_family;
    shift_closure_family(&random_monotone_family(rng, n)?)
}

/// A random pairwise cross t-intersecting sequence of m non-empty families.
/// Families are built one at a time from the pool of subsets compatible with
/// everything chosen so far; an attempt that empties the pool is discarded.
pub fn random_cross_seq(
    rng: &mut ChaCha8Rng,
    n: GroundSize,
    t: u8,
    m: u8,
    max_attempts: u32,
) -> Result<FamilySeq> {
    if t == 0 || t > n.get() {
        return Err(Error::InvalidParams(format!(
            "need 1 <= t <= n, got t = {t}, n = {}",
            n.get()
        )));
    }
    let total = n.subset_count() as u32;
    for _ in 0..max_attempts {
        let mut families: Vec<Family> = Vec::with_capacity(m as usize);
        let mut feasible = true;
        for _ in 0..m {
            let pool: Vec<u32> = (1..total)
                .filter(|&mask| {
                    mask.count_ones() >= t as u32
                        && families.iter().all(|f| {
                            f.members()
                                .iter()
                                .all(|&a| (a.0 & mask).count_ones() >= t as u32)
                        })
                })
                .collect();
            if pool.is_empty() {
                feasible = false;
                break;
            }
            let density = rng.gen_range(0.05..0.6);
            let mut chosen: Vec<Subset> = pool
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(density))
                .map(Subset)
                .collect();
            if chosen.is_empty() {
                chosen.push(Subset(*pool.choose(rng).expect("pool checked non-empty")));
            }
            families.push(Family::new(n, chosen)?);
        }
        if feasible {
            return FamilySeq::new(n, t, families);
        }
    }
    Err(Error::InvalidParams(format!(
        "no pairwise cross {t}-intersecting sequence found in {max_attempts} attempts \
         (n = {}, m = {m})",
        n.get()
    )))
}

/// A random non-empty monotone shifted pairwise cross t-intersecting
/// sequence (superset closure then shift closure of a random cross
/// sequence; both closures preserve the cross property).
pub fn random_monotone_shifted_cross_seq(
    rng: &mut ChaCha8Rng,
    n: GroundSize,
    t: u8,
    m: u8,
    max_attempts: u32,
) -> Result<FamilySeq> {
    let seq = random_cross_seq(rng, n, t, m, max_attempts)?;
    shift_closure(&upset_seq(&seq)?)
}

/// Like [`random_monotone_shifted_cross_seq`] but with extent exactly `l`:
/// a sequence is drawn on the ground set [l] and re-closed upward over [n],
/// which keeps it shifted and pins every generator inside [l].
pub fn random_seq_with_extent(
    rng: &mut ChaCha8Rng,
    n: GroundSize,
    t: u8,
    m: u8,
    l: u8,
    max_attempts: u32,
) -> Result<FamilySeq> {
    if l < t.max(1) || l > n.get() {
        return Err(Error::InvalidParams(format!(
            "need t <= l <= n, got t = {t}, l = {l}, n = {}",
            n.get()
        )));
    }
    let inner = GroundSize::new(l)?;
    for _ in 0..max_attempts {
        let Ok(small) = random_monotone_shifted_cross_seq(rng, inner, t, m, 8) else {
            continue;
        };
        if seq_extent(&small)? != l {
            continue;
        }
        if l == n.get() {
            return Ok(small);
        }
        let mut families = Vec::with_capacity(m as usize);
        for f in small.families() {
            families.push(upset(&Family::new(n, f.members().to_vec())?)?);
        }
        let seq = FamilySeq::new(n, t, families)?;
        debug_assert!(seq.families().iter().all(crate::compress::is_shifted));
        debug_assert_eq!(seq_extent(&seq)?, l);
        return Ok(seq);
    }
    Err(Error::InvalidParams(format!(
        "no sequence with extent {l} found in {max_attempts} attempts \
         (n = {}, t = {t}, m = {m})",
        n.get()
    )))
}

/// An instance satisfying every hypothesis of the boundary-clearing rewrite:
/// non-empty, monotone, shifted, pairwise cross t-intersecting, extent
/// above t, and no boundary generator of size t.
pub fn random_boundary_clear_instance(
    rng: &mut ChaCha8Rng,
    n: GroundSize,
    t: u8,
    m: u8,
    max_attempts: u32,
) -> Result<FamilySeq> {
    if t >= n.get() {
        return Err(Error::InvalidParams(format!(
            "need t < n for an extent above t, got t = {t}, n = {}",
            n.get()
        )));
    }
    for _ in 0..max_attempts {
        let l = rng.gen_range(t + 1..=n.get());
        let Ok(seq) = random_seq_with_extent(rng, n, t, m, l, 4) else {
            continue;
        };
        let mut clear = true;
        for f in seq.families() {
            let gens = generating_family(f)?;
            if gens
                .family()
                .members()
                .iter()
                .any(|g| g.contains(l) && g.card() == t)
            {
                clear = false;
                break;
            }
        }
        if clear {
            return Ok(seq);
        }
    }
    Err(Error::InvalidParams(format!(
        "no boundary-clear instance found in {max_attempts} attempts \
         (n = {}, t = {t}, m = {m})",
        n.get()
    )))
}

/// An instance satisfying every hypothesis of the push–pull rewrite:
/// non-empty, monotone, shifted, pairwise cross t-intersecting, t > 1,
/// symmetric extent strictly below extent strictly below n, extent parity
/// matching t, and no unstable member with fewer than t elements in [s].
pub fn random_push_pull_instance(
    rng: &mut ChaCha8Rng,
    n: GroundSize,
    t: u8,
    m: u8,
    max_attempts: u32,
) -> Result<FamilySeq> {
    if t < 2 {
        return Err(Error::InvalidParams(format!(
            "the push-pull rewrite needs t > 1, got t = {t}"
        )));
    }
    let viable: Vec<u8> = (t + 2..n.get())
        .filter(|l| (l + t).is_multiple_of(2))
        .collect();
    if viable.is_empty() {
        return Err(Error::InvalidParams(format!(
            "no extent in [t+2, n-1] with matching parity exists for t = {t}, n = {}",
            n.get()
        )));
    }
    for _ in 0..max_attempts {
        let l = *viable.choose(rng).expect("viable checked non-empty");
        let Ok(seq) = random_seq_with_extent(rng, n, t, m, l, 4) else {
            continue;
        };
        let s = seq_symmetric_extent(&seq);
        if s >= l {
            continue;
        }
        let mut low_clear = true;
        for f in seq.families() {
            let d = minus_decomposition(f, s)?;
            if (1..t).any(|i| d.classes.get(&i).is_some_and(|c| !c.is_empty())) {
                low_clear = false;
                break;
            }
        }
        if low_clear {
            return Ok(seq);
        }
    }
    Err(Error::InvalidParams(format!(
        "no push-pull instance found in {max_attempts} attempts \
         (n = {}, t = {t}, m = {m})",
        n.get()
    )))
}
