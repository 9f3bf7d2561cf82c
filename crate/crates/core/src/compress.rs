//! Compression machinery: the shifting operator and its closure, up-sets and
//! generating (inclusion-minimal) families, extent bookkeeping, the exchange
//! operator, symmetric extent, and the minus-set decomposition used by the
//! pushing–pulling transform.

use crate::error::{Error, Result};
use crate::family::{interval_mask, Family, FamilySeq, GroundSize, Subset};
use std::collections::BTreeMap;

/// s_{i,j}: replace j by i in every member missing i and containing j, unless
/// the replacement is already present. Requires 1 ≤ i < j ≤ n.
pub fn shift(f: &Family, i: u8, j: u8) -> Result<Family> {
    let n = f.n().get();
    if i < 1 || j > n || i >= j {
        return Err(Error::InvalidParams(format!(
            "shift requires 1 <= i < j <= n, got i={i}, j={j}, n={n}"
        )));
    }
    let mut out = Vec::with_capacity(f.len());
    for &a in f.members() {
        if a.contains(j) && !a.contains(i) {
            let b = a.without(j).with(i);
            if f.contains(b) {
                out.push(a);
            } else {
                out.push(b);
            }
        } else {
            out.push(a);
        }
    }
    let shifted = Family::new(f.n(), out)?;
    debug_assert_eq!(shifted.len(), f.len(), "shift must preserve cardinality");
    Ok(shifted)
}

/// True when every admissible s_{i,j} fixes the family.
pub fn is_shifted(f: &Family) -> bool {
    let n = f.n().get();
    for &a in f.members() {
        for j in 2..=n {
            if !a.contains(j) {
                continue;
            }
            for i in 1..j {
                if !a.contains(i) && !f.contains(a.without(j).with(i)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Repeated lexicographic (i, j) sweeps until a full sweep changes nothing.
pub fn shift_closure_family(f: &Family) -> Result<Family> {
    let n = f.n().get();
    let mut cur = f.clone();
    loop {
        let mut changed = false;
        for i in 1..n {
            for j in (i + 1)..=n {
                let next = shift(&cur, i, j)?;
                if next != cur {
                    changed = true;
                    cur = next;
                }
            }
        }
        if !changed {
            return Ok(cur);
        }
    }
}

/// Shift closure applied to every family of the sequence with the same
/// deterministic sweep schedule.
pub fn shift_closure(s: &FamilySeq) -> Result<FamilySeq> {
    let families = s
        .families()
        .iter()
        .map(shift_closure_family)
        .collect::<Result<Vec<_>>>()?;
    s.with_families(families)
}

/// Up-closure ⟨F⟩: all supersets (within [n]) of members of F.
pub fn upset(f: &Family) -> Result<Family> {
    let n = f.n();
    let size = n.subset_count();
    let mut marked = vec![0u64; size.div_ceil(64)];
    let mark = |v: &mut Vec<u64>, m: usize| v[m / 64] |= 1 << (m % 64);
    let test = |v: &[u64], m: usize| v[m / 64] >> (m % 64) & 1 == 1;
    for &a in f.members() {
        mark(&mut marked, a.0 as usize);
    }
    for m in 0..size {
        if !test(&marked, m) {
            continue;
        }
        let mut absent = n.full_mask() as usize & !m;
        while absent != 0 {
            let bit = absent & absent.wrapping_neg();
            mark(&mut marked, m | bit);
            absent &= absent - 1;
        }
    }
    let mut members = Vec::new();
    for m in 0..size {
        if test(&marked, m) {
            members.push(Subset(m as u32));
        }
    }
    Family::new(n, members)
}

/// Up-closure of every family in the sequence.
pub fn upset_seq(s: &FamilySeq) -> Result<FamilySeq> {
    let families = s
        .families()
        .iter()
        .map(upset)
        .collect::<Result<Vec<_>>>()?;
    s.with_families(families)
}

/// An antichain acting as the set of inclusion-minimal members of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingFamily {
    base: Family,
}

impl GeneratingFamily {
    /// Wraps an antichain directly.
    pub fn from_antichain(f: Family) -> Result<GeneratingFamily> {
        if f.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if !f.is_antichain() {
            return Err(Error::InvalidParams(
                "generating family must be an antichain".into(),
            ));
        }
        Ok(GeneratingFamily { base: f })
    }

    pub fn family(&self) -> &Family {
        &self.base
    }

    pub fn n(&self) -> GroundSize {
        self.base.n()
    }
}

/// Inclusion-minimal members of a non-empty family.
pub fn generating_family(f: &Family) -> Result<GeneratingFamily> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut minimal = Vec::new();
    'outer: for &a in f.members() {
        for &b in f.members() {
            if b != a && b.is_subset_of(a) {
                continue 'outer;
            }
        }
        minimal.push(a);
    }
    let base = Family::new(f.n(), minimal)?;
    debug_assert!(base.is_antichain());
    Ok(GeneratingFamily { base })
}

/// Extent and the boundary structure of a generating family: the largest
/// element ℓ appearing in any generator, the generators whose largest element
/// is exactly ℓ, and those boundary generators bucketed by size.
#[derive(Clone, Debug)]
pub struct ExtentReport {
    pub extent: u8,
    pub boundary: Family,
    pub per_size: BTreeMap<u8, Family>,
}

pub fn extent_report(g: &GeneratingFamily) -> ExtentReport {
    let extent = g
        .family()
        .members()
        .iter()
        .map(|s| s.max_elem())
        .max()
        .unwrap_or(0);
    let boundary_members: Vec<Subset> = g
        .family()
        .members()
        .iter()
        .copied()
        .filter(|s| s.max_elem() == extent)
        .collect();
    let boundary =
        Family::new(g.n(), boundary_members).expect("boundary members already validated");
    let mut per_size: BTreeMap<u8, Family> = BTreeMap::new();
    for &b in boundary.members() {
        per_size
            .entry(b.card())
            .and_modify(|fam| {
                let mut members = fam.members().to_vec();
                members.push(b);
                *fam = Family::new(g.n(), members).expect("validated members");
            })
            .or_insert_with(|| Family::new(g.n(), vec![b]).expect("validated member"));
    }
    ExtentReport {
        extent,
        boundary,
        per_size,
    }
}

/// Extent of one (not necessarily monotone) family via its minimal members.
pub fn family_extent(f: &Family) -> Result<u8> {
    Ok(extent_report(&generating_family(f)?).extent)
}

/// Largest extent over the sequence.
pub fn seq_extent(s: &FamilySeq) -> Result<u8> {
    let mut best = 0;
    for f in s.families() {
        best = best.max(family_extent(f)?);
    }
    Ok(best)
}

/// A_{i,j}: swap membership of i and j whenever exactly one of them is
/// present. Applied member-wise as a set image. Requires i ≠ j.
pub fn exchange(f: &Family, i: u8, j: u8) -> Result<Family> {
    let n = f.n().get();
    if i == j {
        return Err(Error::InvalidParams(format!(
            "exchange requires i != j, got i = j = {i}"
        )));
    }
    if i < 1 || i > n || j < 1 || j > n {
        return Err(Error::InvalidParams(format!(
            "exchange indices must lie in [1,{n}], got i={i}, j={j}"
        )));
    }
    let pair = Subset::singleton(i).union(Subset::singleton(j));
    let mapped: Vec<Subset> = f
        .members()
        .iter()
        .map(|&a| {
            if a.inter(pair).card() == 1 {
                Subset(a.0 ^ pair.0)
            } else {
                a
            }
        })
        .collect();
    let out = Family::new(f.n(), mapped)?;
    debug_assert_eq!(out.len(), f.len(), "exchange is a bijection on subsets");
    Ok(out)
}

pub fn exchange_subset(a: Subset, i: u8, j: u8) -> Subset {
    let pair = Subset::singleton(i).union(Subset::singleton(j));
    if a.inter(pair).card() == 1 {
        Subset(a.0 ^ pair.0)
    } else {
        a
    }
}

/// Stable under every exchange with both indices in [s].
pub fn is_exchange_stable_on(f: &Family, s: u8) -> bool {
    for i in 1..=s {
        for j in (i + 1)..=s {
            for &a in f.members() {
                let b = exchange_subset(a, i, j);
                if b != a && !f.contains(b) {
                    return false;
                }
            }
        }
    }
    true
}

/// Largest s ≤ n such that the family is exchange stable on [s]. Always at
/// least 1; n means fully symmetric.
pub fn symmetric_extent(f: &Family) -> u8 {
    let n = f.n().get();
    let mut s = 1;
    'grow: while s < n {
        let next = s + 1;
        for i in 1..next {
            for &a in f.members() {
                let b = exchange_subset(a, i, next);
                if b != a && !f.contains(b) {
                    break 'grow;
                }
            }
        }
        s = next;
    }
    s
}

/// Smallest symmetric extent over the sequence.
pub fn seq_symmetric_extent(s: &FamilySeq) -> u8 {
    s.families()
        .iter()
        .map(symmetric_extent)
        .min()
        .expect("sequence has at least two families")
}

/// The members that lose membership under some exchange into position s+1,
/// partitioned by how much of [s] they occupy, together with their traces on
/// [s+2, n].
#[derive(Clone, Debug)]
pub struct MinusDecomposition {
    pub s: u8,
    /// All members A with A_{i,s+1} ∉ F for some i ∈ [s].
    pub minus: Family,
    /// minus, keyed by |A ∩ [s]|.
    pub classes: BTreeMap<u8, Family>,
    /// For each class, the set of traces A ∩ [s+2, n].
    pub projections: BTreeMap<u8, Family>,
}

pub fn minus_decomposition(f: &Family, s: u8) -> Result<MinusDecomposition> {
    let n = f.n().get();
    if s < 1 || s >= n {
        return Err(Error::InvalidParams(format!(
            "minus decomposition requires 1 <= s < n, got s={s}, n={n}"
        )));
    }
    let head = Subset(interval_mask(1, s));
    let tail = Subset(interval_mask(s + 2, n));
    let mut minus_members = Vec::new();
    for &a in f.members() {
        let mut escapes = false;
        for i in 1..=s {
            let b = exchange_subset(a, i, s + 1);
            if b != a && !f.contains(b) {
                escapes = true;
                break;
            }
        }
        if escapes {
            minus_members.push(a);
        }
    }
    let minus = Family::new(f.n(), minus_members)?;
    let mut classes: BTreeMap<u8, Vec<Subset>> = BTreeMap::new();
    for &a in minus.members() {
        classes.entry(a.inter(head).card()).or_default().push(a);
    }
    let mut class_families = BTreeMap::new();
    let mut projections = BTreeMap::new();
    for (i, members) in classes {
        let fam = Family::new(f.n(), members.clone())?;
        let proj = Family::new(f.n(), members.iter().map(|a| a.inter(tail)).collect())?;
        class_families.insert(i, fam);
        projections.insert(i, proj);
    }
    Ok(MinusDecomposition {
        s,
        minus,
        classes: class_families,
        projections,
    })
}
