//! Ground sets, subsets-as-bitmasks, families, and family sequences.
//!
//! Elements are numbered 1..=n; element `e` occupies bit `e-1` of a mask.
//! A `Family` keeps its members strictly ascending by mask value, which makes
//! equality, hashing, and membership queries canonical for free.

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported ground-set size for explicit families.
pub const MAX_GROUND: u8 = 20;
/// Largest ground-set size for which canonicalization sweeps all permutations.
pub const CANON_CAP: u8 = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSize(u8);

impl GroundSize {
    pub fn new(n: u8) -> Result<GroundSize> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(GroundSize(n))
        } else {
            Err(Error::BadGroundSize { n, max: MAX_GROUND })
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Mask of the whole ground set [n].
    pub fn full_mask(self) -> u32 {
        (1u32 << self.0) - 1
    }

    pub fn subset_count(self) -> usize {
        1usize << self.0
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of the ground set, as a bitmask.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_elems(elems: &[u8]) -> Subset {
        let mut mask = 0u32;
        for &e in elems {
            debug_assert!(e >= 1);
            mask |= 1 << (e - 1);
        }
        Subset(mask)
    }

    pub fn singleton(e: u8) -> Subset {
        debug_assert!(e >= 1);
        Subset(1 << (e - 1))
    }

    /// Number of elements.
    pub fn card(self) -> u8 {
        self.0.count_ones() as u8
    }

    pub fn contains(self, e: u8) -> bool {
        e >= 1 && (self.0 >> (e - 1)) & 1 == 1
    }

    pub fn with(self, e: u8) -> Subset {
        Subset(self.0 | (1 << (e - 1)))
    }

    pub fn without(self, e: u8) -> Subset {
        Subset(self.0 & !(1 << (e - 1)))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn inter(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn diff(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_elem(self) -> u8 {
        (32 - self.0.leading_zeros()) as u8
    }

    pub fn elems(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.card() as usize);
        let mut m = self.0;
        while m != 0 {
            let b = m.trailing_zeros() as u8;
            out.push(b + 1);
            m &= m - 1;
        }
        out
    }

    pub fn fits(self, n: GroundSize) -> bool {
        self.0 & !n.full_mask() == 0
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, e) in self.elems().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// |a ∩ b|.
pub fn intersect_size(a: Subset, b: Subset) -> u8 {
    (a.0 & b.0).count_ones() as u8
}

/// Mask of the interval [lo, hi] (1-based, inclusive); empty when lo > hi.
pub fn interval_mask(lo: u8, hi: u8) -> u32 {
    if lo > hi {
        0
    } else {
        let upper = (1u64 << hi) - 1;
        let lower = (1u64 << (lo - 1)) - 1;
        (upper & !lower) as u32
    }
}

/// Which slice of a family to take.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SliceKind {
    /// All members of size k.
    Uniform(u8),
    /// Members containing x, kept as-is.
    Star(u8),
    /// Members containing x, with x removed.
    Link(u8),
    /// Members avoiding x.
    Bar(u8),
}

/// A finite family of subsets of [n]; members strictly ascending by mask.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family {
    n: GroundSize,
    members: Vec<Subset>,
}

impl Family {
    /// Normalizes (sorts, dedups) and validates that members fit in [n].
    pub fn new(n: GroundSize, mut members: Vec<Subset>) -> Result<Family> {
        for &s in &members {
            if !s.fits(n) {
                return Err(Error::MaskOutOfRange { mask: s.0, n: n.get() });
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, members })
    }

    pub fn empty(n: GroundSize) -> Family {
        Family { n, members: Vec::new() }
    }

    pub fn n(&self) -> GroundSize {
        self.n
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Every ordered pair of members (including a member with itself)
    /// intersects in at least t elements. Equivalently: every member has at
    /// least t elements and every unordered pair meets in at least t.
    pub fn is_t_intersecting(&self, t: u8) -> bool {
        for (i, &a) in self.members.iter().enumerate() {
            if a.card() < t {
                return false;
            }
            for &b in &self.members[i + 1..] {
                if intersect_size(a, b) < t {
                    return false;
                }
            }
        }
        true
    }

    /// Closed under supersets within [n].
    pub fn is_monotone(&self) -> bool {
        for &a in &self.members {
            let missing = self.n.full_mask() & !a.0;
            let mut m = missing;
            while m != 0 {
                let bit = m & m.wrapping_neg();
                if !self.contains(Subset(a.0 | bit)) {
                    return false;
                }
                m &= m - 1;
            }
        }
        true
    }

    /// No member contains another.
    pub fn is_antichain(&self) -> bool {
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn slice(&self, kind: SliceKind) -> Result<Family> {
        let check_elem = |x: u8| -> Result<()> {
            if x >= 1 && x <= self.n.get() {
                Ok(())
            } else {
                Err(Error::ElementOutOfRange { elem: x, n: self.n.get() })
            }
        };
        let members = match kind {
            SliceKind::Uniform(k) => self
                .members
                .iter()
                .copied()
                .filter(|a| a.card() == k)
                .collect(),
            SliceKind::Star(x) => {
                check_elem(x)?;
                self.members
                    .iter()
                    .copied()
                    .filter(|a| a.contains(x))
                    .collect()
            }
            SliceKind::Link(x) => {
                check_elem(x)?;
                self.members
                    .iter()
                    .copied()
                    .filter(|a| a.contains(x))
                    .map(|a| a.without(x))
                    .collect()
            }
            SliceKind::Bar(x) => {
                check_elem(x)?;
                self.members
                    .iter()
                    .copied()
                    .filter(|a| !a.contains(x))
                    .collect()
            }
        };
        Family::new(self.n, members)
    }

    /// Text form: one subset per line, elements comma-separated, empty set "-".
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &a in &self.members {
            if a.is_empty() {
                out.push('-');
            } else {
                let elems = a.elems();
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&e.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(n: GroundSize, text: &str) -> Result<Family> {
        let mut members = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line == "-" {
                members.push(Subset::EMPTY);
                continue;
            }
            let mut mask = Subset::EMPTY;
            for tok in line.split(',') {
                let tok = tok.trim();
                let e: u8 = tok.parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad element {tok:?}", lineno + 1))
                })?;
                if e < 1 || e > n.get() {
                    return Err(Error::ElementOutOfRange { elem: e, n: n.get() });
                }
                mask = mask.with(e);
            }
            members.push(mask);
        }
        Family::new(n, members)
    }

    /// Members as lowercase hex strings, e.g. "0x3".
    pub fn hex_members(&self) -> Vec<String> {
        self.members.iter().map(|s| format!("{:#x}", s.0)).collect()
    }

    pub fn from_hex_members(n: GroundSize, hex: &[String]) -> Result<Family> {
        let mut members = Vec::with_capacity(hex.len());
        for h in hex {
            let digits = h
                .strip_prefix("0x")
                .or_else(|| h.strip_prefix("0X"))
                .ok_or_else(|| Error::Parse(format!("mask {h:?} missing 0x prefix")))?;
            let mask = u32::from_str_radix(digits, 16)
                .map_err(|_| Error::Parse(format!("bad mask {h:?}")))?;
            members.push(Subset(mask));
        }
        Family::new(n, members)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family[n={}; ", self.n)?;
        for (i, a) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a:?}")?;
        }
        write!(f, "]")
    }
}

/// True when every a ∈ A, b ∈ B satisfy |a ∩ b| ≥ t.
pub fn cross_t_pair(a: &Family, b: &Family, t: u8) -> bool {
    for &x in a.members() {
        for &y in b.members() {
            if intersect_size(x, y) < t {
                return false;
            }
        }
    }
    true
}

/// A sequence (tuple) of m ≥ 2 families over a common ground set, together
/// with the intersection threshold t ≥ 1 the sequence is judged against.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FamilySeq {
    n: GroundSize,
    t: u8,
    families: Vec<Family>,
}

impl FamilySeq {
    pub fn new(n: GroundSize, t: u8, families: Vec<Family>) -> Result<FamilySeq> {
        if t < 1 {
            return Err(Error::InvalidParams("threshold t must be at least 1".into()));
        }
        if families.len() < 2 {
            return Err(Error::InvalidParams(
                "a family sequence needs at least two families".into(),
            ));
        }
        for f in &families {
            if f.n() != n {
                return Err(Error::InvalidParams(
                    "all families in a sequence must share the ground set".into(),
                ));
            }
        }
        Ok(FamilySeq { n, t, families })
    }

    pub fn n(&self) -> GroundSize {
        self.n
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    pub fn m(&self) -> usize {
        self.families.len()
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, i: usize) -> &Family {
        &self.families[i]
    }

    /// Same n and t, new family list.
    pub fn with_families(&self, families: Vec<Family>) -> Result<FamilySeq> {
        FamilySeq::new(self.n, self.t, families)
    }

    /// Total size over all families.
    pub fn norm(&self) -> u64 {
        self.families.iter().map(|f| f.len() as u64).sum()
    }

    pub fn any_empty(&self) -> bool {
        self.families.iter().any(|f| f.is_empty())
    }

    /// Every pair of distinct positions i < j is cross t-intersecting; no
    /// constraint is placed within a single family.
    pub fn is_pairwise_cross_t_intersecting(&self) -> bool {
        for i in 0..self.families.len() {
            for j in i + 1..self.families.len() {
                if !cross_t_pair(&self.families[i], &self.families[j], self.t) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for FamilySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilySeq[n={}, t={}; ", self.n, self.t)?;
        for (i, fam) in self.families.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{fam:?}")?;
        }
        write!(f, "]")
    }
}

/// Precomputed table of all permutations of [n], for canonicalization sweeps.
pub struct PermTable {
    n: u8,
    /// Each entry maps 0-based old element index to 0-based new index.
    perms: Vec<Vec<u8>>,
}

impl PermTable {
    pub fn new(n: GroundSize) -> Result<PermTable> {
        if n.get() > CANON_CAP {
            return Err(Error::CanonicalizationCap { n: n.get() });
        }
        let k = n.get() as usize;
        let mut perms = Vec::new();
        let mut cur: Vec<u8> = (0..k as u8).collect();
        // Heap's algorithm, iterative.
        let mut c = vec![0usize; k];
        perms.push(cur.clone());
        let mut i = 0;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    cur.swap(0, i);
                } else {
                    cur.swap(c[i], i);
                }
                perms.push(cur.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(PermTable { n: n.get(), perms })
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn apply(&self, which: usize, s: Subset) -> Subset {
        let perm = &self.perms[which];
        let mut out = 0u32;
        let mut m = s.0;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            out |= 1 << perm[b];
            m &= m - 1;
        }
        Subset(out)
    }

    fn apply_family(&self, which: usize, f: &Family) -> Family {
        let mut members: Vec<Subset> =
            f.members().iter().map(|&s| self.apply(which, s)).collect();
        members.sort_unstable();
        Family {
            n: GroundSize(self.n),
            members,
        }
    }
}

/// Lexicographically least relabeling of a single family under all ground-set
/// permutations. Capped at n ≤ 8.
pub fn canonicalize_family(f: &Family) -> Result<Family> {
    let table = PermTable::new(f.n())?;
    Ok(canonicalize_family_with(&table, f))
}

pub fn canonicalize_family_with(table: &PermTable, f: &Family) -> Family {
    let mut best: Option<Family> = None;
    for p in 0..table.len() {
        let cand = table.apply_family(p, f);
        if best.as_ref().is_none_or(|b| cand.members() < b.members()) {
            best = Some(cand);
        }
    }
    best.unwrap_or_else(|| f.clone())
}

/// Lexicographically least relabeling of a sequence under ground-set
/// permutations combined with reordering of the families. Capped at n ≤ 8.
pub fn canonicalize_seq(s: &FamilySeq) -> Result<FamilySeq> {
    let table = PermTable::new(s.n())?;
    Ok(canonicalize_seq_with(&table, s))
}

pub fn canonicalize_seq_with(table: &PermTable, s: &FamilySeq) -> FamilySeq {
    let mut best: Option<Vec<Family>> = None;
    for p in 0..table.len() {
        // For a fixed relabeling, the lexicographically least ordering of the
        // family list is simply ascending sort.
        let mut cand: Vec<Family> =
            s.families().iter().map(|f| table.apply_family(p, f)).collect();
        cand.sort();
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    FamilySeq {
        n: s.n(),
        t: s.t(),
        families: best.expect("permutation table is never empty"),
    }
}
