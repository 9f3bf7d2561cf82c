//! Exact closed-form quantities: binomials, the non-uniform and uniform
//! t-intersecting maxima with their extremal constructions, the headline
//! two-branch bound, related published bounds, and the auxiliary ℓ-indexed
//! size functions used in the structural analysis.
//!
//! All arithmetic is exact in checked u128; parameters are capped at n ≤ 64,
//! which keeps every value here below 2^67.

use crate::error::{Error, Result};
use crate::family::{interval_mask, Family, GroundSize, Subset};
use std::collections::BTreeMap;

pub const MAX_FORMULA_N: u32 = 64;

fn check_formula_n(n: u32) -> Result<()> {
    if n > MAX_FORMULA_N {
        Err(Error::CapExceeded(format!(
            "formula parameters capped at n <= {MAX_FORMULA_N}, got n={n}"
        )))
    } else {
        Ok(())
    }
}

/// C(n, k), with 0 for k > n. Cap n ≤ 64.
pub fn binom(n: u32, k: u32) -> Result<u128> {
    check_formula_n(n)?;
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binom"))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Σ_{k=lo}^{hi} C(n, k); empty when lo > hi.
pub fn binom_sum(n: u32, lo: u32, hi: u32) -> Result<u128> {
    let mut acc: u128 = 0;
    let mut k = lo;
    while k <= hi {
        acc = acc
            .checked_add(binom(n, k)?)
            .ok_or(Error::Overflow("binom_sum"))?;
        k += 1;
    }
    Ok(acc)
}

fn pow2(e: u32) -> Result<u128> {
    if e >= 128 {
        return Err(Error::Overflow("pow2"));
    }
    Ok(1u128 << e)
}

fn check_t_n(n: u32, t: u32) -> Result<()> {
    check_formula_n(n)?;
    if t < 1 || t > n {
        return Err(Error::InvalidParams(format!(
            "requires 1 <= t <= n, got t={t}, n={n}"
        )));
    }
    Ok(())
}

/// Largest size of a t-intersecting family of subsets of [n]: the whole upper
/// half of the cube when n+t is even, and the half-layer variant when odd.
pub fn katona_m(n: u32, t: u32) -> Result<u128> {
    check_t_n(n, t)?;
    if (n + t).is_multiple_of(2) {
        binom_sum(n, (n + t) / 2, n)
    } else {
        let top = binom_sum(n, (n + t).div_ceil(2), n)?;
        let extra = binom(n - 1, (n + t - 1) / 2)?;
        top.checked_add(extra).ok_or(Error::Overflow("katona_m"))
    }
}

/// The extremal construction behind `katona_m`. For even n+t the first
/// component is the half-cube {A : |A| ≥ (n+t)/2}; for odd n+t it is the
/// threshold part {A : |A| ≥ (n+t+1)/2} and the second component carries the
/// extra middle layer, all (n+t-1)/2-subsets of [n-1]. The united family
/// always has size `katona_m(n, t)`.
pub fn katona_families(n: GroundSize, t: u8) -> Result<(Family, Option<Family>)> {
    check_t_n(n.get() as u32, t as u32)?;
    let nn = n.get() as u32;
    let tt = t as u32;
    let all: Vec<Subset> = (0..n.subset_count() as u32).map(Subset).collect();
    if (nn + tt).is_multiple_of(2) {
        let thr = ((nn + tt) / 2) as u8;
        let fam = Family::new(n, all.into_iter().filter(|a| a.card() >= thr).collect())?;
        debug_assert_eq!(fam.len() as u128, katona_m(nn, tt)?);
        Ok((fam, None))
    } else {
        let thr = (nn + tt).div_ceil(2) as u8;
        let mid = ((nn + tt - 1) / 2) as u8;
        let last = n.get();
        let extra: Vec<Subset> = all
            .iter()
            .copied()
            .filter(|a| !a.contains(last) && a.card() == mid)
            .collect();
        let mut united: Vec<Subset> = all
            .iter()
            .copied()
            .filter(|a| a.card() >= thr)
            .collect();
        united.extend(extra.iter().copied());
        let fam = Family::new(n, united)?;
        let extra_fam = Family::new(n, extra)?;
        debug_assert_eq!(fam.len() as u128, katona_m(nn, tt)?);
        Ok((fam, Some(extra_fam)))
    }
}

fn check_uniform_params(n: u32, k: u32, t: u32) -> Result<()> {
    check_formula_n(n)?;
    if !(n >= k && k >= t && t >= 1) {
        return Err(Error::InvalidParams(format!(
            "requires n >= k >= t >= 1, got n={n}, k={k}, t={t}"
        )));
    }
    if n + t <= 2 * k {
        return Err(Error::InvalidParams(format!(
            "requires n > 2k - t, got n={n}, k={k}, t={t}"
        )));
    }
    Ok(())
}

/// Size of the r-th uniform frame family: k-subsets of [n] meeting [t+2r] in
/// at least t+r elements.
pub fn ak_r_size(n: u32, k: u32, t: u32, r: u32) -> Result<u128> {
    check_uniform_params(n, k, t)?;
    if 2 * r > n - t {
        return Err(Error::InvalidParams(format!(
            "requires 0 <= r <= (n-t)/2, got r={r}, n={n}, t={t}"
        )));
    }
    let mut acc: u128 = 0;
    for i in (t + r)..=(t + 2 * r) {
        if i > k {
            break; // terms with i > k vanish
        }
        let part = binom(t + 2 * r, i)?
            .checked_mul(binom(n - t - 2 * r, k - i)?)
            .ok_or(Error::Overflow("ak_r_size"))?;
        acc = acc.checked_add(part).ok_or(Error::Overflow("ak_r_size"))?;
    }
    Ok(acc)
}

/// Largest size of a t-intersecting family of k-subsets of [n] (for
/// n > 2k - t): the best frame family over all admissible r.
pub fn ak_m(n: u32, k: u32, t: u32) -> Result<u128> {
    check_uniform_params(n, k, t)?;
    let mut best = 0u128;
    for r in 0..=((n - t) / 2) {
        best = best.max(ak_r_size(n, k, t, r)?);
    }
    Ok(best)
}

/// The r-th frame family itself: {A ∈ C([n],k) : |A ∩ [t+2r]| ≥ t+r}.
pub fn ak_frame_family(n: GroundSize, k: u8, t: u8, r: u8) -> Result<Family> {
    check_uniform_params(n.get() as u32, k as u32, t as u32)?;
    if 2 * (r as u32) > n.get() as u32 - t as u32 {
        return Err(Error::InvalidParams(format!(
            "requires 0 <= r <= (n-t)/2, got r={r}, n={}, t={t}",
            n.get()
        )));
    }
    let head = Subset(interval_mask(1, t + 2 * r));
    let members: Vec<Subset> = (0..n.subset_count() as u32)
        .map(Subset)
        .filter(|a| a.card() == k && a.inter(head).card() >= t + r)
        .collect();
    let fam = Family::new(n, members)?;
    debug_assert_eq!(
        fam.len() as u128,
        ak_r_size(n.get() as u32, k as u32, t as u32, r as u32)?
    );
    Ok(fam)
}

/// Which branch of the two-branch maximum produced the bound value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    #[serde(rename = "sum_side")]
    SumSide,
    #[serde(rename = "m_times_M")]
    MTimesM,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::SumSide => "sum_side",
            Branch::MTimesM => "m_times_M",
        }
    }
}

/// The headline bound max{Σ_{k=t}^{n} C(n,k) + m - 1, m·M(n,t)} together
/// with its provenance. Ties report branch = sum_side with the tie flag set.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: u32,
    pub t: u32,
    pub m: u32,
    pub value: u128,
    pub branch: Branch,
    pub tie: bool,
    pub components: BTreeMap<&'static str, u128>,
}

impl BoundReport {
    pub fn to_json(&self) -> serde_json::Value {
        let components: serde_json::Map<String, serde_json::Value> = self
            .components
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
            .collect();
        serde_json::json!({
            "n": self.n,
            "t": self.t,
            "m": self.m,
            "value": self.value.to_string(),
            "branch": self.branch.as_str(),
            "tie": self.tie,
            "components": components,
        })
    }
}

/// The exact maximum total size of m ≥ 2 non-empty pairwise cross
/// t-intersecting families over [n].
pub fn main_bound(n: u32, t: u32, m: u32) -> Result<BoundReport> {
    check_t_n(n, t)?;
    if m < 2 {
        return Err(Error::InvalidParams(format!("requires m >= 2, got m={m}")));
    }
    let sum_families = binom_sum(n, t, n)?;
    let sum_side = sum_families
        .checked_add((m - 1) as u128)
        .ok_or(Error::Overflow("main_bound"))?;
    let katona = katona_m(n, t)?;
    let m_times = katona
        .checked_mul(m as u128)
        .ok_or(Error::Overflow("main_bound"))?;
    let (value, branch, tie) = if sum_side >= m_times {
        (sum_side, Branch::SumSide, sum_side == m_times)
    } else {
        (m_times, Branch::MTimesM, false)
    };
    let mut components = BTreeMap::new();
    components.insert("sum_families", sum_families);
    components.insert("sum_side", sum_side);
    components.insert("katona_M", katona);
    components.insert("m_times_M", m_times);
    Ok(BoundReport {
        n,
        t,
        m,
        value,
        branch,
        tie,
        components,
    })
}

fn check_cross_uniform(n: u32, k: u32, t: u32) -> Result<()> {
    check_formula_n(n)?;
    if !(k > t && t >= 1) {
        return Err(Error::InvalidParams(format!(
            "requires k > t >= 1, got k={k}, t={t}"
        )));
    }
    if n + t <= 2 * k {
        return Err(Error::InvalidParams(format!(
            "requires n > 2k - t, got n={n}, k={k}, t={t}"
        )));
    }
    Ok(())
}

/// Two-family uniform cross t-intersecting bound:
/// C(n,k) − Σ_{i=0}^{t-1} C(k,i)·C(n-k,k-i) + 1.
pub fn wang_zhang(n: u32, k: u32, t: u32) -> Result<u128> {
    check_cross_uniform(n, k, t)?;
    let mut defect: u128 = 0;
    for i in 0..t {
        defect = defect
            .checked_add(
                binom(k, i)?
                    .checked_mul(binom(n - k, k - i)?)
                    .ok_or(Error::Overflow("wang_zhang"))?,
            )
            .ok_or(Error::Overflow("wang_zhang"))?;
    }
    let total = binom(n, k)?;
    total
        .checked_sub(defect)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("wang_zhang"))
}

/// m-family uniform cross t-intersecting bound:
/// max{C(n,k) − Σ_{i=0}^{t-1} C(k,i)·C(n-k,k-i) + m − 1, m·M(n,k,t)}.
pub fn li_zhang(n: u32, k: u32, t: u32, m: u32) -> Result<u128> {
    check_cross_uniform(n, k, t)?;
    if m < 2 {
        return Err(Error::InvalidParams(format!("requires m >= 2, got m={m}")));
    }
    let first = wang_zhang(n, k, t)?
        .checked_add((m - 1) as u128)
        .and_then(|v| v.checked_sub(1))
        .ok_or(Error::Overflow("li_zhang"))?;
    let second = ak_m(n, k, t)?
        .checked_mul(m as u128)
        .ok_or(Error::Overflow("li_zhang"))?;
    Ok(first.max(second))
}

/// Two-family non-uniform cross t-intersecting bound: Σ_{i=t}^{n} C(n,i) + 1.
pub fn frankl_wong(n: u32, t: u32) -> Result<u128> {
    check_t_n(n, t)?;
    binom_sum(n, t, n)?
        .checked_add(1)
        .ok_or(Error::Overflow("frankl_wong"))
}

/// Two-family uniform cross 1-intersecting bound: C(n,k) − C(n-k,k) + 1.
pub fn hilton_milner(n: u32, k: u32) -> Result<u128> {
    check_formula_n(n)?;
    if k < 1 {
        return Err(Error::InvalidParams("requires k >= 1".into()));
    }
    if n < 2 * k {
        return Err(Error::InvalidParams(format!(
            "requires n >= 2k, got n={n}, k={k}"
        )));
    }
    binom(n, k)?
        .checked_sub(binom(n - k, k)?)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("hilton_milner"))
}

/// m-family uniform cross 1-intersecting bound:
/// max{C(n,k) − C(n-k,k) + m − 1, m·C(n-1,k-1)}.
pub fn shi_frankl_qian(n: u32, k: u32, m: u32) -> Result<u128> {
    check_formula_n(n)?;
    if k < 1 {
        return Err(Error::InvalidParams("requires k >= 1".into()));
    }
    if n < 2 * k {
        return Err(Error::InvalidParams(format!(
            "requires n >= 2k, got n={n}, k={k}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParams(format!("requires m >= 2, got m={m}")));
    }
    let first = hilton_milner(n, k)?
        .checked_add((m - 1) as u128)
        .and_then(|v| v.checked_sub(1))
        .ok_or(Error::Overflow("shi_frankl_qian"))?;
    let second = binom(n - 1, k - 1)?
        .checked_mul(m as u128)
        .ok_or(Error::Overflow("shi_frankl_qian"))?;
    Ok(first.max(second))
}

/// The five related published bounds, each evaluated under its own parameter
/// constraints (entries carry Err when a constraint fails). The uniform
/// bounds require k.
pub fn classical_bounds(
    n: u32,
    t: u32,
    m: u32,
    k: Option<u32>,
) -> BTreeMap<&'static str, Result<u128>> {
    let need_k = || -> Result<u32> {
        k.ok_or_else(|| Error::InvalidParams("this bound requires k".into()))
    };
    let mut out: BTreeMap<&'static str, Result<u128>> = BTreeMap::new();
    out.insert("frankl_wong", frankl_wong(n, t));
    out.insert("wang_zhang", need_k().and_then(|k| wang_zhang(n, k, t)));
    out.insert("li_zhang", need_k().and_then(|k| li_zhang(n, k, t, m)));
    out.insert("hilton_milner", need_k().and_then(|k| hilton_milner(n, k)));
    out.insert(
        "shi_frankl_qian",
        need_k().and_then(|k| shi_frankl_qian(n, k, m)),
    );
    out
}

/// f(ℓ) = (Σ_{k=t}^{ℓ} C(ℓ,k) + m − 1)·2^{n−ℓ}: the total size of the
/// ℓ-threshold construction and its m−1 companion full-head families.
pub fn f_ell(n: u32, t: u32, m: u32, l: u32) -> Result<u128> {
    check_t_n(n, t)?;
    if m < 2 {
        return Err(Error::InvalidParams(format!("requires m >= 2, got m={m}")));
    }
    if l < t || l > n {
        return Err(Error::InvalidParams(format!(
            "requires t <= l <= n, got t={t}, l={l}, n={n}"
        )));
    }
    binom_sum(l, t, l)?
        .checked_add((m - 1) as u128)
        .and_then(|v| v.checked_mul(pow2(n - l).ok()?))
        .ok_or(Error::Overflow("f_ell"))
}

/// g(ℓ) = 2^{n−ℓ}·Σ_{j ≥ (ℓ+t)/2} C(ℓ,j), defined when ℓ+t is even.
pub fn g_ell(n: u32, t: u32, l: u32) -> Result<u128> {
    check_t_n(n, t)?;
    if l < t || l > n {
        return Err(Error::InvalidParams(format!(
            "requires t <= l <= n, got t={t}, l={l}, n={n}"
        )));
    }
    if !(l + t).is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "requires l + t even, got l={l}, t={t}"
        )));
    }
    binom_sum(l, (l + t) / 2, l)?
        .checked_mul(pow2(n - l)?)
        .ok_or(Error::Overflow("g_ell"))
}

/// The ℓ-threshold pair: ℛ(n,ℓ) = {R : |R ∩ [ℓ]| ≥ t} and
/// 𝒮(n,ℓ) = {S : [ℓ] ⊆ S}. Sizes are asserted against their closed forms
/// 2^{n−ℓ}·Σ_{k=t}^{ℓ} C(ℓ,k) and 2^{n−ℓ}.
pub fn rs_families(n: GroundSize, l: u8, t: u8) -> Result<(Family, Family)> {
    let nn = n.get() as u32;
    check_t_n(nn, t as u32)?;
    if l < t || l as u32 > nn {
        return Err(Error::InvalidParams(format!(
            "requires t <= l <= n, got t={t}, l={l}, n={nn}"
        )));
    }
    let head = Subset(interval_mask(1, l));
    let mut r_members = Vec::new();
    let mut s_members = Vec::new();
    for mask in 0..n.subset_count() as u32 {
        let a = Subset(mask);
        if a.inter(head).card() >= t {
            r_members.push(a);
        }
        if head.is_subset_of(a) {
            s_members.push(a);
        }
    }
    let r = Family::new(n, r_members)?;
    let s = Family::new(n, s_members)?;
    debug_assert_eq!(
        r.len() as u128,
        binom_sum(l as u32, t as u32, l as u32)?
            .checked_mul(pow2(nn - l as u32)?)
            .unwrap()
    );
    debug_assert_eq!(s.len() as u128, pow2(nn - l as u32)?);
    Ok((r, s))
}

/// Size of a family after one boundary replacement step:
/// |A| − |B|·Σ_{j=u}^{n} C(n−ℓ, j−u) + |C|·Σ_{j=v−1}^{n} C(n−ℓ, j−v+1).
/// Both inner sums telescope to 2^{n−ℓ}.
pub fn le1_size_formula(
    a_size: u64,
    b_size: u64,
    c_size: u64,
    n: u32,
    l: u32,
    u: u32,
    v: u32,
) -> Result<u128> {
    check_formula_n(n)?;
    if l > n || u < 1 || v < 1 || u > l || v > l {
        return Err(Error::InvalidParams(format!(
            "requires 1 <= u,v <= l <= n, got u={u}, v={v}, l={l}, n={n}"
        )));
    }
    let mut s1: i128 = 0;
    for j in u..=n {
        s1 += binom(n - l, j - u)? as i128;
    }
    let mut s2: i128 = 0;
    for j in (v - 1)..=n {
        s2 += binom(n - l, j + 1 - v)? as i128;
    }
    let total = a_size as i128 - b_size as i128 * s1 + c_size as i128 * s2;
    if total < 0 {
        return Err(Error::InvalidParams(
            "replacement size formula went negative; inputs do not describe a valid replacement"
                .into(),
        ));
    }
    Ok(total as u128)
}
