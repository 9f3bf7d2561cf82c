//! Re-checkable verification certificates.
//!
//! A certificate records, for one (n, t, m) cell: the exhaustively computed
//! optimum, the closed-form value it was compared against, every optimal
//! isomorphism class found (canonicalized), and how those classes line up
//! with the two predicted equality shapes. Certificates serialize to JSON
//! with big integers as decimal strings and can be re-verified from the file
//! alone.

use crate::error::{Error, Result};
use crate::family::{canonicalize_seq, Family, FamilySeq, GroundSize};
use crate::formulas::{self, Branch};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

/// Which extremal shape an optimal tuple realizes.
///
/// `CaseA` is the lopsided shape (one threshold family of everything meeting
/// a t-element floor, the rest single-member full-set families); `CaseB` is m
/// copies of the half-cube-style maximum t-intersecting family;
/// `T1Degenerate` marks t = 1 cells, where many shapes tie and no census is
/// asserted; `Other` is anything unrecognized.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtremalClass {
    CaseA,
    CaseB,
    T1Degenerate,
    Other,
}

impl ExtremalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtremalClass::CaseA => "case_a",
            ExtremalClass::CaseB => "case_b",
            ExtremalClass::T1Degenerate => "t1_degenerate",
            ExtremalClass::Other => "other",
        }
    }

    pub fn from_label(s: &str) -> Result<ExtremalClass> {
        match s {
            "case_a" => Ok(ExtremalClass::CaseA),
            "case_b" => Ok(ExtremalClass::CaseB),
            "t1_degenerate" => Ok(ExtremalClass::T1Degenerate),
            "other" => Ok(ExtremalClass::Other),
            _ => Err(Error::Parse(format!("unknown extremal class {s:?}"))),
        }
    }
}

/// Reference tuple for the lopsided equality shape: ({A : |A| ≥ t}, {[n]},
/// ..., {[n]}), canonicalized.
pub fn reference_case_a(n: GroundSize, t: u8, m: u8) -> Result<FamilySeq> {
    let (r, s) = formulas::rs_families(n, n.get(), t)?;
    let mut families = vec![r];
    for _ in 1..m {
        families.push(s.clone());
    }
    canonicalize_seq(&FamilySeq::new(n, t, families)?)
}

/// Reference tuple for the balanced equality shape: m copies of the maximum
/// t-intersecting family, canonicalized.
pub fn reference_case_b(n: GroundSize, t: u8, m: u8) -> Result<FamilySeq> {
    let (k, _) = formulas::katona_families(n, t)?;
    let families = vec![k; m as usize];
    canonicalize_seq(&FamilySeq::new(n, t, families)?)
}

/// Classify an already-canonicalized optimal tuple.
pub fn classify_canonical(seq: &FamilySeq) -> Result<ExtremalClass> {
    if seq.t() == 1 {
        return Ok(ExtremalClass::T1Degenerate);
    }
    let a = reference_case_a(seq.n(), seq.t(), seq.m() as u8)?;
    if seq.families() == a.families() {
        return Ok(ExtremalClass::CaseA);
    }
    let b = reference_case_b(seq.n(), seq.t(), seq.m() as u8)?;
    if seq.families() == b.families() {
        return Ok(ExtremalClass::CaseB);
    }
    Ok(ExtremalClass::Other)
}

#[derive(Clone, Debug)]
pub struct WitnessEntry {
    /// Canonical form of one optimal isomorphism class.
    pub families: Vec<Family>,
    pub class: ExtremalClass,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: u8,
    pub t: u8,
    pub m: u8,
    pub optimum: u64,
    pub formula_value: u128,
    /// optimum == formula_value.
    pub matched: bool,
    pub branch: Branch,
    pub tie: bool,
    /// For t ≥ 2: the witness classes are exactly the predicted equality
    /// shapes. Vacuously true for t = 1 (no census asserted there).
    pub classes_match: bool,
    /// Summary label; per-witness labels live in `witnesses`.
    pub extremal_class: ExtremalClass,
    pub witnesses: Vec<WitnessEntry>,
    pub seed: u64,
    /// Measured wall time. Reported on the human-readable stream only; the
    /// JSON file pins this field to 0 so output files stay byte-identical
    /// across runs and worker counts.
    pub runtime_ms: u64,
}

impl Certificate {
    pub fn file_name(&self) -> String {
        format!("cert_n{}_t{}_m{}.json", self.n, self.t, self.m)
    }

    pub fn to_json(&self) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "class": w.class.as_str(),
                    "families": w.families.iter().map(|f| f.hex_members()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "t": self.t,
            "m": self.m,
            "optimum": self.optimum.to_string(),
            "formula_value": self.formula_value.to_string(),
            "match": self.matched,
            "branch": self.branch.as_str(),
            "tie": self.tie,
            "classes_match": self.classes_match,
            "extremal_class": self.extremal_class.as_str(),
            "witnesses": witnesses,
            "seed": self.seed.to_string(),
            "runtime_ms": 0,
        })
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("certificate must be a JSON object".into()))?;
        let get = |key: &str| -> Result<&Value> {
            obj.get(key)
                .ok_or_else(|| Error::Parse(format!("certificate missing key {key:?}")))
        };
        let as_u64 = |key: &str| -> Result<u64> {
            get(key)?
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("key {key:?} must be an integer")))
        };
        let as_decimal = |key: &str| -> Result<u128> {
            let raw = get(key)?
                .as_str()
                .ok_or_else(|| Error::Parse(format!("key {key:?} must be a decimal string")))?;
            raw.parse()
                .map_err(|_| Error::Parse(format!("key {key:?}: bad decimal {raw:?}")))
        };
        let as_bool = |key: &str| -> Result<bool> {
            get(key)?
                .as_bool()
                .ok_or_else(|| Error::Parse(format!("key {key:?} must be a boolean")))
        };
        let n = as_u64("n")? as u8;
        let t = as_u64("t")? as u8;
        let m = as_u64("m")? as u8;
        let ground = GroundSize::new(n)?;
        let branch = match get("branch")?.as_str() {
            Some("sum_side") => Branch::SumSide,
            Some("m_times_M") => Branch::MTimesM,
            other => {
                return Err(Error::Parse(format!("bad branch {other:?}")));
            }
        };
        let mut witnesses = Vec::new();
        for w in get("witnesses")?
            .as_array()
            .ok_or_else(|| Error::Parse("witnesses must be an array".into()))?
        {
            let class = ExtremalClass::from_label(
                w.get("class")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("witness missing class".into()))?,
            )?;
            let mut families = Vec::new();
            for fam in w
                .get("families")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("witness missing families".into()))?
            {
                let hex: Vec<String> = fam
                    .as_array()
                    .ok_or_else(|| Error::Parse("family must be an array of masks".into()))?
                    .iter()
                    .map(|h| {
                        h.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Parse("mask must be a string".into()))
                    })
                    .collect::<Result<_>>()?;
                families.push(Family::from_hex_members(ground, &hex)?);
            }
            witnesses.push(WitnessEntry { families, class });
        }
        Ok(Certificate {
            n,
            t,
            m,
            optimum: as_decimal("optimum")? as u64,
            formula_value: as_decimal("formula_value")?,
            matched: as_bool("match")?,
            branch,
            tie: as_bool("tie")?,
            classes_match: as_bool("classes_match")?,
            extremal_class: ExtremalClass::from_label(
                get("extremal_class")?
                    .as_str()
                    .ok_or_else(|| Error::Parse("extremal_class must be a string".into()))?,
            )?,
            witnesses,
            seed: as_decimal("seed")? as u64,
            runtime_ms: as_u64("runtime_ms")?,
        })
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(self.file_name());
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Certificate> {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        Certificate::from_json(&value)
    }

    /// Re-verify everything the certificate claims that can be checked from
    /// its own content: the closed-form value, the match flag, and for every
    /// witness the cross property, the norm, canonicality, and its class
    /// label; for t ≥ 2 also the class census against the prediction.
    pub fn recheck(&self) -> Result<()> {
        let ground = GroundSize::new(self.n)?;
        let report = formulas::main_bound(self.n as u32, self.t as u32, self.m as u32)
            .map_err(|e| Error::Certificate(format!("parameters invalid: {e}")))?;
        if report.value != self.formula_value {
            return Err(Error::Certificate(format!(
                "formula value mismatch: stated {}, recomputed {}",
                self.formula_value, report.value
            )));
        }
        if report.branch != self.branch || report.tie != self.tie {
            return Err(Error::Certificate(
                "branch/tie flags disagree with recomputation".into(),
            ));
        }
        if self.matched != (self.optimum as u128 == self.formula_value) {
            return Err(Error::Certificate("match flag is inconsistent".into()));
        }
        if self.witnesses.is_empty() {
            return Err(Error::Certificate("certificate has no witnesses".into()));
        }
        let mut found_classes = Vec::new();
        for (idx, w) in self.witnesses.iter().enumerate() {
            if w.families.len() != self.m as usize {
                return Err(Error::Certificate(format!(
                    "witness {idx} has {} families, expected {}",
                    w.families.len(),
                    self.m
                )));
            }
            let seq = FamilySeq::new(ground, self.t, w.families.clone())
                .map_err(|e| Error::Certificate(format!("witness {idx}: {e}")))?;
            if seq.any_empty() {
                return Err(Error::Certificate(format!(
                    "witness {idx} contains an empty family"
                )));
            }
            if !seq.is_pairwise_cross_t_intersecting() {
                return Err(Error::Certificate(format!(
                    "witness {idx} is not pairwise cross {}-intersecting",
                    self.t
                )));
            }
            if seq.norm() != self.optimum {
                return Err(Error::Certificate(format!(
                    "witness {idx} has total size {}, certificate states {}",
                    seq.norm(),
                    self.optimum
                )));
            }
            let canon = canonicalize_seq(&seq)
                .map_err(|e| Error::Certificate(format!("witness {idx}: {e}")))?;
            if canon.families() != seq.families() {
                return Err(Error::Certificate(format!(
                    "witness {idx} is not in canonical form"
                )));
            }
            let class = classify_canonical(&canon)
                .map_err(|e| Error::Certificate(format!("witness {idx}: {e}")))?;
            if class != w.class {
                return Err(Error::Certificate(format!(
                    "witness {idx} classified as {}, certificate states {}",
                    class.as_str(),
                    w.class.as_str()
                )));
            }
            found_classes.push(canon);
        }
        if self.t >= 2 {
            let predicted = predicted_classes(ground, self.t, self.m, &report)?;
            let mut found: Vec<&FamilySeq> = found_classes.iter().collect();
            found.sort_by(|a, b| a.families().cmp(b.families()));
            found.dedup_by(|a, b| a.families() == b.families());
            let census_ok = self.matched
                && found.len() == predicted.len()
                && found
                    .iter()
                    .zip(predicted.iter())
                    .all(|(f, p)| f.families() == p.families());
            if census_ok != self.classes_match {
                return Err(Error::Certificate(
                    "classes_match flag disagrees with recomputed census".into(),
                ));
            }
        }
        Ok(())
    }
}

/// The predicted set of optimal isomorphism classes for t ≥ 2, sorted: the
/// lopsided shape when the sum side attains the max, the balanced shape when
/// the m·M side does, both at a tie (they may coincide at tiny parameters).
pub fn predicted_classes(
    n: GroundSize,
    t: u8,
    m: u8,
    report: &formulas::BoundReport,
) -> Result<Vec<FamilySeq>> {
    let sum_side = report.components["sum_side"];
    let m_times = report.components["m_times_M"];
    let mut out: Vec<FamilySeq> = Vec::new();
    if sum_side >= m_times {
        out.push(reference_case_a(n, t, m)?);
    }
    if m_times >= sum_side {
        out.push(reference_case_b(n, t, m)?);
    }
    out.sort_by(|a, b| a.families().cmp(b.families()));
    out.dedup_by(|a, b| a.families() == b.families());
    Ok(out)
}
