//! Exact combinatorics of pairwise cross t-intersecting families of subsets.
//!
//! The crate has three layers:
//!
//! * closed-form machinery — `formulas` for the two-branch maximum-total-size
//!   bound and its relatives, `family`/`compress` for the set-system types and
//!   the shifting/exchange operators they are stated over;
//! * `lemma` — audited transformations: each step re-checks its hypotheses,
//!   re-verifies the cross-intersecting property of its output, and emits a
//!   trace;
//! * `oracle` — independent brute-force searches (clique search over subset
//!   compatibility graphs, exhaustive monotone-family enumeration) that verify
//!   the closed forms at small scale and produce re-checkable certificates.
//!
//! The default `parallel` feature routes bulk work through rayon; disabling
//! it yields a dependency-free sequential build with identical output.

pub mod cert;
pub mod compress;
pub mod error;
pub mod family;
pub mod formulas;
pub mod gen;
pub mod lemma;
pub mod oracle;
pub mod par;

pub use error::{Error, Result};
