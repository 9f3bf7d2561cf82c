use thiserror::Error;

/// Errors surfaced by the library. Variants are deliberately fine-grained so
/// callers (CLI, tests) can map them onto exit codes and messages without
/// string matching.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty family")]
    EmptyFamily,

    #[error("ground size {n} out of range [1,{max}]")]
    BadGroundSize { n: u8, max: u8 },

    #[error("element {elem} out of range for ground set [{n}]")]
    ElementOutOfRange { elem: u8, n: u8 },

    #[error("subset mask {mask:#x} has bits outside ground set [{n}]")]
    MaskOutOfRange { mask: u32, n: u8 },

    #[error("canonicalization cap exceeded")]
    CanonicalizationCap { n: u8 },

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{lemma}: hypothesis violated: {hypothesis}")]
    Hypothesis {
        lemma: &'static str,
        hypothesis: String,
    },

    #[error("{lemma}: claimed property failed: {detail}")]
    ClaimViolated {
        lemma: &'static str,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
