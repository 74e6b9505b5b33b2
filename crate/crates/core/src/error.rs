//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A digit outside the digit alphabet was encountered.
    #[error("invalid digit {digit} (expected one of 0..={max})")]
    InvalidDigit { digit: u8, max: u8 },

    /// A non-empty base-3/2 expansion may not start with 0.
    #[error("digit string has a leading zero")]
    LeadingZero,

    /// Fixed-point generation stopped making progress.
    #[error("fixed-point generation stalled at length {produced}")]
    GenerationStalled { produced: usize },

    /// The produced word contradicts the requested seed or an already
    /// demanded symbol.
    #[error("fixed point is inconsistent at position {position}: produced {produced}, demanded {demanded}")]
    Inconsistent {
        position: usize,
        produced: u8,
        demanded: u8,
    },

    /// More than one continuation of the fixed point is consistent with the
    /// known prefix; the generator does not search beyond one block.
    #[error("fixed point is ambiguous at block {block}")]
    Ambiguous { block: usize },

    /// A block substitution has no rule for a block that occurs in the word.
    #[error("no substitution rule for block {block}")]
    MissingRule { block: String },

    /// An operation that requires a binary alphabet was applied to a wider one.
    #[error("operation requires a binary alphabet, stream has {size} symbols")]
    UnsupportedAlphabet { size: u8 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A Toeplitz pattern whose first letter is a hole, or with q >= p.
    #[error("invalid Toeplitz pattern: {0}")]
    InvalidPattern(String),

    /// A hole-free pattern yields a periodic word; the complexity exponent
    /// is undefined for it.
    #[error("degenerate Toeplitz pattern (no holes)")]
    DegeneratePattern,

    /// Factor-set scan window shorter than the factor length.
    #[error("prefix of length {prefix} cannot contain factors of length {factor}")]
    EmptyWindow { prefix: usize, factor: usize },

    #[error("factor {0} does not occur in the scanned prefix")]
    FactorNotFound(String),

    #[error("need at least 2 occurrences of {factor}, found {found}")]
    InsufficientOccurrences { factor: String, found: usize },

    /// Desubstitution counting identities require a prefix length of the
    /// form 3m.
    #[error("prefix length {0} is not a multiple of 3")]
    Misaligned(usize),

    /// A dual-group element was used at the wrong level.
    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: u32, got: u32 },

    #[error("unknown word {0:?}")]
    UnknownWord(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
