use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("chord `{id}` appears {count} time(s), expected exactly 2")]
    ChordMultiplicity { id: String, count: usize },

    #[error("a diagram needs at least one strand")]
    NoStrands,

    #[error("declared k={declared} but found {found} strand(s)")]
    StrandCount { declared: usize, found: usize },

    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("strand index {index} out of range 1..={strands}")]
    StrandOutOfRange { index: usize, strands: usize },

    #[error("slot {slot} out of range 0..={len}")]
    SlotOutOfRange { slot: usize, len: usize },

    #[error("unknown chord `{0}`")]
    UnknownChord(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("resource cap exceeded: {needed} > {cap} ({what})")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("graph is not a tree")]
    NotATree,

    #[error("tree is not trimmed (no trunk)")]
    NotTrimmed,

    #[error("trunk chord is unmarked")]
    TrunkUnmarked,

    #[error("label {{{0},{1}}} is outside the colour range 1..={2}")]
    LabelOutOfRange(usize, usize, usize),

    #[error("constraint violation: {0}")]
    Constraint(String),

    #[error("tree cannot be realized: {0}")]
    Infeasible(String),

    #[error("tree rejected by the realizability conditions: {0}")]
    Rejected(String),

    #[error("operation requires a colour count of at least {min}, got {got}")]
    TooFewColors { min: usize, got: usize },

    #[error("integer ring required, but the vector has a non-integral coefficient")]
    NonIntegral,

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
