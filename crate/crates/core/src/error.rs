use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("generator index {index} out of range for a braid on {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },

    #[error("cannot evaluate a polynomial with negative exponents at zero")]
    ZeroEvaluation,

    #[error("diagram has {0} crossingless component(s); stabilize it first")]
    FreeLoops(usize),

    #[error("duplicate edge {tail} -> {head}")]
    DuplicateEdge { tail: usize, head: usize },

    #[error("matrix dimension {dim} exceeds the configured bound {bound}")]
    DimensionBound { dim: usize, bound: usize },

    #[error("braid word has {letters} letters, over the skein budget of {budget}")]
    RecursionBudget { letters: usize, budget: usize },

    #[error("non-finite value in Monte-Carlo sample {sample}; rescale the matrix")]
    NumericOverflow { sample: u64 },

    #[error("no gadget found within the search bound ({candidates} candidates tried)")]
    Exhaustion { candidates: usize },

    #[error("invalid gadget: {0}")]
    InvalidGadget(String),

    #[error("state-sum forms disagree: R-form {r_form} vs B-form {b_form}")]
    StateSumMismatch { r_form: String, b_form: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
