use thiserror::Error;

/// Errors produced by the railgrid library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("direction index {0} out of range 0..8")]
    InvalidDirection(i64),

    #[error("turn code {0} is not a legal turn (4 is a U-turn, codes run 0..8)")]
    InvalidTurn(i64),

    #[error("turn {raw} between {from} and {to} is not allowed by the {mode} piece set")]
    IllegalTurn {
        from: u8,
        to: u8,
        raw: u8,
        mode: &'static str,
    },

    #[error("invalid piece code {0}")]
    InvalidPieceCode(i64),

    #[error("anchor index {0} out of range 0..8")]
    InvalidAnchor(i64),

    #[error("circuit needs at least 3 pieces, got {0}")]
    TooShort(usize),

    #[error("path does not close: steps sum to ({0}, {1})")]
    NotClosed(i32, i32),

    #[error("anchors must be pairwise distinct")]
    SharedAnchors,

    #[error("fit needs at least 3 samples with distinct N and positive counts, got {0}")]
    TooFewSamples(usize),

    #[error("least-squares design matrix is rank deficient")]
    RankDeficient,

    #[error("estimate at N={0} overflows")]
    EstimateOverflow(u32),

    #[error("sweep over {estimated} parameter tuples exceeds the budget of {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("circuit is not constructible: {0}")]
    NotConstructible(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
