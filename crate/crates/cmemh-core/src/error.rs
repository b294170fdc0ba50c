use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("state {state:?} outside caps {caps:?}")]
    OutOfCaps { state: Vec<u32>, caps: Vec<u32> },

    #[error("state index {index} outside [1, {q}]")]
    IndexOutOfRange { index: u64, q: u64 },

    #[error("state count overflows the index type for caps {0:?}")]
    StateCountOverflow(Vec<u32>),

    #[error("generator dimension {q} exceeds budget {budget}; run with a windowed configuration")]
    GeneratorBudget { q: u64, budget: u64 },

    #[error("window [{lo}, {hi}] does not cover state index {index}")]
    WindowDoesNotCover { lo: u64, hi: u64, index: u64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("start vector is zero")]
    ZeroVector,

    #[error("no embedded coefficients for CRAM order {0}; supported orders are 14 and 16")]
    CramOrder(usize),

    #[error("shifted system is singular at column {0}")]
    SingularSolve(usize),

    #[error("iterative solve stagnated: relative residual {residual:.3e} after {iters} iterations")]
    SolveDiverged { residual: f64, iters: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "chain stalled: {rejects} consecutive rejections at anchor index {anchor} \
         (window [{window_lo}, {window_hi}]); a wider window may help"
    )]
    Stall {
        rejects: u64,
        anchor: u64,
        window_lo: u64,
        window_hi: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
