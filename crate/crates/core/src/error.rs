use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `A + B` is numerically singular; the precision pairing is degenerate.
    #[error("precision sum is numerically singular (condition number {condition:.3e})")]
    SingularSum { condition: f64 },

    #[error("all output amplitudes fell below the truncation threshold")]
    EmptyResult,

    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),

    #[error("gate acts on {expected} mode(s) but the state has {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("momentum-representation precision cannot be derived for this Bell provenance")]
    UnknownProvenance,

    #[error("spike at {mean} with std {std_dev} leaves the grid [{lo}, {hi}] on mode {mode}")]
    SupportOverflow { mode: usize, mean: f64, std_dev: f64, lo: f64, hi: f64 },

    #[error("grids are incompatible: {0}")]
    GridMismatch(String),

    #[error("index {index} out of range for axis of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operation requires a grid centred at 0, got centre {0}")]
    AsymmetricGrid(f64),

    #[error("peak window at {center} has {fraction:.3e} of its mass at the boundary")]
    OverlappingPeaks { center: f64, fraction: f64 },

    #[error("sweep configuration has no entries")]
    EmptyConfig,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
