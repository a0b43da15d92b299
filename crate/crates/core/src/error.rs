//! Error taxonomy shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("unsupported dimension d={0} (only d in {{1,2}})")]
    UnsupportedDim(usize),

    #[error("state support overflows the grid: {0}")]
    SupportOverflow(String),

    #[error("band-limit violation: fraction {outside:.3e} of spectral energy outside the half-band")]
    BandLimit { outside: f64 },

    #[error("matrix is not symplectic: residual {residual:.3e} exceeds {tol:.1e}")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("matrix is not in the symplectic algebra: residual {residual:.3e}")]
    NotInAlgebra { residual: f64 },

    #[error("singular matrix: |det| = {det:.3e}")]
    Singular { det: f64 },

    #[error("matrix shape {rows}x{cols} invalid: {what}")]
    BadShape { rows: usize, cols: usize, what: String },

    /// Load-bearing: marks caustic parameters where the type-I representation fails.
    #[error("caustic: |det A| = {det_a:.3e} below tolerance {tol:.1e}")]
    Caustic { det_a: f64, tol: f64 },

    #[error("double caustic: |det A| = {det_a:.3e} and |det A| of S*J^-1 = {det_a_fallback:.3e}")]
    DoubleCaustic { det_a: f64, det_a_fallback: f64 },

    #[error("memory guard: {what} needs n <= {max}, got n = {n}")]
    MemoryGuard { what: String, n: usize, max: usize },

    #[error("symbol evaluation failed: {0}")]
    SymbolEval(String),

    #[error("excessive transport mass loss: {lost:.3e}")]
    MassLoss { lost: f64 },

    #[error("step-count overflow: {steps} splitting steps requested")]
    StepOverflow { steps: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
