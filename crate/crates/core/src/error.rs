use thiserror::Error;

/// Errors raised across the simulator, diagnostics and certification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("field is not solenoidal (max relative divergence {defect:.3e})")]
    NonSolenoidal { defect: f64 },

    #[error("lattice mismatch: expected truncation {expected}, found {found}")]
    LatticeMismatch { expected: usize, found: usize },

    #[error("psi equation has no solution for a zero field")]
    NoSolution,

    #[error("transform exponent undefined: norm of w is zero")]
    UndefinedExponent,

    #[error("transform did not converge after {iterations} iterations (residual {residual:.3e})")]
    TransformNonConvergence { iterations: usize, residual: f64 },

    #[error("blow-up detected at t = {time} (last valid sample)")]
    BlowUp { time: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("analyticity radius unavailable: only {shells} usable shells")]
    DiagnosticUnavailable { shells: usize },

    #[error("t = {t} is beyond the horizon t* = {t_star}")]
    Horizon { t: f64, t_star: f64 },

    #[error("lattice sum diverges for s = {s} (need s > 0)")]
    DivergentSum { s: f64 },

    #[error("report incomplete: {0}")]
    ReportIncomplete(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
