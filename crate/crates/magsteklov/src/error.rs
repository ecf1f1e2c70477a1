use thiserror::Error;

/// Errors shared across the spectral and oracle layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A series failed to meet its tail bound within the term cap.
    #[error("series did not converge: tail estimate {tail:.3e} after {terms} terms")]
    Accuracy { tail: f64, terms: usize },

    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at argument {0}")]
    GammaPole(f64),

    /// A Laguerre denominator in an eigenvalue formula vanished; the point is
    /// excluded from curves rather than interpolated over.
    #[error("Laguerre denominator pole at t = {t}")]
    Pole { t: f64 },

    /// The minimizing branch index hit the enumeration cutoff, so the true
    /// minimum may lie beyond it.
    #[error("enumeration cutoff k_max = {k_max} insufficient: minimum attained at the cutoff")]
    CutoffInsufficient { k_max: u32 },

    /// A power-series solution did not decay enough by the truncation order.
    #[error("series truncation insufficient: tail fraction {tail:.3e} at r = 1")]
    Truncation { tail: f64 },

    /// Both fundamental branches satisfied the boundary condition at once.
    #[error("degenerate branch combination: boundary condition does not select a direction")]
    DegenerateBranches,

    /// The combined solution nearly vanishes at the boundary.
    #[error("normalization failed: |Q(1)| = {0:.3e}")]
    Normalization(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
