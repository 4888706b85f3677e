use alloc::string::String;

/// Errors raised by the core constructions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("enumeration entries must be distinct; {0} repeats")]
    DuplicateEntry(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gap representation requires increasing enumeration")]
    NotIncreasing,
    #[error("enumeration length {len} exceeds cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("undecidable within window")]
    Undecidable,
    #[error("cone axiom P∩(−P) = {{0}} fails: {0}")]
    ConeAxiom(String),
    #[error("order is not total")]
    NotTotal,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("frequency {0} lies outside the grid window")]
    OutsideWindow(String),
    #[error("frequencies {0} and {1} collide modulo the grid")]
    Alias(String, String),
    #[error("grid specifications differ")]
    SpecMismatch,
    #[error("hypothesis violated at {freq}: |coefficient| = {magnitude:e}")]
    Hypothesis { freq: String, magnitude: f64 },
    #[error("classic mode requires an analytic factorization: {0}")]
    NotAnalytic(String),
    #[error("cannot certify hypothesis: forbidden set is not exact within the window")]
    InexactForbidden,
    #[error("forbidden set meets K at {0}")]
    ForbiddenMeetsK(String),
    #[error("L1 norm is zero")]
    ZeroNorm,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
