use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input data.
    Input,
    /// The computation ran but did not meet its accuracy targets.
    Numerical,
    /// The input is well formed but violates an operation's preconditions.
    Precondition,
    /// A size guard refused the request.
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not para-Hermitian (defect {defect:.3e})")]
    NotParaHermitian { defect: f64 },

    #[error("not positive definite on the unit circle: min eigenvalue {min_eigenvalue:.3e} at theta = {theta:.6}")]
    NotPositiveDefinite { min_eigenvalue: f64, theta: f64 },

    #[error("block Cholesky iteration did not converge within {blocks} blocks (last change {change:.3e}, residual {residual:.3e})")]
    NoConvergence { blocks: usize, change: f64, residual: f64 },

    #[error("root iteration did not converge after {iterations} iterations")]
    RootsNoConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("root {root} lies on the unit circle (| |r| - 1 | < {boundary_tol:e})")]
    RootOnCircle { root: Complex64, boundary_tol: f64 },

    #[error("root {root} has no reflected partner 1/conj(r)")]
    UnpairedRoot { root: Complex64 },

    #[error("root {root} on the unit circle has odd multiplicity {multiplicity}")]
    OddCircleMultiplicity { root: Complex64, multiplicity: usize },

    #[error("selection has {found} entries but there are {expected} root slots")]
    SelectionLength { expected: usize, found: usize },

    #[error("determinant has multiple roots; simple roots are required")]
    SimpleRootsRequired,

    #[error("{what}: {count} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("determinant does not vanish at {point} (relative smallest singular value {ratio:.3e})")]
    NotARoot { point: Complex64, ratio: f64 },

    #[error("rank at {point} is not m-1 (sigma ratios {ratios:?})")]
    RankDeficiencyMismatch { point: Complex64, ratios: Vec<f64> },

    #[error("synthetic division by (z - {point}) left remainder {remainder:.3e}")]
    RemainderTooLarge { point: Complex64, remainder: f64 },

    #[error("polynomial is not a scalar spectral factor of det S (defect {defect:.3e})")]
    DeterminantMismatch { defect: f64 },

    #[error("no well-conditioned evaluation point on the unit circle")]
    AllSamplesSingular,

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonFinite(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotParaHermitian { .. }
            | Error::Json(_) => ErrorClass::Input,
            Error::NoConvergence { .. }
            | Error::RootsNoConvergence { .. }
            | Error::UnpairedRoot { .. }
            | Error::RemainderTooLarge { .. }
            | Error::AllSamplesSingular
            | Error::Breakdown(_) => ErrorClass::Numerical,
            Error::NotPositiveDefinite { .. }
            | Error::RootOnCircle { .. }
            | Error::OddCircleMultiplicity { .. }
            | Error::SelectionLength { .. }
            | Error::SimpleRootsRequired
            | Error::NotARoot { .. }
            | Error::RankDeficiencyMismatch { .. }
            | Error::DeterminantMismatch { .. } => ErrorClass::Precondition,
            Error::TooLarge { .. } => ErrorClass::Resource,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidInput(_) => "InvalidInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotParaHermitian { .. } => "NotParaHermitian",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::RootsNoConvergence { .. } => "RootsNoConvergence",
            Error::RootOnCircle { .. } => "RootOnCircle",
            Error::UnpairedRoot { .. } => "UnpairedRoot",
            Error::OddCircleMultiplicity { .. } => "OddCircleMultiplicity",
            Error::SelectionLength { .. } => "SelectionLength",
            Error::SimpleRootsRequired => "SimpleRootsRequired",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotARoot { .. } => "NotARoot",
            Error::RankDeficiencyMismatch { .. } => "RankDeficiencyMismatch",
            Error::RemainderTooLarge { .. } => "RemainderTooLarge",
            Error::DeterminantMismatch { .. } => "DeterminantMismatch",
            Error::AllSamplesSingular => "AllSamplesSingular",
            Error::Breakdown(_) => "Breakdown",
            Error::Json(_) => "Json",
        }
    }
}
