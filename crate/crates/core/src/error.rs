use thiserror::Error;

/// Errors for every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension {dim} not supported: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace must be 1, got {0}")]
    BadTrace(f64),

    #[error("vector must have unit norm, got {0}")]
    NotNormalized(f64),

    #[error("zero or near-zero vector")]
    ZeroVector,

    #[error("orthonormal completion failed: {0}")]
    OnbCompletion(&'static str),

    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    EigNoConvergence(usize),

    #[error("POVM elements do not sum to the identity (deviation {0:.3e})")]
    PovmSum(f64),

    #[error("expected {expected} projectors, found {found}")]
    WrongProjectorCount { found: usize, expected: usize },

    #[error(
        "fiducial search failed after {restarts} restarts \
         (best overlap deviation {best_deviation:.3e}); \
         raise the tolerance, add restarts, or use a known fiducial"
    )]
    SearchFailed { restarts: u32, best_deviation: f64 },

    #[error("SIC overlap deviation {0:.3e} too large for state conversions")]
    UnverifiedSic(f64),

    #[error("probabilities must sum to 1, got {0}")]
    ProbSum(f64),

    #[error("negative probability {0:.3e} exceeds the clamp tolerance")]
    NegativeProbability(f64),

    #[error("conditional matrix not stochastic: outcomes for sky index {sky_index} sum to {sum}")]
    NotStochastic { sky_index: usize, sum: f64 },

    #[error("affine constraint alpha = n*beta + 1 violated by {0:.3e}")]
    AffineConstraint(f64),

    #[error("Urgleichung output q({index}) = {value} lies outside [0, 1]")]
    UrungleichungViolation { index: usize, value: f64 },

    #[error("triple-product tensor invariant violated: {0}")]
    TripleProductInvariant(String),

    #[error("degenerate Gram matrix (zero diagonal entry)")]
    DegenerateGram,

    #[error("no consistent parameters for q = {q}, m0 = {m0}")]
    InconsistentTheory { q: u64, m0: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
