//! Centralized numerical tolerances.
//!
//! Everything here assumes desk-scale dimensions (d <= 8), where
//! conditioning is benign and accumulated rounding stays far below these
//! thresholds. Checks that are exact in rational arithmetic live in
//! [`crate::urtheory`] and use no tolerance at all.

/// Hermiticity check: max |a_ij - conj(a_ji)|.
pub const HERM: f64 = 1e-12;

/// Unit-trace check for density matrices.
pub const TRACE: f64 = 1e-12;

/// Unit-norm check for pure states.
pub const NORM: f64 = 1e-12;

/// Pairwise orthonormality of completed bases.
pub const ORTH: f64 = 1e-12;

/// Resolution-of-identity checks (POVM element sums, projector sums).
pub const SUM: f64 = 1e-12;

/// Positive semidefiniteness: min eigenvalue >= -PSD.
pub const PSD: f64 = 1e-10;

/// Eigenvalue reconstruction residual (sum of eigenvalues vs trace).
pub const EIG: f64 = 1e-12;

/// Probability vectors: sum-to-one check.
pub const PROB: f64 = 1e-12;

/// Probability entries in [-PROB_CLAMP, 0) are treated as rounding noise
/// and clamped to zero; anything more negative is an error.
pub const PROB_CLAMP: f64 = 1e-14;

/// Window around [0, 1] inside which an Urgleichung output still counts
/// as a probability. Wider than PROB_CLAMP: the affine map amplifies
/// rounding in its inputs before clamping gets a chance.
pub const URUNGLEICHUNG: f64 = 1e-12;

/// Off-diagonal Frobenius mass below which the Jacobi sweep stops.
pub const JACOBI_OFF: f64 = 1e-14;

/// Basis-completion candidates with a residual below this are considered
/// linearly dependent on the vectors already chosen and are skipped.
pub const GS_RESIDUAL: f64 = 1e-8;

/// A SIC whose overlap deviation exceeds this is refused by the
/// state conversion routines.
pub const SIC_USABLE: f64 = 1e-6;
