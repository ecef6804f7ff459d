//! Self-contained complex linear algebra for the rest of the crate:
//! Hermitian operators, a Jacobi eigensolver, PSD tests, random states,
//! and orthonormal-basis completion. All functions are pure (seeds
//! included), so concurrent use needs no coordination.

mod eig;
mod matrix;
mod state;

pub use eig::{eigenvalues_hermitian, eigh, is_psd, min_eigenvalue};
pub use matrix::{trace_inner, ComplexMatrix};
pub use state::{
    haar_random_pure, onb_containing, random_ginibre_density, random_povm, DensityMatrix, Povm,
    PureState,
};

pub(crate) use state::haar_pure_from;
