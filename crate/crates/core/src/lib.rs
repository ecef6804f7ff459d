//! SIC-POVM construction and the probability-simplex representation of
//! quantum states.
//!
//! The crate builds symmetric informationally complete measurements by
//! frame-potential minimization over Weyl-Heisenberg orbits, converts
//! density matrices to and from SIC outcome probabilities, constructs
//! the in-step-unpredictable certainty measurements with their Gram
//! matrices and universal angle, and solves the exact rational
//! constraint system that singles out n = d^2, alpha = d + 1,
//! beta = 1/d.

#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

pub mod certainty;
pub mod error;
pub mod hermitian;
pub mod representation;
pub mod rng;
pub mod tol;
pub mod urtheory;
pub mod whsic;

pub use error::{Error, Result};
