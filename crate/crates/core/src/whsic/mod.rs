//! Weyl-Heisenberg SIC construction: displacement operators, the frame
//! potential whose global minima are SIC fiducials, a restart-based
//! numerical search, and verification of the overlap condition.

mod displacement;
mod potential;
mod search;
mod sic;

pub use displacement::{displacement_operator, nontrivial_displacements};
pub use potential::{
    frame_potential, frame_potential_gradient, frame_potential_raw, potential_lower_bound,
};
pub use search::{
    search_fiducial, SearchReport, DEFAULT_RESTARTS, DEVIATION_TARGET, GRAD_TOL, POTENTIAL_TOL,
};
pub use sic::{
    fiducial_quality, known_fiducial, potential_excess, sic_from_fiducial, verify_sic, SicPovm,
    SicVerification,
};
