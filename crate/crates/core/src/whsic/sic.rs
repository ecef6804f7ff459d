//! SIC assembly and verification.

use num_complex::Complex64;

use super::displacement::displacement_operator;
use super::potential::{frame_potential, potential_lower_bound};
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, PureState};
use crate::tol;

/// A (candidate) SIC: all d^2 projectors from the Weyl-Heisenberg orbit
/// of a fiducial, labeled i = p*d + q in construction order, together
/// with the measured worst-case deviation from the defining overlap
/// condition tr(Pi_i Pi_j) = (d delta_ij + 1)/(d + 1).
#[derive(Debug, Clone)]
pub struct SicPovm {
    dim: usize,
    fiducial: PureState,
    projectors: Vec<ComplexMatrix>,
    max_overlap_deviation: f64,
}

impl SicPovm {
    /// Assemble from explicit parts, re-measuring the overlap deviation.
    pub fn from_parts(
        dim: usize,
        fiducial: PureState,
        projectors: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if projectors.len() != dim * dim {
            return Err(Error::WrongProjectorCount {
                found: projectors.len(),
                expected: dim * dim,
            });
        }
        for p in &projectors {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(p.dim(), dim));
            }
        }
        let max_overlap_deviation = overlap_deviation(dim, &projectors)?;
        Ok(Self {
            dim,
            fiducial,
            projectors,
            max_overlap_deviation,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiducial(&self) -> &PureState {
        &self.fiducial
    }

    /// Projectors Pi_i in the canonical order i = p*d + q.
    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// POVM elements E_i = Pi_i / d.
    pub fn povm_elements(&self) -> Vec<ComplexMatrix> {
        let scale = 1.0 / self.dim as f64;
        self.projectors.iter().map(|p| p.scale_re(scale)).collect()
    }

    pub fn max_overlap_deviation(&self) -> f64 {
        self.max_overlap_deviation
    }

    /// Refuses to act as a state-conversion frame unless the overlap
    /// condition holds to [`tol::SIC_USABLE`].
    pub fn ensure_usable(&self) -> Result<()> {
        if self.max_overlap_deviation > tol::SIC_USABLE {
            Err(Error::UnverifiedSic(self.max_overlap_deviation))
        } else {
            Ok(())
        }
    }
}

/// Result of checking the overlap condition.
#[derive(Debug, Clone, Copy)]
pub struct SicVerification {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Build the orbit Pi_{p,q} = D_{p,q} |psi><psi| D_{p,q}^dagger.
///
/// Never fails on a unit fiducial: a non-SIC input simply produces an
/// object with a large recorded deviation.
pub fn sic_from_fiducial(fiducial: &PureState) -> Result<SicPovm> {
    let d = fiducial.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut projectors = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            let op = displacement_operator(d, p, q)?;
            let displaced = apply(&op, fiducial.amplitudes());
            let state = PureState::new(displaced)?;
            projectors.push(state.projector());
        }
    }
    SicPovm::from_parts(d, fiducial.clone(), projectors)
}

/// Max over projector pairs of |tr(Pi_i Pi_j) - (d delta_ij + 1)/(d+1)|.
pub fn verify_sic(sic: &SicPovm, tol: f64) -> Result<SicVerification> {
    let max_deviation = overlap_deviation(sic.dim(), sic.projectors())?;
    Ok(SicVerification {
        max_deviation,
        pass: max_deviation < tol,
    })
}

fn overlap_deviation(d: usize, projectors: &[ComplexMatrix]) -> Result<f64> {
    if projectors.len() != d * d {
        return Err(Error::WrongProjectorCount {
            found: projectors.len(),
            expected: d * d,
        });
    }
    let dd = d as f64;
    let mut worst = 0.0f64;
    for i in 0..projectors.len() {
        for j in i..projectors.len() {
            let target = if i == j { 1.0 } else { 1.0 / (dd + 1.0) };
            let overlap = projectors[i].trace_product(&projectors[j])?;
            worst = worst.max((overlap.re - target).abs()).max(overlap.im.abs());
        }
    }
    Ok(worst)
}

fn apply(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let d = v.len();
    (0..d)
        .map(|i| (0..d).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Exact fiducial table. Only d = 2 is tabulated: amplitudes
/// (sqrt((1 + 1/sqrt 3)/2), e^{i pi/4} sqrt((1 - 1/sqrt 3)/2)).
pub fn known_fiducial(d: usize) -> Result<PureState> {
    match d {
        2 => {
            let s3 = 3.0f64.sqrt();
            let a = ((1.0 + 1.0 / s3) / 2.0).sqrt();
            let b = ((1.0 - 1.0 / s3) / 2.0).sqrt();
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            PureState::new(vec![Complex64::new(a, 0.0), phase * b])
        }
        _ => Err(Error::UnsupportedDimension {
            dim: d,
            reason: "no exact fiducial tabulated",
        }),
    }
}

/// Frame-potential report for a search result or a loaded fiducial.
pub fn fiducial_quality(fiducial: &PureState) -> Result<(f64, f64)> {
    let potential = frame_potential(fiducial)?;
    let sic = sic_from_fiducial(fiducial)?;
    Ok((potential, sic.max_overlap_deviation()))
}

/// Excess of the frame potential over its lower bound.
pub fn potential_excess(fiducial: &PureState) -> Result<f64> {
    Ok(frame_potential(fiducial)? - potential_lower_bound(fiducial.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::trace_inner;

    #[test]
    fn known_fiducial_d2_is_exact() {
        let fid = known_fiducial(2).unwrap();
        let sic = sic_from_fiducial(&fid).unwrap();
        assert!(sic.max_overlap_deviation() < 1e-14);
        let check = verify_sic(&sic, 1e-12).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn known_fiducial_pairwise_overlaps_one_third() {
        let sic = sic_from_fiducial(&known_fiducial(2).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let t = trace_inner(&sic.projectors()[i], &sic.projectors()[j]).unwrap();
                assert!((t.re - 1.0 / 3.0).abs() < 1e-14, "({i},{j}): {}", t.re);
                assert!(t.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn known_fiducial_unsupported_dimension() {
        assert!(matches!(
            known_fiducial(3),
            Err(Error::UnsupportedDimension { dim: 3, .. })
        ));
    }

    #[test]
    fn projector_sum_is_d_times_identity() {
        let sic = sic_from_fiducial(&known_fiducial(2).unwrap()).unwrap();
        let mut sum = ComplexMatrix::zeros(2);
        for p in sic.projectors() {
            sum = sum.add(p).unwrap();
        }
        let dev = sum
            .sub(&ComplexMatrix::identity(2).scale_re(2.0))
            .unwrap()
            .max_abs_entry();
        assert!(dev < 1e-12, "{dev:e}");
    }

    #[test]
    fn projectors_have_unit_trace() {
        let sic = sic_from_fiducial(&known_fiducial(2).unwrap()).unwrap();
        for p in sic.projectors() {
            assert!((p.trace().re - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn non_sic_fiducial_records_large_deviation() {
        let e1 = PureState::new(vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let sic = sic_from_fiducial(&e1).unwrap();
        assert!(sic.max_overlap_deviation() > 0.1);
        assert!(!verify_sic(&sic, 1e-9).unwrap().pass);
        assert!(sic.ensure_usable().is_err());
    }

    #[test]
    fn perturbed_fiducial_fails_verification() {
        let fid = known_fiducial(2).unwrap();
        let mut amps = fid.amplitudes().to_vec();
        // 1e-3 rotation toward the second basis vector
        amps[0] += Complex64::new(1e-3, 0.0);
        let perturbed = PureState::normalized(amps).unwrap();
        let sic = sic_from_fiducial(&perturbed).unwrap();
        let check = verify_sic(&sic, 1e-9).unwrap();
        assert!(!check.pass, "deviation {:e}", check.max_deviation);
    }

    #[test]
    fn wrong_projector_count_rejected() {
        let fid = known_fiducial(2).unwrap();
        let sic = sic_from_fiducial(&fid).unwrap();
        let mut short = sic.projectors().to_vec();
        short.pop();
        assert!(matches!(
            SicPovm::from_parts(2, fid, short),
            Err(Error::WrongProjectorCount { found: 3, expected: 4 })
        ));
    }

    #[test]
    fn group_covariance_permutes_projectors() {
        // Conjugating the projector set by any displacement permutes it.
        for d in [2usize, 3] {
            let fid = if d == 2 {
                known_fiducial(2).unwrap()
            } else {
                crate::whsic::search_fiducial(3, 41, 16, crate::whsic::POTENTIAL_TOL)
                    .unwrap()
                    .0
            };
            let sic = sic_from_fiducial(&fid).unwrap();
            for p in 0..d {
                for q in 0..d {
                    let op = displacement_operator(d, p, q).unwrap();
                    for pi in sic.projectors() {
                        let conj = op.mul(pi).unwrap().mul(&op.adjoint()).unwrap();
                        let matched = sic.projectors().iter().any(|pj| {
                            conj.sub(pj).unwrap().max_abs_entry() < 1e-10
                        });
                        assert!(matched, "d={d} ({p},{q}) image not in set");
                    }
                }
            }
        }
    }
}
