//! Certainty experiments: ground measurements with in-step
//! unpredictability (ISU) that achieve the ideal of certainty, their
//! priors, Gram matrix, and the universal angle.
//!
//! The construction realizes the quantum case with m0 = d outcomes: the
//! ground measurement is the orthonormal basis containing the
//! eigenvector of a chosen SIC projector, so exactly one of the derived
//! priors is a basis state.

use crate::error::{Error, Result};
use crate::hermitian::{eigh, onb_containing, ComplexMatrix, Povm, PureState};
use crate::representation::{
    basis_states, conditional_matrix, is_valid_quantum_prob, sic_alpha, sic_beta, urgleichung,
    ConditionalMatrix, ProbVector,
};
use crate::tol;
use crate::whsic::SicPovm;

/// Report of an in-step-unpredictability check.
#[derive(Debug, Clone, Copy)]
pub struct IsuReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// ISU requires every conditional row to sum to n/m: a uniform prior in
/// the sky then forces a uniform distribution on the ground.
pub fn isu_check(r: &ConditionalMatrix, tol: f64) -> IsuReport {
    let target = r.sky_outcomes() as f64 / r.ground_outcomes() as f64;
    let max_deviation = r
        .rows()
        .iter()
        .map(|row| (row.iter().sum::<f64>() - target).abs())
        .fold(0.0, f64::max);
    IsuReport {
        max_deviation,
        pass: max_deviation < tol,
    }
}

/// A ground measurement achieving the ideal of certainty, with its
/// conditional matrix, priors, and Gram matrix.
#[derive(Debug, Clone)]
pub struct CertaintyExperiment {
    dim: usize,
    sic: SicPovm,
    ground_basis: Vec<PureState>,
    conditional: ConditionalMatrix,
    priors: Vec<ProbVector>,
    gram: Vec<Vec<f64>>,
    align_index: usize,
}

impl CertaintyExperiment {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sic(&self) -> &SicPovm {
        &self.sic
    }

    pub fn ground_basis(&self) -> &[PureState] {
        &self.ground_basis
    }

    pub fn conditional(&self) -> &ConditionalMatrix {
        &self.conditional
    }

    /// Priors p_k(i) = (m/n) r(k|i), one per ground outcome.
    pub fn priors(&self) -> &[ProbVector] {
        &self.priors
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    /// Zero-based index of the SIC projector the ground basis is
    /// aligned with; priors()[0] equals that basis state.
    pub fn align_index(&self) -> usize {
        self.align_index
    }

    /// Worst certainty residual max_{j,k} |q_k(j) - delta_jk| over all
    /// priors fed back through the Urgleichung.
    pub fn certainty_residual(&self) -> Result<f64> {
        let d = self.dim;
        let mut worst = 0.0f64;
        for (k, prior) in self.priors.iter().enumerate() {
            let q = urgleichung(prior, &self.conditional, sic_alpha(d), sic_beta(d))?;
            for (j, &qj) in q.entries().iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((qj - target).abs());
            }
        }
        Ok(worst)
    }
}

/// Build the certainty experiment aligned with SIC projector
/// `align_index` (zero-based, < d^2).
pub fn build_certainty_experiment(sic: &SicPovm, align_index: usize) -> Result<CertaintyExperiment> {
    sic.ensure_usable()?;
    let d = sic.dim();
    let n = d * d;
    if align_index >= n {
        return Err(Error::IndexOutOfRange {
            index: align_index,
            len: n,
        });
    }

    let eigvec = projector_eigenvector(&sic.projectors()[align_index])?;
    let ground_basis = onb_containing(&eigvec)?;
    let ground = Povm::from_onb(&ground_basis)?;
    let conditional = conditional_matrix(&ground, sic)?;

    let isu = isu_check(&conditional, 1e-10);
    if !isu.pass {
        return Err(Error::NotStochastic {
            sky_index: 0,
            sum: isu.max_deviation,
        });
    }

    // Priors per reciprocity: p_k(i) = (m/n) r(k|i).
    let scale = d as f64 / n as f64;
    let priors: Vec<ProbVector> = conditional
        .rows()
        .iter()
        .map(|row| ProbVector::new(row.iter().map(|&x| x * scale).collect()))
        .collect::<Result<_>>()?;

    for prior in &priors {
        if !is_valid_quantum_prob(prior, sic, tol::PSD)? {
            return Err(Error::NotPsd(f64::NAN));
        }
    }

    // Condition (ii): the aligned prior coincides with a basis state.
    let basis = basis_states(n, sic_alpha(d), sic_beta(d))?;
    let aligned_dev = priors[0]
        .entries()
        .iter()
        .zip(basis[align_index].entries())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if aligned_dev > 1e-10 {
        return Err(Error::TripleProductInvariant(format!(
            "aligned prior deviates from basis state by {aligned_dev:e}"
        )));
    }

    let gram = gram_of(&priors);
    Ok(CertaintyExperiment {
        dim: d,
        sic: sic.clone(),
        ground_basis,
        conditional,
        priors,
        gram,
        align_index,
    })
}

/// Unit eigenvector of a rank-1 projector: the largest-norm column,
/// normalized. Columns of |v><v| are v times a scalar, and the largest
/// one has norm >= 1/sqrt(d); a full eigendecomposition is the fallback
/// for inputs too degenerate for that extraction.
fn projector_eigenvector(pi: &ComplexMatrix) -> Result<PureState> {
    let d = pi.dim();
    let (best_col, best_norm) = (0..d)
        .map(|j| {
            let norm = (0..d).map(|i| pi[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            (j, norm)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonzero dimension");
    if best_norm > 1e-6 {
        PureState::normalized((0..d).map(|i| pi[(i, best_col)]).collect())
    } else {
        let (_, vectors) = eigh(pi)?;
        // eigenvalues ascend; the rank-1 direction is the last column
        PureState::normalized((0..d).map(|i| vectors[(i, d - 1)]).collect())
    }
}

fn gram_of(priors: &[ProbVector]) -> Vec<Vec<f64>> {
    priors
        .iter()
        .map(|a| {
            priors
                .iter()
                .map(|b| {
                    a.entries()
                        .iter()
                        .zip(b.entries())
                        .map(|(x, y)| x * y)
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Gram matrix <<p_j || p_k>> of the experiment's priors.
pub fn gram_matrix(exp: &CertaintyExperiment) -> Vec<Vec<f64>> {
    gram_of(exp.priors())
}

/// Entry the Gram matrix must equal: (1/alpha)((m0/n) delta_jk + beta).
pub fn gram_prediction(d: usize, j: usize, k: usize) -> f64 {
    let alpha = sic_alpha(d);
    let beta = sic_beta(d);
    let ratio = d as f64 / (d * d) as f64;
    (if j == k { ratio } else { 0.0 } + beta) / alpha
}

/// cos theta = gram(1,2)/gram(1,1); equals 1/2 for every SIC-based
/// experiment.
pub fn universal_angle(exp: &CertaintyExperiment) -> Result<f64> {
    if exp.priors().len() < 2 {
        return Err(Error::DegenerateGram);
    }
    let g = exp.gram();
    if g[0][0] <= 0.0 {
        return Err(Error::DegenerateGram);
    }
    Ok(g[0][1] / g[0][0])
}

/// The closed form (n - m0)/((m0 - 1)^2 + n - 1) the measured angle is
/// cross-checked against.
pub fn universal_angle_closed_form(n: usize, m0: usize) -> f64 {
    (n as f64 - m0 as f64) / ((m0 as f64 - 1.0).powi(2) + n as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random_povm;
    use crate::representation::total_probability;
    use crate::whsic::{known_fiducial, search_fiducial, sic_from_fiducial, POTENTIAL_TOL};

    fn sic2() -> SicPovm {
        sic_from_fiducial(&known_fiducial(2).unwrap()).unwrap()
    }

    #[test]
    fn onb_ground_is_isu() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 0).unwrap();
        let report = isu_check(exp.conditional(), 1e-10);
        assert!(report.pass, "deviation {:e}", report.max_deviation);
    }

    #[test]
    fn sic_as_its_own_ground_is_isu() {
        let sic = sic2();
        let ground = Povm::new(sic.povm_elements()).unwrap();
        let r = conditional_matrix(&ground, &sic).unwrap();
        let report = isu_check(&r, 1e-10);
        assert!(report.pass); // row sums 1 = n/m with m = n
    }

    #[test]
    fn skewed_povm_fails_isu() {
        // Row sums are d * tr(F_j); with outcomes {Pi_1, I - Pi_1} the
        // traces are 1 and d-1, and ISU would need both to equal d/2,
        // impossible from d = 3 up. (At d = 2 this POVM happens to be
        // ISU, so the skew only shows in higher dimension.)
        let (fid, _) = search_fiducial(3, 5, 16, POTENTIAL_TOL).unwrap();
        let sic = sic_from_fiducial(&fid).unwrap();
        let pi1 = sic.projectors()[0].clone();
        let rest = ComplexMatrix::identity(3).sub(&pi1).unwrap();
        let ground = Povm::new(vec![pi1, rest]).unwrap();
        let r = conditional_matrix(&ground, &sic).unwrap();
        let report = isu_check(&r, 1e-10);
        assert!(!report.pass);
    }

    #[test]
    fn aligned_prior_is_basis_state() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 0).unwrap();
        let expected = [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (x, e) in exp.priors()[0].entries().iter().zip(expected) {
            assert!((x - e).abs() < 1e-12, "{x} vs {e}");
        }
    }

    #[test]
    fn priors_are_valid_quantum_states() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 2).unwrap();
        for prior in exp.priors() {
            assert!(is_valid_quantum_prob(prior, &sic, tol::PSD).unwrap());
        }
    }

    #[test]
    fn priors_achieve_certainty() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 1).unwrap();
        let residual = exp.certainty_residual().unwrap();
        assert!(residual < 1e-10, "{residual:e}");
    }

    #[test]
    fn gram_matches_prediction_at_d2() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 0).unwrap();
        let g = exp.gram();
        for j in 0..2 {
            for k in 0..2 {
                let expected = if j == k { 1.0 / 3.0 } else { 1.0 / 6.0 };
                assert!((g[j][k] - expected).abs() < 1e-12, "({j},{k})");
                assert!((gram_prediction(2, j, k) - expected).abs() < 1e-15);
            }
        }
        // diagonal equals the basis-state squared norm
        let norm_sq = crate::representation::basis_state_norm_sq(4, 3.0, 0.5);
        assert!((g[0][0] - norm_sq).abs() < 1e-12);
    }

    #[test]
    fn gram_is_symmetric() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 3).unwrap();
        let g = gram_matrix(&exp);
        for j in 0..2 {
            for k in 0..2 {
                assert!((g[j][k] - g[k][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn universal_angle_is_one_half() {
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 0).unwrap();
        let cos = universal_angle(&exp).unwrap();
        assert!((cos - 0.5).abs() < 1e-10, "{cos}");
        assert!((universal_angle_closed_form(4, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_simplifies_to_half_for_squares() {
        for d in 2..=8 {
            let cos = universal_angle_closed_form(d * d, d);
            assert!((cos - 0.5).abs() < 1e-15, "d={d}");
        }
    }

    #[test]
    fn classical_case_angle_vanishes() {
        // n = m0 corresponds to q = 0: numerator n - m0 = 0.
        for m0 in 2..=10 {
            assert_eq!(universal_angle_closed_form(m0, m0), 0.0);
        }
    }

    #[test]
    fn angle_independent_of_align_index_and_fiducial() {
        let (fid_a, _) = search_fiducial(3, 5, 16, POTENTIAL_TOL).unwrap();
        let (fid_b, _) = search_fiducial(3, 1234, 16, POTENTIAL_TOL).unwrap();
        let sic_a = sic_from_fiducial(&fid_a).unwrap();
        let sic_b = sic_from_fiducial(&fid_b).unwrap();
        let mut angles = Vec::new();
        for align in [0usize, 4, 8] {
            let exp = build_certainty_experiment(&sic_a, align).unwrap();
            angles.push(universal_angle(&exp).unwrap());
        }
        let exp_b = build_certainty_experiment(&sic_b, 0).unwrap();
        angles.push(universal_angle(&exp_b).unwrap());
        for pair in angles.windows(2) {
            assert!((pair[0] - pair[1]).abs() < 1e-9, "{angles:?}");
        }
    }

    #[test]
    fn every_align_index_builds_a_valid_experiment() {
        // The four experiment invariants hold for every alignment, not
        // just the default one (build_certainty_experiment re-checks
        // them all internally).
        let sic = sic2();
        for align in 0..4 {
            let exp = build_certainty_experiment(&sic, align).unwrap();
            assert_eq!(exp.align_index(), align);
            assert!(exp.certainty_residual().unwrap() < 1e-10);
            assert!((universal_angle(&exp).unwrap() - 0.5).abs() < 1e-10);
        }
        let (fid, _) = search_fiducial(4, 9, 16, POTENTIAL_TOL).unwrap();
        let sic4 = sic_from_fiducial(&fid).unwrap();
        for align in [0usize, 7, 15] {
            let exp = build_certainty_experiment(&sic4, align).unwrap();
            assert!(exp.certainty_residual().unwrap() < 1e-10);
        }
    }

    #[test]
    fn align_index_out_of_range() {
        let sic = sic2();
        assert!(matches!(
            build_certainty_experiment(&sic, 4),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn uniform_prior_stays_uniform_both_ways() {
        // ISU in both senses: law of total probability and Urgleichung
        // send the flat prior to the flat ground distribution.
        let sic = sic2();
        let exp = build_certainty_experiment(&sic, 0).unwrap();
        let uniform = ProbVector::uniform(4);
        let s = total_probability(&uniform, exp.conditional()).unwrap();
        let q = urgleichung(&uniform, exp.conditional(), 3.0, 0.5).unwrap();
        for (&sj, &qj) in s.entries().iter().zip(q.entries()) {
            assert!((sj - 0.5).abs() < 1e-13);
            assert!((qj - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn random_povm_ground_generally_not_isu() {
        let sic = sic2();
        let ground = random_povm(2, 3, 8).unwrap();
        let r = conditional_matrix(&ground, &sic).unwrap();
        assert!(!isu_check(&r, 1e-10).pass);
    }
}
