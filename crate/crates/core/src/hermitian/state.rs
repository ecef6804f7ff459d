//! States and measurements: pure vectors, density operators, POVMs,
//! orthonormal completion, and seeded random sources for all of them.

use num_complex::Complex64;

use super::eig::{eigh, min_eigenvalue};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::tol;

/// Unit vector in C^d.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes that are already normalized (within [`tol::NORM`]).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroVector);
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes and wraps; rejects zero and near-zero inputs.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = vector_norm(&amplitudes);
        if norm < 1e-12 {
            return Err(Error::ZeroVector);
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |self><self|.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        })
    }
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace-one positive semidefinite Hermitian operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = matrix.validated()?;
        let herm = matrix.hermiticity_error();
        if herm > tol::HERM {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::BadTrace(tr.re));
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -tol::PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// tr(rho^2), equal to 1 exactly when the state is pure.
    pub fn purity(&self) -> f64 {
        self.matrix
            .trace_product(&self.matrix)
            .expect("same dimension")
            .re
    }
}

/// Positive operator-valued measure: Hermitian PSD elements summing to
/// the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    outcomes: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(outcomes: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = outcomes.first() else {
            return Err(Error::PovmSum(1.0));
        };
        let d = first.dim();
        let mut sum = ComplexMatrix::zeros(d);
        for f in &outcomes {
            if f.dim() != d {
                return Err(Error::DimensionMismatch(f.dim(), d));
            }
            let herm = f.hermiticity_error();
            if herm > tol::HERM {
                return Err(Error::NotHermitian(herm));
            }
            let min = min_eigenvalue(f)?;
            if min < -tol::PSD {
                return Err(Error::NotPsd(min));
            }
            sum = sum.add(f)?;
        }
        let dev = sum.sub(&ComplexMatrix::identity(d))?.max_abs_entry();
        if dev > tol::SUM {
            return Err(Error::PovmSum(dev));
        }
        Ok(Self { outcomes })
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn from_onb(basis: &[PureState]) -> Result<Self> {
        Self::new(basis.iter().map(PureState::projector).collect())
    }

    pub fn outcomes(&self) -> &[ComplexMatrix] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].dim()
    }
}

/// Orthonormal basis whose first element is `v`.
///
/// Completion candidates are the standard basis vectors in order, with
/// Gram-Schmidt applied twice per candidate; candidates whose residual
/// drops below [`tol::GS_RESIDUAL`] are skipped as dependent.
pub fn onb_containing(v: &PureState) -> Result<Vec<PureState>> {
    let d = v.dim();
    let mut basis: Vec<Vec<Complex64>> = vec![v.amplitudes().to_vec()];

    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut cand = vec![Complex64::ZERO; d];
        cand[k] = Complex64::ONE;
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 =
                    b.iter().zip(&cand).map(|(bi, ci)| bi.conj() * ci).sum();
                for (ci, bi) in cand.iter_mut().zip(b) {
                    *ci -= overlap * bi;
                }
            }
        }
        let norm = vector_norm(&cand);
        if norm < tol::GS_RESIDUAL {
            continue;
        }
        for c in cand.iter_mut() {
            *c /= norm;
        }
        basis.push(cand);
    }

    if basis.len() != d {
        return Err(Error::OnbCompletion(
            "ran out of candidates before completing the basis",
        ));
    }
    basis.into_iter().map(PureState::new).collect()
}

/// Random density matrix from the Ginibre ensemble: G G^dagger / tr,
/// with G filled row-major by standard complex Gaussians.
pub fn random_ginibre_density(d: usize, seed: u64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut rng = SplitMix64::new(seed);
    let rho = ginibre_density_from(&mut rng, d)?;
    DensityMatrix::new(rho)
}

fn ginibre_density_from(rng: &mut SplitMix64, d: usize) -> Result<ComplexMatrix> {
    let g = ComplexMatrix::from_fn(d, |_, _| rng.next_complex_gaussian());
    let gg = g.mul(&g.adjoint())?;
    let tr = gg.trace().re;
    Ok(gg.scale_re(1.0 / tr).hermitized())
}

/// Haar-random pure state: normalized vector of standard complex
/// Gaussians, drawn in index order.
pub fn haar_random_pure(d: usize, seed: u64) -> Result<PureState> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut rng = SplitMix64::new(seed);
    haar_pure_from(&mut rng, d)
}

pub(crate) fn haar_pure_from(rng: &mut SplitMix64, d: usize) -> Result<PureState> {
    loop {
        let amps: Vec<Complex64> = (0..d).map(|_| rng.next_complex_gaussian()).collect();
        match PureState::normalized(amps) {
            Ok(state) => return Ok(state),
            Err(Error::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Random m-outcome POVM: Ginibre-distributed positive operators A_j,
/// sandwiched as S^{-1/2} A_j S^{-1/2} with S their sum.
pub fn random_povm(d: usize, m: usize, seed: u64) -> Result<Povm> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if m == 0 {
        return Err(Error::PovmSum(1.0));
    }
    let mut rng = SplitMix64::new(seed);
    let raw: Vec<ComplexMatrix> = (0..m)
        .map(|_| {
            let g = ComplexMatrix::from_fn(d, |_, _| rng.next_complex_gaussian());
            g.mul(&g.adjoint()).map(|gg| gg.hermitized())
        })
        .collect::<Result<_>>()?;

    let mut sum = ComplexMatrix::zeros(d);
    for a in &raw {
        sum = sum.add(a)?;
    }
    let inv_sqrt = invsqrt_hermitian(&sum)?;
    let outcomes = raw
        .into_iter()
        .map(|a| {
            inv_sqrt
                .mul(&a)
                .and_then(|m| m.mul(&inv_sqrt))
                .map(|m| m.hermitized())
        })
        .collect::<Result<_>>()?;
    Povm::new(outcomes)
}

/// S^{-1/2} for positive definite S, via eigendecomposition.
fn invsqrt_hermitian(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(s)?;
    if vals[0] <= 0.0 {
        return Err(Error::NotPsd(vals[0]));
    }
    let d = s.dim();
    let mut out = ComplexMatrix::zeros(d);
    for k in 0..d {
        let w = 1.0 / vals[k].sqrt();
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += vecs[(i, k)] * vecs[(j, k)].conj() * w;
            }
        }
    }
    Ok(out.hermitized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ginibre_is_deterministic() {
        let a = random_ginibre_density(2, 99).unwrap();
        let b = random_ginibre_density(2, 99).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn ginibre_trace_one() {
        for seed in 0..10 {
            let rho = random_ginibre_density(3, seed).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < tol::TRACE);
        }
    }

    #[test]
    fn ginibre_generically_mixed() {
        // Purity < 1 on every draw; Ginibre states are almost surely mixed.
        for seed in 0..100 {
            let rho = random_ginibre_density(3, 40_000 + seed).unwrap();
            assert!(rho.purity() < 1.0 - 1e-3, "seed {seed}: purity {}", rho.purity());
        }
    }

    #[test]
    fn ginibre_rejects_small_dimension() {
        assert!(matches!(
            random_ginibre_density(1, 0),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn haar_pure_unit_norm_and_distinct_seeds() {
        let a = haar_random_pure(4, 1).unwrap();
        let b = haar_random_pure(4, 2).unwrap();
        assert!((a.norm() - 1.0).abs() < tol::NORM);
        assert!((b.norm() - 1.0).abs() < tol::NORM);
        assert!(a != b);
    }

    #[test]
    fn haar_projector_idempotent() {
        let v = haar_random_pure(5, 31).unwrap();
        let p = v.projector();
        let p2 = p.mul(&p).unwrap();
        assert!(p2.sub(&p).unwrap().max_abs_entry() < 1e-14);
        assert!((p.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn onb_from_standard_vector() {
        let v = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let basis = onb_containing(&v).unwrap();
        assert_eq!(basis.len(), 2);
        assert!((basis[0].amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((basis[1].amplitudes()[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn onb_gram_is_identity() {
        for d in 2..=8 {
            let v = haar_random_pure(d, 7000 + d as u64).unwrap();
            let basis = onb_containing(&v).unwrap();
            assert_eq!(basis.len(), d);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let g = a.inner(b).unwrap();
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (g - c(target, 0.0)).norm() < tol::ORTH,
                        "d={d} ({i},{j}): {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn onb_projectors_sum_to_identity() {
        let v = haar_random_pure(6, 123).unwrap();
        let basis = onb_containing(&v).unwrap();
        let mut sum = ComplexMatrix::zeros(6);
        for b in &basis {
            sum = sum.add(&b.projector()).unwrap();
        }
        let dev = sum.sub(&ComplexMatrix::identity(6)).unwrap().max_abs_entry();
        assert!(dev < tol::SUM);
        // and they form a valid POVM
        assert!(Povm::from_onb(&basis).is_ok());
    }

    #[test]
    fn random_povm_valid_and_deterministic() {
        let p1 = random_povm(3, 5, 17).unwrap();
        let p2 = random_povm(3, 5, 17).unwrap();
        assert_eq!(p1.len(), 5);
        for (a, b) in p1.outcomes().iter().zip(p2.outcomes()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn density_rejects_bad_trace_and_non_psd() {
        let double = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(double),
            Err(Error::BadTrace(_))
        ));
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPsd(_))));
    }

    #[test]
    fn pure_state_norm_enforced() {
        assert!(PureState::new(vec![c(0.7, 0.0), c(0.7, 0.0)]).is_err());
        assert!(PureState::normalized(vec![c(0.0, 0.0); 3]).is_err());
    }
}
