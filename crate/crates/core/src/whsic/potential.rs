//! Frame potential over the Weyl-Heisenberg orbit and its gradient.
//!
//! For a unit fiducial psi the potential is
//!     F(psi) = sum_{(p,q) != (0,0)} |<psi| D_{p,q} |psi>|^4 ,
//! bounded below by (d-1)/(d+1), with equality exactly when every
//! squared overlap equals 1/(d+1), i.e. when psi is a SIC fiducial.
//!
//! Because the nontrivial squared overlaps sum to d-1 for every unit
//! vector, the excess F - (d-1)/(d+1) equals the sum of squared overlap
//! residuals. The optimizer works with that residual form: evaluated
//! directly it has no catastrophic cancellation, so descent can keep
//! making progress down to residuals near 1e-13, far below where the
//! raw quartic sum goes numerically flat.

use num_complex::Complex64;

use super::displacement::nontrivial_displacements;
use crate::error::Result;
use crate::hermitian::{ComplexMatrix, PureState};

/// The global minimum (d-1)/(d+1) of the frame potential.
pub fn potential_lower_bound(d: usize) -> f64 {
    (d as f64 - 1.0) / (d as f64 + 1.0)
}

/// Precomputed displacement tables for one dimension.
pub(crate) struct FrameContext {
    pub dim: usize,
    ops: Vec<ComplexMatrix>,
    adjoints: Vec<ComplexMatrix>,
}

/// Per-point evaluation shared by the potential, the gradient, and the
/// optimizer: overlaps o_k = <psi|D_k|psi> plus the matrix-vector
/// products needed for derivatives, all at the *raw* (not necessarily
/// unit) psi.
pub(crate) struct OverlapData {
    pub overlaps: Vec<Complex64>,
    d_psi: Vec<Vec<Complex64>>,
    dadj_psi: Vec<Vec<Complex64>>,
    pub norm_sq: f64,
}

impl FrameContext {
    pub fn new(d: usize) -> Result<Self> {
        let ops = nontrivial_displacements(d)?;
        let adjoints = ops.iter().map(ComplexMatrix::adjoint).collect();
        Ok(Self { dim: d, ops, adjoints })
    }

    pub fn overlap_data(&self, psi: &[Complex64]) -> OverlapData {
        let d = self.dim;
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let mut overlaps = Vec::with_capacity(self.ops.len());
        let mut d_psi = Vec::with_capacity(self.ops.len());
        let mut dadj_psi = Vec::with_capacity(self.ops.len());
        for (op, adj) in self.ops.iter().zip(&self.adjoints) {
            let dv = matvec(op, psi, d);
            let av = matvec(adj, psi, d);
            let o: Complex64 = psi.iter().zip(&dv).map(|(a, b)| a.conj() * b).sum();
            overlaps.push(o);
            d_psi.push(dv);
            dadj_psi.push(av);
        }
        OverlapData {
            overlaps,
            d_psi,
            dadj_psi,
            norm_sq,
        }
    }

    /// Normalized squared overlaps t_k = |o_k|^2 / |psi|^4.
    pub fn squared_overlaps(&self, data: &OverlapData) -> Vec<f64> {
        let n4 = data.norm_sq * data.norm_sq;
        data.overlaps.iter().map(|o| o.norm_sqr() / n4).collect()
    }

    /// Frame potential of psi / |psi|.
    pub fn potential(&self, data: &OverlapData) -> f64 {
        self.squared_overlaps(data).iter().map(|t| t * t).sum()
    }

    /// Cancellation-free excess: sum_k (t_k - 1/(d+1))^2. Equals
    /// potential - lower bound for unit psi, up to rounding.
    pub fn excess(&self, data: &OverlapData) -> f64 {
        let c = 1.0 / (self.dim as f64 + 1.0);
        self.squared_overlaps(data)
            .iter()
            .map(|t| (t - c) * (t - c))
            .sum()
    }

    /// Largest |t_k - 1/(d+1)|; the overlap deviation the built SIC
    /// will report, up to projector-assembly rounding.
    pub fn max_overlap_residual(&self, data: &OverlapData) -> f64 {
        let c = 1.0 / (self.dim as f64 + 1.0);
        self.squared_overlaps(data)
            .iter()
            .map(|t| (t - c).abs())
            .fold(0.0, f64::max)
    }

    /// Gradient of sum_k w_k * t-hat_k in the 2d real parameters
    /// (re psi_0, im psi_0, re psi_1, ...), where t-hat_k is the
    /// normalized squared overlap. Both objective gradients below are
    /// weighted sums of this form.
    fn weighted_overlap_gradient(
        &self,
        psi: &[Complex64],
        data: &OverlapData,
        weights: &[f64],
    ) -> Vec<f64> {
        let d = self.dim;
        let n2 = data.norm_sq;
        let n4 = n2 * n2;
        // dF/dpsi* accumulated over k: w_k (o_k* D_k psi + o_k D_k^+ psi) / n^4
        let mut wirtinger = vec![Complex64::ZERO; d];
        let mut weighted_t_sum = 0.0;
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let o = data.overlaps[k];
            weighted_t_sum += w * o.norm_sqr() / n4;
            let oc = o.conj();
            for i in 0..d {
                wirtinger[i] += (data.d_psi[k][i] * oc + data.dadj_psi[k][i] * o) * w;
            }
        }
        // Radial term from the 1/|psi|^4 normalization:
        // grad(t-hat) = grad(t)/n^4 - 4 t-hat psi_real / n^2.
        let radial = 4.0 * weighted_t_sum / n2;
        let mut grad = Vec::with_capacity(2 * d);
        for i in 0..d {
            let g = wirtinger[i] * (2.0 / n4);
            grad.push(g.re - radial * psi[i].re);
            grad.push(g.im - radial * psi[i].im);
        }
        grad
    }

    /// Gradient of the normalized frame potential F(psi/|psi|).
    pub fn potential_gradient(&self, psi: &[Complex64], data: &OverlapData) -> Vec<f64> {
        let weights: Vec<f64> = self
            .squared_overlaps(data)
            .iter()
            .map(|t| 2.0 * t)
            .collect();
        self.weighted_overlap_gradient(psi, data, &weights)
    }

    /// Gradient of the excess sum_k (t_k - c)^2.
    pub fn excess_gradient(&self, psi: &[Complex64], data: &OverlapData) -> Vec<f64> {
        let c = 1.0 / (self.dim as f64 + 1.0);
        let weights: Vec<f64> = self
            .squared_overlaps(data)
            .iter()
            .map(|t| 2.0 * (t - c))
            .collect();
        self.weighted_overlap_gradient(psi, data, &weights)
    }

    /// Overlap residuals t_k - 1/(d+1), the least-squares vector the
    /// polish phase of the search drives to zero.
    pub fn residuals(&self, data: &OverlapData) -> Vec<f64> {
        let c = 1.0 / (self.dim as f64 + 1.0);
        self.squared_overlaps(data).iter().map(|t| t - c).collect()
    }

    /// Jacobian of the normalized squared overlaps: row k is the
    /// gradient of t-hat_k in the 2d real parameters.
    pub fn overlap_jacobian(&self, psi: &[Complex64], data: &OverlapData) -> Vec<Vec<f64>> {
        let n = data.overlaps.len();
        let mut rows = Vec::with_capacity(n);
        let mut weights = vec![0.0; n];
        for k in 0..n {
            weights[k] = 1.0;
            rows.push(self.weighted_overlap_gradient(psi, data, &weights));
            weights[k] = 0.0;
        }
        rows
    }
}

fn matvec(m: &ComplexMatrix, v: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; d];
    for i in 0..d {
        let mut acc = Complex64::ZERO;
        for j in 0..d {
            acc += m[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}

/// Frame potential of a unit fiducial.
pub fn frame_potential(fiducial: &PureState) -> Result<f64> {
    let ctx = FrameContext::new(fiducial.dim())?;
    let data = ctx.overlap_data(fiducial.amplitudes());
    Ok(ctx.potential(&data))
}

/// Gradient of the normalized frame potential at an arbitrary nonzero
/// psi, in the interleaved real parameterization (re_0, im_0, re_1, ...).
pub fn frame_potential_gradient(psi: &[Complex64]) -> Result<Vec<f64>> {
    let ctx = FrameContext::new(psi.len())?;
    let data = ctx.overlap_data(psi);
    Ok(ctx.potential_gradient(psi, &data))
}

/// Normalized frame potential at an arbitrary nonzero psi; the scalar
/// the gradient above differentiates.
pub fn frame_potential_raw(psi: &[Complex64]) -> Result<f64> {
    let ctx = FrameContext::new(psi.len())?;
    let data = ctx.overlap_data(psi);
    Ok(ctx.potential(&data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::haar_random_pure;
    use crate::rng::SplitMix64;

    #[test]
    fn standard_basis_vector_potential_is_one_at_d2() {
        // Overlap with Z has modulus 1, with X and Y zero: 1 + 0 + 0.
        let e1 = PureState::new(vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let f = frame_potential(&e1).unwrap();
        assert!((f - 1.0).abs() < 1e-14, "{f}");
    }

    #[test]
    fn known_fiducial_reaches_lower_bound() {
        let fid = crate::whsic::known_fiducial(2).unwrap();
        let f = frame_potential(&fid).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 1e-14, "{f}");
    }

    #[test]
    fn welch_bound_holds_on_random_states() {
        for d in 2..=8 {
            let mut seeds = SplitMix64::new(d as u64);
            for _ in 0..1000 {
                let psi = haar_random_pure(d, seeds.next_u64()).unwrap();
                let f = frame_potential(&psi).unwrap();
                assert!(
                    f >= potential_lower_bound(d) - 1e-12,
                    "d={d}: {f} < bound"
                );
            }
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        // Relative error < 1e-6 against an O(h^2) central difference of
        // the normalized potential.
        let h = 1e-6;
        for d in 2..=6 {
            let mut seeds = SplitMix64::new(900 + d as u64);
            for _ in 0..10 {
                let psi = haar_random_pure(d, seeds.next_u64()).unwrap();
                let mut raw: Vec<Complex64> = psi.amplitudes().to_vec();
                let grad = frame_potential_gradient(&raw).unwrap();
                let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                for idx in 0..2 * d {
                    let bump = |r: &mut Vec<Complex64>, delta: f64| {
                        let z = &mut r[idx / 2];
                        if idx % 2 == 0 {
                            *z += Complex64::new(delta, 0.0);
                        } else {
                            *z += Complex64::new(0.0, delta);
                        }
                    };
                    bump(&mut raw, h);
                    let fp = frame_potential_raw(&raw).unwrap();
                    bump(&mut raw, -2.0 * h);
                    let fm = frame_potential_raw(&raw).unwrap();
                    bump(&mut raw, h);
                    let fd = (fp - fm) / (2.0 * h);
                    assert!(
                        (fd - grad[idx]).abs() <= 1e-6 * gnorm.max(1e-6),
                        "d={d} idx={idx}: fd={fd:e} analytic={:e}",
                        grad[idx]
                    );
                }
            }
        }
    }

    #[test]
    fn excess_agrees_with_potential_minus_bound() {
        for d in 2..=6 {
            let psi = haar_random_pure(d, 33 + d as u64).unwrap();
            let ctx = FrameContext::new(d).unwrap();
            let data = ctx.overlap_data(psi.amplitudes());
            let excess = ctx.excess(&data);
            let diff = ctx.potential(&data) - potential_lower_bound(d);
            assert!((excess - diff).abs() < 1e-12, "d={d}");
        }
    }
}
