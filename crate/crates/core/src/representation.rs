//! The SIC representation of quantum states: Born rule and its inverse,
//! the Urgleichung and the law of total probability it modifies, the
//! Urungleichung window, triple products with the pure-state residuals,
//! and the basis states.
//!
//! Throughout, a state is a point p of the probability simplex with
//! n = d^2 components, p(i) = tr(rho Pi_i)/d. The quantum constants are
//! alpha = d + 1 and beta = 1/d; the operations below take alpha and
//! beta as arguments so the classical (alpha = 1, beta = 0) and
//! generalized theories run through the same code.

use crate::error::{Error, Result};
use crate::hermitian::{is_psd, min_eigenvalue, ComplexMatrix, DensityMatrix, Povm};
use crate::tol;
use crate::whsic::SicPovm;

/// The sky-side affine coefficient alpha = d + 1.
pub fn sic_alpha(d: usize) -> f64 {
    d as f64 + 1.0
}

/// The sky-side affine offset beta = 1/d.
pub fn sic_beta(d: usize) -> f64 {
    1.0 / d as f64
}

/// A point of the probability simplex.
///
/// Entries in [-1e-14, 0) are clamped to zero and the vector is
/// renormalized; anything more negative, or a sum off 1 by more than
/// [`tol::PROB`], is rejected. The clamp separates rounding noise from
/// genuine negativity, which always signals non-quantum inputs upstream.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() || !entries.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for x in entries.iter_mut() {
            if *x < 0.0 {
                if *x < -tol::PROB_CLAMP {
                    return Err(Error::NegativeProbability(*x));
                }
                *x = 0.0;
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > tol::PROB {
            return Err(Error::ProbSum(sum));
        }
        for x in entries.iter_mut() {
            *x /= sum;
        }
        Ok(Self { entries })
    }

    /// The state of complete ignorance (1/n, ..., 1/n).
    pub fn uniform(n: usize) -> Self {
        Self {
            entries: vec![1.0 / n as f64; n],
        }
    }

    /// Simplex vertex: 1 at `index`, 0 elsewhere.
    pub fn vertex(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        let mut entries = vec![0.0; n];
        entries[index] = 1.0;
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Squared Euclidean norm sum_i p(i)^2.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }
}

/// The conditional probabilities r(j|i) of ground outcome j given sky
/// outcome i: an m x n matrix, stochastic in j for every i.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMatrix {
    ground_outcomes: usize,
    sky_outcomes: usize,
    /// rows[j][i] = r(j|i)
    rows: Vec<Vec<f64>>,
}

impl ConditionalMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let Some(n) = rows.first().map(Vec::len) else {
            return Err(Error::NonFinite);
        };
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            if !row.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let mut rows = rows;
        for i in 0..n {
            let mut col_sum = 0.0;
            for row in rows.iter_mut() {
                let x = &mut row[i];
                if *x < 0.0 {
                    if *x < -tol::PROB_CLAMP {
                        return Err(Error::NegativeProbability(*x));
                    }
                    *x = 0.0;
                }
                col_sum += *x;
            }
            if (col_sum - 1.0).abs() > tol::PROB {
                return Err(Error::NotStochastic {
                    sky_index: i,
                    sum: col_sum,
                });
            }
        }
        Ok(Self {
            ground_outcomes: m,
            sky_outcomes: n,
            rows,
        })
    }

    pub fn ground_outcomes(&self) -> usize {
        self.ground_outcomes
    }

    pub fn sky_outcomes(&self) -> usize {
        self.sky_outcomes
    }

    pub fn entry(&self, ground: usize, sky: usize) -> f64 {
        self.rows[ground][sky]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// y_j = sum_i x_i r(j|i). Both the law of total probability and the
    /// Urgleichung are this map, applied to different vectors.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(r, xi)| r * xi).sum())
            .collect()
    }
}

/// Born rule in SIC coordinates: p(i) = tr(rho Pi_i)/d.
pub fn state_to_probs(rho: &DensityMatrix, sic: &SicPovm) -> Result<ProbVector> {
    if rho.dim() != sic.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sic.dim()));
    }
    sic.ensure_usable()?;
    let d = sic.dim() as f64;
    let entries = sic
        .projectors()
        .iter()
        .map(|pi| {
            let t = rho.matrix().trace_product(pi)?;
            debug_assert!(t.im.abs() < tol::HERM);
            debug_assert!(t.re / d <= 1.0 / d + tol::PROB_CLAMP);
            Ok(t.re / d)
        })
        .collect::<Result<Vec<f64>>>()?;
    ProbVector::new(entries)
}

/// Inverse Born rule: rho = sum_i ((d+1) p(i) - 1/d) Pi_i.
///
/// Always Hermitian with unit trace; positive semidefinite exactly when
/// p is a valid quantum state, so the return type is a plain matrix.
pub fn probs_to_state(p: &ProbVector, sic: &SicPovm) -> Result<ComplexMatrix> {
    let d = sic.dim();
    if p.len() != d * d {
        return Err(Error::DimensionMismatch(p.len(), d * d));
    }
    sic.ensure_usable()?;
    let alpha = sic_alpha(d);
    let beta = sic_beta(d);
    let mut out = ComplexMatrix::zeros(d);
    for (pi, &prob) in sic.projectors().iter().zip(p.entries()) {
        out = out.add(&pi.scale_re(alpha * prob - beta))?;
    }
    Ok(out.hermitized())
}

/// Does p describe a quantum state? Exact criterion: the reconstructed
/// operator is positive semidefinite (its trace is 1 automatically).
pub fn is_valid_quantum_prob(p: &ProbVector, sic: &SicPovm, tol: f64) -> Result<bool> {
    let rho = probs_to_state(p, sic)?;
    is_psd(&rho, tol)
}

/// Smallest eigenvalue of the reconstruction, the diagnostic behind
/// [`is_valid_quantum_prob`].
pub fn reconstruction_min_eigenvalue(p: &ProbVector, sic: &SicPovm) -> Result<f64> {
    min_eigenvalue(&probs_to_state(p, sic)?)
}

/// Conditional matrix of a ground measurement against the SIC in the
/// sky: r(j|i) = tr(Pi_i F_j).
pub fn conditional_matrix(ground: &Povm, sic: &SicPovm) -> Result<ConditionalMatrix> {
    if ground.dim() != sic.dim() {
        return Err(Error::DimensionMismatch(ground.dim(), sic.dim()));
    }
    sic.ensure_usable()?;
    let rows = ground
        .outcomes()
        .iter()
        .map(|f| {
            sic.projectors()
                .iter()
                .map(|pi| {
                    let t = pi.trace_product(f)?;
                    debug_assert!(t.im.abs() < tol::HERM);
                    Ok(t.re)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ConditionalMatrix::new(rows)
}

/// Law of total probability: s(j) = sum_i p(i) r(j|i).
pub fn total_probability(p: &ProbVector, r: &ConditionalMatrix) -> Result<ProbVector> {
    if p.len() != r.sky_outcomes() {
        return Err(Error::DimensionMismatch(p.len(), r.sky_outcomes()));
    }
    ProbVector::new(r.apply(p.entries()))
}

/// Generalized Urgleichung: q(j) = sum_i (alpha p(i) - beta) r(j|i).
///
/// Requires alpha = n beta + 1 (which makes the output sum to one) and
/// every q(j) inside the Urungleichung window [0, 1]; an output outside
/// the window means the (p, r) pair is not quantum and is reported as
/// an error rather than silently clamped.
pub fn urgleichung(
    p: &ProbVector,
    r: &ConditionalMatrix,
    alpha: f64,
    beta: f64,
) -> Result<ProbVector> {
    let q = urgleichung_raw(p, r, alpha, beta)?;
    for (j, &qj) in q.iter().enumerate() {
        if !(-tol::URUNGLEICHUNG..=1.0 + tol::URUNGLEICHUNG).contains(&qj) {
            return Err(Error::UrungleichungViolation { index: j, value: qj });
        }
    }
    ProbVector::new(q.into_iter().map(|x| x.max(0.0)).collect())
}

/// The Urgleichung sum without the probability-window validation.
fn urgleichung_raw(
    p: &ProbVector,
    r: &ConditionalMatrix,
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>> {
    let n = r.sky_outcomes();
    if p.len() != n {
        return Err(Error::DimensionMismatch(p.len(), n));
    }
    let constraint = (alpha - (n as f64 * beta + 1.0)).abs();
    if constraint > 1e-12 {
        return Err(Error::AffineConstraint(constraint));
    }
    let transformed: Vec<f64> = p.entries().iter().map(|&pi| alpha * pi - beta).collect();
    Ok(r.apply(&transformed))
}

/// Urungleichung test: 0 <= sum_i (alpha p(i) - beta) r(j|i) <= 1 for
/// every ground outcome j, within 1e-12. No affine constraint is
/// required here; the window is checked for whatever (alpha, beta) the
/// caller supplies.
pub fn urungleichung_check(
    p: &ProbVector,
    r: &ConditionalMatrix,
    alpha: f64,
    beta: f64,
) -> Result<bool> {
    if p.len() != r.sky_outcomes() {
        return Err(Error::DimensionMismatch(p.len(), r.sky_outcomes()));
    }
    let transformed: Vec<f64> = p.entries().iter().map(|&pi| alpha * pi - beta).collect();
    Ok(r
        .apply(&transformed)
        .iter()
        .all(|&qj| (-tol::URUNGLEICHUNG..=1.0 + tol::URUNGLEICHUNG).contains(&qj)))
}

/// The real triple products c_ijk = Re tr(Pi_i Pi_j Pi_k), stored dense.
#[derive(Debug, Clone)]
pub struct TripleProducts {
    dim: usize,
    values: Vec<f64>, // (i * n + j) * n + k, n = d^2
}

/// Dense storage above this dimension is refused unless the caller
/// opts in explicitly.
pub const TRIPLE_PRODUCT_DEFAULT_CAP: usize = 6;

impl TripleProducts {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim * self.dim;
        self.values[(i * n + j) * n + k]
    }
}

/// Triple products of a verified SIC, capped at d <= 6 by default.
pub fn triple_products(sic: &SicPovm) -> Result<TripleProducts> {
    triple_products_with_limit(sic, false)
}

/// As [`triple_products`], with `allow_large` lifting the dimension cap.
pub fn triple_products_with_limit(sic: &SicPovm, allow_large: bool) -> Result<TripleProducts> {
    sic.ensure_usable()?;
    let d = sic.dim();
    if d > TRIPLE_PRODUCT_DEFAULT_CAP && !allow_large {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "dense triple products capped at d <= 6; pass allow_large to override",
        });
    }
    let n = d * d;
    let projectors = sic.projectors();
    let mut values = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let pij = projectors[i].mul(&projectors[j])?;
            for k in 0..n {
                values[(i * n + j) * n + k] = pij.trace_product(&projectors[k])?.re;
            }
        }
    }
    let tensor = TripleProducts { dim: d, values };
    verify_triple_invariants(&tensor, sic.max_overlap_deviation())?;
    Ok(tensor)
}

/// Structural checks: full permutation symmetry and the forced entries
/// c_iii = 1, c_iij = 1/(d+1). The diagonal-pair tolerance widens with
/// the SIC's own overlap deviation, which bounds it from above.
fn verify_triple_invariants(c: &TripleProducts, overlap_deviation: f64) -> Result<()> {
    let n = c.dim * c.dim;
    let sym_tol = 1e-12;
    let pair_tol = 1e-12 + 2.0 * overlap_deviation;
    let diag_target = 1.0 / (c.dim as f64 + 1.0);
    for i in 0..n {
        let ciii = c.get(i, i, i);
        if (ciii - 1.0).abs() > sym_tol {
            return Err(Error::TripleProductInvariant(format!(
                "c[{i},{i},{i}] = {ciii}, expected 1"
            )));
        }
        for j in 0..n {
            if i != j {
                let ciij = c.get(i, i, j);
                if (ciij - diag_target).abs() > pair_tol {
                    return Err(Error::TripleProductInvariant(format!(
                        "c[{i},{i},{j}] = {ciij}, expected {diag_target}"
                    )));
                }
            }
            for k in 0..n {
                let base = c.get(i, j, k);
                for perm in [
                    c.get(i, k, j),
                    c.get(j, i, k),
                    c.get(j, k, i),
                    c.get(k, i, j),
                    c.get(k, j, i),
                ] {
                    if (base - perm).abs() > sym_tol {
                        return Err(Error::TripleProductInvariant(format!(
                            "asymmetry at ({i},{j},{k}): {base} vs {perm}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Residuals of the two pure-state constraints:
/// res2 = sum p^2 - 2/(d(d+1)), res3 = sum c_ijk p p p - (d+7)/(d+1)^3.
/// Both vanish exactly on pure states; res2 is strictly negative on
/// mixed ones.
pub fn purity_residuals(p: &ProbVector, c: &TripleProducts, d: usize) -> Result<(f64, f64)> {
    let n = d * d;
    if p.len() != n {
        return Err(Error::DimensionMismatch(p.len(), n));
    }
    if c.dim() != d {
        return Err(Error::DimensionMismatch(c.dim(), d));
    }
    let dd = d as f64;
    let res2 = p.norm_sq() - 2.0 / (dd * (dd + 1.0));

    // Full triple sum, no symmetry shortcuts.
    let entries = p.entries();
    let mut cubic = 0.0;
    for i in 0..n {
        for j in 0..n {
            let pij = entries[i] * entries[j];
            if pij == 0.0 {
                continue;
            }
            for k in 0..n {
                cubic += c.get(i, j, k) * pij * entries[k];
            }
        }
    }
    let res3 = cubic - (dd + 7.0) / (dd + 1.0).powi(3);
    Ok((res2, res3))
}

/// The basis states e_k(i) = (delta_ki + beta)/alpha, k = 1..n.
pub fn basis_states(n: usize, alpha: f64, beta: f64) -> Result<Vec<ProbVector>> {
    let constraint = (alpha - (n as f64 * beta + 1.0)).abs();
    if constraint > 1e-12 {
        return Err(Error::AffineConstraint(constraint));
    }
    (0..n)
        .map(|k| {
            ProbVector::new(
                (0..n)
                    .map(|i| (if i == k { 1.0 } else { 0.0 } + beta) / alpha)
                    .collect(),
            )
        })
        .collect()
}

/// Squared norm (1 + 2 beta + n beta^2)/alpha^2 shared by every basis
/// state.
pub fn basis_state_norm_sq(n: usize, alpha: f64, beta: f64) -> f64 {
    (1.0 + 2.0 * beta + n as f64 * beta * beta) / (alpha * alpha)
}
