//! Exact rational solution of the constraint system relating the
//! Urgleichung constants: alpha = n beta + 1, (m0/n) alpha - beta = 1,
//! and the universal-angle family cos theta = q/(q+2).
//!
//! Everything here is integer and rational arithmetic, with no floating
//! point. The argument being checked is Diophantine: which integer
//! dimensions n admit the universal angle at all, and how the q = 2
//! choice forces n = m0^2, alpha = m0 + 1, beta = 1/m0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar (arbitrary-precision numerator/denominator,
/// reduced, positive denominator).
pub type Rational = BigRational;

/// Rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// One consistent parameter set of the generalized Urgleichung.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryParams {
    pub q: u64,
    pub m0: u64,
    pub n: u64,
    pub alpha: Rational,
    pub beta: Rational,
}

impl TheoryParams {
    /// Assembles the tuple and proves the invariants as exact rational
    /// identities; any failure is an inconsistent (q, m0) pairing.
    pub fn new(q: u64, m0: u64, n: u64, alpha: Rational, beta: Rational) -> Result<Self> {
        let params = Self { q, m0, n, alpha, beta };
        params.verify()?;
        Ok(params)
    }

    fn verify(&self) -> Result<()> {
        let err = || Error::InconsistentTheory {
            q: self.q,
            m0: self.m0,
        };
        let n_rat = BigRational::from_integer(big(self.n));
        let m0_rat = BigRational::from_integer(big(self.m0));
        // alpha = n beta + 1
        if self.alpha != &n_rat * &self.beta + BigRational::one() {
            return Err(err());
        }
        // (m0/n) alpha - beta = 1
        if (&m0_rat / &n_rat) * &self.alpha - &self.beta != BigRational::one() {
            return Err(err());
        }
        // cos theta from the angle formula equals q/(q+2)
        let angle = angle_formula(self.n, self.m0)?;
        if angle != BigRational::new(big(self.q), big(self.q + 2)) {
            return Err(err());
        }
        Ok(())
    }

    /// The q = 2 signature: n = (alpha - 1)^2 and beta = 1/sqrt(n),
    /// checked rationally as n beta^2 = 1.
    pub fn satisfies_square_relations(&self) -> bool {
        let alpha_minus_one = &self.alpha - BigRational::one();
        let n_rat = BigRational::from_integer(big(self.n));
        n_rat == &alpha_minus_one * &alpha_minus_one
            && &n_rat * &self.beta * &self.beta == BigRational::one()
    }

    /// Constants as floats, for handing to the floating-point layer.
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().expect("small rational")
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64().expect("small rational")
    }
}

/// cos theta = (n - m0) / ((m0 - 1)^2 + n - 1), exactly.
pub fn angle_formula(n: u64, m0: u64) -> Result<Rational> {
    if m0 < 2 {
        return Err(Error::DimensionTooSmall(m0 as usize));
    }
    if n < m0 {
        return Err(Error::DimensionMismatch(n as usize, m0 as usize));
    }
    let num = big(n) - big(m0);
    let den = (big(m0) - big(1)) * (big(m0) - big(1)) + big(n) - big(1);
    if den.is_zero() {
        return Err(Error::DegenerateGram);
    }
    Ok(BigRational::new(num, den))
}

/// The unique n with angle_formula(n, m0) = q/(q+2), when it is an
/// integer: n = m0 (q (m0 - 1) + 2) / 2. The result is verified by
/// substitution before being returned.
pub fn dimension_from(q: u64, m0: u64) -> Option<u64> {
    if m0 < 2 {
        return None;
    }
    let numerator = big(m0) * (big(q) * (big(m0) - big(1)) + big(2));
    let (half, rem) = (numerator.clone() / big(2), numerator % big(2));
    if !rem.is_zero() {
        return None;
    }
    let n = half.to_u64()?;
    // substitute back into the angle formula
    let angle = angle_formula(n, m0).ok()?;
    if angle == BigRational::new(big(q), big(q + 2)) {
        Some(n)
    } else {
        None
    }
}

/// Solve the two linear constraints exactly for (alpha, beta) given a
/// consistent (q, m0): beta = (n - m0)/(n (m0 - 1)),
/// alpha = (n - 1)/(m0 - 1).
pub fn solve_constants(m0: u64, q: u64) -> Result<TheoryParams> {
    let n = dimension_from(q, m0).ok_or(Error::InconsistentTheory { q, m0 })?;
    let beta = BigRational::new(big(n) - big(m0), big(n) * (big(m0) - big(1)));
    let alpha = BigRational::new(big(n) - big(1), big(m0) - big(1));
    let params = TheoryParams::new(q, m0, n, alpha, beta)?;
    if q == 2 && !params.satisfies_square_relations() {
        return Err(Error::InconsistentTheory { q, m0 });
    }
    Ok(params)
}

/// Every consistent parameter set with q <= q_max and 2 <= m0 <= m0_max.
pub fn q_family_table(q_max: u64, m0_max: u64) -> Result<Vec<TheoryParams>> {
    if q_max < 2 || m0_max < 2 {
        return Err(Error::DimensionTooSmall(q_max.min(m0_max) as usize));
    }
    let mut table = Vec::new();
    for q in 0..=q_max {
        for m0 in 2..=m0_max {
            if dimension_from(q, m0).is_some() {
                table.push(solve_constants(m0, q)?);
            }
        }
    }
    Ok(table)
}

/// If c = q/(q+2) for a nonnegative integer q, return q; the inverse
/// map is q = 2c/(1-c). Values outside [0, 1) admit no q.
pub fn cos_admissibility(c: &Rational) -> Option<u64> {
    if c.is_negative() || *c >= BigRational::one() {
        return None;
    }
    let q = (BigRational::from_integer(BigInt::from(2)) * c) / (BigRational::one() - c);
    if q.is_integer() {
        q.to_integer().to_u64()
    } else {
        None
    }
}
