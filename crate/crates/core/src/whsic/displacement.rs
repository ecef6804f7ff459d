//! Weyl-Heisenberg displacement operators.
//!
//! D_{p,q} = tau^{pq} X^p Z^q with the shift X|k> = |k+1 mod d>, the
//! clock Z|k> = omega^k |k> (omega = e^{2 pi i / d}), and the phase
//! tau = e^{i pi (d+1)/d}. The tau convention is fixed and documented
//! here; every projector orbit built from it is invariant under any
//! other choice of phase convention.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermitian::ComplexMatrix;

/// Unit phase e^{i pi k / m} with the integer angle reduced mod 2m
/// before the single trig call.
fn unit_phase(numerator: i64, denominator: i64) -> Complex64 {
    let k = numerator.rem_euclid(2 * denominator);
    Complex64::from_polar(1.0, PI * k as f64 / denominator as f64)
}

/// The displacement operator D_{p,q} on C^d.
pub fn displacement_operator(d: usize, p: usize, q: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if p >= d {
        return Err(Error::IndexOutOfRange { index: p, len: d });
    }
    if q >= d {
        return Err(Error::IndexOutOfRange { index: q, len: d });
    }
    let di = d as i64;
    // tau^{pq} = e^{i pi (d+1) p q / d}
    let global = unit_phase((di + 1) * (p as i64) * (q as i64), di);
    let mut m = ComplexMatrix::zeros(d);
    for col in 0..d {
        // X^p Z^q |col> = omega^{q col} |col + p>
        let omega_pow = unit_phase(2 * (q as i64) * (col as i64), di);
        m[((col + p) % d, col)] = global * omega_pow;
    }
    Ok(m)
}

/// All d^2 - 1 nontrivial displacements, indexed k = p*d + q - 1
/// (skipping (0,0)).
pub fn nontrivial_displacements(d: usize) -> Result<Vec<ComplexMatrix>> {
    let mut ops = Vec::with_capacity(d * d - 1);
    for p in 0..d {
        for q in 0..d {
            if p == 0 && q == 0 {
                continue;
            }
            ops.push(displacement_operator(d, p, q)?);
        }
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_displacement_is_identity() {
        for d in 2..=8 {
            let d00 = displacement_operator(d, 0, 0).unwrap();
            let dev = d00.sub(&ComplexMatrix::identity(d)).unwrap().max_abs_entry();
            assert!(dev < 1e-15, "d = {d}");
        }
    }

    #[test]
    fn shift_is_pauli_x_at_d2() {
        let x = displacement_operator(2, 1, 0).unwrap();
        assert!((x[(0, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(x[(0, 0)].norm() < 1e-15 && x[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn clock_is_pauli_z_at_d2() {
        let z = displacement_operator(2, 0, 1).unwrap();
        assert!((z[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn all_displacements_unitary() {
        for d in 2..=8 {
            for p in 0..d {
                for q in 0..d {
                    let op = displacement_operator(d, p, q).unwrap();
                    let dev = op
                        .mul(&op.adjoint())
                        .unwrap()
                        .sub(&ComplexMatrix::identity(d))
                        .unwrap()
                        .max_abs_entry();
                    assert!(dev < tol::SUM, "d={d} p={p} q={q}: {dev:e}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_indices_rejected() {
        assert!(displacement_operator(3, 3, 0).is_err());
        assert!(displacement_operator(3, 0, 5).is_err());
    }
}
