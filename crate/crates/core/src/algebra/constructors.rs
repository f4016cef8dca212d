use nalgebra::{DMatrix, DVector};

use super::{Quantity, Realization};
use crate::error::{QcalcError, Result};
use crate::C64;

pub fn scalar(realization: Realization, n: usize, alpha: C64) -> Quantity {
    match realization {
        Realization::Classical => Quantity::Classical(DVector::from_element(n, alpha)),
        Realization::Matrix => Quantity::Matrix(DMatrix::identity(n, n) * alpha),
    }
}

pub fn identity(realization: Realization, n: usize) -> Quantity {
    scalar(realization, n, C64::new(1.0, 0.0))
}

pub fn zero(realization: Realization, n: usize) -> Quantity {
    scalar(realization, n, C64::new(0.0, 0.0))
}

/// Pauli matrix `sigma_k`, with `sigma_2 = [[0, -i], [i, 0]]`.
pub fn pauli(k: u8) -> Result<Quantity> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match k {
        1 => [o, one, one, o],
        2 => [o, -i, i, o],
        3 => [one, o, o, -one],
        _ => {
            return Err(QcalcError::InvalidParameter(format!(
                "Pauli index must be 1, 2 or 3, got {k}"
            )))
        }
    };
    Quantity::matrix_complex(2, &entries)
}

/// Position and momentum on the first `n` oscillator levels.
///
/// `q = sqrt(hbar/2) (a + a*)` and `p = i sqrt(hbar/2) (a* - a)` with the
/// ladder matrix `a[j-1, j] = sqrt(j)`. `[q, p] = i hbar` holds on the first
/// `n - 1` diagonal entries; the last one equals `-(n - 1) i hbar` so that the
/// trace vanishes.
pub fn truncated_oscillator(n: usize, hbar: f64) -> Result<(Quantity, Quantity)> {
    if n < 2 {
        return Err(QcalcError::InvalidParameter(format!(
            "oscillator truncation needs n >= 2, got {n}"
        )));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(QcalcError::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let mut a = DMatrix::<C64>::zeros(n, n);
    for j in 1..n {
        a[(j - 1, j)] = C64::new((j as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let c = (hbar / 2.0).sqrt();
    let q = (&a + &ad) * C64::new(c, 0.0);
    let p = (&ad - &a) * C64::new(0.0, c);
    Ok((Quantity::Matrix(q), Quantity::Matrix(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_matrices() {
        assert_eq!(
            pauli(1).unwrap(),
            Quantity::matrix_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
        );
        assert_eq!(
            pauli(3).unwrap(),
            Quantity::matrix_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
        );
        for k in 1..=3 {
            let s = pauli(k).unwrap();
            assert_eq!(s.square(), identity(Realization::Matrix, 2));
        }
        assert!(pauli(0).is_err());
        assert!(pauli(4).is_err());
    }

    #[test]
    fn two_level_oscillator_is_scaled_pauli_pair() {
        let (q, p) = truncated_oscillator(2, 1.0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(q.distance(&pauli(1).unwrap().scale_real(r)).unwrap() < 1e-15);
        // With p = i sqrt(hbar/2)(a* - a) the two-level momentum is +sigma_2/sqrt(2).
        assert!(p.distance(&pauli(2).unwrap().scale_real(r)).unwrap() < 1e-15);
    }

    #[test]
    fn ccr_holds_away_from_the_corner() {
        for &(n, hbar) in &[(2usize, 1.0), (7, 0.5), (20, 2.0)] {
            let (q, p) = truncated_oscillator(n, hbar).unwrap();
            let comm = q.commutator(&p).unwrap().to_matrix();
            for j in 0..n - 1 {
                assert!((comm[(j, j)] - C64::new(0.0, hbar)).norm() < 1e-12);
            }
            let corner = comm[(n - 1, n - 1)];
            assert!((corner - C64::new(0.0, -(n as f64 - 1.0) * hbar)).norm() < 1e-12);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(comm[(i, j)].norm() < 1e-12);
                    }
                }
            }
        }
        assert!(truncated_oscillator(1, 1.0).is_err());
        assert!(truncated_oscillator(3, 0.0).is_err());
    }
}
