//! Quantities in the two concrete Q-algebra realizations.
//!
//! A [`Quantity`] is either a classical tuple in `C^n` with componentwise
//! operations, or an `n x n` complex matrix with the matrix product and
//! conjugate transpose. Complex numbers embed as constant tuples or as scalar
//! multiples of the identity.

pub mod axioms;
pub mod complementarity;
mod constructors;
pub mod linalg;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{QcalcError, Result};
use crate::tolerances::Tolerances;
use crate::C64;

pub use constructors::{identity, pauli, scalar, truncated_oscillator, zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    Classical,
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Classical(DVector<C64>),
    Matrix(DMatrix<C64>),
}

/// Structural flags reported by [`Quantity::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub hermitian: bool,
    pub normal: bool,
    pub bounded: bool,
}

/// Which binary operation [`arith`] should apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Scale(C64),
}

/// Dispatching form of the arithmetic operations; `g` is ignored for `Scale`.
pub fn arith(op: ArithOp, f: &Quantity, g: Option<&Quantity>) -> Result<Quantity> {
    let need = || QcalcError::InvalidParameter("binary operation needs two operands".into());
    match op {
        ArithOp::Add => f.add(g.ok_or_else(need)?),
        ArithOp::Sub => f.sub(g.ok_or_else(need)?),
        ArithOp::Mul => f.mul(g.ok_or_else(need)?),
        ArithOp::Scale(alpha) => Ok(f.scale(alpha)),
    }
}

impl Quantity {
    pub fn classical(values: Vec<C64>) -> Result<Self> {
        if values.is_empty() {
            return Err(QcalcError::InvalidParameter("dimension must be positive".into()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QcalcError::NonFinite);
        }
        Ok(Quantity::Classical(DVector::from_vec(values)))
    }

    pub fn classical_real(values: &[f64]) -> Result<Self> {
        Self::classical(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QcalcError::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(QcalcError::InvalidParameter("dimension must be positive".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QcalcError::NonFinite);
        }
        Ok(Quantity::Matrix(m))
    }

    /// Square matrix from row-major real entries.
    pub fn matrix_real(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(QcalcError::LengthMismatch {
                left: rows.len(),
                right: n * n,
            });
        }
        Self::matrix(DMatrix::from_row_iterator(n, n, rows.iter().map(|&x| C64::new(x, 0.0))))
    }

    /// Square matrix from row-major complex entries.
    pub fn matrix_complex(n: usize, rows: &[C64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(QcalcError::LengthMismatch {
                left: rows.len(),
                right: n * n,
            });
        }
        Self::matrix(DMatrix::from_row_slice(n, n, rows))
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        Self::matrix(DMatrix::from_diagonal(&DVector::from_row_slice(values)))
    }

    pub fn realization(&self) -> Realization {
        match self {
            Quantity::Classical(_) => Realization::Classical,
            Quantity::Matrix(_) => Realization::Matrix,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Quantity::Classical(v) => v.len(),
            Quantity::Matrix(m) => m.nrows(),
        }
    }

    pub fn check_compatible(&self, other: &Quantity) -> Result<()> {
        if self.realization() != other.realization() {
            return Err(QcalcError::RealizationMismatch {
                left: self.realization(),
                right: other.realization(),
            });
        }
        if self.dim() != other.dim() {
            return Err(QcalcError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// The scalar `alpha` embedded in the same realization and dimension.
    pub fn scalar_like(&self, alpha: C64) -> Quantity {
        scalar(self.realization(), self.dim(), alpha)
    }

    pub fn identity_like(&self) -> Quantity {
        self.scalar_like(C64::new(1.0, 0.0))
    }

    pub fn add(&self, other: &Quantity) -> Result<Quantity> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Quantity::Classical(a), Quantity::Classical(b)) => Quantity::Classical(a + b),
            (Quantity::Matrix(a), Quantity::Matrix(b)) => Quantity::Matrix(a + b),
            _ => unreachable!("compatibility checked"),
        })
    }

    pub fn sub(&self, other: &Quantity) -> Result<Quantity> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Quantity::Classical(a), Quantity::Classical(b)) => Quantity::Classical(a - b),
            (Quantity::Matrix(a), Quantity::Matrix(b)) => Quantity::Matrix(a - b),
            _ => unreachable!("compatibility checked"),
        })
    }

    pub fn mul(&self, other: &Quantity) -> Result<Quantity> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Quantity::Classical(a), Quantity::Classical(b)) => Quantity::Classical(a.component_mul(b)),
            (Quantity::Matrix(a), Quantity::Matrix(b)) => Quantity::Matrix(a * b),
            _ => unreachable!("compatibility checked"),
        })
    }

    pub fn scale(&self, alpha: C64) -> Quantity {
        match self {
            Quantity::Classical(a) => Quantity::Classical(a * alpha),
            Quantity::Matrix(a) => Quantity::Matrix(a * alpha),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Quantity {
        self.scale(C64::new(alpha, 0.0))
    }

    /// `alpha + self`, with `alpha` embedded as a scalar quantity.
    pub fn shift(&self, alpha: C64) -> Quantity {
        match self {
            Quantity::Classical(a) => Quantity::Classical(a.map(|z| z + alpha)),
            Quantity::Matrix(a) => {
                let mut m = a.clone();
                for i in 0..m.nrows() {
                    m[(i, i)] += alpha;
                }
                Quantity::Matrix(m)
            }
        }
    }

    pub fn neg(&self) -> Quantity {
        self.scale_real(-1.0)
    }

    pub fn square(&self) -> Quantity {
        self.mul(self).expect("a quantity is compatible with itself")
    }

    pub fn powi(&self, k: u32) -> Quantity {
        let mut acc = self.identity_like();
        for _ in 0..k {
            acc = acc.mul(self).expect("a quantity is compatible with itself");
        }
        acc
    }

    /// `f*`: componentwise conjugate for tuples, conjugate transpose for matrices.
    pub fn conjugate(&self) -> Quantity {
        match self {
            Quantity::Classical(a) => Quantity::Classical(a.map(|z| z.conj())),
            Quantity::Matrix(a) => Quantity::Matrix(a.adjoint()),
        }
    }

    /// `[f, g] = fg - gf`.
    pub fn commutator(&self, other: &Quantity) -> Result<Quantity> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Quantity::Classical(a), _) => Quantity::Classical(DVector::zeros(a.len())),
            (Quantity::Matrix(a), Quantity::Matrix(b)) => Quantity::Matrix(a * b - b * a),
            _ => unreachable!("compatibility checked"),
        })
    }

    /// `(re f, im f) = ((f + f*)/2, (f - f*)/2i)`.
    pub fn re_im(&self) -> (Quantity, Quantity) {
        let conj = self.conjugate();
        let sum = self.add(&conj).expect("conjugate is compatible");
        let diff = self.sub(&conj).expect("conjugate is compatible");
        (sum.scale_real(0.5), diff.scale(C64::new(0.0, -0.5)))
    }

    /// Spectral norm: largest singular value, or the largest modulus of a tuple.
    pub fn spectral_norm(&self) -> f64 {
        match self {
            Quantity::Classical(a) => a.iter().map(|z| z.norm()).fold(0.0, f64::max),
            Quantity::Matrix(a) => linalg::spectral_norm(a),
        }
    }

    /// Spectral norm of `self - other`.
    pub fn distance(&self, other: &Quantity) -> Result<f64> {
        Ok(self.sub(other)?.spectral_norm())
    }

    /// `||f - f*||`.
    pub fn hermitian_residual(&self) -> f64 {
        match self {
            Quantity::Classical(a) => a.iter().map(|z| 2.0 * z.im.abs()).fold(0.0, f64::max),
            Quantity::Matrix(a) => linalg::spectral_norm(&(a - a.adjoint())),
        }
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.hermitian_residual() <= tol.herm_tol * self.spectral_norm()
    }

    pub fn require_hermitian(&self, tol: &Tolerances) -> Result<()> {
        if self.is_hermitian(tol) {
            Ok(())
        } else {
            Err(QcalcError::NotHermitian {
                residual: self.hermitian_residual(),
            })
        }
    }

    /// Whether `f` and `g` commute up to `commute_tol * ||f|| ||g||`.
    pub fn commutes_with(&self, other: &Quantity, tol: &Tolerances) -> Result<bool> {
        let residual = self.commutator(other)?.spectral_norm();
        Ok(residual <= tol.commute_tol * self.spectral_norm() * other.spectral_norm())
    }

    pub fn classify(&self, tol: &Tolerances) -> Classification {
        let norm = self.spectral_norm();
        let normal_residual = self
            .commutator(&self.conjugate())
            .expect("conjugate is compatible")
            .spectral_norm();
        Classification {
            hermitian: self.is_hermitian(tol),
            normal: normal_residual <= tol.commute_tol * norm * norm,
            bounded: norm.is_finite(),
        }
    }

    /// Eigenvalues of the Hermitian part, ascending. For tuples these are the
    /// sorted real parts.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        match self {
            Quantity::Classical(a) => {
                let mut v: Vec<f64> = a.iter().map(|z| z.re).collect();
                v.sort_by(f64::total_cmp);
                v
            }
            Quantity::Matrix(a) => linalg::hermitian_eigenvalues(a),
        }
    }

    /// `f <= g`: `g - f` is Hermitian and its smallest eigenvalue is at least
    /// `-psd_tol * max(||g - f||, ||f||, ||g||)`.
    ///
    /// The operand norms enter the floor so that rounding noise in a nearly
    /// vanishing difference (e.g. `f^2 <= 1` for a reflection) is tolerated.
    pub fn leq(&self, other: &Quantity, tol: &Tolerances) -> Result<bool> {
        let d = other.sub(self)?;
        let scale = self.spectral_norm().max(other.spectral_norm());
        Ok(d.nonnegative_at_scale(scale, tol))
    }

    /// `0 <= self` in the partial order.
    pub fn is_nonnegative(&self, tol: &Tolerances) -> bool {
        self.nonnegative_at_scale(0.0, tol)
    }

    pub(crate) fn nonnegative_at_scale(&self, scale: f64, tol: &Tolerances) -> bool {
        let scale = self.spectral_norm().max(scale);
        if scale == 0.0 {
            return true;
        }
        if self.hermitian_residual() > tol.herm_tol * scale {
            return false;
        }
        let min = self.hermitian_eigenvalues()[0];
        min >= -tol.psd_tol * scale
    }

    /// Kronecker product; the first factor indexes the outer (row-block) position.
    pub fn tensor(&self, other: &Quantity) -> Result<Quantity> {
        match (self, other) {
            (Quantity::Matrix(a), Quantity::Matrix(b)) => Ok(Quantity::Matrix(a.kronecker(b))),
            (Quantity::Classical(a), Quantity::Classical(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a.iter() {
                    for y in b.iter() {
                        out.push(x * y);
                    }
                }
                Ok(Quantity::Classical(DVector::from_vec(out)))
            }
            _ => Err(QcalcError::RealizationMismatch {
                left: self.realization(),
                right: other.realization(),
            }),
        }
    }

    /// Dense matrix view; tuples become diagonal matrices.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        match self {
            Quantity::Classical(a) => DMatrix::from_diagonal(a),
            Quantity::Matrix(a) => a.clone(),
        }
    }

    pub fn as_matrix(&self) -> Option<&DMatrix<C64>> {
        match self {
            Quantity::Matrix(a) => Some(a),
            Quantity::Classical(_) => None,
        }
    }

    /// Largest off-diagonal modulus (zero for tuples).
    pub fn off_diagonal_norm(&self) -> f64 {
        match self {
            Quantity::Classical(_) => 0.0,
            Quantity::Matrix(a) => {
                let mut worst: f64 = 0.0;
                for i in 0..a.nrows() {
                    for j in 0..a.ncols() {
                        if i != j {
                            worst = worst.max(a[(i, j)].norm());
                        }
                    }
                }
                worst
            }
        }
    }

    /// Diagonal entries (the tuple itself for classical quantities).
    pub fn diagonal_entries(&self) -> Vec<C64> {
        match self {
            Quantity::Classical(a) => a.iter().copied().collect(),
            Quantity::Matrix(a) => a.diagonal().iter().copied().collect(),
        }
    }

    /// Whether this is a scalar `alpha * 1`; returns `alpha` when it is.
    pub fn as_scalar(&self, tol: f64) -> Option<C64> {
        let entries = self.diagonal_entries();
        let alpha = entries[0];
        let scale = 1.0 + self.spectral_norm();
        let residual = self.distance(&self.scalar_like(alpha)).ok()?;
        (residual <= tol * scale).then_some(alpha)
    }

    /// Row-major flattened entries.
    pub fn flat_entries(&self) -> Vec<C64> {
        match self {
            Quantity::Classical(a) => a.iter().copied().collect(),
            Quantity::Matrix(a) => {
                let n = a.nrows();
                (0..n * n).map(|k| a[(k / n, k % n)]).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn sigma1_sigma3_product_is_minus_i_sigma2() {
        let s1 = pauli(1).unwrap();
        let s3 = pauli(3).unwrap();
        let prod = arith(ArithOp::Mul, &s1, Some(&s3)).unwrap();
        let expected = Quantity::matrix_real(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert_eq!(prod, expected);
        let minus_i_s2 = pauli(2).unwrap().scale(c(0.0, -1.0));
        assert!(prod.distance(&minus_i_s2).unwrap() < 1e-15);
    }

    #[test]
    fn subtraction_and_zero_scaling_give_zero() {
        let f = Quantity::matrix_complex(2, &[c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0), c(-2.0, 1.0)]).unwrap();
        let diff = arith(ArithOp::Add, &f, Some(&f.scale_real(-1.0))).unwrap();
        assert_eq!(diff.spectral_norm(), 0.0);
        assert_eq!(
            arith(ArithOp::Scale(c(0.0, 0.0)), &f, None).unwrap().spectral_norm(),
            0.0
        );
    }

    #[test]
    fn mismatches_are_errors() {
        let a = pauli(1).unwrap();
        let b = identity(Realization::Matrix, 3);
        assert!(matches!(a.add(&b), Err(QcalcError::DimensionMismatch { .. })));
        let k = Quantity::classical_real(&[1.0, 2.0]).unwrap();
        assert!(matches!(a.mul(&k), Err(QcalcError::RealizationMismatch { .. })));
        assert!(matches!(a.tensor(&k), Err(QcalcError::RealizationMismatch { .. })));
        assert!(arith(ArithOp::Add, &a, None).is_err());
    }

    #[test]
    fn conjugation_rules() {
        let s1 = pauli(1).unwrap();
        assert_eq!(s1.conjugate(), s1);
        let f = Quantity::matrix_complex(2, &[c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.7), c(-2.0, 1.0)]).unwrap();
        let g = Quantity::matrix_complex(2, &[c(0.0, 1.0), c(1.0, 1.0), c(2.0, 0.0), c(0.0, -3.0)]).unwrap();
        assert_eq!(f.conjugate().conjugate(), f);
        let lhs = f.mul(&g).unwrap().conjugate();
        let rhs = g.conjugate().mul(&f.conjugate()).unwrap();
        assert!(lhs.distance(&rhs).unwrap() <= tol().value_tol);
    }

    #[test]
    fn commutator_examples() {
        let s1 = pauli(1).unwrap();
        let s2 = pauli(2).unwrap();
        let s3 = pauli(3).unwrap();
        let comm = s1.commutator(&s3).unwrap();
        assert!(comm.distance(&s2.scale(c(0.0, -2.0))).unwrap() < 1e-15);
        assert_eq!(s1.commutator(&s1).unwrap().spectral_norm(), 0.0);

        let f = Quantity::matrix_complex(2, &[c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.7), c(-2.0, 1.0)]).unwrap();
        let (re, im) = f.re_im();
        let lhs = f.commutator(&f.conjugate()).unwrap();
        let rhs = re.commutator(&im).unwrap().scale(c(0.0, -2.0));
        assert!(lhs.distance(&rhs).unwrap() <= tol().value_tol);
    }

    #[test]
    fn re_im_examples() {
        let s1 = pauli(1).unwrap();
        let (re, im) = s1.scale(c(0.0, 1.0)).re_im();
        assert_eq!(re.spectral_norm(), 0.0);
        assert!(im.distance(&s1).unwrap() < 1e-15);
        let (re, im) = s1.re_im();
        assert_eq!(re, s1);
        assert_eq!(im.spectral_norm(), 0.0);
    }

    #[test]
    fn spectral_norm_examples() {
        let s3 = pauli(3).unwrap();
        assert!((s3.spectral_norm() - 1.0).abs() < 1e-15);
        let lambda = c(-3.0, 4.0);
        assert!((s3.scale(lambda).spectral_norm() - 5.0).abs() < 1e-12);
        let k = Quantity::classical(vec![c(3.0, 4.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(k.spectral_norm(), 5.0);
    }

    #[test]
    fn order_examples() {
        let s1 = pauli(1).unwrap();
        let s3 = pauli(3).unwrap();
        let t = tol();
        assert!(s1.leq(&s1, &t).unwrap());
        assert!(!s3.leq(&s1, &t).unwrap());
        let f = Quantity::matrix_complex(2, &[c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.7), c(-2.0, 1.0)]).unwrap();
        let zero = f.scalar_like(c(0.0, 0.0));
        assert!(zero.leq(&f.conjugate().mul(&f).unwrap(), &t).unwrap());
        // A non-Hermitian difference is never ordered.
        assert!(!zero.leq(&f, &t).unwrap());
        let a = Quantity::classical_real(&[1.0, 2.0]).unwrap();
        let b = Quantity::classical_real(&[1.5, 2.0]).unwrap();
        assert!(a.leq(&b, &t).unwrap());
        assert!(!b.leq(&a, &t).unwrap());
    }

    #[test]
    fn classify_examples() {
        let t = tol();
        let s1 = pauli(1).unwrap();
        let flags = s1.classify(&t);
        assert!(flags.hermitian && flags.normal && flags.bounded);
        let nilpotent = Quantity::matrix_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let flags = nilpotent.classify(&t);
        assert!(!flags.hermitian && !flags.normal);
        // Commuting real and imaginary parts make a normal quantity.
        let f = s1.add(&s1.scale(c(0.0, 2.0))).unwrap();
        let (re, im) = f.re_im();
        assert_eq!(re.commutator(&im).unwrap().spectral_norm(), 0.0);
        let flags = f.classify(&t);
        assert!(flags.normal && !flags.hermitian);
    }

    #[test]
    fn tensor_examples_match_spin_pair_matrices() {
        let s1 = pauli(1).unwrap();
        let s3 = pauli(3).unwrap();
        let one = identity(Realization::Matrix, 2);
        // f1 x = (x3, x4, x1, x2)
        let f1 = Quantity::matrix_real(
            4,
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(s1.tensor(&one).unwrap(), f1);
        let f4 = Quantity::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(one.tensor(&s3).unwrap(), f4);
        assert_eq!(one.tensor(&one).unwrap(), identity(Realization::Matrix, 4));
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert_eq!(
            Quantity::classical_real(&[f64::NAN]).unwrap_err(),
            QcalcError::NonFinite
        );
        assert!(Quantity::matrix_real(1, &[f64::INFINITY]).is_err());
    }

    #[test]
    fn classical_commutator_is_exactly_zero() {
        let a = Quantity::classical(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        let b = Quantity::classical(vec![c(0.3, -2.0), c(7.0, 1.5)]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        assert_eq!(a.commutator(&b).unwrap().spectral_norm(), 0.0);
    }
}
