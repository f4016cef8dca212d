//! Random quantities and ensembles for property checks and fuzzing.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::algebra::{linalg, Quantity, Realization};
use crate::ensembles::Ensemble;
use crate::C64;

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

pub fn quantity<R: Rng + ?Sized>(rng: &mut R, realization: Realization, n: usize) -> Quantity {
    match realization {
        Realization::Classical => Quantity::Classical(DVector::from_fn(n, |_, _| complex_normal(rng))),
        Realization::Matrix => Quantity::Matrix(complex_matrix(rng, n)),
    }
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, realization: Realization, n: usize) -> Quantity {
    quantity(rng, realization, n).re_im().0
}

/// `x* x` for a random `x`.
pub fn nonnegative<R: Rng + ?Sized>(rng: &mut R, realization: Realization, n: usize) -> Quantity {
    let x = quantity(rng, realization, n);
    x.conjugate().mul(&x).expect("same shape")
}

pub fn real_scalar<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| complex_normal(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Probability weights with occasional exact zeros.
pub fn weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if n > 1 && rng.random_bool(0.1) {
                0.0
            } else {
                Exp1.sample(rng)
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Density matrix of random rank between 1 and `n`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let rank = rng.random_range(1..=n);
    let w = DMatrix::from_fn(n, rank, |_, _| complex_normal(rng));
    let rho = &w * w.adjoint();
    let tr = linalg::trace(&rho);
    rho / tr
}

/// `exp(i H)` for a random Hermitian `H`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let h = hermitian(rng, Realization::Matrix, n).to_matrix();
    linalg::hermitian_function(&h, |l| C64::new(0.0, l).exp())
}

/// A valid ensemble of any form available for the realization.
pub fn ensemble<R: Rng + ?Sized>(rng: &mut R, realization: Realization, n: usize) -> Ensemble {
    match realization {
        Realization::Classical => Ensemble::weights(weights(rng, n)).expect("valid weights"),
        Realization::Matrix => match rng.random_range(0..3) {
            0 => Ensemble::pure(unit_vector(rng, n)).expect("unit vector"),
            1 => Ensemble::density(density_matrix(rng, n)).expect("valid density"),
            _ => {
                let s = hermitian(rng, Realization::Matrix, n);
                let kbar = rng.random_range(0.3..3.0);
                Ensemble::gibbs(&s, kbar).expect("Hermitian entropy")
            }
        },
    }
}
