//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// Eigen-decomposition of the Hermitian part `(m + m*)/2`.
///
/// Eigenvalues come back in ascending order with matching eigenvector columns.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Apply a scalar function through the spectral decomposition `V diag(g(λ)) V*`.
pub fn hermitian_function(m: &DMatrix<C64>, g: impl Fn(f64) -> C64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(m);
    spectral_apply(&values, &vectors, g)
}

pub fn spectral_apply(values: &DVector<f64>, vectors: &DMatrix<C64>, g: impl Fn(f64) -> C64) -> DMatrix<C64> {
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let factor = g(lambda);
        for x in scaled.column_mut(j).iter_mut() {
            *x *= factor;
        }
    }
    scaled * vectors.adjoint()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn trace(m: &DMatrix<C64>) -> C64 {
    m.diagonal().iter().sum()
}

/// `tr(a b)` without forming the product.
pub fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_is_sorted_and_reconstructs() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
            ],
        );
        let (values, vectors) = hermitian_eigen(&m);
        assert!(values[0] <= values[1]);
        let back = spectral_apply(&values, &vectors, |l| C64::new(l, 0.0));
        assert!((back - &m).norm() < 1e-12);
        let tr = trace(&m);
        assert!((values.sum() - tr.re).abs() < 1e-12);
    }

    #[test]
    fn trace_of_product_matches_dense() {
        let a = DMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 + 1.0, j as f64 - 0.5));
        let b = DMatrix::from_fn(3, 3, |i, j| C64::new((i * j) as f64, 1.0));
        let dense = trace(&(&a * &b));
        assert!((trace_of_product(&a, &b) - dense).norm() < 1e-12);
    }
}
