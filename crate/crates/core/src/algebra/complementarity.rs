//! Numerical estimate of the complementarity constant of a Hermitian pair.
//!
//! For Hermitian `f, g` the largest `gamma` with `(f-x)^2 + (g-y)^2 >= gamma^2`
//! for all real `x, y` is `sqrt(inf_{x,y} lambda_min((f-x)^2 + (g-y)^2))`. The
//! infimum is located by a grid scan over `[-||f||, ||f||] x [-||g||, ||g||]`
//! followed by coordinate descent with golden-section line searches.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{linalg, Quantity};
use crate::error::Result;
use crate::tolerances::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSearch {
    /// Grid points per axis.
    pub points: usize,
    /// Number of best grid points refined by coordinate descent.
    pub starts: usize,
    /// Maximum coordinate-descent sweeps per start.
    pub max_sweeps: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            points: 41,
            starts: 4,
            max_sweeps: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplementarityEstimate {
    pub gamma: f64,
    /// `inf lambda_min`, before clamping and the square root.
    pub min_value: f64,
    pub argmin: (f64, f64),
}

enum Objective {
    Classical {
        f: Vec<f64>,
        g: Vec<f64>,
    },
    Matrix {
        f2g2: DMatrix<C64>,
        f: DMatrix<C64>,
        g: DMatrix<C64>,
    },
}

impl Objective {
    fn new(f: &Quantity, g: &Quantity) -> Self {
        match (f, g) {
            (Quantity::Classical(a), Quantity::Classical(b)) => Objective::Classical {
                f: a.iter().map(|z| z.re).collect(),
                g: b.iter().map(|z| z.re).collect(),
            },
            _ => {
                let fm = f.to_matrix();
                let gm = g.to_matrix();
                Objective::Matrix {
                    f2g2: &fm * &fm + &gm * &gm,
                    f: fm,
                    g: gm,
                }
            }
        }
    }

    /// `lambda_min((f-x)^2 + (g-y)^2)`
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Objective::Classical { f, g } => f
                .iter()
                .zip(g)
                .map(|(a, b)| (a - x).powi(2) + (b - y).powi(2))
                .fold(f64::INFINITY, f64::min),
            Objective::Matrix { f2g2, f, g } => {
                let mut m = f2g2 - f * C64::new(2.0 * x, 0.0) - g * C64::new(2.0 * y, 0.0);
                let shift = C64::new(x * x + y * y, 0.0);
                for i in 0..m.nrows() {
                    m[(i, i)] += shift;
                }
                linalg::hermitian_eigenvalues(&m)[0]
            }
        }
    }
}

fn golden_section(phi: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = phi(c);
    let mut fd = phi(d);
    for _ in 0..90 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = phi(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn descend(
    obj: &Objective,
    start: (f64, f64),
    width: (f64, f64),
    max_sweeps: usize,
    value_tol: f64,
) -> ((f64, f64), f64) {
    let (mut x, mut y) = start;
    let mut best = obj.eval(x, y);
    for _ in 0..max_sweeps {
        let before = best;
        let (mut moved_x, mut moved_y) = (0.0_f64, 0.0_f64);
        let (nx, vx) = golden_section(|t| obj.eval(t, y), x - width.0, x + width.0);
        if vx <= best {
            moved_x = (nx - x).abs();
            x = nx;
            best = vx;
        }
        let (ny, vy) = golden_section(|t| obj.eval(x, t), y - width.1, y + width.1);
        if vy <= best {
            moved_y = (ny - y).abs();
            y = ny;
            best = vy;
        }
        if before - best <= value_tol * value_tol && moved_x.max(moved_y) <= value_tol {
            break;
        }
    }
    ((x, y), best)
}

/// Estimate the complementarity constant `gamma` of the Hermitian pair `(f, g)`.
pub fn complementarity_gamma(
    f: &Quantity,
    g: &Quantity,
    search: &GridSearch,
    tol: &Tolerances,
) -> Result<ComplementarityEstimate> {
    f.check_compatible(g)?;
    f.require_hermitian(tol)?;
    g.require_hermitian(tol)?;
    let obj = Objective::new(f, g);
    let (bx, by) = (f.spectral_norm(), g.spectral_norm());
    let points = search.points.max(2);
    let axis = |bound: f64| -> Vec<f64> {
        (0..points)
            .map(|i| -bound + 2.0 * bound * i as f64 / (points - 1) as f64)
            .collect()
    };
    let (xs, ys) = (axis(bx), axis(by));
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(points * points);
    for &x in &xs {
        for &y in &ys {
            grid.push((obj.eval(x, y), x, y));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let spacing = |bound: f64| (2.0 * bound / (points - 1) as f64).max(1e-3);
    let width = (spacing(bx), spacing(by));
    let mut best = (grid[0].0, (grid[0].1, grid[0].2));
    for &(_, x, y) in grid.iter().take(search.starts.max(1)) {
        let (arg, value) = descend(&obj, (x, y), width, search.max_sweeps, tol.value_tol);
        if value < best.0 {
            best = (value, arg);
        }
    }
    Ok(ComplementarityEstimate {
        gamma: best.0.max(0.0).sqrt(),
        min_value: best.0,
        argmin: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{pauli, truncated_oscillator};

    /// Closed form of lambda_min for the Pauli pair: 2 + r^2 - 2r with r = |(x, y)|.
    fn pauli_oracle(x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        2.0 + r * r - 2.0 * r
    }

    #[test]
    fn objective_matches_pauli_closed_form() {
        let obj = Objective::new(&pauli(1).unwrap(), &pauli(3).unwrap());
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.8), (1.0, 0.0), (-2.0, 1.5)] {
            assert!((obj.eval(x, y) - pauli_oracle(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_pair_has_gamma_one_on_unit_circle() {
        let tol = Tolerances::default();
        let est = complementarity_gamma(&pauli(1).unwrap(), &pauli(3).unwrap(), &GridSearch::default(), &tol).unwrap();
        assert!((est.gamma - 1.0).abs() <= 1e-6, "gamma {}", est.gamma);
        let (s1, s3) = est.argmin;
        assert!((s1 * s1 + s3 * s3 - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn commuting_classical_pair_has_zero_gamma() {
        let tol = Tolerances::default();
        let f = Quantity::classical_real(&[0.3, -1.2, 2.0]).unwrap();
        let g = Quantity::classical_real(&[1.1, 0.4, -0.7]).unwrap();
        let est = complementarity_gamma(&f, &g, &GridSearch::default(), &tol).unwrap();
        assert!(est.gamma <= 1e-6, "gamma {}", est.gamma);
    }

    #[test]
    fn truncated_oscillator_pair_is_complementary() {
        // Oracle: brute-force 201x201 scan of the same box, computed independently.
        let tol = Tolerances::default();
        let (q, p) = truncated_oscillator(20, 1.0).unwrap();
        let obj = Objective::new(&q, &p);
        let (bq, bp) = (q.spectral_norm(), p.spectral_norm());
        let mut oracle = f64::INFINITY;
        for i in 0..=100 {
            for j in 0..=100 {
                let x = -bq + 2.0 * bq * i as f64 / 100.0;
                let y = -bp + 2.0 * bp * j as f64 / 100.0;
                oracle = oracle.min(obj.eval(x, y));
            }
        }
        let est = complementarity_gamma(&q, &p, &GridSearch::default(), &tol).unwrap();
        assert!(est.gamma >= 0.9);
        assert!(est.min_value <= oracle + 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let tol = Tolerances::default();
        let f = Quantity::matrix_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            complementarity_gamma(&f, &pauli(3).unwrap(), &GridSearch::default(), &tol),
            Err(crate::QcalcError::NotHermitian { .. })
        ));
    }
}
