//! CHSH correlators, the spin-pair example, and the two Bell-type bounds:
//! `2 sqrt 2` for every ensemble, and `2` when the odd-distance pairs commute
//! and are uncorrelated.

use nalgebra::DVector;
use rand::Rng;

use crate::algebra::{identity, pauli, Quantity, Realization};
use crate::ensembles::Ensemble;
use crate::error::{QcalcError, Result};
use crate::exec::Exec;
use crate::random;
use crate::rng::RngStreams;
use crate::tolerances::Tolerances;
use crate::C64;

pub const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Four Hermitian quantities with `f_k^2 <= 1`, where `f_j` and `f_k` commute
/// whenever `j - k` is odd.
#[derive(Debug, Clone, PartialEq)]
pub struct BellQuadruple {
    fs: [Quantity; 4],
}

/// The odd-distance pairs `(1,2), (3,2), (3,4), (1,4)` with zero-based indices.
const PAIRS: [(usize, usize); 4] = [(0, 1), (2, 1), (2, 3), (0, 3)];

impl BellQuadruple {
    pub fn new(fs: [Quantity; 4], tol: &Tolerances) -> Result<Self> {
        for (k, f) in fs.iter().enumerate() {
            f.check_compatible(&fs[0])?;
            if !f.is_hermitian(tol) {
                return Err(QcalcError::InvalidQuadruple(format!("f{} is not Hermitian", k + 1)));
            }
            if !f.square().leq(&f.identity_like(), tol)? {
                return Err(QcalcError::InvalidQuadruple(format!("f{}^2 exceeds 1", k + 1)));
            }
        }
        for &(j, k) in &PAIRS {
            if !fs[j].commutes_with(&fs[k], tol)? {
                return Err(QcalcError::InvalidQuadruple(format!(
                    "f{} and f{} do not commute",
                    j + 1,
                    k + 1
                )));
            }
        }
        Ok(Self { fs })
    }

    pub fn members(&self) -> &[Quantity; 4] {
        &self.fs
    }

    pub fn dim(&self) -> usize {
        self.fs[0].dim()
    }

    /// `[<f1 f2>, <f3 f2>, <f3 f4>, <f1 f4>]` (real parts).
    pub fn correlators(&self, e: &Ensemble) -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (slot, &(j, k)) in out.iter_mut().zip(&PAIRS) {
            *slot = e.expectation(&self.fs[j].mul(&self.fs[k])?)?.re;
        }
        Ok(out)
    }
}

/// `|<f1 f2> + <f3 f2> + <f3 f4> - <f1 f4>|`
pub fn chsh_value(e: &Ensemble, q: &BellQuadruple) -> Result<f64> {
    let [a, b, c, d] = q.correlators(e)?;
    Ok((a + b + c - d).abs())
}

/// The spin pair: `f1 = s1 x 1, f2 = 1 x s1, f3 = s3 x 1, f4 = 1 x s3` and the
/// state `(a1, a2, -a2, a1)` with `a1,2 = sqrt((2 +- sqrt 2)/8)`.
///
/// This state is the top eigenvector of the CHSH operator
/// `f1 f2 + f3 f2 + f3 f4 - f1 f4`, with correlators
/// `<f1 f2> = <f3 f2> = <f3 f4> = -<f1 f4> = sqrt(2)/2`. The sign-flipped
/// vector `(a1, -a2, a2, a1)` only reproduces the first and third of these.
pub fn spin_pair_example() -> (BellQuadruple, DVector<C64>) {
    let one = identity(Realization::Matrix, 2);
    let s1 = pauli(1).expect("valid index");
    let s3 = pauli(3).expect("valid index");
    let t = |a: &Quantity, b: &Quantity| a.tensor(b).expect("matrix operands");
    let fs = [t(&s1, &one), t(&one, &s1), t(&s3, &one), t(&one, &s3)];
    let r2 = std::f64::consts::SQRT_2;
    let a1 = ((2.0 + r2) / 8.0).sqrt();
    let a2 = ((2.0 - r2) / 8.0).sqrt();
    let psi = DVector::from_vec(vec![a1, a2, -a2, a1].into_iter().map(|x| C64::new(x, 0.0)).collect());
    let q = BellQuadruple::new(fs, &Tolerances::default()).expect("spin pair is a valid quadruple");
    (q, psi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBound {
    /// All odd-distance pairs commute and are uncorrelated.
    pub applicable: bool,
    pub chsh: f64,
}

pub fn classical_bound_check(e: &Ensemble, q: &BellQuadruple, tol: &Tolerances) -> Result<ClassicalBound> {
    let mut applicable = true;
    for &(j, k) in &PAIRS {
        applicable &= q.fs[j].commutes_with(&q.fs[k], tol)? && e.is_uncorrelated(&q.fs[j], &q.fs[k], tol)?;
    }
    Ok(ClassicalBound {
        applicable,
        chsh: chsh_value(e, q)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzConfig {
    pub trials: usize,
    /// Dimension of each tensor factor; quadruples live in dimension `factor_dim^2`.
    pub factor_dim: usize,
    pub realization: Realization,
    /// Replace trial 0 by the spin-pair instance (matrix realization only).
    pub include_spin_pair: bool,
    pub exec: Exec,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            factor_dim: 2,
            realization: Realization::Matrix,
            include_spin_pair: false,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzOutcome {
    pub trials: usize,
    pub max_chsh: f64,
    pub argmax: usize,
}

/// Hermitian factor with norm at most one: either a random reflection
/// (eigenvalues +-1) or a rescaled random Hermitian element.
fn random_factor<R: Rng>(rng: &mut R, realization: Realization, d: usize) -> Quantity {
    match realization {
        Realization::Classical => {
            let v: Vec<C64> = (0..d)
                .map(|_| {
                    let x = if rng.random_bool(0.5) {
                        if rng.random_bool(0.5) {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        rng.random_range(-1.0..=1.0)
                    };
                    C64::new(x, 0.0)
                })
                .collect();
            Quantity::classical(v).expect("finite")
        }
        Realization::Matrix => {
            if rng.random_bool(0.5) {
                let u = random::unitary(rng, d);
                let signs = DVector::from_fn(d, |_, _| C64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0));
                let m = &u * nalgebra::DMatrix::from_diagonal(&signs) * u.adjoint();
                let h = Quantity::matrix(m).expect("finite").re_im().0;
                let norm = h.spectral_norm();
                h.scale_real(1.0 / norm)
            } else {
                let h = random::hermitian(rng, Realization::Matrix, d);
                let norm = h.spectral_norm();
                h.scale_real(rng.random_range(0.2..=1.0) / norm)
            }
        }
    }
}

/// A random quadruple built from `A x 1` and `1 x B` blocks, so odd-distance
/// pairs commute by construction.
pub fn random_quadruple<R: Rng>(rng: &mut R, realization: Realization, d: usize, tol: &Tolerances) -> BellQuadruple {
    let one = identity(realization, d);
    let a1 = random_factor(rng, realization, d);
    let b2 = random_factor(rng, realization, d);
    let a3 = random_factor(rng, realization, d);
    let b4 = random_factor(rng, realization, d);
    let t = |a: &Quantity, b: &Quantity| a.tensor(b).expect("same realization");
    let fs = [t(&a1, &one), t(&one, &b2), t(&a3, &one), t(&one, &b4)];
    BellQuadruple::new(fs, tol).expect("valid by construction")
}

/// Maximum CHSH value over random quadruples and ensembles.
pub fn tsirelson_fuzz(streams: &RngStreams, cfg: &FuzzConfig, tol: &Tolerances) -> FuzzOutcome {
    let d = cfg.factor_dim.max(1);
    let values = cfg.exec.map(cfg.trials, |i| {
        if i == 0 && cfg.include_spin_pair && cfg.realization == Realization::Matrix && d == 2 {
            let (q, psi) = spin_pair_example();
            let e = Ensemble::pure(psi).expect("unit vector");
            return chsh_value(&e, &q).expect("dimensions match");
        }
        let mut rng = streams.stream(i as u64);
        let q = random_quadruple(&mut rng, cfg.realization, d, tol);
        let e = random::ensemble(&mut rng, cfg.realization, d * d);
        chsh_value(&e, &q).expect("dimensions match")
    });
    let (argmax, max_chsh) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );
    FuzzOutcome {
        trials: cfg.trials,
        max_chsh,
        argmax,
    }
}
