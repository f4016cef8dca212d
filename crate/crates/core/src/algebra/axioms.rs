//! Randomized checker for the Q-algebra axioms and their elementary consequences.
//!
//! Every check is evaluated on `samples` independent draws. Identities report a
//! spectral-norm residual; implications and order statements report `0` when
//! they hold and `1` when they do not. Operations go through [`AlgebraOps`] so
//! that faulty implementations can be injected and shown to be caught.

use rand::Rng;

use super::{Quantity, Realization};
use crate::exec::Exec;
use crate::random;
use crate::report::{worst_per_column, AxiomReport};
use crate::rng::RngStreams;
use crate::tolerances::Tolerances;
use crate::C64;

/// The operations under test. Defaults delegate to [`Quantity`].
pub trait AlgebraOps: Sync {
    fn conjugate(&self, f: &Quantity) -> Quantity {
        f.conjugate()
    }

    fn mul(&self, f: &Quantity, g: &Quantity) -> Quantity {
        f.mul(g).expect("sampled operands are compatible")
    }

    fn leq(&self, f: &Quantity, g: &Quantity, tol: &Tolerances) -> bool {
        f.leq(g, tol).expect("sampled operands are compatible")
    }

    fn norm(&self, f: &Quantity) -> f64 {
        f.spectral_norm()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardOps;

impl AlgebraOps for StandardOps {}

/// Deliberately broken operations for testing the checker itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedFault {
    /// Conjugation transposes without conjugating entries.
    TransposeOnlyConjugate,
    /// The order relation is reversed.
    ReversedOrder,
}

impl AlgebraOps for InjectedFault {
    fn conjugate(&self, f: &Quantity) -> Quantity {
        match (self, f) {
            (InjectedFault::TransposeOnlyConjugate, Quantity::Classical(v)) => Quantity::Classical(v.clone()),
            (InjectedFault::TransposeOnlyConjugate, Quantity::Matrix(m)) => Quantity::Matrix(m.transpose()),
            _ => f.conjugate(),
        }
    }

    fn leq(&self, f: &Quantity, g: &Quantity, tol: &Tolerances) -> bool {
        match self {
            InjectedFault::ReversedOrder => g.leq(f, tol).expect("compatible"),
            _ => f.leq(g, tol).expect("compatible"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomCheckConfig {
    pub realization: Realization,
    pub dim: usize,
    pub samples: usize,
    pub exec: Exec,
}

const CHECKS: [(&str, &str); 19] = [
    ("Q1", "scalars embed: products, sums and conjugates of scalars"),
    ("Q2", "associativity and scalar multiplication"),
    ("Q3", "additive structure and distributivity"),
    ("Q4", "conjugation is an involutive anti-automorphism"),
    ("Q5", "small f*f forces small f"),
    ("Q6", "order is reflexive, antisymmetric and transitive"),
    ("Q7", "order is translation invariant"),
    ("Q8", "f*f is Hermitian and nonnegative; congruence preserves order"),
    ("Q9", "0 <= 1"),
    ("e.p1", "right distributivity, f - f = 0, commutative addition"),
    ("e.p2", "[f, f*] = -2i [re f, im f]"),
    ("e.p3", "f*f >= 0 and f f* >= 0"),
    ("e.p5", "f <= g implies h*fh <= h*gh and |l| f <= |l| g"),
    ("e.p6", "f*g + g*f <= 2 ||f|| ||g||"),
    ("e.p7", "||l f|| = |l| ||f|| and ||f +- g|| <= ||f|| + ||g||"),
    ("e.p8", "||fg|| <= ||f|| ||g||"),
    ("norm-adjoint", "||f*|| = ||f||"),
    ("square-monotone", "0 <= f <= g implies f^2 <= g^2"),
    ("commutativity", "fg = gf"),
];

fn flag(holds: bool) -> f64 {
    if holds {
        0.0
    } else {
        1.0
    }
}

fn dist(a: &Quantity, b: &Quantity) -> f64 {
    a.distance(b).expect("compatible")
}

fn add(a: &Quantity, b: &Quantity) -> Quantity {
    a.add(b).expect("compatible")
}

fn sub(a: &Quantity, b: &Quantity) -> Quantity {
    a.sub(b).expect("compatible")
}

/// Residuals of every entry of [`CHECKS`] on one draw.
fn sample_residuals<O: AlgebraOps, R: Rng>(
    ops: &O,
    rng: &mut R,
    realization: Realization,
    n: usize,
    tol: &Tolerances,
) -> Vec<f64> {
    let f = random::quantity(rng, realization, n);
    let g = random::quantity(rng, realization, n);
    let h = random::quantity(rng, realization, n);
    let a = random::hermitian(rng, realization, n);
    let p1 = random::nonnegative(rng, realization, n);
    let p2 = random::nonnegative(rng, realization, n);
    let alpha = random::complex_normal(rng);
    let beta = random::complex_normal(rng);
    let lambda = random::real_scalar(rng);
    let one = f.identity_like();
    let zero = f.scalar_like(C64::new(0.0, 0.0));
    let s_alpha = f.scalar_like(alpha);
    let s_beta = f.scalar_like(beta);
    let conj = |x: &Quantity| ops.conjugate(x);
    let mul = |x: &Quantity, y: &Quantity| ops.mul(x, y);
    let leq = |x: &Quantity, y: &Quantity| ops.leq(x, y, tol);
    let norm = |x: &Quantity| ops.norm(x);

    let q1 = dist(&mul(&s_alpha, &s_beta), &f.scalar_like(alpha * beta))
        .max(dist(&add(&s_alpha, &s_beta), &f.scalar_like(alpha + beta)))
        .max(dist(&conj(&s_alpha), &f.scalar_like(alpha.conj())));

    let q2 = dist(&mul(&mul(&f, &g), &h), &mul(&f, &mul(&g, &h)))
        .max(dist(&f.scale(alpha), &mul(&s_alpha, &f)))
        .max(dist(&mul(&f, &s_alpha), &mul(&s_alpha, &f)))
        .max(norm(&mul(&zero, &f)))
        .max(dist(&mul(&one, &f), &f));

    let q3 = dist(&add(&add(&f, &g), &h), &add(&f, &add(&g, &h)))
        .max(dist(&mul(&f, &add(&g, &h)), &add(&mul(&f, &g), &mul(&f, &h))))
        .max(dist(&add(&f, &zero), &f));

    let q4 = dist(&conj(&conj(&f)), &f)
        .max(dist(&conj(&mul(&f, &g)), &mul(&conj(&g), &conj(&f))))
        .max(dist(&conj(&add(&f, &g)), &add(&conj(&f), &conj(&g))))
        .max(dist(&conj(&f.scale(alpha)), &conj(&f).scale(alpha.conj())));

    // Scale f so that ||f* f|| = psd_tol / 2; then ||f|| may not exceed sqrt(psd_tol).
    let q5 = {
        let fn_ = norm(&f);
        let t = f.scale_real((tol.psd_tol / 2.0).sqrt() / fn_);
        let premise = norm(&mul(&conj(&t), &t)) <= tol.psd_tol;
        let bound = tol.psd_tol.sqrt();
        if premise {
            (norm(&t) - bound).max(0.0) / bound
        } else {
            0.0
        }
    };

    let b = add(&a, &p1);
    let c = add(&b, &p2);
    let q6 = flag(leq(&a, &a))
        .max(flag(!(leq(&a, &b) && leq(&b, &a)) || dist(&a, &b) <= tol.value_tol))
        .max(flag(!(leq(&a, &b) && leq(&b, &c)) || leq(&a, &c)));

    let shift = random::hermitian(rng, realization, n);
    let q7 = flag(!leq(&a, &b) || leq(&add(&a, &shift), &add(&b, &shift)));

    let ff = mul(&conj(&f), &f);
    let q8 = {
        let herm = ff.hermitian_residual() / (1.0 + ff.spectral_norm());
        let nonneg = flag(leq(&zero, &ff));
        let congruence = flag(!leq(&a, &b) || leq(&mul(&mul(&conj(&g), &a), &g), &mul(&mul(&conj(&g), &b), &g)));
        herm.max(nonneg).max(congruence)
    };

    let q9 = flag(leq(&zero, &one));

    let ep1 = dist(&mul(&add(&f, &g), &h), &add(&mul(&f, &h), &mul(&g, &h)))
        .max(norm(&sub(&f, &f)))
        .max(dist(&add(&f, &g), &add(&g, &f)));

    let ep2 = {
        let fc = conj(&f);
        let re = add(&f, &fc).scale_real(0.5);
        let im = sub(&f, &fc).scale(C64::new(0.0, -0.5));
        let lhs = sub(&mul(&f, &fc), &mul(&fc, &f));
        let rhs = sub(&mul(&re, &im), &mul(&im, &re)).scale(C64::new(0.0, -2.0));
        dist(&lhs, &rhs)
    };

    let ep3 = flag(leq(&zero, &ff)).max(flag(leq(&zero, &mul(&f, &conj(&f)))));

    let ep5 = flag(
        !leq(&a, &b)
            || (leq(&mul(&mul(&conj(&h), &a), &h), &mul(&mul(&conj(&h), &b), &h))
                && leq(&a.scale_real(lambda.abs()), &b.scale_real(lambda.abs()))),
    );

    let ep6 = {
        let lhs = add(&mul(&conj(&f), &g), &mul(&conj(&g), &f));
        flag(leq(&lhs, &one.scale_real(2.0 * norm(&f) * norm(&g))))
    };

    let ep7 = (norm(&f.scale_real(lambda)) - lambda.abs() * norm(&f))
        .abs()
        .max((norm(&f.scale(alpha)) - alpha.norm() * norm(&f)).abs())
        .max((norm(&add(&f, &g)) - norm(&f) - norm(&g)).max(0.0))
        .max((norm(&sub(&f, &g)) - norm(&f) - norm(&g)).max(0.0));

    let ep8 = (norm(&mul(&f, &g)) - norm(&f) * norm(&g)).max(0.0);

    let norm_adjoint = (norm(&conj(&f)) - norm(&f)).abs();

    let square_monotone =
        flag(!(leq(&zero, &p1) && leq(&p1, &add(&p1, &p2))) || leq(&p1.square(), &add(&p1, &p2).square()));

    let commutativity = norm(&sub(&mul(&f, &g), &mul(&g, &f)));

    vec![
        q1,
        q2,
        q3,
        q4,
        q5,
        q6,
        q7,
        q8,
        q9,
        ep1,
        ep2,
        ep3,
        ep5,
        ep6,
        ep7,
        ep8,
        norm_adjoint,
        square_monotone,
        commutativity,
    ]
}

/// Check the axioms with the standard operations.
pub fn check_q_axioms(streams: &RngStreams, cfg: &AxiomCheckConfig, tol: &Tolerances) -> AxiomReport {
    check_q_axioms_with(&StandardOps, streams, cfg, tol)
}

pub fn check_q_axioms_with<O: AlgebraOps>(
    ops: &O,
    streams: &RngStreams,
    cfg: &AxiomCheckConfig,
    tol: &Tolerances,
) -> AxiomReport {
    let label = match cfg.realization {
        Realization::Classical => "classical",
        Realization::Matrix => "matrix",
    };
    let streams = streams.derive(label);
    let n = cfg.dim.max(1);
    let rows = cfg.exec.map(cfg.samples, |i| {
        let mut rng = streams.stream(i as u64);
        sample_residuals(ops, &mut rng, cfg.realization, n, tol)
    });
    let worst = worst_per_column(&rows, CHECKS.len());
    let mut report = AxiomReport::new(format!("Q-algebra axioms, {label} realization, dim {n}"));
    for ((name, note), w) in CHECKS.iter().zip(worst) {
        match (*name, cfg.realization) {
            ("square-monotone", Realization::Matrix) => {
                report.skip(name, "fails for noncommuting matrices; checked for tuples only")
            }
            ("commutativity", Realization::Matrix) => report.skip(name, "matrix realization is noncommutative"),
            ("commutativity", Realization::Classical) => report.record(name, w, 0.0, cfg.samples, note),
            _ => report.record(name, w, tol.value_tol, cfg.samples, note),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn cfg(realization: Realization) -> AxiomCheckConfig {
        AxiomCheckConfig {
            realization,
            dim: 3,
            samples: 100,
            exec: Exec::Sequential,
        }
    }

    #[test]
    fn standard_matrix_realization_passes() {
        let tol = Tolerances::default();
        let report = check_q_axioms(&RngStreams::new(1, "axioms"), &cfg(Realization::Matrix), &tol);
        assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.status("square-monotone"), Some(CheckStatus::Skipped));
    }

    #[test]
    fn standard_classical_realization_passes_and_commutes() {
        let tol = Tolerances::default();
        let report = check_q_axioms(&RngStreams::new(2, "axioms"), &cfg(Realization::Classical), &tol);
        assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        let entry = report.entry("commutativity").unwrap();
        assert_eq!(entry.status, CheckStatus::Pass);
        assert_eq!(entry.worst_residual, 0.0);
    }

    #[test]
    fn transpose_conjugate_is_caught() {
        let tol = Tolerances::default();
        let report = check_q_axioms_with(
            &InjectedFault::TransposeOnlyConjugate,
            &RngStreams::new(3, "axioms"),
            &cfg(Realization::Matrix),
            &tol,
        );
        assert_eq!(report.status("Q4"), Some(CheckStatus::Fail));
    }

    #[test]
    fn reversed_order_is_caught() {
        let tol = Tolerances::default();
        let report = check_q_axioms_with(
            &InjectedFault::ReversedOrder,
            &RngStreams::new(4, "axioms"),
            &cfg(Realization::Matrix),
            &tol,
        );
        assert_eq!(report.status("Q9"), Some(CheckStatus::Fail));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let tol = Tolerances::default();
        let streams = RngStreams::new(5, "axioms");
        let mut c = cfg(Realization::Matrix);
        let seq = check_q_axioms(&streams, &c, &tol);
        c.exec = Exec::Parallel;
        assert_eq!(seq, check_q_axioms(&streams, &c, &tol));
    }
}
