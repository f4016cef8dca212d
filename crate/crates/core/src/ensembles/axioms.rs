//! Randomized checker for the ensemble axioms.

use rand::Rng;

use super::Ensemble;
use crate::algebra::{Quantity, Realization};
use crate::exec::Exec;
use crate::random;
use crate::report::{worst_per_column, AxiomReport};
use crate::rng::RngStreams;
use crate::tolerances::Tolerances;
use crate::C64;

const CHECKS: [(&str, &str); 5] = [
    ("E1", "<1> = 1, <f*> = conj <f>, additivity"),
    ("E2", "<a f> = a <f>"),
    ("E3", "f >= 0 implies <f> >= 0"),
    ("monotony", "f <= g implies <f> <= <g>"),
    ("sigma", "sigma(f)^2 = <f* f> - |<f>|^2"),
];

/// A nonnegative probe: random `x* x`, a basis event, or a rank-one projector.
fn nonnegative_probe<R: Rng>(rng: &mut R, realization: Realization, n: usize, index: usize) -> Quantity {
    match index % 3 {
        0 => random::nonnegative(rng, realization, n),
        1 => {
            let mut d = vec![C64::new(0.0, 0.0); n];
            d[(index / 3) % n] = C64::new(1.0, 0.0);
            match realization {
                Realization::Classical => Quantity::classical(d).expect("finite"),
                Realization::Matrix => Quantity::diagonal(&d).expect("finite"),
            }
        }
        _ => match realization {
            Realization::Classical => {
                let mut d = vec![C64::new(0.0, 0.0); n];
                d[rng.random_range(0..n)] = C64::new(1.0, 0.0);
                Quantity::classical(d).expect("finite")
            }
            Realization::Matrix => {
                let v = random::unit_vector(rng, n);
                Quantity::matrix(&v * v.adjoint()).expect("finite")
            }
        },
    }
}

fn sample_residuals<R: Rng>(e: &Ensemble, rng: &mut R, index: usize, tol: &Tolerances) -> Vec<f64> {
    let n = e.dim();
    let realization = e.realization();
    let f = random::quantity(rng, realization, n);
    let g = random::quantity(rng, realization, n);
    let alpha = random::complex_normal(rng);
    let mean = |q: &Quantity| e.expectation(q).unwrap_or(C64::new(f64::NAN, f64::NAN));

    let one = f.identity_like();
    let e1 = (mean(&one) - C64::new(1.0, 0.0))
        .norm()
        .max((mean(&f.conjugate()) - mean(&f).conj()).norm())
        .max((mean(&f.add(&g).expect("compatible")) - mean(&f) - mean(&g)).norm());
    let e2 = (mean(&f.scale(alpha)) - alpha * mean(&f)).norm();

    let probe = nonnegative_probe(rng, realization, n, index);
    let p = mean(&probe);
    let e3 = (-p.re).max(0.0).max(p.im.abs());

    let a = random::hermitian(rng, realization, n);
    let b = a.add(&random::nonnegative(rng, realization, n)).expect("compatible");
    let monotony = if a.leq(&b, tol).unwrap_or(false) {
        (mean(&a).re - mean(&b).re).max(0.0)
    } else {
        0.0
    };

    let sigma = e.sigma(&f).unwrap_or(f64::NAN);
    let ff = mean(&f.conjugate().mul(&f).expect("compatible")).re;
    let sigma_check = (sigma * sigma - (ff - mean(&f).norm_sqr())).abs();

    vec![e1, e2, e3, monotony, sigma_check]
}

/// Check the ensemble axioms on `samples` random quantities drawn in the
/// ensemble's own realization.
pub fn check_e_axioms(e: &Ensemble, streams: &RngStreams, samples: usize, tol: &Tolerances, exec: Exec) -> AxiomReport {
    let streams = streams.derive(e.form_name());
    let rows = exec.map(samples, |i| {
        let mut rng = streams.stream(i as u64);
        sample_residuals(e, &mut rng, i, tol)
    });
    let worst = worst_per_column(&rows, CHECKS.len());
    let mut report = AxiomReport::new(format!("ensemble axioms, {} form, dim {}", e.form_name(), e.dim()));
    for ((name, note), w) in CHECKS.iter().zip(worst) {
        report.record(name, w, tol.value_tol, samples, note);
    }
    report.skip(
        "E4",
        "not checked (out of scope): needs monotone limits in infinite settings",
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleForm;
    use crate::report::CheckStatus;
    use nalgebra::DVector;

    #[test]
    fn valid_forms_pass() {
        let tol = Tolerances::default();
        let streams = RngStreams::new(11, "e-axioms");
        for k in 0..6 {
            let realization = if k % 2 == 0 {
                Realization::Matrix
            } else {
                Realization::Classical
            };
            let e = random::ensemble(&mut streams.stream(1000 + k), realization, 3);
            let report = check_e_axioms(&e, &streams, 200, &tol, Exec::Parallel);
            assert!(report.all_passed(), "{} {:#?}", e.form_name(), report);
            assert_eq!(report.status("E4"), Some(CheckStatus::Skipped));
        }
    }

    #[test]
    fn negative_weight_fails_positivity() {
        let tol = Tolerances::default();
        let e = Ensemble::new_unchecked(EnsembleForm::Weights(DVector::from_vec(vec![0.6, 0.5, -0.1])));
        let report = check_e_axioms(&e, &RngStreams::new(12, "e-axioms"), 60, &tol, Exec::Sequential);
        assert_eq!(report.status("E3"), Some(CheckStatus::Fail));
        assert_eq!(report.status("E1"), Some(CheckStatus::Pass));
    }
}
