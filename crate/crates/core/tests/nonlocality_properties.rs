use proptest::prelude::*;

use qcalc_core::nonlocality::{
    chsh_value, classical_bound_check, random_quadruple, spin_pair_example, tsirelson_fuzz, FuzzConfig, TSIRELSON,
};
use qcalc_core::{random, Ensemble, Exec, Realization, RngStreams, Tolerances};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quantum_chsh_never_exceeds_tsirelson(seed in any::<u64>(), d in 1usize..4) {
        let tol = Tolerances::default();
        let mut rng = RngStreams::new(seed, "chsh").stream(0);
        let q = random_quadruple(&mut rng, Realization::Matrix, d, &tol);
        let e = random::ensemble(&mut rng, Realization::Matrix, d * d);
        prop_assert!(chsh_value(&e, &q).unwrap() <= TSIRELSON + tol.value_tol);
    }

    #[test]
    fn uncorrelated_commuting_pairs_obey_two(seed in any::<u64>(), d in 1usize..5) {
        let tol = Tolerances::default();
        let mut rng = RngStreams::new(seed, "classical").stream(0);
        let q = random_quadruple(&mut rng, Realization::Classical, d, &tol);
        let (wa, wb) = (random::weights(&mut rng, d), random::weights(&mut rng, d));
        let product: Vec<f64> = wa.iter().flat_map(|a| wb.iter().map(move |b| a * b)).collect();
        let e = Ensemble::weights(product).unwrap();
        let bound = classical_bound_check(&e, &q, &tol).unwrap();
        prop_assert!(bound.applicable);
        prop_assert!(bound.chsh <= 2.0 + tol.value_tol, "chsh {}", bound.chsh);
    }
}

#[test]
fn spin_pair_commutation_pattern_is_exact() {
    let (q, _) = spin_pair_example();
    let fs = q.members();
    for j in 0..4 {
        for k in 0..4 {
            let jk = fs[j].mul(&fs[k]).unwrap();
            let kj = fs[k].mul(&fs[j]).unwrap();
            let expected = if j.abs_diff(k) == 2 { kj.neg() } else { kj };
            assert_eq!(jk, expected, "f{} f{}", j + 1, k + 1);
        }
    }
}

#[test]
fn fuzz_is_identical_across_execution_modes() {
    let tol = Tolerances::default();
    let streams = RngStreams::new(5, "fuzz-modes");
    let run = |exec| {
        tsirelson_fuzz(
            &streams,
            &FuzzConfig {
                trials: 300,
                exec,
                ..FuzzConfig::default()
            },
            &tol,
        )
    };
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
}
