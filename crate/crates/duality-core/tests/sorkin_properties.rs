use duality_core::bsgen::PhaseArray;
use duality_core::mesh::haar_random;
use duality_core::sorkin::{exact_probabilities, kappa, run_batch, SorkinRun};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn born_rule_exact_at_random_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let phases = PhaseArray::new((0..4).map(|_| rng.random_range(-PI..PI)).collect()).unwrap();
        let p = exact_probabilities(&phases, 0.0).unwrap();
        let t = kappa(&p).unwrap();
        assert!(t.fourth_order.abs() < 1e-12);
    }
    // Keep the Haar utility linked into this test binary's coverage.
    assert_eq!(haar_random(4, 0).unwrap().dim(), 4);
}

#[test]
fn spread_shrinks_with_statistics() {
    let at = |mean_total: f64| {
        run_batch(&SorkinRun {
            mean_total,
            trials: 200,
            ..SorkinRun::standard()
        })
        .unwrap()
        .kappa_std
    };
    let ratio = at(1e4) / at(1e5);
    // Ideal scaling is √10 ≈ 3.16.
    assert!((2.5..4.0).contains(&ratio), "ratio {ratio}");
}
