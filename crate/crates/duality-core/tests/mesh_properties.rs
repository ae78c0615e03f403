use duality_core::bsgen::{fourier, hadamard};
use duality_core::mesh::{block_paths, compile, evaluate, evaluate_unitary, haar_random};
use proptest::prelude::*;

fn transmitted_power(m: &duality_core::qcore::ComplexMatrix) -> f64 {
    m.frobenius_norm().powi(2)
}

#[test]
fn balanced_beamsplitters_compile() {
    for d in [2, 4, 8, 16] {
        let u = hadamard(d).unwrap();
        let mesh = compile(&u).unwrap();
        assert!(mesh.nodes().len() <= d * (d - 1) / 2);
        assert!(evaluate(&mesh).distance_up_to_phase(u.matrix()).unwrap() < 1e-9);
    }
    let f = fourier(4).unwrap();
    assert!(evaluate(&compile(&f).unwrap()).distance_up_to_phase(f.matrix()).unwrap() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_and_unitarity(d in 2usize..=16, seed in any::<u64>()) {
        let u = haar_random(d, seed).unwrap();
        let mesh = compile(&u).unwrap();
        prop_assert_eq!(mesh.nodes().len(), d * (d - 1) / 2);
        prop_assert!(evaluate(&mesh).distance_up_to_phase(u.matrix()).unwrap() < 1e-9);
        prop_assert!(evaluate_unitary(&mesh).is_ok());
    }

    #[test]
    fn power_is_monotone_in_imperfection_and_blocking(
        d in 2usize..=8,
        seed in any::<u64>(),
        v1 in 0.5f64..1.0,
        v2 in 0.5f64..1.0,
        mask_bits in 1u32..255,
        eps in 0.0f64..0.05,
    ) {
        let mesh = compile(&haar_random(d, seed).unwrap()).unwrap();
        let (hi, lo) = if v1 >= v2 { (v1, v2) } else { (v2, v1) };
        let p_hi = transmitted_power(&evaluate(&mesh.with_visibility(hi).unwrap()));
        let p_lo = transmitted_power(&evaluate(&mesh.with_visibility(lo).unwrap()));
        prop_assert!(p_lo <= p_hi + 1e-12);
        let mask: Vec<bool> = (0..d).map(|k| mask_bits & (1 << k) != 0).collect();
        prop_assume!(!mask.iter().all(|&b| b));
        let open = transmitted_power(&evaluate(&mesh));
        let leaky = transmitted_power(&evaluate(&block_paths(&mesh, &mask, eps).unwrap()));
        let closed = transmitted_power(&evaluate(&block_paths(&mesh, &mask, 0.0).unwrap()));
        prop_assert!(closed <= leaky + 1e-12 && leaky <= open + 1e-12);
    }
}
