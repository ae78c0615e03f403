use duality_core::qcore::{
    apply, partial_trace, tensor, ComplexMatrix, DensityMatrix, StateVector, Subsystem, Unitary,
};
use duality_core::{mesh::haar_random, C64};
use proptest::prelude::*;

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            StateVector::normalized_from(v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
                .unwrap()
        })
}

proptest! {
    #[test]
    fn unitaries_preserve_norm(seed in any::<u64>(), s in state(6)) {
        let u = haar_random(6, seed).unwrap();
        let out = apply(&u, &s).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let back = apply(&u.adjoint(), &out).unwrap();
        let err: f64 = back.amplitudes().iter().zip(s.amplitudes()).map(|(a, b)| (a - b).norm()).sum();
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn pure_states_are_valid_densities(s in state(5)) {
        let rho = DensityMatrix::from_pure(&s).unwrap();
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        prop_assert!((rho.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_marginals_are_exact(a in state(2), b in state(3)) {
        let rho = DensityMatrix::from_pure(&tensor(&a, &b)).unwrap();
        let ra = partial_trace(&rho, (2, 3), Subsystem::First).unwrap();
        let rb = partial_trace(&rho, (2, 3), Subsystem::Second).unwrap();
        prop_assert!(ra.matrix().distance(DensityMatrix::from_pure(&a).unwrap().matrix()).unwrap() < 1e-12);
        prop_assert!(rb.matrix().distance(DensityMatrix::from_pure(&b).unwrap().matrix()).unwrap() < 1e-12);
        prop_assert!((rb.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn textbook_examples() {
    let h = duality_core::bsgen::hadamard(2).unwrap();
    let plus = apply(&h, &StateVector::basis(2, 0).unwrap()).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((plus.amplitudes()[0].re - r).abs() < 1e-15 && (plus.amplitudes()[1].re - r).abs() < 1e-15);

    let h4 = duality_core::bsgen::hadamard(4).unwrap();
    let zero = StateVector::basis(4, 0).unwrap();
    let twice = apply(&h4, &apply(&h4, &zero).unwrap()).unwrap();
    assert!((twice.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-12);

    let id = tensor(&Unitary::identity(2), &Unitary::identity(2));
    assert_eq!(id.matrix(), &ComplexMatrix::identity(4));
    let s = StateVector::uniform(4).unwrap();
    assert_eq!(apply(&Unitary::identity(4), &s).unwrap(), s);
}
