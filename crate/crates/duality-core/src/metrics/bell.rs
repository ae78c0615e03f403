use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::qcore::{ComplexMatrix, DensityMatrix, Tensor, C64};
use crate::{Error, Result};

/// Analyzer angles; each observable is `cosθ·σ_z + sinθ·σ_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChshSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshSettings {
    /// Maximal violation for `|Φ⁺⟩`.
    pub fn optimal() -> Self {
        Self {
            a: 0.0,
            a_prime: FRAC_PI_2,
            b: FRAC_PI_4,
            b_prime: 3.0 * FRAC_PI_4,
        }
    }
}

fn observable(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
        (0, 0) => C64::new(c, 0.0),
        (1, 1) => C64::new(-c, 0.0),
        _ => C64::new(s, 0.0),
    })
}

fn correlator(rho: &DensityMatrix, a: f64, b: f64) -> Result<f64> {
    Ok(rho.expectation(&observable(a).tensor(&observable(b)))?.re)
}

/// `S = E(a,b) - E(a,b') + E(a',b) + E(a',b')`.
pub fn chsh_value(rho: &DensityMatrix, s: &ChshSettings) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(correlator(rho, s.a, s.b)? - correlator(rho, s.a, s.b_prime)?
        + correlator(rho, s.a_prime, s.b)?
        + correlator(rho, s.a_prime, s.b_prime)?)
}

/// Bell weight `v` of the Werner state whose fidelity to `|Φ⁺⟩` is `f`,
/// inverting `f = (1 + 3v)/4`.
pub fn bell_weight_for_fidelity(fidelity: f64) -> f64 {
    (4.0 * fidelity - 1.0) / 3.0
}
