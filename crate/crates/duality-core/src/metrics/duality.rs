use alloc::format;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::{distinguishability, distinguishability_from_diagonal, l1_coherence};
use super::{visibility_from_fringe, FringeScan};
use crate::qcore::DensityMatrix;
use crate::{Error, Result};

/// Tolerance on `C² + D² = 1` for exact simulations.
pub const SATURATION_TOL: f64 = 1e-9;

const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DualitySource {
    FromDensityMatrix,
    FromFringe,
}

/// Coherence, visibility and distinguishability with their duality gap
/// `L_d = 1 - C² - D²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DualityReport {
    pub d: usize,
    pub coherence: f64,
    pub visibility: f64,
    pub distinguishability: f64,
    pub missing_information: f64,
    pub saturated: bool,
    pub source: DualitySource,
}

impl DualityReport {
    /// `C²+D²` above one beyond [`SATURATION_TOL`] is rejected.
    pub fn new(
        d: usize,
        coherence: f64,
        visibility: f64,
        distinguishability: f64,
        source: DualitySource,
    ) -> Result<Self> {
        let total = coherence * coherence + distinguishability * distinguishability;
        if total > 1.0 + SATURATION_TOL {
            return Err(Error::InvalidParameter(format!("C² + D² = {total} exceeds 1")));
        }
        Ok(Self {
            d,
            coherence,
            visibility,
            distinguishability,
            missing_information: 1.0 - total,
            saturated: (total - 1.0).abs() < SATURATION_TOL,
            source,
        })
    }

    /// `C` and `D` from `ρ`; the visibility is reported equal to `C`.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let c = l1_coherence(rho, true);
        Self::new(rho.dim(), c, c, distinguishability(rho)?, DualitySource::FromDensityMatrix)
    }

    /// `V` from the fringe and `D` from the single-path diagonal; the
    /// coherence is reported equal to `V`.
    pub fn from_fringe(scan: &FringeScan, diagonal: &[f64]) -> Result<Self> {
        let d = diagonal.len();
        let v = visibility_from_fringe(scan, d)?;
        let dd = distinguishability_from_diagonal(diagonal)?;
        Self::new(d, v, v, dd, DualitySource::FromFringe)
    }

    pub fn c2_plus_d2(&self) -> f64 {
        self.coherence * self.coherence + self.distinguishability * self.distinguishability
    }
}

/// The duality gap computed directly and through the Tsallis 1/2-entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsallisCheck {
    /// `1 - C² - D²`.
    pub direct: f64,
    /// `((S_{1/2} + 2)²/4 - 1)/(d - 1)`.
    pub from_entropy: f64,
    /// `S_{1/2} = 2(Tr ρ^{1/2} - 1)`.
    pub entropy: f64,
}

impl TsallisCheck {
    pub fn agree(&self, tol: f64) -> bool {
        (self.direct - self.from_entropy).abs() <= tol
    }
}

pub fn tsallis_consistency(rho: &DensityMatrix) -> Result<TsallisCheck> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let c = l1_coherence(rho, true);
    let dd = distinguishability(rho)?;
    // Eigenvalues at rounding level would contribute their square roots
    // (~1e-8), so they are treated as zero.
    let root_trace: f64 = rho
        .eigenvalues()
        .iter()
        .map(|&l| if l > EIGEN_FLOOR { l.sqrt() } else { 0.0 })
        .sum();
    let entropy = 2.0 * (root_trace - 1.0);
    let from_entropy = ((entropy + 2.0).powi(2) / 4.0 - 1.0) / (d - 1) as f64;
    Ok(TsallisCheck {
        direct: 1.0 - c * c - dd * dd,
        from_entropy,
        entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayed_choice::InterferometerConfig;
    use crate::metrics::{measurement_density, Family};
    use crate::qcore::StateVector;
    use crate::C64;
    use core::f64::consts::PI;

    #[test]
    fn pure_states_saturate() {
        let psi = StateVector::normalized_from(alloc::vec![
            C64::new(1.0, 0.0),
            C64::new(0.2, 0.5),
            C64::new(-0.7, 0.1)
        ])
        .unwrap();
        let r = DualityReport::from_density(&DensityMatrix::from_pure(&psi).unwrap()).unwrap();
        assert!(r.saturated);
        let t = tsallis_consistency(&DensityMatrix::from_pure(&psi).unwrap()).unwrap();
        assert!(t.entropy.abs() < 1e-9 && t.from_entropy.abs() < 1e-9);
    }

    #[test]
    fn classical_quarter_gap() {
        let cfg = InterferometerConfig::ramp(2, PI / 2.0, 0.0, PI).unwrap();
        let rho = measurement_density(&cfg, Family::Classical, 0).unwrap();
        let r = DualityReport::from_density(&rho).unwrap();
        assert!((r.c2_plus_d2() - 0.5).abs() < 1e-12);
        assert!((r.missing_information - 0.5).abs() < 1e-12);
        assert!(!r.saturated);
    }

    #[test]
    fn maximally_mixed_qubit_gap() {
        // Tr ρ^{1/2} = √2, so S = 2(√2 - 1) and ((S+2)²/4 - 1) = 1; C = D = 0.
        let t = tsallis_consistency(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert!((t.entropy - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((t.from_entropy - 1.0).abs() < 1e-12);
        assert!((t.direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_excess() {
        assert!(DualityReport::new(2, 0.9, 0.9, 0.9, DualitySource::FromFringe).is_err());
    }
}
