use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::bsgen::{linear_ramp, wrap_phase, BeamsplitterSpec, PhaseArray};
use crate::{Error, Result};

/// Largest blocking leakage intensity the model is meant for.
pub const MAX_LEAKAGE: f64 = 0.05;

/// The `{α, δ}` rotation applied to the control photon.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControlSetting {
    pub alpha: f64,
    pub delta: f64,
}

impl ControlSetting {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        if !alpha.is_finite() || !delta.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { alpha, delta })
    }

    /// `α` in `[0, 2π)`, `δ` in `(-π, π]`.
    pub fn canonical(&self) -> Self {
        Self {
            alpha: {
                let r = self.alpha % TAU;
                let r = if r < 0.0 { r + TAU } else { r };
                if r >= TAU { 0.0 } else { r }
            },
            delta: wrap_phase(self.delta),
        }
    }

    /// `(cos(α/2), sin(α/2))`.
    pub fn half_angles(&self) -> (f64, f64) {
        let (s, c) = (self.alpha / 2.0).sin_cos();
        (c, s)
    }
}

/// A complete description of one interferometer setting.
///
/// `source_noise` is the white-noise weight `p` of the Werner source
/// `(1-p)|Φ⁺⟩⟨Φ⁺| + p·I/4`; 0 is ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerConfig {
    d: usize,
    bs1: BeamsplitterSpec,
    bs2: BeamsplitterSpec,
    phases: PhaseArray,
    control: ControlSetting,
    source_noise: f64,
    blocking: Vec<bool>,
    blocking_leakage: f64,
}

impl InterferometerConfig {
    /// Balanced beamsplitters, zero phases, `α = δ = 0`, ideal source, all
    /// paths open.
    pub fn ideal(d: usize) -> Result<Self> {
        let bs = BeamsplitterSpec::balanced(d)?;
        Ok(Self {
            d,
            bs1: bs.clone(),
            bs2: bs,
            phases: PhaseArray::zeros(d)?,
            control: ControlSetting {
                alpha: 0.0,
                delta: 0.0,
            },
            source_noise: 0.0,
            blocking: vec![false; d],
            blocking_leakage: 0.0,
        })
    }

    /// Balanced beamsplitters with the phase ramp `θ_k = k(θ - π)`.
    pub fn ramp(d: usize, alpha: f64, delta: f64, theta: f64) -> Result<Self> {
        Self::ideal(d)?
            .with_control(ControlSetting::new(alpha, delta)?)
            .with_phases(linear_ramp(d, theta)?)
    }

    pub fn with_beamsplitters(mut self, bs1: BeamsplitterSpec, bs2: BeamsplitterSpec) -> Result<Self> {
        for bs in [&bs1, &bs2] {
            if bs.dim() != self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: bs.dim(),
                });
            }
        }
        self.bs1 = bs1;
        self.bs2 = bs2;
        Ok(self)
    }

    pub fn with_phases(mut self, phases: PhaseArray) -> Result<Self> {
        if phases.d() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: phases.d(),
            });
        }
        self.phases = phases;
        Ok(self)
    }

    pub fn with_control(mut self, control: ControlSetting) -> Self {
        self.control = control;
        self
    }

    pub fn with_source_noise(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("source noise {p} outside [0,1]")));
        }
        self.source_noise = p;
        Ok(self)
    }

    /// `mask[k]` blocks path `k`; blocked paths keep intensity `leakage`.
    pub fn with_blocking(mut self, mask: Vec<bool>, leakage: f64) -> Result<Self> {
        if mask.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: mask.len(),
            });
        }
        if !(0.0..=MAX_LEAKAGE).contains(&leakage) {
            return Err(Error::InvalidParameter(format!(
                "blocking leakage {leakage} outside [0, {MAX_LEAKAGE}]"
            )));
        }
        if mask.iter().all(|&b| b) {
            return Err(Error::AllPathsBlocked);
        }
        self.blocking = mask;
        self.blocking_leakage = leakage;
        Ok(self)
    }

    /// Same setting with only `path` open and exact blocking elsewhere.
    pub fn single_path(&self, path: usize) -> Result<Self> {
        if path >= self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: path,
            });
        }
        let mask = (0..self.d).map(|k| k != path).collect();
        self.clone().with_blocking(mask, 0.0)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bs1(&self) -> &BeamsplitterSpec {
        &self.bs1
    }

    pub fn bs2(&self) -> &BeamsplitterSpec {
        &self.bs2
    }

    pub fn phases(&self) -> &PhaseArray {
        &self.phases
    }

    pub fn control(&self) -> ControlSetting {
        self.control
    }

    pub fn source_noise(&self) -> f64 {
        self.source_noise
    }

    pub fn blocking(&self) -> &[bool] {
        &self.blocking
    }

    pub fn blocking_leakage(&self) -> f64 {
        self.blocking_leakage
    }

    pub fn is_blocking_active(&self) -> bool {
        self.blocking.iter().any(|&b| b)
    }

    /// Amplitude transmission of each path: `√ε` if blocked, else 1.
    pub fn transmissions(&self) -> Vec<f64> {
        let leak = self.blocking_leakage.sqrt();
        self.blocking.iter().map(|&b| if b { leak } else { 1.0 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn validation() {
        let cfg = InterferometerConfig::ideal(4).unwrap();
        assert!(cfg.clone().with_source_noise(1.2).is_err());
        assert!(cfg.clone().with_blocking(vec![true; 4], 0.0).is_err());
        assert!(cfg.clone().with_blocking(vec![true, false, false, false], 0.06).is_err());
        assert!(cfg.clone().with_phases(PhaseArray::zeros(3).unwrap()).is_err());
        let b = cfg.with_blocking(vec![true, false, false, false], 0.04).unwrap();
        assert!((b.transmissions()[0] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn control_canonical_range() {
        let c = ControlSetting::new(-PI / 2.0, 3.0 * PI / 2.0).unwrap().canonical();
        assert!((c.alpha - 1.5 * PI).abs() < 1e-12);
        assert!((c.delta + PI / 2.0).abs() < 1e-12);
    }
}
