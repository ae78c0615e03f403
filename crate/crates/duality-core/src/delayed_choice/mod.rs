//! The quantum-controlled `d`-path interferometer.
//!
//! A Bell pair `(|0_C 0_T⟩ + |1_C 1_T⟩)/√2` is emitted. The target qubit
//! selects the particle branch (no second beamsplitter) or the wave branch
//! (second beamsplitter present). The control photon is rotated by
//! `R(α, δ) = [[sin(α/2), e^{iδ}cos(α/2)], [cos(α/2), -e^{iδ}sin(α/2)]]` and
//! then measured. A layer of `d` two-mode beamsplitters between the branch
//! copies of each output mode acts as eraser: upper port `m` receives
//! `(a_P + i·a_W)/√2`, lower port receives `(i·a_P + a_W)/√2`.
//!
//! With the control projected on `|1⟩`:
//! * upper ports give the quantum-superposition fringe,
//! * upper plus lower ports give the classical-mixture fringe.
//!
//! [`closed_form`] evaluates the resulting distributions directly from the
//! particle and wave amplitudes; [`full`] builds the joint control-target
//! state and reads the same numbers off it.

pub mod closed_form;
mod config;
pub mod full;
mod optics;
pub mod sampling;

pub use closed_form::{
    classical_distribution, classical_port0_ramp, quantum_distribution, quantum_port0_ramp,
};
pub use config::{ControlSetting, InterferometerConfig};
pub use full::{simulate_full, simulate_with_eraser, FringeSetup, Herald};
pub use optics::{eraser_state, wave_particle_states, Eraser};
pub use sampling::{sample_counts, sample_counts_with_dark, CountsRecord};

use alloc::format;
use alloc::vec::Vec;

use crate::qcore::VALIDATION_TOL;
use crate::{Error, Result};

/// Which detector ports a distribution covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Readout {
    /// The `d` upper eraser ports.
    UpperOnly,
    /// Upper and lower eraser port of each index summed.
    UpperAndLower,
}

/// Normalized outcome probabilities over `d` ports.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PortDistribution {
    readout: Readout,
    probabilities: Vec<f64>,
}

impl PortDistribution {
    pub fn new(readout: Readout, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entries must be finite and nonnegative: {probabilities:?}"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Ok(Self {
            readout,
            probabilities,
        })
    }

    /// Rescales nonnegative weights to unit sum.
    pub fn from_weights(readout: Readout, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidDistribution(format!("total weight {sum}")));
        }
        Self::new(readout, weights.into_iter().map(|w| w / sum).collect())
    }

    /// A uniform distribution, used as a reference.
    pub fn uniform(readout: Readout, d: usize) -> Result<Self> {
        Self::from_weights(readout, alloc::vec![1.0; d])
    }

    pub fn d(&self) -> usize {
        self.probabilities.len()
    }

    pub fn readout(&self) -> Readout {
        self.readout
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Largest absolute per-port difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            });
        }
        Ok(self
            .probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
