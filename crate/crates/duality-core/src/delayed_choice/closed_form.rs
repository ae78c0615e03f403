//! Distributions evaluated directly from the particle and wave amplitudes.
//!
//! Quantum readout, upper port `m`:
//! `I_m ∝ (1-p)|c·P_m - i e^{iδ} s·W_m|² + (p/2)(|P_m|² + |W_m|²)`.
//! Classical readout, port `m` summed:
//! `I_m ∝ (1-p)(c²|P_m|² + s²|W_m|²) + (p/2)(|P_m|² + |W_m|²)`.
//! Here `c = cos(α/2)`, `s = sin(α/2)`, `p` the source noise weight.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::optics::branch_amplitudes;
use super::{InterferometerConfig, PortDistribution, Readout};
use crate::qcore::{C64, I};
use crate::{Error, Result};

/// Below this `|sin(θ - π)|` the ramp closed forms switch to the matrix form.
pub const RAMP_SINGULARITY: f64 = 1e-6;

pub fn quantum_distribution(cfg: &InterferometerConfig) -> Result<PortDistribution> {
    let b = branch_amplitudes(cfg);
    let (c, s) = cfg.control().half_angles();
    let p = cfg.source_noise();
    let steer = -I * C64::from_polar(s, cfg.control().delta);
    let weights = b
        .particle
        .iter()
        .zip(&b.wave)
        .map(|(pm, wm)| {
            (1.0 - p) * (pm * c + steer * wm).norm_sqr()
                + 0.5 * p * (pm.norm_sqr() + wm.norm_sqr())
        })
        .collect();
    PortDistribution::from_weights(Readout::UpperOnly, weights)
}

pub fn classical_distribution(cfg: &InterferometerConfig) -> Result<PortDistribution> {
    let b = branch_amplitudes(cfg);
    let (c, s) = cfg.control().half_angles();
    let p = cfg.source_noise();
    let weights: Vec<f64> = b
        .particle
        .iter()
        .zip(&b.wave)
        .map(|(pm, wm)| {
            let (pp, ww) = (pm.norm_sqr(), wm.norm_sqr());
            (1.0 - p) * (c * c * pp + s * s * ww) + 0.5 * p * (pp + ww)
        })
        .collect();
    PortDistribution::from_weights(Readout::UpperAndLower, weights)
}

/// `(1/d)Σ_k e^{ikφ}` with `φ = θ - π`, by its geometric-series closed form.
fn ramp_focus(d: usize, phi: f64) -> C64 {
    let df = d as f64;
    let ratio = (df * phi / 2.0).sin() / (df * (phi / 2.0).sin());
    C64::from_polar(ratio, (df - 1.0) * phi / 2.0)
}

fn ramp_is_singular(theta: f64) -> bool {
    (theta - PI).sin().abs() < RAMP_SINGULARITY
}

/// Quantum port-0 intensity for Hadamard beamsplitters with `θ_k = k(θ-π)`
/// and an ideal source:
/// `I_0 = |cos(α/2)/√d - i e^{iδ} sin(α/2) F(θ)|² / N`, where `F` is the
/// focused wave amplitude and
/// `N = 1 + sinα sinδ sin(d(θ-π)) / (d^{3/2} sin(θ-π))`.
pub fn quantum_port0_ramp(d: usize, alpha: f64, delta: f64, theta: f64) -> Result<f64> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(d));
    }
    if ramp_is_singular(theta) {
        let cfg = InterferometerConfig::ramp(d, alpha, delta, theta)?;
        return Ok(quantum_distribution(&cfg)?.probabilities()[0]);
    }
    let df = d as f64;
    let phi = theta - PI;
    let (s, c) = (alpha / 2.0).sin_cos();
    let amp = C64::new(c / df.sqrt(), 0.0) - I * C64::from_polar(s, delta) * ramp_focus(d, phi);
    let norm = 1.0 + alpha.sin() * delta.sin() * (df * phi).sin() / (df.powf(1.5) * phi.sin());
    Ok(amp.norm_sqr() / norm)
}

/// Classical port-0 intensity for any balanced beamsplitter with a uniform
/// first row, ramp phases and an ideal source:
/// `I_0 = cos²(α/2)/d + sin²(α/2)|F(θ)|²`.
pub fn classical_port0_ramp(d: usize, alpha: f64, theta: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let (s, c) = (alpha / 2.0).sin_cos();
    let focus = if ((theta - PI) / 2.0).sin().abs() < RAMP_SINGULARITY {
        1.0
    } else {
        ramp_focus(d, theta - PI).norm_sqr()
    };
    Ok(c * c / d as f64 + s * s * focus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayed_choice::ControlSetting;

    #[test]
    fn particle_case_is_uniform() {
        for d in [2, 3, 4, 8] {
            for theta in [0.0, 0.7, PI, 4.0] {
                let cfg = InterferometerConfig::ramp(d, 0.0, 0.3, theta).unwrap();
                let q = quantum_distribution(&cfg).unwrap();
                assert!(q.probabilities().iter().all(|p| (p - 1.0 / d as f64).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn d2_wave_at_quarter_turn() {
        // sin²(dφ/2) / (d sin(φ/2))² at φ = -π/2, d = 2: 1 / (4 · 1/2).
        let cfg = InterferometerConfig::ramp(2, PI, 0.0, PI / 2.0).unwrap();
        assert!((quantum_distribution(&cfg).unwrap().probabilities()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prime_maximum() {
        for d in [2, 3, 4, 8, 16] {
            let cfg = InterferometerConfig::ramp(d, PI, 1.0, PI).unwrap();
            assert!((quantum_distribution(&cfg).unwrap().probabilities()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_by_hand() {
        let cfg = InterferometerConfig::ramp(2, PI / 2.0, 0.0, PI).unwrap();
        assert!((classical_distribution(&cfg).unwrap().probabilities()[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn ramp_forms_match_matrix_form() {
        for d in [2, 4, 8] {
            for &alpha in &[0.4, 1.5 * PI, 2.9] {
                for &delta in &[0.0, PI / 2.0, -2.0] {
                    for i in 0..=32 {
                        let theta = 2.0 * PI * i as f64 / 32.0;
                        let cfg = InterferometerConfig::ramp(d, alpha, delta, theta).unwrap();
                        let q = quantum_distribution(&cfg).unwrap().probabilities()[0];
                        let c = classical_distribution(&cfg).unwrap().probabilities()[0];
                        assert!((quantum_port0_ramp(d, alpha, delta, theta).unwrap() - q).abs() < 1e-10);
                        assert!((classical_port0_ramp(d, alpha, theta).unwrap() - c).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_point_is_continuous() {
        let at = quantum_port0_ramp(4, 1.0, 0.5, PI).unwrap();
        let near = quantum_port0_ramp(4, 1.0, 0.5, PI + 2e-6).unwrap();
        assert!((at - near).abs() < 1e-5);
    }

    #[test]
    fn classical_ignores_delta() {
        let base = InterferometerConfig::ramp(4, 1.2, 0.0, 2.2).unwrap();
        let reference = classical_distribution(&base).unwrap();
        for k in 0..16 {
            let delta = -PI + 2.0 * PI * k as f64 / 16.0;
            let cfg = base.clone().with_control(ControlSetting::new(1.2, delta).unwrap());
            let dist = classical_distribution(&cfg).unwrap();
            assert!(dist.max_abs_diff(&reference).unwrap() < 1e-12);
        }
    }
}
