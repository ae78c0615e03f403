use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use super::InterferometerConfig;
use crate::qcore::{ComplexMatrix, StateVector, C64, I, ZERO};
use crate::{Error, Result};

/// Per-port two-mode coupler between the particle-branch and wave-branch
/// copies of an output mode. Rows are `(upper, lower)`, columns
/// `(particle, wave)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eraser {
    pub upper: [C64; 2],
    pub lower: [C64; 2],
}

impl Eraser {
    /// `(1, i; i, 1)/√2`.
    pub fn standard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            upper: [h, I * h],
            lower: [I * h, h],
        }
    }

    /// The `2d × 2d` operator on `(particle modes, wave modes)` giving
    /// `(upper ports, lower ports)`.
    pub fn matrix(&self, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(2 * d, 2 * d, |r, c| {
            let (row, mode_r) = (r / d, r % d);
            let (col, mode_c) = (c / d, c % d);
            if mode_r != mode_c {
                return ZERO;
            }
            if row == 0 {
                self.upper[col]
            } else {
                self.lower[col]
            }
        })
    }
}

impl Default for Eraser {
    fn default() -> Self {
        Self::standard()
    }
}

/// Unnormalized particle and wave amplitudes at the output modes, including
/// any blocking transmissions.
pub(crate) struct BranchAmplitudes {
    pub particle: Vec<C64>,
    pub wave: Vec<C64>,
}

/// `P_m = t_m e^{iθ_m} (B1)_{m0}`, `W_m = Σ_k (B2)_{mk} P_k`, by explicit
/// sums.
pub(crate) fn branch_amplitudes(cfg: &InterferometerConfig) -> BranchAmplitudes {
    let d = cfg.d();
    let b1 = cfg.bs1().unitary();
    let b2 = cfg.bs2().unitary();
    let t = cfg.transmissions();
    let particle: Vec<C64> = (0..d)
        .map(|m| b1.matrix()[(m, 0)] * C64::from_polar(t[m], cfg.phases().phases()[m]))
        .collect();
    let wave = (0..d)
        .map(|m| (0..d).map(|k| b2.matrix()[(m, k)] * particle[k]).sum())
        .collect();
    BranchAmplitudes { particle, wave }
}

/// The particle-process and wave-process target states.
pub fn wave_particle_states(cfg: &InterferometerConfig) -> Result<(StateVector, StateVector)> {
    if cfg.is_blocking_active() {
        return Err(Error::BlockingActive);
    }
    let b = branch_amplitudes(cfg);
    Ok((StateVector::new(b.particle)?, StateVector::new(b.wave)?))
}

/// Target state after the eraser with the control heralded on `|1⟩`: upper
/// modes `0..d`, lower modes `d..2d`, unit norm.
pub fn eraser_state(cfg: &InterferometerConfig) -> Result<StateVector> {
    let d = cfg.d();
    let b = branch_amplitudes(cfg);
    let (c, s) = cfg.control().half_angles();
    let phase = C64::from_polar(1.0, cfg.control().delta);
    let mut branch = Vec::with_capacity(2 * d);
    branch.extend(b.particle.iter().map(|p| p * c));
    branch.extend(b.wave.iter().map(|w| -phase * s * w));
    let out = Eraser::standard().matrix(d).mul_vec(&branch)?;
    StateVector::normalized_from(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsgen::PhaseArray;
    use crate::delayed_choice::ControlSetting;
    use crate::qcore::ONE;
    use core::f64::consts::PI;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn d2_states_by_hand() {
        let cfg = InterferometerConfig::ideal(2).unwrap();
        let (p, w) = wave_particle_states(&cfg).unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(p.amplitudes()[0], h) && close(p.amplitudes()[1], h));
        assert!(close(w.amplitudes()[0], ONE) && close(w.amplitudes()[1], ZERO));
    }

    #[test]
    fn zero_phases_focus_wave_on_port_zero() {
        for d in [3, 4, 5, 8] {
            let (_, w) = wave_particle_states(&InterferometerConfig::ideal(d).unwrap()).unwrap();
            assert!(close(w.amplitudes()[0], ONE));
        }
    }

    #[test]
    fn blocking_makes_states_undefined() {
        let cfg = InterferometerConfig::ideal(4)
            .unwrap()
            .with_blocking(alloc::vec![false, true, false, false], 0.0)
            .unwrap();
        assert_eq!(wave_particle_states(&cfg), Err(Error::BlockingActive));
    }

    #[test]
    fn eraser_blocks_match_expressions() {
        let phases = PhaseArray::new(alloc::vec![0.3, -1.1, 2.0, 0.7]).unwrap();
        for (alpha, delta) in [(0.0, 0.4), (PI, 0.4), (1.5 * PI, PI / 2.0)] {
            let cfg = InterferometerConfig::ideal(4)
                .unwrap()
                .with_phases(phases.clone())
                .unwrap()
                .with_control(ControlSetting::new(alpha, delta).unwrap());
            let (p, w) = wave_particle_states(&cfg).unwrap();
            let (c, s) = cfg.control().half_angles();
            let e = C64::from_polar(1.0, delta);
            let up: Vec<C64> = (0..4)
                .map(|m| p.amplitudes()[m] * c - I * e * s * w.amplitudes()[m])
                .collect();
            let low: Vec<C64> = (0..4)
                .map(|m| I * c * p.amplitudes()[m] - e * s * w.amplitudes()[m])
                .collect();
            let norm: f64 = up.iter().chain(&low).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let st = eraser_state(&cfg).unwrap();
            assert!((st.norm() - 1.0).abs() < 1e-12);
            for m in 0..4 {
                assert!(close(st.amplitudes()[m], up[m] / norm));
                assert!(close(st.amplitudes()[4 + m], low[m] / norm));
            }
        }
    }

    #[test]
    fn particle_limit_splits_evenly() {
        let cfg = InterferometerConfig::ramp(4, 0.0, 0.0, 1.0).unwrap();
        let (p, _) = wave_particle_states(&cfg).unwrap();
        let st = eraser_state(&cfg).unwrap();
        for m in 0..4 {
            assert!(close(st.amplitudes()[m], p.amplitudes()[m] * FRAC_1_SQRT_2));
            assert!(close(st.amplitudes()[4 + m], I * p.amplitudes()[m] * FRAC_1_SQRT_2));
        }
    }
}
