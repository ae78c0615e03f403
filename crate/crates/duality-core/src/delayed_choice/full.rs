//! Explicit joint-state simulation.
//!
//! The source lives on `control ⊗ branch` (4 dims). The linear map
//! `R(α,δ) ⊗ (E · [P | W])` sends it to `control ⊗ (upper ports, lower
//! ports)`, `4d` dims with the control slow. Werner noise enters as a
//! five-member pure-state ensemble.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use super::optics::Eraser;
use super::{ControlSetting, InterferometerConfig, PortDistribution, Readout};
use crate::bsgen::{phase_operator, PhaseArray};
use crate::qcore::{ComplexMatrix, DensityMatrix, StateVector, Tensor, C64, ZERO};
use crate::{Error, Result};

/// How the control photon and the eraser ports are read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Herald {
    /// Control on `|1⟩`, upper ports: the quantum-superposition readout.
    Control1,
    /// Control on `|0⟩`, upper ports.
    Control0,
    /// Control on `|1⟩`, upper and lower port of each index summed. Summing
    /// the eraser outputs discards the which-process register, leaving the
    /// classical mixture `cos²(α/2)|P⟩⟨P| + sin²(α/2)|W⟩⟨W|`.
    TraceOut,
}

impl Herald {
    pub fn readout(self) -> Readout {
        match self {
            Herald::Control1 | Herald::Control0 => Readout::UpperOnly,
            Herald::TraceOut => Readout::UpperAndLower,
        }
    }
}

fn control_rotation(ctrl: ControlSetting) -> ComplexMatrix {
    let (c, s) = ctrl.half_angles();
    let e = C64::from_polar(1.0, ctrl.delta);
    ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
        (0, 0) => C64::new(s, 0.0),
        (0, 1) => e * c,
        (1, 0) => C64::new(c, 0.0),
        _ => -e * s,
    })
}

/// `[P | W]` on the `2d` branch-path modes, built with operator products.
fn branch_map(cfg: &InterferometerConfig) -> Result<ComplexMatrix> {
    let d = cfg.d();
    let t: Vec<C64> = cfg.transmissions().into_iter().map(|x| C64::new(x, 0.0)).collect();
    let b1 = cfg.bs1().unitary().into_matrix();
    let theta = phase_operator(cfg.phases()).into_matrix();
    let arm = theta.matmul(&ComplexMatrix::diagonal(&t))?.matmul(&b1)?;
    let mut input = vec![ZERO; d];
    input[0] = C64::new(1.0, 0.0);
    let particle = arm.mul_vec(&input)?;
    let wave = cfg.bs2().unitary().matrix().mul_vec(&particle)?;
    Ok(ComplexMatrix::from_fn(2 * d, 2, |r, c| match (r < d, c) {
        (true, 0) => particle[r],
        (false, 1) => wave[r - d],
        _ => ZERO,
    }))
}

fn source_ensemble(p: f64) -> Result<Vec<(f64, StateVector)>> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut out = vec![(1.0 - p, StateVector::new(vec![h, ZERO, ZERO, h])?)];
    for k in 0..4 {
        out.push((p / 4.0, StateVector::basis(4, k)?));
    }
    Ok(out)
}

fn joint_map(cfg: &InterferometerConfig, eraser: &Eraser) -> Result<ComplexMatrix> {
    let target = eraser.matrix(cfg.d()).matmul(&branch_map(cfg)?)?;
    Ok(control_rotation(cfg.control()).tensor(&target))
}

/// Output ensemble on `control ⊗ (upper, lower)`; members are not normalized
/// when paths are blocked.
fn output_ensemble(cfg: &InterferometerConfig, eraser: &Eraser) -> Result<Vec<(f64, Vec<C64>)>> {
    let v = joint_map(cfg, eraser)?;
    source_ensemble(cfg.source_noise())?
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, psi)| Ok((w, v.mul_vec(psi.amplitudes())?)))
        .collect()
}

/// The normalized joint output state.
pub fn joint_output_density(cfg: &InterferometerConfig) -> Result<DensityMatrix> {
    let members = output_ensemble(cfg, &Eraser::standard())?
        .into_iter()
        .map(|(w, a)| Ok((w, StateVector::unnormalized(a)?)))
        .collect::<Result<Vec<_>>>()?;
    DensityMatrix::from_ensemble(&members)
}

/// Absolute probability of each heralded port event, including the herald
/// probability and any blocking loss.
pub fn port_weights(cfg: &InterferometerConfig, herald: Herald, eraser: &Eraser) -> Result<Vec<f64>> {
    let d = cfg.d();
    let mut diag = vec![0.0; 4 * d];
    for (w, amps) in output_ensemble(cfg, eraser)? {
        for (acc, a) in diag.iter_mut().zip(&amps) {
            *acc += w * a.norm_sqr();
        }
    }
    let (ctrl1, ctrl0) = (&diag[2 * d..], &diag[..2 * d]);
    Ok((0..d)
        .map(|m| match herald {
            Herald::Control1 => ctrl1[m],
            Herald::Control0 => ctrl0[m],
            Herald::TraceOut => ctrl1[m] + ctrl1[d + m],
        })
        .collect())
}

/// Heralded port distribution from the joint state, renormalized over the
/// `d` ports.
pub fn simulate_full(cfg: &InterferometerConfig, herald: Herald) -> Result<PortDistribution> {
    simulate_with_eraser(cfg, herald, &Eraser::standard())
}

/// [`simulate_full`] with a caller-supplied eraser coupler.
pub fn simulate_with_eraser(
    cfg: &InterferometerConfig,
    herald: Herald,
    eraser: &Eraser,
) -> Result<PortDistribution> {
    let weights = port_weights(cfg, herald, eraser)?;
    if weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::AllPathsBlocked);
    }
    PortDistribution::from_weights(herald.readout(), weights)
}

/// One detector port of the interferometer viewed as a fringe probe: the
/// phase array is the scan variable and paths can be opened one at a time.
#[derive(Debug, Clone)]
pub struct FringeSetup {
    cfg: InterferometerConfig,
    herald: Herald,
    port: usize,
}

impl FringeSetup {
    pub fn new(cfg: InterferometerConfig, herald: Herald, port: usize) -> Result<Self> {
        if port >= cfg.d() {
            return Err(Error::DimensionMismatch {
                expected: cfg.d(),
                found: port,
            });
        }
        Ok(Self { cfg, herald, port })
    }

    pub fn config(&self) -> &InterferometerConfig {
        &self.cfg
    }

    pub fn herald(&self) -> Herald {
        self.herald
    }

    pub fn port(&self) -> usize {
        self.port
    }

    /// Absolute port probability with every path open at `phases`.
    pub fn port_probability(&self, phases: &PhaseArray) -> Result<f64> {
        let cfg = self.cfg.clone().with_phases(phases.clone())?;
        Ok(port_weights(&cfg, self.herald, &Eraser::standard())?[self.port])
    }

    /// Absolute port probability with only `path` open.
    pub fn single_path_probability(&self, path: usize) -> Result<f64> {
        let cfg = self.cfg.single_path(path)?;
        Ok(port_weights(&cfg, self.herald, &Eraser::standard())?[self.port])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayed_choice::{classical_distribution, quantum_distribution};
    use crate::qcore::{DensityMatrix, Subsystem, StateVector};
    use core::f64::consts::PI;

    #[test]
    fn matches_closed_forms_ideal_source() {
        for d in [2, 4, 8] {
            for &alpha in &[0.0, 0.9, PI, 1.5 * PI] {
                for &delta in &[0.0, PI / 2.0, -PI / 2.0] {
                    for i in 0..9 {
                        let theta = 2.0 * PI * i as f64 / 8.0;
                        let cfg = InterferometerConfig::ramp(d, alpha, delta, theta).unwrap();
                        let q = simulate_full(&cfg, Herald::Control1).unwrap();
                        let c = simulate_full(&cfg, Herald::TraceOut).unwrap();
                        assert!(q.max_abs_diff(&quantum_distribution(&cfg).unwrap()).unwrap() < 1e-10);
                        assert!(c.max_abs_diff(&classical_distribution(&cfg).unwrap()).unwrap() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn matches_closed_forms_noisy_and_blocked() {
        let cfg = InterferometerConfig::ramp(4, 1.3, 0.6, 2.1)
            .unwrap()
            .with_source_noise(0.35)
            .unwrap()
            .with_blocking(vec![false, true, false, true], 0.01)
            .unwrap();
        let q = simulate_full(&cfg, Herald::Control1).unwrap();
        let c = simulate_full(&cfg, Herald::TraceOut).unwrap();
        assert!(q.max_abs_diff(&quantum_distribution(&cfg).unwrap()).unwrap() < 1e-10);
        assert!(c.max_abs_diff(&classical_distribution(&cfg).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn mixed_source_is_sum_of_heralds() {
        let ideal = InterferometerConfig::ramp(4, 1.5 * PI, PI / 2.0, 2.5).unwrap();
        let w1 = port_weights(&ideal, Herald::Control1, &Eraser::standard()).unwrap();
        let w0 = port_weights(&ideal, Herald::Control0, &Eraser::standard()).unwrap();
        let expect =
            PortDistribution::from_weights(Readout::UpperOnly, w1.iter().zip(&w0).map(|(a, b)| a + b).collect())
                .unwrap();
        let mixed = ideal.with_source_noise(1.0).unwrap();
        let got = simulate_full(&mixed, Herald::Control1).unwrap();
        assert!(got.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn control1_heralded_state_matches_eraser_state() {
        let cfg = InterferometerConfig::ramp(4, 1.5 * PI, PI / 2.0, 0.8).unwrap();
        let rho = joint_output_density(&cfg).unwrap();
        let st = crate::delayed_choice::eraser_state(&cfg).unwrap();
        let d2 = 2 * cfg.d();
        // Project the control onto |1⟩ and renormalize.
        let block = ComplexMatrix::from_fn(d2, d2, |r, c| rho.entry(d2 + r, d2 + c));
        let tr = block.trace().re;
        let expect = ComplexMatrix::outer(st.amplitudes(), st.amplitudes());
        let scaled = block.scale(C64::new(1.0 / tr, 0.0));
        assert!(scaled.distance(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn tagged_branches_trace_to_classical_mixture() {
        let cfg = InterferometerConfig::ramp(4, PI / 2.0, 0.0, 1.7).unwrap();
        let (p, w) = crate::delayed_choice::wave_particle_states(&cfg).unwrap();
        let (c, s) = cfg.control().half_angles();
        let zero = StateVector::basis(2, 0).unwrap().tensor(&p);
        let one = StateVector::basis(2, 1).unwrap().tensor(&w);
        let joint = zero.superpose(C64::new(c, 0.0), &one, C64::new(s, 0.0)).unwrap();
        let rho = DensityMatrix::from_pure(&joint).unwrap();
        let reduced = rho.partial_trace((2, 4), Subsystem::Second).unwrap();
        let pp = DensityMatrix::from_pure(&p).unwrap();
        let ww = DensityMatrix::from_pure(&w).unwrap();
        let mix = DensityMatrix::mixture(&[(c * c, &pp), (s * s, &ww)]).unwrap();
        assert!((c * c - 0.5).abs() < 1e-15);
        assert!(reduced.matrix().distance(mix.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn mutated_eraser_breaks_equivalence() {
        let cfg = InterferometerConfig::ramp(4, 1.5 * PI, PI / 2.0, 2.0).unwrap();
        let mut bad = Eraser::standard();
        bad.upper[1] = -bad.upper[1];
        let q = simulate_with_eraser(&cfg, Herald::Control1, &bad).unwrap();
        assert!(q.max_abs_diff(&quantum_distribution(&cfg).unwrap()).unwrap() > 1e-3);
    }

    #[test]
    fn probe_reads_single_paths() {
        let cfg = InterferometerConfig::ramp(2, 1.5 * PI, 0.0, PI).unwrap();
        let probe = FringeSetup::new(cfg, Herald::Control1, 0).unwrap();
        let q: Vec<f64> = (0..2).map(|i| probe.single_path_probability(i).unwrap()).collect();
        let total: f64 = q.iter().sum();
        assert!((q[0] / total - 0.75).abs() < 1e-12);
        assert!((q[1] / total - 0.25).abs() < 1e-12);
    }
}
