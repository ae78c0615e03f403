//! Generalized visibility from a phase-scanned fringe.
//!
//! Intensities are normalized by `d·Σ_i q_i`, where `q_i` is the port
//! probability with only path `i` open, so that `I_inc = (1/d)Σρ_ii = 1/d`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::operational_diagonal;
use crate::bsgen::PhaseArray;
use crate::delayed_choice::{ControlSetting, FringeSetup};
use crate::{Error, Result};

/// Grid resolution of [`Compensation::NumericScan`].
pub const SCAN_STEP: f64 = 1e-4;

/// A detector port whose probability can be read at any phase setting and
/// with single paths open.
pub trait FringeProbe {
    fn dim(&self) -> usize;
    /// Absolute port probability with all paths open.
    fn port_probability(&self, phases: &PhaseArray) -> Result<f64>;
    /// Absolute port probability with only `path` open.
    fn single_path_probability(&self, path: usize) -> Result<f64>;
}

impl FringeProbe for FringeSetup {
    fn dim(&self) -> usize {
        self.config().d()
    }

    fn port_probability(&self, phases: &PhaseArray) -> Result<f64> {
        FringeSetup::port_probability(self, phases)
    }

    fn single_path_probability(&self, path: usize) -> Result<f64> {
        FringeSetup::single_path_probability(self, path)
    }
}

/// How the prime maximum is located.
#[derive(Debug, Clone, PartialEq)]
pub enum Compensation {
    /// Evaluate at a known phase setting.
    Analytic(PhaseArray),
    /// Scan `θ_0` over `(-π, π]` at [`SCAN_STEP`] with the other phases at
    /// zero, then refine the best grid point by golden-section search.
    NumericScan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    /// Scanned values of `θ_0`.
    pub thetas: Vec<f64>,
    pub intensities: Vec<f64>,
    /// Phase setting at the maximum.
    pub argmax: PhaseArray,
    pub i_max: f64,
    pub i_inc: f64,
}

impl FringeScan {
    pub fn new(
        thetas: Vec<f64>,
        intensities: Vec<f64>,
        argmax: PhaseArray,
        i_max: f64,
        i_inc: f64,
    ) -> Result<Self> {
        if thetas.len() != intensities.len() {
            return Err(Error::DimensionMismatch {
                expected: thetas.len(),
                found: intensities.len(),
            });
        }
        if !(i_inc >= 0.0) || i_max < i_inc - 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "fringe needs I_max ≥ I_inc ≥ 0, got I_max = {i_max}, I_inc = {i_inc}"
            )));
        }
        Ok(Self {
            thetas,
            intensities,
            argmax,
            i_max,
            i_inc,
        })
    }
}

/// Phase setting that aligns all path contributions at port 0 of a balanced
/// beamsplitter with a positive first row:
/// `θ_0 = -atan2(cos(α/2)cosδ, sin(α/2)/√d + cos(α/2)sinδ)`, others zero.
pub fn analytic_compensation(d: usize, control: ControlSetting) -> Result<PhaseArray> {
    let ctrl = control.canonical();
    let (c, s) = ctrl.half_angles();
    let (sd, cd) = ctrl.delta.sin_cos();
    let mut phases = vec![0.0; d];
    phases[0] = -(c * cd).atan2(s / (d as f64).sqrt() + c * sd);
    PhaseArray::new(phases)
}

fn with_theta0(d: usize, theta0: f64) -> Result<PhaseArray> {
    let mut phases = vec![0.0; d];
    phases[0] = theta0;
    PhaseArray::new(phases)
}

pub fn find_prime_maximum<P: FringeProbe + ?Sized>(
    probe: &P,
    compensation: Compensation,
) -> Result<FringeScan> {
    let d = probe.dim();
    let diag = operational_diagonal(probe)?;
    let q_total: f64 = (0..d)
        .map(|i| probe.single_path_probability(i))
        .sum::<Result<f64>>()?;
    let scale = 1.0 / (d as f64 * q_total);
    let i_inc = diag.iter().sum::<f64>() / d as f64;
    match compensation {
        Compensation::Analytic(phases) => {
            let i = probe.port_probability(&phases)? * scale;
            FringeScan::new(vec![phases.phases()[0]], vec![i], phases, i, i_inc)
        }
        Compensation::NumericScan => {
            let n = (TAU / SCAN_STEP).ceil() as usize;
            let step = TAU / n as f64;
            let mut thetas = Vec::with_capacity(n);
            let mut intensities = Vec::with_capacity(n);
            for k in 1..=n {
                let t = -PI + k as f64 * step;
                thetas.push(t);
                intensities.push(probe.port_probability(&with_theta0(d, t)?)? * scale);
            }
            let best = (0..n)
                .max_by(|&a, &b| intensities[a].total_cmp(&intensities[b]))
                .expect("non-empty grid");
            let eval = |t: f64| Ok::<f64, Error>(probe.port_probability(&with_theta0(d, t)?)? * scale);
            let (t_ref, i_ref) = golden_max(eval, thetas[best] - step, thetas[best] + step)?;
            let (t_star, i_max) = if i_ref >= intensities[best] {
                (t_ref, i_ref)
            } else {
                (thetas[best], intensities[best])
            };
            FringeScan::new(thetas, intensities, with_theta0(d, t_star)?, i_max, i_inc)
        }
    }
}

/// Golden-section maximization on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

/// `V_d = (I_max - I_inc) / ((d-1)·I_inc)`.
pub fn visibility_from_fringe(scan: &FringeScan, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(scan.i_inc > 0.0) {
        return Err(Error::VanishingDenominator(scan.i_inc));
    }
    Ok((scan.i_max - scan.i_inc) / ((d - 1) as f64 * scan.i_inc))
}
