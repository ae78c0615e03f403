//! Higher-order interference in a four-path interferometer.
//!
//! Paths are blocked by switching the first beamsplitter's output paths
//! away ([`crate::mesh::block_paths`]); a blocked path keeps a coherent
//! residual amplitude `√ε`. The detected quantity is the wave-process
//! intensity at port 0, which is the heralded quantum readout at `α = π`.
//!
//! `I_II(ij) = P_ij - P_i - P_j`,
//! `I_IV = P_1234 - Σ P_ij + 2 Σ P_i`,
//! `κ = I_IV / Σ I_II`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bsgen::{hadamard, phase_operator, PhaseArray};
use crate::delayed_choice::sampling::poisson;
use crate::mesh::{block_paths, compile, evaluate};
use crate::{Error, Result};

/// Number of paths in the test.
pub const PATHS: usize = 4;

/// A set of open paths, bit `k` for path `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Opening(u8);

impl Opening {
    pub fn new(paths: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &p in paths {
            if p >= PATHS {
                return Err(Error::DimensionMismatch {
                    expected: PATHS,
                    found: p,
                });
            }
            bits |= 1 << p;
        }
        if bits == 0 {
            return Err(Error::AllPathsBlocked);
        }
        Ok(Self(bits))
    }

    pub fn full() -> Self {
        Self((1 << PATHS) - 1)
    }

    pub fn contains(self, path: usize) -> bool {
        self.0 & (1 << path) != 0
    }

    /// Blocking mask: `true` for closed paths.
    pub fn blocking_mask(self) -> Vec<bool> {
        (0..PATHS).map(|k| !self.contains(k)).collect()
    }

    /// One-based path labels, e.g. `"13"`.
    pub fn label(self) -> String {
        (0..PATHS)
            .filter(|&k| self.contains(k))
            .map(|k| char::from(b'1' + k as u8))
            .collect()
    }
}

impl fmt::Display for Opening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Singletons, pairs and the full set, in that order.
pub fn standard_openings() -> Vec<Opening> {
    let mut out: Vec<Opening> = (0..PATHS).map(|i| Opening(1 << i)).collect();
    for i in 0..PATHS {
        for j in i + 1..PATHS {
            out.push(Opening((1 << i) | (1 << j)));
        }
    }
    out.push(Opening::full());
    out
}

/// Probabilities (or counts) per opening.
pub type OpeningValues = BTreeMap<Opening, f64>;

fn lookup(values: &OpeningValues, o: Opening) -> Result<f64> {
    values
        .get(&o)
        .copied()
        .ok_or_else(|| Error::MissingOpening(o.label()))
}

fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..PATHS).flat_map(|i| (i + 1..PATHS).map(move |j| (i, j)))
}

pub fn second_order_term(p_ij: f64, p_i: f64, p_j: f64) -> f64 {
    p_ij - p_i - p_j
}

/// `P_1234 - Σ P_ij + 2 Σ P_i`.
pub fn fourth_order_term(values: &OpeningValues) -> Result<f64> {
    let full = lookup(values, Opening::full())?;
    let mut pair_sum = 0.0;
    for (i, j) in pairs() {
        pair_sum += lookup(values, Opening((1 << i) | (1 << j)))?;
    }
    let mut single_sum = 0.0;
    for i in 0..PATHS {
        single_sum += lookup(values, Opening(1 << i))?;
    }
    Ok(full - pair_sum + 2.0 * single_sum)
}

/// Interference terms of one acquisition.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SorkinTerms {
    /// `I_II` for pairs 12, 13, 14, 23, 24, 34.
    pub second_order: [f64; 6],
    pub fourth_order: f64,
    pub kappa: f64,
}

/// `κ`; errors when `|Σ I_II| < 1e-12 · Σ values`.
pub fn kappa(values: &OpeningValues) -> Result<SorkinTerms> {
    let mut second_order = [0.0; 6];
    for (slot, (i, j)) in second_order.iter_mut().zip(pairs()) {
        *slot = second_order_term(
            lookup(values, Opening((1 << i) | (1 << j)))?,
            lookup(values, Opening(1 << i))?,
            lookup(values, Opening(1 << j))?,
        );
    }
    let fourth_order = fourth_order_term(values)?;
    let denominator: f64 = second_order.iter().sum();
    let total: f64 = values.values().sum();
    if denominator.abs() < 1e-12 * total || denominator == 0.0 {
        return Err(Error::VanishingDenominator(denominator));
    }
    Ok(SorkinTerms {
        second_order,
        fourth_order,
        kappa: fourth_order / denominator,
    })
}

/// Port-0 probability for each standard opening, through compiled and
/// blocked meshes.
pub fn exact_probabilities(phases: &PhaseArray, leakage: f64) -> Result<OpeningValues> {
    if phases.d() != PATHS {
        return Err(Error::DimensionMismatch {
            expected: PATHS,
            found: phases.d(),
        });
    }
    let h = hadamard(PATHS)?;
    let bs1 = compile(&h)?;
    let theta = phase_operator(phases);
    let after = h.matrix().matmul(theta.matrix())?;
    standard_openings()
        .into_iter()
        .map(|o| {
            let t1 = evaluate(&block_paths(&bs1, &o.blocking_mask(), leakage)?);
            let total = after.matmul(&t1)?;
            Ok((o, total[(0, 0)].norm_sqr()))
        })
        .collect()
}

/// A seeded Monte-Carlo batch.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SorkinRun {
    pub phases: PhaseArray,
    pub leakage: f64,
    /// Poisson mean scale: an opening with probability `P` has mean
    /// `mean_total · P` counts.
    pub mean_total: f64,
    /// Trial `i` uses seed `seed + i`.
    pub seed: u64,
    pub trials: usize,
}

impl SorkinRun {
    /// Prime maximum (all phases zero), `ε = 0.003`, `10⁴` counts, 60
    /// trials, seed 0.
    pub fn standard() -> Self {
        Self {
            phases: PhaseArray::zeros(PATHS).expect("non-empty"),
            leakage: 0.003,
            mean_total: 1e4,
            seed: 0,
            trials: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SorkinTrial {
    pub seed: u64,
    pub counts: Vec<(Opening, u64)>,
    pub terms: SorkinTerms,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SorkinReport {
    /// Noise-free terms at the run's leakage.
    pub exact: SorkinTerms,
    pub trials: Vec<SorkinTrial>,
    pub kappa_mean: f64,
    /// Sample standard deviation over trials.
    pub kappa_std: f64,
}

impl SorkinReport {
    /// `κ_std / √trials`.
    pub fn kappa_standard_error(&self) -> f64 {
        self.kappa_std / (self.trials.len() as f64).sqrt()
    }
}

pub fn run_batch(run: &SorkinRun) -> Result<SorkinReport> {
    if run.trials < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 trials, got {}", run.trials)));
    }
    if !(run.mean_total > 0.0) {
        return Err(Error::InvalidParameter(format!("mean_total {} must be positive", run.mean_total)));
    }
    let probs = exact_probabilities(&run.phases, run.leakage)?;
    let exact = kappa(&probs)?;
    let mut trials = Vec::with_capacity(run.trials);
    for i in 0..run.trials {
        let seed = run.seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts = probs
            .iter()
            .map(|(&o, &p)| Ok((o, poisson(&mut rng, run.mean_total * p)?)))
            .collect::<Result<Vec<_>>>()?;
        let values: OpeningValues = counts.iter().map(|&(o, c)| (o, c as f64)).collect();
        trials.push(SorkinTrial {
            seed,
            counts,
            terms: kappa(&values)?,
        });
    }
    let n = trials.len() as f64;
    let kappa_mean = trials.iter().map(|t| t.terms.kappa).sum::<f64>() / n;
    let var = trials
        .iter()
        .map(|t| (t.terms.kappa - kappa_mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok(SorkinReport {
        exact,
        trials,
        kappa_mean,
        kappa_std: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsgen::linear_ramp;

    #[test]
    fn labels_and_order() {
        let o = standard_openings();
        assert_eq!(o.len(), 11);
        assert_eq!(o[4].label(), "12");
        assert_eq!(o[10].label(), "1234");
        assert_eq!(Opening::new(&[0, 2]).unwrap().blocking_mask(), [false, true, false, true]);
    }

    #[test]
    fn born_rule_gives_no_fourth_order() {
        let p = exact_probabilities(&PhaseArray::zeros(4).unwrap(), 0.0).unwrap();
        let t = kappa(&p).unwrap();
        assert!(t.fourth_order.abs() < 1e-12);
        assert!(t.kappa.abs() < 1e-12);
        assert!(t.second_order.iter().sum::<f64>() > 0.0);
    }

    #[test]
    fn leakage_gives_fourth_order_of_order_epsilon() {
        let p = exact_probabilities(&PhaseArray::zeros(4).unwrap(), 0.004).unwrap();
        let i4 = fourth_order_term(&p).unwrap();
        assert!(i4.abs() > 1e-4 && i4.abs() < 0.1);
    }

    #[test]
    fn planted_term_is_recovered() {
        let mut v = OpeningValues::new();
        let singles = [0.11, 0.07, 0.2, 0.05];
        for (i, s) in singles.iter().enumerate() {
            v.insert(Opening(1 << i), *s);
        }
        let mut pair_sum = 0.0;
        for (k, (i, j)) in pairs().enumerate() {
            let p = 0.3 + 0.01 * k as f64;
            pair_sum += p;
            v.insert(Opening((1 << i) | (1 << j)), p);
        }
        let planted = 0.0123;
        v.insert(Opening::full(), pair_sum - 2.0 * singles.iter().sum::<f64>() + planted);
        assert!((fourth_order_term(&v).unwrap() - planted).abs() < 1e-15);
    }

    #[test]
    fn missing_openings_are_reported() {
        let mut v = OpeningValues::new();
        for i in 0..4 {
            v.insert(Opening(1 << i), 0.25);
        }
        assert!(matches!(kappa(&v), Err(Error::MissingOpening(_))));
        v.insert(Opening::full(), 1.0);
        assert!(matches!(fourth_order_term(&v), Err(Error::MissingOpening(l)) if l == "12"));
    }

    #[test]
    fn incoherent_values_have_no_second_order() {
        assert_eq!(second_order_term(0.5, 0.2, 0.3), 0.0);
        let mut v = OpeningValues::new();
        for o in standard_openings() {
            v.insert(o, (0..4).filter(|&k| o.contains(k)).count() as f64 * 0.1);
        }
        assert!(matches!(kappa(&v), Err(Error::VanishingDenominator(_))));
    }

    #[test]
    fn kappa_is_scale_invariant() {
        let p = exact_probabilities(&linear_ramp(4, 2.2).unwrap(), 0.01).unwrap();
        let scaled: OpeningValues = p.iter().map(|(&o, &x)| (o, 37.0 * x)).collect();
        assert!((kappa(&p).unwrap().kappa - kappa(&scaled).unwrap().kappa).abs() < 1e-12);
    }

    #[test]
    fn batch_is_deterministic() {
        let run = SorkinRun {
            trials: 5,
            ..SorkinRun::standard()
        };
        let a = run_batch(&run).unwrap();
        assert_eq!(a, run_batch(&run).unwrap());
        assert_eq!(a.trials[3].seed, 3);
    }
}
