//! Coherence, duality, fringe, randomness and Bell metrics.
//!
//! The density matrix entering the duality relation is the measurement-basis
//! state built by [`measurement_density`]; every other function here is
//! agnostic about where its inputs come from.

mod bell;
mod coherence;
mod duality;
mod fringe;
mod stats;

pub use bell::{bell_weight_for_fidelity, chsh_value, ChshSettings};
pub use coherence::{
    distinguishability, distinguishability_from_diagonal, incoherent_term, l1_coherence,
    measurement_density, operational_diagonal, Family,
};
pub use duality::{tsallis_consistency, DualityReport, DualitySource, TsallisCheck};
pub use fringe::{
    analytic_compensation, find_prime_maximum, visibility_from_fringe, Compensation, FringeProbe,
    FringeScan, SCAN_STEP,
};
pub use stats::{classical_fidelity, min_entropy, pearson_distance};
