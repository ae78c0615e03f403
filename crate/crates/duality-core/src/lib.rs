//! Numerics for multipath delayed-choice interferometry.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It models a
//! `d`-path Mach-Zehnder interferometer whose second beamsplitter is
//! quantum-controlled through an entangled photon pair, and provides:
//!
//! * [`qcore`]: dense complex matrices, state vectors, density matrices.
//! * [`bsgen`]: balanced `d`-mode beamsplitters and the path phase array.
//! * [`delayed_choice`]: closed-form and full-state distributions for the
//!   quantum-superposition and classical-mixture readouts.
//! * [`mesh`]: triangular MZI compilation, imperfect meshes, path blocking.
//! * [`metrics`]: coherence, distinguishability, visibility, entropies,
//!   fidelities and CHSH.
//! * [`sorkin`]: higher-order interference terms and the Sorkin ratio.
//!
//! Index convention: in every tensor product the control qubit is the slow
//! index.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bsgen;
pub mod delayed_choice;
mod error;
pub mod mesh;
pub mod metrics;
pub mod qcore;
pub mod sorkin;

pub use error::{Error, Result};
pub use qcore::C64;
