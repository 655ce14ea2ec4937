//! epsilon-lab: memoryful stochastic processes and adaptive strategies.
//!
//! The library models stochastic processes as edge-emitting hidden Markov
//! machines and adaptive strategies as input-output transducers, and
//! provides:
//!
//! - classical statistical complexity `C` (entropy of the stationary state
//!   distribution) and channel excess entropy `E` (a lower bound on any
//!   memory implementing the behavior),
//! - quantum memory complexity `Q` via pure-state encodings, maximum-fidelity
//!   fixed points, and Gram-spectrum von Neumann entropy,
//! - process algebra: joint and output machines of a driven channel,
//!   transient removal, minimization by state equivalence, word
//!   distributions,
//! - channel inversion with free-slot completion policies,
//! - classical-vs-quantum ordering analysis (ambiguity detection) with
//!   sufficient conditions usable when only one quantum model is known,
//! - seeded simulation with empirical word statistics,
//! - a CLI (`epsilon-lab`) over JSON model files with CSV outputs.
//!
//! Conventions: all entropies are in bits; state and symbol labels are
//! strings; matrix order always follows the declared state list.
//!
//! Start with the `examples/` directory — each example demonstrates one
//! capability end to end.

// Index loops dominate here by design: the same state/symbol index addresses
// several parallel matrices and label tables at once, and the index itself is
// the meaningful object (not the element an iterator would yield).
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod ambiguity;
pub mod cli;
pub mod error;
pub mod info;
pub mod inversion;
pub mod model;
pub mod models;
pub mod quantum;
pub mod simulate;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
pub use model::{
    binary_entropy, entropy, statistical_complexity, Alphabet, MachinePresentation,
    StationaryDistribution, SuccessorMap, TransducerPresentation, ValidationReport,
};
