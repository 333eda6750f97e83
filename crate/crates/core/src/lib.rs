//! Non-adiabatic holonomic gates from dynamical invariants.
//!
//! - [`linalg`]: dense complex kernel (eigensolver, exponentials, Paulis, fidelity)
//! - [`model`]: driven Zeeman + Ising Hamiltonian and its closed-form invariant
//! - [`propagation`]: eigenframe propagator, geometric/dynamical phases, oracles
//! - [`synthesis`]: fidelity-driven pulse search and entangling-gate detection
//! - [`characterization`]: Pauli transfer matrices, tomography, randomized benchmarking
//! - [`tables`]: checks of the bundled reference parameter sets

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characterization;
pub mod error;
pub mod linalg;
pub mod model;
pub mod propagation;
pub mod synthesis;
pub mod tables;

pub use characterization::{RbRecord, TransferMatrix};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Pauli, PauliString};
pub use model::{LoopSequence, PulseParams, Unit};
pub use propagation::{EigenFrame, PhaseRecord};
pub use synthesis::{SynthesisProblem, SynthesisResult};
