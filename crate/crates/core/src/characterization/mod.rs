//! Simulated process tomography and randomized benchmarking.

pub mod ptm;
pub mod rb;

pub use ptm::{pauli_transfer, process_fidelity, qpt_settings, simulate_qpt, Channel, QptReport, TransferMatrix};
pub use rb::{
    clifford_set, fit_exponential, gate_fidelity_from_decays, rb_gate_fidelity, rb_run, RbConfig, RbFit, RbRecord,
    RbTarget,
};
