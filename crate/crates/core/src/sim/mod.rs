//! Dense statevector simulation of the block ansatz circuits.

mod ansatz;
mod measure;
mod statevector;

pub use ansatz::{
    ansatz_state, controlled_ansatz_state, controlled_ansatz_state_direct, superpose_branches,
    AnsatzSpec, BlockAngles,
};
pub use measure::{
    ancilla_bracket, direct_bracket, expect, expect_complex, offdiag_bracket, pauli_expectation,
    sample_ancilla_bracket, sample_expect, sample_expect_estimate, sample_pauli, stream_rng,
    Estimate, REAL_TOL,
};
pub use statevector::{Gate, Statevector, MAX_QUBITS};

/// How brackets are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Exact statevector expectation values.
    Exact,
    /// Per-term shot sampling, reproducible under `seed`.
    Shots { shots: u64, seed: u64 },
}
