//! Pauli algebra and fermion-to-qubit encodings.

pub mod compact;
pub mod fermion;
pub mod pauli;

pub use compact::{compact_encode, compact_qubits, padding_penalty, physical_projector};
pub use fermion::{
    bravyi_kitaev, jordan_wigner, parity_encode, remove_parity_qubit, EncodingKind, LinearEncoding,
};
pub use pauli::{pauli_decompose, Letter, PauliString, PauliSum, COEFF_TOL};

use crate::error::Result;
use crate::fock::OperatorString;

/// Encode and sum a list of operator strings.
pub fn encode_sum<F>(ops: &[OperatorString], qubits: usize, mut encode: F) -> Result<PauliSum>
where
    F: FnMut(&OperatorString) -> Result<PauliSum>,
{
    let mut acc = PauliSum::zero(qubits);
    for op in ops {
        acc = acc.add(&encode(op)?)?;
    }
    Ok(acc)
}
