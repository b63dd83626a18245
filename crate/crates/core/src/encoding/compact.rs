//! Dense encoding of a fixed-particle-number sector.
//!
//! Sector basis state `k` (in [`crate::fock::enumerate_configs`] order) is
//! the register basis state with integer label `k`. A `D`-dimensional
//! sector needs `⌈log₂ D⌉` qubits; the `2^q − D` unused labels are padding.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::pauli::{pauli_decompose, PauliSum};
use crate::error::{usage, Result};

/// `⌈log₂ dim⌉`, with a one-dimensional sector needing no qubits.
pub fn compact_qubits(dim: usize) -> usize {
    assert!(dim > 0, "empty sector");
    dim.next_power_of_two().trailing_zeros() as usize
}

/// Embed `op_matrix` into the top-left corner of a `2^q × 2^q` matrix whose
/// padding diagonal is `pad_energy`, then decompose into Pauli strings.
pub fn compact_encode(op_matrix: &DMatrix<Complex64>, pad_energy: f64) -> Result<PauliSum> {
    if !pad_energy.is_finite() {
        return Err(usage!("pad energy must be finite, got {pad_energy}"));
    }
    let d = op_matrix.nrows();
    if d == 0 || d != op_matrix.ncols() {
        return Err(usage!(
            "sector matrix must be square and nonempty, got {}x{}",
            op_matrix.nrows(),
            op_matrix.ncols()
        ));
    }
    let dim = 1usize << compact_qubits(d);
    let mut padded = DMatrix::<Complex64>::zeros(dim, dim);
    padded.view_mut((0, 0), (d, d)).copy_from(op_matrix);
    for k in d..dim {
        padded[(k, k)] = Complex64::new(pad_energy, 0.0);
    }
    pauli_decompose(&padded)
}

/// Identity on the `d` physical labels, zero on padding.
pub fn physical_projector(d: usize) -> Result<PauliSum> {
    compact_encode(&DMatrix::identity(d, d), 0.0)
}

/// `pad_energy` on padding labels, zero on physical ones.
pub fn padding_penalty(d: usize, pad_energy: f64) -> Result<PauliSum> {
    compact_encode(&DMatrix::zeros(d, d), pad_energy)
}
