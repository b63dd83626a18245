//! Block-partitioned variational quantum eigensolver.
//!
//! The one-particle mode set of a fermionic Hamiltonian is split into a
//! subsystem `A` whose occupation configurations are enumerated on the
//! classical side and a subsystem `B` that is mapped onto a qubit register.
//! Each configuration of `A` labels a *block* carrying its own ansatz angles
//! and a real amplitude; cross-block brackets are measured with an ancilla
//! qubit. The Hubbard ring split into spin-up (classical) and spin-down
//! (quantum) sectors is the worked model.
//!
//! Module map:
//!
//! * [`fock`]: occupation configurations and fermionic sign bookkeeping.
//! * [`model`]: general and Hubbard Hamiltonians, subsystem term grouping.
//! * [`classical_sector`]: cached spin-up factors for the Hubbard split.
//! * [`encoding`]: Pauli algebra and fermion-to-qubit encodings.
//! * [`sim`]: dense statevector simulator, ansatz circuits, brackets.
//! * [`vqe`]: energy assembly and variational minimization.
//! * [`optimize`]: derivative-free optimizers.
//! * [`oracle`]: exact diagonalization, mean field, dense reference operators.

pub mod classical_sector;
pub mod encoding;
mod error;
pub mod fock;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod sim;
pub mod vqe;

pub use error::{Error, Result};

pub use classical_sector::ClassicalFactors;
pub use encoding::{EncodingKind, PauliString, PauliSum};
pub use fock::{Configuration, ModeIndex, OperatorString};
pub use model::{FermionHamiltonian, HubbardParams, SplitHamiltonian};
pub use sim::{AnsatzSpec, BlockAngles, SimMode, Statevector};
pub use vqe::{EnergyBreakdown, VariationalState};

pub use num_complex::Complex64;
