use num_complex::Complex64;
use rayon::prelude::*;

use crate::encoding::PauliSum;
use crate::error::{usage, Result};
use crate::sim::{
    ancilla_bracket, ansatz_state, controlled_ansatz_state, expect, sample_ancilla_bracket,
    sample_expect_estimate, stream_rng, superpose_branches, AnsatzSpec, BlockAngles, Estimate,
    SimMode, Statevector,
};

/// Blocks are fanned out to worker threads from this register size up.
const PARALLEL_QUBITS: usize = 10;

pub(crate) fn map_blocks<T, F>(count: usize, qubits: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if qubits >= PARALLEL_QUBITS {
        (0..count).into_par_iter().map(f).collect()
    } else {
        (0..count).map(f).collect()
    }
}

enum Source<'a> {
    Ansatz {
        spec: &'a AnsatzSpec,
        angles: &'a BlockAngles,
    },
    Injected,
}

/// Per-block register states plus the recipe for two-branch ancilla states.
pub(crate) struct BlockStates<'a> {
    source: Source<'a>,
    states: Vec<Statevector>,
}

impl<'a> BlockStates<'a> {
    pub fn from_ansatz(spec: &'a AnsatzSpec, angles: &'a BlockAngles) -> Result<Self> {
        angles.validate(spec)?;
        let states = map_blocks(angles.len(), spec.data_qubits, |n| ansatz_state(spec, angles.get(n)))?;
        Ok(Self {
            source: Source::Ansatz { spec, angles },
            states,
        })
    }

    pub fn injected(states: Vec<Statevector>) -> Result<Self> {
        if let Some(first) = states.first() {
            if states.iter().any(|s| s.qubit_count() != first.qubit_count()) {
                return Err(usage!("injected block states differ in size"));
            }
        }
        Ok(Self {
            source: Source::Injected,
            states,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn qubits(&self) -> usize {
        self.states.first().map_or(0, Statevector::qubit_count)
    }

    pub fn block(&self, n: usize) -> &Statevector {
        &self.states[n]
    }

    /// `(|0; ket⟩ + |1; bra⟩)/√2`, whose ancilla bracket is `⟨bra|O|ket⟩`.
    pub fn pair(&self, bra: usize, ket: usize) -> Result<Statevector> {
        match &self.source {
            Source::Ansatz { spec, angles } => controlled_ansatz_state(spec, angles.get(ket), angles.get(bra)),
            Source::Injected => Ok(superpose_branches(&self.states[ket], &self.states[bra])),
        }
    }
}

/// `⟨O⟩` on a block state, exact or sampled on stream `stream`.
pub(crate) fn diag_estimate(state: &Statevector, o: &PauliSum, mode: SimMode, stream: u64) -> Result<Estimate> {
    match mode {
        SimMode::Exact => Ok(Estimate::exact(Complex64::new(expect(state, o)?, 0.0))),
        SimMode::Shots { shots, seed } => {
            let mut rng = stream_rng(seed, stream);
            sample_expect_estimate(state, o, shots, &mut rng)
        }
    }
}

/// Ancilla bracket on a two-branch state, exact or sampled.
pub(crate) fn pair_estimate(state: &Statevector, o: &PauliSum, mode: SimMode, stream: u64) -> Result<Estimate> {
    match mode {
        SimMode::Exact => Ok(Estimate::exact(ancilla_bracket(state, o)?)),
        SimMode::Shots { shots, seed } => {
            let mut rng = stream_rng(seed, stream);
            sample_ancilla_bracket(state, o, shots, &mut rng)
        }
    }
}
