//! Hardware-efficient ansatz: layers of `Ry` rotations followed by a fixed
//! CNOT entangler, plus the ancilla-controlled two-branch version used for
//! off-diagonal block brackets.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::statevector::Statevector;
use crate::error::{usage, Result};

/// Circuit layout of the block ansatz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub data_qubits: usize,
    /// Number of `[Ry layer, entangler]` iterations.
    pub depth: usize,
    /// CNOT `(control, target)` pairs applied after each rotation layer.
    pub entangler: Vec<(usize, usize)>,
    /// Append one more `Ry` layer after the last entangler.
    pub closing_layer: bool,
}

impl AnsatzSpec {
    /// Linear-chain entangler `CNOT(k, k+1)`, no closing layer.
    pub fn linear(data_qubits: usize, depth: usize) -> Self {
        Self {
            data_qubits,
            depth,
            entangler: (1..data_qubits).map(|k| (k - 1, k)).collect(),
            closing_layer: false,
        }
    }

    pub fn with_closing_layer(mut self, on: bool) -> Self {
        self.closing_layer = on;
        self
    }

    pub fn rotation_layers(&self) -> usize {
        self.depth + usize::from(self.closing_layer)
    }

    /// One angle per qubit per rotation layer.
    pub fn param_count(&self) -> usize {
        self.rotation_layers() * self.data_qubits
    }

    pub fn validate(&self) -> Result<()> {
        for &(c, t) in &self.entangler {
            if c >= self.data_qubits || t >= self.data_qubits || c == t {
                return Err(usage!("invalid entangler pair ({c}, {t}) on {} qubits", self.data_qubits));
            }
        }
        Ok(())
    }

    fn check_angles(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.param_count() {
            return Err(usage!(
                "ansatz expects {} angles, got {}",
                self.param_count(),
                theta.len()
            ));
        }
        Ok(())
    }

    /// Angle of layer `layer` on qubit `q`.
    #[inline]
    fn angle(&self, theta: &[f64], layer: usize, q: usize) -> f64 {
        theta[layer * self.data_qubits + q]
    }

    fn entangle(&self, state: &mut Statevector) {
        for &(c, t) in &self.entangler {
            state.cnot(c, t);
        }
    }

    /// Apply the ansatz to the low `data_qubits` qubits of `state`.
    pub(crate) fn apply(&self, state: &mut Statevector, theta: &[f64]) {
        for layer in 0..self.depth {
            for q in 0..self.data_qubits {
                state.ry(q, self.angle(theta, layer, q));
            }
            self.entangle(state);
        }
        if self.closing_layer {
            for q in 0..self.data_qubits {
                state.ry(q, self.angle(theta, self.depth, q));
            }
        }
    }
}

/// Per-block angle vectors `θ_{n_A}`, indexed by block.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlockAngles(pub Vec<Vec<f64>>);

impl BlockAngles {
    pub fn zeros(blocks: usize, spec: &AnsatzSpec) -> Self {
        Self(vec![vec![0.0; spec.param_count()]; blocks])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, block: usize) -> &[f64] {
        &self.0[block]
    }

    pub fn validate(&self, spec: &AnsatzSpec) -> Result<()> {
        match self.0.iter().position(|v| v.len() != spec.param_count()) {
            Some(k) => Err(usage!(
                "block {k} has {} angles, ansatz expects {}",
                self.0[k].len(),
                spec.param_count()
            )),
            None => Ok(()),
        }
    }
}

/// `U(θ)|0⟩`.
pub fn ansatz_state(spec: &AnsatzSpec, theta: &[f64]) -> Result<Statevector> {
    spec.validate()?;
    spec.check_angles(theta)?;
    let mut s = Statevector::zero(spec.data_qubits)?;
    spec.apply(&mut s, theta);
    Ok(s)
}

/// `(|0⟩ ⊗ U(θ_a)|0⟩ + |1⟩ ⊗ U(θ_b)|0⟩)/√2` with the ancilla as the top
/// qubit, built gate by gate: Hadamard on the ancilla, then per layer
/// `Ry(θ_a)` on each data qubit followed by an ancilla-controlled
/// `Ry(θ_b − θ_a)`, then the (unconditional) entangler.
pub fn controlled_ansatz_state(spec: &AnsatzSpec, theta_a: &[f64], theta_b: &[f64]) -> Result<Statevector> {
    spec.validate()?;
    spec.check_angles(theta_a)?;
    spec.check_angles(theta_b)?;
    let q = spec.data_qubits;
    let anc = q;
    let mut s = Statevector::zero(q + 1)?;
    s.h(anc);
    let rotate = |s: &mut Statevector, layer: usize| {
        for k in 0..q {
            let a = spec.angle(theta_a, layer, k);
            let b = spec.angle(theta_b, layer, k);
            s.ry(k, a);
            let delta = b - a;
            if delta != 0.0 {
                s.cry(anc, k, delta);
            }
        }
    };
    for layer in 0..spec.depth {
        rotate(&mut s, layer);
        spec.entangle(&mut s);
    }
    if spec.closing_layer {
        rotate(&mut s, spec.depth);
    }
    Ok(s)
}

/// The same two-branch state assembled directly from the branch states.
pub fn controlled_ansatz_state_direct(
    spec: &AnsatzSpec,
    theta_a: &[f64],
    theta_b: &[f64],
) -> Result<Statevector> {
    let a = ansatz_state(spec, theta_a)?;
    let b = ansatz_state(spec, theta_b)?;
    Ok(superpose_branches(&a, &b))
}

/// `(|0; a⟩ + |1; b⟩)/√2` with the ancilla on top.
pub fn superpose_branches(a: &Statevector, b: &Statevector) -> Statevector {
    debug_assert_eq!(a.qubit_count(), b.qubit_count());
    let amps: Vec<Complex64> = a
        .amplitudes()
        .iter()
        .chain(b.amplitudes())
        .map(|x| x * FRAC_1_SQRT_2)
        .collect();
    Statevector::from_raw(amps, a.qubit_count() + 1)
}
