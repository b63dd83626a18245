//! Energy of an arbitrary A/B split. For every ordered block pair
//! `(n', n)` the classical factors of all terms are folded into one
//! effective register operator `O_{n'n}`, so that
//! `E = Σ α_{n'} α_n ⟨Ψ_{n'}|O_{n'n}|Ψ_n⟩`.

use num_complex::Complex64;

use super::brackets::{diag_estimate, map_blocks, pair_estimate, BlockStates};
use super::{EnergyEstimate, VariationalState};
use crate::encoding::{EncodingKind, LinearEncoding, PauliSum, COEFF_TOL};
use crate::error::{usage, Result};
use crate::fock::{enumerate_subset_configs, matrix_element, Configuration, LadderOp, ModeIndex, OperatorString};
use crate::model::{SignRule, SplitHamiltonian};
use crate::sim::{AnsatzSpec, SimMode};

/// Block configurations of subsystem A and the effective register
/// operators between them.
#[derive(Debug, Clone)]
pub struct GeneralProblem {
    pub blocks: Vec<Configuration>,
    pub qubits: usize,
    /// `O_{nn}` per block.
    pub diag: Vec<PauliSum>,
    /// `(bra, ket, O_{bra,ket})` with `bra < ket`; the transposed pair is
    /// its adjoint.
    pub pairs: Vec<(usize, usize, PauliSum)>,
}

fn relabel(ops: &OperatorString, set_b: u64) -> Result<OperatorString> {
    let below = |m: usize| (set_b & ((1u64 << m) - 1)).count_ones() as usize;
    OperatorString::new(
        ops.ops()
            .iter()
            .map(|op| LadderOp {
                dagger: op.dagger,
                mode: ModeIndex(below(op.mode.0)),
            })
            .collect(),
        ops.coefficient,
    )
}

impl GeneralProblem {
    /// Blocks are the A configurations with `n_a` particles (all particle
    /// numbers if `None`); B modes map in ascending order onto qubits
    /// through `kind` (compact is not available here).
    pub fn new(split: &SplitHamiltonian, n_a: Option<usize>, kind: EncodingKind) -> Result<Self> {
        let qubits = split.set_b.count_ones() as usize;
        let enc = match kind {
            EncodingKind::JordanWigner => LinearEncoding::jordan_wigner(qubits),
            EncodingKind::Parity => LinearEncoding::parity(qubits),
            EncodingKind::BravyiKitaev => LinearEncoding::bravyi_kitaev(qubits),
            EncodingKind::Compact => {
                return Err(usage!("the general split path needs a mode-wise encoding, not compact"))
            }
        };
        let blocks = enumerate_subset_configs(split.set_a, n_a)?;
        let nb = blocks.len();

        // Encode each distinct B factor once.
        let mut terms = Vec::new();
        for (_, term) in split.iter() {
            let b = enc.encode(&relabel(&term.b_ops, split.set_b)?)?;
            terms.push((term, b));
        }

        let mut full = vec![vec![PauliSum::zero(qubits); nb]; nb];
        for (ket_idx, ket) in blocks.iter().enumerate() {
            for (term, b) in &terms {
                let Some((image, sign)) = term.a_ops.apply(ket)? else {
                    continue;
                };
                let Some(bra_idx) = blocks.iter().position(|c| c.bits() == image.bits()) else {
                    continue;
                };
                let parity = match term.sign_rule {
                    SignRule::None => 1.0,
                    SignRule::ParityA => ket.parity_sign(),
                };
                debug_assert_eq!(
                    matrix_element(&blocks[bra_idx], &term.a_ops, ket)?,
                    Complex64::new(f64::from(sign), 0.0)
                );
                let factor = term.coefficient * f64::from(sign) * parity;
                full[bra_idx][ket_idx] = full[bra_idx][ket_idx].add(&b.scale(factor))?;
            }
        }

        let mut diag = Vec::with_capacity(nb);
        let mut pairs = Vec::new();
        for (r, row) in full.into_iter().enumerate() {
            for (c, o) in row.into_iter().enumerate() {
                if r == c {
                    diag.push(o);
                } else if r < c && !o.is_empty() {
                    pairs.push((r, c, o));
                }
            }
        }
        if let Some(o) = diag.iter().find(|o| !o.is_hermitian(1e3 * COEFF_TOL)) {
            return Err(usage!("diagonal block operator is not Hermitian: {o}"));
        }
        Ok(Self {
            blocks,
            qubits,
            diag,
            pairs,
        })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// `Σ α_{n'} α_n ⟨Ψ_{n'}|O_{n'n}|Ψ_n⟩` for a Hermitian Hamiltonian.
pub fn energy_general(
    vs: &VariationalState,
    spec: &AnsatzSpec,
    problem: &GeneralProblem,
    mode: SimMode,
) -> Result<EnergyEstimate> {
    vs.validate(problem.block_count(), spec)?;
    if spec.data_qubits != problem.qubits {
        return Err(usage!(
            "ansatz has {} data qubits, subsystem B needs {}",
            spec.data_qubits,
            problem.qubits
        ));
    }
    let alpha = vs.normalized_alpha()?;
    let states = BlockStates::from_ansatz(spec, &vs.angles)?;
    let nb = problem.block_count() as u64;

    let diag = map_blocks(problem.diag.len(), problem.qubits, |n| -> Result<(f64, f64)> {
        let w = alpha[n] * alpha[n];
        let e = diag_estimate(states.block(n), &problem.diag[n], mode, n as u64)?;
        Ok((w * e.value.re, w * w * e.var_re))
    })?;
    let off = map_blocks(problem.pairs.len(), problem.qubits, |k| -> Result<(f64, f64)> {
        let (r, c, o) = &problem.pairs[k];
        let w = 2.0 * alpha[*r] * alpha[*c];
        if w == 0.0 {
            return Ok((0.0, 0.0));
        }
        let state = states.pair(*r, *c)?;
        let e = pair_estimate(&state, o, mode, nb + k as u64)?;
        Ok((w * e.value.re, w * w * e.var_re))
    })?;
    let (mut value, mut var) = (0.0, 0.0);
    for (v, s) in diag.iter().chain(&off) {
        value += v;
        var += s;
    }
    Ok(EnergyEstimate {
        value,
        std_error: var.sqrt(),
    })
}
