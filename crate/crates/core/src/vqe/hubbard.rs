//! Energy of the Hubbard ring under the spin split: spin-up configurations
//! are blocks, the spin-down sector lives on the register.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::brackets::{diag_estimate, map_blocks, pair_estimate, BlockStates};
use super::{EnergyBreakdown, VariationalState};
use crate::classical_sector::{nonzero_blocks, ClassicalFactors};
use crate::encoding::{
    bravyi_kitaev, compact_encode, compact_qubits, encode_sum, jordan_wigner, padding_penalty, parity_encode,
    physical_projector, EncodingKind, LinearEncoding, PauliSum,
};
use crate::error::{usage, Result};
use crate::fock::{ConfigBasis, OperatorString};
use crate::model::{hopping_operator, HubbardParams};
use crate::oracle::{exact_ground, exact_ground_over_down, GroundState};
use crate::sim::{AnsatzSpec, SimMode, Statevector};

/// `⟨N↓⟩` source: a fixed particle number or a measured operator.
#[derive(Debug, Clone, PartialEq)]
pub enum DownNumber {
    Fixed(usize),
    Operator(PauliSum),
}

/// Encoded spin-down operators and the couplings that weight them.
#[derive(Debug, Clone)]
pub struct HubbardOperators {
    pub kind: EncodingKind,
    pub sites: usize,
    /// Data qubits; the ancilla is extra.
    pub qubits: usize,
    pub hopping: f64,
    pub onsite: f64,
    pub chem_potential: f64,
    pub n_down: DownNumber,
    /// Unit-coefficient `T↓`.
    pub t_down: PauliSum,
    /// `n_{i↓}` per site.
    pub n_site: Vec<PauliSum>,
    /// Overlap operator: identity, or the physical projector of a padded
    /// compact register.
    pub overlap: PauliSum,
    pub padding: Option<PauliSum>,
    /// Compact register: sector basis whose index is the register label.
    down_basis: Option<ConfigBasis>,
    /// Parity/BK register: fixed total parity of the removed qubit.
    fixed_parity: Option<i8>,
}

/// `|ε| L + 4|t| L + |U| L`.
pub fn default_pad_energy(params: &HubbardParams) -> f64 {
    let l = params.sites as f64;
    (params.chem_potential.abs() + 4.0 * params.hopping.abs() + params.onsite.abs()) * l
}

fn to_dmatrix(m: Vec<Vec<Complex64>>) -> DMatrix<Complex64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |r, c| m[r][c])
}

impl HubbardOperators {
    /// Encode `T↓`, `n_{i↓}` and `N↓` with spin-down modes relabelled
    /// `0..L`. Compact needs `fix_n_down`; the other encodings reject it.
    /// Parity and Bravyi–Kitaev fix the removed qubit to `(−1)^{N↓}`.
    pub fn build(
        params: &HubbardParams,
        kind: EncodingKind,
        fix_n_down: bool,
        pad_energy: Option<f64>,
    ) -> Result<Self> {
        params.validate()?;
        let l = params.sites;
        if (kind == EncodingKind::Compact) != fix_n_down {
            return Err(usage!(
                "fix_n_down must be set exactly for the compact encoding (encoding {}, fix_n_down {fix_n_down})",
                kind.name()
            ));
        }
        let hop = hopping_operator(params, 0);
        let numbers: Vec<OperatorString> = (0..l).map(OperatorString::number).collect();
        let parity: i8 = if params.n_down.is_multiple_of(2) { 1 } else { -1 };

        let mut ops = Self {
            kind,
            sites: l,
            qubits: 0,
            hopping: params.hopping,
            onsite: params.onsite,
            chem_potential: params.chem_potential,
            n_down: DownNumber::Fixed(params.n_down),
            t_down: PauliSum::zero(0),
            n_site: Vec::new(),
            overlap: PauliSum::zero(0),
            padding: None,
            down_basis: None,
            fixed_parity: None,
        };
        match kind {
            EncodingKind::Compact => {
                let basis = ConfigBasis::fixed_number(l, params.n_down)?;
                let d = basis.len();
                let q = compact_qubits(d);
                ops.qubits = q;
                ops.t_down = compact_encode(&to_dmatrix(basis.operator_matrix(&hop)?), 0.0)?;
                ops.n_site = numbers
                    .iter()
                    .map(|n| compact_encode(&to_dmatrix(basis.operator_matrix(std::slice::from_ref(n))?), 0.0))
                    .collect::<Result<_>>()?;
                ops.overlap = physical_projector(d)?;
                if d < 1 << q {
                    let pad = pad_energy.unwrap_or_else(|| default_pad_energy(params));
                    ops.padding = Some(padding_penalty(d, pad)?);
                }
                ops.down_basis = Some(basis);
            }
            _ => {
                let encode = |o: &OperatorString| -> Result<PauliSum> {
                    match kind {
                        EncodingKind::JordanWigner => jordan_wigner(o, l),
                        EncodingKind::Parity => parity_encode(o, l, parity),
                        _ => bravyi_kitaev(o, l, Some(parity)),
                    }
                };
                let q = if kind == EncodingKind::JordanWigner { l } else { l - 1 };
                ops.qubits = q;
                ops.t_down = encode_sum(&hop, q, encode)?;
                ops.n_site = numbers.iter().map(encode).collect::<Result<_>>()?;
                ops.n_down = DownNumber::Operator(encode_sum(&numbers, q, encode)?);
                ops.overlap = PauliSum::identity(q);
                if kind != EncodingKind::JordanWigner {
                    ops.fixed_parity = Some(parity);
                }
            }
        }
        ops.validate()?;
        Ok(ops)
    }

    /// All operators act on `qubits` qubits.
    pub fn validate(&self) -> Result<()> {
        let q = self.qubits;
        let mut sums: Vec<(&str, &PauliSum)> = vec![("t_down", &self.t_down), ("overlap", &self.overlap)];
        if let DownNumber::Operator(o) = &self.n_down {
            sums.push(("n_down", o));
        }
        if let Some(p) = &self.padding {
            sums.push(("padding", p));
        }
        sums.extend(self.n_site.iter().map(|o| ("n_site", o)));
        for (name, o) in sums {
            if o.qubit_count() != q {
                return Err(usage!(
                    "{name} acts on {} qubits, register has {q}",
                    o.qubit_count()
                ));
            }
        }
        if self.n_site.len() != self.sites {
            return Err(usage!(
                "{} site operators for {} sites",
                self.n_site.len(),
                self.sites
            ));
        }
        Ok(())
    }

    /// Register qubits including the ancilla.
    pub fn total_qubits(&self) -> usize {
        self.qubits + 1
    }

    /// Register basis label of a spin-down configuration, if representable.
    pub fn register_label(&self, down_bits: u64) -> Option<usize> {
        match self.kind {
            EncodingKind::Compact => self.down_basis.as_ref()?.position(down_bits),
            EncodingKind::JordanWigner => Some(down_bits as usize),
            EncodingKind::Parity | EncodingKind::BravyiKitaev => {
                let enc = if self.kind == EncodingKind::Parity {
                    LinearEncoding::parity(self.sites)
                } else {
                    LinearEncoding::bravyi_kitaev(self.sites)
                };
                let parity = if down_bits.count_ones().is_multiple_of(2) { 1 } else { -1 };
                if Some(parity) != self.fixed_parity {
                    return None;
                }
                let full = enc.encode_bits(down_bits);
                Some((full & ((1u64 << self.qubits) - 1)) as usize)
            }
        }
    }

    /// Lowest exact energy over the spin-down sectors this register spans.
    pub fn exact_reference(&self, params: &HubbardParams) -> Result<f64> {
        match self.kind {
            EncodingKind::Compact => Ok(exact_ground(params)?.energy),
            EncodingKind::JordanWigner => exact_ground_over_down(params, |_| true),
            _ => {
                let want = params.n_down % 2;
                exact_ground_over_down(params, |n| n % 2 == want)
            }
        }
    }
}

/// Split the exact ground state into block amplitudes `α_n = |v_n|` and
/// normalized spin-down register states `v_n / α_n`. Blocks with zero
/// weight get the first physical label.
pub fn embed_ground_state(ground: &GroundState, ops: &HubbardOperators) -> Result<(Vec<f64>, Vec<Statevector>)> {
    let basis = &ground.basis;
    let dim = 1usize << ops.qubits;
    let mut alpha = Vec::with_capacity(basis.up.len());
    let mut states = Vec::with_capacity(basis.up.len());
    for u in 0..basis.up.len() {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut norm2 = 0.0;
        for (d, cfg) in basis.down.configs().iter().enumerate() {
            let v = ground.amplitude(u, d);
            let label = ops
                .register_label(cfg.bits())
                .ok_or_else(|| usage!("spin-down configuration {:#b} not representable", cfg.bits()))?;
            amps[label] = Complex64::new(v, 0.0);
            norm2 += v * v;
        }
        let a = norm2.sqrt();
        if a > 0.0 {
            amps.iter_mut().for_each(|x| *x /= a);
        } else {
            let label = ops
                .register_label(basis.down.configs()[0].bits())
                .expect("checked above");
            amps[label] = Complex64::new(1.0, 0.0);
        }
        alpha.push(a);
        states.push(Statevector::from_amplitudes(amps)?);
    }
    Ok((alpha, states))
}

fn check(factors: &ClassicalFactors, ops: &HubbardOperators, blocks: usize, qubits: usize) -> Result<()> {
    ops.validate()?;
    if factors.sites != ops.sites {
        return Err(usage!(
            "factors for {} sites, operators for {}",
            factors.sites,
            ops.sites
        ));
    }
    if blocks != factors.block_count() {
        return Err(usage!(
            "{blocks} block states for {} configurations",
            factors.block_count()
        ));
    }
    if qubits != ops.qubits {
        return Err(usage!(
            "block states have {qubits} qubits, operators act on {}",
            ops.qubits
        ));
    }
    Ok(())
}

/// Energy of `vs` with block states prepared by the ansatz.
pub fn energy(
    vs: &VariationalState,
    spec: &AnsatzSpec,
    factors: &ClassicalFactors,
    ops: &HubbardOperators,
    mode: SimMode,
) -> Result<EnergyBreakdown> {
    vs.validate(factors.block_count(), spec)?;
    if spec.data_qubits != ops.qubits {
        return Err(usage!(
            "ansatz has {} data qubits, operators act on {}",
            spec.data_qubits,
            ops.qubits
        ));
    }
    let states = BlockStates::from_ansatz(spec, &vs.angles)?;
    assemble(&vs.normalized_alpha()?, &states, factors, ops, mode)
}

/// Energy with block states supplied directly instead of prepared by a
/// circuit; used to check the assembly independently of the ansatz.
pub fn energy_from_states(
    alpha: &[f64],
    states: Vec<Statevector>,
    factors: &ClassicalFactors,
    ops: &HubbardOperators,
    mode: SimMode,
) -> Result<EnergyBreakdown> {
    let vs = VariationalState {
        alpha: alpha.to_vec(),
        angles: Default::default(),
    };
    let alpha = vs.normalized_alpha()?;
    let states = BlockStates::injected(states)?;
    if states.len() != alpha.len() {
        return Err(usage!(
            "{} amplitudes for {} states",
            alpha.len(),
            states.len()
        ));
    }
    assemble(&alpha, &states, factors, ops, mode)
}

#[derive(Default)]
struct DiagParts {
    epsilon: f64,
    hopping: f64,
    interaction: f64,
    padding: f64,
    variance: f64,
}

fn assemble(
    alpha: &[f64],
    states: &BlockStates<'_>,
    factors: &ClassicalFactors,
    ops: &HubbardOperators,
    mode: SimMode,
) -> Result<EnergyBreakdown> {
    check(factors, ops, states.len(), states.qubits())?;
    let (eps, t, u) = (ops.chem_potential, ops.hopping, ops.onsite);
    // Stream layout: per block, slot 0 is T↓, 1 is N↓, 2 is padding, 3.. are sites.
    let slots = ops.sites as u64 + 3;

    let diag = map_blocks(states.len(), ops.qubits, |n| -> Result<DiagParts> {
        let w = alpha[n] * alpha[n];
        let state = states.block(n);
        let base = n as u64 * slots;
        let mut p = DiagParts::default();

        let n_up = f64::from(factors.n_total[n]);
        let n_down = match &ops.n_down {
            DownNumber::Fixed(k) => *k as f64,
            DownNumber::Operator(o) => {
                let e = diag_estimate(state, o, mode, base + 1)?;
                p.variance += (eps * w).powi(2) * e.var_re;
                e.value.re
            }
        };
        p.epsilon = eps * w * (n_up + n_down);

        let e = diag_estimate(state, &ops.t_down, mode, base)?;
        p.hopping = t * w * e.value.re;
        p.variance += (t * w).powi(2) * e.var_re;

        if u != 0.0 {
            for (i, occ) in factors.occupations[n].iter().enumerate() {
                if *occ == 0 {
                    continue;
                }
                let e = diag_estimate(state, &ops.n_site[i], mode, base + 3 + i as u64)?;
                p.interaction += u * w * e.value.re;
                p.variance += (u * w).powi(2) * e.var_re;
            }
        }
        if let Some(pad) = &ops.padding {
            let e = diag_estimate(state, pad, mode, base + 2)?;
            p.padding = w * e.value.re;
            p.variance += w * w * e.var_re;
        }
        Ok(p)
    })?;

    let pairs = nonzero_blocks(factors);
    let pair_base = states.len() as u64 * slots;
    let off = map_blocks(pairs.len(), ops.qubits, |k| -> Result<(f64, f64)> {
        let (r, c) = pairs[k];
        // T symmetric and real: the (c, r) term is the conjugate of (r, c).
        let weight = 2.0 * t * alpha[r] * alpha[c] * factors.t(r, c);
        if weight == 0.0 {
            return Ok((0.0, 0.0));
        }
        let state = states.pair(r, c)?;
        let e = pair_estimate(&state, &ops.overlap, mode, pair_base + k as u64)?;
        Ok((weight * e.value.re, weight * weight * e.var_re))
    })?;

    let mut b = EnergyBreakdown::default();
    let mut variance = 0.0;
    for p in &diag {
        b.epsilon += p.epsilon;
        b.hopping_diag += p.hopping;
        b.interaction += p.interaction;
        b.padding += p.padding;
        variance += p.variance;
    }
    for (v, var) in &off {
        b.hopping_offdiag += v;
        variance += var;
    }
    b.total = b.parts_sum();
    b.std_error = variance.sqrt();
    Ok(b)
}
