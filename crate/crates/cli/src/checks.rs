//! Invariant checks behind `verify`.

use std::fmt;

use anyhow::{Context, Result};
use blockvqe::classical_sector::{compute_factors, ClassicalFactors};
use blockvqe::encoding::{compact_qubits, PauliString};
use blockvqe::fock::{binomial, enumerate_configs, OperatorString};
use blockvqe::model::{build_hubbard, hopping_operator, split, FermionHamiltonian};
use blockvqe::oracle::dense::{eigenvalues, hamiltonian_dense, operator_dense, restrict, MAX_DENSE_MODES};
use blockvqe::oracle::exact_ground;
use blockvqe::sim::{ansatz_state, direct_bracket, offdiag_bracket};
use blockvqe::vqe::{embed_ground_state, energy, energy_from_states, HubbardOperators};
use blockvqe::{AnsatzSpec, Complex64, EncodingKind, HubbardParams, PauliSum, SimMode, VariationalState};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, SplitKind};

pub const SPECTRUM_TOL: f64 = 1e-10;
pub const BRACKET_TOL: f64 = 1e-10;
pub const REASSEMBLY_TOL: f64 = 1e-12;
pub const EMBEDDING_TOL: f64 = 1e-8;
pub const BRACKET_TRIALS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn dense_sum(ops: &[OperatorString], modes: usize) -> Result<DMatrix<Complex64>> {
    let mut m = DMatrix::zeros(1 << modes, 1 << modes);
    for o in ops {
        m += operator_dense(o, modes)?;
    }
    Ok(m)
}

/// Unit-coefficient spin-down operators `[T↓, n_0↓, …]` on `L` modes.
fn down_operators(params: &HubbardParams) -> Vec<Vec<OperatorString>> {
    let mut out = vec![hopping_operator(params, 0)];
    out.extend((0..params.sites).map(|i| vec![OperatorString::number(i)]));
    out
}

/// Spectra of `[T↓, n_0↓, …]` in the `N↓ = params.n_down` sector from the
/// brute-force fermion matrices.
pub fn fock_sector_spectra(params: &HubbardParams) -> Result<Vec<Vec<f64>>> {
    let l = params.sites;
    let n = params.n_down as u32;
    down_operators(params)
        .iter()
        .map(|ops| {
            let m = dense_sum(ops, l)?;
            Ok(eigenvalues(&restrict(&m, |b| b.count_ones() == n)))
        })
        .collect()
}

/// Spectra of the encoded `[T↓, n_0↓, …]` on the register labels of the
/// `N↓ = params.n_down` configurations.
pub fn encoded_sector_spectra(params: &HubbardParams, ops: &HubbardOperators) -> Result<Vec<Vec<f64>>> {
    let mut labels = Vec::new();
    for c in enumerate_configs(params.sites, params.n_down)? {
        let label = ops
            .register_label(c.bits())
            .with_context(|| format!("configuration {:#b} has no register label", c.bits()))?;
        labels.push(label);
    }
    let mut sums = vec![&ops.t_down];
    sums.extend(&ops.n_site);
    Ok(sums
        .into_iter()
        .map(|o| eigenvalues(&restrict(&o.to_dense(), |b| labels.contains(&b))))
        .collect())
}

/// Largest eigenvalue mismatch between encoded and brute-force spectra.
pub fn spectral_error(params: &HubbardParams, ops: &HubbardOperators) -> Result<f64> {
    let want = fock_sector_spectra(params)?;
    let got = encoded_sector_spectra(params, ops)?;
    Ok(want.iter().zip(&got).map(|(a, b)| max_gap(a, b)).fold(0.0, f64::max))
}

fn random_pauli_sum<R: Rng>(qubits: usize, terms: usize, rng: &mut R) -> Result<PauliSum> {
    let mut o = PauliSum::zero(qubits);
    for _ in 0..terms {
        let letters: String = (0..qubits).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
        let coef = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        o.add_term(PauliString::from_letters(&letters)?, coef);
    }
    Ok(o)
}

/// Largest `|ancilla estimate − ⟨Ψ(θ_b)|O|Ψ(θ_a)⟩|` over random triples.
pub fn bracket_error(spec: &AnsatzSpec, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..spec.param_count())
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect()
    };
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (ta, tb) = (angles(&mut rng), angles(&mut rng));
        let terms = rng.random_range(1..=6);
        let o = random_pauli_sum(spec.data_qubits, terms, &mut rng)?;
        let est = offdiag_bracket(spec, &ta, &tb, &o)?;
        let direct = direct_bracket(&ansatz_state(spec, &tb)?, &o, &ansatz_state(spec, &ta)?)?;
        worst = worst.max((est - direct).norm());
    }
    Ok(worst)
}

/// Max-abs entry of `Σ_groups Σ_terms dense(A·B) − dense(H)`.
pub fn reassembly_error(h: &FermionHamiltonian, set_a: u64) -> Result<f64> {
    let s = split(h, set_a)?;
    let n = h.mode_count;
    let mut sum = DMatrix::zeros(1 << n, 1 << n);
    for (_, term) in s.iter() {
        sum += operator_dense(&term.recombined(), n)?;
    }
    let diff = sum - hamiltonian_dense(h)?;
    Ok(diff.iter().map(|x| x.norm()).fold(0.0, f64::max))
}

/// `|E(embedded ED state) − E_ED|`.
pub fn embedding_error(params: &HubbardParams, factors: &ClassicalFactors, ops: &HubbardOperators) -> Result<f64> {
    let ground = exact_ground(params)?;
    let (alpha, states) = embed_ground_state(&ground, ops)?;
    let e = energy_from_states(&alpha, states, factors, ops, SimMode::Exact)?;
    Ok((e.total - ground.energy).abs())
}

/// Inputs shared by the checks, built once from a config. Fields are
/// public so a caller can swap in a modified operator set.
#[derive(Debug, Clone)]
pub struct Verifier {
    pub cfg: RunConfig,
    pub params: HubbardParams,
    /// Spin split only.
    pub ops: Option<HubbardOperators>,
    pub factors: Option<ClassicalFactors>,
}

impl Verifier {
    /// Checks run at the sweep value of largest magnitude.
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let u = cfg.sweep.iter().copied().fold(0.0, |m: f64, u| if u.abs() > m.abs() { u } else { m });
        let params = cfg.params(u);
        let (ops, factors) = match cfg.method.split {
            SplitKind::Spin => {
                let m = &cfg.method;
                let ops = HubbardOperators::build(&params, m.encoding.into(), m.fix_n_down, m.pad_energy)?;
                (Some(ops), Some(compute_factors(&params)?))
            }
            SplitKind::Custom => (None, None),
        };
        Ok(Self {
            cfg: cfg.clone(),
            params,
            ops,
            factors,
        })
    }

    fn counting(&self) -> Check {
        let l = self.params.sites;
        match (&self.ops, &self.factors) {
            (Some(ops), Some(f)) => {
                let lambda = f.block_count();
                let mut ok = lambda as u64 == binomial(l, self.params.n_up) && ops.total_qubits() == ops.qubits + 1;
                if ops.kind == EncodingKind::Compact {
                    ok &= ops.qubits == compact_qubits(binomial(l, self.params.n_down) as usize);
                }
                check(
                    "counting",
                    ok,
                    format!(
                        "Λ = {lambda}, Q = {} ({} data + 1 ancilla)",
                        ops.total_qubits(),
                        ops.qubits
                    ),
                )
            }
            _ => {
                let a = self.cfg.set_a_mask().count_ones();
                let b = 2 * l as u32 - a;
                check(
                    "counting",
                    true,
                    format!("Λ = {}, Q = {} ({b} data + 1 ancilla)", 1u64 << a, b + 1),
                )
            }
        }
    }

    fn encoding(&self) -> Result<Check> {
        let Some(ops) = &self.ops else {
            return Ok(check("encoding", true, "skipped: custom split encodes modes directly".into()));
        };
        let err = match spectral_error(&self.params, ops) {
            Ok(e) => e,
            Err(e) => return Ok(check("encoding", false, format!("{e:#}"))),
        };
        Ok(check(
            "encoding",
            err < SPECTRUM_TOL,
            format!(
                "{} sector spectra of T↓ and n_i↓ match, max deviation {err:.3e}",
                ops.kind.name()
            ),
        ))
    }

    fn data_qubits(&self) -> usize {
        match &self.ops {
            Some(ops) => ops.qubits,
            None => 2 * self.params.sites - self.cfg.set_a_mask().count_ones() as usize,
        }
    }

    fn bracket(&self) -> Result<Check> {
        let spec = self.cfg.ansatz(self.data_qubits());
        let err = bracket_error(&spec, BRACKET_TRIALS, self.cfg.method.seed)?;
        Ok(check(
            "bracket",
            err < BRACKET_TOL,
            format!("{BRACKET_TRIALS} random triples, max |ancilla − direct| {err:.3e}"),
        ))
    }

    fn reassembly(&self) -> Result<Check> {
        let mut detail = Vec::new();
        let mut ok = true;
        if 2 * self.params.sites <= MAX_DENSE_MODES {
            let h = build_hubbard(&self.params)?;
            let err = reassembly_error(&h, self.cfg.set_a_mask())?;
            ok &= err < REASSEMBLY_TOL;
            detail.push(format!("six term groups rebuild H, max deviation {err:.3e}"));
        } else {
            detail.push(format!("dense rebuild skipped above {MAX_DENSE_MODES} modes"));
        }
        if let (Some(ops), Some(f)) = (&self.ops, &self.factors) {
            let spec = self.cfg.ansatz(ops.qubits);
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.method.seed);
            let vs = VariationalState::random(f.block_count(), &spec, 1.0, &mut rng);
            let e = energy(&vs, &spec, f, ops, SimMode::Exact)?;
            let gap = (e.parts_sum() - e.total).abs();
            ok &= gap < REASSEMBLY_TOL * e.total.abs().max(1.0);
            detail.push(format!("energy parts sum to total within {gap:.3e}"));
        }
        Ok(check("reassembly", ok, detail.join("; ")))
    }

    fn embedding(&self) -> Result<Check> {
        let (Some(ops), Some(f)) = (&self.ops, &self.factors) else {
            return Ok(check("embedding", true, "skipped: custom split".into()));
        };
        let err = match embedding_error(&self.params, f, ops) {
            Ok(e) => e,
            Err(e) => return Ok(check("embedding", false, format!("{e:#}"))),
        };
        Ok(check(
            "embedding",
            err < EMBEDDING_TOL,
            format!("exact ground state through the block assembly, |ΔE| {err:.3e}"),
        ))
    }

    pub fn run(&self) -> Result<Vec<Check>> {
        if let Some(ops) = &self.ops {
            if let Err(e) = ops.validate() {
                return Ok(vec![check("operators", false, e.to_string())]);
            }
        }
        Ok(vec![
            self.counting(),
            self.encoding()?,
            self.bracket()?,
            self.reassembly()?,
            self.embedding()?,
        ])
    }
}

/// Build and run all checks for `cfg`.
pub fn verify(cfg: &RunConfig) -> Result<Vec<Check>> {
    Verifier::new(cfg)?.run()
}
