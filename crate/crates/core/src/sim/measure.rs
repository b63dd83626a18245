//! Expectation values, ancilla brackets and shot sampling.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ansatz::{controlled_ansatz_state, AnsatzSpec};
use super::statevector::Statevector;
use crate::encoding::{Letter, PauliString, PauliSum};
use crate::error::{usage, Result};

/// Imaginary residue tolerated when a Hermitian expectation is reduced to
/// a real number.
pub const REAL_TOL: f64 = 1e-10;

fn check_size(state: &Statevector, o: &PauliSum) -> Result<()> {
    if state.qubit_count() != o.qubit_count() {
        return Err(usage!(
            "operator on {} qubits applied to a {}-qubit state",
            o.qubit_count(),
            state.qubit_count()
        ));
    }
    Ok(())
}

/// `⟨ψ|P|ψ⟩` (always real for a Pauli string).
pub fn pauli_expectation(state: &Statevector, p: &PauliString) -> f64 {
    let amps = state.amplitudes();
    if p.is_diagonal() {
        return amps
            .iter()
            .enumerate()
            .map(|(b, a)| p.diagonal_sign(b) * a.norm_sqr())
            .sum();
    }
    amps.iter()
        .enumerate()
        .map(|(b, a)| {
            let (phase, image) = p.act(b);
            (amps[image].conj() * phase * a).re
        })
        .sum()
}

/// `Σ c_k ⟨ψ|P_k|ψ⟩` for any (not necessarily Hermitian) Pauli sum.
pub fn expect_complex(state: &Statevector, o: &PauliSum) -> Result<Complex64> {
    check_size(state, o)?;
    Ok(o.terms()
        .map(|(p, c)| c * pauli_expectation(state, p))
        .sum())
}

/// `⟨ψ|O|ψ⟩` for Hermitian `O`.
pub fn expect(state: &Statevector, o: &PauliSum) -> Result<f64> {
    if !o.is_hermitian(REAL_TOL) {
        return Err(usage!("expect needs a Hermitian operator"));
    }
    let v = expect_complex(state, o)?;
    debug_assert!(v.im.abs() < REAL_TOL);
    Ok(v.re)
}

/// `⟨bra|O|ket⟩` computed directly from the two states.
pub fn direct_bracket(bra: &Statevector, o: &PauliSum, ket: &Statevector) -> Result<Complex64> {
    check_size(ket, o)?;
    check_size(bra, o)?;
    let b = bra.amplitudes();
    let k = ket.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, c) in o.terms() {
        let mut term = Complex64::new(0.0, 0.0);
        for (idx, a) in k.iter().enumerate() {
            let (phase, image) = p.act(idx);
            term += b[image].conj() * phase * a;
        }
        acc += c * term;
    }
    Ok(acc)
}

/// `⟨(X − iY) ⊗ O⟩` on a state whose top qubit is the ancilla. For
/// `(|0;a⟩ + |1;b⟩)/√2` this equals `⟨b|O|a⟩`, since `X − iY = 2|1⟩⟨0|`.
pub fn ancilla_bracket(state: &Statevector, o: &PauliSum) -> Result<Complex64> {
    let n = o.qubit_count();
    if state.qubit_count() != n + 1 {
        return Err(usage!(
            "ancilla bracket needs a {}-qubit state, got {}",
            n + 1,
            state.qubit_count()
        ));
    }
    let ax = PauliString::single(n, Letter::X);
    let ay = PauliString::single(n, Letter::Y);
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, c) in o.terms() {
        let px = PauliString { x: p.x | ax.x, z: p.z };
        let py = PauliString {
            x: p.x | ay.x,
            z: p.z | ay.z,
        };
        let mx = pauli_expectation(state, &px);
        let my = pauli_expectation(state, &py);
        acc += c * Complex64::new(mx, -my);
    }
    Ok(acc)
}

/// `⟨U(θ_b)0|O|U(θ_a)0⟩` through the ancilla estimator.
pub fn offdiag_bracket(spec: &AnsatzSpec, theta_a: &[f64], theta_b: &[f64], o: &PauliSum) -> Result<Complex64> {
    if o.qubit_count() != spec.data_qubits {
        return Err(usage!(
            "operator on {} qubits, ansatz has {} data qubits",
            o.qubit_count(),
            spec.data_qubits
        ));
    }
    let state = controlled_ansatz_state(spec, theta_a, theta_b)?;
    ancilla_bracket(&state, o)
}

/// Deterministic RNG for stream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample mean of the ±1 outcome of measuring `p` `shots` times.
pub fn sample_pauli<R: Rng + ?Sized>(state: &Statevector, p: &PauliString, shots: u64, rng: &mut R) -> f64 {
    if p.support() == 0 {
        return 1.0;
    }
    let mut rotated = state.clone();
    for q in 0..state.qubit_count() {
        match p.letter(q) {
            Letter::X => rotated.h(q),
            Letter::Y => {
                rotated
                    .apply(super::Gate::Sdg, &[q])
                    .expect("qubit in range");
                rotated.h(q);
            }
            _ => {}
        }
    }
    let mut cumulative = Vec::with_capacity(rotated.amplitudes().len());
    let mut acc = 0.0;
    for a in rotated.amplitudes() {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let support = p.support();
    let mut total: i64 = 0;
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        total += if (idx as u64 & support).count_ones().is_multiple_of(2) { 1 } else { -1 };
    }
    total as f64 / shots as f64
}

/// Sampled value of a complex linear combination of Pauli expectations,
/// with the variances of its real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: Complex64,
    pub var_re: f64,
    pub var_im: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            var_re: 0.0,
            var_im: 0.0,
        }
    }

    /// Add `coef · m` where `m` is a ±1 sample mean of `shots` outcomes;
    /// binomial variance `(1 − m²)/shots`.
    fn push(&mut self, coef: Complex64, m: f64, shots: u64) {
        let v = (1.0 - m * m).max(0.0) / shots as f64;
        self.value += coef * m;
        self.var_re += coef.re * coef.re * v;
        self.var_im += coef.im * coef.im * v;
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(usage!("shot count must be positive"));
    }
    Ok(())
}

/// Shot estimate of `Σ c_k ⟨P_k⟩`.
pub fn sample_expect_estimate<R: Rng + ?Sized>(
    state: &Statevector,
    o: &PauliSum,
    shots: u64,
    rng: &mut R,
) -> Result<Estimate> {
    check_size(state, o)?;
    check_shots(shots)?;
    let mut est = Estimate::default();
    for (p, c) in o.terms() {
        if p.support() == 0 {
            est.value += c;
            continue;
        }
        est.push(*c, sample_pauli(state, p, shots, rng), shots);
    }
    Ok(est)
}

/// Shot estimate of the ancilla bracket `⟨(X − iY) ⊗ O⟩`.
pub fn sample_ancilla_bracket<R: Rng + ?Sized>(
    state: &Statevector,
    o: &PauliSum,
    shots: u64,
    rng: &mut R,
) -> Result<Estimate> {
    let n = o.qubit_count();
    if state.qubit_count() != n + 1 {
        return Err(usage!(
            "ancilla bracket needs a {}-qubit state, got {}",
            n + 1,
            state.qubit_count()
        ));
    }
    check_shots(shots)?;
    let ax = PauliString::single(n, Letter::X);
    let ay = PauliString::single(n, Letter::Y);
    let mut est = Estimate::default();
    let minus_i = Complex64::new(0.0, -1.0);
    for (p, c) in o.terms() {
        let px = PauliString { x: p.x | ax.x, z: p.z };
        let py = PauliString {
            x: p.x | ay.x,
            z: p.z | ay.z,
        };
        let mx = sample_pauli(state, &px, shots, rng);
        let my = sample_pauli(state, &py, shots, rng);
        est.push(*c, mx, shots);
        est.push(c * minus_i, my, shots);
    }
    Ok(est)
}

/// Shot estimate of a Hermitian expectation, reproducible under `seed`.
pub fn sample_expect(state: &Statevector, o: &PauliSum, shots: u64, seed: u64) -> Result<f64> {
    if !o.is_hermitian(REAL_TOL) {
        return Err(usage!("sample_expect needs a Hermitian operator"));
    }
    let mut rng = stream_rng(seed, 0);
    Ok(sample_expect_estimate(state, o, shots, &mut rng)?.value.re)
}
