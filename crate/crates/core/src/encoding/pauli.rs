//! Pauli strings in symplectic form and weighted sums of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{usage, Error, Result};

/// Coefficients with modulus below this are dropped.
pub const COEFF_TOL: f64 = 1e-12;

/// Largest register a dense decomposition accepts.
pub const MAX_DECOMPOSE_QUBITS: usize = 12;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `i^k`.
#[inline]
pub fn i_pow(k: u32) -> Complex64 {
    I_POW[(k % 4) as usize]
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Tensor product of Pauli letters. Bit `q` of `x`/`z` marks an X/Z factor
/// on qubit `q`; both bits together mean Y (not `XZ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn single(qubit: usize, letter: Letter) -> Self {
        let (x, z) = letter.bits();
        PauliString {
            x: u64::from(x) << qubit,
            z: u64::from(z) << qubit,
        }
    }

    /// Z on every qubit of `mask`.
    pub fn z_mask(mask: u64) -> Self {
        PauliString { x: 0, z: mask }
    }

    /// X on every qubit of `mask`.
    pub fn x_mask(mask: u64) -> Self {
        PauliString { x: mask, z: 0 }
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        match (self.x >> qubit & 1, self.z >> qubit & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    /// Qubits acted on nontrivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Number of Y factors; `P = i^{#Y} X^x Z^z`.
    #[inline]
    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `self · other = i^k · product`; returns `(k mod 4, product)`.
    pub fn mul(&self, other: &PauliString) -> (u32, PauliString) {
        let prod = PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        // i^{a1} X^x1 Z^z1 · i^{a2} X^x2 Z^z2 = i^{a1+a2} (-1)^{|z1 & x2|} X^x3 Z^z3
        let swap = 2 * (self.z & other.x).count_ones();
        let k = self.y_count() + other.y_count() + swap + 4 * 64 - prod.y_count();
        (k % 4, prod)
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩`.
    #[inline]
    pub fn act(&self, basis: usize) -> (Complex64, usize) {
        let b = basis as u64;
        let minus = (self.z & b).count_ones() % 2;
        let phase = i_pow(self.y_count() + 2 * minus);
        (phase, (b ^ self.x) as usize)
    }

    /// Real eigenvalue of a diagonal string on basis state `b`.
    #[inline]
    pub fn diagonal_sign(&self, basis: usize) -> f64 {
        if (self.z & basis as u64).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Place this string on qubits shifted up by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        PauliString {
            x: self.x << offset,
            z: self.z << offset,
        }
    }

    pub fn to_letters(&self, qubits: usize) -> String {
        (0..qubits).map(|q| self.letter(q).as_char()).collect()
    }

    pub fn from_letters(s: &str) -> Result<Self> {
        let mut p = PauliString::IDENTITY;
        for (q, ch) in s.chars().enumerate() {
            let letter = match ch {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => return Err(usage!("invalid Pauli letter {other:?}")),
            };
            if q >= 64 {
                return Err(usage!("Pauli string longer than 64 qubits"));
            }
            let s = PauliString::single(q, letter);
            p.x |= s.x;
            p.z |= s.z;
        }
        Ok(p)
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn to_dense(&self, qubits: usize) -> DMatrix<Complex64> {
        let dim = 1usize << qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (phase, row) = self.act(col);
            m[(row, col)] = phase;
        }
        m
    }
}

/// `Σ_k c_k P_k` on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    qubit_count: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(qubit_count: usize) -> Self {
        Self::term(qubit_count, PauliString::IDENTITY, Complex64::new(1.0, 0.0))
    }

    pub fn term(qubit_count: usize, p: PauliString, coef: Complex64) -> Self {
        let mut s = Self::zero(qubit_count);
        s.add_term(p, coef);
        s
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Accumulate `coef · p`; entries that cancel below [`COEFF_TOL`] are
    /// removed.
    pub fn add_term(&mut self, p: PauliString, coef: Complex64) {
        debug_assert!(
            self.qubit_count >= 64 || p.support() >> self.qubit_count == 0,
            "Pauli string outside register"
        );
        let entry = self.terms.entry(p).or_default();
        *entry += coef;
        if entry.norm() < COEFF_TOL {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = Self::zero(self.qubit_count);
        for (p, c) in &self.terms {
            out.add_term(*p, c * factor);
        }
        out
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = Self::zero(self.qubit_count);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (k, r) = p.mul(q);
                out.add_term(r, a * b * i_pow(k));
            }
        }
        Ok(out)
    }

    /// Hermitian adjoint: every Pauli string is Hermitian, so only the
    /// coefficients are conjugated.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            qubit_count: self.qubit_count,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Largest support among the terms.
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    /// Tensor with `letter` on a new top qubit.
    pub fn with_ancilla(&self, letter: Letter) -> PauliSum {
        let anc = PauliString::single(self.qubit_count, letter);
        PauliSum {
            qubit_count: self.qubit_count + 1,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| {
                    (
                        PauliString {
                            x: p.x | anc.x,
                            z: p.z | anc.z,
                        },
                        *c,
                    )
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.qubit_count;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for col in 0..dim {
                let (phase, row) = p.act(col);
                m[(row, col)] += c * phase;
            }
        }
        m
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.qubit_count != other.qubit_count {
            return Err(usage!(
                "qubit count mismatch: {} vs {}",
                self.qubit_count,
                other.qubit_count
            ));
        }
        Ok(())
    }
}

fn fmt_coef(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{:+.5}", c.re)
    } else {
        format!("{:+.5}{:+.5}i", c.re, c.im)
    }
}

/// One term per line, `±c.ccccc LETTERS` with qubit 0 leftmost; complex
/// coefficients carry an `±d.ddddd i` suffix.
impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.terms {
            writeln!(f, "{} {}", fmt_coef(c), p.to_letters(self.qubit_count))?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) format. The qubit count is the
    /// letter-string length, which must agree across lines; an empty input
    /// parses to a zero-qubit zero sum.
    fn from_str(s: &str) -> Result<Self> {
        let mut out: Option<PauliSum> = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (coef, letters) = line
                .split_once(' ')
                .ok_or_else(|| usage!("malformed Pauli line {line:?}"))?;
            let c = parse_coef(coef)?;
            let p = PauliString::from_letters(letters.trim())?;
            let n = letters.trim().len();
            let sum = out.get_or_insert_with(|| PauliSum::zero(n));
            if sum.qubit_count != n {
                return Err(usage!("inconsistent qubit counts in Pauli text"));
            }
            sum.add_term(p, c);
        }
        Ok(out.unwrap_or_else(|| PauliSum::zero(0)))
    }
}

fn parse_coef(s: &str) -> Result<Complex64> {
    let bad = || usage!("malformed coefficient {s:?}");
    if let Some(body) = s.strip_suffix('i') {
        // split at the sign that starts the imaginary part
        let pos = body
            .char_indices()
            .skip(1)
            .filter(|&(i, ch)| (ch == '+' || ch == '-') && !body[..i].ends_with(['e', 'E']))
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let re = body[..pos].parse::<f64>().map_err(|_| bad())?;
        let im = body[pos..].parse::<f64>().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

/// Pauli coefficients `tr(P m) / 2^Q` of a dense `2^Q × 2^Q` matrix.
pub fn pauli_decompose(m: &DMatrix<Complex64>) -> Result<PauliSum> {
    let dim = m.nrows();
    if dim != m.ncols() {
        return Err(usage!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
    }
    if dim == 0 || !dim.is_power_of_two() {
        return Err(usage!("dimension {dim} is not a power of two"));
    }
    let q = dim.trailing_zeros() as usize;
    if q > MAX_DECOMPOSE_QUBITS {
        return Err(Error::Capacity(format!(
            "dense decomposition limited to {MAX_DECOMPOSE_QUBITS} qubits, got {q}"
        )));
    }
    let norm = 1.0 / dim as f64;
    let mut out = PauliSum::zero(q);
    for x in 0..dim as u64 {
        for z in 0..dim as u64 {
            let p = PauliString { x, z };
            // tr(P m) = Σ_col ⟨col|P m|col⟩ = Σ_col Σ_row P[col,row] m[row,col]
            // with P|row⟩ = phase |row ⊕ x⟩, i.e. row = col ⊕ x.
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..dim {
                let row = col ^ x as usize;
                let (phase, image) = p.act(row);
                debug_assert_eq!(image, col);
                acc += phase * m[(row, col)];
            }
            out.add_term(p, acc * norm);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters() -> [Letter; 4] {
        [Letter::I, Letter::X, Letter::Y, Letter::Z]
    }

    fn max_abs(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn single_dense(l: Letter) -> DMatrix<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match l {
            Letter::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            Letter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Letter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Letter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    /// Two-qubit string as an explicit Kronecker product (qubit 1 is the
    /// high bit of the basis index).
    fn kron2(q0: Letter, q1: Letter) -> DMatrix<Complex64> {
        single_dense(q1).kronecker(&single_dense(q0))
    }

    #[test]
    fn products_match_dense_for_all_two_qubit_pairs() {
        for a0 in letters() {
            for a1 in letters() {
                for b0 in letters() {
                    for b1 in letters() {
                        let pa = PauliString::from_letters(&format!(
                            "{}{}",
                            a0.as_char(),
                            a1.as_char()
                        ))
                        .unwrap();
                        let pb = PauliString::from_letters(&format!(
                            "{}{}",
                            b0.as_char(),
                            b1.as_char()
                        ))
                        .unwrap();
                        assert!(max_abs(&pa.to_dense(2), &kron2(a0, a1)) == 0.0);
                        let (k, pc) = pa.mul(&pb);
                        let lhs = pc.to_dense(2) * i_pow(k);
                        let rhs = kron2(a0, a1) * kron2(b0, b1);
                        assert!(max_abs(&lhs, &rhs) < 1e-15, "{a0:?}{a1:?} * {b0:?}{b1:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        let s = pauli_decompose(&id).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&PauliString::IDENTITY), Complex64::new(1.0, 0.0));

        let z = single_dense(Letter::Z);
        let s = pauli_decompose(&z).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s.coefficient(&PauliString::single(0, Letter::Z)),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn decompose_rejects_bad_shapes() {
        let m = DMatrix::<Complex64>::zeros(3, 3);
        assert!(pauli_decompose(&m).is_err());
        let m = DMatrix::<Complex64>::zeros(2, 4);
        assert!(pauli_decompose(&m).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut s = PauliSum::zero(3);
        s.add_term(PauliString::from_letters("XIZ").unwrap(), Complex64::new(0.5, 0.0));
        s.add_term(PauliString::from_letters("YYI").unwrap(), Complex64::new(-0.25, 0.0));
        s.add_term(PauliString::from_letters("IZI").unwrap(), Complex64::new(0.125, -0.5));
        let text = s.to_string();
        assert!(text.contains("+0.50000 XIZ"));
        assert!(text.contains("-0.25000 YYI"));
        assert!(text.contains("+0.12500-0.50000i IZI"));
        let back: PauliSum = text.parse().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn small_coefficients_are_dropped() {
        let mut s = PauliSum::identity(1);
        s.add_term(PauliString::IDENTITY, Complex64::new(-1.0 + 1e-14, 0.0));
        assert!(s.is_empty());
    }

    #[test]
    fn ancilla_extension() {
        let s = PauliSum::term(2, PauliString::from_letters("ZX").unwrap(), Complex64::new(1.0, 0.0));
        let a = s.with_ancilla(Letter::Y);
        assert_eq!(a.qubit_count(), 3);
        assert_eq!(
            a.coefficient(&PauliString::from_letters("ZXY").unwrap()),
            Complex64::new(1.0, 0.0)
        );
    }
}
