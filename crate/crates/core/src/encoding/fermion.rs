//! Fermion-to-qubit encodings.
//!
//! Parity and Bravyi–Kitaev are handled as binary linear encodings: qubit
//! `i` stores `b_i = Σ_j β_ij n_j mod 2`. For such an encoding
//!
//! ```text
//! c_j = X_{S(j)} · ½(1 − Z_{F(j)}) · Z_{P(j)}
//! ```
//!
//! where `S(j)` (column `j` of `β`, the update set plus `j`) is flipped by
//! the operator, `F(j)` is the set of qubits whose parity equals `n_j`
//! (the flip set plus `j`), and `P(j)` is the set whose parity equals
//! `Σ_{k<j} n_k`. Jordan–Wigner is the identity encoding and is also
//! written out directly.

use num_complex::Complex64;

use super::pauli::{Letter, PauliString, PauliSum};
use crate::error::{usage, Result};
use crate::fock::{LadderOp, OperatorString};

/// Which fermion-to-qubit map to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    JordanWigner,
    Parity,
    BravyiKitaev,
    /// Dense fixed-particle-number sector, see [`super::compact`].
    Compact,
}

impl EncodingKind {
    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::JordanWigner => "jw",
            EncodingKind::Parity => "parity",
            EncodingKind::BravyiKitaev => "bk",
            EncodingKind::Compact => "compact",
        }
    }
}

fn half() -> Complex64 {
    Complex64::new(0.5, 0.0)
}

fn check_modes(ops: &OperatorString, modes: usize) -> Result<()> {
    if modes == 0 || modes > 63 {
        return Err(usage!("encoding needs 1..=63 modes, got {modes}"));
    }
    match ops.ops().iter().find(|op| op.mode.0 >= modes) {
        Some(op) => Err(usage!("mode {} outside 0..{modes}", op.mode)),
        None => Ok(()),
    }
}

/// Multiply out `coefficient · Π ladder(op)` left to right.
fn product<F>(ops: &OperatorString, qubits: usize, mut ladder: F) -> Result<PauliSum>
where
    F: FnMut(LadderOp) -> PauliSum,
{
    let mut acc = PauliSum::term(qubits, PauliString::IDENTITY, ops.coefficient);
    for &op in ops.ops() {
        acc = acc.mul(&ladder(op))?;
    }
    Ok(acc)
}

/// `c_i ↦ ½(X_i + iY_i) Π_{j<i} Z_j`, `c†_i ↦ ½(X_i − iY_i) Π_{j<i} Z_j`.
pub fn jordan_wigner_ladder(op: LadderOp, modes: usize) -> PauliSum {
    let i = op.mode.0;
    let zs = (1u64 << i) - 1;
    let x = PauliString::single(i, Letter::X);
    let y = PauliString::single(i, Letter::Y);
    let with_z = |p: PauliString| PauliString { x: p.x, z: p.z | zs };
    let im = if op.dagger { -0.5 } else { 0.5 };
    let mut s = PauliSum::zero(modes);
    s.add_term(with_z(x), half());
    s.add_term(with_z(y), Complex64::new(0.0, im));
    s
}

/// Jordan–Wigner image of an operator string on `modes` qubits.
pub fn jordan_wigner(ops: &OperatorString, modes: usize) -> Result<PauliSum> {
    check_modes(ops, modes)?;
    product(ops, modes, |op| jordan_wigner_ladder(op, modes))
}

/// A binary linear encoding `b = β n (mod 2)`, rows stored as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEncoding {
    modes: usize,
    /// `beta[i]` has bit `j` set when qubit `i` stores `n_j`.
    beta: Vec<u64>,
    /// Rows of `β⁻¹`: `inverse[j]` lists the qubits whose parity is `n_j`.
    inverse: Vec<u64>,
}

impl LinearEncoding {
    pub fn from_rows(beta: Vec<u64>) -> Result<Self> {
        let inverse = invert_gf2(&beta).ok_or_else(|| usage!("encoding matrix is singular"))?;
        Ok(Self {
            modes: beta.len(),
            beta,
            inverse,
        })
    }

    pub fn jordan_wigner(modes: usize) -> Self {
        Self::from_rows((0..modes).map(|i| 1u64 << i).collect()).expect("identity")
    }

    /// Qubit `i` stores `n_0 ⊕ … ⊕ n_i`; the top qubit holds the total parity.
    pub fn parity(modes: usize) -> Self {
        Self::from_rows((0..modes).map(|i| (1u64 << (i + 1)) - 1).collect()).expect("triangular")
    }

    /// Fenwick-tree Bravyi–Kitaev: qubit `i` stores the modes
    /// `i + 1 − lowbit(i + 1) ..= i`. The top qubit holds the total parity
    /// exactly when `modes` is a power of two.
    pub fn bravyi_kitaev(modes: usize) -> Self {
        let rows = (0..modes)
            .map(|i| {
                let k = i + 1;
                let low = k & k.wrapping_neg();
                let start = k - low;
                ((1u64 << (i + 1)) - 1) & !((1u64 << start) - 1)
            })
            .collect();
        Self::from_rows(rows).expect("triangular")
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Qubits other than `j` that change when `n_j` flips.
    pub fn update_set(&self, j: usize) -> u64 {
        self.column(j) & !(1 << j)
    }

    /// Qubits other than `j` whose parity, together with qubit `j`, gives `n_j`.
    pub fn flip_set(&self, j: usize) -> u64 {
        self.inverse[j] & !(1 << j)
    }

    /// Qubits whose parity is `n_0 ⊕ … ⊕ n_{j-1}`.
    pub fn parity_set(&self, j: usize) -> u64 {
        let below = (1u64 << j) - 1;
        // row j of (strictly-lower ones) · β⁻¹
        self.inverse
            .iter()
            .enumerate()
            .filter(|(k, _)| below >> k & 1 == 1)
            .fold(0, |acc, (_, row)| acc ^ row)
    }

    fn column(&self, j: usize) -> u64 {
        self.beta
            .iter()
            .enumerate()
            .filter(|(_, row)| *row >> j & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Qubit basis index of an occupation pattern.
    pub fn encode_bits(&self, occupation: u64) -> u64 {
        self.beta
            .iter()
            .enumerate()
            .fold(0, |acc, (i, row)| acc | u64::from((row & occupation).count_ones() % 2) << i)
    }

    /// Occupation pattern of a qubit basis index.
    pub fn decode_bits(&self, qubits: u64) -> u64 {
        self.inverse
            .iter()
            .enumerate()
            .fold(0, |acc, (j, row)| acc | u64::from((row & qubits).count_ones() % 2) << j)
    }

    /// Image of a single ladder operator.
    pub fn ladder(&self, op: LadderOp) -> PauliSum {
        let j = op.mode.0;
        let n = self.modes;
        let flip = PauliSum::term(n, PauliString::x_mask(self.column(j)), Complex64::new(1.0, 0.0));
        let mut project = PauliSum::term(n, PauliString::IDENTITY, half());
        project.add_term(PauliString::z_mask(self.inverse[j]), -half());
        let sign = PauliSum::term(
            n,
            PauliString::z_mask(self.parity_set(j)),
            Complex64::new(1.0, 0.0),
        );
        let annihilate = flip
            .mul(&project)
            .and_then(|s| s.mul(&sign))
            .expect("same register");
        if op.dagger {
            annihilate.adjoint()
        } else {
            annihilate
        }
    }

    /// Image of an operator string, without qubit removal.
    pub fn encode(&self, ops: &OperatorString) -> Result<PauliSum> {
        check_modes(ops, self.modes)?;
        product(ops, self.modes, |op| self.ladder(op))
    }

    /// True when the top qubit stores the total parity.
    pub fn top_qubit_is_total_parity(&self) -> bool {
        self.modes > 0 && self.beta[self.modes - 1] == (1u64 << self.modes) - 1
    }
}

/// Gauss–Jordan inverse over GF(2) of a square matrix given as row masks.
fn invert_gf2(rows: &[u64]) -> Option<Vec<u64>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

/// Drop the top qubit, which must hold the conserved total parity: its `Z`
/// becomes the scalar `fixed_parity`, its `I` stays.
pub fn remove_parity_qubit(sum: &PauliSum, fixed_parity: i8) -> Result<PauliSum> {
    if fixed_parity != 1 && fixed_parity != -1 {
        return Err(usage!("fixed parity must be +1 or -1, got {fixed_parity}"));
    }
    let n = sum.qubit_count();
    if n == 0 {
        return Err(usage!("no qubit to remove"));
    }
    let top = n - 1;
    let mask = (1u64 << top) - 1;
    let mut out = PauliSum::zero(top);
    for (p, c) in sum.terms() {
        let coef = match p.letter(top) {
            Letter::I => *c,
            Letter::Z => c * f64::from(fixed_parity),
            Letter::X | Letter::Y => {
                return Err(usage!("operator flips the total parity; cannot remove its qubit"))
            }
        };
        out.add_term(
            PauliString {
                x: p.x & mask,
                z: p.z & mask,
            },
            coef,
        );
    }
    Ok(out)
}

fn check_parity_conserving(ops: &OperatorString) -> Result<()> {
    if ops.len() % 2 == 1 {
        return Err(usage!(
            "operator with {} ladder operators changes parity; the parity qubit cannot be removed",
            ops.len()
        ));
    }
    Ok(())
}

/// Parity encoding with the total-parity qubit (the top one) removed and
/// fixed to `fixed_parity = (-1)^N`. Result lives on `modes - 1` qubits.
pub fn parity_encode(ops: &OperatorString, modes: usize, fixed_parity: i8) -> Result<PauliSum> {
    check_parity_conserving(ops)?;
    let full = LinearEncoding::parity(modes).encode(ops)?;
    remove_parity_qubit(&full, fixed_parity)
}

/// Bravyi–Kitaev encoding; with `Some(parity)` the top qubit is removed,
/// which requires `modes` to be a power of two.
pub fn bravyi_kitaev(ops: &OperatorString, modes: usize, fixed_parity: Option<i8>) -> Result<PauliSum> {
    let enc = LinearEncoding::bravyi_kitaev(modes);
    match fixed_parity {
        None => enc.encode(ops),
        Some(p) => {
            if !enc.top_qubit_is_total_parity() {
                return Err(usage!(
                    "Bravyi-Kitaev top qubit holds the total parity only for power-of-two mode counts, got {modes}"
                ));
            }
            check_parity_conserving(ops)?;
            remove_parity_qubit(&enc.encode(ops)?, p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn coef(s: &PauliSum, letters: &str) -> Complex64 {
        s.coefficient(&PauliString::from_letters(letters).unwrap())
    }

    #[test]
    fn jw_number_operator() {
        let n = jordan_wigner(&OperatorString::number(2), 4).unwrap();
        assert_eq!(n.len(), 2);
        assert_eq!(coef(&n, "IIII"), Complex64::new(0.5, 0.0));
        assert_eq!(coef(&n, "IIZI"), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn jw_hopping_pair() {
        let a = jordan_wigner(&OperatorString::one_body(0, 1, one()), 2).unwrap();
        let b = jordan_wigner(&OperatorString::one_body(1, 0, one()), 2).unwrap();
        let h = a.add(&b).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(coef(&h, "XX"), Complex64::new(0.5, 0.0));
        assert_eq!(coef(&h, "YY"), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn jw_single_annihilator() {
        let ops = OperatorString::new(vec![LadderOp::annihilate(0)], one()).unwrap();
        let c = jordan_wigner(&ops, 1).unwrap();
        assert_eq!(coef(&c, "X"), Complex64::new(0.5, 0.0));
        assert_eq!(coef(&c, "Y"), Complex64::new(0.0, 0.5));
    }

    #[test]
    fn generic_identity_encoding_is_jw() {
        let enc = LinearEncoding::jordan_wigner(5);
        for j in 0..5 {
            for dagger in [true, false] {
                let op = LadderOp {
                    dagger,
                    mode: crate::fock::ModeIndex(j),
                };
                assert_eq!(enc.ladder(op), jordan_wigner_ladder(op, 5));
            }
        }
    }

    #[test]
    fn parity_ladder_matches_closed_form() {
        // c_j = ½(Z_{j-1} X_j + i Y_j) Π_{k>j} X_k
        let l = 5;
        let enc = LinearEncoding::parity(l);
        for j in 0..l {
            let above: u64 = ((1u64 << l) - 1) & !((1u64 << (j + 1)) - 1);
            let mut expected = PauliSum::zero(l);
            let zx = PauliString {
                x: (1 << j) | above,
                z: if j > 0 { 1 << (j - 1) } else { 0 },
            };
            let y = PauliString {
                x: (1 << j) | above,
                z: 1 << j,
            };
            expected.add_term(zx, half());
            expected.add_term(y, Complex64::new(0.0, 0.5));
            let op = LadderOp::annihilate(j);
            assert_eq!(enc.ladder(op), expected, "mode {j}");
        }
    }

    #[test]
    fn parity_number_uses_two_qubits() {
        let n = parity_encode(&OperatorString::number(2), 4, 1).unwrap();
        // ½(1 − Z_1 Z_2)
        assert_eq!(n.len(), 2);
        assert_eq!(coef(&n, "IZZ"), Complex64::new(-0.5, 0.0));
        assert_eq!(n.qubit_count(), 3);
    }

    #[test]
    fn parity_boundary_hop_is_long() {
        let l = 6;
        let full = LinearEncoding::parity(l)
            .encode(&OperatorString::one_body(l - 1, 0, one()))
            .unwrap();
        assert!(full.max_weight() as usize >= l - 1);
    }

    #[test]
    fn identity_after_removal() {
        let id = OperatorString::identity(one());
        let s = parity_encode(&id, 4, -1).unwrap();
        assert_eq!(s, PauliSum::identity(3));
    }

    #[test]
    fn parity_violation_is_rejected() {
        let c = OperatorString::new(vec![LadderOp::annihilate(1)], one()).unwrap();
        assert!(parity_encode(&c, 4, 1).is_err());
        assert!(bravyi_kitaev(&c, 4, Some(1)).is_err());
        assert!(bravyi_kitaev(&c, 4, None).is_ok());
    }

    #[test]
    fn bk_removal_needs_power_of_two() {
        let n = OperatorString::number(0);
        assert!(bravyi_kitaev(&n, 6, Some(1)).is_err());
        assert!(bravyi_kitaev(&n, 8, Some(1)).is_ok());
        assert!(bravyi_kitaev(&n, 6, None).is_ok());
    }

    #[test]
    fn bk_known_sets_for_eight_modes() {
        let enc = LinearEncoding::bravyi_kitaev(8);
        // Seeley–Richard–Love tables for n = 8, indices from 0.
        assert_eq!(enc.update_set(0), 0b1000_1010);
        assert_eq!(enc.update_set(2), 0b1000_1000);
        assert_eq!(enc.update_set(7), 0);
        assert_eq!(enc.parity_set(0), 0);
        assert_eq!(enc.parity_set(4), 0b0000_1000);
        assert_eq!(enc.parity_set(7), 0b0100_1000 | 0b0010_0000);
        assert_eq!(enc.flip_set(3), 0b0000_0110);
        assert_eq!(enc.flip_set(7), 0b0110_1000);
        assert!(enc.top_qubit_is_total_parity());
    }

    #[test]
    fn bk_number_operator_is_logarithmic() {
        for l in [4usize, 8, 16, 32] {
            let enc = LinearEncoding::bravyi_kitaev(l);
            let worst = (0..l)
                .map(|j| enc.encode(&OperatorString::number(j)).unwrap().max_weight())
                .max()
                .unwrap();
            let log = (l as f64).log2() as u32;
            assert!(worst <= log + 1, "L={l}: weight {worst}");
        }
    }

    #[test]
    fn single_mode_encodings_coincide() {
        let ops = OperatorString::new(vec![LadderOp::annihilate(0)], one()).unwrap();
        let jw = jordan_wigner(&ops, 1).unwrap();
        assert_eq!(LinearEncoding::parity(1).encode(&ops).unwrap(), jw);
        assert_eq!(bravyi_kitaev(&ops, 1, None).unwrap(), jw);
    }

    #[test]
    fn encode_decode_bits_round_trip() {
        for enc in [
            LinearEncoding::parity(6),
            LinearEncoding::bravyi_kitaev(6),
            LinearEncoding::bravyi_kitaev(8),
        ] {
            for n in 0..(1u64 << enc.modes()) {
                assert_eq!(enc.decode_bits(enc.encode_bits(n)), n);
            }
        }
    }
}
