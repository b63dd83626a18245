//! Occupation-number configurations and fermionic ladder operators.
//!
//! A configuration is a bit pattern over global mode indices: bit `μ` set
//! means mode `μ` is occupied. Fock states are ordered products of creation
//! operators in ascending mode order acting on the vacuum,
//! `|n⟩ = c†_{μ1} c†_{μ2} … |0⟩` with `μ1 < μ2 < …`, so moving `c†_μ` into
//! place picks up `(-1)` for every occupied mode below `μ`. The same rule is
//! used everywhere in the crate.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{usage, Result};

/// Largest number of modes a [`Configuration`] can address.
pub const MAX_MODES: usize = 63;

/// Index `μ` of a one-particle state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(pub usize);

/// Spin projection of a Hubbard mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl ModeIndex {
    /// Flattened Hubbard index: `i` for `(i, up)` and `sites + i` for
    /// `(i, down)`, so every up mode precedes every down mode.
    pub fn hubbard(site: usize, spin: Spin, sites: usize) -> Self {
        debug_assert!(site < sites);
        match spin {
            Spin::Up => ModeIndex(site),
            Spin::Down => ModeIndex(sites + site),
        }
    }

    /// Inverse of [`ModeIndex::hubbard`].
    pub fn site_spin(self, sites: usize) -> Option<(usize, Spin)> {
        if self.0 < sites {
            Some((self.0, Spin::Up))
        } else if self.0 < 2 * sites {
            Some((self.0 - sites, Spin::Down))
        } else {
            None
        }
    }

    #[inline]
    fn bit(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Occupation pattern over a declared set of modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    bits: u64,
    modes: u64,
    count: u32,
}

impl Configuration {
    /// Configuration with occupied modes `bits` inside the mode set `modes`.
    pub fn new(bits: u64, modes: u64) -> Result<Self> {
        if modes >> MAX_MODES != 0 {
            return Err(usage!("mode set exceeds {MAX_MODES} modes"));
        }
        if bits & !modes != 0 {
            return Err(usage!(
                "occupation {bits:#b} has modes outside the mode set {modes:#b}"
            ));
        }
        Ok(Self {
            bits,
            modes,
            count: bits.count_ones(),
        })
    }

    /// Empty configuration over the first `mode_count` modes.
    pub fn vacuum(mode_count: usize) -> Result<Self> {
        Self::new(0, low_mask(mode_count)?)
    }

    /// Configuration over the first `mode_count` modes with the listed
    /// modes occupied.
    pub fn from_occupied(occupied: &[usize], mode_count: usize) -> Result<Self> {
        let modes = low_mask(mode_count)?;
        let mut bits = 0u64;
        for &m in occupied {
            if m >= mode_count {
                return Err(usage!("mode {m} outside 0..{mode_count}"));
            }
            bits |= 1 << m;
        }
        Self::new(bits, modes)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn modes(&self) -> u64 {
        self.modes
    }

    /// Particle number `N = Σ n_μ`.
    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn is_occupied(&self, mode: ModeIndex) -> bool {
        mode.0 < 64 && self.bits & mode.bit() != 0
    }

    /// `(-1)^N`.
    pub fn parity_sign(&self) -> f64 {
        if self.count.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Apply `c†_μ` (`dagger`) or `c_μ`. Returns `None` when the operator
    /// annihilates the state, otherwise the new configuration and the sign
    /// `(-1)^(occupied modes below μ)`.
    pub fn apply(&self, dagger: bool, mode: ModeIndex) -> Result<Option<(Configuration, i8)>> {
        if mode.0 >= MAX_MODES || self.modes & mode.bit() == 0 {
            return Err(usage!("mode {mode} is not in the configuration's mode set"));
        }
        let occupied = self.bits & mode.bit() != 0;
        if occupied == dagger {
            return Ok(None);
        }
        let below = (self.bits & (mode.bit() - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1 } else { -1 };
        let bits = self.bits ^ mode.bit();
        Ok(Some((
            Configuration {
                bits,
                modes: self.modes,
                count: bits.count_ones(),
            },
            sign,
        )))
    }
}

fn low_mask(mode_count: usize) -> Result<u64> {
    if mode_count > MAX_MODES {
        return Err(usage!("mode count {mode_count} exceeds {MAX_MODES}"));
    }
    Ok((1u64 << mode_count) - 1)
}

/// `apply_op` as a free function.
pub fn apply_op(
    config: &Configuration,
    dagger: bool,
    mode: ModeIndex,
) -> Result<Option<(Configuration, i8)>> {
    config.apply(dagger, mode)
}

/// One creation (`dagger`) or annihilation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderOp {
    pub dagger: bool,
    pub mode: ModeIndex,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self {
            dagger: true,
            mode: ModeIndex(mode),
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            dagger: false,
            mode: ModeIndex(mode),
        }
    }

    pub fn adjoint(self) -> Self {
        Self {
            dagger: !self.dagger,
            mode: self.mode,
        }
    }
}

impl fmt::Display for LadderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "c†{}", self.mode)
        } else {
            write!(f, "c{}", self.mode)
        }
    }
}

/// Coefficient times a product of at most four ladder operators. The list is
/// written left to right and acts on a ket right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorString {
    ops: Vec<LadderOp>,
    pub coefficient: Complex64,
}

impl OperatorString {
    pub const MAX_LEN: usize = 4;

    pub fn new(ops: Vec<LadderOp>, coefficient: Complex64) -> Result<Self> {
        if ops.len() > Self::MAX_LEN {
            return Err(usage!(
                "operator string of length {} exceeds {}",
                ops.len(),
                Self::MAX_LEN
            ));
        }
        Ok(Self { ops, coefficient })
    }

    pub fn identity(coefficient: Complex64) -> Self {
        Self {
            ops: Vec::new(),
            coefficient,
        }
    }

    /// `coef · c†_μ c_μ'`.
    pub fn one_body(mu: usize, mu_p: usize, coefficient: Complex64) -> Self {
        Self {
            ops: vec![LadderOp::create(mu), LadderOp::annihilate(mu_p)],
            coefficient,
        }
    }

    /// `coef · c†_μ c†_ν c_ν' c_μ'`.
    pub fn two_body(mu: usize, nu: usize, mu_p: usize, nu_p: usize, coefficient: Complex64) -> Self {
        Self {
            ops: vec![
                LadderOp::create(mu),
                LadderOp::create(nu),
                LadderOp::annihilate(nu_p),
                LadderOp::annihilate(mu_p),
            ],
            coefficient,
        }
    }

    /// `n̂_μ = c†_μ c_μ`.
    pub fn number(mu: usize) -> Self {
        Self::one_body(mu, mu, Complex64::new(1.0, 0.0))
    }

    pub fn ops(&self) -> &[LadderOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Hermitian adjoint: reversed order, flipped daggers, conjugated
    /// coefficient.
    pub fn adjoint(&self) -> Self {
        Self {
            ops: self.ops.iter().rev().map(|op| op.adjoint()).collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    /// Apply the operator product (without the coefficient) to `ket`.
    pub fn apply(&self, ket: &Configuration) -> Result<Option<(Configuration, i8)>> {
        let mut state = *ket;
        let mut sign = 1i8;
        for op in self.ops.iter().rev() {
            match state.apply(op.dagger, op.mode)? {
                Some((next, s)) => {
                    state = next;
                    sign *= s;
                }
                None => return Ok(None),
            }
        }
        Ok(Some((state, sign)))
    }
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        for op in &self.ops {
            write!(f, " {op}")?;
        }
        Ok(())
    }
}

/// `⟨bra| ops |ket⟩`: a signed Kronecker delta times the coefficient.
pub fn matrix_element(
    bra: &Configuration,
    ops: &OperatorString,
    ket: &Configuration,
) -> Result<Complex64> {
    if bra.modes != ket.modes {
        return Err(usage!("bra and ket are over different mode sets"));
    }
    Ok(match ops.apply(ket)? {
        Some((image, sign)) if image.bits == bra.bits => ops.coefficient * f64::from(sign),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// All configurations of `particle_count` particles in the first
/// `mode_count` modes, ascending by bit pattern.
pub fn enumerate_configs(mode_count: usize, particle_count: usize) -> Result<Vec<Configuration>> {
    if particle_count > mode_count {
        return Err(usage!(
            "particle count {particle_count} exceeds mode count {mode_count}"
        ));
    }
    let modes = low_mask(mode_count)?;
    let mut out = Vec::with_capacity(binomial(mode_count, particle_count) as usize);
    if particle_count == 0 {
        out.push(Configuration::new(0, modes)?);
        return Ok(out);
    }
    // Gosper's hack: next integer with the same popcount.
    let mut v: u64 = (1u64 << particle_count) - 1;
    while v <= modes {
        out.push(Configuration::new(v, modes)?);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    Ok(out)
}

/// Configurations over an arbitrary mode set `modes`, ascending by bit
/// pattern, optionally restricted to a particle count.
pub fn enumerate_subset_configs(modes: u64, particle_count: Option<usize>) -> Result<Vec<Configuration>> {
    if modes >> MAX_MODES != 0 {
        return Err(usage!("mode set exceeds {MAX_MODES} modes"));
    }
    let width = modes.count_ones();
    if width > 30 {
        return Err(crate::Error::Capacity(format!(
            "{width} modes is too many to enumerate"
        )));
    }
    let mut out = Vec::new();
    for k in 0..(1u64 << width) {
        if let Some(n) = particle_count {
            if k.count_ones() as usize != n {
                continue;
            }
        }
        out.push(Configuration::new(deposit_bits(k, modes), modes)?);
    }
    Ok(out)
}

/// Scatter the low bits of `value` into the set bits of `mask`
/// (monotone in `value`).
pub fn deposit_bits(value: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value >> k & 1 == 1 {
            out |= low;
        }
        m ^= low;
        k += 1;
    }
    out
}

/// Gather the bits of `value` selected by `mask` into the low bits.
pub fn extract_bits(value: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value & low != 0 {
            out |= 1 << k;
        }
        m ^= low;
        k += 1;
    }
    out
}

/// Binomial coefficient `n choose k`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// An ordered configuration list with reverse lookup from bit pattern to
/// position.
#[derive(Debug, Clone)]
pub struct ConfigBasis {
    configs: Vec<Configuration>,
    index: HashMap<u64, usize>,
}

impl ConfigBasis {
    pub fn new(configs: Vec<Configuration>) -> Self {
        let index = configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.bits(), i))
            .collect();
        Self { configs, index }
    }

    pub fn fixed_number(mode_count: usize, particle_count: usize) -> Result<Self> {
        Ok(Self::new(enumerate_configs(mode_count, particle_count)?))
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn position(&self, bits: u64) -> Option<usize> {
        self.index.get(&bits).copied()
    }

    /// Dense `len × len` matrix of `Σ ops` restricted to this basis.
    pub fn operator_matrix(&self, ops: &[OperatorString]) -> Result<Vec<Vec<Complex64>>> {
        let n = self.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (col, ket) in self.configs.iter().enumerate() {
            for op in ops {
                if let Some((image, sign)) = op.apply(ket)? {
                    if let Some(row) = self.position(image.bits()) {
                        m[row][col] += op.coefficient * f64::from(sign);
                    }
                }
            }
        }
        Ok(m)
    }
}
