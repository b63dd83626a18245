//! Fermionic Hamiltonians and their subsystem decomposition.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::fock::{LadderOp, ModeIndex, OperatorString, Spin, MAX_MODES};

/// `H = Σ t_{μμ'} c†_μ c_μ' + Σ v_{μνμ'ν'} c†_μ c†_ν c_ν' c_μ'`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionHamiltonian {
    pub mode_count: usize,
    pub one_body: BTreeMap<(usize, usize), Complex64>,
    /// Keyed by `(μ, ν, μ', ν')`.
    pub two_body: BTreeMap<(usize, usize, usize, usize), Complex64>,
}

impl FermionHamiltonian {
    pub fn new(mode_count: usize) -> Result<Self> {
        if mode_count > MAX_MODES {
            return Err(usage!("mode count {mode_count} exceeds {MAX_MODES}"));
        }
        Ok(Self {
            mode_count,
            ..Default::default()
        })
    }

    fn check(&self, modes: &[usize]) -> Result<()> {
        match modes.iter().find(|&&m| m >= self.mode_count) {
            Some(m) => Err(usage!("mode {m} outside 0..{}", self.mode_count)),
            None => Ok(()),
        }
    }

    /// Accumulate `coef` into `t_{μμ'}`.
    pub fn add_one_body(&mut self, mu: usize, mu_p: usize, coef: Complex64) -> Result<()> {
        self.check(&[mu, mu_p])?;
        *self.one_body.entry((mu, mu_p)).or_default() += coef;
        Ok(())
    }

    /// Accumulate `coef` into `v_{μνμ'ν'}`.
    pub fn add_two_body(
        &mut self,
        mu: usize,
        nu: usize,
        mu_p: usize,
        nu_p: usize,
        coef: Complex64,
    ) -> Result<()> {
        self.check(&[mu, nu, mu_p, nu_p])?;
        *self.two_body.entry((mu, nu, mu_p, nu_p)).or_default() += coef;
        Ok(())
    }

    /// Every nonzero coefficient as an operator string.
    pub fn terms(&self) -> Vec<OperatorString> {
        let one = self
            .one_body
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(&(a, b), &c)| OperatorString::one_body(a, b, c));
        let two = self
            .two_body
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(&(m, n, mp, np), &c)| OperatorString::two_body(m, n, mp, np, c));
        one.chain(two).collect()
    }

    /// Coefficient-level Hermiticity: `t_{μμ'} = t*_{μ'μ}` and
    /// `v_{μνμ'ν'} = v*_{μ'ν'μν}`.
    pub fn coefficients_hermitian(&self, tol: f64) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        let one_ok = self.one_body.iter().all(|(&(a, b), c)| {
            let partner = self.one_body.get(&(b, a)).copied().unwrap_or(zero);
            (c - partner.conj()).norm() <= tol
        });
        let two_ok = self.two_body.iter().all(|(&(m, n, mp, np), c)| {
            let partner = self.two_body.get(&(mp, np, m, n)).copied().unwrap_or(zero);
            (c - partner.conj()).norm() <= tol
        });
        one_ok && two_ok
    }
}

/// Parameters of the Hubbard ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub sites: usize,
    pub hopping: f64,
    pub onsite: f64,
    pub chem_potential: f64,
    pub n_up: usize,
    pub n_down: usize,
    /// Close the ring with the bond `(L-1, 0)`. For `L = 2` the wrap bond
    /// duplicates `(0, 1)`, doubling the effective hopping.
    pub periodic: bool,
}

impl HubbardParams {
    /// Half-filled periodic ring with `ε = 0`.
    pub fn half_filled(sites: usize, hopping: f64, onsite: f64) -> Self {
        Self {
            sites,
            hopping,
            onsite,
            chem_potential: 0.0,
            n_up: sites / 2,
            n_down: sites / 2,
            periodic: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(usage!("Hubbard ring needs at least 2 sites, got {}", self.sites));
        }
        if 2 * self.sites > MAX_MODES {
            return Err(usage!("{} sites exceed the mode limit", self.sites));
        }
        if self.n_up > self.sites || self.n_down > self.sites {
            return Err(usage!(
                "particle numbers ({}, {}) exceed {} sites",
                self.n_up,
                self.n_down,
                self.sites
            ));
        }
        for (name, v) in [
            ("hopping", self.hopping),
            ("onsite", self.onsite),
            ("chem_potential", self.chem_potential),
        ] {
            if !v.is_finite() {
                return Err(usage!("{name} must be finite"));
            }
        }
        Ok(())
    }

    /// Bonds `(i, i+1 mod L)`; the wrap bond only when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let count = if self.periodic { self.sites } else { self.sites - 1 };
        (0..count).map(|i| (i, (i + 1) % self.sites)).collect()
    }

    /// Mode mask of one spin species.
    pub fn spin_mask(&self, spin: Spin) -> u64 {
        let low = (1u64 << self.sites) - 1;
        match spin {
            Spin::Up => low,
            Spin::Down => low << self.sites,
        }
    }
}

/// Unit-coefficient hopping operator `T = Σ_bonds (c†_i c_{i+1} + h.c.)`
/// over modes `offset + i`.
pub fn hopping_operator(params: &HubbardParams, offset: usize) -> Vec<OperatorString> {
    let one = Complex64::new(1.0, 0.0);
    params
        .bonds()
        .into_iter()
        .flat_map(|(i, j)| {
            [
                OperatorString::one_body(offset + i, offset + j, one),
                OperatorString::one_body(offset + j, offset + i, one),
            ]
        })
        .collect()
}

/// `H = ε Σ_σ N_σ + t Σ_σ T_σ + U Σ_i n_{i↑} n_{i↓}` on `2L` modes.
pub fn build_hubbard(params: &HubbardParams) -> Result<FermionHamiltonian> {
    params.validate()?;
    let l = params.sites;
    let mut h = FermionHamiltonian::new(2 * l)?;
    let eps = Complex64::new(params.chem_potential, 0.0);
    let t = Complex64::new(params.hopping, 0.0);
    let u = Complex64::new(params.onsite, 0.0);
    for spin in [Spin::Up, Spin::Down] {
        for i in 0..l {
            let m = ModeIndex::hubbard(i, spin, l).0;
            if params.chem_potential != 0.0 {
                h.add_one_body(m, m, eps)?;
            }
        }
        if params.hopping != 0.0 {
            for (i, j) in params.bonds() {
                let a = ModeIndex::hubbard(i, spin, l).0;
                let b = ModeIndex::hubbard(j, spin, l).0;
                h.add_one_body(a, b, t)?;
                h.add_one_body(b, a, t)?;
            }
        }
    }
    if params.onsite != 0.0 {
        for i in 0..l {
            let up = ModeIndex::hubbard(i, Spin::Up, l).0;
            let dn = ModeIndex::hubbard(i, Spin::Down, l).0;
            // n_up n_dn = c†_up c†_dn c_dn c_up
            h.add_two_body(up, dn, up, dn, u)?;
        }
    }
    Ok(h)
}

/// The six term classes of the A/B decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermGroup {
    /// All operators on A.
    A,
    /// All operators on B.
    B,
    /// One-body term with one operator on each side.
    HopAB,
    /// Two-body term with one operator on B.
    V1,
    /// Two-body term with two operators on B.
    V2,
    /// Two-body term with three operators on B.
    V3,
}

impl TermGroup {
    pub const ALL: [TermGroup; 6] = [
        TermGroup::A,
        TermGroup::B,
        TermGroup::HopAB,
        TermGroup::V1,
        TermGroup::V2,
        TermGroup::V3,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

/// Extra sign applied when evaluating a bracket of a split term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    None,
    /// `(-1)^{N_A}` of the ket configuration: an odd number of B operators
    /// has to be moved past the `N_A` creation operators of `C†_{n_A}`.
    ParityA,
}

/// One Hamiltonian term rewritten as `coefficient · (A-part)(B-part)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitTerm {
    /// Operators on A, unit coefficient.
    pub a_ops: OperatorString,
    /// Operators on B, unit coefficient.
    pub b_ops: OperatorString,
    /// Source coefficient times the reordering sign.
    pub coefficient: Complex64,
    pub sign_rule: SignRule,
}

impl SplitTerm {
    /// `coefficient · a_ops · b_ops` as one operator string; equal to the
    /// source term as an operator.
    pub fn recombined(&self) -> OperatorString {
        let ops = self
            .a_ops
            .ops()
            .iter()
            .chain(self.b_ops.ops())
            .copied()
            .collect();
        OperatorString::new(ops, self.coefficient).expect("split terms keep their length")
    }
}

/// A Hamiltonian grouped by how its operators straddle the A/B partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitHamiltonian {
    pub mode_count: usize,
    pub set_a: u64,
    pub set_b: u64,
    groups: [Vec<SplitTerm>; 6],
}

impl SplitHamiltonian {
    pub fn group(&self, g: TermGroup) -> &[SplitTerm] {
        &self.groups[g.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermGroup, &SplitTerm)> {
        TermGroup::ALL
            .into_iter()
            .flat_map(move |g| self.group(g).iter().map(move |t| (g, t)))
    }

    pub fn term_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

/// Group the terms of `h` by subsystem, with `set_a` as the classical side.
pub fn split(h: &FermionHamiltonian, set_a: u64) -> Result<SplitHamiltonian> {
    let all = if h.mode_count == 0 {
        0
    } else {
        (1u64 << h.mode_count) - 1
    };
    if set_a & !all != 0 {
        return Err(usage!("set A {set_a:#b} has modes outside 0..{}", h.mode_count));
    }
    let set_b = all & !set_a;
    let mut groups: [Vec<SplitTerm>; 6] = Default::default();
    let in_a = |op: &LadderOp| set_a >> op.mode.0 & 1 == 1;

    for term in h.terms() {
        let ops = term.ops();
        let a_ops: Vec<LadderOp> = ops.iter().copied().filter(|op| in_a(op)).collect();
        let b_ops: Vec<LadderOp> = ops.iter().copied().filter(|op| !in_a(op)).collect();
        // Stable partition sign: each A operator hops over the B operators
        // standing to its left.
        let mut b_seen = 0usize;
        let mut swaps = 0usize;
        for op in ops {
            if in_a(op) {
                swaps += b_seen;
            } else {
                b_seen += 1;
            }
        }
        let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        let nb = b_ops.len();
        let group = match (ops.len(), nb) {
            (_, 0) => TermGroup::A,
            (n, k) if n == k => TermGroup::B,
            (2, 1) => TermGroup::HopAB,
            (4, 1) => TermGroup::V1,
            (4, 2) => TermGroup::V2,
            (4, 3) => TermGroup::V3,
            (n, k) => return Err(usage!("unsupported term shape: {n} operators, {k} on B")),
        };
        let one = Complex64::new(1.0, 0.0);
        groups[group.index()].push(SplitTerm {
            a_ops: OperatorString::new(a_ops, one)?,
            b_ops: OperatorString::new(b_ops, one)?,
            coefficient: term.coefficient * sign,
            sign_rule: if nb % 2 == 1 {
                SignRule::ParityA
            } else {
                SignRule::None
            },
        });
    }
    Ok(SplitHamiltonian {
        mode_count: h.mode_count,
        set_a,
        set_b,
        groups,
    })
}
