//! Energy assembly over blocks and its variational minimization.
//!
//! A variational state carries one real amplitude `α_n` and one angle
//! vector `θ_n` per subsystem-A configuration `n`. Amplitudes are stored
//! unconstrained and divided by their norm at every evaluation.

mod brackets;
mod general;
mod hubbard;
mod minimize;

pub use general::{energy_general, GeneralProblem};
pub use hubbard::{
    default_pad_energy, embed_ground_state, energy, energy_from_states, DownNumber, HubbardOperators,
};
pub use minimize::{minimize, MinimizeOptions, Minimized, Optimizer};

use rand::Rng;

use crate::error::{usage, Result};
use crate::sim::{AnsatzSpec, BlockAngles};

/// Block amplitudes and per-block ansatz angles.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalState {
    pub alpha: Vec<f64>,
    pub angles: BlockAngles,
}

impl VariationalState {
    pub fn new(alpha: Vec<f64>, angles: BlockAngles) -> Result<Self> {
        if alpha.len() != angles.len() {
            return Err(usage!(
                "{} amplitudes for {} angle vectors",
                alpha.len(),
                angles.len()
            ));
        }
        Ok(Self { alpha, angles })
    }

    /// Uniform amplitudes, zero angles.
    pub fn uniform(blocks: usize, spec: &AnsatzSpec) -> Self {
        Self {
            alpha: vec![1.0 / (blocks as f64).sqrt(); blocks],
            angles: BlockAngles::zeros(blocks, spec),
        }
    }

    /// `θ ~ U(−spread, spread)`, `α ~ U(0, 1)` normalized.
    pub fn random<R: Rng + ?Sized>(blocks: usize, spec: &AnsatzSpec, spread: f64, rng: &mut R) -> Self {
        let alpha: Vec<f64> = (0..blocks).map(|_| rng.random::<f64>()).collect();
        let angles = BlockAngles(
            (0..blocks)
                .map(|_| {
                    (0..spec.param_count())
                        .map(|_| rng.random_range(-spread..=spread))
                        .collect()
                })
                .collect(),
        );
        let mut s = Self { alpha, angles };
        if let Ok(a) = s.normalized_alpha() {
            s.alpha = a;
        }
        s
    }

    pub fn block_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn validate(&self, blocks: usize, spec: &AnsatzSpec) -> Result<()> {
        if self.alpha.len() != blocks {
            return Err(usage!(
                "state has {} blocks, problem has {blocks}",
                self.alpha.len()
            ));
        }
        if self.angles.len() != blocks {
            return Err(usage!(
                "state has {} angle vectors, problem has {blocks} blocks",
                self.angles.len()
            ));
        }
        self.angles.validate(spec)
    }

    /// `α / |α|`.
    pub fn normalized_alpha(&self) -> Result<Vec<f64>> {
        let norm = self.alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(usage!("block amplitudes have norm {norm}"));
        }
        Ok(self.alpha.iter().map(|a| a / norm).collect())
    }

    /// `[α…, θ_0…, θ_1…, …]`.
    pub fn to_params(&self) -> Vec<f64> {
        let mut x = self.alpha.clone();
        for v in &self.angles.0 {
            x.extend_from_slice(v);
        }
        x
    }

    pub fn from_params(x: &[f64], blocks: usize, spec: &AnsatzSpec) -> Result<Self> {
        let p = spec.param_count();
        if x.len() != blocks * (1 + p) {
            return Err(usage!(
                "{} parameters for {blocks} blocks of {p} angles",
                x.len()
            ));
        }
        let (alpha, rest) = x.split_at(blocks);
        let angles = if p == 0 {
            BlockAngles(vec![Vec::new(); blocks])
        } else {
            BlockAngles(rest.chunks(p).map(<[f64]>::to_vec).collect())
        };
        Ok(Self {
            alpha: alpha.to_vec(),
            angles,
        })
    }
}

/// Energy split into the summands of the Hubbard cost function, plus the
/// penalty on unphysical compact-register labels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    pub total: f64,
    /// `ε Σ|α|² (N↑ + ⟨N↓⟩)`.
    pub epsilon: f64,
    /// `t Σ|α|² ⟨T↓⟩`.
    pub hopping_diag: f64,
    /// `t Σ α' α T_{n'n} ⟨Ψ'|Ψ⟩`.
    pub hopping_offdiag: f64,
    /// `U Σ|α|² Σ_i n_{i↑} ⟨n_{i↓}⟩`.
    pub interaction: f64,
    /// `Σ|α|² ⟨P_pad⟩`; zero unless the register has padding labels.
    pub padding: f64,
    /// Standard error from shot noise; zero in exact mode.
    pub std_error: f64,
}

impl EnergyBreakdown {
    pub fn parts_sum(&self) -> f64 {
        self.epsilon + self.hopping_diag + self.hopping_offdiag + self.interaction + self.padding
    }
}

/// Energy value with its shot-noise standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyEstimate {
    pub value: f64,
    pub std_error: f64,
}
