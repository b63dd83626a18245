//! Run configuration: TOML with unknown keys rejected.

use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use blockvqe::sim::AnsatzSpec;
use blockvqe::vqe::{MinimizeOptions, Optimizer};
use blockvqe::{EncodingKind, HubbardParams, SimMode};
use serde::{Deserialize, Serialize};

/// Bundled configuration reproducing the four-site sweep.
pub const FIG3_CONFIG: &str = include_str!("../configs/fig3.cfg");

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// On-site interaction values to sweep.
    pub sweep: Vec<f64>,
    pub model: ModelConfig,
    pub method: MethodConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub mean_field: MeanFieldConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub sites: usize,
    pub hopping: f64,
    #[serde(default)]
    pub chem_potential: f64,
    pub n_up: usize,
    pub n_down: usize,
    /// Drop the wrap bond `(L-1, 0)`.
    #[serde(default)]
    pub open_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    /// Spin-up modes classical, spin-down modes on the register.
    Spin,
    /// Classical modes listed in `method.set_a`.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingName {
    Jw,
    Parity,
    Bk,
    Compact,
}

impl From<EncodingName> for EncodingKind {
    fn from(e: EncodingName) -> Self {
        match e {
            EncodingName::Jw => EncodingKind::JordanWigner,
            EncodingName::Parity => EncodingKind::Parity,
            EncodingName::Bk => EncodingKind::BravyiKitaev,
            EncodingName::Compact => EncodingKind::Compact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimName {
    Exact,
    Shots,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MethodConfig {
    pub split: SplitKind,
    /// Classical mode indices for `split = "custom"`.
    #[serde(default)]
    pub set_a: Option<Vec<usize>>,
    pub encoding: EncodingName,
    pub fix_n_down: bool,
    pub ansatz_depth: usize,
    /// One more rotation layer than entangling layers.
    #[serde(default)]
    pub extra_layer: bool,
    /// CNOT `[control, target]` pairs per iteration; linear chain if absent.
    #[serde(default)]
    pub entangler: Option<Vec<[usize; 2]>>,
    /// Diagonal value on unphysical compact labels.
    #[serde(default)]
    pub pad_energy: Option<f64>,
    pub sim: SimName,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerName {
    NelderMead,
    Spsa,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    /// Defaults to Nelder–Mead in exact mode and SPSA with shots.
    pub kind: Option<OptimizerName>,
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: usize,
    pub init_spread: f64,
    pub step: f64,
    pub rebuilds: usize,
    pub spsa_a: f64,
    pub spsa_c: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let d = MinimizeOptions::default();
        Self {
            kind: None,
            max_iter: d.max_iter,
            tol: d.tol,
            restarts: d.restarts,
            init_spread: d.init_spread,
            step: d.step,
            rebuilds: d.rebuilds,
            spsa_a: d.spsa_a,
            spsa_c: d.spsa_c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanFieldName {
    Restricted,
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeanFieldConfig {
    /// Flavor reported in the results file; the run log carries both.
    pub kind: MeanFieldName,
    pub mixing: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MeanFieldConfig {
    fn default() -> Self {
        Self {
            kind: MeanFieldName::Restricted,
            mixing: 0.5,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

/// A config problem tied to the dotted key that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for FieldError {}

fn field(field: &'static str, message: impl Into<String>) -> FieldError {
    FieldError {
        field,
        message: message.into(),
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| anyhow::anyhow!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn fig3() -> Self {
        Self::from_toml(FIG3_CONFIG).expect("bundled config is valid")
    }

    pub fn validate(&self) -> std::result::Result<(), FieldError> {
        if self.sweep.is_empty() {
            return Err(field("sweep", "needs at least one U value"));
        }
        if let Some(u) = self.sweep.iter().find(|u| !u.is_finite()) {
            return Err(field("sweep", format!("non-finite value {u}")));
        }
        let m = &self.model;
        if m.sites < 2 {
            return Err(field("model.sites", "needs at least 2 sites"));
        }
        if m.n_up > m.sites {
            return Err(field("model.n_up", format!("exceeds {} sites", m.sites)));
        }
        if m.n_down > m.sites {
            return Err(field("model.n_down", format!("exceeds {} sites", m.sites)));
        }
        if !m.hopping.is_finite() {
            return Err(field("model.hopping", "must be finite"));
        }
        if !m.chem_potential.is_finite() {
            return Err(field("model.chem_potential", "must be finite"));
        }
        let me = &self.method;
        let compact = me.encoding == EncodingName::Compact;
        match me.split {
            SplitKind::Spin => {
                if me.set_a.is_some() {
                    return Err(field("method.set_a", "only used with split = \"custom\""));
                }
                if compact != me.fix_n_down {
                    return Err(field(
                        "method.fix_n_down",
                        "must be true exactly when encoding = \"compact\"",
                    ));
                }
                if matches!(me.encoding, EncodingName::Bk) && !m.sites.is_power_of_two() {
                    return Err(field(
                        "method.encoding",
                        "bk with parity-qubit removal needs a power-of-two site count",
                    ));
                }
            }
            SplitKind::Custom => {
                let Some(set) = &me.set_a else {
                    return Err(field("method.set_a", "required for split = \"custom\""));
                };
                if let Some(k) = set.iter().find(|&&k| k >= 2 * m.sites) {
                    return Err(field("method.set_a", format!("mode {k} outside 0..{}", 2 * m.sites)));
                }
                if compact {
                    return Err(field("method.encoding", "custom splits need jw, parity or bk"));
                }
                if me.fix_n_down {
                    return Err(field("method.fix_n_down", "not available for custom splits"));
                }
            }
        }
        if me.ansatz_depth == 0 && !me.extra_layer {
            return Err(field("method.ansatz_depth", "ansatz has no parameters"));
        }
        if let Some(pad) = me.pad_energy {
            if !pad.is_finite() {
                return Err(field("method.pad_energy", "must be finite"));
            }
        }
        match (me.sim, me.shots) {
            (SimName::Shots, None) | (SimName::Shots, Some(0)) => {
                return Err(field("method.shots", "sim = \"shots\" needs a positive shot count"))
            }
            (SimName::Exact, Some(_)) => {
                return Err(field("method.shots", "only used with sim = \"shots\""))
            }
            _ => {}
        }
        let o = &self.optimizer;
        if o.max_iter == 0 {
            return Err(field("optimizer.max_iter", "must be positive"));
        }
        if o.restarts == 0 {
            return Err(field("optimizer.restarts", "must be at least 1"));
        }
        if !(o.step > 0.0 && o.step.is_finite()) {
            return Err(field("optimizer.step", "must be positive"));
        }
        let mf = &self.mean_field;
        if !(mf.mixing > 0.0 && mf.mixing <= 1.0) {
            return Err(field("mean_field.mixing", "must lie in (0, 1]"));
        }
        if mf.max_iter == 0 {
            return Err(field("mean_field.max_iter", "must be positive"));
        }
        Ok(())
    }

    pub fn params(&self, onsite: f64) -> HubbardParams {
        let m = &self.model;
        HubbardParams {
            sites: m.sites,
            hopping: m.hopping,
            onsite,
            chem_potential: m.chem_potential,
            n_up: m.n_up,
            n_down: m.n_down,
            periodic: !m.open_boundary,
        }
    }

    pub fn sim_mode(&self, seed: u64) -> SimMode {
        match (self.method.sim, self.method.shots) {
            (SimName::Shots, Some(shots)) => SimMode::Shots { shots, seed },
            _ => SimMode::Exact,
        }
    }

    pub fn ansatz(&self, data_qubits: usize) -> AnsatzSpec {
        let mut spec = AnsatzSpec::linear(data_qubits, self.method.ansatz_depth)
            .with_closing_layer(self.method.extra_layer);
        if let Some(pairs) = &self.method.entangler {
            spec.entangler = pairs.iter().map(|p| (p[0], p[1])).collect();
        }
        spec
    }

    pub fn minimize_options(&self, seed: u64) -> MinimizeOptions {
        let o = &self.optimizer;
        let optimizer = match o.kind {
            Some(OptimizerName::NelderMead) => Optimizer::NelderMead,
            Some(OptimizerName::Spsa) => Optimizer::Spsa,
            None if self.method.sim == SimName::Shots => Optimizer::Spsa,
            None => Optimizer::NelderMead,
        };
        MinimizeOptions {
            optimizer,
            max_iter: o.max_iter,
            tol: o.tol,
            restarts: o.restarts,
            init_spread: o.init_spread,
            seed,
            step: o.step,
            rebuilds: o.rebuilds,
            spsa_a: o.spsa_a,
            spsa_c: o.spsa_c,
        }
    }

    /// Classical mode mask of the configured split.
    pub fn set_a_mask(&self) -> u64 {
        match (&self.method.split, &self.method.set_a) {
            (SplitKind::Custom, Some(set)) => set.iter().fold(0, |m, &k| m | 1 << k),
            _ => (1u64 << self.model.sites) - 1,
        }
    }
}
