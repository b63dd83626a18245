//! U-sweep driver.

use std::time::Instant;

use anyhow::{Context, Result};
use blockvqe::classical_sector::compute_factors;
use blockvqe::model::{build_hubbard, split};
use blockvqe::optimize::TracePoint;
use blockvqe::oracle::{exact_ground, mean_field, MeanFieldKind, MeanFieldOptions, MeanFieldState};
use blockvqe::vqe::{energy, energy_general, minimize, GeneralProblem, HubbardOperators, Minimized};
use blockvqe::{HubbardParams, SimMode, VariationalState};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{MeanFieldName, RunConfig, SplitKind};
use crate::results::SweepRow;

/// Seed of sweep point `index`; independent of thread scheduling.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Best-so-far value from `iteration` on, until the next entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub f: f64,
    pub x_norm: f64,
}

/// Keep only the iterations where the trace changes; the dropped points
/// repeat their predecessor.
pub fn compress_trace(trace: &[TracePoint]) -> Vec<TraceEntry> {
    let mut out: Vec<TraceEntry> = Vec::new();
    for (iteration, p) in trace.iter().enumerate() {
        if out.last().is_none_or(|e| e.f != p.f || e.x_norm != p.x_norm) {
            out.push(TraceEntry {
                iteration,
                f: p.f,
                x_norm: p.x_norm,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanFieldLog {
    pub energy: f64,
    pub converged: bool,
    pub iterations: usize,
    pub n_up: Vec<f64>,
    pub n_down: Vec<f64>,
}

impl From<MeanFieldState> for MeanFieldLog {
    fn from(s: MeanFieldState) -> Self {
        Self {
            energy: s.energy,
            converged: s.converged,
            iterations: s.iterations,
            n_up: s.n_up,
            n_down: s.n_down,
        }
    }
}

/// Everything known about one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointLog {
    pub u: f64,
    pub seed: u64,
    pub blocks: usize,
    pub data_qubits: usize,
    pub e_vqe: f64,
    /// Standard error of `e_vqe`; zero in exact mode.
    pub e_vqe_std_error: f64,
    pub e_exact: f64,
    pub mean_field_restricted: MeanFieldLog,
    pub mean_field_unrestricted: MeanFieldLog,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub alpha: Vec<f64>,
    pub angles: Vec<Vec<f64>>,
    /// Run-length trace over all starts; see [`compress_trace`].
    pub trace: Vec<TraceEntry>,
    pub trace_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub points: Vec<PointLog>,
}

/// Run options that are not part of the config file.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    /// Replaces `method.seed`.
    pub seed: Option<u64>,
    /// Report `wall_time = 0` so results files compare byte for byte.
    pub no_timing: bool,
}

/// The minimized state and the energy reported for it.
struct Solved {
    min: Minimized,
    blocks: usize,
    data_qubits: usize,
    value: f64,
    std_error: f64,
}

/// In shot mode the minimum of noisy estimates is biased low, so the
/// reported energy is a fresh estimate of the final state on its own seed.
fn report_seed(seed: u64) -> u64 {
    seed.wrapping_add(0x5eed)
}

fn solve_spin(cfg: &RunConfig, params: &HubbardParams, seed: u64) -> Result<Solved> {
    let m = &cfg.method;
    let factors = compute_factors(params)?;
    let ops = HubbardOperators::build(params, m.encoding.into(), m.fix_n_down, m.pad_energy)?;
    let spec = cfg.ansatz(ops.qubits);
    spec.validate()?;
    let mode = cfg.sim_mode(seed);
    let init = VariationalState::uniform(factors.block_count(), &spec);
    let mut round = 0u64;
    let min = minimize(
        &init,
        &spec,
        |vs| {
            round += 1;
            Ok(energy(vs, &spec, &factors, &ops, reseed(mode, round))?.total)
        },
        &cfg.minimize_options(seed),
    )?;
    let e = energy(&min.state, &spec, &factors, &ops, with_seed(mode, report_seed(seed)))?;
    Ok(Solved {
        blocks: factors.block_count(),
        data_qubits: ops.qubits,
        value: if matches!(mode, SimMode::Exact) { min.energy } else { e.total },
        std_error: e.std_error,
        min,
    })
}

fn solve_custom(cfg: &RunConfig, params: &HubbardParams, seed: u64) -> Result<Solved> {
    let h = build_hubbard(params)?;
    let s = split(&h, cfg.set_a_mask())?;
    let problem = GeneralProblem::new(&s, None, cfg.method.encoding.into())?;
    let spec = cfg.ansatz(problem.qubits);
    spec.validate()?;
    let mode = cfg.sim_mode(seed);
    let init = VariationalState::uniform(problem.block_count(), &spec);
    let mut round = 0u64;
    let min = minimize(
        &init,
        &spec,
        |vs| {
            round += 1;
            Ok(energy_general(vs, &spec, &problem, reseed(mode, round))?.value)
        },
        &cfg.minimize_options(seed),
    )?;
    let e = energy_general(&min.state, &spec, &problem, with_seed(mode, report_seed(seed)))?;
    Ok(Solved {
        blocks: problem.block_count(),
        data_qubits: problem.qubits,
        value: if matches!(mode, SimMode::Exact) { min.energy } else { e.value },
        std_error: e.std_error,
        min,
    })
}

/// Fresh shot noise per objective call, reproducible from the call count.
fn reseed(mode: SimMode, round: u64) -> SimMode {
    match mode {
        SimMode::Exact => mode,
        SimMode::Shots { shots, seed } => SimMode::Shots {
            shots,
            seed: seed.wrapping_add(round.wrapping_mul(0x2545_f491_4f6c_dd1d)),
        },
    }
}

fn with_seed(mode: SimMode, seed: u64) -> SimMode {
    match mode {
        SimMode::Exact => mode,
        SimMode::Shots { shots, .. } => SimMode::Shots { shots, seed },
    }
}

/// Reference energy over the space the variational state spans.
fn exact_energy(cfg: &RunConfig, params: &HubbardParams) -> Result<f64> {
    let m = &cfg.method;
    match m.split {
        SplitKind::Spin => {
            let ops = HubbardOperators::build(params, m.encoding.into(), m.fix_n_down, m.pad_energy)?;
            Ok(ops.exact_reference(params)?)
        }
        // Neither spin count is fixed once the split mixes spins.
        SplitKind::Custom => {
            let l = params.sites;
            let mut best = f64::INFINITY;
            for n_up in 0..=l {
                for n_down in 0..=l {
                    let e = exact_ground(&HubbardParams { n_up, n_down, ..*params })?.energy;
                    best = best.min(e);
                }
            }
            Ok(best)
        }
    }
}

fn mean_field_options(cfg: &RunConfig, kind: MeanFieldKind) -> MeanFieldOptions {
    let mf = &cfg.mean_field;
    MeanFieldOptions {
        kind,
        mixing: mf.mixing,
        tol: mf.tol,
        max_iter: mf.max_iter,
    }
}

/// Minimize at one `U` and query both oracles.
pub fn run_point(cfg: &RunConfig, u: f64, seed: u64, opts: RunOptions) -> Result<(SweepRow, PointLog)> {
    let start = Instant::now();
    let params = cfg.params(u);
    let solved = match cfg.method.split {
        SplitKind::Spin => solve_spin(cfg, &params, seed)?,
        SplitKind::Custom => solve_custom(cfg, &params, seed)?,
    };
    let e_exact = exact_energy(cfg, &params)?;
    let restricted = mean_field(&params, &mean_field_options(cfg, MeanFieldKind::Restricted))?;
    let unrestricted = mean_field(&params, &mean_field_options(cfg, MeanFieldKind::Unrestricted))?;
    let e_meanfield = match cfg.mean_field.kind {
        MeanFieldName::Restricted => restricted.energy,
        MeanFieldName::Unrestricted => unrestricted.energy,
    };
    let wall_time = if opts.no_timing { 0.0 } else { start.elapsed().as_secs_f64() };

    let Solved {
        min,
        blocks,
        data_qubits,
        value,
        std_error,
    } = solved;
    let row = SweepRow {
        u,
        e_vqe: value,
        e_exact,
        e_meanfield,
        iterations: min.iterations,
        wall_time,
        converged: min.converged,
    };
    let log = PointLog {
        u,
        seed,
        blocks,
        data_qubits,
        e_vqe: value,
        e_vqe_std_error: std_error,
        e_exact,
        mean_field_restricted: restricted.into(),
        mean_field_unrestricted: unrestricted.into(),
        iterations: min.iterations,
        evaluations: min.evaluations,
        converged: min.converged,
        alpha: min.state.alpha.clone(),
        angles: min.state.angles.0.clone(),
        trace: compress_trace(&min.trace),
        trace_len: min.trace.len(),
    };
    Ok((row, log))
}

/// All sweep points, in parallel, rows in sweep order.
pub fn run_sweep(cfg: &RunConfig, opts: RunOptions) -> Result<SweepOutput> {
    cfg.validate()?;
    let base = opts.seed.unwrap_or(cfg.method.seed);
    let results: Vec<(SweepRow, PointLog)> = cfg
        .sweep
        .par_iter()
        .enumerate()
        .map(|(k, &u)| run_point(cfg, u, point_seed(base, k), opts).with_context(|| format!("sweep point U = {u}")))
        .collect::<Result<_>>()?;
    let (rows, points) = results.into_iter().unzip();
    Ok(SweepOutput { rows, points })
}
