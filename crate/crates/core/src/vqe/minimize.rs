use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::VariationalState;
use crate::error::{usage, Error, Result};
use crate::optimize::{NelderMead, OptResult, Spsa, TracePoint};
use crate::sim::AnsatzSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    NelderMead,
    Spsa,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    pub optimizer: Optimizer,
    /// Iteration cap per start.
    pub max_iter: usize,
    pub tol: f64,
    /// Number of starts; the first is the supplied initial state, the rest
    /// are random with `θ ~ U(−init_spread, init_spread)`.
    pub restarts: usize,
    pub init_spread: f64,
    pub seed: u64,
    /// Nelder–Mead simplex edge.
    pub step: f64,
    /// Nelder–Mead simplex rebuilds per start.
    pub rebuilds: usize,
    pub spsa_a: f64,
    pub spsa_c: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            optimizer: Optimizer::NelderMead,
            max_iter: 20_000,
            tol: 1e-10,
            restarts: 4,
            init_spread: 0.1,
            seed: 0,
            step: 0.5,
            rebuilds: 20,
            spsa_a: 0.2,
            spsa_c: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimized {
    pub energy: f64,
    pub state: VariationalState,
    /// Per-iteration best energy and parameter norm, all starts concatenated.
    pub trace: Vec<TracePoint>,
    pub iterations: usize,
    pub evaluations: usize,
    /// The best start reported convergence.
    pub converged: bool,
}

/// Minimize `objective` over amplitudes and angles. Amplitudes are
/// normalized before every call; errors raised by the objective abort the
/// run.
pub fn minimize<F>(
    initial: &VariationalState,
    spec: &AnsatzSpec,
    mut objective: F,
    opts: &MinimizeOptions,
) -> Result<Minimized>
where
    F: FnMut(&VariationalState) -> Result<f64>,
{
    if opts.max_iter == 0 {
        return Err(usage!("max_iter must be positive"));
    }
    if opts.restarts == 0 {
        return Err(usage!("restarts must be at least 1"));
    }
    let blocks = initial.block_count();
    initial.validate(blocks, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut failure: Option<Error> = None;
    let mut f = |x: &[f64]| -> f64 {
        if failure.is_some() {
            return f64::INFINITY;
        }
        let mut vs = match VariationalState::from_params(x, blocks, spec) {
            Ok(vs) => vs,
            Err(e) => {
                failure = Some(e);
                return f64::INFINITY;
            }
        };
        // A vanishing amplitude vector is outside the domain, not an error.
        match vs.normalized_alpha() {
            Ok(a) => vs.alpha = a,
            Err(_) => return f64::INFINITY,
        }
        let result = objective(&vs);
        result.unwrap_or_else(|e| {
            failure = Some(e);
            f64::INFINITY
        })
    };

    let mut best: Option<OptResult> = None;
    let mut trace = Vec::new();
    let (mut iterations, mut evaluations) = (0, 0);
    for start in 0..opts.restarts {
        let x0 = if start == 0 {
            initial.to_params()
        } else {
            VariationalState::random(blocks, spec, opts.init_spread, &mut rng).to_params()
        };
        let run = match opts.optimizer {
            Optimizer::NelderMead => NelderMead {
                max_iter: opts.max_iter,
                tol: opts.tol,
                step: opts.step,
                rebuilds: opts.rebuilds,
            }
            .minimize(&mut f, &x0)?,
            Optimizer::Spsa => Spsa {
                max_iter: opts.max_iter,
                a: opts.spsa_a,
                c: opts.spsa_c,
                seed: opts.seed.wrapping_add(start as u64),
            }
            .minimize(&mut f, &x0)?,
        };
        iterations += run.iterations;
        evaluations += run.evaluations;
        trace.extend_from_slice(&run.trace);
        if best.as_ref().is_none_or(|b| run.f < b.f) {
            best = Some(run);
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let best = best.expect("at least one start");
    let mut state = VariationalState::from_params(&best.x, blocks, spec)?;
    state.alpha = state.normalized_alpha()?;
    Ok(Minimized {
        energy: best.f,
        state,
        trace,
        iterations,
        evaluations,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_sector::compute_factors;
    use crate::encoding::EncodingKind;
    use crate::model::HubbardParams;
    use crate::sim::SimMode;
    use crate::vqe::{energy, HubbardOperators};

    #[test]
    fn quadratic_objective() {
        let spec = AnsatzSpec::linear(1, 1);
        let init = VariationalState::uniform(1, &spec);
        let r = minimize(
            &init,
            &spec,
            |vs| Ok((vs.angles.get(0)[0] - 2.0).powi(2)),
            &MinimizeOptions {
                restarts: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.energy < 1e-8);
        assert!((r.state.angles.get(0)[0] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn zero_iterations_rejected() {
        let spec = AnsatzSpec::linear(1, 1);
        let init = VariationalState::uniform(1, &spec);
        let opts = MinimizeOptions {
            max_iter: 0,
            ..Default::default()
        };
        assert!(minimize(&init, &spec, |_| Ok(0.0), &opts).is_err());
    }

    #[test]
    fn objective_error_propagates() {
        let spec = AnsatzSpec::linear(1, 1);
        let init = VariationalState::uniform(1, &spec);
        let r = minimize(&init, &spec, |_| Err(usage!("boom")), &MinimizeOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn dimer_reaches_closed_form() {
        let p = HubbardParams {
            periodic: false,
            ..HubbardParams::half_filled(2, -1.0, 4.0)
        };
        let f = compute_factors(&p).unwrap();
        let ops = HubbardOperators::build(&p, EncodingKind::Compact, true, None).unwrap();
        let spec = AnsatzSpec::linear(ops.qubits, 2);
        let init = VariationalState::uniform(f.block_count(), &spec);
        let r = minimize(
            &init,
            &spec,
            |vs| Ok(energy(vs, &spec, &f, &ops, SimMode::Exact)?.total),
            &MinimizeOptions::default(),
        )
        .unwrap();
        let exact = (4.0 - 32.0f64.sqrt()) / 2.0;
        assert!((r.energy - exact).abs() < 1e-5, "{} vs {exact}", r.energy);
    }
}
