//! Derivative-free minimizers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub f: f64,
    pub x_norm: f64,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Outcome of one minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best objective value and its parameter norm after each iteration.
    pub trace: Vec<TracePoint>,
}

/// Nelder–Mead with dimension-adaptive coefficients and simplex rebuilds
/// around the incumbent after each convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop when the spread of simplex values drops below this.
    pub tol: f64,
    /// Edge length of the initial (and every rebuilt) simplex.
    pub step: f64,
    /// Rebuilds attempted after the first convergence; a rebuild that
    /// fails to improve by more than `tol` ends the run.
    pub rebuilds: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            tol: 1e-10,
            step: 0.5,
            rebuilds: 20,
        }
    }
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Result<OptResult>
    where
        F: FnMut(&[f64]) -> f64,
    {
        if self.max_iter == 0 {
            return Err(usage!("max_iter must be positive"));
        }
        let n = x0.len();
        if n == 0 {
            let v = f(x0);
            return Ok(OptResult {
                x: Vec::new(),
                f: v,
                iterations: 0,
                evaluations: 1,
                converged: true,
                trace: vec![TracePoint { f: v, x_norm: 0.0 }],
            });
        }
        let nf = n as f64;
        let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
        let (rho, sigma) = (0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

        let mut evaluations = 0usize;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut trace = Vec::new();
        let mut iterations = 0usize;
        let mut best_x = x0.to_vec();
        let mut best_f = eval(x0);
        let mut converged = false;
        let mut rebuild = 0usize;

        'outer: loop {
            let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
            simplex.push((best_x.clone(), best_f));
            for k in 0..n {
                let mut x = best_x.clone();
                x[k] += self.step;
                let v = eval(&x);
                simplex.push((x, v));
            }
            let start_f = best_f;
            loop {
                simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
                let (lo, hi) = (simplex[0].1, simplex[n].1);
                if lo < best_f {
                    best_f = lo;
                    best_x.clone_from(&simplex[0].0);
                }
                if trace.len() < iterations {
                    trace.push(TracePoint {
                        f: best_f,
                        x_norm: norm(&best_x),
                    });
                }
                if (hi - lo).abs() <= self.tol * (1.0 + lo.abs()) {
                    break;
                }
                if iterations >= self.max_iter {
                    break 'outer;
                }
                iterations += 1;

                let mut centroid = vec![0.0; n];
                for (x, _) in &simplex[..n] {
                    for (c, xi) in centroid.iter_mut().zip(x) {
                        *c += xi / nf;
                    }
                }
                let along = |t: f64| -> Vec<f64> {
                    centroid
                        .iter()
                        .zip(&simplex[n].0)
                        .map(|(c, w)| c + t * (c - w))
                        .collect()
                };
                let xr = along(alpha);
                let fr = eval(&xr);
                if fr < simplex[0].1 {
                    let xe = along(gamma);
                    let fe = eval(&xe);
                    simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                } else if fr < simplex[n - 1].1 {
                    simplex[n] = (xr, fr);
                } else {
                    let (xc, fc) = if fr < simplex[n].1 {
                        let xc = along(alpha * rho);
                        let fc = eval(&xc);
                        (xc, fc)
                    } else {
                        let xc = along(-rho);
                        let fc = eval(&xc);
                        (xc, fc)
                    };
                    if fc < fr.min(simplex[n].1) {
                        simplex[n] = (xc, fc);
                    } else {
                        let x_best = simplex[0].0.clone();
                        for (x, v) in simplex.iter_mut().skip(1) {
                            for (xi, bi) in x.iter_mut().zip(&x_best) {
                                *xi = bi + sigma * (*xi - bi);
                            }
                            *v = eval(x);
                        }
                    }
                }
            }
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 < best_f {
                best_f = simplex[0].1;
                best_x.clone_from(&simplex[0].0);
            }
            if trace.len() < iterations {
                trace.push(TracePoint {
                    f: best_f,
                    x_norm: norm(&best_x),
                });
            }
            if rebuild >= self.rebuilds || (rebuild > 0 && start_f - best_f <= self.tol * (1.0 + best_f.abs())) {
                converged = true;
                break;
            }
            rebuild += 1;
        }
        Ok(OptResult {
            x: best_x,
            f: best_f,
            iterations,
            evaluations,
            converged,
            trace,
        })
    }
}

/// Simultaneous-perturbation stochastic approximation with the standard
/// gain decay `a_k = a/(k+1+A)^0.602`, `c_k = c/(k+1)^0.101`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spsa {
    pub max_iter: usize,
    pub a: f64,
    pub c: f64,
    pub seed: u64,
}

impl Default for Spsa {
    fn default() -> Self {
        Self {
            max_iter: 2_000,
            a: 0.2,
            c: 0.1,
            seed: 0,
        }
    }
}

impl Spsa {
    /// Returns the final iterate; `f` is re-evaluated there once.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Result<OptResult>
    where
        F: FnMut(&[f64]) -> f64,
    {
        if self.max_iter == 0 {
            return Err(usage!("max_iter must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stability = 0.1 * self.max_iter as f64;
        let mut x = x0.to_vec();
        let mut trace = Vec::with_capacity(self.max_iter);
        let mut evaluations = 0usize;
        for k in 0..self.max_iter {
            let kf = k as f64 + 1.0;
            let ak = self.a / (kf + stability).powf(0.602);
            let ck = self.c / kf.powf(0.101);
            let delta: Vec<f64> = (0..x.len())
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect();
            let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi + ck * d).collect();
            let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi - ck * d).collect();
            let (fp, fm) = (f(&plus), f(&minus));
            evaluations += 2;
            let g = (fp - fm) / (2.0 * ck);
            for (xi, d) in x.iter_mut().zip(&delta) {
                *xi -= ak * g / d;
            }
            trace.push(TracePoint {
                f: 0.5 * (fp + fm),
                x_norm: norm(&x),
            });
        }
        let fx = f(&x);
        Ok(OptResult {
            x,
            f: fx,
            iterations: self.max_iter,
            evaluations: evaluations + 1,
            converged: true,
            trace,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_1d() {
        let r = NelderMead::default()
            .minimize(|x| (x[0] - 2.0).powi(2), &[0.0])
            .unwrap();
        assert!((r.x[0] - 2.0).abs() < 1e-4, "{:?}", r.x);
        assert!(r.f < 1e-8);
        assert!(r.converged);
    }

    #[test]
    fn rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = NelderMead::default().minimize(rosen, &[-1.2, 1.0]).unwrap();
        assert!(r.f < 1e-8, "{}", r.f);
    }

    #[test]
    fn trace_is_monotone() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>();
        let r = NelderMead::default().minimize(f, &[0.0; 8]).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].f <= w[0].f));
        assert_eq!(r.trace.len(), r.iterations);
        assert!(r.f < 1e-8);
    }

    #[test]
    fn zero_iterations_rejected() {
        let nm = NelderMead {
            max_iter: 0,
            ..Default::default()
        };
        assert!(nm.minimize(|x| x[0], &[0.0]).is_err());
        let spsa = Spsa {
            max_iter: 0,
            ..Default::default()
        };
        assert!(spsa.minimize(|x| x[0], &[0.0]).is_err());
    }

    #[test]
    fn spsa_quadratic_and_deterministic() {
        let f = |x: &[f64]| (x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2);
        let spsa = Spsa {
            seed: 5,
            ..Default::default()
        };
        let a = spsa.minimize(f, &[0.0, 0.0]).unwrap();
        let b = spsa.minimize(f, &[0.0, 0.0]).unwrap();
        assert_eq!(a, b);
        assert!(a.f < 1e-3, "{}", a.f);
    }
}
