//! Hartree mean field for the Hubbard ring.
//!
//! `U n↑ n↓ → U(⟨n↑⟩ n↓ + n↑ ⟨n↓⟩ − ⟨n↑⟩⟨n↓⟩)`; each spin species then sees
//! the one-body matrix `h0 + U diag(⟨n_{−σ}⟩)`. Degenerate levels at the
//! Fermi energy are filled fractionally and evenly.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::model::HubbardParams;

/// Levels closer than this count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanFieldKind {
    /// Spin-symmetric densities.
    Restricted,
    /// Independent spin densities, seeded with a staggered moment.
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldOptions {
    pub kind: MeanFieldKind,
    /// Weight of the new densities in each update.
    pub mixing: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MeanFieldOptions {
    fn default() -> Self {
        Self {
            kind: MeanFieldKind::Restricted,
            mixing: 0.5,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldState {
    pub n_up: Vec<f64>,
    pub n_down: Vec<f64>,
    pub energy: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn one_body(params: &HubbardParams) -> DMatrix<f64> {
    let l = params.sites;
    let mut h = DMatrix::from_diagonal_element(l, l, params.chem_potential);
    for (i, j) in params.bonds() {
        h[(i, j)] += params.hopping;
        h[(j, i)] += params.hopping;
    }
    h
}

/// Densities and band energy of `n` particles in the levels of `h`.
fn fill(h: &DMatrix<f64>, n: usize) -> (Vec<f64>, f64) {
    let l = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut occ = vec![0.0; l];
    if n > 0 {
        let fermi = eig.eigenvalues[order[n - 1]];
        let below = order
            .iter()
            .filter(|&&k| eig.eigenvalues[k] < fermi - DEGENERACY_TOL)
            .count();
        let shell: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&k| (eig.eigenvalues[k] - fermi).abs() <= DEGENERACY_TOL)
            .collect();
        for &k in &order[..below] {
            occ[k] = 1.0;
        }
        let share = (n - below) as f64 / shell.len() as f64;
        for &k in &shell {
            occ[k] = share;
        }
    }
    let mut dens = vec![0.0; l];
    let mut band = 0.0;
    for (k, &o) in occ.iter().enumerate() {
        if o == 0.0 {
            continue;
        }
        band += o * eig.eigenvalues[k];
        for (i, d) in dens.iter_mut().enumerate() {
            *d += o * eig.eigenvectors[(i, k)].powi(2);
        }
    }
    (dens, band)
}

/// Self-consistent Hartree solution. Non-convergence is reported through
/// `converged`, not as an error.
pub fn mean_field(params: &HubbardParams, opts: &MeanFieldOptions) -> Result<MeanFieldState> {
    params.validate()?;
    let l = params.sites;
    let h0 = one_body(params);
    let u = params.onsite;
    let (fu, fd) = (params.n_up as f64 / l as f64, params.n_down as f64 / l as f64);
    let (mut n_up, mut n_down): (Vec<f64>, Vec<f64>) = match opts.kind {
        MeanFieldKind::Restricted => (vec![fu; l], vec![fd; l]),
        MeanFieldKind::Unrestricted => {
            let m = 0.1 * fu.min(1.0 - fu).min(fd).min(1.0 - fd);
            (
                (0..l).map(|i| fu + if i % 2 == 0 { m } else { -m }).collect(),
                (0..l).map(|i| fd - if i % 2 == 0 { m } else { -m }).collect(),
            )
        }
    };
    let mut converged = false;
    let mut iterations = 0;
    let mut energy = f64::NAN;
    for it in 0..opts.max_iter {
        iterations = it + 1;
        let field = |other: &[f64]| {
            let mut h = h0.clone();
            for (i, n) in other.iter().enumerate() {
                h[(i, i)] += u * n;
            }
            h
        };
        let (mut out_up, band_up) = fill(&field(&n_down), params.n_up);
        let (mut out_down, band_down) = fill(&field(&n_up), params.n_down);
        if opts.kind == MeanFieldKind::Restricted && params.n_up == params.n_down {
            for i in 0..l {
                let avg = 0.5 * (out_up[i] + out_down[i]);
                out_up[i] = avg;
                out_down[i] = avg;
            }
        }
        let double: f64 = n_up.iter().zip(&n_down).map(|(a, b)| a * b).sum();
        energy = band_up + band_down - u * double;
        let change = out_up
            .iter()
            .zip(&n_up)
            .chain(out_down.iter().zip(&n_down))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < opts.tol {
            converged = true;
            break;
        }
        for (n, o) in n_up.iter_mut().zip(&out_up) {
            *n += opts.mixing * (o - *n);
        }
        for (n, o) in n_down.iter_mut().zip(&out_down) {
            *n += opts.mixing * (o - *n);
        }
    }
    Ok(MeanFieldState {
        n_up,
        n_down,
        energy,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_ground;

    #[test]
    fn free_limit_is_exact() {
        let p = HubbardParams::half_filled(4, -1.0, 0.0);
        let mf = mean_field(&p, &MeanFieldOptions::default()).unwrap();
        assert!(mf.converged);
        assert!((mf.energy - exact_ground(&p).unwrap().energy).abs() < 1e-10);
    }

    #[test]
    fn restricted_half_filling_closed_form() {
        for u in [1.0, 4.0, 8.0] {
            let p = HubbardParams::half_filled(4, -1.0, u);
            let mf = mean_field(&p, &MeanFieldOptions::default()).unwrap();
            assert!(mf.converged);
            assert!((mf.energy - (-4.0 + u * 4.0 / 4.0)).abs() < 1e-10, "{}", mf.energy);
            assert!(mf.n_up.iter().all(|n| (n - 0.5).abs() < 1e-10));
        }
    }

    #[test]
    fn above_exact_and_gap_grows() {
        let mut prev = 0.0;
        for u in [4.0, 6.0, 8.0] {
            let p = HubbardParams::half_filled(4, -1.0, u);
            let ed = exact_ground(&p).unwrap().energy;
            for kind in [MeanFieldKind::Restricted, MeanFieldKind::Unrestricted] {
                let opts = MeanFieldOptions {
                    kind,
                    ..Default::default()
                };
                let mf = mean_field(&p, &opts).unwrap();
                assert!(mf.converged, "{kind:?} U={u}");
                assert!(mf.energy > ed, "{kind:?} U={u}: {} vs {ed}", mf.energy);
                let sum_up: f64 = mf.n_up.iter().sum();
                assert!((sum_up - 2.0).abs() < 1e-8);
            }
            let gap = mean_field(&p, &MeanFieldOptions::default()).unwrap().energy - ed;
            assert!(gap > prev);
            prev = gap;
        }
    }
}
