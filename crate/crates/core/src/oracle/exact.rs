//! Exact diagonalization of the Hubbard model in a fixed `(N↑, N↓)` sector.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::fock::{ConfigBasis, Configuration};
use crate::model::{build_hubbard, HubbardParams};

/// Largest sector handled.
pub const MAX_SECTOR_DIM: usize = 1_000_000;
/// Sectors up to this size are solved densely.
pub const DENSE_LIMIT: usize = 512;

/// Product basis `(up config, down config)`, up index major.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub sites: usize,
    pub up: ConfigBasis,
    pub down: ConfigBasis,
}

impl SectorBasis {
    pub fn new(params: &HubbardParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            sites: params.sites,
            up: ConfigBasis::fixed_number(params.sites, params.n_up)?,
            down: ConfigBasis::fixed_number(params.sites, params.n_down)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.up.len() * self.down.len()
    }

    pub fn index(&self, up: usize, down: usize) -> usize {
        up * self.down.len() + down
    }

    /// Full-mode bit pattern of product state `k`: up modes low, down high.
    pub fn bits(&self, k: usize) -> u64 {
        let (u, d) = (k / self.down.len(), k % self.down.len());
        self.up.configs()[u].bits() | self.down.configs()[d].bits() << self.sites
    }

    fn position(&self, bits: u64) -> Option<usize> {
        let mask = (1u64 << self.sites) - 1;
        let u = self.up.position(bits & mask)?;
        let d = self.down.position(bits >> self.sites)?;
        Some(self.index(u, d))
    }
}

/// Sparse real symmetric sector Hamiltonian in row-compressed form.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    pub dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SectorHamiltonian {
    pub fn build(params: &HubbardParams, basis: &SectorBasis) -> Result<Self> {
        let h = build_hubbard(params)?;
        let modes = 2 * params.sites;
        let all = (1u64 << modes) - 1;
        let terms = h.terms();
        let rows: Vec<Vec<(usize, f64)>> = (0..basis.dim())
            .into_par_iter()
            .map(|col| -> Result<Vec<(usize, f64)>> {
                let ket = Configuration::new(basis.bits(col), all)?;
                let mut entries: Vec<(usize, f64)> = Vec::new();
                for t in &terms {
                    if let Some((image, sign)) = t.apply(&ket)? {
                        let row = basis
                            .position(image.bits())
                            .expect("Hubbard terms conserve both spin counts");
                        entries.push((row, t.coefficient.re * f64::from(sign)));
                    }
                }
                entries.sort_by_key(|e| e.0);
                entries.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += b.1;
                        true
                    } else {
                        false
                    }
                });
                entries.retain(|e| e.1 != 0.0);
                Ok(entries)
            })
            .collect::<Result<_>>()?;
        // Column `col` lists `H[row, col]`; the matrix is symmetric, so this
        // is also row `col`.
        Ok(Self {
            dim: basis.dim(),
            rows,
        })
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(r, yr)| {
            *yr = self.rows[r].iter().map(|&(c, v)| v * x[c]).sum();
        });
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                m[(r, c)] = v;
            }
        }
        m
    }
}

/// Ground energy and normalized eigenvector over a [`SectorBasis`].
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub basis: SectorBasis,
}

impl GroundState {
    /// Amplitude of `(up, down)`.
    pub fn amplitude(&self, up: usize, down: usize) -> f64 {
        self.vector[self.basis.index(up, down)]
    }
}

/// Lowest eigenpair of the sector Hamiltonian.
pub fn exact_ground(params: &HubbardParams) -> Result<GroundState> {
    let basis = SectorBasis::new(params)?;
    let dim = basis.dim();
    if dim > MAX_SECTOR_DIM {
        return Err(Error::Capacity(format!(
            "sector dimension {dim} exceeds the limit of {MAX_SECTOR_DIM}"
        )));
    }
    let h = SectorHamiltonian::build(params, &basis)?;
    let (energy, mut vector) = if dim <= DENSE_LIMIT {
        let eig = h.to_dense().symmetric_eigen();
        let k = eig.eigenvalues.argmin().0;
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
    } else {
        lanczos_ground(&h, 1e-12, 500)?
    };
    // Fix the arbitrary sign: largest-magnitude component positive.
    let lead = vector
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if lead < 0.0 {
        vector.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(GroundState {
        energy,
        vector,
        basis,
    })
}

/// Lowest sector energy over all `N↓` accepted by `keep`, with `N↑` fixed.
pub fn exact_ground_over_down(params: &HubbardParams, keep: impl Fn(usize) -> bool) -> Result<f64> {
    let mut best: Option<f64> = None;
    for n_down in (0..=params.sites).filter(|&n| keep(n)) {
        let e = exact_ground(&HubbardParams { n_down, ..*params })?.energy;
        best = Some(best.map_or(e, |b: f64| b.min(e)));
    }
    best.ok_or_else(|| usage!("no admissible spin-down particle number"))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.par_iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Restarted Lanczos with full reorthogonalization inside each cycle.
fn lanczos_ground(h: &SectorHamiltonian, tol: f64, max_cycles: usize) -> Result<(f64, Vec<f64>)> {
    const KRYLOV: usize = 60;
    let n = h.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let norm = dot(&start, &start).sqrt();
    start.iter_mut().for_each(|v| *v /= norm);
    let mut prev = f64::INFINITY;
    let mut w = vec![0.0; n];
    for _ in 0..max_cycles {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..KRYLOV.min(n) {
            h.apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            for v in &basis {
                let p = dot(&w, v);
                axpy(&mut w, -p, v);
            }
            let b = dot(&w, &w).sqrt();
            if b < 1e-13 || j + 1 == KRYLOV.min(n) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let k = eig.eigenvalues.argmin().0;
        let e = eig.eigenvalues[k];
        let y: DVector<f64> = eig.eigenvectors.column(k).into();
        let mut ritz = vec![0.0; n];
        for (i, v) in basis.iter().enumerate() {
            axpy(&mut ritz, y[i], v);
        }
        let norm = dot(&ritz, &ritz).sqrt();
        ritz.iter_mut().for_each(|v| *v /= norm);
        h.apply(&ritz, &mut w);
        axpy(&mut w, -e, &ritz);
        let residual = dot(&w, &w).sqrt();
        if residual < tol.sqrt() * (1.0 + e.abs()) && (prev - e).abs() < tol * (1.0 + e.abs()) {
            return Ok((e, ritz));
        }
        prev = e;
        start = ritz;
    }
    Err(Error::Capacity("Lanczos did not converge".into()))
}
