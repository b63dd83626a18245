//! Brute-force `2^M × 2^M` fermion operators assembled from Kronecker
//! products of 2×2 matrices. Shares no code with [`crate::fock`], so it can
//! serve as an independent reference for sign bookkeeping.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::fock::OperatorString;
use crate::model::FermionHamiltonian;

/// Largest mode count the dense oracle builds.
pub const MAX_DENSE_MODES: usize = 12;

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_modes(modes: usize) -> Result<()> {
    if modes > MAX_DENSE_MODES {
        return Err(crate::Error::Capacity(format!(
            "dense oracle limited to {MAX_DENSE_MODES} modes, got {modes}"
        )));
    }
    Ok(())
}

/// `c_μ` on `modes` modes; basis index bit `ν` is `n_ν`, and `Z` factors on
/// the modes below `μ` carry the ordering sign.
pub fn annihilation(mu: usize, modes: usize) -> Result<CMat> {
    check_modes(modes)?;
    if mu >= modes {
        return Err(usage!("mode {mu} out of range for {modes} modes"));
    }
    let id = CMat::identity(2, 2);
    let z = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let lower = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    // Kronecker order puts the first factor on the highest bit.
    let mut m = CMat::identity(1, 1);
    for nu in (0..modes).rev() {
        let f = match nu.cmp(&mu) {
            std::cmp::Ordering::Greater => &id,
            std::cmp::Ordering::Equal => &lower,
            std::cmp::Ordering::Less => &z,
        };
        m = m.kronecker(f);
    }
    Ok(m)
}

pub fn creation(mu: usize, modes: usize) -> Result<CMat> {
    Ok(annihilation(mu, modes)?.adjoint())
}

/// Dense matrix of an operator string, coefficient included.
pub fn operator_dense(ops: &OperatorString, modes: usize) -> Result<CMat> {
    check_modes(modes)?;
    let mut m = CMat::identity(1 << modes, 1 << modes);
    for op in ops.ops() {
        let f = if op.dagger {
            creation(op.mode.0, modes)?
        } else {
            annihilation(op.mode.0, modes)?
        };
        m *= f;
    }
    Ok(m * ops.coefficient)
}

pub fn hamiltonian_dense(h: &FermionHamiltonian) -> Result<CMat> {
    let n = h.mode_count;
    check_modes(n)?;
    let mut m = CMat::zeros(1 << n, 1 << n);
    for t in h.terms() {
        m += operator_dense(&t, n)?;
    }
    Ok(m)
}

/// Rows/columns of `m` whose basis labels satisfy `keep`, in ascending order.
pub fn restrict(m: &CMat, keep: impl Fn(usize) -> bool) -> CMat {
    let idx: Vec<usize> = (0..m.nrows()).filter(|&b| keep(b)).collect();
    CMat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
