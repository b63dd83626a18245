//! Spin-up factors of the Hubbard spin split, computed once per run.
//!
//! With spin-up modes on the classical side the only non-diagonal spin-up
//! quantity is the hopping matrix `T_{n'n} = ⟨n'|T↑|n⟩`; everything else is
//! a particle count or a site occupation.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::error::Result;
use crate::fock::{ConfigBasis, Configuration};
use crate::model::{hopping_operator, HubbardParams};

/// Cached classical data for the spin-up sector.
#[derive(Debug, Clone)]
pub struct ClassicalFactors {
    pub sites: usize,
    basis: ConfigBasis,
    /// `N_{n↑}` per configuration.
    pub n_total: Vec<u32>,
    /// `occupations[k][i] = n_{i↑}` of configuration `k`.
    pub occupations: Vec<Vec<u8>>,
    /// Nonzero entries of `T_{n'↑ n↑}` keyed by `(row, col)`.
    pub t_matrix: BTreeMap<(usize, usize), f64>,
}

impl ClassicalFactors {
    pub fn configs(&self) -> &[Configuration] {
        self.basis.configs()
    }

    /// `Λ`, the number of blocks.
    pub fn block_count(&self) -> usize {
        self.basis.len()
    }

    pub fn t(&self, row: usize, col: usize) -> f64 {
        self.t_matrix.get(&(row, col)).copied().unwrap_or(0.0)
    }

    /// Write configurations and `T` triplets as plain text.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# sites {}", self.sites)?;
        writeln!(w, "# block bits n_total occupations")?;
        for (k, c) in self.configs().iter().enumerate() {
            let occ: String = self.occupations[k].iter().map(|o| o.to_string()).collect();
            writeln!(w, "config {k} {:#b} {} {occ}", c.bits(), self.n_total[k])?;
        }
        writeln!(w, "# row col value")?;
        for (&(r, c), v) in &self.t_matrix {
            writeln!(w, "t {r} {c} {v}")?;
        }
        Ok(())
    }
}

/// Enumerate the `L choose N↑` spin-up configurations and their factors.
pub fn compute_factors(params: &HubbardParams) -> Result<ClassicalFactors> {
    params.validate()?;
    let l = params.sites;
    let basis = ConfigBasis::fixed_number(l, params.n_up)?;
    let n_total = basis.configs().iter().map(Configuration::count).collect();
    let occupations = basis
        .configs()
        .iter()
        .map(|c| (0..l).map(|i| (c.bits() >> i & 1) as u8).collect())
        .collect();

    let hop = hopping_operator(params, 0);
    let mut t_matrix = BTreeMap::new();
    for (col, ket) in basis.configs().iter().enumerate() {
        for op in &hop {
            if let Some((image, sign)) = op.apply(ket)? {
                let row = basis
                    .position(image.bits())
                    .expect("hopping conserves particle number");
                *t_matrix.entry((row, col)).or_insert(0.0) += op.coefficient.re * f64::from(sign);
            }
        }
    }
    t_matrix.retain(|_, v: &mut f64| *v != 0.0);

    Ok(ClassicalFactors {
        sites: l,
        basis,
        n_total,
        occupations,
        t_matrix,
    })
}

/// Strictly upper-triangular `(row, col)` pairs with `T_{row,col} ≠ 0`.
pub fn nonzero_blocks(f: &ClassicalFactors) -> Vec<(usize, usize)> {
    f.t_matrix
        .keys()
        .copied()
        .filter(|&(r, c)| r < c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{matrix_element, Configuration};
    use num_complex::Complex64;

    fn ring(l: usize, n_up: usize) -> HubbardParams {
        HubbardParams {
            sites: l,
            hopping: -1.0,
            onsite: 4.0,
            chem_potential: 0.0,
            n_up,
            n_down: n_up,
            periodic: true,
        }
    }

    #[test]
    fn four_sites_two_up() {
        let f = compute_factors(&ring(4, 2)).unwrap();
        assert_eq!(f.block_count(), 6);
        assert_eq!(f.n_total, vec![2; 6]);
        for (k, row) in f.occupations.iter().enumerate() {
            assert_eq!(row.iter().map(|&o| u32::from(o)).sum::<u32>(), f.n_total[k]);
        }
        // {0,1} is block 0 (bits 3), {0,2} is block 1 (bits 5).
        assert_eq!(f.configs()[0].bits(), 0b0011);
        assert_eq!(f.configs()[1].bits(), 0b0101);
        assert_eq!(f.t(1, 0), 1.0);
    }

    #[test]
    fn empty_sector() {
        let f = compute_factors(&ring(4, 0)).unwrap();
        assert_eq!(f.block_count(), 1);
        assert!(f.t_matrix.is_empty());
        assert_eq!(f.t(0, 0), 0.0);
        assert!(nonzero_blocks(&f).is_empty());
    }

    #[test]
    fn symmetric_and_matches_matrix_elements() {
        for (l, n) in [(3, 1), (4, 2), (5, 2), (6, 3)] {
            let p = ring(l, n);
            let f = compute_factors(&p).unwrap();
            let hop = hopping_operator(&p, 0);
            let configs: Vec<Configuration> = f.configs().to_vec();
            for (r, bra) in configs.iter().enumerate() {
                for (c, ket) in configs.iter().enumerate() {
                    let direct: Complex64 = hop
                        .iter()
                        .map(|op| matrix_element(bra, op, ket).unwrap())
                        .sum();
                    assert_eq!(direct.re, f.t(r, c));
                    assert_eq!(f.t(r, c), f.t(c, r));
                }
                assert_eq!(f.t(r, r), 0.0);
            }
        }
    }

    #[test]
    fn blocks_are_single_hops() {
        let f = compute_factors(&ring(4, 2)).unwrap();
        let blocks = nonzero_blocks(&f);
        let configs = f.configs();
        let mut expected = Vec::new();
        for r in 0..configs.len() {
            for c in r + 1..configs.len() {
                let diff = configs[r].bits() ^ configs[c].bits();
                // one particle moved between ring neighbours
                let adjacent = diff.count_ones() == 2
                    && (0..4).any(|i| diff == (1 << i) | (1 << ((i + 1) % 4)));
                if adjacent {
                    expected.push((r, c));
                }
            }
        }
        assert_eq!(blocks, expected);
        assert!(blocks.iter().all(|&(r, c)| r < c));
    }

    #[test]
    fn row_sparsity_bound() {
        for (l, n) in [(4, 2), (6, 3), (6, 2)] {
            let f = compute_factors(&ring(l, n)).unwrap();
            for r in 0..f.block_count() {
                let nnz = f.t_matrix.keys().filter(|&&(row, _)| row == r).count();
                assert!(nnz <= 2 * n);
            }
        }
    }

    #[test]
    fn dump_lists_triplets() {
        let f = compute_factors(&ring(4, 2)).unwrap();
        let mut buf = Vec::new();
        f.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let triplets = text.lines().filter(|l| l.starts_with("t ")).count();
        assert_eq!(triplets, f.t_matrix.len());
        assert!(text.contains("config 0 0b11 2 1100"));
    }
}
