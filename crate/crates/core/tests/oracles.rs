use blockvqe::classical_sector::compute_factors;
use blockvqe::fock::enumerate_configs;
use blockvqe::model::{build_hubbard, hopping_operator};
use blockvqe::oracle::dense::{eigenvalues, hamiltonian_dense, operator_dense, restrict};
use blockvqe::oracle::{exact_ground, mean_field, MeanFieldKind, MeanFieldOptions};
use blockvqe::HubbardParams;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn params(sites: usize, n_up: usize, n_down: usize, t: f64, u: f64, eps: f64) -> HubbardParams {
    HubbardParams {
        sites,
        hopping: t,
        onsite: u,
        chem_potential: eps,
        n_up,
        n_down,
        periodic: true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spin_flip_symmetry(sites in 2usize..=5, a in 0usize..=5, b in 0usize..=5, u in 0.0f64..8.0, t in -2.0f64..2.0) {
        prop_assume!(a <= sites && b <= sites);
        let e1 = exact_ground(&params(sites, a, b, t, u, 0.1)).unwrap().energy;
        let e2 = exact_ground(&params(sites, b, a, t, u, 0.1)).unwrap().energy;
        prop_assert!((e1 - e2).abs() < 1e-10);
    }

    #[test]
    fn sector_equals_full_space_restriction(sites in 2usize..=4, a in 0usize..=4, b in 0usize..=4, u in 0.0f64..8.0, eps in -1.0f64..1.0) {
        prop_assume!(a <= sites && b <= sites);
        let p = params(sites, a, b, -1.0, u, eps);
        let h = hamiltonian_dense(&build_hubbard(&p).unwrap()).unwrap();
        let up_mask = (1usize << sites) - 1;
        let full = eigenvalues(&restrict(&h, |s| {
            (s & up_mask).count_ones() as usize == a && (s >> sites).count_ones() as usize == b
        }))[0];
        let ed = exact_ground(&p).unwrap().energy;
        prop_assert!((ed - full).abs() < 1e-10, "{ed} vs {full}");
    }

    #[test]
    fn mean_field_lies_above_exact(u in 0.0f64..8.0, unrestricted in any::<bool>()) {
        let p = HubbardParams::half_filled(4, -1.0, u);
        let kind = if unrestricted { MeanFieldKind::Unrestricted } else { MeanFieldKind::Restricted };
        let mf = mean_field(&p, &MeanFieldOptions { kind, ..Default::default() }).unwrap();
        let ed = exact_ground(&p).unwrap().energy;
        prop_assert!(mf.energy >= ed - 1e-10, "{} < {ed}", mf.energy);
    }

    #[test]
    fn hopping_factors_match_dense_restriction(sites in 2usize..=6, n_up in 0usize..=6) {
        prop_assume!(n_up <= sites);
        let p = params(sites, n_up, 0, -1.0, 0.0, 0.0);
        let f = compute_factors(&p).unwrap();
        let configs = enumerate_configs(sites, n_up).unwrap();
        let dense = hopping_operator(&p, 0)
            .iter()
            .fold(DMatrix::zeros(1 << sites, 1 << sites), |acc, o| acc + operator_dense(o, sites).unwrap());
        for (r, cr) in configs.iter().enumerate() {
            let mut off_diagonal = 0;
            for (c, cc) in configs.iter().enumerate() {
                let want = dense[(cr.bits() as usize, cc.bits() as usize)];
                prop_assert_eq!(want.im, 0.0);
                prop_assert_eq!(f.t(r, c), want.re);
                if r != c && f.t(r, c) != 0.0 {
                    off_diagonal += 1;
                }
            }
            prop_assert!(off_diagonal <= 2 * n_up);
        }
    }
}

#[test]
fn exact_ground_vector_is_an_eigenvector() {
    let p = HubbardParams::half_filled(4, -1.0, 5.0);
    let g = exact_ground(&p).unwrap();
    let h = hamiltonian_dense(&build_hubbard(&p).unwrap()).unwrap();
    let n = 1usize << (2 * p.sites);
    let mut psi = nalgebra::DVector::<blockvqe::Complex64>::zeros(n);
    for (k, v) in g.vector.iter().enumerate() {
        psi[g.basis.bits(k) as usize] = blockvqe::Complex64::new(*v, 0.0);
    }
    let r = &h * &psi - &psi * blockvqe::Complex64::new(g.energy, 0.0);
    assert!(r.norm() < 1e-9, "residual {}", r.norm());
}

#[test]
fn large_sector_uses_iterative_solver() {
    // dim 4900 > the dense limit. At U = 0 each spin fills k = 0, ±π/4 of
    // the 8-site ring (the k = ±π/2 shell sits at zero energy).
    let free = HubbardParams::half_filled(8, -1.0, 0.0);
    let g = exact_ground(&free).unwrap();
    assert_eq!(g.vector.len(), 4900);
    let norm: f64 = g.vector.iter().map(|v| v * v).sum();
    assert!((norm - 1.0).abs() < 1e-10);
    let closed = 2.0 * -(2.0 + 2.0 * 2f64.sqrt());
    assert!((g.energy - closed).abs() < 1e-9, "{} vs {closed}", g.energy);

    let p = HubbardParams::half_filled(8, -1.0, 4.0);
    let e = exact_ground(&p).unwrap().energy;
    let mf = mean_field(&p, &MeanFieldOptions::default()).unwrap();
    assert!(e > closed && e < mf.energy);
}
