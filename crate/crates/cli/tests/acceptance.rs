//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use blockvqe::classical_sector::compute_factors;
use blockvqe::encoding::{compact_qubits, pauli_decompose};
use blockvqe::model::split;
use blockvqe::oracle::dense::{eigenvalues, hamiltonian_dense};
use blockvqe::oracle::exact_ground;
use blockvqe::sim::AnsatzSpec;
use blockvqe::vqe::{energy, energy_general, minimize, GeneralProblem, HubbardOperators, MinimizeOptions};
use blockvqe::{BlockAngles, Complex64, EncodingKind, FermionHamiltonian, HubbardParams, SimMode, VariationalState};
use blockvqe_cli::checks::{bracket_error, embedding_error, encoded_sector_spectra, fock_sector_spectra, reassembly_error};
use blockvqe_cli::run::SweepOutput;
use blockvqe_cli::{run_sweep, RunConfig, RunOptions};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    format!("{e:#}")
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fig3_sweep() -> Result<(RunConfig, SweepOutput, Duration), String> {
    let cfg = RunConfig::fig3();
    let start = Instant::now();
    let out = run_sweep(&cfg, RunOptions::default()).map_err(err)?;
    Ok((cfg, out, start.elapsed()))
}

fn criterion_1(sweep: &Result<(RunConfig, SweepOutput, Duration), String>) -> Outcome {
    let (cfg, out, elapsed) = sweep.as_ref().map_err(Clone::clone)?;
    let t = cfg.model.hopping.abs();
    let setup_ok = cfg.model.sites == 4
        && cfg.model.n_up == 2
        && cfg.model.n_down == 2
        && cfg.model.chem_potential == 0.0
        && cfg.model.hopping == -1.0
        && cfg.method.ansatz_depth == 2
        && cfg.optimizer.restarts <= 4
        && matches!(cfg.method.sim, blockvqe_cli::config::SimName::Exact)
        && cfg.sweep == (0..=8).map(f64::from).collect::<Vec<_>>();
    let worst = out.rows.iter().map(|r| r.e_vqe - r.e_exact).fold(f64::NEG_INFINITY, f64::max);
    let bound = out.rows.iter().all(|r| r.e_vqe >= r.e_exact - 1e-8);
    ensure(
        setup_ok && bound && worst <= 1e-2 * t && *elapsed < Duration::from_secs(300),
        format!(
            "{} points, max E_vqe − E_exact = {worst:.3e}, sweep took {:.1} s",
            out.rows.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(sweep: &Result<(RunConfig, SweepOutput, Duration), String>) -> Outcome {
    let (cfg, out, _) = sweep.as_ref().map_err(Clone::clone)?;
    let t = cfg.model.hopping.abs();
    let mut worst_ratio = f64::INFINITY;
    let mut ok = true;
    for r in out.rows.iter().filter(|r| r.u >= 4.0 * t) {
        let mf = r.e_meanfield - r.e_exact;
        let vqe = (r.e_vqe - r.e_exact).max(0.0);
        ok &= mf > 5.0 * vqe;
        worst_ratio = worst_ratio.min(mf / vqe.max(f64::MIN_POSITIVE));
    }
    ensure(ok, format!("smallest (E_mf − E_exact)/(E_vqe − E_exact) for U ≥ 4|t|: {worst_ratio:.3e}"))
}

fn criterion_3() -> Outcome {
    let p = HubbardParams::half_filled(4, -1.0, 4.0);
    let f = compute_factors(&p).map_err(err)?;
    let ops = HubbardOperators::build(&p, EncodingKind::Compact, true, None).map_err(err)?;
    let lambda = f.block_count();
    let q = ops.total_qubits();
    let ceil_log = (6f64).log2().ceil() as usize;
    ensure(
        lambda == 6 && q == 4 && q == ceil_log + 1 && ops.qubits == compact_qubits(6),
        format!("Λ = {lambda}, Q = {q} ({} data + 1 ancilla)", ops.qubits),
    )
}

fn criterion_4() -> Outcome {
    let spec = RunConfig::fig3().ansatz(3);
    let mut worst = 0.0f64;
    for seed in 0..3 {
        worst = worst.max(bracket_error(&spec, 200, seed).map_err(err)?);
    }
    ensure(worst < 1e-10, format!("600 triples on 3 data qubits, max error {worst:.3e}"))
}

/// Coefficients are multiples of 1/16, so every dense sum is exact in
/// floating point whatever the summation order.
fn random_hamiltonian<R: Rng>(modes: usize, rng: &mut R) -> FermionHamiltonian {
    let mut h = FermionHamiltonian::new(modes).unwrap();
    let grid = |rng: &mut R| f64::from(rng.random_range(-16i32..=16)) / 16.0;
    let coef = |rng: &mut R| Complex64::new(grid(rng), grid(rng));
    for _ in 0..2 * modes {
        let (a, b) = (rng.random_range(0..modes), rng.random_range(0..modes));
        let c = coef(rng);
        h.add_one_body(a, b, c).unwrap();
        h.add_one_body(b, a, c.conj()).unwrap();
    }
    for _ in 0..3 * modes {
        let m: Vec<usize> = (0..4).map(|_| rng.random_range(0..modes)).collect();
        let c = coef(rng);
        h.add_two_body(m[0], m[1], m[2], m[3], c).unwrap();
        h.add_two_body(m[2], m[3], m[0], m[1], c.conj()).unwrap();
    }
    h
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for modes in [4usize, 6] {
        for _ in 0..10 {
            let h = random_hamiltonian(modes, &mut rng);
            let set_a = rng.random_range(0..1u64 << modes);
            worst = worst.max(reassembly_error(&h, set_a).map_err(err)?);
            cases += 1;
        }
    }

    // t(c†_0 c_1 + h.c.) with A = {0}, B = {1}.
    let t = -0.7;
    let mut toy = FermionHamiltonian::new(2).map_err(err)?;
    toy.add_one_body(0, 1, Complex64::new(t, 0.0)).map_err(err)?;
    toy.add_one_body(1, 0, Complex64::new(t, 0.0)).map_err(err)?;
    let ed = eigenvalues(&hamiltonian_dense(&toy).map_err(err)?)[0];
    let s = split(&toy, 0b01).map_err(err)?;
    let problem = GeneralProblem::new(&s, None, EncodingKind::JordanWigner).map_err(err)?;
    let spec = AnsatzSpec::linear(problem.qubits, 1);
    let init = VariationalState::uniform(problem.block_count(), &spec);
    let min = minimize(
        &init,
        &spec,
        |vs| Ok(energy_general(vs, &spec, &problem, SimMode::Exact)?.value),
        &MinimizeOptions::default(),
    )
    .map_err(err)?;
    let toy_gap = (min.energy - ed).abs();
    ensure(
        worst == 0.0 && toy_gap < 1e-8,
        format!("{cases} random splits, max dense deviation {worst:.1e}; 2-mode toy |E − E_ED| = {toy_gap:.3e}"),
    )
}

fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn criterion_6() -> Outcome {
    let p = HubbardParams::half_filled(4, -1.0, 4.0);
    let reference = fock_sector_spectra(&p).map_err(err)?;
    let mut spectral = 0.0f64;
    let mut spectra = Vec::new();
    for kind in [EncodingKind::JordanWigner, EncodingKind::Parity, EncodingKind::BravyiKitaev] {
        let ops = HubbardOperators::build(&p, kind, false, None).map_err(err)?;
        let got = encoded_sector_spectra(&p, &ops).map_err(err)?;
        for (a, b) in reference.iter().zip(&got) {
            spectral = spectral.max(max_gap(a, b));
        }
        spectra.push(got);
    }
    for other in &spectra[1..] {
        for (a, b) in spectra[0].iter().zip(other) {
            spectral = spectral.max(max_gap(a, b));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut roundtrip = 0.0f64;
    for dim in [2usize, 4, 8, 16] {
        for _ in 0..20 {
            let m = random_hermitian(dim, &mut rng);
            let back = pauli_decompose(&m).map_err(err)?.to_dense();
            roundtrip = roundtrip.max((back - &m).iter().map(|x| x.norm()).fold(0.0, f64::max));
        }
    }
    ensure(
        spectral < 1e-10 && roundtrip < 1e-12,
        format!("jw/parity/bk sector spectra max deviation {spectral:.3e}; decomposition round trip {roundtrip:.3e}"),
    )
}

fn criterion_7() -> Outcome {
    let (t, eps) = (-1.0f64, 0.25);
    let mut worst = 0.0f64;
    for u in [0.0, 1.0, 4.0, 8.0] {
        let p = HubbardParams {
            chem_potential: eps,
            periodic: false,
            ..HubbardParams::half_filled(2, t, u)
        };
        let e = exact_ground(&p).map_err(err)?.energy;
        let closed = (u - (u * u + 16.0 * t * t).sqrt()) / 2.0 + 2.0 * eps;
        worst = worst.max((e - closed).abs());
    }
    let ring = exact_ground(&HubbardParams::half_filled(4, t, 0.0)).map_err(err)?.energy;
    let ring_gap = (ring + 4.0 * t.abs()).abs();
    ensure(
        worst < 1e-10 && ring_gap < 1e-10,
        format!("dimer max deviation {worst:.3e}; L = 4, U = 0 deviation from −4|t| {ring_gap:.3e}"),
    )
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for u in [1.0, 4.0, 8.0] {
        let p = HubbardParams::half_filled(4, -1.0, u);
        let f = compute_factors(&p).map_err(err)?;
        for kind in [
            EncodingKind::Compact,
            EncodingKind::JordanWigner,
            EncodingKind::Parity,
            EncodingKind::BravyiKitaev,
        ] {
            let ops = HubbardOperators::build(&p, kind, kind == EncodingKind::Compact, None).map_err(err)?;
            worst = worst.max(embedding_error(&p, &f, &ops).map_err(err)?);
            cases += 1;
        }
    }
    ensure(worst < 1e-8, format!("{cases} (U, encoding) cases, max |ΔE| {worst:.3e}"))
}

fn criterion_9(sweep: &Result<(RunConfig, SweepOutput, Duration), String>) -> Outcome {
    let (cfg, out, _) = sweep.as_ref().map_err(Clone::clone)?;
    let k = cfg.sweep.iter().position(|&u| u == 4.0).ok_or("U = 4 not in sweep")?;
    let point = &out.points[k];
    let p = cfg.params(4.0);
    let f = compute_factors(&p).map_err(err)?;
    let ops = HubbardOperators::build(&p, EncodingKind::Compact, true, None).map_err(err)?;
    let spec = cfg.ansatz(ops.qubits);
    let vs = VariationalState::new(point.alpha.clone(), BlockAngles(point.angles.clone())).map_err(err)?;
    let exact = energy(&vs, &spec, &f, &ops, SimMode::Exact).map_err(err)?.total;
    let shots = energy(
        &vs,
        &spec,
        &f,
        &ops,
        SimMode::Shots {
            shots: 100_000,
            seed: 2024,
        },
    )
    .map_err(err)?;
    let z = (shots.total - exact).abs() / shots.std_error;
    ensure(
        shots.std_error > 0.0 && z < 5.0,
        format!(
            "10^5 shots: {:.6} vs exact {exact:.6}, standard error {:.2e}, deviation {z:.2} SE",
            shots.total, shots.std_error
        ),
    )
}

fn main() -> ExitCode {
    let sweep = fig3_sweep();
    let results = [
        criterion_1(&sweep),
        criterion_2(&sweep),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(&sweep),
    ];
    let mut failed = 0;
    for (k, r) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS  {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
