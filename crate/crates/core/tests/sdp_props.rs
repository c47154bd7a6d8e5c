mod common;

use advbound::function_model::build_difference_matrices;
use advbound::linalg::DenseMatrix;
use advbound::sdp::{
    restore_gsa, restore_smm, solve_pair, uniform_gsa, verify_gsa, verify_smm, GsaSolution, SdpError, SdpOptions,
    SmmSolution,
};
use common::{random_partial, random_total};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-7;

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, lo: f64, hi: f64) -> DenseMatrix {
    DenseMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

fn random_smm(rng: &mut StdRng, dm: &advbound::DifferenceMatrices) -> SmmSolution {
    let size = dm.size();
    let r: Vec<DenseMatrix> = (0..dm.arity())
        .map(|_| {
            let rank = rng.gen_range(1..=size);
            let x = random_matrix(rng, size, rank, -1.0, 1.0);
            x.matmul(&x.transpose())
        })
        .collect();
    restore_smm(dm, &r).unwrap()
}

fn random_gsa(rng: &mut StdRng, dm: &advbound::DifferenceMatrices) -> GsaSolution {
    let size = dm.size();
    let z = random_matrix(rng, size, size, 0.0, 1.0);
    let delta: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..1.0)).collect();
    restore_gsa(dm, &z, &delta).unwrap().unwrap()
}

fn noisy(rng: &mut StdRng, m: &DenseMatrix, amp: f64) -> DenseMatrix {
    m.add(&random_matrix(rng, m.rows(), m.cols(), -amp, amp).symmetrized())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn weak_duality_on_random_feasible_points(seed in any::<u64>(), n in 1usize..=3, h in 2u32..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let spec = random_partial(&mut rng, n, 2, h, 0.8);
        let dm = build_difference_matrices(&spec);
        let smm = random_smm(&mut rng, &dm);
        let gsa = random_gsa(&mut rng, &dm);
        prop_assert!(verify_smm(&dm, &smm, TOL).unwrap().accepted);
        prop_assert!(verify_gsa(&dm, &gsa, TOL).unwrap().accepted);
        prop_assert!(smm.mu <= gsa.mu + TOL * (1.0 + gsa.mu));
    }

    #[test]
    fn strong_duality_on_random_functions(seed in any::<u64>(), n in 1usize..=3, g in 2u32..=3, h in 2u32..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let spec = random_partial(&mut rng, n, g, h, 0.5);
        prop_assume!(spec.size() <= 24);
        let dm = build_difference_matrices(&spec);
        let out = solve_pair(&dm, &SdpOptions::with_tol(TOL)).unwrap();
        prop_assert!(out.converged, "gap {}", out.gap);
        prop_assert!(out.gap >= -TOL * (1.0 + out.gsa.mu));
        prop_assert!(verify_smm(&dm, &out.smm, TOL).unwrap().accepted);
        prop_assert!(verify_gsa(&dm, &out.gsa, TOL).unwrap().accepted);
    }

    #[test]
    fn gsa_feasible_set_is_scale_invariant(seed in any::<u64>(), c in 0.01..100.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let spec = random_total(&mut rng, 2, 2);
        let dm = build_difference_matrices(&spec);
        let gsa = random_gsa(&mut rng, &dm);
        let scaled: Vec<f64> = gsa.delta.iter().map(|d| d * c).collect();
        let back = restore_gsa(&dm, &gsa.z.scale(c), &scaled).unwrap().unwrap();
        prop_assert!(verify_gsa(&dm, &back, TOL).unwrap().accepted);
        prop_assert!((back.mu - gsa.mu).abs() <= 1e-9 * (1.0 + gsa.mu));
    }
}

#[test]
fn solved_points_survive_small_noise() {
    let mut rng = StdRng::seed_from_u64(5);
    for (name, params) in [("or", &[3][..]), ("parity", &[2]), ("two_level_and_or", &[2, 2])] {
        let spec = advbound::builtin(name, params).unwrap();
        let dm = build_difference_matrices(&spec);
        let out = solve_pair(&dm, &SdpOptions::with_tol(TOL)).unwrap();
        for _ in 0..10 {
            let amp = TOL / 100.0;
            let r: Vec<DenseMatrix> = out.smm.r.iter().map(|m| noisy(&mut rng, m, amp)).collect();
            let smm = SmmSolution::from_witness(&dm, advbound::sdp::SmmWitness { mu: out.smm.mu, r }).unwrap();
            assert!(verify_smm(&dm, &smm, 10.0 * TOL).unwrap().accepted, "{name}");
            let z = noisy(&mut rng, &out.gsa.z, amp).hadamard(&dm.f_mat);
            let delta: Vec<f64> = out.gsa.delta.iter().map(|d| d + rng.gen_range(-amp..amp)).collect();
            let gsa = GsaSolution::from_witness(&dm, advbound::sdp::GsaWitness { mu: out.gsa.mu, z, delta }).unwrap();
            assert!(verify_gsa(&dm, &gsa, 10.0 * TOL).unwrap().accepted, "{name}");
        }
    }
}

#[test]
fn uniform_start_is_strictly_feasible() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..20 {
        let spec = random_partial(&mut rng, 3, 2, 3, 0.7);
        let dm = build_difference_matrices(&spec);
        let g = uniform_gsa(&dm).unwrap();
        assert!(g.residuals.min_eigenvalue > 0.5);
        assert!(verify_gsa(&dm, &g, 1e-9).unwrap().accepted);
    }
}

#[test]
fn full_size_limit_is_enforced() {
    let spec = advbound::builtin("or", &[7]).unwrap();
    let dm = build_difference_matrices(&spec);
    assert!(matches!(solve_pair(&dm, &SdpOptions::default()), Err(SdpError::TooLarge { size: 128, limit: 64 })));
}

#[test]
fn largest_default_instance_converges() {
    let spec = advbound::builtin("or", &[6]).unwrap();
    let dm = build_difference_matrices(&spec);
    let out = solve_pair(&dm, &SdpOptions::default()).unwrap();
    assert!(out.converged, "gap {}", out.gap);
    assert!((1.0 / out.gsa.mu - 6f64.sqrt()).abs() < 1e-3);
}
