mod common;

use advbound::adversary::{
    compute_report, eval_minimax, eval_spectral, eval_strong_weighted, eval_weighted, gsa_to_spectral,
    limitation_bounds, limitation_scheme, smm_to_probability, spectral_to_gsa, spectral_to_weighted,
    weighted_to_spectral, LimitationMode, SpectralWitness, WeightScheme,
};
use advbound::function_model::{build_difference_matrices, certificate_profile};
use advbound::linalg::DenseMatrix;
use advbound::sdp::verify_gsa;
use advbound::{DifferenceMatrices, FunctionSpec};
use common::{oracle_mm, oracle_sa, random_partial, random_total};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_gamma(rng: &mut StdRng, dm: &DifferenceMatrices) -> DenseMatrix {
    let size = dm.size();
    loop {
        let mut g = DenseMatrix::zeros(size, size);
        for (x, y) in dm.split_pairs() {
            if rng.gen::<f64>() < 0.7 {
                let v = rng.gen_range(0.05..2.0);
                g[(x, y)] = v;
                g[(y, x)] = v;
            }
        }
        if !g.is_zero() {
            return g;
        }
    }
}

/// A valid scheme with asymmetric `w′`: `w′(x,y,i) = w·t` and
/// `w′(y,x,i) = w/t·(1 + slack)`.
fn random_scheme(rng: &mut StdRng, dm: &DifferenceMatrices) -> WeightScheme {
    let size = dm.size();
    let w = random_gamma(rng, dm);
    let mut wp = vec![DenseMatrix::zeros(size, size); dm.arity()];
    for (i, m) in wp.iter_mut().enumerate() {
        for (x, y) in dm.split_pairs() {
            if x < y && dm.differs_at(i, x, y) && w[(x, y)] > 0.0 {
                let t = rng.gen_range(0.2..5.0);
                let slack = rng.gen_range(0.0..0.5);
                m[(x, y)] = w[(x, y)] * t;
                m[(y, x)] = w[(x, y)] / t * (1.0 + slack);
            }
        }
    }
    WeightScheme { w, wp }
}

fn setup(seed: u64, n: usize, h: u32, partial: bool) -> (FunctionSpec, DifferenceMatrices, StdRng) {
    let mut rng = StdRng::seed_from_u64(seed);
    let spec = if partial { random_partial(&mut rng, n, 2, h, 0.7) } else { random_total(&mut rng, n, h) };
    let dm = build_difference_matrices(&spec);
    (spec, dm, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn spectral_value_matches_oracle_and_is_scale_free(seed in any::<u64>(), n in 1usize..=3, c in 0.001..1000.0f64) {
        let (spec, dm, mut rng) = setup(seed, n, 2, true);
        let g = random_gamma(&mut rng, &dm);
        let v = eval_spectral(&SpectralWitness::new(g.clone()), &dm).unwrap();
        prop_assert!((v - oracle_sa(&spec, &g)).abs() <= 1e-8 * v);
        let scaled = eval_spectral(&SpectralWitness::new(g.scale(c)), &dm).unwrap();
        prop_assert!((scaled - v).abs() <= 1e-9 * v);
    }

    #[test]
    fn weighted_values_are_scale_free_and_ordered(seed in any::<u64>(), n in 1usize..=3, c in 0.001..1000.0f64) {
        let (_, dm, mut rng) = setup(seed, n, 3, true);
        let ws = random_scheme(&mut rng, &dm);
        let wa = eval_weighted(&ws, &dm).unwrap();
        let swa = eval_strong_weighted(&ws, &dm).unwrap();
        prop_assert!(swa >= wa - 1e-12);
        let s = ws.scaled(c);
        prop_assert!((eval_weighted(&s, &dm).unwrap() - wa).abs() <= 1e-9 * wa);
        prop_assert!((eval_strong_weighted(&s, &dm).unwrap() - swa).abs() <= 1e-9 * swa);
    }

    #[test]
    fn conversion_gains_on_random_witnesses(seed in any::<u64>(), n in 1usize..=3) {
        let (spec, dm, mut rng) = setup(seed, n, 2, false);
        let gamma = SpectralWitness::new(random_gamma(&mut rng, &dm));
        let sa = eval_spectral(&gamma, &dm).unwrap();
        let ws = spectral_to_weighted(&gamma, &dm).unwrap();
        ws.validate(&dm, 1e-9).unwrap();
        prop_assert!(eval_weighted(&ws, &dm).unwrap() >= sa - 1e-6);

        let scheme = random_scheme(&mut rng, &dm);
        let swa = eval_strong_weighted(&scheme, &dm).unwrap();
        prop_assert!(eval_spectral(&weighted_to_spectral(&scheme, &dm).unwrap(), &dm).unwrap() >= swa - 1e-6);

        let gsa = spectral_to_gsa(&gamma, &dm).unwrap();
        prop_assert!(verify_gsa(&dm, &gsa, 1e-7).unwrap().accepted);
        prop_assert!(gsa.mu <= 1.0 / oracle_sa(&spec, &gamma.gamma) + 1e-6);
        prop_assert!(eval_spectral(&gsa_to_spectral(&gsa, &dm).unwrap(), &dm).unwrap() >= 1.0 / gsa.mu - 1e-6);
    }

    #[test]
    fn limitation_schemes_respect_their_ceilings(seed in any::<u64>(), n in 1usize..=4, h in 2u32..=3, partial in any::<bool>()) {
        let (spec, dm, _) = setup(seed, n, h, partial);
        let profile = certificate_profile(&spec).unwrap();
        let bounds = limitation_bounds(&profile, n, spec.is_total(), spec.is_boolean_output());
        let get = |label: &str| bounds.iter().find(|l| l.label == label).map(|l| l.value);
        let p = limitation_scheme(&spec, &profile, LimitationMode::Partial).unwrap();
        p.validate(&dm, 1e-12).unwrap();
        prop_assert!(eval_minimax(&p, &dm).unwrap() <= get("two_sqrt_c1_n").unwrap() + 1e-9);
        if spec.is_total() {
            let t = limitation_scheme(&spec, &profile, LimitationMode::Total).unwrap();
            let v = eval_minimax(&t, &dm).unwrap();
            prop_assert!(v <= get("sqrt_c0_c1").unwrap() + 1e-9);
            prop_assert!((v - oracle_mm(&spec, &t.p.to_rows())).abs() <= 1e-12 * (1.0 + v));
        }
        if spec.is_boolean_output() {
            let b = limitation_scheme(&spec, &profile, LimitationMode::BooleanPartial).unwrap();
            prop_assert!(eval_minimax(&b, &dm).unwrap() <= get("sqrt_c1_n").unwrap() + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn reports_sandwich_random_functions(seed in any::<u64>(), n in 1usize..=3, h in 2u32..=3, partial in any::<bool>()) {
        let (spec, dm, _) = setup(seed, n, h, partial);
        let tol = 1e-7;
        let r = compute_report(&spec, 0.1, tol).unwrap();
        prop_assert!(r.converged && r.consistent, "{:?}", r.values);
        let combined = 20.0 * tol * (1.0 + r.upper());
        prop_assert!(r.sandwich_residual >= -combined);
        prop_assert!(r.lower() <= r.upper() + combined);
        for l in &r.limits {
            prop_assert!(r.values.gsa <= l.value + 1e-6);
        }
        // Every value is reproducible from the stored witnesses.
        let w = &r.witnesses;
        prop_assert_eq!(eval_spectral(&w.gamma, &dm).unwrap(), r.values.sa);
        prop_assert_eq!(eval_weighted(&w.weights, &dm).unwrap(), r.values.wa);
        prop_assert_eq!(eval_strong_weighted(&w.weights, &dm).unwrap(), r.values.swa);
        prop_assert_eq!(eval_minimax(&w.probs, &dm).unwrap(), r.values.mm);
        prop_assert_eq!(1.0 / w.smm.mu, r.values.smm);
        prop_assert_eq!(1.0 / w.gsa.mu, r.values.gsa);
        let rounded = smm_to_probability(&w.smm, &dm, tol).unwrap();
        prop_assert!(eval_minimax(&rounded, &dm).unwrap() <= 1.0 / w.smm.mu + 10.0 * tol * (1.0 + r.values.smm).powi(2));
    }
}

#[test]
fn spectral_to_gsa_round_trip_on_builtins() {
    for (name, params) in [("or", &[3][..]), ("and", &[2]), ("parity", &[3]), ("two_level_and_or", &[2, 2])] {
        let spec = advbound::builtin(name, params).unwrap();
        let dm = build_difference_matrices(&spec);
        let report = compute_report(&spec, 0.0, 1e-7).unwrap();
        let gamma = &report.witnesses.gamma;
        let back = gsa_to_spectral(&spectral_to_gsa(gamma, &dm).unwrap(), &dm).unwrap();
        let a = eval_spectral(gamma, &dm).unwrap();
        let b = eval_spectral(&back, &dm).unwrap();
        assert!((a - b).abs() <= 1e-6, "{name}: {a} vs {b}");
    }
}
