mod common;

use advbound::function_model::{
    build_difference_matrices, builtin, builtin_with_limit, certificate_profile, load_function,
    load_function_with_limit, Entry, FunctionError, FunctionSpec,
};
use common::{oracle_certificates, random_partial, random_total};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn spec_strategy() -> impl Strategy<Value = FunctionSpec> {
    (1usize..=4, 2u32..=3, 1u32..=3, 0.3..1.0f64, any::<u64>()).prop_map(|(n, g, h, keep, seed)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let h = h.max(2);
        random_partial(&mut rng, n, g, h, keep)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn certificates_fix_the_value_and_are_minimal(spec in spec_strategy()) {
        let profile = certificate_profile(&spec).unwrap();
        for (x, cert) in profile.certificates.iter().enumerate() {
            for y in 0..spec.size() {
                if cert.iter().all(|&i| spec.input(x)[i] == spec.input(y)[i]) {
                    prop_assert_eq!(spec.output(x), spec.output(y));
                }
            }
            if cert.len() <= 4 {
                for drop in 0..cert.len() {
                    let sub: Vec<usize> = cert.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &i)| i).collect();
                    let still = (0..spec.size()).all(|y| {
                        sub.iter().any(|&i| spec.input(x)[i] != spec.input(y)[i]) || spec.output(x) == spec.output(y)
                    });
                    prop_assert!(!still, "strict subset {:?} of {:?} certifies", sub, cert);
                }
            }
        }
    }

    #[test]
    fn profile_matches_brute_force_oracle(spec in spec_strategy()) {
        let profile = certificate_profile(&spec).unwrap();
        prop_assert_eq!(&profile.certificates, &oracle_certificates(&spec));
        for h in 0..spec.output_alphabet() {
            let want = (0..spec.size()).filter(|&x| spec.output(x) == h).map(|x| profile.certificates[x].len()).max().unwrap_or(0);
            prop_assert_eq!(profile.complexity[h as usize], want);
        }
        let sorted: Vec<usize> = profile.order.iter().map(|&h| profile.complexity[h as usize]).collect();
        prop_assert!(sorted.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn difference_matrices_follow_definitions(spec in spec_strategy()) {
        let dm = build_difference_matrices(&spec);
        prop_assert_eq!(dm.f_mat.is_zero(), spec.is_constant());
        for x in 0..spec.size() {
            prop_assert_eq!(dm.f_mat[(x, x)], 0.0);
            for y in 0..spec.size() {
                prop_assert_eq!(dm.f_mat[(x, y)] == 1.0, spec.output(x) != spec.output(y));
                for i in 0..spec.arity() {
                    prop_assert_eq!(dm.d[i][(x, y)] == 1.0, spec.input(x)[i] != spec.input(y)[i]);
                    prop_assert_eq!(dm.d[i][(x, y)], dm.d[i][(y, x)]);
                }
            }
        }
    }

    #[test]
    fn json_round_trip(spec in spec_strategy()) {
        let text = spec.to_json().unwrap();
        let back = load_function(text.as_bytes()).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn total_boolean_profiles_match_oracle() {
    let mut rng = StdRng::seed_from_u64(12);
    for n in 1..=5 {
        for _ in 0..20 {
            let spec = random_total(&mut rng, n, 2);
            assert_eq!(certificate_profile(&spec).unwrap().certificates, oracle_certificates(&spec));
        }
    }
}

#[test]
fn loader_examples() {
    let id = load_function(br#"{"n":1,"g":2,"h":2,"entries":[{"x":"0","f":0},{"x":"1","f":1}]}"#).unwrap();
    assert_eq!(id.size(), 2);
    let dup = load_function(br#"{"n":2,"g":2,"h":2,"entries":[{"x":"00","f":0},{"x":"00","f":1}]}"#);
    assert_eq!(dup, Err(FunctionError::DuplicateInput { index: 1, first: 0 }));
    let or2 = load_function(
        br#"{"n":2,"g":2,"h":2,"entries":[{"x":"00","f":0},{"x":"01","f":1},{"x":"10","f":1},{"x":"11","f":1}]}"#,
    )
    .unwrap();
    assert_eq!(or2.size(), 4);
    assert_eq!(or2.entries(), builtin("or", &[2]).unwrap().entries());
    assert!(matches!(
        load_function(br#"{"n":2,"g":2,"h":2,"entries":[{"x":"0","f":0}]}"#),
        Err(FunctionError::LengthMismatch { index: 0, expected: 2, found: 1 })
    ));
    assert!(matches!(
        load_function(br#"{"n":1,"g":2,"h":2,"entries":[{"x":"2","f":0}]}"#),
        Err(FunctionError::InputLetterOutOfRange { index: 0, .. })
    ));
    assert!(matches!(
        load_function(br#"{"n":1,"g":2,"h":2,"entries":[{"x":"1","f":2}]}"#),
        Err(FunctionError::OutputOutOfRange { index: 0, .. })
    ));
    assert!(matches!(load_function(b"{"), Err(FunctionError::Malformed(_))));
    let big = br#"{"n":1,"g":2,"h":2,"entries":[{"x":"0","f":0},{"x":"1","f":1}]}"#;
    assert!(matches!(load_function_with_limit(big, 1), Err(FunctionError::TooLarge { rows: 2, limit: 1 })));
}

#[test]
fn builtin_examples() {
    let parity3 = builtin("parity", &[3]).unwrap();
    for x in 0..parity3.size() {
        let v = parity3.input(x);
        assert_eq!(parity3.output(x), v[0] ^ v[1] ^ v[2]);
    }
    let tree = builtin("two_level_and_or", &[2, 2]).unwrap();
    assert_eq!(tree.arity(), 4);
    for x in 0..tree.size() {
        let v = tree.input(x);
        assert_eq!(tree.output(x), u32::from((v[0] | v[1]) == 1 && (v[2] | v[3]) == 1));
    }
    assert!(matches!(builtin("inverted_permutation", &[2]), Err(FunctionError::UnknownBuiltin(_))));
    assert!(matches!(builtin_with_limit("or", &[17], 1 << 16), Err(FunctionError::TooLarge { .. })));
    let constant = FunctionSpec::new(
        None,
        2,
        2,
        2,
        (0..4).map(|k| Entry { input: vec![k >> 1, k & 1], output: 0 }).collect(),
    )
    .unwrap();
    let profile = certificate_profile(&constant).unwrap();
    assert!(profile.certificates.iter().all(|c| c.is_empty()));
    assert_eq!(profile.c0(), 0);
}
