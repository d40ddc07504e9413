use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symapolar::generic_rank::{
    closed_form_coordinates, jacobian_det_check, orbit_map_by_expansion, orbit_map_coordinates, orbit_term_count,
    parameter_count, solve_h4_preimage,
};
use symapolar::scalar::{rat, Rational};

fn random_params(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rational> {
    (0..parameter_count(d).unwrap()).map(|_| rat(rng.gen_range(-7..=7), rng.gen_range(1..=4))).collect()
}

#[test]
fn symbolic_coordinates_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 3..=5 {
        for n in d.max(3)..=8 {
            for _ in 0..10 {
                let p = random_params(&mut rng, d);
                assert_eq!(
                    orbit_map_coordinates(d, n, &p).unwrap(),
                    orbit_map_by_expansion(d, n, &p).unwrap(),
                    "d={d} n={n}"
                );
            }
        }
    }
}

#[test]
fn quartic_and_quintic_determinants_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in 4..=5 {
        for n in d..=10 {
            for _ in 0..5 {
                let r = jacobian_det_check(d, n, &random_params(&mut rng, d)).unwrap();
                assert!(r.equal, "d={d} n={n}");
            }
        }
    }
}

#[test]
fn cubic_determinant_has_opposite_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 3..=10 {
        let r = jacobian_det_check(3, n, &random_params(&mut rng, 3)).unwrap();
        assert!(r.equal_up_to_sign);
        assert_eq!(r.determinant, -r.closed_form.clone());
    }
}

#[test]
fn preimage_converges_away_from_fourteen() {
    for n in [4, 5, 7, 9, 13, 15, 20] {
        let r = solve_h4_preimage(n, 1e-9).unwrap();
        assert!(r.ok, "n={n} {:?}", r.note);
        assert_eq!(r.orbit_terms, orbit_term_count(4, n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_forms_agree(d in 3usize..=5, extra in 0usize..=4, raw in proptest::collection::vec((-6i64..=6, 1i64..=3), 7)) {
        let n = d + extra;
        let p: Vec<Rational> = raw.into_iter().take(parameter_count(d).unwrap()).map(|(a, b)| rat(a, b)).collect();
        prop_assert_eq!(orbit_map_coordinates(d, n, &p).unwrap().coefficients, closed_form_coordinates(d, n, &p).unwrap());
    }
}
