//! The oracle against closed-form counts.

use hermclass::oracle::{count_at, count_satisfying, isolate, specialize_all, tarski_query_direct};
use hermclass::{parse_poly, Poly, VarSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn circle_meets_hyperbola() {
    // x^2 + y^2 = r, x*y = s: four real points when r > 2|s|, none when r < 2|s|
    let sp = VarSpace::new(&["x", "y"], &["r", "s"]).unwrap();
    let f = vec![parse_poly(&sp, "x^2 + y^2 - r").unwrap(), parse_poly(&sp, "x*y - s").unwrap()];
    let g = vec![parse_poly(&sp, "x").unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seen = [0usize; 2];
    for _ in 0..40 {
        let (r, s) = (q(rng.random_range(1..=60), rng.random_range(1..=5)), q(rng.random_range(-30..=30), rng.random_range(1..=5)));
        let two_s = &s * BigInt::from(2);
        if s == q(0, 1) || r == two_s || r == -two_s.clone() {
            continue;
        }
        let expected = if r > two_s.abs() { 4 } else { 0 };
        let eta = vec![r, s];
        assert_eq!(count_at(&f, &eta).unwrap(), expected, "{eta:?}");
        assert_eq!(count_satisfying(&f, &g, &eta).unwrap(), expected / 2);
        seen[expected / 4] += 1;
    }
    assert!(seen.iter().all(|&k| k > 0));
}

#[test]
fn cubic_roots_by_discriminant() {
    // x^3 + p*x + c has three real roots iff -4p^3 - 27c^2 > 0
    let sp = VarSpace::new(&["x"], &["p", "c"]).unwrap();
    let f = vec![parse_poly(&sp, "x^3 + p*x + c").unwrap()];
    let disc = parse_poly(&sp, "-4*p^3 - 27*c^2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let eta = vec![q(rng.random_range(-12..=6), rng.random_range(1..=3)), q(rng.random_range(-9..=9), rng.random_range(1..=3))];
        let d = disc.eval_params(&eta);
        if d == q(0, 1) {
            continue;
        }
        assert_eq!(count_at(&f, &eta).unwrap(), if d > q(0, 1) { 3 } else { 1 }, "{eta:?}");
    }
}

#[test]
fn tarski_query_counts_sign_of_weight() {
    let sp = VarSpace::new(&["x"], &["y"]).unwrap();
    let f = vec![parse_poly(&sp, "(x - 1)*(x - 2)*(x + 3)").unwrap()];
    let roots = isolate(&specialize_all(&f, &[q(0, 1)])).unwrap();
    let at = |s: &str| -> i64 {
        let g: Poly = parse_poly(&sp, s).unwrap();
        tarski_query_direct(&specialize_all(&[g], &[q(0, 1)])[0], &roots).unwrap()
    };
    assert_eq!(at("1"), 3);
    assert_eq!(at("x"), 1);
    assert_eq!(at("x - 3/2"), -1);
    assert_eq!(at("(x - 1)^2"), 2);
}
