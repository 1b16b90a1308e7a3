#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use quatord::exactnum::prime_divisors;
use quatord::orders::clifford_order;
use quatord::quadforms::{enumerate_local_reps, similar_over_zp, LocalKind};
use quatord::{Order, Prime, QuadraticForm, Rational, StandardFormLabel};

pub fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn tf(c: [i64; 6]) -> QuadraticForm {
    QuadraticForm::ternary(c).unwrap()
}

/// Similar over ℤ_p for every p dividing `2·d(f)`.
pub fn similar_at_relevant_primes(f: &QuadraticForm, g: &QuadraticForm) -> bool {
    let d = f.discriminant().abs().to_integer() * 2;
    prime_divisors(&d).unwrap().into_iter().all(|p| similar_over_zp(f, g, p).unwrap())
}

/// Nondegenerate ternary forms with coefficients in `[-bound, bound]`.
pub fn random_form(rng: &mut ChaCha8Rng, bound: i64) -> QuadraticForm {
    loop {
        let c: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if let Ok(f) = QuadraticForm::ternary(c) {
            return f;
        }
    }
}

/// Every catalog label (all classes, both sides) with exponent `≤ n_max`.
pub fn catalog(kind: LocalKind, n_max: u32) -> Vec<StandardFormLabel> {
    (0..=n_max).flat_map(|n| enumerate_local_reps(kind, n, false)).collect()
}

pub fn c0(f: &QuadraticForm) -> Order {
    clifford_order(f).unwrap().0
}

/// A random order: `C₀(f)` for a random form, optionally thickened.
pub fn random_order(rng: &mut ChaCha8Rng) -> Order {
    let o = c0(&random_form(rng, 6));
    match rng.gen_range(0..3) {
        0 => o,
        _ => o.thicken(&BigInt::from([2, 3, 5][rng.gen_range(0..3)])).unwrap(),
    }
}

/// A pair `O ⊆ O'`: `O = ℤ + ℤy + p·O'` for a random `y ∈ O'`, or
/// `O = ℤ + n·O'`.
pub fn random_nested_pair(rng: &mut ChaCha8Rng) -> (Order, Order) {
    let big = c0(&random_form(rng, 6));
    let p = [2i64, 3, 5][rng.gen_range(0..3)];
    if rng.gen_bool(0.3) {
        let small = big.thicken(&BigInt::from(p)).unwrap();
        return (small, big);
    }
    let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
    let mut y: [Rational; 4] = std::array::from_fn(|_| Rational::from_integer(0.into()));
    for (c, b) in coeffs.iter().zip(big.basis()) {
        for k in 0..4 {
            y[k] += Rational::from_integer((*c).into()) * &b[k];
        }
    }
    let pq = Rational::from_integer(p.into());
    let mut gens = vec![one(), y];
    gens.extend(big.basis().iter().map(|b| b.clone().map(|x| x * &pq)));
    let small = Order::from_generators(big.algebra().clone(), &gens).unwrap();
    (small, big)
}

pub fn one() -> [Rational; 4] {
    std::array::from_fn(|k| Rational::from_integer(BigInt::from(u8::from(k == 0))))
}
