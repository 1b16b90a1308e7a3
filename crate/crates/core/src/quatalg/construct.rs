//! Building an algebra with prescribed ramification.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{QuaternionAlgebra, Ramification};
use crate::error::{Error, Result};
use crate::exactnum::{self, next_prime_satisfying, Place, Prime, PrimeCondition};

/// Record of how an algebra `(a, −d)` was chosen, enough to re-check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraCertificate {
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub d: BigInt,
    pub infinite_ramified: bool,
    /// The prime `|a|`; absent for the split fast path `(1, 1)`.
    pub p: Option<Prime>,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub b: BigInt,
    pub conditions: Vec<PrimeCondition>,
    pub bound: u64,
    /// Hilbert symbols `(a, b)_ν` at every place that could ramify.
    pub symbols: Vec<(Place, i8)>,
}

/// Validates `d` and the parity of the requested ramification.
pub(crate) fn check_discriminant(d: &BigInt, infinite_ramified: bool) -> Result<Vec<Prime>> {
    if !d.is_positive() {
        return Err(Error::InvalidArgument(format!("discriminant must be positive, got {d}")));
    }
    let f = exactnum::factor(d)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(d.clone()));
    }
    if (f.len() + usize::from(infinite_ramified)) % 2 != 0 {
        return Err(Error::OddRamification);
    }
    Ok(f.into_iter().map(|(p, _)| p).collect())
}

/// An algebra ramified exactly at the primes dividing the squarefree `d`,
/// and at ∞ iff `infinite_ramified`.
///
/// The result is `(a, −d)` with `a = ±p` for the least prime `p` such that
/// `a ≡ 5 (mod 8)`, `gcd(p, d) = 1` and `(a/q) = −1` for every odd `q | d`,
/// the sign of `a` being negative exactly in the definite case. For `d = 1`
/// in the indefinite case the split algebra `(1, 1)` is returned directly.
pub fn algebra_from_discriminant(
    d: &BigInt,
    infinite_ramified: bool,
    bound: u64,
) -> Result<(QuaternionAlgebra, AlgebraCertificate)> {
    let primes = check_discriminant(d, infinite_ramified)?;
    if d.is_one() && !infinite_ramified {
        let alg = QuaternionAlgebra::from_i64(1, 1)?;
        let cert = AlgebraCertificate {
            d: d.clone(),
            infinite_ramified,
            p: None,
            a: BigInt::one(),
            b: BigInt::one(),
            conditions: Vec::new(),
            bound,
            symbols: vec![(Place::Infinite, 1), (Place::finite(2)?, 1)],
        };
        return Ok((alg, cert));
    }
    let sign: i8 = if infinite_ramified { -1 } else { 1 };
    let mut conditions = vec![
        PrimeCondition::Congruence { modulus: 8, residue: if infinite_ramified { 3 } else { 5 } },
        PrimeCondition::Coprime { n: d.clone() },
    ];
    for q in &primes {
        if !q.is_dyadic() {
            conditions.push(PrimeCondition::Residue { q: q.get(), sign, value: -1 });
        }
    }
    let p = next_prime_satisfying(2, &conditions, bound)?;
    let a = BigInt::from(p.get()) * BigInt::from(sign);
    let b = -d.clone();
    let alg = QuaternionAlgebra::new(a.clone(), b.clone())?;
    let ram = alg.ramified_places()?;
    let expected = Ramification { finite: primes, infinite: infinite_ramified, d: d.clone() };
    if ram != expected {
        return Err(Error::Internal(format!("({alg}) has ramification {ram:?}, expected {expected:?}")));
    }
    let mut places = vec![Place::Infinite];
    for q in exactnum::prime_divisors(&(BigInt::from(2) * &a * &b))? {
        places.push(Place::Finite(q));
    }
    let symbols = places.into_iter().map(|v| (v, alg.hilbert_at(v))).collect();
    let cert = AlgebraCertificate { d: d.clone(), infinite_ramified, p: Some(p), a, b, conditions, bound, symbols };
    Ok((alg, cert))
}
