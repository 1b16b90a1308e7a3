//! Explicit maximal orders `⟨1, e₁, e₂, e₁e₂⟩` with `e₁ = (x + i)/2` and
//! `e₂ = (m·i + ij)/a` in `(a, −d)_ℚ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{lattice_index, order_discriminant, Lattice, Order};
use crate::error::{Error, Result};
use crate::exactnum::{next_prime_satisfying, PrimeCondition};
use crate::quatalg::{algebra_from_discriminant, QuaternionAlgebra};
use crate::{Coords, Rational};

/// Data needed to re-check a maximal order: `a ≡ x² (mod 4)`,
/// `−d ≡ m² (mod a)` and `gcd(a, d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalOrderCertificate {
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub d: BigInt,
    pub infinite_ramified: bool,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub m: BigInt,
}

impl MaximalOrderCertificate {
    /// Checks the congruences and coprimality.
    pub fn verify(&self) -> bool {
        let four = BigInt::from(4);
        let a_abs = self.a.abs();
        (&self.a - &self.x * &self.x).mod_floor(&four).is_zero()
            && (-&self.d - &self.m * &self.m).mod_floor(&a_abs).is_zero()
            && self.a.gcd(&self.d).is_one()
    }
}

/// A maximal order in the algebra of discriminant `d`, ramified at ∞ iff
/// `infinite_ramified`.
///
/// The ambient algebra is `(a, −d)` with `a = ±p` from
/// [`algebra_from_discriminant`]. For `d = 1` the same prime search is used
/// (`a = 5`) instead of the split algebra `(1, 1)`, so the construction is
/// uniform. The order is post-verified: it is closed under multiplication,
/// `d(O) = d` and `[O : (a, −d)_ℤ] = 4|a|`.
pub fn maximal_order(d: &BigInt, infinite_ramified: bool, bound: u64) -> Result<(Order, MaximalOrderCertificate)> {
    let algebra = if d.is_one() && !infinite_ramified {
        let conds = [PrimeCondition::Congruence { modulus: 8, residue: 5 }];
        let p = next_prime_satisfying(2, &conds, bound)?;
        QuaternionAlgebra::new(BigInt::from(p.get()), -d.clone())?
    } else {
        algebra_from_discriminant(d, infinite_ramified, bound)?.0
    };
    let a = algebra.a().clone();
    let four = BigInt::from(4);
    let x = [BigInt::zero(), BigInt::one()]
        .into_iter()
        .find(|x| (&a - x * x).mod_floor(&four).is_zero())
        .ok_or_else(|| Error::Internal(format!("{a} is not a square mod 4")))?;
    let a_abs = a.abs();
    let mut m = BigInt::zero();
    while m < a_abs {
        if (&m * &m + d).mod_floor(&a_abs).is_zero() {
            break;
        }
        m += 1;
    }
    if m == a_abs {
        return Err(Error::Internal(format!("−{d} is not a square mod {a}")));
    }
    let r = |n: &BigInt, den: &BigInt| Rational::new(n.clone(), den.clone());
    let zero = Rational::zero;
    let two = BigInt::from(2);
    let e1: Coords = [r(&x, &two), r(&BigInt::one(), &two), zero(), zero()];
    let e2: Coords = [zero(), r(&m, &a), zero(), r(&BigInt::one(), &a)];
    let e12 = algebra.mul_coords(&e1, &e2);
    let one: Coords = [Rational::one(), zero(), zero(), zero()];
    let order = Order::from_generators(algebra.clone(), &[one, e1, e2, e12])
        .map_err(|e| Error::Internal(format!("maximal order construction failed: {e}")))?;
    let disc = order_discriminant(&order)?;
    if &disc != d {
        return Err(Error::Internal(format!("constructed order has discriminant {disc}, expected {d}")));
    }
    let index = lattice_index(order.lattice(), &Lattice::standard(&algebra))?;
    if index != Rational::from_integer(&four * &a_abs) {
        return Err(Error::Internal(format!("index {index} over (a,−d)_Z, expected {}", &four * &a_abs)));
    }
    let cert = MaximalOrderCertificate { d: d.clone(), infinite_ramified, a, x, m };
    if !cert.verify() {
        return Err(Error::Internal(format!("certificate {cert:?} fails its congruences")));
    }
    Ok((order, cert))
}
