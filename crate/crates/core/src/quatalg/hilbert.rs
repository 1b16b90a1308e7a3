//! Hilbert symbols over ℚ at every place.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{self, Place, Prime};
use crate::Rational;

/// `(a, b)_ν`: `1` if `X² − aY² − bZ²` has a nontrivial zero over the
/// completion at `ν`, `−1` otherwise.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // a and a·den² lie in the same square class.
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    Ok(match place {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => hilbert_int(&a, &b, p),
    })
}

/// Convenience wrapper for integer arguments.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, place: Place) -> Result<i8> {
    hilbert_symbol(&Rational::from_integer(a.clone()), &Rational::from_integer(b.clone()), place)
}

pub(crate) fn hilbert_int(a: &BigInt, b: &BigInt, p: Prime) -> i8 {
    let (al, u) = exactnum::split_prime_power(a, p.get()).expect("nonzero");
    let (be, v) = exactnum::split_prime_power(b, p.get()).expect("nonzero");
    if p.is_dyadic() {
        let u8_ = exactnum::mod_u64(&u, 8);
        let v8 = exactnum::mod_u64(&v, 8);
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u8_) * eps(v8) + al as u64 * omega(v8) + be as u64 * omega(u8_);
        if e % 2 == 1 {
            -1
        } else {
            1
        }
    } else {
        let mut s: i8 = 1;
        if (al as u64 * be as u64).is_odd() && (p.get() % 4 == 3) {
            s = -s;
        }
        if be % 2 == 1 {
            s *= exactnum::legendre(&u, p);
        }
        if al % 2 == 1 {
            s *= exactnum::legendre(&v, p);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn h(a: i64, b: i64, place: &str) -> i8 {
        hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), place.parse().unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(h(3, -3, "3"), 1);
        assert_eq!(h(-1, -1, "inf"), -1);
        assert_eq!(h(2, 5, "5"), -1);
        assert_eq!(h(2, 5, "2"), -1);
        assert_eq!(h(-1, -1, "2"), -1);
        assert_eq!(h(-1, -1, "3"), 1);
        let q = Rational::new(BigInt::from(3), BigInt::from(4));
        assert_eq!(hilbert_symbol(&q, &Rational::from_integer((-1).into()), Place::finite(3).unwrap()).unwrap(), -1);
        assert_eq!(hilbert_symbol(&Rational::zero(), &q, Place::Infinite), Err(Error::ZeroArgument));
    }

    /// Primitive zero of `X² − aY² − bZ²` modulo `p^k` by digit-wise lifting.
    fn has_primitive_zero(a: i64, b: i64, p: i64, k: u32) -> bool {
        #[allow(clippy::too_many_arguments)]
        fn go(a: i64, b: i64, p: i64, k: u32, level: u32, x: i64, y: i64, z: i64, pw: i64) -> bool {
            let q = p.pow(level);
            let val = (x * x - a * y * y - b * z * z).rem_euclid(q);
            if val != 0 {
                return false;
            }
            if level == k {
                return true;
            }
            for dx in 0..p {
                for dy in 0..p {
                    for dz in 0..p {
                        if level == 0 && dx == 0 && dy == 0 && dz == 0 {
                            continue;
                        }
                        let (nx, ny, nz) = (x + dx * pw, y + dy * pw, z + dz * pw);
                        if go(a, b, p, k, level + 1, nx, ny, nz, pw * p) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        go(a, b, p, k, 0, 0, 0, 0, 1)
    }

    fn oracle(a: i64, b: i64, p: i64) -> i8 {
        let v = exactnum::valuation_int(&BigInt::from(4 * a * b), p as u64).unwrap();
        if has_primitive_zero(a, b, p, 2 * v + 3) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn agrees_with_isotropy_search() {
        let mut memo: HashMap<(i64, i64, i64), i8> = HashMap::new();
        for p in [2i64, 3, 5] {
            for a in -12i64..=12 {
                for b in -12i64..=12 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let expect = *memo.entry((a, b, p)).or_insert_with(|| oracle(a, b, p));
                    assert_eq!(h(a, b, &p.to_string()), expect, "({a},{b})_{p}");
                }
            }
        }
    }

    fn nz() -> impl Strategy<Value = i64> {
        prop_oneof![-10000i64..=-1, 1i64..=10000]
    }

    proptest! {
        #[test]
        fn product_formula(a in nz(), b in nz()) {
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            let mut places = vec![Place::Infinite];
            for p in exactnum::prime_divisors(&(BigInt::from(2) * &ba * &bb)).unwrap() {
                places.push(Place::Finite(p));
            }
            let prod: i8 = places.iter().map(|&v| hilbert_symbol_int(&ba, &bb, v).unwrap()).product();
            prop_assert_eq!(prod, 1);
        }

        #[test]
        fn bimultiplicative(a in nz(), b in nz(), c in nz(), pi in 0usize..5) {
            let place = [Place::Infinite, Place::finite(2).unwrap(), Place::finite(3).unwrap(),
                         Place::finite(5).unwrap(), Place::finite(7).unwrap()][pi];
            let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
            let lhs = hilbert_symbol_int(&a, &(&b * &c), place).unwrap();
            let rhs = hilbert_symbol_int(&a, &b, place).unwrap() * hilbert_symbol_int(&a, &c, place).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(hilbert_symbol_int(&a, &-&a, place).unwrap(), 1);
            prop_assert_eq!(hilbert_symbol_int(&a, &(&b * &b), place).unwrap(), 1);
            prop_assert_eq!(hilbert_symbol_int(&a, &b, place).unwrap(), hilbert_symbol_int(&b, &a, place).unwrap());
        }
    }
}
