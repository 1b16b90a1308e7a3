//! Quaternion algebras `(a, b)_ℚ` with basis `1, i, j, ij`, where `i² = a`,
//! `j² = b` and `ij = −ji`.

mod construct;
mod hilbert;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, Place, Prime};
use crate::quadforms::QuadraticForm;
use crate::{Coords, Rational};

pub use construct::{algebra_from_discriminant, AlgebraCertificate};
pub use hilbert::{hilbert_symbol, hilbert_symbol_int};

/// The algebra `(a, b)_ℚ` with nonzero integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternionAlgebra {
    a: BigInt,
    b: BigInt,
}

impl QuaternionAlgebra {
    pub fn new(a: BigInt, b: BigInt) -> Result<QuaternionAlgebra> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(QuaternionAlgebra { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<QuaternionAlgebra> {
        QuaternionAlgebra::new(a.into(), b.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn element(&self, c: Coords) -> QuaternionElement {
        QuaternionElement { algebra: self.clone(), c }
    }

    pub fn element_i64(&self, c: [i64; 4]) -> QuaternionElement {
        self.element(c.map(|x| Rational::from_integer(x.into())))
    }

    pub fn one(&self) -> QuaternionElement {
        self.element_i64([1, 0, 0, 0])
    }

    /// Product of coordinate vectors.
    pub fn mul_coords(&self, x: &Coords, y: &Coords) -> Coords {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        let ab = &a * &b;
        [
            &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
            &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
            &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
            &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
        ]
    }

    pub fn norm_coords(&self, x: &Coords) -> Rational {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + &a * &b * &x[3] * &x[3]
    }

    /// The reduced norm `N = ⟨1, −a, −b, ab⟩` and its restriction
    /// `N₀ = ⟨−a, −b, ab⟩` to the pure quaternions.
    pub fn norm_forms(&self) -> (QuadraticForm, QuadraticForm) {
        let (a, b) = (&self.a, &self.b);
        let n = QuadraticForm::diagonal_big(&[BigInt::one(), -a, -b, a * b]).expect("ab ≠ 0");
        let n0 = QuadraticForm::diagonal_big(&[-a, -b, a * b]).expect("ab ≠ 0");
        (n, n0)
    }

    pub fn hilbert_at(&self, place: Place) -> i8 {
        hilbert_symbol_int(&self.a, &self.b, place).expect("nonzero parameters")
    }

    /// Places where the algebra is a division algebra.
    pub fn ramified_places(&self) -> Result<Ramification> {
        let mut finite = Vec::new();
        let candidates = exactnum::prime_divisors(&(BigInt::from(2) * &self.a * &self.b))?;
        for p in candidates {
            if self.hilbert_at(Place::Finite(p)) == -1 {
                finite.push(p);
            }
        }
        let infinite = self.hilbert_at(Place::Infinite) == -1;
        let d = finite.iter().fold(BigInt::one(), |acc, p| acc * p.get());
        let r = Ramification { finite, infinite, d };
        if !(r.finite.len() + usize::from(r.infinite)).is_multiple_of(2) {
            return Err(Error::Internal(format!("odd ramification for {self}")));
        }
        Ok(r)
    }

    pub fn is_ramified_at(&self, p: Prime) -> bool {
        self.hilbert_at(Place::Finite(p)) == -1
    }

    /// Isomorphic over ℚ iff ramified at the same places.
    pub fn is_isomorphic(&self, other: &QuaternionAlgebra) -> Result<bool> {
        Ok(self.ramified_places()? == other.ramified_places()?)
    }
}

pub fn algebras_isomorphic(a: &QuaternionAlgebra, b: &QuaternionAlgebra) -> Result<bool> {
    a.is_isomorphic(b)
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for QuaternionAlgebra {
    type Err = Error;

    /// Parses `"a,b"`.
    fn from_str(s: &str) -> Result<QuaternionAlgebra> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected 'a,b', got '{s}'")))?;
        let parse = |t: &str, which: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("parameter {which} ('{}') is not an integer", t.trim())))
        };
        QuaternionAlgebra::new(parse(a, "a")?, parse(b, "b")?)
    }
}

impl Serialize for QuaternionAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuaternionAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QuaternionAlgebra, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Ramification data of an algebra over ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ramification {
    pub finite: Vec<Prime>,
    pub infinite: bool,
    #[serde(serialize_with = "crate::serde_util::serialize_bigint")]
    pub d: BigInt,
}

/// An element `x₀ + x₁i + x₂j + x₃ij` of a fixed algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionElement {
    algebra: QuaternionAlgebra,
    c: Coords,
}

impl QuaternionElement {
    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &Coords {
        &self.c
    }

    fn same_algebra(&self, other: &QuaternionElement) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn try_mul(&self, other: &QuaternionElement) -> Result<QuaternionElement> {
        self.same_algebra(other)?;
        Ok(self.algebra.element(self.algebra.mul_coords(&self.c, &other.c)))
    }

    pub fn try_add(&self, other: &QuaternionElement) -> Result<QuaternionElement> {
        self.same_algebra(other)?;
        let c = std::array::from_fn(|k| &self.c[k] + &other.c[k]);
        Ok(self.algebra.element(c))
    }

    pub fn try_sub(&self, other: &QuaternionElement) -> Result<QuaternionElement> {
        self.same_algebra(other)?;
        let c = std::array::from_fn(|k| &self.c[k] - &other.c[k]);
        Ok(self.algebra.element(c))
    }

    pub fn scale(&self, q: &Rational) -> QuaternionElement {
        self.algebra.element(std::array::from_fn(|k| &self.c[k] * q))
    }

    pub fn conjugate(&self) -> QuaternionElement {
        let c = &self.c;
        self.algebra.element([c[0].clone(), -&c[1], -&c[2], -&c[3]])
    }

    pub fn trace(&self) -> Rational {
        &self.c[0] * Rational::from_integer(2.into())
    }

    pub fn norm(&self) -> Rational {
        self.algebra.norm_coords(&self.c)
    }

    /// `Tr(x)² − 4N(x)`.
    pub fn delta(&self) -> Rational {
        let t = self.trace();
        &t * &t - self.norm() * Rational::from_integer(4.into())
    }

    pub fn inverse(&self) -> Result<QuaternionElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidArgument("element has norm zero".into()));
        }
        Ok(self.conjugate().scale(&(Rational::one() / n)))
    }
}

impl Mul for &QuaternionElement {
    type Output = QuaternionElement;

    /// Panics on mixed algebras; use [`QuaternionElement::try_mul`] to get an
    /// error instead.
    fn mul(self, rhs: &QuaternionElement) -> QuaternionElement {
        self.try_mul(rhs).expect("elements of the same algebra")
    }
}

impl Add for &QuaternionElement {
    type Output = QuaternionElement;

    fn add(self, rhs: &QuaternionElement) -> QuaternionElement {
        self.try_add(rhs).expect("elements of the same algebra")
    }
}

impl Sub for &QuaternionElement {
    type Output = QuaternionElement;

    fn sub(self, rhs: &QuaternionElement) -> QuaternionElement {
        self.try_sub(rhs).expect("elements of the same algebra")
    }
}

impl Neg for &QuaternionElement {
    type Output = QuaternionElement;

    fn neg(self) -> QuaternionElement {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms::is_anisotropic_padic;
    use proptest::prelude::*;

    fn alg(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::from_i64(a, b).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn element_examples() {
        let h = alg(-1, -1);
        let i = h.element_i64([0, 1, 0, 0]);
        let j = h.element_i64([0, 0, 1, 0]);
        let ij = h.element_i64([0, 0, 0, 1]);
        assert_eq!(&i * &j, ij);
        assert_eq!(&j * &i, -&ij);
        assert_eq!(h.element_i64([1, 1, 1, 1]).norm(), r(4));
        let a = alg(7, -3);
        let i = a.element_i64([0, 1, 0, 0]);
        assert_eq!(i.delta(), r(28));
        assert_eq!(&i * &i, a.element_i64([7, 0, 0, 0]));
        let other = alg(7, -5).element_i64([0, 1, 0, 0]);
        assert_eq!(i.try_mul(&other), Err(Error::MixedAlgebras));
    }

    #[test]
    fn norm_form_examples() {
        let (n, n0) = alg(-1, -1).norm_forms();
        assert_eq!(n, QuadraticForm::diagonal(&[1, 1, 1, 1]).unwrap());
        assert_eq!(n0, QuadraticForm::diagonal(&[1, 1, 1]).unwrap());
        let (_, n0) = alg(1, 1).norm_forms();
        assert_eq!(n0, QuadraticForm::diagonal(&[-1, -1, 1]).unwrap());
        assert!(!is_anisotropic_padic(&n0, Place::Infinite).unwrap());
        for (a, b) in [(2i64, 3i64), (-5, 7), (6, -10)] {
            let (n, _) = alg(a, b).norm_forms();
            assert_eq!(n.discriminant(), r(16 * a * a * b * b));
        }
    }

    #[test]
    fn ramification_examples() {
        let two = Prime::new(2).unwrap();
        let r1 = alg(-1, -1).ramified_places().unwrap();
        assert_eq!((r1.finite, r1.infinite, r1.d), (vec![two], true, BigInt::from(2)));
        for b in [-7i64, 3, 10, -1] {
            let r = alg(1, b).ramified_places().unwrap();
            assert!(r.finite.is_empty() && !r.infinite);
        }
        let r = alg(5, -26).ramified_places().unwrap();
        let p13 = Prime::new(13).unwrap();
        assert_eq!((r.finite, r.infinite, r.d), (vec![two, p13], false, BigInt::from(26)));
    }

    #[test]
    fn isomorphism_examples() {
        // (−2,−5) ramifies at 5 and ∞, so it differs from the Hamilton quaternions.
        let r = alg(-2, -5).ramified_places().unwrap();
        assert_eq!(r.finite, vec![Prime::new(5).unwrap()]);
        assert!(r.infinite);
        assert!(!alg(-1, -1).is_isomorphic(&alg(-2, -5)).unwrap());
        assert!(!alg(1, 1).is_isomorphic(&alg(2, 3)).unwrap());
        assert!(alg(-1, -1).is_isomorphic(&alg(-3, -2)).unwrap());
        assert!(!alg(-1, -1).is_isomorphic(&alg(-1, -3)).unwrap());
        assert!(alg(3, 5).is_isomorphic(&alg(3, 5)).unwrap());
    }

    #[test]
    fn parse_algebra() {
        assert_eq!("-1, -1".parse::<QuaternionAlgebra>().unwrap(), alg(-1, -1));
        assert!("0,1".parse::<QuaternionAlgebra>().is_err());
        assert!("1;1".parse::<QuaternionAlgebra>().is_err());
    }

    fn nz(m: i64) -> impl Strategy<Value = i64> {
        prop_oneof![-m..=-1, 1..=m]
    }

    fn coords() -> impl Strategy<Value = [i64; 4]> {
        prop::array::uniform4(-20i64..=20)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in nz(50), b in nz(50), x in coords(), y in coords()) {
            let al = alg(a, b);
            let (x, y) = (al.element_i64(x), al.element_i64(y));
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!(&x * &x.conjugate(), al.element([x.norm(), r(0), r(0), r(0)]));
            prop_assert_eq!((&x * &y).conjugate(), &y.conjugate() * &x.conjugate());
        }

        #[test]
        fn multiplication_is_associative(a in nz(20), b in nz(20), x in coords(), y in coords(), z in coords()) {
            let al = alg(a, b);
            let (x, y, z) = (al.element_i64(x), al.element_i64(y), al.element_i64(z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn ramification_count_is_even_and_matches_anisotropy(a in nz(300), b in nz(300)) {
            let al = alg(a, b);
            let ram = al.ramified_places().unwrap();
            prop_assert_eq!((ram.finite.len() + usize::from(ram.infinite)) % 2, 0);
            let (_, n0) = al.norm_forms();
            let mut places = vec![Place::Infinite];
            for p in exactnum::prime_divisors(&BigInt::from(2 * a * b)).unwrap() {
                places.push(Place::Finite(p));
            }
            for v in places {
                let ramified = match v {
                    Place::Infinite => ram.infinite,
                    Place::Finite(p) => ram.finite.contains(&p),
                };
                prop_assert_eq!(is_anisotropic_padic(&n0, v).unwrap(), ramified);
            }
        }
    }
}
