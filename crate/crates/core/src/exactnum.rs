//! Integer and rational helpers: valuations, residue symbols, the 2-adic
//! quadratic defect, primality, factorisation and bounded prime search.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Default upper limit on candidates examined by [`next_prime_satisfying`].
pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// A rational prime, verified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(BigInt::from(p)))
        }
    }

    pub fn from_bigint(p: &BigInt) -> Result<Prime> {
        match p.to_u64() {
            Some(v) => Prime::new(v),
            None => Err(Error::NotPrime(p.clone())),
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn is_dyadic(self) -> bool {
        self.0 == 2
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Prime, D::Error> {
        let v = u64::deserialize(d)?;
        Prime::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A place of ℚ: a finite prime or the single real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Prime),
    Infinite,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        Ok(Place::Finite(Prime::new(p)?))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Place::Infinite);
        }
        let p: BigInt = t.parse().map_err(|_| Error::Parse(format!("expected a prime or 'inf', got '{t}'")))?;
        Ok(Place::Finite(Prime::from_bigint(&p)?))
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Finite(p) => s.serialize_u64(p.get()),
            Place::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Valuation of a nonzero integer at `p`.
pub fn valuation_int(x: &BigInt, p: u64) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        x = q;
        v += 1;
    }
}

/// Splits a nonzero integer as `p^v · u` with `p ∤ u`.
pub fn split_prime_power(x: &BigInt, p: u64) -> Result<(u32, BigInt)> {
    let v = valuation_int(x, p)?;
    Ok((v, x / BigInt::from(p).pow(v)))
}

/// The `p`-adic valuation of a nonzero rational.
pub fn padic_valuation(x: &Rational, p: Prime) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let num = valuation_int(x.numer(), p.get())? as i64;
    let den = valuation_int(x.denom(), p.get())? as i64;
    Ok(num - den)
}

/// Residue of `a` modulo `m` in `0..m`.
pub fn mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<i8> {
    if *p == BigInt::from(2) {
        return Err(Error::EvenPrime);
    }
    let prime = Prime::from_bigint(p)?;
    Ok(legendre(a, prime))
}

/// Legendre symbol for a prime already known to be odd.
pub(crate) fn legendre(a: &BigInt, p: Prime) -> i8 {
    debug_assert!(p.get() != 2);
    let r = mod_u64(a, p.get());
    if r == 0 {
        return 0;
    }
    let e = (p.get() - 1) / 2;
    if pow_mod(r, e, p.get()) == 1 {
        1
    } else {
        -1
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Classification of an odd 2-adic unit by its quadratic defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Defect {
    /// `u ≡ 1 (mod 8)`: a square in ℤ₂.
    Square,
    /// `u ≡ 5 (mod 8)`: a square mod 4 but not in ℤ₂.
    Defect4,
    /// `u ≡ 3 (mod 4)`.
    Defect2,
}

pub fn quadratic_defect_2adic(u: &BigInt) -> Result<Defect> {
    if u.is_even() {
        return Err(Error::NotAUnit(u.clone()));
    }
    Ok(match mod_u64(u, 8) {
        1 => Defect::Square,
        5 => Defect::Defect4,
        _ => Defect::Defect2,
    })
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary integer. Deterministic below 3.3·10²⁴, a strong
/// probable-prime test with twelve fixed bases above that.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorisation of `|n|` as sorted `(prime, exponent)` pairs.
///
/// Trial division removes small factors; the cofactor must fit in 64 bits
/// for Pollard's rho to finish the job.
pub fn factor(n: &BigInt) -> Result<Vec<(Prime, u32)>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let mut m = n.abs();
    let mut primes: Vec<u64> = Vec::new();
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            primes.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        match m.to_u64() {
            Some(v) => factor_u64_into(v, &mut primes),
            None if is_prime(&m) => return Err(Error::InvalidArgument(format!("prime factor {m} exceeds 64 bits"))),
            None => return Err(Error::InvalidArgument(format!("cofactor {m} too large to factor"))),
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(Prime, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if last.get() == q => *e += 1,
            _ => out.push((Prime(q), 1)),
        }
    }
    Ok(out)
}

/// Distinct primes dividing `n`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<Prime>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Ok(factor(n)?.iter().all(|&(_, e)| e == 1))
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: Prime) -> u64 {
    assert!(p.get() != 2, "non-residue needs an odd prime");
    (2..p.get()).find(|&a| legendre(&BigInt::from(a), p) == -1).expect("odd prime has a non-residue")
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "square root of a negative integer");
    n.sqrt()
}

/// `Some(r)` with `r ≥ 0` and `r² = n`, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// A condition a candidate prime must satisfy in [`next_prime_satisfying`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeCondition {
    /// `p ≡ residue (mod modulus)`.
    Congruence { modulus: u64, residue: u64 },
    /// `(sign·p / q) = value` for an odd prime `q`; `sign` is ±1.
    Residue { q: u64, sign: i8, value: i8 },
    /// `gcd(p, n) = 1`.
    Coprime {
        #[serde(
            serialize_with = "crate::serde_util::serialize_bigint",
            deserialize_with = "crate::serde_util::deserialize_bigint"
        )]
        n: BigInt,
    },
}

impl PrimeCondition {
    pub fn holds(&self, p: Prime) -> bool {
        match self {
            PrimeCondition::Congruence { modulus, residue } => p.get() % modulus == residue % modulus,
            PrimeCondition::Residue { q, sign, value } => {
                let a = BigInt::from(p.get()) * BigInt::from(*sign);
                legendre(&a, Prime(*q)) == *value
            }
            PrimeCondition::Coprime { n } => !(n % BigInt::from(p.get())).is_zero(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PrimeCondition::Congruence { modulus, .. } if *modulus == 0 => {
                Err(Error::InvalidArgument("congruence modulus must be positive".into()))
            }
            PrimeCondition::Residue { q, sign, value } => {
                if *q == 2 {
                    return Err(Error::EvenPrime);
                }
                Prime::new(*q)?;
                if sign.abs() != 1 || value.abs() > 1 {
                    return Err(Error::InvalidArgument("residue condition out of range".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Smallest prime `p` with `start ≤ p ≤ bound` satisfying every condition.
pub fn next_prime_satisfying(start: u64, conditions: &[PrimeCondition], bound: u64) -> Result<Prime> {
    for c in conditions {
        c.validate()?;
    }
    let mut n = start.max(2);
    while n <= bound {
        if is_prime_u64(n) {
            let p = Prime(n);
            if conditions.iter().all(|c| c.holds(p)) {
                return Ok(p);
            }
        }
        n += 1;
    }
    Err(Error::PrimeSearchExhausted { bound })
}

/// The residue of an odd-numerator, odd-denominator rational modulo 8,
/// i.e. its 2-adic unit square class.
pub fn unit_mod8(x: &Rational) -> u8 {
    let prod = x.numer() * x.denom();
    mod_u64(&prod, 8) as u8
}

/// Square class of a `p`-adic unit given as an integer: `1` for squares and
/// the smallest non-residue otherwise (odd `p`), the residue mod 8 at `p = 2`.
pub fn unit_square_class(u: &BigInt, p: Prime) -> u64 {
    if p.is_dyadic() {
        mod_u64(u, 8)
    } else if legendre(u, p) == 1 {
        1
    } else {
        smallest_nonresidue(p)
    }
}
