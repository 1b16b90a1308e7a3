//! Local invariants of orders: classification at a prime, the Eichler
//! invariant, and counts of local classes and genera.

mod counts;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, Prime};
use crate::orders::{order_discriminant, ternary_form_of_order, Order};
use crate::quadforms::{standardize_local, Side, StandardFormLabel};
use crate::{Coords, Rational};

pub use counts::{
    closed_form_count, count_classes, count_genera, count_table, enumerate_classes, CountRow, CountTable,
};

/// Upper bound on the number of residues scanned by
/// [`eichler_by_discriminants`].
pub const SCAN_GUARD: u64 = 10_000_000;

/// `e(O)`: `1`, `0` or `−1` as `O/J(O)` is `k ⊕ k`, `k` or a quadratic
/// field over `k`. `MatrixMaximal` marks `O_p ≅ M₂(ℤ_p)`, where `e(O)` is
/// not defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EichlerInvariant {
    Minus1,
    Zero,
    Plus1,
    MatrixMaximal,
}

impl fmt::Display for EichlerInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EichlerInvariant::Minus1 => "-1",
            EichlerInvariant::Zero => "0",
            EichlerInvariant::Plus1 => "1",
            EichlerInvariant::MatrixMaximal => "matrix-maximal",
        })
    }
}

impl Serialize for EichlerInvariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EichlerInvariant::Minus1 => s.serialize_i8(-1),
            EichlerInvariant::Zero => s.serialize_i8(0),
            EichlerInvariant::Plus1 => s.serialize_i8(1),
            EichlerInvariant::MatrixMaximal => s.serialize_str("matrix-maximal"),
        }
    }
}

/// Which orders a count includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderCategory {
    Bass,
    Gorenstein,
    All,
}

impl fmt::Display for OrderCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderCategory::Bass => "bass",
            OrderCategory::Gorenstein => "gorenstein",
            OrderCategory::All => "all",
        })
    }
}

impl FromStr for OrderCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<OrderCategory> {
        match s.to_ascii_lowercase().as_str() {
            "bass" => Ok(OrderCategory::Bass),
            "gorenstein" | "gor" => Ok(OrderCategory::Gorenstein),
            "all" | "total" => Ok(OrderCategory::All),
            _ => Err(Error::Parse(format!("unknown category '{s}' (expected bass, gorenstein or all)"))),
        }
    }
}

/// Structural flags of an order localized at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFlags {
    pub maximal: bool,
    pub hereditary: bool,
    pub gorenstein: bool,
    pub bass: bool,
}

/// The isomorphism class of `O ⊗ ℤ_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalOrderClass {
    pub label: StandardFormLabel,
    pub brandt_exponent: u32,
    pub eichler: EichlerInvariant,
    pub flags: LocalFlags,
    pub side: Side,
}

impl LocalOrderClass {
    pub fn prime(&self) -> Prime {
        self.label.prime
    }

    /// `v_p(d(O))`.
    pub fn disc_exponent(&self) -> u32 {
        self.label.disc_exponent()
    }

    /// The class attached to a catalog label, without an order at hand.
    pub fn from_label(label: StandardFormLabel) -> Result<LocalOrderClass> {
        let side = label.side()?;
        let n = label.disc_exponent();
        let flags = LocalFlags {
            maximal: n == u32::from(side == Side::Division),
            hereditary: n <= 1,
            gorenstein: label.is_gorenstein(),
            bass: label.is_bass(),
        };
        Ok(LocalOrderClass {
            brandt_exponent: label.content_exponent,
            eichler: eichler_from_label(&label),
            flags,
            side,
            label,
        })
    }
}

#[derive(Serialize)]
struct LocalOrderClassRepr<'a> {
    p: Prime,
    category: u8,
    r: u32,
    s: u32,
    units: &'a [u64],
    b: u32,
    eichler: EichlerInvariant,
    flags: LocalFlags,
    side: Side,
}

impl Serialize for LocalOrderClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LocalOrderClassRepr {
            p: self.label.prime,
            category: self.label.category,
            r: self.label.r,
            s: self.label.s,
            units: &self.label.units,
            b: self.brandt_exponent,
            eichler: self.eichler,
            flags: self.flags,
            side: self.side,
        }
        .serialize(s)
    }
}

impl fmt::Display for LocalOrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} e={} side={}", self.label, self.disc_exponent(), self.eichler, self.side)
    }
}

/// The Eichler invariant read off a catalog label.
///
/// At odd `p`, `e = ±1` exactly for `⟨1, δ, ε·p^s⟩` with `s ≥ 1`, the sign
/// being `(−δ/p)`; at 2, `e = 1` for `H⊥⟨2^r⟩` and `e = −1` for `J⊥⟨2^r⟩`,
/// `r ≥ 1`. Non-Gorenstein classes have `e = 0`.
pub fn eichler_from_label(label: &StandardFormLabel) -> EichlerInvariant {
    if label.disc_exponent() == 0 {
        return EichlerInvariant::MatrixMaximal;
    }
    if !label.is_gorenstein() {
        return EichlerInvariant::Zero;
    }
    if label.is_dyadic() {
        return match label.category {
            1 => EichlerInvariant::Plus1,
            2 => EichlerInvariant::Minus1,
            _ => EichlerInvariant::Zero,
        };
    }
    // Category 2 is ⟨1, −e, p^s⟩, so −δ = e.
    match (label.category, label.units.first()) {
        (2, Some(&1)) => EichlerInvariant::Plus1,
        (2, Some(_)) => EichlerInvariant::Minus1,
        _ => EichlerInvariant::Zero,
    }
}

fn modp(x: &Rational, p: u64) -> u64 {
    exactnum::mod_u64(&x.to_integer(), p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduced row echelon basis of the span of `rows` over `𝔽_p`.
fn echelon(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..ncols {
                    m[r][k] = (m[r][k] + p - mulmod(f, m[rank][k], p)) % p;
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

/// Basis of `{c : Σ c_i M_ij = 0 for all j}` over `𝔽_p`.
fn left_kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let cols: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let e = echelon(&cols, p);
    let pivots: Vec<usize> = e.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (row, &pc) in e.iter().zip(&pivots) {
                v[pc] = (p - row[free]) % p;
            }
            v
        })
        .collect()
}

fn combine(o: &Order, c: &[u64]) -> Coords {
    let mut x: Coords = std::array::from_fn(|_| Rational::from_integer(0.into()));
    for (ci, b) in c.iter().zip(o.basis()) {
        let ci = Rational::from_integer((*ci).into());
        for k in 0..4 {
            x[k] += &ci * &b[k];
        }
    }
    x
}

/// Basis (in canonical-basis coordinates mod `p`) of the radical of `O/pO`.
///
/// `J` consists of the `x` with `Tr(xy) ≡ 0` for all `y` and `N(x) ≡ 0`.
/// For odd `p` the second condition follows from the first with `y = 1`
/// and `y = x`, so `J` is the kernel of the trace form; for `p = 2` the
/// kernel is scanned.
pub fn radical_mod_p(o: &Order, p: Prime) -> Result<Vec<Vec<u64>>> {
    let pp = p.get();
    let alg = o.algebra();
    let b = o.basis();
    let tr: Vec<Vec<u64>> = (0..4)
        .map(|i| (0..4).map(|j| modp(&crate::orders::trace(&alg.mul_coords(&b[i], &b[j])), pp)).collect())
        .collect();
    let kernel = left_kernel(&tr, pp);
    if !p.is_dyadic() {
        return Ok(kernel);
    }
    let k = kernel.len();
    let mut members = Vec::new();
    for mask in 0u32..(1 << k) {
        let mut c = vec![0u64; 4];
        for (t, v) in kernel.iter().enumerate() {
            if mask >> t & 1 == 1 {
                for i in 0..4 {
                    c[i] ^= v[i];
                }
            }
        }
        if modp(&alg.norm_coords(&combine(o, &c)), 2) == 0 {
            members.push(c);
        }
    }
    let basis = echelon(&members, 2);
    if members.len() != 1 << basis.len() {
        return Err(Error::Internal(format!("radical candidates of {o} at 2 do not form a subspace")));
    }
    Ok(basis)
}

/// `e(O)` at `p` from the structure of `O/J(O)`.
pub fn eichler_invariant(o: &Order, p: Prime) -> Result<EichlerInvariant> {
    let pp = p.get();
    let j = radical_mod_p(o, p)?;
    match 4 - j.len() {
        4 => return Ok(EichlerInvariant::MatrixMaximal),
        1 => return Ok(EichlerInvariant::Zero),
        2 => {}
        q => return Err(Error::Internal(format!("O/J(O) of dimension {q} for {o} at {p}"))),
    }
    let one = vec![1u64, 0, 0, 0];
    let base = echelon(&[j.clone(), vec![one]].concat(), pp).len();
    let i = (1..4)
        .find(|&i| {
            let mut e = vec![0u64; 4];
            e[i] = 1;
            echelon(&[j.clone(), vec![vec![1, 0, 0, 0], e]].concat(), pp).len() > base
        })
        .ok_or_else(|| Error::Internal(format!("no generator of O/J(O) for {o} at {p}")))?;
    let x = &o.basis()[i];
    let t = modp(&crate::orders::trace(x), pp);
    let n = modp(&o.algebra().norm_coords(x), pp);
    // x satisfies z² − t·z + n in the two-dimensional algebra O/J(O).
    let split = if pp == 2 {
        match (0..2u64).filter(|&z| (z * z + t * z + n).is_multiple_of(2)).count() {
            2 => true,
            0 => false,
            _ => return Err(Error::Internal(format!("inseparable residue algebra for {o} at 2"))),
        }
    } else {
        let disc = (mulmod(t, t, pp) + pp - mulmod(4, n, pp)) % pp;
        match exactnum::legendre(&BigInt::from(disc), p) {
            1 => true,
            -1 => false,
            _ => return Err(Error::Internal(format!("inseparable residue algebra for {o} at {p}"))),
        }
    };
    Ok(if split { EichlerInvariant::Plus1 } else { EichlerInvariant::Minus1 })
}

/// `e(O)` at an odd prime from the symbols `(Δ(x)/p)`, `Δ(x) = Tr(x)² − 4N(x)`,
/// over `x ∈ O/pO` modulo `ℤ`. Returns `None` when both nonzero symbols
/// occur, which happens only for `O_p ≅ M₂(ℤ_p)`.
pub fn eichler_by_discriminants(o: &Order, p: Prime) -> Result<Option<EichlerInvariant>> {
    if p.is_dyadic() {
        return Err(Error::EvenPrime);
    }
    let pp = p.get();
    if pp.saturating_pow(3) > SCAN_GUARD {
        return Err(Error::GuardExceeded(format!("{}³ residues exceed {SCAN_GUARD}", pp)));
    }
    let (mut plus, mut minus) = (false, false);
    for c1 in 0..pp {
        for c2 in 0..pp {
            for c3 in 0..pp {
                let x = combine(o, &[0, c1, c2, c3]);
                let t = crate::orders::trace(&x);
                let delta = &t * &t - o.algebra().norm_coords(&x) * Rational::from_integer(4.into());
                match exactnum::legendre(&delta.to_integer(), p) {
                    1 => plus = true,
                    -1 => minus = true,
                    _ => {}
                }
            }
        }
    }
    Ok(match (plus, minus) {
        (true, true) => None,
        (true, false) => Some(EichlerInvariant::Plus1),
        (false, true) => Some(EichlerInvariant::Minus1),
        (false, false) => Some(EichlerInvariant::Zero),
    })
}

/// The local class of `O` at `p`, read from the standard form of `f_O` and
/// cross-checked against the structural Eichler invariant.
pub fn classify_local(o: &Order, p: Prime) -> Result<LocalOrderClass> {
    let f = ternary_form_of_order(o)?;
    let label = standardize_local(&f, p)?;
    let class = LocalOrderClass::from_label(label)?;
    let v = exactnum::valuation_int(&order_discriminant(o)?, p.get())?;
    if v != class.disc_exponent() {
        return Err(Error::Internal(format!(
            "label {} has exponent {}, v_p(d(O)) = {v}",
            class.label,
            class.disc_exponent()
        )));
    }
    let structural = eichler_invariant(o, p)?;
    if structural != class.eichler {
        return Err(Error::Internal(format!(
            "Eichler invariant of {o} at {p}: structural {structural}, form-level {}",
            class.eichler
        )));
    }
    Ok(class)
}
