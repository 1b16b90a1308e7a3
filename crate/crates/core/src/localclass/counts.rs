//! Numbers of local isomorphism classes of orders with discriminant `p^n`,
//! by enumeration and by closed form, and genus counts over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{LocalOrderClass, OrderCategory};
use crate::error::{Error, Result};
use crate::exactnum::Prime;
use crate::quadforms::{enumerate_local_reps, LocalKind, Side};
use crate::Rational;

fn admits(class: &LocalOrderClass, category: OrderCategory) -> bool {
    match category {
        OrderCategory::Bass => class.flags.bass,
        OrderCategory::Gorenstein => class.flags.gorenstein,
        OrderCategory::All => true,
    }
}

/// Local classes with discriminant exponent `n` on one side, restricted to
/// a category.
pub fn enumerate_classes(kind: LocalKind, n: u32, category: OrderCategory, side: Side) -> Result<Vec<LocalOrderClass>> {
    let gorenstein_only = category != OrderCategory::All;
    let mut out = Vec::new();
    for label in enumerate_local_reps(kind, n, gorenstein_only) {
        let class = LocalOrderClass::from_label(label)?;
        if class.side == side && admits(&class, category) {
            out.push(class);
        }
    }
    Ok(out)
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn as_count(x: Rational) -> Result<u64> {
    if !x.is_integer() {
        return Err(Error::Internal(format!("closed form gave non-integer {x}")));
    }
    u64::try_from(x.to_integer()).map_err(|_| Error::Internal(format!("closed form gave {x}")))
}

/// Small rows of the dyadic table, `[bass, gorenstein, all] × [division, matrix]`.
const DYADIC_SMALL: [[[u64; 2]; 3]; 9] = [
    [[0, 1], [0, 1], [0, 1]],
    [[1, 1], [1, 1], [1, 1]],
    [[1, 3], [1, 3], [1, 3]],
    [[2, 2], [2, 2], [2, 3]],
    [[2, 4], [2, 6], [3, 7]],
    [[4, 4], [5, 5], [6, 8]],
    [[4, 6], [6, 11], [8, 14]],
    [[7, 7], [10, 10], [13, 17]],
    [[6, 8], [10, 18], [16, 26]],
];

const NONDYADIC_SMALL: [[[u64; 2]; 3]; 3] =
    [[[0, 1], [0, 1], [0, 1]], [[1, 1], [1, 1], [1, 1]], [[1, 3], [1, 3], [1, 3]]];

fn cat_index(c: OrderCategory) -> usize {
    match c {
        OrderCategory::Bass => 0,
        OrderCategory::Gorenstein => 1,
        OrderCategory::All => 2,
    }
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Division => 0,
        Side::Matrix => 1,
    }
}

/// The tabulated number of classes (explicit rows for small `n`, closed
/// forms beyond them).
pub fn closed_form_count(kind: LocalKind, n: u32, category: OrderCategory, side: Side) -> Result<u64> {
    let (ci, si) = (cat_index(category), side_index(side));
    let odd = n % 2 == 1;
    let m = i64::from(n);
    match kind {
        LocalKind::NonDyadic(_) => {
            if n < 3 {
                return Ok(NONDYADIC_SMALL[n as usize][ci][si]);
            }
            let alpha = if n.is_multiple_of(3) { rat(1, 3) } else { rat(0, 1) };
            let v = match (category, side, odd) {
                (OrderCategory::Bass, Side::Division, true) => rat(3, 1),
                (OrderCategory::Bass, Side::Matrix, true) => rat(3, 1),
                (OrderCategory::Bass, Side::Division, false) => rat(2, 1),
                (OrderCategory::Bass, Side::Matrix, false) => rat(4, 1),
                (OrderCategory::Gorenstein, _, true) => rat(m, 1),
                (OrderCategory::Gorenstein, Side::Division, false) => rat(m, 2),
                (OrderCategory::Gorenstein, Side::Matrix, false) => rat(3 * m, 2),
                (OrderCategory::All, Side::Division, true) => rat(m * m + 4 * m + 3, 8),
                (OrderCategory::All, Side::Matrix, true) => rat(5 * m * m + 12 * m + 7, 24) + alpha,
                (OrderCategory::All, Side::Division, false) => rat(m * m + 2 * m, 8),
                (OrderCategory::All, Side::Matrix, false) => rat(5 * m * m + 18 * m + 16, 24) + alpha,
            };
            as_count(v)
        }
        LocalKind::Dyadic => {
            if n < 9 {
                return Ok(DYADIC_SMALL[n as usize][ci][si]);
            }
            let beta = if n % 3 == 2 { rat(1, 3) } else { rat(0, 1) };
            let v = match (category, side, odd) {
                (OrderCategory::Bass, _, true) => rat(7, 1),
                (OrderCategory::Bass, Side::Division, false) => rat(6, 1),
                (OrderCategory::Bass, Side::Matrix, false) => rat(8, 1),
                (OrderCategory::Gorenstein, _, true) => rat(4 * (m - 5), 1),
                (OrderCategory::Gorenstein, Side::Division, false) => rat(3 * (m - 5), 1),
                (OrderCategory::Gorenstein, Side::Matrix, false) => rat(5 * (m - 5), 1),
                (OrderCategory::All, Side::Division, true) => rat(7 * m * m - 46 * m + 135, 12) + beta,
                (OrderCategory::All, Side::Matrix, true) => rat(3 * m * m - 22 * m + 75, 4) + beta * rat(3, 1),
                (OrderCategory::All, Side::Division, false) => rat(7 * m * m - 52 * m + 156, 12) + beta,
                (OrderCategory::All, Side::Matrix, false) => rat(3 * m * m - 20 * m + 68, 4) + beta * rat(3, 1),
            };
            as_count(v)
        }
    }
}

/// Number of local classes of orders with discriminant `p^n`.
///
/// The catalog enumeration is compared with the tabulated value and, for
/// `All` with `n ≥ 3`, with `g(n) + t(n − 3)`; any disagreement is an
/// internal error.
pub fn count_classes(kind: LocalKind, n: u32, category: OrderCategory, side: Side) -> Result<u64> {
    let enumerated = enumerate_classes(kind, n, category, side)?.len() as u64;
    let tabulated = closed_form_count(kind, n, category, side)?;
    if enumerated != tabulated {
        return Err(Error::Internal(format!(
            "{kind:?} n={n} {category} {side}: enumeration gives {enumerated}, table gives {tabulated}"
        )));
    }
    if category == OrderCategory::All && n >= 3 {
        let g = enumerate_classes(kind, n, OrderCategory::Gorenstein, side)?.len() as u64;
        let t = enumerate_classes(kind, n - 3, OrderCategory::All, side)?.len() as u64;
        if g + t != enumerated {
            return Err(Error::Internal(format!("t({n}) = {enumerated} but g({n}) + t({}) = {}", n - 3, g + t)));
        }
    }
    Ok(enumerated)
}

/// One row of a class-count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: u32,
    pub bass: [u64; 2],
    pub gorenstein: [u64; 2],
    pub all: [u64; 2],
}

/// Class counts for `n = 0..=n_max`; each pair is `[division, matrix]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub dyadic: bool,
    pub rows: Vec<CountRow>,
}

pub fn count_table(kind: LocalKind, n_max: u32) -> Result<CountTable> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let pair = |c| -> Result<[u64; 2]> {
            Ok([count_classes(kind, n, c, Side::Division)?, count_classes(kind, n, c, Side::Matrix)?])
        };
        rows.push(CountRow {
            n,
            bass: pair(OrderCategory::Bass)?,
            gorenstein: pair(OrderCategory::Gorenstein)?,
            all: pair(OrderCategory::All)?,
        });
    }
    Ok(CountTable { dyadic: matches!(kind, LocalKind::Dyadic), rows })
}

/// Number of genera of orders with discriminant `∏ p^e`, for each possible
/// algebra discriminant `d(A)`.
///
/// `d(A)` runs over the products of subsets of the primes; the infinite
/// place is ramified exactly when that subset is odd, so every subset is
/// admissible. Each genus count is the product of the local counts at the
/// listed primes, on the division side where `p | d(A)`.
pub fn count_genera(factored: &[(Prime, u32)]) -> Result<BTreeMap<BigInt, u64>> {
    let mut primes: Vec<(Prime, u32)> = factored.to_vec();
    primes.sort();
    if primes.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidArgument("repeated prime in factorization".into()));
    }
    if let Some((p, _)) = primes.iter().find(|(_, e)| *e == 0) {
        return Err(Error::InvalidArgument(format!("exponent of {p} must be positive")));
    }
    let mut local = Vec::with_capacity(primes.len());
    for &(p, e) in &primes {
        let kind = LocalKind::of(p);
        local.push([
            count_classes(kind, e, OrderCategory::All, Side::Division)?,
            count_classes(kind, e, OrderCategory::All, Side::Matrix)?,
        ]);
    }
    let mut out = BTreeMap::new();
    for mask in 0u64..(1 << primes.len()) {
        let mut d = BigInt::one();
        let mut count = 1u64;
        for (t, &(p, _)) in primes.iter().enumerate() {
            if mask >> t & 1 == 1 {
                d *= p.get();
                count *= local[t][0];
            } else {
                count *= local[t][1];
            }
        }
        out.insert(d, count);
    }
    Ok(out)
}
