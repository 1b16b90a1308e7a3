//! Standard representatives of local similarity classes of ternary forms.
//!
//! At an odd prime `p` a primitive ternary form is similar to exactly one of
//!
//! 1. `⟨1, 1, 1⟩`
//! 2. `⟨1, −ε, p^s⟩`, `s ≥ 1`
//! 3. `⟨1, p^r, ε·p^r⟩`, `r ≥ 1`
//! 4. `⟨1, ε₁·p^r, ε₂·p^s⟩`, `1 ≤ r < s`
//!
//! with unit classes taken from `{1, δ_p}`, `δ_p` the least positive
//! non-residue. At 2 the representatives are the 22 families of [`DyadicRow`].
//! A general form is `p^b` times a primitive one; `b` is the content exponent.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::jordan::{canonical_symbol, raw_jordan, symbols_under_units, Constituent};
use super::{QuadraticForm, Side};
use crate::error::{Error, Result};
use crate::exactnum::{self, padic_valuation, Prime};
use crate::linalg;

/// Which kind of prime a catalog refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalKind {
    NonDyadic(Prime),
    Dyadic,
}

impl LocalKind {
    pub fn prime(self) -> Prime {
        match self {
            LocalKind::NonDyadic(p) => p,
            LocalKind::Dyadic => Prime::new(2).expect("2 is prime"),
        }
    }

    pub fn of(p: Prime) -> LocalKind {
        if p.is_dyadic() {
            LocalKind::Dyadic
        } else {
            LocalKind::NonDyadic(p)
        }
    }
}

/// One family of dyadic representatives.
///
/// Rows 1–4 are `H⊥⟨2^r⟩`, `J⊥⟨2^r⟩`, `⟨1⟩⊥2^r·H` and `⟨1⟩⊥2^r·J`; rows 5–22
/// are diagonal `⟨1, a·2^x, b·2^y⟩` with `a`, `b`, `x`, `y` fixed by the row,
/// `r`, `s` and the listed unit choices.
#[derive(Debug, Clone, Copy)]
pub struct DyadicRow {
    pub row: u8,
    pub min_r: u32,
    /// `None` for one-parameter rows.
    pub min_s: Option<u32>,
    pub unit_choices: &'static [&'static [u64]],
}

const D1: &[u64] = &[1, 3];
const D2: &[u64] = &[5, 7];
const D3: &[u64] = &[1, 5];
const D4: &[u64] = &[1, 7];
const D5: &[u64] = &[1, 3, 5, 7];
const D6: &[u64] = &[3, 7];
const D7: &[u64] = &[3, 5];

pub const DYADIC_ROWS: [DyadicRow; 22] = [
    DyadicRow { row: 1, min_r: 0, min_s: None, unit_choices: &[] },
    DyadicRow { row: 2, min_r: 1, min_s: None, unit_choices: &[] },
    DyadicRow { row: 3, min_r: 2, min_s: None, unit_choices: &[] },
    DyadicRow { row: 4, min_r: 3, min_s: None, unit_choices: &[] },
    DyadicRow { row: 5, min_r: 0, min_s: None, unit_choices: &[D1] },
    DyadicRow { row: 6, min_r: 2, min_s: None, unit_choices: &[] },
    DyadicRow { row: 7, min_r: 3, min_s: None, unit_choices: &[] },
    DyadicRow { row: 8, min_r: 3, min_s: None, unit_choices: &[D1] },
    DyadicRow { row: 9, min_r: 1, min_s: None, unit_choices: &[D1] },
    DyadicRow { row: 10, min_r: 3, min_s: None, unit_choices: &[D3] },
    DyadicRow { row: 11, min_r: 4, min_s: None, unit_choices: &[D2, D3] },
    DyadicRow { row: 12, min_r: 2, min_s: None, unit_choices: &[D4] },
    DyadicRow { row: 13, min_r: 2, min_s: None, unit_choices: &[] },
    DyadicRow { row: 14, min_r: 3, min_s: None, unit_choices: &[] },
    DyadicRow { row: 15, min_r: 5, min_s: None, unit_choices: &[D7] },
    DyadicRow { row: 16, min_r: 5, min_s: None, unit_choices: &[D2] },
    DyadicRow { row: 17, min_r: 3, min_s: Some(0), unit_choices: &[D5] },
    DyadicRow { row: 18, min_r: 3, min_s: Some(0), unit_choices: &[D6] },
    DyadicRow { row: 19, min_r: 3, min_s: Some(1), unit_choices: &[D3] },
    DyadicRow { row: 20, min_r: 3, min_s: Some(3), unit_choices: &[D3] },
    DyadicRow { row: 21, min_r: 3, min_s: Some(3), unit_choices: &[D6] },
    DyadicRow { row: 22, min_r: 3, min_s: Some(3), unit_choices: &[D5] },
];

/// Rows whose orders are Bass orders.
pub const DYADIC_BASS_ROWS: [u8; 7] = [1, 2, 5, 8, 9, 10, 11];

impl DyadicRow {
    pub fn get(row: u8) -> Option<&'static DyadicRow> {
        DYADIC_ROWS.get((row as usize).wrapping_sub(1))
    }

    /// Discriminant exponent of the row's forms at parameters `r`, `s`.
    pub fn disc_exponent(&self, r: u32, s: u32) -> u32 {
        match self.row {
            1 | 2 => r,
            3 | 4 => 2 * r,
            5..=8 => 2 + r,
            9..=11 => 3 + r,
            12..=16 => 4 + r,
            _ => 2 + 2 * r + s,
        }
    }

    /// Diagonal shape `(a, x, b, y)` of `⟨1, a·2^x, b·2^y⟩`.
    fn diagonal_shape(&self, r: u32, s: u32, u: &[u64]) -> (u64, u32, u64, u32) {
        match self.row {
            5 => (1, 0, u[0], r),
            6 => (3, 0, 1, r),
            7 => (7, 0, 1, r),
            8 => (5, 0, u[0], r),
            9 => (3, 1, u[0], r),
            10 => (1, 1, u[0], r),
            11 => (u[0], 1, u[1], r),
            12 => (u[0], 2, u[0], r),
            13 => (1, 2, 3, r),
            14 => (3, 2, 1, r),
            15 => (u[0], 2, 7, r),
            16 => (u[0], 2, 1, r),
            17 => (1, r, u[0], r + s),
            18 => (7, r, u[0], r + s),
            19 => (3, r, u[0], r + s),
            20 => (7, r, u[0], r + s),
            21 => (3, r, u[0], r + s),
            22 => (5, r, u[0], r + s),
            _ => unreachable!("not a diagonal row"),
        }
    }

    fn form(&self, r: u32, s: u32, units: &[u64]) -> Result<QuadraticForm> {
        let two = |k: u32| BigInt::from(2).pow(k);
        let c: [BigInt; 6] = match self.row {
            1 => [0.into(), 0.into(), two(r), 1.into(), 0.into(), 0.into()],
            2 => [1.into(), 1.into(), two(r), 1.into(), 0.into(), 0.into()],
            3 => [1.into(), 0.into(), 0.into(), 0.into(), 0.into(), two(r)],
            4 => [1.into(), two(r), two(r), 0.into(), 0.into(), two(r)],
            _ => {
                let (a, x, b, y) = self.diagonal_shape(r, s, units);
                [1.into(), BigInt::from(a) * two(x), BigInt::from(b) * two(y), 0.into(), 0.into(), 0.into()]
            }
        };
        QuadraticForm::new(3, c.to_vec())
    }

    fn validate(&self, r: u32, s: u32, units: &[u64]) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(format!("row {}: {m}", self.row)));
        if r < self.min_r {
            return bad(format!("needs r ≥ {}", self.min_r));
        }
        match self.min_s {
            Some(ms) if s < ms => return bad(format!("needs s ≥ {ms}")),
            None if s != 0 => return bad("takes no parameter s".into()),
            _ => {}
        }
        if units.len() != self.unit_choices.len() {
            return bad(format!("expects {} unit parameters", self.unit_choices.len()));
        }
        for (u, allowed) in units.iter().zip(self.unit_choices) {
            if !allowed.contains(u) {
                return bad(format!("unit {u} not among {allowed:?}"));
            }
        }
        Ok(())
    }
}

/// Canonical descriptor of a local similarity class of ternary forms.
///
/// `category` is 1–4 at odd primes and the row number 1–22 at 2. For the
/// odd categories `r`, `s` are the two nonzero exponents (`r = s` in
/// category 3, `r = 0` in categories 1 and 2) and `units` the listed unit
/// classes; for dyadic rows they are the row parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardFormLabel {
    pub prime: Prime,
    pub category: u8,
    pub r: u32,
    pub s: u32,
    pub units: Vec<u64>,
    pub content_exponent: u32,
}

impl fmt::Display for StandardFormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units: Vec<String> = self.units.iter().map(|u| u.to_string()).collect();
        write!(
            f,
            "p={} category={} r={} s={} units=[{}] b={}",
            self.prime,
            self.category,
            self.r,
            self.s,
            units.join(","),
            self.content_exponent
        )
    }
}

impl StandardFormLabel {
    pub fn is_dyadic(&self) -> bool {
        self.prime.is_dyadic()
    }

    /// Checks that the parameters are inside the category's range.
    pub fn validate(&self) -> Result<()> {
        if self.is_dyadic() {
            let row = DyadicRow::get(self.category)
                .ok_or_else(|| Error::InvalidArgument(format!("no dyadic row {}", self.category)))?;
            return row.validate(self.r, self.s, &self.units);
        }
        let delta = exactnum::smallest_nonresidue(self.prime);
        let bad = |m: &str| Err(Error::InvalidArgument(format!("category {}: {m}", self.category)));
        if self.units.iter().any(|&u| u != 1 && u != delta) {
            return bad("units must be 1 or the least non-residue");
        }
        let ok = match self.category {
            1 => self.r == 0 && self.s == 0 && self.units.is_empty(),
            2 => self.r == 0 && self.s >= 1 && self.units.len() == 1,
            3 => self.r >= 1 && self.s == self.r && self.units.len() == 1,
            4 => self.r >= 1 && self.s > self.r && self.units.len() == 2,
            _ => return bad("unknown category"),
        };
        if ok {
            Ok(())
        } else {
            bad("parameters out of range")
        }
    }

    /// The catalog representative without the content factor.
    pub fn primitive_form(&self) -> Result<QuadraticForm> {
        self.validate()?;
        if self.is_dyadic() {
            let row = DyadicRow::get(self.category).expect("validated");
            return row.form(self.r, self.s, &self.units);
        }
        let p = BigInt::from(self.prime.get());
        let u = |i: usize| BigInt::from(self.units[i]);
        let d: Vec<BigInt> = match self.category {
            1 => vec![1.into(), 1.into(), 1.into()],
            2 => vec![1.into(), -u(0), p.pow(self.s)],
            3 => vec![1.into(), p.pow(self.r), u(0) * p.pow(self.r)],
            _ => vec![1.into(), u(0) * p.pow(self.r), u(1) * p.pow(self.s)],
        };
        QuadraticForm::diagonal_big(&d)
    }

    /// The catalog representative `p^b·g`.
    pub fn form(&self) -> Result<QuadraticForm> {
        let g = self.primitive_form()?;
        g.scaled(&BigInt::from(self.prime.get()).pow(self.content_exponent))
    }

    /// Valuation of the discriminant of the primitive representative.
    pub fn gorenstein_exponent(&self) -> u32 {
        if self.is_dyadic() {
            let row = DyadicRow::get(self.category).expect("valid label");
            row.disc_exponent(self.r, self.s)
        } else {
            self.r + self.s
        }
    }

    /// Exponent of the discriminant of the associated order,
    /// `v_p(d(g)) + 3b`.
    pub fn disc_exponent(&self) -> u32 {
        self.gorenstein_exponent() + 3 * self.content_exponent
    }

    pub fn is_gorenstein(&self) -> bool {
        self.content_exponent == 0
    }

    /// Whether the associated order is a Bass order.
    pub fn is_bass(&self) -> bool {
        if !self.is_gorenstein() {
            return false;
        }
        if self.is_dyadic() {
            DYADIC_BASS_ROWS.contains(&self.category)
        } else {
            self.r <= 1
        }
    }

    /// Division side iff the representative is anisotropic at the prime.
    pub fn side(&self) -> Result<Side> {
        self.primitive_form()?.side_at(self.prime)
    }
}

/// Whether a catalog label belongs to a Bass order (see
/// [`StandardFormLabel::is_bass`]).
pub fn is_catalog_bass(label: &StandardFormLabel) -> bool {
    label.is_bass()
}

fn unit_class(sign: i8, p: Prime) -> u64 {
    if sign == 1 {
        1
    } else {
        exactnum::smallest_nonresidue(p)
    }
}

fn gorenstein_labels(kind: LocalKind, n: u32) -> Vec<StandardFormLabel> {
    let p = kind.prime();
    let mk = |category: u8, r: u32, s: u32, units: Vec<u64>| StandardFormLabel {
        prime: p,
        category,
        r,
        s,
        units,
        content_exponent: 0,
    };
    let mut out = Vec::new();
    match kind {
        LocalKind::NonDyadic(p) => {
            let classes = [1, exactnum::smallest_nonresidue(p)];
            if n == 0 {
                out.push(mk(1, 0, 0, vec![]));
            } else {
                for e in classes {
                    out.push(mk(2, 0, n, vec![e]));
                }
                if n.is_multiple_of(2) {
                    for e in classes {
                        out.push(mk(3, n / 2, n / 2, vec![e]));
                    }
                }
                for r in 1..n {
                    let s = n - r;
                    if s <= r {
                        break;
                    }
                    for e1 in classes {
                        for e2 in classes {
                            out.push(mk(4, r, s, vec![e1, e2]));
                        }
                    }
                }
            }
        }
        LocalKind::Dyadic => {
            for row in &DYADIC_ROWS {
                for r in row.min_r..=n {
                    let s_range = match row.min_s {
                        Some(ms) => ms..=n,
                        None => 0..=0,
                    };
                    for s in s_range {
                        if row.disc_exponent(r, s) != n {
                            continue;
                        }
                        for units in unit_products(row.unit_choices) {
                            out.push(mk(row.row, r, s, units));
                        }
                    }
                }
            }
        }
    }
    out
}

fn unit_products(choices: &[&[u64]]) -> Vec<Vec<u64>> {
    let mut acc = vec![Vec::new()];
    for opts in choices {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&u| {
                    let mut v = prefix.clone();
                    v.push(u);
                    v
                })
            })
            .collect();
    }
    acc
}

/// All labels whose order has discriminant exponent `n`, duplicate free.
/// Non-Gorenstein labels (content exponent `b ≥ 1`) contribute the
/// Gorenstein labels of exponent `n − 3b`.
pub fn enumerate_local_reps(kind: LocalKind, n: u32, gorenstein_only: bool) -> Vec<StandardFormLabel> {
    let mut out = gorenstein_labels(kind, n);
    if !gorenstein_only {
        for b in 1..=n / 3 {
            for mut l in gorenstein_labels(kind, n - 3 * b) {
                l.content_exponent = b;
                out.push(l);
            }
        }
    }
    out
}

type SymbolTable = Vec<(StandardFormLabel, Vec<Vec<Constituent>>)>;

fn dyadic_symbol_table(n: u32) -> Result<Arc<SymbolTable>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<SymbolTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&n) {
        return Ok(t.clone());
    }
    let mut table = Vec::new();
    for label in gorenstein_labels(LocalKind::Dyadic, n) {
        let f = label.primitive_form()?;
        let syms = symbols_under_units(&f, label.prime)?.into_iter().map(|(_, s)| s).collect();
        table.push((label, syms));
    }
    let table = Arc::new(table);
    cache.lock().expect("cache lock").insert(n, table.clone());
    Ok(table)
}

/// The catalog label similar to `f` over ℤ_p.
pub fn standardize_local(f: &QuadraticForm, p: Prime) -> Result<StandardFormLabel> {
    if f.dim() != 3 {
        return Err(Error::Dimension { expected: 3, got: f.dim() });
    }
    let (content, g) = f.content_and_primitive();
    let b = exactnum::valuation_int(&content, p.get())?;
    let mut label = if p.is_dyadic() { standardize_dyadic(&g)? } else { standardize_odd(&g, p)? };
    label.content_exponent = b;
    Ok(label)
}

fn standardize_odd(g: &QuadraticForm, p: Prime) -> Result<StandardFormLabel> {
    let blocks = raw_jordan(&g.gram_rational(), p)?;
    // At odd p every block is 1×1; Gram entries are twice the diagonal
    // coefficients and 2 is a unit, so the classes are read off directly.
    let mut entries: Vec<(u32, i8)> = Vec::with_capacity(3);
    for blk in &blocks {
        let x = &blk.entries[0][0] / linalg::rat(2);
        let v = padic_valuation(&x, p)? as u32;
        let unit = x / crate::Rational::from_integer(BigInt::from(p.get()).pow(v));
        entries.push((v, exactnum::legendre(&(unit.numer() * unit.denom()), p)));
    }
    if entries.len() != 3 || entries[0].0 != 0 {
        return Err(Error::Internal(format!("unexpected Jordan shape for primitive form {g}")));
    }
    let (r, s) = (entries[1].0, entries[2].0);
    let c1 = entries[0].1 * entries[1].1;
    let c2 = entries[0].1 * entries[2].1;
    let (category, units) = if r == 0 && s == 0 {
        (1, vec![])
    } else if r == 0 {
        (2, vec![unit_class(c1 * unit_sign_of_minus_one(p), p)])
    } else if r == s {
        (3, vec![unit_class(c1 * c2, p)])
    } else {
        (4, vec![unit_class(c1, p), unit_class(c2, p)])
    };
    Ok(StandardFormLabel { prime: p, category, r, s, units, content_exponent: 0 })
}

/// `(−1/p)` as ±1; needed because category 2 lists `−ε` rather than `ε`.
fn unit_sign_of_minus_one(p: Prime) -> i8 {
    exactnum::legendre(&BigInt::from(-1), p)
}

fn standardize_dyadic(g: &QuadraticForm) -> Result<StandardFormLabel> {
    let two = Prime::new(2)?;
    let disc = g.discriminant();
    if disc.is_zero() {
        return Err(Error::Degenerate);
    }
    let n = padic_valuation(&disc, two)?;
    if n < 0 {
        return Err(Error::Internal("negative discriminant valuation".into()));
    }
    let target = canonical_symbol(&g.gram_rational(), two)?;
    let table = dyadic_symbol_table(n as u32)?;
    let hits: Vec<&StandardFormLabel> =
        table.iter().filter(|(_, syms)| syms.contains(&target)).map(|(l, _)| l).collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(Error::CatalogIncomplete(format!("no dyadic representative for {g}"))),
        many => Err(Error::Internal(format!("{} dyadic representatives match {g}", many.len()))),
    }
}
