//! Jordan splittings over ℤ_p and the local invariants built from them.
//!
//! Everything is computed with exact rationals: a congruence transformation
//! whose entries are `p`-adic integers never needs truncation, so no working
//! precision has to be fixed.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::QuadraticForm;
use crate::error::{Error, Result};
use crate::exactnum::{self, padic_valuation, unit_mod8, Prime};
use crate::linalg::{self, Mat};
use crate::Rational;

/// Shape of one Jordan block, in the notation of forms: `Unit(u)` at scale
/// `k` is `u·p^k·x²`, `H` at scale `k` is `2^k·xy` and `J` at scale `k` is
/// `2^k·(x² + xy + y²)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JordanBlockKind {
    /// Unit residue modulo `p` (odd `p`) or modulo 8 (`p = 2`).
    Unit(u64),
    H,
    J,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct JordanBlock {
    pub scale: u32,
    pub kind: JordanBlockKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanDecomposition {
    pub prime: Prime,
    pub blocks: Vec<JordanBlock>,
}

impl JordanDecomposition {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| if matches!(b.kind, JordanBlockKind::Unit(_)) { 1 } else { 2 }).sum()
    }

    /// The block-diagonal form assembled from the blocks.
    pub fn to_form(&self) -> Result<QuadraticForm> {
        let n = self.rank();
        let mut g = vec![vec![BigInt::zero(); n]; n];
        let mut at = 0;
        let p = BigInt::from(self.prime.get());
        for b in &self.blocks {
            let c = p.pow(b.scale);
            match b.kind {
                JordanBlockKind::Unit(u) => {
                    g[at][at] = BigInt::from(2 * u) * &c;
                    at += 1;
                }
                JordanBlockKind::H | JordanBlockKind::J => {
                    let d = if b.kind == JordanBlockKind::J { &c * 2 } else { BigInt::zero() };
                    g[at][at] = d.clone();
                    g[at + 1][at + 1] = d;
                    g[at][at + 1] = c.clone();
                    g[at + 1][at] = c;
                    at += 2;
                }
            }
        }
        QuadraticForm::from_gram(&g)
    }
}

/// A block of a Jordan splitting of a Gram matrix, `scale` being the
/// valuation of the block's entries (lattice scale).
#[derive(Debug, Clone)]
pub(crate) struct RawBlock {
    pub scale: u32,
    pub entries: Mat,
}

impl RawBlock {
    fn rank(&self) -> u32 {
        self.entries.len() as u32
    }

    fn det(&self) -> Rational {
        linalg::det(&self.entries)
    }
}

fn val(x: &Rational, p: Prime) -> i64 {
    padic_valuation(x, p).expect("nonzero entry")
}

/// Splits a non-degenerate Gram matrix with `p`-integral entries into Jordan
/// blocks, sorted by scale.
pub(crate) fn raw_jordan(g: &Mat, p: Prime) -> Result<Vec<RawBlock>> {
    let n = g.len();
    if linalg::det(g).is_zero() {
        return Err(Error::Degenerate);
    }
    let mut m = g.clone();
    let mut rem: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    while !rem.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None;
        for &i in &rem {
            for &j in &rem {
                if m[i][j].is_zero() {
                    continue;
                }
                let v = val(&m[i][j], p);
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, mut i, j) = best.ok_or(Error::Degenerate)?;
        if v < 0 {
            return Err(Error::InvalidArgument("Gram matrix is not p-integral".into()));
        }
        if i != j && !p.is_dyadic() {
            // e_i ← e_i + e_j makes the diagonal entry attain the minimum.
            add_to_basis(&mut m, i, j, &Rational::one());
        } else if i != j {
            let (a, b, c) = (m[i][i].clone(), m[i][j].clone(), m[j][j].clone());
            let det = &a * &c - &b * &b;
            for &k in &rem {
                if k == i || k == j {
                    continue;
                }
                let (x, y) = (m[i][k].clone(), m[j][k].clone());
                let s = (&c * &x - &b * &y) / &det;
                let t = (&a * &y - &b * &x) / &det;
                add_to_basis(&mut m, k, i, &-s);
                add_to_basis(&mut m, k, j, &-t);
            }
            blocks.push(RawBlock { scale: v as u32, entries: vec![vec![a, b.clone()], vec![b, c]] });
            rem.retain(|&k| k != i && k != j);
            continue;
        } else {
            i = j;
        }
        let piv = m[i][i].clone();
        for &k in &rem {
            if k == i || m[k][i].is_zero() {
                continue;
            }
            let c = &m[k][i] / &piv;
            add_to_basis(&mut m, k, i, &-c);
        }
        blocks.push(RawBlock { scale: v as u32, entries: vec![vec![piv]] });
        rem.retain(|&k| k != i);
    }
    blocks.sort_by_key(|b| (b.scale, b.rank()));
    Ok(blocks)
}

/// Basis change `e_k ← e_k + c·e_i` applied to a Gram matrix.
fn add_to_basis(m: &mut Mat, k: usize, i: usize, c: &Rational) {
    let n = m.len();
    for l in 0..n {
        let t = c * &m[i][l];
        m[k][l] += t;
    }
    for l in 0..n {
        let t = c * &m[l][i];
        m[l][k] += t;
    }
}

fn unit_part(x: &Rational, p: Prime, v: u32) -> Rational {
    x / Rational::from_integer(BigInt::from(p.get()).pow(v))
}

/// Jordan decomposition of `f` over ℤ_p.
pub fn jordan_decompose(f: &QuadraticForm, p: Prime) -> Result<JordanDecomposition> {
    let raw = raw_jordan(&f.gram_rational(), p)?;
    let mut blocks = Vec::new();
    for b in raw {
        if b.rank() == 1 {
            let half = &b.entries[0][0] / linalg::rat(2);
            let v = val(&half, p) as u32;
            let u = unit_part(&half, p, v);
            let residue = if p.is_dyadic() {
                unit_mod8(&u) as u64
            } else {
                let num = exactnum::mod_u64(u.numer(), p.get());
                let den = exactnum::mod_u64(u.denom(), p.get());
                num * mod_inverse(den, p.get()) % p.get()
            };
            blocks.push(JordanBlock { scale: v, kind: JordanBlockKind::Unit(residue) });
        } else {
            let scaled = unit_part(&b.det(), p, 2 * b.scale);
            let kind = if unit_mod8(&scaled) == 7 { JordanBlockKind::H } else { JordanBlockKind::J };
            blocks.push(JordanBlock { scale: b.scale, kind });
        }
    }
    Ok(JordanDecomposition { prime: p, blocks })
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(m as i128) as u64
}

/// One constituent of a local genus symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Constituent {
    scale: u32,
    rank: u32,
    sign: i8,
    type_ii: bool,
    oddity: u8,
}

/// Canonical local symbol of a Gram matrix. Two non-degenerate lattices are
/// isometric over ℤ_p iff their canonical symbols agree.
///
/// Odd `p`: scale, rank and the residue character of each constituent's
/// determinant. `p = 2`: scale, rank, sign of the determinant (±1 according
/// to ±1 vs ±3 mod 8), type and oddity, with oddities fused across
/// compartments and signs walked to the front of each train.
pub(crate) fn canonical_symbol(g: &Mat, p: Prime) -> Result<Vec<Constituent>> {
    let raw = raw_jordan(g, p)?;
    let mut cons: Vec<Constituent> = Vec::new();
    let mut dets: Vec<Rational> = Vec::new();
    for b in &raw {
        let det_unit = unit_part(&b.det(), p, b.scale * b.rank());
        let odd = if b.rank() == 1 { unit_mod8(&det_unit) } else { 0 };
        match cons.last_mut() {
            Some(c) if c.scale == b.scale => {
                c.rank += b.rank();
                c.type_ii &= b.rank() == 2;
                c.oddity = (c.oddity + odd) % 8;
                let last = dets.last_mut().expect("parallel");
                *last = &*last * &det_unit;
            }
            _ => {
                cons.push(Constituent { scale: b.scale, rank: b.rank(), sign: 1, type_ii: b.rank() == 2, oddity: odd });
                dets.push(det_unit);
            }
        }
    }
    if !p.is_dyadic() {
        for (c, d) in cons.iter_mut().zip(&dets) {
            c.sign = exactnum::legendre(&(d.numer() * d.denom()), p);
            c.oddity = 0;
            c.type_ii = false;
        }
        return Ok(cons);
    }
    for (c, d) in cons.iter_mut().zip(&dets) {
        c.sign = if matches!(unit_mod8(d), 1 | 7) { 1 } else { -1 };
        if c.type_ii {
            c.oddity = 0;
        }
    }
    Ok(canonicalize_dyadic(cons))
}

fn canonicalize_dyadic(mut s: Vec<Constituent>) -> Vec<Constituent> {
    // Compartments: maximal runs of type I constituents at consecutive scales.
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for i in 0..s.len() {
        let extends = !s[i].type_ii && cur.last().is_some_and(|&l| s[l].scale + 1 == s[i].scale);
        if extends {
            cur.push(i);
        } else {
            if !cur.is_empty() {
                comps.push(std::mem::take(&mut cur));
            }
            if !s[i].type_ii {
                cur.push(i);
            }
        }
    }
    if !cur.is_empty() {
        comps.push(cur);
    }
    for comp in &comps {
        let total = comp.iter().map(|&i| s[i].oddity as u32).sum::<u32>() % 8;
        for &i in comp {
            s[i].oddity = 0;
        }
        s[comp[0]].oddity = total as u8;
    }
    // Trains: runs joined unless the scale gap rules out sign walking.
    let mut trains: Vec<Vec<usize>> = Vec::new();
    for i in 0..s.len() {
        let joins = i > 0 && {
            let (prev, cur) = (&s[i - 1], &s[i]);
            let gap = cur.scale - prev.scale;
            !(gap > 2 || (gap == 2 && (prev.type_ii || cur.type_ii)) || (gap == 1 && prev.type_ii && cur.type_ii))
        };
        if joins {
            trains.last_mut().expect("started").push(i);
        } else {
            trains.push(vec![i]);
        }
    }
    for train in &trains {
        for &t1 in train[1..].iter().rev() {
            if s[t1].sign == -1 {
                s[t1].sign = 1;
                s[t1 - 1].sign *= -1;
                for comp in &comps {
                    if comp.contains(&(t1 - 1)) || comp.contains(&t1) {
                        let h = comp[0];
                        s[h].oddity = (s[h].oddity + 4) % 8;
                    }
                }
            }
        }
    }
    s
}

/// Representatives of the unit square classes at `p` used as similarity
/// multipliers.
pub(crate) fn unit_classes(p: Prime) -> Vec<u64> {
    if p.is_dyadic() {
        vec![1, 3, 5, 7]
    } else {
        vec![1, exactnum::smallest_nonresidue(p)]
    }
}

pub(crate) fn scaled_gram(f: &QuadraticForm, u: u64) -> Mat {
    let u = linalg::rat(u as i64);
    f.gram_rational().into_iter().map(|r| r.into_iter().map(|x| x * &u).collect()).collect()
}

/// Canonical symbols of `u·f` for every unit class `u`, in the order of
/// [`unit_classes`].
pub(crate) fn symbols_under_units(f: &QuadraticForm, p: Prime) -> Result<Vec<(u64, Vec<Constituent>)>> {
    unit_classes(p).into_iter().map(|u| Ok((u, canonical_symbol(&scaled_gram(f, u), p)?))).collect()
}

fn check_dims(f: &QuadraticForm, g: &QuadraticForm) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: g.dim() });
    }
    Ok(())
}

/// A unit class `u` with `u·f ≅ g` over ℤ_p, if one exists.
pub fn similarity_witness(f: &QuadraticForm, g: &QuadraticForm, p: Prime) -> Result<Option<u64>> {
    check_dims(f, g)?;
    let target = canonical_symbol(&g.gram_rational(), p)?;
    for (u, sym) in symbols_under_units(f, p)? {
        if sym == target {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Whether `u·f` is isometric to `g` over ℤ_p for some `p`-adic unit `u`.
pub fn similar_over_zp(f: &QuadraticForm, g: &QuadraticForm, p: Prime) -> Result<bool> {
    Ok(similarity_witness(f, g, p)?.is_some())
}

/// Whether `f` and `g` are isometric over ℤ_p.
pub fn isometric_over_zp(f: &QuadraticForm, g: &QuadraticForm, p: Prime) -> Result<bool> {
    check_dims(f, g)?;
    Ok(canonical_symbol(&f.gram_rational(), p)? == canonical_symbol(&g.gram_rational(), p)?)
}
