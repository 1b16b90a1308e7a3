//! Small dense linear algebra over ℚ and ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub type Mat = Vec<Vec<Rational>>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Rational::zero(), |acc, t| acc + &a[i][t] * &b[t][j])).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn det(a: &Mat) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Mat = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for k in 0..2 * n {
            m[c][k] /= &piv;
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for k in 0..2 * n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Lower-triangular Hermite normal form of the ℤ-span of integer rows.
///
/// Row `i` of the result has its positive pivot in column `i` and zeros to the
/// right of it; entries left of a pivot are reduced into `0..pivot` of their
/// column. Fails unless the rows span a full-rank lattice in ℤⁿ.
pub fn hnf_lower(rows: Vec<Vec<BigInt>>, n: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut active: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut out: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for col in (0..n).rev() {
        loop {
            let nz: Vec<usize> = (0..active.len()).filter(|&i| !active[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| active[i][col].abs()).expect("nonempty");
            let pivot_row = active[best].clone();
            for &i in &nz {
                if i == best {
                    continue;
                }
                let q = active[i][col].div_floor(&pivot_row[col]);
                for k in 0..n {
                    let t = &q * &pivot_row[k];
                    active[i][k] -= t;
                }
            }
        }
        let idx = (0..active.len()).find(|&i| !active[i][col].is_zero()).ok_or(Error::NotFullRank)?;
        let mut row = active.swap_remove(idx);
        if row[col].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        out[col] = Some(row);
        active.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    let mut h: Vec<Vec<BigInt>> = out.into_iter().map(|r| r.expect("pivot set")).collect();
    for i in 0..n {
        for j in (0..i).rev() {
            let q = h[i][j].div_floor(&h[j][j]);
            if q.is_zero() {
                continue;
            }
            let rj = h[j].clone();
            for k in 0..=j {
                let t = &q * &rj[k];
                h[i][k] -= t;
            }
        }
    }
    Ok(h)
}

/// Canonical basis of the ℤ-span of rational rows (lower-triangular HNF
/// after clearing a common denominator).
pub fn rational_hnf(rows: &[Vec<Rational>], n: usize) -> Result<Mat> {
    let d = common_denominator(rows.iter().flatten());
    let ints: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect()).collect();
    let h = hnf_lower(ints, n)?;
    Ok(h.into_iter().map(|r| r.into_iter().map(|x| Rational::new(x, d.clone())).collect()).collect())
}
