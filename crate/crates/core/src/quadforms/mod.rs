//! Integral quadratic forms in up to four variables.
//!
//! A form `f = Σ_{i≤j} a_ij X_i X_j` is stored by its coefficients, diagonal
//! first and then the off-diagonal entries in lexicographic order; for
//! ternary forms that is `a11 a22 a33 a12 a13 a23`. Its Gram matrix `M_f` has
//! `2·a_ii` on the diagonal and `a_ij` off it, so `f(x) = ½·xᵗ M_f x`.

mod catalog;
mod jordan;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Place, Prime};
use crate::linalg::{self, Mat};
use crate::quatalg::hilbert_symbol;
use crate::Rational;

pub use catalog::{
    enumerate_local_reps, is_catalog_bass, standardize_local, DyadicRow, LocalKind, StandardFormLabel,
    DYADIC_BASS_ROWS, DYADIC_ROWS,
};
pub use jordan::{
    isometric_over_zp, jordan_decompose, similar_over_zp, similarity_witness, JordanBlock, JordanBlockKind,
    JordanDecomposition,
};

/// Which local quaternion algebra a ternary form belongs to: the division
/// algebra when the form is anisotropic, the matrix algebra otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Division,
    Matrix,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Division => "division",
            Side::Matrix => "matrix",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s.trim().to_ascii_lowercase().as_str() {
            "division" | "div" | "ramified" => Ok(Side::Division),
            "matrix" | "mat" | "split" => Ok(Side::Matrix),
            other => Err(Error::Parse(format!("unknown side '{other}'"))),
        }
    }
}

/// A non-degenerate integral quadratic form of dimension 1 to 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    dim: usize,
    coeffs: Vec<BigInt>,
}

fn coeff_count(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

/// Position of `a_ij` (with `i < j`) in the coefficient list.
fn offdiag_index(dim: usize, i: usize, j: usize) -> usize {
    let mut k = dim;
    for a in 0..dim {
        for b in a + 1..dim {
            if (a, b) == (i, j) {
                return k;
            }
            k += 1;
        }
    }
    unreachable!("index out of range")
}

impl QuadraticForm {
    pub fn new(dim: usize, coeffs: Vec<BigInt>) -> Result<QuadraticForm> {
        if !(1..=4).contains(&dim) {
            return Err(Error::InvalidArgument(format!("unsupported dimension {dim}")));
        }
        if coeffs.len() != coeff_count(dim) {
            return Err(Error::Dimension { expected: coeff_count(dim), got: coeffs.len() });
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroForm);
        }
        let f = QuadraticForm { dim, coeffs };
        if linalg::det(&f.gram_rational()).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(f)
    }

    /// Ternary form from `a11 a22 a33 a12 a13 a23`.
    pub fn ternary(c: [i64; 6]) -> Result<QuadraticForm> {
        QuadraticForm::new(3, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The diagonal form `⟨d₁, …, dₙ⟩`.
    pub fn diagonal(d: &[i64]) -> Result<QuadraticForm> {
        let n = d.len();
        let mut c: Vec<BigInt> = d.iter().map(|&x| BigInt::from(x)).collect();
        c.resize(coeff_count(n), BigInt::zero());
        QuadraticForm::new(n, c)
    }

    pub fn diagonal_big(d: &[BigInt]) -> Result<QuadraticForm> {
        let n = d.len();
        let mut c = d.to_vec();
        c.resize(coeff_count(n), BigInt::zero());
        QuadraticForm::new(n, c)
    }

    /// Form with the given Gram matrix, which must be symmetric and integral
    /// with even diagonal.
    pub fn from_gram(g: &[Vec<BigInt>]) -> Result<QuadraticForm> {
        let n = g.len();
        if g.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("Gram matrix must be square".into()));
        }
        let mut c = Vec::with_capacity(coeff_count(n));
        for (i, row) in g.iter().enumerate() {
            if row[i].is_odd() {
                return Err(Error::InvalidArgument("Gram diagonal must be even".into()));
            }
            c.push(&row[i] / 2);
        }
        for i in 0..n {
            for j in i + 1..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix must be symmetric".into()));
                }
                c.push(g[i][j].clone());
            }
        }
        QuadraticForm::new(n, c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient `a_ij` (order of `i`, `j` irrelevant, zero-based).
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            &self.coeffs[i]
        } else {
            &self.coeffs[offdiag_index(self.dim, i, j)]
        }
    }

    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).map(|j| if i == j { &self.coeffs[i] * 2 } else { self.coeff(i, j).clone() }).collect()
            })
            .collect()
    }

    pub fn gram_rational(&self) -> Mat {
        self.gram().into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect()
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                s += self.coeff(i, j) * &x[i] * &x[j];
            }
        }
        s
    }

    /// `½·det M_f` in odd dimension, `det M_f` in even dimension.
    pub fn discriminant(&self) -> Rational {
        let d = linalg::det(&self.gram_rational());
        if self.dim % 2 == 1 {
            d / linalg::rat(2)
        } else {
            d
        }
    }

    /// Gcd of the coefficients and the primitive form they leave behind.
    pub fn content_and_primitive(&self) -> (BigInt, QuadraticForm) {
        let c = self.content();
        let g = QuadraticForm { dim: self.dim, coeffs: self.coeffs.iter().map(|x| x / &c).collect() };
        (c, g)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The form `c·f` for a nonzero integer `c`.
    pub fn scaled(&self, c: &BigInt) -> Result<QuadraticForm> {
        if c.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(QuadraticForm { dim: self.dim, coeffs: self.coeffs.iter().map(|x| x * c).collect() })
    }

    /// Orthogonal sum `f ⊥ g`.
    pub fn direct_sum(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        let n = self.dim + other.dim;
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in self.gram().into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                g[i][j] = x;
            }
        }
        for (i, row) in other.gram().into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                g[self.dim + i][self.dim + j] = x;
            }
        }
        QuadraticForm::from_gram(&g)
    }

    /// The form in the variables `y = xT`-substituted basis: `f'(y) = f(T y)`
    /// where the columns of `t` are the new basis vectors. `t` must be integral.
    pub fn transformed(&self, t: &[Vec<BigInt>]) -> Result<QuadraticForm> {
        let tr: Mat = t.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect();
        let g = linalg::mul(&linalg::mul(&linalg::transpose(&tr), &self.gram_rational()), &tr);
        let gi: Vec<Vec<BigInt>> = g.into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
        QuadraticForm::from_gram(&gi)
    }

    /// Diagonalization over ℚ: returns the diagonal quadratic coefficients and
    /// a matrix `T` whose columns are the new basis, with `Tᵗ M_f T` diagonal.
    pub fn rational_diagonalize(&self) -> Result<(Vec<Rational>, Mat)> {
        let n = self.dim;
        let g = self.gram_rational();
        let mut b = linalg::identity(n);
        let gram_of = |b: &Mat| linalg::mul(&linalg::mul(b, &g), &linalg::transpose(b));
        for i in 0..n {
            let mut m = gram_of(&b);
            if m[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !m[j][j].is_zero()) {
                    b.swap(i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                    let bj = b[j].clone();
                    for (x, y) in b[i].iter_mut().zip(bj) {
                        *x += y;
                    }
                } else {
                    return Err(Error::Degenerate);
                }
                m = gram_of(&b);
            }
            for j in i + 1..n {
                if m[j][i].is_zero() {
                    continue;
                }
                let c = &m[j][i] / &m[i][i];
                let bi = b[i].clone();
                for (x, y) in b[j].iter_mut().zip(bi) {
                    *x -= &c * y;
                }
            }
        }
        let m = gram_of(&b);
        let entries = (0..n).map(|i| &m[i][i] / linalg::rat(2)).collect();
        Ok((entries, linalg::transpose(&b)))
    }

    /// True when the form takes only positive or only negative nonzero values
    /// over ℝ.
    pub fn is_definite(&self) -> Result<bool> {
        let (d, _) = self.rational_diagonalize()?;
        Ok(d.iter().all(|x| x.is_positive()) || d.iter().all(|x| x.is_negative()))
    }

    /// Whether a ternary form has no nontrivial zero over the completion at
    /// `place`.
    pub fn is_anisotropic(&self, place: Place) -> Result<bool> {
        if self.dim != 3 {
            return Err(Error::Dimension { expected: 3, got: self.dim });
        }
        if place == Place::Infinite {
            return self.is_definite();
        }
        let (d, _) = self.rational_diagonalize()?;
        let (al, be, ga) = (&d[0], &d[1], &d[2]);
        let h = hilbert_symbol(&-(al * be), &-(al * ga), place)?;
        Ok(h == -1)
    }

    /// Division side iff anisotropic at the finite prime `p`.
    pub fn side_at(&self, p: Prime) -> Result<Side> {
        Ok(if self.is_anisotropic(Place::Finite(p))? { Side::Division } else { Side::Matrix })
    }
}

/// Whether a ternary form is anisotropic at `place`.
pub fn is_anisotropic_padic(f: &QuadraticForm, place: Place) -> Result<bool> {
    f.is_anisotropic(place)
}

/// Histogram of `f(x) mod p^k` over all `x ∈ (ℤ/p^k)^dim`.
pub fn value_distribution_oracle(f: &QuadraticForm, p: Prime, k: u32) -> Result<BTreeMap<u64, u64>> {
    const GUARD: u128 = 10_000_000;
    if k == 0 {
        return Err(Error::InvalidArgument("precision k must be at least 1".into()));
    }
    let modulus = (p.get() as u128).checked_pow(k).filter(|m| *m <= GUARD);
    let total = modulus.and_then(|m| m.checked_pow(f.dim as u32)).filter(|t| *t <= GUARD);
    let (Some(m), Some(total)) = (modulus, total) else {
        return Err(Error::GuardExceeded(format!("{}^({}·{}) points", p, k, f.dim)));
    };
    let m = m as i128;
    let n = f.dim;
    let c: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j < i { 0 } else { f.coeff(i, j).mod_floor(&BigInt::from(m)).to_i128().expect("reduced") })
                .collect()
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut x = vec![0i128; n];
    for _ in 0..total {
        let mut s = 0i128;
        for i in 0..n {
            for j in i..n {
                s = (s + c[i][j] * x[i] % m * x[j]) % m;
            }
        }
        *hist.entry(s as u64).or_insert(0) += 1;
        for xi in x.iter_mut() {
            *xi += 1;
            if *xi < m {
                break;
            }
            *xi = 0;
        }
    }
    Ok(hist)
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for QuadraticForm {
    type Err = Error;

    /// Parses whitespace- or comma-separated coefficients; the count fixes the
    /// dimension (1, 3, 6 or 10 numbers).
    fn from_str(s: &str) -> Result<QuadraticForm> {
        let tokens: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        let mut coeffs = Vec::with_capacity(tokens.len());
        for (pos, t) in tokens.iter().enumerate() {
            let v: BigInt =
                t.parse().map_err(|_| Error::Parse(format!("coefficient {} ('{}') is not an integer", pos + 1, t)))?;
            coeffs.push(v);
        }
        let dim = match coeffs.len() {
            1 => 1,
            3 => 2,
            6 => 3,
            10 => 4,
            n => return Err(Error::Parse(format!("expected 1, 3, 6 or 10 coefficients, got {n}"))),
        };
        QuadraticForm::new(dim, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    dim: usize,
    #[serde(
        serialize_with = "crate::serde_util::serialize_bigint_vec",
        deserialize_with = "crate::serde_util::deserialize_bigint_vec"
    )]
    coeffs: Vec<BigInt>,
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr { dim: self.dim, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QuadraticForm, D::Error> {
        let r = FormRepr::deserialize(d)?;
        QuadraticForm::new(r.dim, r.coeffs).map_err(serde::de::Error::custom)
    }
}
