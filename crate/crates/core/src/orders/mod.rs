//! Lattices and orders inside a fixed algebra `(a, b)_ℚ`.
//!
//! A [`Lattice`] stores the canonical basis of its ℤ-span: the rows of a
//! lower-triangular Hermite normal form with positive pivots, so two lattices
//! are equal exactly when their bases are. For an order the first canonical
//! vector is always `1`, because `ℤ·1 = O ∩ ℚ`.

mod clifford;
mod maximal;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum;
use crate::linalg::{self, Mat};
use crate::quadforms::standardize_local;
use crate::quatalg::QuaternionAlgebra;
use crate::serde_util::{format_rational, parse_rational};
use crate::{Coords, Rational};

pub use clifford::{
    clifford_norm_form, clifford_order, clifford_order_in, gorenstein_closure, norm_form_in_basis,
    satisfies_clifford_relations, ternary_form_of_order, CliffordPresentation,
};
pub use maximal::{maximal_order, MaximalOrderCertificate};

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn unit_vec(k: usize) -> Coords {
    std::array::from_fn(|i| if i == k { Rational::one() } else { Rational::zero() })
}

pub(crate) fn conj(x: &Coords) -> Coords {
    [x[0].clone(), -&x[1], -&x[2], -&x[3]]
}

pub(crate) fn trace(x: &Coords) -> Rational {
    &x[0] * int(2)
}

pub(crate) fn scale(x: &Coords, q: &Rational) -> Coords {
    std::array::from_fn(|k| &x[k] * q)
}

pub(crate) fn add(x: &Coords, y: &Coords) -> Coords {
    std::array::from_fn(|k| &x[k] + &y[k])
}

/// A full ℤ-lattice in `(a, b)_ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    algebra: QuaternionAlgebra,
    basis: Vec<Coords>,
}

impl Lattice {
    /// The lattice spanned by `generators`; fails unless they span a rank-4
    /// lattice.
    pub fn new(algebra: QuaternionAlgebra, generators: &[Coords]) -> Result<Lattice> {
        let rows: Vec<Vec<Rational>> = generators.iter().map(|g| g.to_vec()).collect();
        let h = linalg::rational_hnf(&rows, 4)?;
        let basis = h.into_iter().map(|r| <[Rational; 4]>::try_from(r).expect("four columns")).collect();
        Ok(Lattice { algebra, basis })
    }

    /// Parses 16 rationals, row-major.
    pub fn from_flat(algebra: QuaternionAlgebra, entries: &[Rational]) -> Result<Lattice> {
        if entries.len() != 16 {
            return Err(Error::Dimension { expected: 16, got: entries.len() });
        }
        let rows: Vec<Coords> = entries.chunks(4).map(|c| std::array::from_fn(|k| c[k].clone())).collect();
        if linalg::det(&rows.iter().map(|r| r.to_vec()).collect()).is_zero() {
            return Err(Error::NotFullRank);
        }
        Lattice::new(algebra, &rows)
    }

    /// `(a, b)_ℤ`, spanned by `1, i, j, ij`.
    pub fn standard(algebra: &QuaternionAlgebra) -> Lattice {
        Lattice { algebra: algebra.clone(), basis: (0..4).map(unit_vec).collect() }
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Coords] {
        &self.basis
    }

    pub fn flat(&self) -> Vec<Rational> {
        self.basis.iter().flatten().cloned().collect()
    }

    fn matrix(&self) -> Mat {
        self.basis.iter().map(|r| r.to_vec()).collect()
    }

    /// Coordinates of `x` in the canonical basis.
    pub fn coordinates(&self, x: &Coords) -> Vec<Rational> {
        // The basis is lower triangular, so solve by back substitution
        // from the last column.
        let mut rest = x.to_vec();
        let mut c = vec![Rational::zero(); 4];
        for i in (0..4).rev() {
            c[i] = &rest[i] / &self.basis[i][i];
            for k in 0..=i {
                let t = &c[i] * &self.basis[i][k];
                rest[k] -= t;
            }
        }
        c
    }

    pub fn contains(&self, x: &Coords) -> bool {
        self.coordinates(x).iter().all(linalg::is_integral)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.algebra == other.algebra && other.basis.iter().all(|x| self.contains(x))
    }

    pub fn scaled(&self, q: &Rational) -> Result<Lattice> {
        if q.is_zero() {
            return Err(Error::NotFullRank);
        }
        let gens: Vec<Coords> = self.basis.iter().map(|x| scale(x, q)).collect();
        Lattice::new(self.algebra.clone(), &gens)
    }

    /// `L + L'`.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.same_algebra(other)?;
        let gens: Vec<Coords> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::new(self.algebra.clone(), &gens)
    }

    /// The lattice spanned by all products `x·y`, `x ∈ L`, `y ∈ L'`.
    pub fn product(&self, other: &Lattice) -> Result<Lattice> {
        self.same_algebra(other)?;
        let mut gens = Vec::with_capacity(16);
        for x in &self.basis {
            for y in &other.basis {
                gens.push(self.algebra.mul_coords(x, y));
            }
        }
        Lattice::new(self.algebra.clone(), &gens)
    }

    fn same_algebra(&self, other: &Lattice) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    /// Image of the lattice under a linear map on coordinates.
    pub(crate) fn map(&self, f: impl Fn(&Coords) -> Coords) -> Result<Lattice> {
        let gens: Vec<Coords> = self.basis.iter().map(f).collect();
        Lattice::new(self.algebra.clone(), &gens)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.basis.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "({}) [{}]", self.algebra, rows.join("; "))
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    algebra: QuaternionAlgebra,
    basis: Vec<String>,
}

impl LatticeRepr {
    fn of(l: &Lattice) -> LatticeRepr {
        LatticeRepr { algebra: l.algebra.clone(), basis: l.flat().iter().map(format_rational).collect() }
    }

    fn into_lattice(self) -> Result<Lattice> {
        let entries = parse_basis(self.basis.iter().map(String::as_str))?;
        Lattice::from_flat(self.algebra, &entries)
    }
}

/// Parses rational basis entries, reporting the first bad position.
pub fn parse_basis<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Vec<Rational>> {
    items
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            parse_rational(s).ok_or_else(|| Error::Parse(format!("basis entry {} ('{s}') is not a rational", k + 1)))
        })
        .collect()
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Lattice, D::Error> {
        LatticeRepr::deserialize(d)?.into_lattice().map_err(serde::de::Error::custom)
    }
}

/// `1 ∈ L` and `L·L ⊆ L`.
pub fn is_order(l: &Lattice) -> bool {
    if !l.contains(&unit_vec(0)) {
        return false;
    }
    l.basis.iter().all(|x| l.basis.iter().all(|y| l.contains(&l.algebra.mul_coords(x, y))))
}

/// `[L : L'] = |det(B_L⁻¹ B_L')|`.
pub fn lattice_index(l: &Lattice, sub: &Lattice) -> Result<Rational> {
    l.same_algebra(sub)?;
    Ok((linalg::det(&sub.matrix()) / linalg::det(&l.matrix())).abs())
}

/// An order: a lattice that is a unital subring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order {
    lattice: Lattice,
}

impl Order {
    pub fn new(lattice: Lattice) -> Result<Order> {
        if !lattice.contains(&unit_vec(0)) {
            return Err(Error::NotAnOrder(format!("{lattice} does not contain 1")));
        }
        if !is_order(&lattice) {
            return Err(Error::NotAnOrder(format!("{lattice} is not closed under multiplication")));
        }
        Ok(Order { lattice })
    }

    pub fn from_generators(algebra: QuaternionAlgebra, generators: &[Coords]) -> Result<Order> {
        Order::new(Lattice::new(algebra, generators)?)
    }

    /// `(a, b)_ℤ`.
    pub fn standard(algebra: &QuaternionAlgebra) -> Result<Order> {
        Order::new(Lattice::standard(algebra))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.lattice.algebra
    }

    pub fn basis(&self) -> &[Coords] {
        &self.lattice.basis
    }

    /// `ℤ + n·O`.
    pub fn thicken(&self, n: &BigInt) -> Result<Order> {
        if n.is_zero() {
            return Err(Error::InvalidArgument("thickening by zero".into()));
        }
        let q = Rational::from_integer(n.clone());
        let mut gens = vec![unit_vec(0)];
        gens.extend(self.basis().iter().map(|x| scale(x, &q)));
        Order::from_generators(self.algebra().clone(), &gens)
    }

    /// `x ↦ q⁻¹ x q` applied to the order.
    pub fn conjugated(&self, q: &Coords) -> Result<Order> {
        let alg = self.algebra();
        let n = alg.norm_coords(q);
        if n.is_zero() {
            return Err(Error::InvalidArgument("conjugating element has norm zero".into()));
        }
        let qinv = scale(&conj(q), &(Rational::one() / n));
        let l = self.lattice.map(|x| alg.mul_coords(&alg.mul_coords(&qinv, x), q))?;
        Order::new(l)
    }

    /// `Tr(x_i x̄_j)` over the canonical basis.
    pub fn trace_gram(&self) -> Mat {
        let alg = self.algebra();
        let b = self.basis();
        (0..4).map(|i| (0..4).map(|j| trace(&alg.mul_coords(&b[i], &conj(&b[j])))).collect()).collect()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lattice.fmt(f)
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lattice.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Order, D::Error> {
        let l = Lattice::deserialize(d)?;
        Order::new(l).map_err(serde::de::Error::custom)
    }
}

/// Reduced discriminant: the positive square root of `|det Tr(x_i x̄_j)|`.
pub fn order_discriminant(o: &Order) -> Result<BigInt> {
    let det = linalg::det(&o.trace_gram()).abs();
    if !linalg::is_integral(&det) {
        return Err(Error::Internal(format!("trace determinant {det} of {o} is not integral")));
    }
    exactnum::exact_sqrt(&det.to_integer())
        .ok_or_else(|| Error::Internal(format!("trace determinant {det} of {o} is not a square")))
}

/// Coordinates of the basis dual to `basis` under `(x, y) ↦ Tr(x ȳ)`.
pub(crate) fn dual_basis(alg: &QuaternionAlgebra, basis: &[Coords]) -> Result<Vec<Coords>> {
    let (a, b) = (Rational::from_integer(alg.a().clone()), Rational::from_integer(alg.b().clone()));
    let s = [int(2), -&a * int(2), -&b * int(2), &a * &b * int(2)];
    // X·S·Fᵗ = I, hence F = ((X·S)⁻¹)ᵗ.
    let xs: Mat = basis.iter().map(|r| (0..4).map(|k| &r[k] * &s[k]).collect()).collect();
    let inv = linalg::inverse(&xs).ok_or(Error::NotFullRank)?;
    let f = linalg::transpose(&inv);
    Ok(f.into_iter().map(|r| std::array::from_fn(|k| r[k].clone())).collect())
}

/// `O^# = {q : Tr(q x) ∈ ℤ for all x ∈ O}`.
pub fn dual_lattice(o: &Order) -> Result<Lattice> {
    let f = dual_basis(o.algebra(), o.basis())?;
    Lattice::new(o.algebra().clone(), &f)
}

/// Structural properties of an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderPredicates {
    pub maximal: bool,
    pub hereditary: bool,
    pub gorenstein: bool,
    pub bass: bool,
}

pub fn order_predicates(o: &Order) -> Result<OrderPredicates> {
    let d = order_discriminant(o)?;
    let ram = o.algebra().ramified_places()?;
    let f = ternary_form_of_order(o)?;
    let gorenstein = f.is_primitive();
    let mut bass = gorenstein;
    if bass {
        for p in exactnum::prime_divisors(&d)? {
            if !standardize_local(&f, p)?.is_bass() {
                bass = false;
                break;
            }
        }
    }
    Ok(OrderPredicates { maximal: d == ram.d, hereditary: exactnum::is_squarefree(&d)?, gorenstein, bass })
}

/// Content of `f_O`, the generator of the Brandt invariant.
pub fn brandt_invariant(o: &Order) -> Result<BigInt> {
    Ok(ternary_form_of_order(o)?.content())
}

/// Whether `x` has integral reduced trace and norm.
pub fn is_integral_element(alg: &QuaternionAlgebra, x: &Coords) -> bool {
    linalg::is_integral(&trace(x)) && linalg::is_integral(&alg.norm_coords(x))
}

pub(crate) fn one_coords() -> Coords {
    unit_vec(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::from_i64(a, b).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn c(x: [(i64, i64); 4]) -> Coords {
        x.map(|(n, d)| q(n, d))
    }

    pub(crate) fn hurwitz() -> Order {
        let h = alg(-1, -1);
        let gens = [
            c([(1, 1), (0, 1), (0, 1), (0, 1)]),
            c([(0, 1), (1, 1), (0, 1), (0, 1)]),
            c([(0, 1), (0, 1), (1, 1), (0, 1)]),
            c([(1, 2), (1, 2), (1, 2), (1, 2)]),
        ];
        Order::from_generators(h, &gens).unwrap()
    }

    #[test]
    fn order_checks() {
        let h = alg(-1, -1);
        assert!(is_order(&Lattice::standard(&h)));
        let half_i = [
            c([(1, 1), (0, 1), (0, 1), (0, 1)]),
            c([(0, 1), (1, 2), (0, 1), (0, 1)]),
            c([(0, 1), (0, 1), (1, 1), (0, 1)]),
            c([(0, 1), (0, 1), (0, 1), (1, 1)]),
        ];
        assert!(!is_order(&Lattice::new(h.clone(), &half_i).unwrap()));
        assert!(is_order(hurwitz().lattice()));
        assert_eq!(hurwitz().basis()[0], unit_vec(0));
    }

    #[test]
    fn indices() {
        let lip = Order::standard(&alg(-1, -1)).unwrap();
        let hur = hurwitz();
        assert_eq!(lattice_index(hur.lattice(), lip.lattice()).unwrap(), int(2));
        assert_eq!(lattice_index(lip.lattice(), lip.lattice()).unwrap(), int(1));
        let twice = lip.lattice().scaled(&int(2)).unwrap();
        assert_eq!(lattice_index(lip.lattice(), &twice).unwrap(), int(16));
        let other = Lattice::standard(&alg(-1, -3));
        assert_eq!(lattice_index(lip.lattice(), &other), Err(Error::MixedAlgebras));
    }

    #[test]
    fn discriminants() {
        for (a, b) in [(-1, -1), (2, 3), (-5, 7), (6, -10)] {
            let o = Order::standard(&alg(a, b)).unwrap();
            assert_eq!(order_discriminant(&o).unwrap(), BigInt::from(4 * a * b).abs());
        }
        assert_eq!(order_discriminant(&hurwitz()).unwrap(), BigInt::from(2));
    }

    #[test]
    fn duals() {
        let lip = Order::standard(&alg(-1, -1)).unwrap();
        let dual = dual_lattice(&lip).unwrap();
        assert_eq!(dual, lip.lattice().scaled(&q(1, 2)).unwrap());
        let hur = hurwitz();
        let hd = dual_lattice(&hur).unwrap();
        assert_eq!(lattice_index(&hd, hur.lattice()).unwrap(), int(4));
        for x in hd.basis() {
            for y in hur.basis() {
                assert!(linalg::is_integral(&trace(&hur.algebra().mul_coords(x, y))));
            }
        }
        // Biduality: the dual of the dual basis is the original basis.
        let f = dual_basis(hur.algebra(), hur.basis()).unwrap();
        let back = dual_basis(hur.algebra(), &f).unwrap();
        assert_eq!(back, hur.basis().to_vec());
    }

    #[test]
    fn lattice_serde_round_trip() {
        let hur = hurwitz();
        let s = serde_json::to_string(&hur).unwrap();
        assert!(s.contains("\"algebra\":\"-1,-1\""));
        let back: Order = serde_json::from_str(&s).unwrap();
        assert_eq!(back, hur);
        let bad = r#"{"algebra":"-1,-1","basis":["1","0","0","0","0","1/2","0","0","0","0","1","0","0","0","0","1"]}"#;
        assert!(serde_json::from_str::<Order>(bad).is_err());
        let garbled = parse_basis(["1", "x/2"]);
        assert_eq!(garbled, Err(Error::Parse("basis entry 2 ('x/2') is not a rational".into())));
    }

    #[test]
    fn predicates() {
        let p = order_predicates(&hurwitz()).unwrap();
        assert!(p.maximal && p.hereditary && p.gorenstein && p.bass);
        let lip = order_predicates(&Order::standard(&alg(-1, -1)).unwrap()).unwrap();
        assert_eq!(lip, OrderPredicates { maximal: false, hereditary: false, gorenstein: true, bass: true });
    }

    #[test]
    fn two_sided_ideal_that_is_not_principal() {
        let o = Order::standard(&alg(3, 3)).unwrap();
        let gens = [
            c([(3, 1), (0, 1), (0, 1), (0, 1)]),
            c([(0, 1), (1, 1), (0, 1), (0, 1)]),
            c([(0, 1), (0, 1), (1, 1), (0, 1)]),
            c([(0, 1), (0, 1), (0, 1), (1, 1)]),
        ];
        let lam = Lattice::new(o.algebra().clone(), &gens).unwrap();
        assert_eq!(lattice_index(o.lattice(), &lam).unwrap(), int(3));
        assert!(lam.contains_lattice(&lam.product(&lam).unwrap()));
        assert!(lam.contains_lattice(&o.lattice().product(&lam).unwrap()));
        assert!(lam.contains_lattice(&lam.product(o.lattice()).unwrap()));
    }

    #[test]
    fn conjugation_preserves_discriminant() {
        let hur = hurwitz();
        let g = hur.conjugated(&c([(1, 1), (2, 1), (0, 1), (1, 1)])).unwrap();
        assert_eq!(order_discriminant(&g).unwrap(), BigInt::from(2));
        assert!(hur.conjugated(&c([(0, 1); 4])).is_err());
    }
}
