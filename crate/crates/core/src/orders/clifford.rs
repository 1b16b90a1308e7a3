//! The correspondence between orders and ternary forms: `O ↦ f_O` through
//! the dual basis, and `f ↦ C₀(f)` realized inside an explicit algebra.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{add, conj, dual_basis, one_coords, order_discriminant, scale, trace, Order};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::quadforms::QuadraticForm;
use crate::quatalg::QuaternionAlgebra;
use crate::{Coords, Rational};

/// Even permutations `(i, j, k)` of `(0, 1, 2)`.
const EVEN: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// How `C₀(f)` was embedded: the ambient algebra and the images of the
/// generators `e₁, e₂, e₃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordPresentation {
    pub form: QuadraticForm,
    pub algebra: QuaternionAlgebra,
    #[serde(serialize_with = "serialize_images")]
    pub images: [Coords; 3],
}

fn serialize_images<S: serde::Serializer>(images: &[Coords; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> =
        images.iter().map(|e| e.iter().map(crate::serde_util::format_rational).collect()).collect();
    rows.serialize(s)
}

/// The last three vectors `f₁, f₂, f₃` of the dual basis of `O` and the
/// generator `1/Tr(f₁f₂f₃)` of `d(O)`, with its sign.
fn dual_ternary(o: &Order) -> Result<(Rational, [Coords; 3])> {
    let alg = o.algebra();
    let f = dual_basis(alg, o.basis())?;
    let fs = [f[1].clone(), f[2].clone(), f[3].clone()];
    let t = trace(&alg.mul_coords(&alg.mul_coords(&fs[0], &fs[1]), &fs[2]));
    if t.is_zero() {
        return Err(Error::Internal(format!("Tr(f1 f2 f3) vanishes for {o}")));
    }
    Ok((Rational::one() / t, fs))
}

/// `d·N(X₁f₁ + X₂f₂ + X₃f₃)` as an integral ternary form.
fn scaled_norm_form(alg: &QuaternionAlgebra, d: &Rational, f: &[Coords; 3]) -> Result<QuadraticForm> {
    let mut coeffs = Vec::with_capacity(6);
    for i in 0..3 {
        coeffs.push(d * alg.norm_coords(&f[i]));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        coeffs.push(d * trace(&alg.mul_coords(&f[i], &conj(&f[j]))));
    }
    if let Some(bad) = coeffs.iter().find(|c| !linalg::is_integral(c)) {
        return Err(Error::Internal(format!("coefficient {bad} of the dual norm form is not integral")));
    }
    QuadraticForm::new(3, coeffs.into_iter().map(|c| c.to_integer()).collect())
}

/// `f_O = d(O)·N(X₁f₁ + X₂f₂ + X₃f₃)` for the dual basis of the canonical
/// basis of `O`, using the positive generator of `d(O)`. The discriminant of
/// the result equals `d(O)`.
pub fn ternary_form_of_order(o: &Order) -> Result<QuadraticForm> {
    let (d, f) = dual_ternary(o)?;
    let form = scaled_norm_form(o.algebra(), &d.abs(), &f)?;
    let disc = order_discriminant(o)?;
    if form.discriminant() != Rational::from_integer(disc.clone()) {
        return Err(Error::Internal(format!("f_O = {form} has discriminant {}, d(O) = {disc}", form.discriminant())));
    }
    Ok(form)
}

/// `span{1, c·f₂f̄₃, c·f₃f̄₁, c·f₁f̄₂}`.
fn span_from_dual(alg: &QuaternionAlgebra, c: &Rational, f: &[Coords; 3]) -> [Coords; 4] {
    let e = clifford_images(alg, c, f);
    [one_coords(), e[0].clone(), e[1].clone(), e[2].clone()]
}

fn clifford_images(alg: &QuaternionAlgebra, c: &Rational, f: &[Coords; 3]) -> [Coords; 3] {
    std::array::from_fn(|t| {
        let (_, j, k) = EVEN[t];
        scale(&alg.mul_coords(&f[j], &conj(&f[k])), c)
    })
}

/// `C₀(f_O)` realized inside the algebra of `O`; by the correspondence it is
/// `O` itself.
pub fn clifford_order_in(o: &Order) -> Result<Order> {
    let (d, f) = dual_ternary(o)?;
    let gens = span_from_dual(o.algebra(), &d, &f);
    Order::from_generators(o.algebra().clone(), &gens)
}

/// Whether `e₁, e₂, e₃` satisfy the defining relations of `C₀(f)`:
/// `e_i² = a_jk e_i − a_jj a_kk`, `e_i e_j = a_kk (a_ij − e_k)` and
/// `e_j e_i = a_1k e₁ + a_2k e₂ + a_3k e₃ − a_ik a_jk` for even `(i, j, k)`.
pub fn satisfies_clifford_relations(alg: &QuaternionAlgebra, f: &QuadraticForm, e: &[Coords; 3]) -> bool {
    let a = |i: usize, j: usize| Rational::from_integer(f.coeff(i, j).clone());
    let c = |x: Rational| scale(&one_coords(), &x);
    let lin = |x: &Coords, y: Rational| add(x, &c(y));
    EVEN.iter().all(|&(i, j, k)| {
        let sq = alg.mul_coords(&e[i], &e[i]);
        let sq_ok = sq == lin(&scale(&e[i], &a(j, k)), -(a(j, j) * a(k, k)));
        let ij = alg.mul_coords(&e[i], &e[j]);
        let ij_ok = ij == lin(&scale(&e[k], &-a(k, k)), a(k, k) * a(i, j));
        let ji = alg.mul_coords(&e[j], &e[i]);
        let mut rhs = c(-(a(i, k) * a(j, k)));
        for (t, et) in e.iter().enumerate() {
            rhs = add(&rhs, &scale(et, &a(t, k)));
        }
        sq_ok && ij_ok && ji == rhs
    })
}

/// The reduced norm restricted to the span of four elements, as a
/// quaternary form in the coordinates of that basis.
pub fn norm_form_in_basis(alg: &QuaternionAlgebra, basis: &[Coords; 4]) -> Result<QuadraticForm> {
    let n = |x: &Coords| alg.norm_coords(x);
    let mut coeffs: Vec<Rational> = basis.iter().map(n).collect();
    for u in 0..4 {
        for v in u + 1..4 {
            coeffs.push(n(&add(&basis[u], &basis[v])) - n(&basis[u]) - n(&basis[v]));
        }
    }
    if coeffs.iter().any(|c| !linalg::is_integral(c)) {
        return Err(Error::InvalidArgument("norm form is not integral on this basis".into()));
    }
    QuadraticForm::new(4, coeffs.into_iter().map(|c| c.to_integer()).collect())
}

/// The norm form of `C₀(f)` in the basis `1, e₁, e₂, e₃`, written directly
/// from the coefficients of `f`.
pub fn clifford_norm_form(f: &QuadraticForm) -> Result<QuadraticForm> {
    let a = |i: usize, j: usize| f.coeff(i, j).clone();
    // Variables X₀..X₃; quaternary coefficient layout is diagonal, then
    // (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
    let mut diag = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut off = vec![BigInt::zero(); 6];
    let slot = |u: usize, v: usize| -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&p| p == (u, v)).expect("pair")
    };
    for &(i, j, k) in &EVEN {
        off[slot(0, k + 1)] += a(i, j);
        diag[k + 1] += a(i, i) * a(j, j);
        off[slot(i + 1, j + 1)] += a(i, k) * a(j, k) - a(i, j) * a(k, k);
    }
    diag.extend(off);
    QuadraticForm::new(4, diag)
}

fn strip_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut root = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= core.abs() && p < BigInt::from(10_000) {
        let p2 = &p * &p;
        while (&core % &p2).is_zero() {
            core /= &p2;
            root *= &p;
        }
        p += 1;
    }
    (core, root)
}

/// `C₀(f)` as an order in `(−βγ, −αγ)_ℚ` (square factors removed), where
/// `f ≅ ⟨α, β, γ⟩` over ℚ.
///
/// The images of `e₁, e₂, e₃` are `d·f_j f̄_k` for pure quaternions `f_k`
/// with `d·N(ΣX_k f_k) = f` and `Tr(f₁f₂f₃) = 1/d`, `d = d(f)`. The result
/// satisfies the relations of `C₀(f)` exactly and `d(C₀(f)) = |d(f)|`.
pub fn clifford_order(f: &QuadraticForm) -> Result<(Order, CliffordPresentation)> {
    if f.dim() != 3 {
        return Err(Error::Dimension { expected: 3, got: f.dim() });
    }
    let (diag, mut t) = f.rational_diagonalize()?;
    let mut coef: Vec<BigInt> = Vec::with_capacity(3);
    for (k, x) in diag.iter().enumerate() {
        // x·(m y)² with m the denominator is integral; then drop squares.
        let m = x.denom().clone();
        let xi = (x * Rational::from_integer(&m * &m)).to_integer();
        let (core, s) = strip_square(&xi);
        let factor = Rational::new(m, s);
        for row in t.iter_mut() {
            row[k] *= &factor;
        }
        coef.push(core);
    }
    let (al, be, ga) = (&coef[0], &coef[1], &coef[2]);
    let (a, sa) = strip_square(&-(be * ga));
    let (b, sb) = strip_square(&-(al * ga));
    let algebra = QuaternionAlgebra::new(a, b)?;
    let r = |x: &BigInt| Rational::from_integer(x.clone());
    let zero = Rational::zero;
    let g: [Coords; 3] = [
        [zero(), r(&(al * &sa)), zero(), zero()],
        [zero(), zero(), r(&(be * &sb)), zero()],
        [zero(), zero(), zero(), r(&(&sa * &sb))],
    ];
    let tinv: Mat = linalg::inverse(&t).ok_or(Error::Degenerate)?;
    let delta = r(&(al * be * ga));
    let mu = linalg::det(&t) / (delta * Rational::from_integer(2.into()));
    let base: [Coords; 3] = std::array::from_fn(|k| {
        (0..3).fold(std::array::from_fn(|_| Rational::zero()), |acc, l| add(&acc, &scale(&g[l], &tinv[l][k])))
    });
    for sign in [1i64, -1] {
        let m = &mu * Rational::from_integer(sign.into());
        let fk: [Coords; 3] = std::array::from_fn(|k| scale(&base[k], &m));
        let tr = trace(&algebra.mul_coords(&algebra.mul_coords(&fk[0], &fk[1]), &fk[2]));
        if tr.is_zero() {
            return Err(Error::Degenerate);
        }
        let d = Rational::one() / tr;
        let Ok(g) = scaled_norm_form(&algebra, &d, &fk) else { continue };
        if &g != f {
            continue;
        }
        let images = clifford_images(&algebra, &d, &fk);
        if !satisfies_clifford_relations(&algebra, f, &images) {
            return Err(Error::Internal(format!("Clifford relations fail for {f}")));
        }
        let gens = [one_coords(), images[0].clone(), images[1].clone(), images[2].clone()];
        let o = Order::from_generators(algebra.clone(), &gens)?;
        let disc = f.discriminant().abs();
        if Rational::from_integer(order_discriminant(&o)?) != disc {
            return Err(Error::Internal(format!("d(C0({f})) differs from |d(f)| = {disc}")));
        }
        return Ok((o, CliffordPresentation { form: f.clone(), algebra, images }));
    }
    Err(Error::Internal(format!("could not realize C0({f})")))
}

/// `(b, G)` with `O = ℤ + b·G`, `b` the content of `f_O` and `G = C₀(f_O / b)`
/// realized in the algebra of `O`.
pub fn gorenstein_closure(o: &Order) -> Result<(BigInt, Order)> {
    let f = ternary_form_of_order(o)?;
    let b = f.content();
    let (d, fs) = dual_ternary(o)?;
    let c = d / Rational::from_integer(b.clone());
    let g = Order::from_generators(o.algebra().clone(), &span_from_dual(o.algebra(), &c, &fs))?;
    if &g.thicken(&b)? != o {
        return Err(Error::Internal(format!("{o} is not Z + {b}·G")));
    }
    let (dg, dofo) = (order_discriminant(&g)?, order_discriminant(o)?);
    if dofo != b.pow(3) * &dg {
        return Err(Error::Internal(format!("d(O) = {dofo} but b³·d(G) = {}", b.pow(3) * dg)));
    }
    Ok((b, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{prime_divisors, Prime};
    use crate::quadforms::similar_over_zp;

    fn tf(c: [i64; 6]) -> QuadraticForm {
        QuadraticForm::ternary(c).unwrap()
    }

    fn similar_everywhere(f: &QuadraticForm, g: &QuadraticForm) -> bool {
        let d = f.discriminant().abs().to_integer() * 2;
        prime_divisors(&d).unwrap().into_iter().all(|p| similar_over_zp(f, g, p).unwrap())
    }

    #[test]
    fn sum_of_three_squares() {
        let f = tf([1, 1, 1, 0, 0, 0]);
        let (o, p) = clifford_order(&f).unwrap();
        assert_eq!(p.algebra, QuaternionAlgebra::from_i64(-1, -1).unwrap());
        let alg = &p.algebra;
        for e in &p.images {
            assert_eq!(alg.mul_coords(e, e), scale(&one_coords(), &Rational::from_integer((-1).into())));
        }
        let e12 = alg.mul_coords(&p.images[0], &p.images[1]);
        assert_eq!(e12, scale(&p.images[2], &Rational::from_integer((-1).into())));
        assert_eq!(order_discriminant(&o).unwrap(), BigInt::from(4));
        assert_eq!(o, Order::standard(alg).unwrap());
    }

    #[test]
    fn trace_of_e3_is_a12() {
        let f = tf([1, 1, 1, 1, 0, 0]);
        let (_, p) = clifford_order(&f).unwrap();
        assert_eq!(trace(&p.images[2]), Rational::one());
    }

    #[test]
    fn norm_form_matches_closed_form() {
        for c in [[1, 1, 1, 0, 0, 0], [1, 1, 1, 1, 0, 0], [2, 3, -5, 1, -1, 2], [0, 0, 1, 1, 0, 0], [3, 0, 0, 1, 1, 1]]
        {
            let f = tf(c);
            let (_, p) = clifford_order(&f).unwrap();
            let basis = [one_coords(), p.images[0].clone(), p.images[1].clone(), p.images[2].clone()];
            assert_eq!(norm_form_in_basis(&p.algebra, &basis).unwrap(), clifford_norm_form(&f).unwrap(), "{f}");
        }
    }

    #[test]
    fn scaled_form_thickens() {
        let f = tf([1, 1, 1, 0, 0, 0]);
        let (o, _) = clifford_order(&f.scaled(&BigInt::from(3)).unwrap()).unwrap();
        let (g, _) = clifford_order(&f).unwrap();
        assert_eq!(o, g.thicken(&BigInt::from(3)).unwrap());
        let (b, closure) = gorenstein_closure(&o).unwrap();
        assert_eq!((b, closure), (BigInt::from(3), g));
    }

    #[test]
    fn form_of_standard_order() {
        for (a, b) in [(-1i64, -1i64), (2, 3), (-5, 7), (3, 3)] {
            let alg = QuaternionAlgebra::from_i64(a, b).unwrap();
            let f = ternary_form_of_order(&Order::standard(&alg).unwrap()).unwrap();
            let expected = QuadraticForm::diagonal(&[-b, -a, 1]).unwrap();
            assert!(similar_everywhere(&f, &expected), "({a},{b}): {f}");
            assert_eq!(f.discriminant(), Rational::from_integer(BigInt::from(4 * a * b).abs()));
        }
    }

    #[test]
    fn hurwitz_form_and_closure() {
        let hur = super::super::tests::hurwitz();
        let f = ternary_form_of_order(&hur).unwrap();
        assert!(similar_over_zp(&f, &tf([1, 1, 1, 1, 1, 1]), Prime::new(2).unwrap()).unwrap());
        let (b, g) = gorenstein_closure(&hur).unwrap();
        assert_eq!((b, g), (BigInt::one(), hur.clone()));
        let thick = hur.thicken(&BigInt::from(2)).unwrap();
        let (b, g) = gorenstein_closure(&thick).unwrap();
        assert_eq!((b, g), (BigInt::from(2), hur));
    }

    #[test]
    fn round_trip_on_small_forms() {
        let forms = [
            [1, 1, 1, 0, 0, 0],
            [1, -1, 3, 0, 0, 0],
            [1, 9, 9, 0, 0, 0],
            [1, 2, 2, 0, 0, 2],
            [0, 0, 4, 1, 0, 0],
            [2, 2, 2, 1, 1, 1],
            [5, -7, 11, 3, -2, 1],
        ];
        for c in forms {
            let f = tf(c);
            let (o, _) = clifford_order(&f).unwrap();
            let fo = ternary_form_of_order(&o).unwrap();
            assert!(similar_everywhere(&f, &fo), "{f} vs {fo}");
            assert_eq!(clifford_order_in(&o).unwrap(), o);
        }
    }

    #[test]
    fn degenerate_forms_rejected() {
        assert!(
            QuadraticForm::ternary([1, 1, 0, 2, 0, 0]).is_err() || clifford_order(&tf([1, 1, 0, 2, 0, 0])).is_err()
        );
        assert!(matches!(
            clifford_order(&QuadraticForm::diagonal(&[1, 1]).unwrap()),
            Err(Error::Dimension { expected: 3, got: 2 })
        ));
    }
}
