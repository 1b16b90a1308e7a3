//! Acceptance runner: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{c0, catalog, pr, random_form, random_nested_pair, similar_at_relevant_primes, tf};
use quatord::exactnum::{prime_divisors, valuation_int, DEFAULT_PRIME_BOUND};
use quatord::localclass::{
    count_classes, count_genera, count_table, eichler_from_label, eichler_invariant, OrderCategory,
};
use quatord::orders::{
    clifford_order, clifford_order_in, lattice_index, maximal_order, order_discriminant, order_predicates,
    ternary_form_of_order,
};
use quatord::quadforms::{similar_over_zp, LocalKind};
use quatord::quatalg::hilbert_symbol_int;
use quatord::{EichlerInvariant, Lattice, Order, Place, Prime, QuaternionAlgebra, Rational, Side};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn ensure(cond: bool, detail: impl Into<String>) -> Result<(), Outcome> {
    if cond {
        Ok(())
    } else {
        Err(fail(detail))
    }
}

fn run(id: &str, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome, Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f().unwrap_or_else(|e| e);
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = outcome.ok && in_time;
    let limit_text = limit.map(|l| format!(", limit {} s", l.as_secs())).unwrap_or_default();
    let timing = if in_time { String::new() } else { " TIME LIMIT EXCEEDED".to_string() };
    println!(
        "[{}] {id} {name}: {} ({:.2} s{limit_text}){timing}",
        if ok { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn place_name(place: Place) -> String {
    match place {
        Place::Infinite => "inf".into(),
        Place::Finite(p) => p.to_string(),
    }
}

// Product of the symbols over ∞ and every p | 2ab.
fn ac1() -> Result<Outcome, Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 200 {
        let a = rng.gen_range(-10_000i64..=10_000);
        let b = rng.gen_range(-10_000i64..=10_000);
        if a == 0 || b == 0 {
            continue;
        }
        let (a, b) = (big(a), big(b));
        let mut product = hilbert_symbol_int(&a, &b, Place::Infinite).unwrap();
        for p in prime_divisors(&(&a * &b * 2)).unwrap() {
            product *= hilbert_symbol_int(&a, &b, Place::Finite(p)).unwrap();
        }
        ensure(product == 1, format!("product over places is {product} for ({a}, {b})"))?;
        checked += 1;
    }
    Ok(pass(format!("{checked}/200 pairs")))
}

/// Whether `x² − ay² − bz²` has a primitive zero over ℤ_p, by exhaustive
/// search of residues.
///
/// Square factors `p²` are removed from `a` and `b`. If `p` then divides
/// both, `x` must be divisible by `p` and the form is replaced by
/// `p·x² − (a/p)y² − (b/p)z²`. Now at most one coefficient is divisible
/// by `p`, exactly once, so every primitive zero has a coordinate `v_i`
/// with `c_i·v_i` a unit. By Hensel's lemma such a zero exists iff one
/// exists modulo `p^(2·v_p(2) + 1)`.
fn isotropic_by_search(a: i64, b: i64, p: u64) -> bool {
    let pi = p as i64;
    let strip = |mut x: i64| {
        while x % (pi * pi) == 0 {
            x /= pi * pi;
        }
        x
    };
    let (a, b) = (strip(a), strip(b));
    let coeffs = if a % pi == 0 && b % pi == 0 { [pi, -a / pi, -b / pi] } else { [1, -a, -b] };
    let k = if p == 2 { 3 } else { 1 };
    let m = pi.pow(k);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let v = [x, y, z];
                let value: i64 = (0..3).map(|t| coeffs[t] * v[t] * v[t]).sum();
                if value.rem_euclid(m) != 0 {
                    continue;
                }
                if (0..3).any(|t| (coeffs[t] * v[t]).rem_euclid(pi) != 0) {
                    return true;
                }
            }
        }
    }
    false
}

fn ac2() -> Result<Outcome, Outcome> {
    let places = [
        Place::Infinite,
        Place::finite(2).unwrap(),
        Place::finite(3).unwrap(),
        Place::finite(5).unwrap(),
        Place::finite(7).unwrap(),
        Place::finite(13).unwrap(),
    ];
    let (mut compared, mut anisotropic) = (0u64, 0u64);
    for a in -30i64..=30 {
        for b in -30i64..=30 {
            if a == 0 || b == 0 {
                continue;
            }
            for &place in &places {
                let closed = hilbert_symbol_int(&big(a), &big(b), place).unwrap();
                let oracle = match place {
                    Place::Infinite => !(a < 0 && b < 0),
                    Place::Finite(p) => isotropic_by_search(a, b, p.get()),
                };
                ensure(
                    (closed == 1) == oracle,
                    format!("({a},{b})_{} = {closed}, search says isotropic = {oracle}", place_name(place)),
                )?;
                compared += 1;
                anisotropic += u64::from(!oracle);
            }
        }
    }
    ensure(anisotropic > 0, "search never found an anisotropic form")?;
    Ok(pass(format!("{compared} symbols match the isotropy search ({anisotropic} anisotropic)")))
}

fn table_cells(kind: LocalKind, n_max: u32) -> Result<u64, Outcome> {
    let table = count_table(kind, n_max).map_err(|e| fail(e.to_string()))?;
    Ok(table.rows.len() as u64 * 6)
}

fn all_count(kind: LocalKind, n: u32, side: Side) -> u64 {
    count_classes(kind, n, OrderCategory::All, side).unwrap()
}

fn ac3() -> Result<Outcome, Outcome> {
    let mut cells = 0;
    for p in [3, 5, 7] {
        cells += table_cells(LocalKind::NonDyadic(pr(p)), 12)?;
    }
    let kind = LocalKind::NonDyadic(pr(3));
    ensure(all_count(kind, 5, Side::Division) == 6, "n=5 division total is not 6")?;
    ensure(all_count(kind, 3, Side::Matrix) == 4, "n=3 matrix total is not 4")?;
    for n in [3, 5, 7, 9, 11] {
        let bass = count_classes(kind, n, OrderCategory::Bass, Side::Division).unwrap();
        ensure(bass == 3, format!("Bass division count at n={n} is {bass}"))?;
    }
    Ok(pass(format!("{cells} cells match for p = 3, 5, 7 and n = 0..12")))
}

fn ac4() -> Result<Outcome, Outcome> {
    let cells = table_cells(LocalKind::Dyadic, 12)?;
    let d = LocalKind::Dyadic;
    let expected = [(5, 6, 8), (7, 13, 17)];
    for (n, div, mat) in expected {
        let got = (all_count(d, n, Side::Division), all_count(d, n, Side::Matrix));
        ensure(got == (div, mat), format!("2^{n} totals {got:?}, expected ({div}, {mat})"))?;
    }
    ensure(all_count(d, 9, Side::Division) == 24, "n=9 division total is not 24")?;
    ensure(all_count(d, 11, Side::Division) == 40, "n=11 division total is not 40")?;
    let mut recursions = 0;
    for n in 3..=12 {
        for side in [Side::Division, Side::Matrix] {
            let g = count_classes(d, n, OrderCategory::Gorenstein, side).unwrap();
            let t = all_count(d, n, side);
            let t3 = all_count(d, n - 3, side);
            ensure(t == g + t3, format!("t({n}) = {t} but g + t(n-3) = {}", g + t3))?;
            recursions += 1;
        }
    }
    Ok(pass(format!("{cells} cells match, {recursions} recursion checks")))
}

fn ac5() -> Result<Outcome, Outcome> {
    let g = count_genera(&[(pr(2), 3), (pr(3), 2)]).map_err(|e| fail(e.to_string()))?;
    let expected: BTreeMap<BigInt, u64> =
        [(1, 9), (2, 6), (3, 3), (6, 2)].into_iter().map(|(d, c)| (big(d), c)).collect();
    let shown: Vec<String> = g.iter().map(|(d, c)| format!("{d}:{c}")).collect();
    ensure(g == expected, format!("got {{{}}}", shown.join(", ")))?;
    Ok(pass(format!("{{{}}}", shown.join(", "))))
}

fn round_trip(f: &quatord::QuadraticForm) -> Result<(), Outcome> {
    let (o, _) = clifford_order(f).map_err(|e| fail(format!("{f}: {e}")))?;
    let fo = ternary_form_of_order(&o).map_err(|e| fail(format!("{f}: {e}")))?;
    let back = clifford_order_in(&o).map_err(|e| fail(format!("{f}: {e}")))?;
    ensure(back == o, format!("C0(f_O) != O for f = {f}"))?;
    ensure(similar_at_relevant_primes(f, &fo), format!("f_O = {fo} not similar to f = {f}"))?;
    let d = order_discriminant(&o).map_err(|e| fail(e.to_string()))?;
    ensure(
        Rational::from_integer(d.clone()) == fo.discriminant().abs(),
        format!("d(O) = {d}, d(f_O) = {}", fo.discriminant()),
    )?;
    ensure(Rational::from_integer(d) == f.discriminant().abs(), format!("d(O) differs from |d(f)| for f = {f}"))
}

fn ac6() -> Result<Outcome, Outcome> {
    let mut reps = 0;
    for kind in [LocalKind::NonDyadic(pr(3)), LocalKind::Dyadic] {
        for label in catalog(kind, 8) {
            round_trip(&label.form().map_err(|e| fail(e.to_string()))?)?;
            reps += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        round_trip(&random_form(&mut rng, 20))?;
    }
    Ok(pass(format!("{reps} catalog representatives and 100 random forms")))
}

fn ac7() -> Result<Outcome, Outcome> {
    let two = pr(2);
    let h_sum = |r: u32| tf([1, 0, 0, 0, 0, 1 << r]);
    let j_sum = |r: u32| {
        let c = 1 << r;
        tf([1, c, c, 0, 0, c])
    };
    let similar = |f: &quatord::QuadraticForm, g: &quatord::QuadraticForm| similar_over_zp(f, g, two).unwrap();
    let checks = [
        ("<1>+2H ~ <1,1,-1>", similar(&h_sum(1), &tf([1, 1, -1, 0, 0, 0])), true),
        ("<1>+2J ~ <1,1,1>", similar(&j_sum(1), &tf([1, 1, 1, 0, 0, 0])), true),
        ("f2(0) ~ f4(0)", similar(&h_sum(0), &j_sum(0)), true),
        ("f2(2) ~ f4(2)", similar(&h_sum(2), &j_sum(2)), true),
        ("f2(1) ~ f4(1)", similar(&h_sum(1), &j_sum(1)), false),
    ];
    for (name, got, want) in checks {
        ensure(got == want, format!("{name} returned {got}"))?;
    }
    Ok(pass("4 similarities hold, f2(1) and f4(1) are distinct"))
}

fn ac8() -> Result<Outcome, Outcome> {
    let mut built = 0;
    for d in 1i64..=200 {
        let db = big(d);
        let factors = quatord::exactnum::factor(&db).unwrap();
        if factors.iter().any(|&(_, e)| e > 1) {
            continue;
        }
        let definite = factors.len() % 2 == 1;
        let (o, cert) = maximal_order(&db, definite, DEFAULT_PRIME_BOUND).map_err(|e| fail(format!("d = {d}: {e}")))?;
        ensure(cert.verify(), format!("certificate for d = {d} fails"))?;
        ensure(order_discriminant(&o).unwrap() == db, format!("d(O) != {d}"))?;
        let idx = lattice_index(o.lattice(), &Lattice::standard(o.algebra())).unwrap();
        ensure(idx == Rational::from_integer(cert.a.abs() * 4), format!("index {idx} for d = {d}"))?;
        ensure(order_predicates(&o).unwrap().maximal, format!("order for d = {d} is not maximal"))?;
        built += 1;
    }
    Ok(pass(format!("{built} squarefree d verified")))
}

fn ac9() -> Result<Outcome, Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (small, large) = random_nested_pair(&mut rng);
        let idx = lattice_index(large.lattice(), small.lattice()).unwrap();
        let lhs = Rational::from_integer(order_discriminant(&small).unwrap());
        let rhs = Rational::from_integer(order_discriminant(&large).unwrap()) * &idx;
        ensure(lhs == rhs, format!("d(O) = {lhs}, d(O')·[O':O] = {rhs}"))?;
    }
    Ok(pass("100/100 pairs"))
}

fn ac10() -> Result<Outcome, Outcome> {
    let alg = QuaternionAlgebra::from_i64(3, 3).unwrap();
    let o = Order::standard(&alg).unwrap();
    let r = |x: i64| Rational::from_integer(big(x));
    let rows: Vec<[Rational; 4]> =
        [[3, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].iter().map(|v| v.map(r)).collect();
    let lambda = Lattice::new(alg.clone(), &rows).unwrap();
    let idx = lattice_index(o.lattice(), &lambda).unwrap();
    ensure(idx == r(3), format!("[O:Λ] = {idx}"))?;
    let left = o.lattice().product(&lambda).unwrap();
    let right = lambda.product(o.lattice()).unwrap();
    ensure(lambda.contains_lattice(&left) && lambda.contains_lattice(&right), "Λ is not two-sided")?;
    let mut min_v = u32::MAX;
    for c in 0..9i64.pow(4) {
        let digits = [c % 9, c / 9 % 9, c / 81 % 9, c / 729];
        if digits == [0; 4] {
            continue;
        }
        let mut g = [r(0), r(0), r(0), r(0)];
        for (t, row) in rows.iter().enumerate() {
            for k in 0..4 {
                g[k] += &row[k] * r(digits[t]);
            }
        }
        let n = alg.norm_coords(&g).to_integer();
        if !n.is_zero() {
            min_v = min_v.min(valuation_int(&n, 3).unwrap());
        }
    }
    ensure(min_v >= 1, format!("min v3(N(g)) = {min_v}"))?;
    Ok(pass(format!("index 3, two-sided, min v3(N(g)) over Λ/9Λ = {min_v}")))
}

fn ac11() -> Result<Outcome, Outcome> {
    let mut checked = 0;
    for p in [2, 3, 5] {
        for label in catalog(LocalKind::of(pr(p)), 6) {
            let o = c0(&label.form().unwrap());
            let structural = eichler_invariant(&o, pr(p)).map_err(|e| fail(e.to_string()))?;
            ensure(structural == eichler_from_label(&label), format!("{label}: structural {structural}"))?;
            checked += 1;
        }
    }
    for (d, p) in [(2, 2), (3, 3), (5, 5)] {
        let (o, _) = maximal_order(&big(d), true, DEFAULT_PRIME_BOUND).unwrap();
        let e = eichler_invariant(&o, pr(p)).unwrap();
        ensure(e == EichlerInvariant::Minus1, format!("maximal order of discriminant {d} has e = {e} at {p}"))?;
    }
    for p in [2i64, 3, 5, 7] {
        let o = c0(&tf([0, 0, p, 1, 0, 0]));
        let e = eichler_invariant(&o, Prime::new(p as u64).unwrap()).unwrap();
        ensure(e == EichlerInvariant::Plus1, format!("level-{p} split order has e = {e}"))?;
    }
    Ok(pass(format!("{checked} catalog classes agree; maximal division gives -1, level-p split gives +1")))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run("AC1", "Hilbert product formula", Some(secs(5)), ac1),
        run("AC2", "Hilbert symbol vs isotropy search", Some(secs(60)), ac2),
        run("AC3", "odd-prime class counts", Some(secs(30)), ac3),
        run("AC4", "dyadic class counts", None, ac4),
        run("AC5", "genera of discriminant 72", None, ac5),
        run("AC6", "order/form round trip", Some(secs(120)), ac6),
        run("AC7", "exceptional dyadic similarities", None, ac7),
        run("AC8", "maximal orders for squarefree d <= 200", Some(secs(60)), ac8),
        run("AC9", "discriminant/index identity", None, ac9),
        run("AC10", "non-principal ideal of (3,3)", None, ac10),
        run("AC11", "Eichler invariant agreement", None, ac11),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
