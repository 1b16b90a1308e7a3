//! Subcommand implementations. Each returns the same content as text and
//! as a JSON value.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use quatord::exactnum::factor;
use quatord::localclass::{classify_local, count_classes, count_genera, count_table, enumerate_classes, OrderCategory};
use quatord::orders::{
    brandt_invariant, clifford_order, dual_lattice, gorenstein_closure, maximal_order, order_discriminant,
    order_predicates, parse_basis, ternary_form_of_order,
};
use quatord::quadforms::{jordan_decompose, similar_over_zp, standardize_local, JordanBlockKind, LocalKind};
use quatord::quatalg::{algebra_from_discriminant, hilbert_symbol};
use quatord::serde_util::{format_rational, parse_rational};
use quatord::{
    BigInt, Error, Lattice, LocalOrderClass, Order, Place, Prime, QuadraticForm, QuaternionAlgebra, Rational, Result,
    Side,
};

pub struct Output {
    pub text: String,
    pub json: Value,
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize to JSON")
}

fn rational_arg(s: &str, which: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("{which} ('{s}') is not a rational")))
}

fn integer_arg(s: &str, which: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{which} ('{s}') is not an integer")))
}

fn prime_arg(s: &str) -> Result<Prime> {
    Prime::from_bigint(&integer_arg(s, "prime")?)
}

fn form_arg(s: &str) -> Result<QuadraticForm> {
    let f: QuadraticForm = s.parse()?;
    if f.dim() != 3 {
        return Err(Error::Dimension { expected: 3, got: f.dim() });
    }
    Ok(f)
}

fn rows_text(l: &Lattice) -> String {
    let mut out = String::new();
    for row in l.basis() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    out
}

fn lattice_text(l: &Lattice) -> String {
    format!("algebra: ({})\nbasis:\n{}", l.algebra(), rows_text(l))
}

fn places_text(finite: &[Prime], infinite: bool) -> String {
    let mut parts: Vec<String> = finite.iter().map(Prime::to_string).collect();
    if infinite {
        parts.push("inf".into());
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

pub fn parse_order(algebra: &str, basis: &str) -> Result<Order> {
    let alg: QuaternionAlgebra = algebra.parse()?;
    let tokens = basis.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
    let entries = parse_basis(tokens)?;
    if entries.len() != 16 {
        return Err(Error::Parse(format!("expected 16 basis entries, got {}", entries.len())));
    }
    Order::new(Lattice::from_flat(alg, &entries)?)
}

pub fn parse_order_json(text: &str) -> Result<Order> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("order JSON: {e}")))
}

pub fn hilbert(a: &str, b: &str, place: &str) -> Result<Output> {
    let (qa, qb) = (rational_arg(a, "a")?, rational_arg(b, "b")?);
    let place: Place = place.parse()?;
    let symbol = hilbert_symbol(&qa, &qb, place)?;
    Ok(Output {
        text: format!("{symbol}\n"),
        json: json!({"a": format_rational(&qa), "b": format_rational(&qb), "place": to_json(&place), "symbol": symbol}),
    })
}

pub fn algebra_ram(a: &str, b: &str) -> Result<Output> {
    let alg = QuaternionAlgebra::new(integer_arg(a, "a")?, integer_arg(b, "b")?)?;
    let ram = alg.ramified_places()?;
    Ok(Output {
        text: format!(
            "algebra: ({alg})\nramified: {}\ndiscriminant: {}\n",
            places_text(&ram.finite, ram.infinite),
            ram.d
        ),
        json: json!({"algebra": to_json(&alg), "ramification": to_json(&ram)}),
    })
}

/// The requested parity, or the admissible one when none was given.
fn resolve_parity(d: &BigInt, requested: Option<bool>) -> Result<bool> {
    if let Some(p) = requested {
        return Ok(p);
    }
    if !d.is_positive() {
        return Err(Error::InvalidArgument(format!("discriminant must be positive, got {d}")));
    }
    Ok(factor(d)?.len() % 2 == 1)
}

pub fn algebra_from_disc(d: &str, definite: Option<bool>, bound: u64) -> Result<Output> {
    let d = integer_arg(d, "d")?;
    let inf = resolve_parity(&d, definite)?;
    let (alg, cert) = algebra_from_discriminant(&d, inf, bound)?;
    let ram = alg.ramified_places()?;
    Ok(Output {
        text: format!(
            "algebra: ({alg})\nramified: {}\ndiscriminant: {}\n",
            places_text(&ram.finite, ram.infinite),
            ram.d
        ),
        json: json!({"algebra": to_json(&alg), "ramification": to_json(&ram), "certificate": to_json(&cert)}),
    })
}

fn block_text(kind: &JordanBlockKind, scale: u32, p: Prime) -> String {
    let body = match kind {
        JordanBlockKind::Unit(u) => format!("<{u}>"),
        JordanBlockKind::H => "H".into(),
        JordanBlockKind::J => "J".into(),
    };
    if scale == 0 {
        body
    } else {
        format!("{p}^{scale}*{body}")
    }
}

pub fn form_standardize(coeffs: &str, p: &str) -> Result<Output> {
    let f = form_arg(coeffs)?;
    let p = prime_arg(p)?;
    let label = standardize_local(&f, p)?;
    let jordan = jordan_decompose(&f, p)?;
    let class = LocalOrderClass::from_label(label.clone())?;
    let blocks: Vec<String> = jordan.blocks.iter().map(|b| block_text(&b.kind, b.scale, p)).collect();
    Ok(Output {
        text: format!(
            "label: {label}\nstandard form: {}\njordan: {}\norder class: {class}\n",
            label.form()?,
            blocks.join(" + ")
        ),
        json: json!({
            "label": to_json(&label),
            "standard_form": to_json(&label.form()?),
            "jordan": to_json(&jordan),
            "order_class": to_json(&class),
        }),
    })
}

pub fn form_similar(coeffs: &str, other: &str, p: &str) -> Result<Output> {
    let (f, g) = (form_arg(coeffs)?, form_arg(other)?);
    let p = prime_arg(p)?;
    let similar = similar_over_zp(&f, &g, p)?;
    Ok(Output { text: format!("{similar}\n"), json: json!({"p": p.get(), "similar": similar}) })
}

pub fn form_clifford(coeffs: &str) -> Result<Output> {
    let f = form_arg(coeffs)?;
    let (o, pres) = clifford_order(&f)?;
    let d = order_discriminant(&o)?;
    let images: Vec<String> =
        pres.images.iter().map(|e| e.iter().map(format_rational).collect::<Vec<_>>().join(" ")).collect();
    Ok(Output {
        text: format!(
            "{}discriminant: {d}\nimages:\n  e1: {}\n  e2: {}\n  e3: {}\n",
            lattice_text(o.lattice()),
            images[0],
            images[1],
            images[2]
        ),
        json: json!({"order": to_json(&o), "discriminant": int(&d), "presentation": to_json(&pres)}),
    })
}

pub fn order_info(o: &Order) -> Result<Output> {
    let d = order_discriminant(o)?;
    let preds = order_predicates(o)?;
    let f = ternary_form_of_order(o)?;
    let b = brandt_invariant(o)?;
    let ram = o.algebra().ramified_places()?;
    let mut classes = Vec::new();
    for (p, _) in factor(&d)? {
        classes.push(classify_local(o, p)?);
    }
    let mut text = lattice_text(o.lattice());
    let _ = writeln!(text, "ramified: {}", places_text(&ram.finite, ram.infinite));
    let _ = writeln!(text, "discriminant: {d}");
    let _ = writeln!(text, "ternary form: {f}");
    let _ = writeln!(text, "brandt invariant: {b}");
    let _ = writeln!(
        text,
        "maximal: {} hereditary: {} gorenstein: {} bass: {}",
        preds.maximal, preds.hereditary, preds.gorenstein, preds.bass
    );
    for c in &classes {
        let _ = writeln!(text, "local: {c}");
    }
    Ok(Output {
        text,
        json: json!({
            "order": to_json(o),
            "ramification": to_json(&ram),
            "discriminant": int(&d),
            "ternary_form": to_json(&f),
            "brandt_invariant": int(&b),
            "predicates": to_json(&preds),
            "local_classes": to_json(&classes),
        }),
    })
}

pub fn order_dual(o: &Order) -> Result<Output> {
    let dual = dual_lattice(o)?;
    Ok(Output { text: lattice_text(&dual), json: json!({"dual": to_json(&dual)}) })
}

pub fn order_maximal(d: &str, definite: Option<bool>, bound: u64) -> Result<Output> {
    let d = integer_arg(d, "d")?;
    let inf = resolve_parity(&d, definite)?;
    let (o, cert) = maximal_order(&d, inf, bound)?;
    Ok(Output {
        text: format!(
            "{}discriminant: {}\ncertificate: a={} x={} m={}\n",
            lattice_text(o.lattice()),
            cert.d,
            cert.a,
            cert.x,
            cert.m
        ),
        json: json!({"order": to_json(&o), "certificate": to_json(&cert)}),
    })
}

pub fn order_closure(o: &Order) -> Result<Output> {
    let (b, g) = gorenstein_closure(o)?;
    Ok(Output {
        text: format!("brandt invariant: {b}\nclosure:\n{}", lattice_text(g.lattice())),
        json: json!({"brandt_invariant": int(&b), "closure": to_json(&g)}),
    })
}

fn kind_arg(p: &str) -> Result<LocalKind> {
    Ok(LocalKind::of(prime_arg(p)?))
}

pub fn classes_count(p: &str, n: u32, side: &str, category: &str) -> Result<Output> {
    let kind = kind_arg(p)?;
    let side: Side = side.parse()?;
    let category: OrderCategory = category.parse()?;
    let count = count_classes(kind, n, category, side)?;
    Ok(Output {
        text: format!("{count}\n"),
        json: json!({"p": kind.prime().get(), "n": n, "side": to_json(&side), "category": to_json(&category), "count": count}),
    })
}

pub fn classes_enumerate(p: &str, n: u32, side: Option<&str>, category: &str) -> Result<Output> {
    let kind = kind_arg(p)?;
    let category: OrderCategory = category.parse()?;
    let sides = match side {
        Some(s) => vec![s.parse()?],
        None => vec![Side::Division, Side::Matrix],
    };
    let mut classes = Vec::new();
    for s in sides {
        classes.extend(enumerate_classes(kind, n, category, s)?);
    }
    let mut text = String::new();
    for c in &classes {
        let _ = writeln!(text, "{c}");
    }
    Ok(Output { text, json: json!({"classes": to_json(&classes)}) })
}

pub fn classes_table(p: &str, max_n: u32) -> Result<Output> {
    let kind = kind_arg(p)?;
    let table = count_table(kind, max_n)?;
    let mut text = format!("{:>3}  {:>7}  {:>10}  {:>9}\n", "n", "bass", "gorenstein", "all");
    for r in &table.rows {
        let cell = |x: [u64; 2]| format!("{}|{}", x[0], x[1]);
        let _ = writeln!(text, "{:>3}  {:>7}  {:>10}  {:>9}", r.n, cell(r.bass), cell(r.gorenstein), cell(r.all));
    }
    Ok(Output { text, json: to_json(&table) })
}

pub fn genera_count(d: &str) -> Result<Output> {
    let d = integer_arg(d, "d")?;
    if !d.is_positive() {
        return Err(Error::InvalidArgument(format!("discriminant must be positive, got {d}")));
    }
    let genera = count_genera(&factor(&d)?)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (da, count) in &genera {
        let _ = writeln!(text, "{da}: {count}");
        rows.push(json!({"algebra_discriminant": int(da), "count": count}));
    }
    Ok(Output { text, json: json!({"d": int(&d), "genera": rows}) })
}
