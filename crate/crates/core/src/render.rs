//! Text, LaTeX and JSON printers.
//!
//! Text output uses `th`/`thb`, `*` for products and `(x)` for tensor
//! products, and parses back with [`crate::expr::parse`].

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::gram::GramMatrix;
use crate::kernel::{Index, TensorElement};
use crate::linalg::Matrix;
use crate::pg::{basis_order, PgElement, Var};
use crate::scalar::{GaussianRational, Monomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (text, latex or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Latex => "latex",
            Format::Json => "json",
        })
    }
}

fn join_signed(parts: Vec<String>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, p) in parts.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest.trim_start());
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    out
}

fn is_complex(c: &GaussianRational) -> bool {
    !c.re.is_zero() && !c.im.is_zero()
}

fn symbol_factors(m: &Monomial) -> Vec<String> {
    let pow = |name: String, e: i32| if e == 1 { name } else { format!("{name}^{e}") };
    let mut out = Vec::new();
    if m.q() != 0 {
        out.push(pow("q".into(), m.q()));
    }
    if m.qb() != 0 {
        out.push(pow("qb".into(), m.qb()));
    }
    for (n, &e) in m.w_exponents().iter().enumerate().filter(|(_, e)| **e != 0) {
        out.push(pow(format!("w{n}"), e));
    }
    for (n, &e) in m.u_exponents().iter().enumerate().filter(|(_, e)| **e != 0) {
        out.push(pow(format!("u{n}"), e));
    }
    out
}

/// One scalar term; complex constants are parenthesized unless `alone`.
fn scalar_term_text(m: &Monomial, c: &GaussianRational, alone: bool) -> String {
    let factors = symbol_factors(m);
    if factors.is_empty() {
        return if is_complex(c) && !alone { format!("({c})") } else { c.to_string() };
    }
    let body = factors.join("*");
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else if is_complex(c) {
        format!("({c})*{body}")
    } else {
        format!("{c}*{body}")
    }
}

pub fn scalar_text(s: &Scalar) -> String {
    let alone = s.n_terms() == 1;
    join_signed(s.terms().rev().map(|(m, c)| scalar_term_text(m, c, alone)).collect())
}

/// True when the scalar must be parenthesized as a coefficient.
fn needs_parens(s: &Scalar) -> bool {
    s.n_terms() > 1 || s.as_constant().is_some_and(|c| is_complex(&c))
}

fn mono_text(var: &Var, i: usize, j: usize) -> String {
    let pow = |name: String, e: usize| if e == 1 { name } else { format!("{name}^{e}") };
    let mut parts = Vec::new();
    if i > 0 {
        parts.push(pow(var.name().to_string(), i));
    }
    if j > 0 {
        parts.push(pow(var.bar_name(), j));
    }
    parts.join("*")
}

/// `c * mono`, with the coefficient absorbed when possible.
fn coeff_times(c: &Scalar, mono: &str) -> String {
    let ctext = scalar_text(c);
    let ctext = if needs_parens(c) { format!("({ctext})") } else { ctext };
    if mono.is_empty() {
        ctext
    } else if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{ctext}*{mono}")
    }
}

pub fn element_text(f: &PgElement) -> String {
    let parts = basis_order(f.l())
        .into_iter()
        .filter(|&(i, j)| !f.coeff(i, j).is_zero())
        .map(|(i, j)| coeff_times(f.coeff(i, j), &mono_text(f.var(), i, j)))
        .collect();
    join_signed(parts)
}

/// Tensor terms ordered by the right factor, then the left, in basis order.
fn ordered_tensor_terms(t: &TensorElement) -> Vec<(Index, Index, Scalar)> {
    let order = basis_order(t.ring().l());
    let rank = |x: Index| order.iter().position(|&b| b == x).expect("basis index");
    let mut terms: Vec<_> = t.terms().map(|(a, b, c)| (a, b, c.clone())).collect();
    terms.sort_by_key(|(a, b, _)| (rank(*b), rank(*a)));
    terms
}

pub fn tensor_text(t: &TensorElement) -> String {
    let parts = ordered_tensor_terms(t)
        .into_iter()
        .map(|((a, b), (c, d), x)| {
            let left = mono_text(t.left_var(), a, b);
            let right = mono_text(t.right_var(), c, d);
            let left = if left.is_empty() && x.is_one() { "1".into() } else { coeff_times(&x, &left) };
            let right = if right.is_empty() { "1".into() } else { right };
            format!("{left} (x) {right}")
        })
        .collect();
    join_signed(parts)
}

pub fn matrix_text(m: &Matrix) -> String {
    (0..m.rows())
        .map(|r| {
            let row: Vec<String> = (0..m.cols()).map(|c| scalar_text(m.get(r, c))).collect();
            format!("[{}]", row.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn basis_label(var: &Var, i: usize, j: usize) -> String {
    let m = mono_text(var, i, j);
    if m.is_empty() { "1".into() } else { m }
}

pub fn gram_text(g: &GramMatrix) -> String {
    let labels: Vec<String> = g.basis().iter().map(|&(i, j)| basis_label(&Var::theta(), i, j)).collect();
    format!("basis: {}\n{}", labels.join(", "), matrix_text(g.entries()))
}

// LaTeX

fn latex_pow(base: &str, e: i64) -> String {
    if e == 1 {
        base.to_string()
    } else if (0..10).contains(&e) {
        format!("{base}^{e}")
    } else {
        format!("{base}^{{{e}}}")
    }
}

fn latex_weight(n: usize) -> String {
    if n < 10 { format!("w_{n}") } else { format!("w_{{{n}}}") }
}

fn latex_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// A term as (negative?, body).
fn scalar_term_latex(m: &Monomial, c: &GaussianRational) -> (bool, String) {
    let neg = c.prints_negative();
    let c = if neg { -c } else { c.clone() };
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    let mut prefix = String::new();
    if is_complex(&c) {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        prefix = format!("\\left({} {} {} i\\right)", latex_rational(&c.re), sign, latex_rational(&c.im.abs()));
    } else {
        let r = if c.re.is_zero() { c.im.clone() } else { c.re.clone() };
        if !r.numer().is_one() {
            num.push(r.numer().to_string());
        }
        if !r.denom().is_one() {
            den.push(r.denom().to_string());
        }
        if !c.im.is_zero() {
            num.push("i".into());
        }
    }
    let mut place = |name: String, e: i32| {
        if e > 0 {
            num.push(latex_pow(&name, e as i64));
        } else if e < 0 {
            den.push(latex_pow(&name, -(e as i64)));
        }
    };
    place("q".into(), m.q());
    place("\\overline{q}".into(), m.qb());
    for (n, &e) in m.w_exponents().iter().enumerate() {
        place(latex_weight(n), e);
    }
    for (n, &e) in m.u_exponents().iter().enumerate() {
        place(format!("\\sqrt{{{}}}", latex_weight(n)), -e);
    }
    let body = if den.is_empty() {
        if num.is_empty() && prefix.is_empty() { "1".into() } else { num.join(" ") }
    } else {
        let n = if num.is_empty() { "1".into() } else { num.join(" ") };
        format!("\\dfrac{{{}}}{{{}}}", n, den.join(" "))
    };
    let body = match (prefix.is_empty(), body.as_str()) {
        (true, _) => body,
        (false, "") => prefix,
        (false, _) => format!("{prefix} {body}"),
    };
    (neg, body)
}

fn join_latex(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, p)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&p);
    }
    out
}

pub fn scalar_latex(s: &Scalar) -> String {
    join_latex(s.terms().rev().map(|(m, c)| scalar_term_latex(m, c)).collect())
}

fn mono_latex(var: &Var, i: usize, j: usize) -> String {
    let mut parts = Vec::new();
    if i > 0 {
        parts.push(latex_pow(&var.latex(), i as i64));
    }
    if j > 0 {
        parts.push(latex_pow(&var.latex_bar(), j as i64));
    }
    parts.join(" ")
}

/// `(negative?, coefficient)`; the coefficient is empty when it is one.
fn coeff_latex(c: &Scalar) -> (bool, String) {
    if c.n_terms() == 1 {
        let (m, x) = c.terms().next().expect("one term");
        let (neg, body) = scalar_term_latex(m, x);
        (neg, if body == "1" { String::new() } else { body })
    } else {
        (false, format!("\\left({}\\right)", scalar_latex(c)))
    }
}

fn latex_product(coeff: String, rest: &str) -> String {
    match (coeff.is_empty(), rest.is_empty()) {
        (true, true) => "1".into(),
        (true, false) => rest.into(),
        (false, true) => coeff,
        (false, false) => format!("{coeff} {rest}"),
    }
}

pub fn element_latex(f: &PgElement) -> String {
    let parts = basis_order(f.l())
        .into_iter()
        .filter(|&(i, j)| !f.coeff(i, j).is_zero())
        .map(|(i, j)| {
            let (neg, c) = coeff_latex(f.coeff(i, j));
            (neg, latex_product(c, &mono_latex(f.var(), i, j)))
        })
        .collect();
    join_latex(parts)
}

pub fn tensor_latex(t: &TensorElement) -> String {
    let or_one = |s: String| if s.is_empty() { "1".to_string() } else { s };
    let parts = ordered_tensor_terms(t)
        .into_iter()
        .map(|((a, b), (c, d), x)| {
            let (neg, coeff) = coeff_latex(&x);
            let left = or_one(mono_latex(t.left_var(), a, b));
            let right = or_one(mono_latex(t.right_var(), c, d));
            (neg, latex_product(coeff, &format!("{left} \\otimes {right}")))
        })
        .collect();
    join_latex(parts)
}

pub fn matrix_latex(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| scalar_latex(m.get(r, c))).collect::<Vec<_>>().join(" & "))
        .collect();
    format!(
        "\\left(\\begin{{array}}{{{}}}\n{}\n\\end{{array}}\\right)",
        "c".repeat(m.cols()),
        rows.join(" \\\\\n")
    )
}

// JSON

fn rational_json(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::Array(
        s.terms()
            .map(|(m, c)| {
                let mut exp = json!({ "q": m.q(), "qb": m.qb(), "w": m.w_exponents() });
                if m.u_exponents().iter().any(|&e| e != 0) {
                    exp["u"] = json!(m.u_exponents());
                }
                json!({ "coeff": { "re": rational_json(&c.re), "im": rational_json(&c.im) }, "exp": exp })
            })
            .collect(),
    )
}

pub fn element_json(f: &PgElement) -> Value {
    let terms: Vec<Value> = basis_order(f.l())
        .into_iter()
        .filter(|&(i, j)| !f.coeff(i, j).is_zero())
        .map(|(i, j)| json!({ "i": i, "j": j, "coeff": scalar_json(f.coeff(i, j)) }))
        .collect();
    json!({ "l": f.l(), "q_mode": f.ring().q_mode().name(), "terms": terms })
}

pub fn tensor_json(t: &TensorElement) -> Value {
    Value::Array(
        ordered_tensor_terms(t)
            .into_iter()
            .map(|((a, b), (c, d), x)| json!({ "left": [a, b], "right": [c, d], "coeff": scalar_json(&x) }))
            .collect(),
    )
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array((0..m.cols()).map(|c| scalar_json(m.get(r, c))).collect())).collect())
}

pub fn gram_json(g: &GramMatrix) -> Value {
    let blocks: Vec<Value> = g.blocks().iter().map(|b| json!({ "grade": b.grade, "indices": b.indices })).collect();
    json!({
        "l": g.l(),
        "basis": g.basis().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        "matrix": matrix_json(g.entries()),
        "blocks": blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{weight_element, WeightSpec};
    use crate::kernel::{kernel_bh, kernel_pg};
    use crate::scalar::{QMode, Ring};

    #[test]
    fn scalar_texts() {
        let r = Ring::symbolic(3).unwrap();
        assert_eq!(Scalar::zero(&r).to_string(), "0");
        assert_eq!((&Scalar::q(&r) + &Scalar::qb(&r)).to_string(), "q + qb");
        let s = &(&Scalar::q_pow(&r, -1) * &Scalar::weight(&r, 0)).scale(&GaussianRational::from_int(2)) - &Scalar::weight_pow(&r, 1, 2);
        assert_eq!(s.to_string(), "-w1^2 + 2*q^-1*w0");
        let c = Scalar::constant(&r, GaussianRational::from_parts((1, 2), (-3, 4)));
        assert_eq!(c.to_string(), "1/2-3/4 i");
        assert_eq!((&c * &Scalar::q(&r)).to_string(), "(1/2-3/4 i)*q");
        assert_eq!((&c + &Scalar::q(&r)).to_string(), "q + (1/2-3/4 i)");
        assert_eq!(Scalar::constant(&r, GaussianRational::from_parts((0, 1), (-2, 1))).to_string(), "-2 i");
        assert_eq!(Scalar::u_pow(&r, 2, 1).to_string(), "u2");
    }

    #[test]
    fn element_texts() {
        let r = Ring::symbolic(2).unwrap();
        assert_eq!(PgElement::zero(&r).to_string(), "0");
        assert_eq!(weight_element(&r).to_string(), "w1 + w0*th*thb");
        let f = PgElement::theta_bar(&r).mul(&PgElement::theta(&r)).unwrap();
        assert_eq!(f.to_string(), "q^-1*th*thb");
        let g = &PgElement::theta(&r).scale(&(&Scalar::q(&r) + &Scalar::one(&r))) - &PgElement::one(&r);
        assert_eq!(g.to_string(), "-1 + (q + 1)*th");
        assert_eq!(element_latex(&weight_element(&r)), "w_1 + w_0 \\theta \\overline{\\theta}");
        let r3 = Ring::symbolic(3).unwrap();
        assert_eq!(element_text(&PgElement::basis(&r3, 2, 1).unwrap()), "th^2*thb");
    }

    #[test]
    fn kernel_texts() {
        let r = Ring::symbolic(2).unwrap();
        assert_eq!(kernel_bh(&r).unwrap().to_string(), "w0^-1 (x) 1 + w1^-1*thb (x) eta");
        let k = kernel_pg(&r).unwrap();
        assert_eq!(
            tensor_latex(&k),
            "\\dfrac{1}{w_1} \\theta \\overline{\\theta} \\otimes 1 + \\dfrac{1}{w_1} \\overline{\\theta} \\otimes \\eta + \\dfrac{1}{w_1} \\theta \\otimes \\overline{\\eta} + \\dfrac{1}{w_1} 1 \\otimes \\eta \\overline{\\eta} - \\dfrac{w_0}{w_1^2} \\theta \\overline{\\theta} \\otimes \\eta \\overline{\\eta}"
        );
        let ones = Ring::new(QMode::Symbolic, WeightSpec::ones(2).unwrap()).unwrap();
        assert_eq!(kernel_bh(&ones).unwrap().to_string(), "1 (x) 1 + thb (x) eta");
    }

    #[test]
    fn json_shapes() {
        let r = Ring::symbolic(2).unwrap();
        let v = element_json(&weight_element(&r));
        assert_eq!(v["l"], 2);
        assert_eq!(v["q_mode"], "symbolic");
        assert_eq!(v["terms"][1]["i"], 1);
        assert_eq!(v["terms"][1]["coeff"][0]["exp"]["w"], json!([1, 0]));
        assert_eq!(v["terms"][0]["coeff"][0]["coeff"]["re"], "1/1");
        let k = tensor_json(&kernel_pg(&r).unwrap());
        assert_eq!(k.as_array().unwrap().len(), 5);
        assert_eq!(k[0]["left"], json!([1, 1]));
        assert_eq!(k[0]["right"], json!([0, 0]));
    }
}
