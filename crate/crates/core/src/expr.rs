//! Expression syntax for algebra elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' ['-'] uint)?
//! atom   := th | θ | thb | θ̄ | q | qb | wN | uN | uint ['/' uint] | i | '(' expr ')'
//! ```
//!
//! Products keep their written order. Negative exponents are accepted on
//! atoms that evaluate to an invertible scalar (`q`, `qb`, `wN`, `uN`,
//! nonzero literals) so that every printed element parses back.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{PgError, Result};
use crate::pg::PgElement;
use crate::render::Format;
use crate::scalar::{GaussianRational, QMode, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {}: {message}", .position + 1)]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Theta,
    ThetaBar,
    Q,
    QBar,
    Weight(usize),
    /// `uN = wN^{-1/2}`.
    WeightInvSqrt(usize),
    Literal(GaussianRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Terms with a flag that is true for subtracted terms.
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
    Atom(Atom),
    Group(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Theta,
    ThetaBar,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let start = k;
        let tok = match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'θ' => {
                if matches!(chars.get(k + 1), Some('\u{0304}') | Some('\u{0305}')) {
                    k += 1;
                    Tok::ThetaBar
                } else {
                    Tok::Theta
                }
            }
            c if c.is_ascii_digit() => {
                let mut end = k;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let text: String = chars[k..end].iter().collect();
                k = end;
                out.push((start, Tok::Num(text.parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = k;
                while end < chars.len() && chars[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                let text: String = chars[k..end].iter().collect();
                k = end;
                out.push((start, Tok::Ident(text)));
                continue;
            }
            other => {
                return Err(ParseError { position: k, message: format!("unexpected character {other:?}") });
            }
        };
        out.push((start, tok));
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negated = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            terms.push((negated, self.term()?));
            negated = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.bump();
        }
        Ok(if terms.len() == 1 && !terms[0].0 { terms.pop().expect("one term").1 } else { Expr::Sum(terms) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Num(_) | Tok::Theta | Tok::ThetaBar | Tok::LParen))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
                factors.push(self.factor()?);
            } else if self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().expect("one factor") } else { Expr::Product(factors) })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.bump();
        let negative = matches!(self.peek(), Some(Tok::Minus));
        if negative {
            self.bump();
        }
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected an integer exponent");
        };
        let Ok(mut e) = i64::try_from(&n) else {
            return self.err("exponent is too large");
        };
        self.bump();
        if negative {
            e = -e;
        }
        Ok(Expr::Power(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.here();
        match self.bump() {
            Some(Tok::Theta) => Ok(Expr::Atom(Atom::Theta)),
            Some(Tok::ThetaBar) => Ok(Expr::Atom(Atom::ThetaBar)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if !matches!(self.bump(), Some(Tok::RParen)) {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                Ok(Expr::Group(Box::new(inner)))
            }
            Some(Tok::Num(n)) => {
                let mut value = BigRational::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let Some(Tok::Num(d)) = self.bump() else {
                        self.pos -= 1;
                        return self.err("expected a denominator");
                    };
                    if d.is_zero() {
                        return Err(ParseError { position: start, message: "zero denominator".into() });
                    }
                    value /= BigRational::from_integer(d);
                }
                Ok(Expr::Atom(Atom::Literal(GaussianRational::real(value))))
            }
            Some(Tok::Ident(name)) => ident_atom(&name)
                .map(Expr::Atom)
                .ok_or(ParseError { position: start, message: format!("unknown symbol {name:?}") }),
            Some(t) => {
                self.pos -= 1;
                self.err(format!("unexpected {}", describe(&t)))
            }
            None => self.err("unexpected end of input"),
        }
    }
}

fn ident_atom(name: &str) -> Option<Atom> {
    let indexed = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        (!rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())).then(|| rest.parse().ok()).flatten()
    };
    match name {
        "th" => Some(Atom::Theta),
        "thb" => Some(Atom::ThetaBar),
        "q" => Some(Atom::Q),
        "qb" => Some(Atom::QBar),
        "i" => Some(Atom::Literal(GaussianRational::i())),
        _ => indexed("w").map(Atom::Weight).or_else(|| indexed("u").map(Atom::WeightInvSqrt)),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("symbol {s:?}"),
        Tok::Num(n) => format!("number {n}"),
        Tok::Theta => "'θ'".into(),
        Tok::ThetaBar => "'θ̄'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, end: input.chars().count() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if let Some(t) = p.peek().cloned() {
        return p.err(format!("unexpected {}", describe(&t)));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sum(terms) => {
                for (k, (neg, t)) in terms.iter().enumerate() {
                    match (k, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join("*"))
            }
            Expr::Power(b, e) => write!(f, "{b}^{e}"),
            Expr::Group(e) => write!(f, "({e})"),
            Expr::Atom(a) => match a {
                Atom::Theta => f.write_str("th"),
                Atom::ThetaBar => f.write_str("thb"),
                Atom::Q => f.write_str("q"),
                Atom::QBar => f.write_str("qb"),
                Atom::Weight(n) => write!(f, "w{n}"),
                Atom::WeightInvSqrt(n) => write!(f, "u{n}"),
                Atom::Literal(c) if c.is_real() => write!(f, "{c}"),
                Atom::Literal(c) => write!(f, "({c})"),
            },
        }
    }
}

/// The session an expression is evaluated in.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub ring: Ring,
    pub format: Format,
}

impl SessionConfig {
    pub fn new(ring: Ring, format: Format) -> Self {
        SessionConfig { ring, format }
    }

    pub fn eval(&self, input: &str) -> Result<PgElement> {
        eval_ast(&parse(input)?, &self.ring)
    }
}

fn weight_index(ring: &Ring, n: usize) -> Result<usize> {
    if n < ring.l() {
        Ok(n)
    } else {
        Err(PgError::Unsupported(format!("weight index {n} needs to be below l = {}", ring.l())))
    }
}

/// Evaluates left to right with the algebra product; the result is in
/// anti-Wick normal form.
pub fn eval_ast(expr: &Expr, ring: &Ring) -> Result<PgElement> {
    let scalar = |s: Scalar| Ok(PgElement::from_scalar(s));
    match expr {
        Expr::Atom(a) => match a {
            Atom::Theta => Ok(PgElement::theta(ring)),
            Atom::ThetaBar => Ok(PgElement::theta_bar(ring)),
            Atom::Q => scalar(Scalar::q(ring)),
            Atom::QBar => scalar(Scalar::qb(ring)),
            Atom::Weight(n) => scalar(Scalar::weight(ring, weight_index(ring, *n)?)),
            Atom::WeightInvSqrt(n) => scalar(Scalar::u_pow(ring, weight_index(ring, *n)?, 1)),
            Atom::Literal(c) => scalar(Scalar::constant(ring, c.clone())),
        },
        Expr::Group(e) => eval_ast(e, ring),
        Expr::Sum(terms) => {
            let mut acc = PgElement::zero(ring);
            for (neg, t) in terms {
                let v = eval_ast(t, ring)?;
                acc = if *neg { acc.checked_sub(&v)? } else { acc.checked_add(&v)? };
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = PgElement::one(ring);
            for f in fs {
                acc = acc.mul(&eval_ast(f, ring)?)?;
            }
            Ok(acc)
        }
        Expr::Power(b, e) => power(&eval_ast(b, ring)?, *e),
    }
}

fn power(base: &PgElement, e: i64) -> Result<PgElement> {
    let ring = base.ring();
    let only_constant = base.terms().all(|(i, j, _)| i == 0 && j == 0);
    if only_constant {
        let s = base.coeff(0, 0).pow(i32::try_from(e).map_err(|_| PgError::Unsupported("exponent out of range".into()))?)?;
        return Ok(PgElement::from_scalar(s));
    }
    if e < 0 {
        return Err(PgError::Unsupported("negative powers apply only to scalar monomials".into()));
    }
    let nilpotent = base.coeff(0, 0).is_zero();
    let l = ring.l() as i64;
    if nilpotent && e > 2 * l - 2 {
        return Ok(PgElement::zero(ring));
    }
    let mut acc = PgElement::one(ring);
    let mut sq = base.clone();
    let mut n = e as u64;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&sq)?;
        }
        n >>= 1;
        if n > 0 {
            sq = sq.mul(&sq)?;
        }
    }
    Ok(acc)
}

/// Evaluates an expression that must reduce to a scalar multiple of `1`.
pub fn eval_scalar(expr: &Expr, ring: &Ring) -> Result<Scalar> {
    let v = eval_ast(expr, ring)?;
    if v.terms().any(|(i, j, _)| i + j > 0) {
        return Err(PgError::NotConstant(v.to_string()));
    }
    Ok(v.coeff(0, 0).clone())
}

/// Notes about `th^n` or `thb^n` with `n >= l`, which vanish.
pub fn warnings(expr: &Expr, l: usize) -> Vec<String> {
    let mut out = Vec::new();
    fn walk(e: &Expr, l: usize, out: &mut Vec<String>) {
        match e {
            Expr::Sum(ts) => ts.iter().for_each(|(_, t)| walk(t, l, out)),
            Expr::Product(fs) => fs.iter().for_each(|f| walk(f, l, out)),
            Expr::Group(g) => walk(g, l, out),
            Expr::Power(b, n) => {
                if matches!(**b, Expr::Atom(Atom::Theta | Atom::ThetaBar)) && *n >= l as i64 {
                    out.push(format!("{e} vanishes because the exponent is at least l = {l}"));
                }
                walk(b, l, out);
            }
            Expr::Atom(_) => {}
        }
    }
    walk(expr, l, &mut out);
    out
}

/// Reads `symbolic`, `real` or a nonzero constant such as `1/2`, `-2` or
/// `1/2+3/4 i`.
pub fn parse_q_mode(text: &str) -> Result<QMode> {
    match text.trim() {
        "symbolic" => Ok(QMode::Symbolic),
        "real" => Ok(QMode::Real),
        other => {
            let ring = Ring::symbolic(2)?;
            let v = eval_scalar(&parse(other)?, &ring)?;
            let c = v.as_constant().ok_or_else(|| PgError::NotConstant(v.to_string()))?;
            if c.is_zero() {
                return Err(PgError::DivisionByZero);
            }
            Ok(QMode::Numeric(c))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::WeightSpec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(l: usize) -> Ring {
        Ring::symbolic(l).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let e = parse("th*thb - q*thb*th").unwrap();
        let Expr::Sum(terms) = &e else { panic!("{e:?}") };
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[1].1, Expr::Product(vec![Expr::Atom(Atom::Q), Expr::Atom(Atom::ThetaBar), Expr::Atom(Atom::Theta)]));
        assert!(eval_ast(&e, &sym(3)).unwrap().is_zero());

        let r = sym(2);
        assert!(eval_ast(&parse("th^2*thb^2").unwrap(), &r).unwrap().is_zero());
        assert_eq!(warnings(&parse("th^2*thb^2").unwrap(), 2).len(), 2);

        let e = parse("(1+i)*th").unwrap();
        assert!(matches!(&e, Expr::Product(v) if matches!(v[0], Expr::Group(_))));
        let v = eval_ast(&e, &r).unwrap();
        assert_eq!(v.coeff(1, 0), &Scalar::constant(&r, GaussianRational::from_parts((1, 1), (1, 1))));
    }

    #[test]
    fn evaluation_examples() {
        let r = sym(3);
        let v = eval_ast(&parse("thb*th").unwrap(), &r).unwrap();
        assert_eq!(v, PgElement::basis(&r, 1, 1).unwrap().scale(&Scalar::q_pow(&r, -1)));
        assert!(eval_ast(&parse("th^3").unwrap(), &r).unwrap().is_zero());
        assert_eq!(eval_ast(&parse("θ θ̄").unwrap(), &r).unwrap(), PgElement::basis(&r, 1, 1).unwrap());
        assert_eq!(eval_ast(&parse("θ̄θ").unwrap(), &r).unwrap(), v);
        assert_eq!(eval_ast(&parse("q^-2*q^2").unwrap(), &r).unwrap(), PgElement::one(&r));
        assert_eq!(eval_ast(&parse("u1^2*w1").unwrap(), &r).unwrap(), PgElement::one(&r));
        assert_eq!(eval_ast(&parse("-3/6 th").unwrap(), &r).unwrap(), PgElement::theta(&r).scale(&Scalar::constant(&r, GaussianRational::from_ratio(-1, 2))));
        assert_eq!(eval_ast(&parse("(th + thb)^1000").unwrap(), &r).unwrap(), PgElement::zero(&r));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("th + * q").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse("th + (q").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse("th $").unwrap_err();
        assert_eq!(e.position, 3);
        assert_eq!(parse("foo").unwrap_err().position, 0);
        assert!(parse("").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("th^").is_err());
        assert!(eval_ast(&parse("th^-1").unwrap(), &sym(2)).is_err());
        assert!(eval_ast(&parse("w5").unwrap(), &sym(2)).is_err());
        assert!(eval_ast(&parse("(1+q)^-1").unwrap(), &sym(2)).is_err());
    }

    #[test]
    fn q_modes() {
        assert_eq!(parse_q_mode("symbolic").unwrap(), QMode::Symbolic);
        assert_eq!(parse_q_mode("real").unwrap(), QMode::Real);
        assert_eq!(parse_q_mode("1/2+3/4 i").unwrap(), QMode::Numeric(GaussianRational::from_parts((1, 2), (3, 4))));
        assert_eq!(parse_q_mode("-2").unwrap(), QMode::Numeric(GaussianRational::from_int(-2)));
        assert!(parse_q_mode("0").is_err());
        assert!(parse_q_mode("q").is_err());
    }

    fn rings(l: usize) -> Vec<Ring> {
        vec![
            sym(l),
            Ring::new(QMode::Real, WeightSpec::symbolic(l).unwrap()).unwrap(),
            Ring::new(QMode::Numeric(GaussianRational::from_parts((2, 3), (-1, 2))), WeightSpec::from_ints(&vec![3; l]).unwrap()).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn print_parse_round_trip(seed in any::<u64>(), l in 2usize..=5, mode in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rings(l).swap_remove(mode);
            let mut f = crate::random::element(&mut rng, &r);
            if seed % 3 == 0 {
                f = &f + &PgElement::from_scalar(Scalar::u_pow(&r, (seed as usize) % l, 1)).mul(&f).unwrap();
            }
            let text = f.to_string();
            let back = eval_ast(&parse(&text).unwrap(), &r).unwrap();
            prop_assert_eq!(&back, &f, "{}", text);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
