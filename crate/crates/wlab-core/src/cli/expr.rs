//! The form-expression mini-language on R^8.
//!
//! ```text
//! sum     := wedge (('+' | '-') wedge)*
//! wedge   := product (('/\' | '∧') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := literal | name | dx-monomial | e-pair | 'star' '(' sum ')' | '(' sum ')'
//! ```
//!
//! Literals are integers, `p/q`, or decimals; they are exact unless the
//! expression is evaluated over floats. `dx1234` is a plain monomial and
//! `e1234` the self-dual pair `dx1234 + ⋆dx1234`. A primed index `1'..4'`
//! stands for `5..8`. Scalar `*` binds tighter than the wedge, which binds
//! tighter than `+` and `-`.

use std::fmt;

use super::registry;
use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex};
use crate::scalar::Scalar;

/// Ambient dimension of every expression.
pub const DIM: usize = 8;

#[derive(Debug, Clone)]
pub struct FormExpr {
    pub kind: ExprKind,
    /// Byte offset of the node in the source text.
    pub offset: usize,
}

/// Equality ignores source positions.
impl PartialEq for FormExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Numeric literal kept as written.
    Literal(String),
    Name(String),
    /// `dx…` with indices as written (possibly unsorted).
    Monomial(Vec<usize>),
    /// `e…`, the self-dual pair.
    Pair(Vec<usize>),
    Neg(Box<FormExpr>),
    Add(Box<FormExpr>, Box<FormExpr>),
    Sub(Box<FormExpr>, Box<FormExpr>),
    Mul(Box<FormExpr>, Box<FormExpr>),
    Wedge(Box<FormExpr>, Box<FormExpr>),
    Pow(Box<FormExpr>, u32),
    Star(Box<FormExpr>),
}

type Binary = fn(Box<FormExpr>, Box<FormExpr>) -> ExprKind;

fn node(kind: ExprKind, offset: usize) -> FormExpr {
    FormExpr { kind, offset }
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Wedge,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                out.push((Tok::Wedge, start));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i);
                // `p/q` when a digit follows the slash
                if bytes.get(i) == Some(&b'/') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    i = scan_number(bytes, i + 1);
                }
                out.push((Tok::Number(text[start..i].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ if text[i..].starts_with('∧') => {
                out.push((Tok::Wedge, start));
                i += '∧'.len_utf8();
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Digits, an optional fraction and an optional exponent.
fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(err(self.offset(), format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<FormExpr> {
        let mut lhs = self.wedge()?;
        loop {
            let (make, off): (Binary, usize) = match self.peek() {
                Tok::Plus => (ExprKind::Add, self.offset()),
                Tok::Minus => (ExprKind::Sub, self.offset()),
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.wedge()?;
            lhs = node(make(Box::new(lhs), Box::new(rhs)), off);
        }
    }

    fn wedge(&mut self) -> Result<FormExpr> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Wedge {
            let (_, off) = self.bump();
            let rhs = self.product()?;
            lhs = node(ExprKind::Wedge(Box::new(lhs), Box::new(rhs)), off);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<FormExpr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            let (_, off) = self.bump();
            let rhs = self.unary()?;
            lhs = node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), off);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FormExpr> {
        if *self.peek() == Tok::Minus {
            let (_, off) = self.bump();
            let inner = self.unary()?;
            return Ok(node(ExprKind::Neg(Box::new(inner)), off));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FormExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, off) = self.bump();
        let exp_off = self.offset();
        match self.bump().0 {
            Tok::Number(s) => {
                let p: u32 = s
                    .parse()
                    .map_err(|_| err(exp_off, format!("exponent must be a small nonnegative integer, got `{s}`")))?;
                Ok(node(ExprKind::Pow(Box::new(base), p), off))
            }
            _ => Err(err(exp_off, "exponent must be a nonnegative integer")),
        }
    }

    fn atom(&mut self) -> Result<FormExpr> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Number(s) => Ok(node(ExprKind::Literal(s), off)),
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "star" => {
                self.expect(Tok::LParen, "`(` after `star`")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(node(ExprKind::Star(Box::new(inner)), off))
            }
            Tok::Ident(name) => ident(&name, off),
            Tok::End => Err(err(off, "unexpected end of input")),
            other => Err(err(off, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Number(_) => "number",
        Tok::Ident(_) => "name",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Wedge => "`/\\`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

fn ident(name: &str, off: usize) -> Result<FormExpr> {
    if let Some(rest) = name.strip_prefix("dx") {
        if !rest.is_empty() && rest.starts_with(|c: char| c.is_ascii_digit()) {
            return Ok(node(ExprKind::Monomial(indices(rest, off + 2)?), off));
        }
    }
    if let Some(rest) = name.strip_prefix('e') {
        if !rest.is_empty() && rest.starts_with(|c: char| c.is_ascii_digit()) {
            let idx = indices(rest, off + 1)?;
            if idx.len() != DIM / 2 {
                return Err(err(off, format!("`{name}`: a self-dual pair needs {} indices", DIM / 2)));
            }
            return Ok(node(ExprKind::Pair(idx), off));
        }
    }
    if registry::lookup(name).is_some() {
        return Ok(node(ExprKind::Name(name.to_string()), off));
    }
    Err(err(off, format!("unknown name `{name}`")))
}

/// Index digits `1..8`; a trailing `'` maps `1'..4'` to `5..8`.
fn indices(text: &str, off: usize) -> Result<Vec<usize>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let at = off + i;
        let d = bytes[i];
        if !(b'1'..=b'8').contains(&d) {
            return Err(err(at, format!("index must be a digit 1..{DIM}")));
        }
        let mut v = (d - b'0') as usize;
        if bytes.get(i + 1) == Some(&b'\'') {
            if v > 4 {
                return Err(err(at, "primed index must be 1'..4'"));
            }
            v += 4;
            i += 1;
        }
        if out.contains(&v) {
            return Err(err(at, format!("repeated index {v}")));
        }
        out.push(v);
        i += 1;
    }
    Ok(out)
}

/// Parses an expression into its syntax tree.
pub fn parse_expr(text: &str) -> Result<FormExpr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        let off = p.offset();
        return Err(err(off, format!("unexpected {} after expression", describe(p.peek()))));
    }
    Ok(e)
}

/// A scalar or a form; scalars become 0-forms only at the end.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<S> {
    Scalar(S),
    Form(KForm<S>),
}

impl<S: Scalar> Value<S> {
    pub fn into_form(self) -> KForm<S> {
        match self {
            Value::Form(f) => f,
            Value::Scalar(c) => KForm::from_terms(DIM, 0, [(Vec::new(), c)]).expect("0-form"),
        }
    }
}

impl FormExpr {
    pub fn eval<S: Scalar>(&self) -> Result<Value<S>> {
        use ExprKind::*;
        let off = self.offset;
        Ok(match &self.kind {
            Literal(s) => Value::Scalar(S::parse_literal(s).map_err(|_| err(off, format!("invalid literal `{s}`")))?),
            Name(n) => Value::Form(registry::lookup(n).ok_or_else(|| err(off, format!("unknown name `{n}`")))?.form::<S>()),
            Monomial(idx) => {
                let (m, sign) = MultiIndex::from_unsorted(idx, DIM).map_err(|e| err(off, e.to_string()))?;
                Value::Form(KForm::monomial(DIM, &m.indices(), S::from_i64(sign as i64))?)
            }
            Pair(idx) => {
                let (m, sign) = MultiIndex::from_unsorted(idx, DIM).map_err(|e| err(off, e.to_string()))?;
                Value::Form(KForm::<S>::self_dual_pair(DIM, &m.indices())?.scale(&S::from_i64(sign as i64)))
            }
            Neg(a) => match a.eval::<S>()? {
                Value::Scalar(c) => Value::Scalar(-c),
                Value::Form(f) => Value::Form(-&f),
            },
            Add(a, b) | Sub(a, b) => {
                let sub = matches!(self.kind, Sub(..));
                match (a.eval::<S>()?, b.eval::<S>()?) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
                    (Value::Form(x), Value::Form(y)) if x.k() == y.k() => {
                        Value::Form(if sub { &x - &y } else { &x + &y })
                    }
                    (x, y) => {
                        return Err(err(off, format!("degree mismatch: {} and {}", degree(&x), degree(&y))));
                    }
                }
            }
            Mul(a, b) => match (a.eval::<S>()?, b.eval::<S>()?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(c), Value::Form(f)) | (Value::Form(f), Value::Scalar(c)) => Value::Form(f.scale(&c)),
                (Value::Form(_), Value::Form(_)) => {
                    return Err(err(off, "`*` multiplies by a scalar; use `/\\` for the wedge product"));
                }
            },
            Wedge(a, b) => match (a.eval::<S>()?, b.eval::<S>()?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(c), Value::Form(f)) | (Value::Form(f), Value::Scalar(c)) => Value::Form(f.scale(&c)),
                (Value::Form(x), Value::Form(y)) => Value::Form(x.wedge(&y).map_err(|e| err(off, e.to_string()))?),
            },
            Pow(a, p) => match a.eval::<S>()? {
                Value::Scalar(c) => Value::Scalar((0..*p).fold(S::one(), |acc, _| acc * c.clone())),
                Value::Form(f) => Value::Form(f.wedge_power(*p as usize).map_err(|e| err(off, e.to_string()))?),
            },
            Star(a) => match a.eval::<S>()? {
                Value::Scalar(c) => Value::Form(KForm::<S>::volume(DIM)?.scale(&c)),
                Value::Form(f) => Value::Form(f.hodge_star()),
            },
        })
    }
}

fn degree<S: Scalar>(v: &Value<S>) -> String {
    match v {
        Value::Scalar(_) => "a scalar".into(),
        Value::Form(f) => format!("a {}-form", f.k()),
    }
}

/// Parses and evaluates an expression to a form on R^8.
pub fn parse<S: Scalar>(text: &str) -> Result<KForm<S>> {
    Ok(parse_expr(text)?.eval::<S>()?.into_form())
}

// Binding strength, loosest first.
const SUM: u8 = 1;
const WEDGE: u8 = 2;
const PRODUCT: u8 = 3;
const UNARY: u8 = 4;
const POWER: u8 = 5;
const ATOM: u8 = 6;

impl FormExpr {
    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => SUM,
            ExprKind::Wedge(..) => WEDGE,
            ExprKind::Mul(..) => PRODUCT,
            ExprKind::Neg(_) => UNARY,
            ExprKind::Pow(..) => POWER,
            _ => ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        let bin = |f: &mut fmt::Formatter<'_>, a: &FormExpr, op: &str, b: &FormExpr, p: u8| {
            a.write_at(f, p)?;
            write!(f, "{op}")?;
            b.write_at(f, p + 1)
        };
        match &self.kind {
            ExprKind::Literal(s) | ExprKind::Name(s) => write!(f, "{s}"),
            ExprKind::Monomial(idx) => write!(f, "dx{}", digits(idx)),
            ExprKind::Pair(idx) => write!(f, "e{}", digits(idx)),
            ExprKind::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, UNARY)
            }
            ExprKind::Add(a, b) => bin(f, a, " + ", b, SUM),
            ExprKind::Sub(a, b) => bin(f, a, " - ", b, SUM),
            ExprKind::Wedge(a, b) => bin(f, a, " /\\ ", b, WEDGE),
            ExprKind::Mul(a, b) => bin(f, a, " * ", b, PRODUCT),
            ExprKind::Pow(a, p) => {
                a.write_at(f, ATOM)?;
                write!(f, "^{p}")
            }
            ExprKind::Star(a) => {
                write!(f, "star(")?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

fn digits(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect()
}

/// Minimal parentheses; `parse_expr(e.to_string()) == e`.
impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// The canonical expression of a form on R^8: terms in lexicographic
/// order, unit coefficients omitted. The zero k-form prints as `0 * dx1…k`
/// so that its degree survives.
pub fn form_expr<S: Scalar>(form: &KForm<S>) -> Result<FormExpr> {
    if form.n() != DIM {
        return Err(Error::Dimension(format!("expressions live on R^{DIM}, form is on R^{}", form.n())));
    }
    let term = |m: MultiIndex, c: &S| -> FormExpr {
        let mag = c.abs();
        if m.is_empty() {
            return node(ExprKind::Literal(mag.to_literal()), 0);
        }
        let mono = node(ExprKind::Monomial(m.indices()), 0);
        if mag == S::one() {
            mono
        } else {
            node(ExprKind::Mul(Box::new(node(ExprKind::Literal(mag.to_literal()), 0)), Box::new(mono)), 0)
        }
    };
    let mut acc: Option<FormExpr> = None;
    for (m, c) in form.terms() {
        let t = term(m, c);
        acc = Some(match acc {
            None if c.is_negative() => node(ExprKind::Neg(Box::new(t)), 0),
            None => t,
            Some(a) if c.is_negative() => node(ExprKind::Sub(Box::new(a), Box::new(t)), 0),
            Some(a) => node(ExprKind::Add(Box::new(a), Box::new(t)), 0),
        });
    }
    Ok(acc.unwrap_or_else(|| {
        let zero = node(ExprKind::Literal("0".into()), 0);
        if form.k() == 0 {
            zero
        } else {
            let idx: Vec<usize> = (1..=form.k()).collect();
            node(ExprKind::Mul(Box::new(zero), Box::new(node(ExprKind::Monomial(idx), 0))), 0)
        }
    }))
}

/// Canonical text of a form on R^8.
pub fn print_form<S: Scalar>(form: &KForm<S>) -> Result<String> {
    Ok(form_expr(form)?.to_string())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::named::{cayley, kraines2, omega_i};
    use crate::scalar::Rational;

    fn exact(text: &str) -> KForm<Rational> {
        parse::<Rational>(text).unwrap()
    }

    fn offset_of(text: &str) -> usize {
        match parse::<Rational>(text) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected a parse error for `{text}`, got {other:?}"),
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(exact("cayley"), cayley());
        assert_eq!(exact("cayley").num_terms(), 14);
        assert_eq!(exact("1/6 * (omega_i^2 + omega_j^2 + omega_k^2)"), kraines2());
        let z = exact("e1234 - e1234");
        assert!(z.is_zero() && z.k() == 4);
    }

    #[test]
    fn precedence() {
        // `*` binds tighter than the wedge, which binds tighter than `+`
        let a = exact("2 * dx12 /\\ dx34 + dx1234");
        assert_eq!(a, exact("3 * dx1234"));
        assert_eq!(exact("-omega_i^2"), omega_i().wedge(&omega_i()).unwrap().scale(&Rational::from_i64(-1)));
        assert_eq!(exact("dx1 /\\ dx2 /\\ dx3"), exact("dx123"));
        assert_eq!(exact("dx1 ∧ dx2∧dx3"), exact("dx123"));
        assert_eq!(exact("dx21"), exact("-dx12"));
        assert_eq!(exact("dx121'2'"), exact("dx1256"));
        assert_eq!(exact("e1'2'3'4'"), exact("e1234"));
        assert_eq!(exact("star(dx1234)"), exact("dx5678"));
        assert_eq!(exact("star(2)"), exact("2 * vol"));
        assert_eq!(exact("0.25 * dx12"), exact("1/4 * dx12"));
        assert_eq!(exact("(1/2)^2 * h1"), exact("1/4 * e1234"));
        assert_eq!(exact("3").k(), 0);
    }

    #[test]
    fn float_evaluation() {
        let f = parse::<f64>("1/4 * cayley").unwrap();
        assert_eq!(f, cayley().to_float().scale(&0.25));
    }

    #[test]
    fn errors_report_byte_offsets() {
        assert_eq!(offset_of("dx12 + dx1234"), 5);
        assert_eq!(offset_of("cayley + nope"), 9);
        assert_eq!(offset_of("dx12 * dx34"), 5);
        assert_eq!(offset_of("(dx12"), 5);
        assert_eq!(offset_of("dx12 )"), 5);
        assert_eq!(offset_of("dx19"), 3);
        assert_eq!(offset_of("dx11"), 3);
        assert_eq!(offset_of("e123"), 0);
        assert_eq!(offset_of("dx12 ^ dx34"), 7);
        assert_eq!(offset_of("dx12 # 3"), 5);
        assert_eq!(offset_of(""), 0);
        assert_eq!(offset_of("dx1234 /\\ dx5678 /\\ dx12"), 17);
    }

    #[test]
    fn registry_forms_survive_printing() {
        for e in registry::entries() {
            let f = e.exact();
            let text = print_form(&f).unwrap();
            assert_eq!(exact(&text), f, "{text}");
            let g = e.form::<f64>();
            assert_eq!(parse::<f64>(&print_form(&g).unwrap()).unwrap(), g);
        }
        assert_eq!(print_form(&exact("dx12 - 1/3 * dx34")).unwrap(), "dx12 - 1/3 * dx34");
        assert_eq!(print_form(&exact("-dx12")).unwrap(), "-dx12");
        let zero = exact("e1234 - e1234");
        assert_eq!(exact(&print_form(&zero).unwrap()), zero);
        assert_eq!(print_form(&exact("-5/2")).unwrap(), "-5/2");
    }

    fn arb_expr() -> impl Strategy<Value = FormExpr> {
        let leaf = prop_oneof![
            (1u32..50, 1u32..9).prop_map(|(p, q)| node(ExprKind::Literal(format!("{p}/{q}")), 0)),
            (0u32..20).prop_map(|p| node(ExprKind::Literal(p.to_string()), 0)),
            prop::sample::select(vec!["cayley", "omega_i", "kraines2", "h3", "vol"])
                .prop_map(|n| node(ExprKind::Name(n.into()), 0)),
            prop::sample::subsequence(vec![1usize, 2, 3, 4, 5, 6, 7, 8], 1..4)
                .prop_map(|v| node(ExprKind::Monomial(v), 0)),
            prop::sample::subsequence(vec![1usize, 2, 3, 4, 5, 6, 7, 8], 4)
                .prop_map(|v| node(ExprKind::Pair(v), 0)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let b = |e: FormExpr| Box::new(e);
            prop_oneof![
                inner.clone().prop_map(move |e| node(ExprKind::Neg(b(e)), 0)),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Add(b(x), b(y)), 0)),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Sub(b(x), b(y)), 0)),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Mul(b(x), b(y)), 0)),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Wedge(b(x), b(y)), 0)),
                (inner.clone(), 0u32..4).prop_map(move |(x, p)| node(ExprKind::Pow(b(x), p), 0)),
                inner.prop_map(move |e| node(ExprKind::Star(b(e)), 0)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printing_then_parsing_is_identity(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
        }
    }
}
