//! A small closed expression language over one variable.
//!
//! Grammar, in precedence order (loosest first):
//!
//!   expr   := term (('+' | '-') term)*
//!   term   := factor (('*' | '/') factor)*
//!   factor := '-' factor | power
//!   power  := atom ('^' factor)?
//!   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//!
//! so '^' binds tighter than unary minus (-x^2 is -(x^2)) and associates to
//! the right (2^3^2 is 2^(3^2)). Exponents must not contain the variable;
//! that keeps every expression elementary-integrable and is enforced at parse
//! time. There is no implicit multiplication and there are no named constants.
//!
//! Printing is canonical: it emits the minimal parentheses that reparse to the
//! same tree, so print-then-parse is the identity on parser output and
//! print(parse(print(e))) == print(e) for any tree.

use crate::poly::{Rat, RatPoly};
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    /// Natural logarithm.
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Sqrt => v.sqrt(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
            Func::Tanh => v.tanh(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// A non-negative literal; negative values are spelled with unary minus.
    Number(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Exponent subtree is variable-free; the parser rejects anything else.
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source string.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected character '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: String) -> ParseError {
        ParseError {
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.factor()?;
        loop {
            if self.eat(b'*') {
                e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                e = Expr::Div(Box::new(e), Box::new(self.factor()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.factor()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exponent = self.factor()?;
            if exponent.depends_on_var() {
                return Err(ParseError {
                    position: at,
                    message: "exponent must not contain the variable".to_string(),
                });
            }
            Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'".to_string()));
                }
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(b) if b.is_ascii_lowercase() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_lowercase())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.skip_ws();
                if name == "x" {
                    return Ok(Expr::Var);
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ParseError {
                        position: start,
                        message: format!("unknown name '{name}'"),
                    });
                };
                if !self.eat(b'(') {
                    return Err(self.error(format!("expected '(' after '{name}'")));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'".to_string()));
                }
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Some(b) => Err(self.error(format!("unexpected character '{}'", b as char))),
            None => Err(self.error("unexpected end of input".to_string())),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        // exponent suffix only when digits follow, so "2e" lexes as 2 then 'e'
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mut probe = self.pos + 1;
            if matches!(self.src.get(probe), Some(b'+') | Some(b'-')) {
                probe += 1;
            }
            if self.src.get(probe).is_some_and(|b| b.is_ascii_digit()) {
                self.pos = probe;
                while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| ParseError {
            position: start,
            message: format!("malformed number '{text}'"),
        })?;
        self.skip_ws();
        Ok(Expr::Number(value))
    }
}

// Binding strengths used by the canonical printer; must mirror the grammar.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    /// Literal constructor that respects the non-negative Number invariant:
    /// negative values come out as Neg-wrapped positives.
    pub fn number(v: f64) -> Expr {
        assert!(v.is_finite(), "expression literals must be finite");
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Number(-v)))
        } else {
            Expr::Number(v + 0.0) // folds -0.0 into 0.0
        }
    }

    /// Replaces every occurrence of the variable with `r`.
    pub fn substitute_var(&self, r: &Expr) -> Expr {
        match self {
            Expr::Number(v) => Expr::Number(*v),
            Expr::Var => r.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute_var(r))),
            Expr::Add(a, b) => {
                Expr::Add(Box::new(a.substitute_var(r)), Box::new(b.substitute_var(r)))
            }
            Expr::Sub(a, b) => {
                Expr::Sub(Box::new(a.substitute_var(r)), Box::new(b.substitute_var(r)))
            }
            Expr::Mul(a, b) => {
                Expr::Mul(Box::new(a.substitute_var(r)), Box::new(b.substitute_var(r)))
            }
            Expr::Div(a, b) => {
                Expr::Div(Box::new(a.substitute_var(r)), Box::new(b.substitute_var(r)))
            }
            Expr::Pow(a, b) => {
                Expr::Pow(Box::new(a.substitute_var(r)), Box::new(b.substitute_var(r)))
            }
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute_var(r))),
        }
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Number(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_var(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.depends_on_var() || b.depends_on_var(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Number(v) => *v,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                let base = a.eval(x);
                let e = b.eval(x);
                // integer exponents go through powi (squaring), which is both
                // faster and exact for e.g. (-2)^3 where powf returns NaN
                if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
                    base.powi(e as i32)
                } else {
                    base.powf(e)
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Number(_) | Expr::Var | Expr::Call(..) => PREC_ATOM,
            Expr::Pow(..) => PREC_POW,
            Expr::Neg(..) => PREC_NEG,
            Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
            Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Expr::Number(v) => write!(f, "{v}")?,
            Expr::Var => write!(f, "x")?,
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, PREC_NEG)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, PREC_ADD)?;
                write!(f, " + ")?;
                b.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, PREC_ADD)?;
                write!(f, " - ")?;
                b.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, PREC_MUL)?;
                write!(f, "*")?;
                b.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, PREC_MUL)?;
                write!(f, "/")?;
                b.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expr::Pow(a, b) => {
                // base must be an atom (x^y^z reparses on the right), the
                // exponent slot accepts anything a factor accepts
                a.fmt_prec(f, PREC_ATOM)?;
                write!(f, "^")?;
                b.fmt_prec(f, PREC_NEG)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }

    /// Exact conversion into a rational-coefficient polynomial, when the
    /// expression is one. Variable-free subtrees fold to their f64 value
    /// (taken as an exact rational), divisions need a variable-free divisor,
    /// and exponents need a non-negative integer value.
    pub fn to_polynomial(&self) -> Option<RatPoly> {
        if !self.depends_on_var() {
            let v = self.eval(0.0);
            return Rat::from_float(v).map(RatPoly::constant);
        }
        match self {
            Expr::Number(_) => unreachable!("variable-free handled above"),
            Expr::Var => Some(RatPoly::monomial(1)),
            Expr::Neg(a) => Some(-&a.to_polynomial()?),
            Expr::Add(a, b) => Some(&a.to_polynomial()? + &b.to_polynomial()?),
            Expr::Sub(a, b) => Some(&a.to_polynomial()? - &b.to_polynomial()?),
            Expr::Mul(a, b) => Some(&a.to_polynomial()? * &b.to_polynomial()?),
            Expr::Div(a, b) => {
                if b.depends_on_var() {
                    return None;
                }
                let divisor = Rat::from_float(b.eval(0.0))?;
                if divisor.is_zero() {
                    return None;
                }
                Some(a.to_polynomial()?.scale(&(Rat::from_float(1.0)? / divisor)))
            }
            Expr::Pow(a, b) => {
                let e = b.eval(0.0);
                if e.fract() != 0.0 || !(0.0..=64.0).contains(&e) {
                    return None;
                }
                let base = a.to_polynomial()?;
                let mut acc = RatPoly::constant(Rat::from_float(1.0)?);
                for _ in 0..e as usize {
                    acc = &acc * &base;
                }
                Some(acc)
            }
            Expr::Call(..) => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A right-hand side or coefficient function, classified so that exact
/// arithmetic is used whenever the input allows it.
#[derive(Debug, Clone)]
pub enum IntegrableFunction {
    Constant(f64),
    Polynomial(RatPoly),
    Closure(Expr),
}

impl IntegrableFunction {
    /// Classification: variable-free folds to a constant, rational-polynomial
    /// shapes keep exact coefficients, everything else evaluates pointwise.
    pub fn from_expr(e: Expr) -> IntegrableFunction {
        if !e.depends_on_var() {
            return IntegrableFunction::Constant(e.eval(0.0));
        }
        match e.to_polynomial() {
            Some(p) => IntegrableFunction::Polynomial(p),
            None => IntegrableFunction::Closure(e),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            IntegrableFunction::Constant(c) => *c,
            IntegrableFunction::Polynomial(p) => p.eval_f64(x),
            IntegrableFunction::Closure(e) => e.eval(x),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            IntegrableFunction::Constant(c) => Some(*c),
            IntegrableFunction::Polynomial(p) if p.degree().is_none() => Some(0.0),
            IntegrableFunction::Polynomial(p) if p.degree() == Some(0) => p.coeffs()[0].to_f64(),
            _ => None,
        }
    }

    /// The function t -> scale * f(a + h*t), staying exact for polynomial
    /// inputs. This is the whole domain-normalization story: mapping
    /// coefficients of an equation on [a, a+h] onto the unit interval.
    pub fn compose_affine_scaled(&self, a: f64, h: f64, scale: f64) -> IntegrableFunction {
        assert!(
            a.is_finite() && h.is_finite() && scale.is_finite(),
            "affine map parameters must be finite"
        );
        match self {
            IntegrableFunction::Constant(c) => IntegrableFunction::Constant(scale * c),
            IntegrableFunction::Polynomial(p) => {
                let ra = Rat::from_float(a).expect("finite offset");
                let rh = Rat::from_float(h).expect("finite scale");
                let rs = Rat::from_float(scale).expect("finite prefactor");
                IntegrableFunction::Polynomial(p.compose_affine(&ra, &rh).scale(&rs))
            }
            IntegrableFunction::Closure(e) => {
                let arg = Expr::Add(
                    Box::new(Expr::number(a)),
                    Box::new(Expr::Mul(Box::new(Expr::number(h)), Box::new(Expr::Var))),
                );
                IntegrableFunction::Closure(Expr::Mul(
                    Box::new(Expr::number(scale)),
                    Box::new(e.substitute_var(&arg)),
                ))
            }
        }
    }

    /// The function x -> x * f(x), staying in the exact representation when
    /// f has one. Lets callers expand products like Q(x)*(a + b*x) into
    /// projections of Q and x*Q by linearity instead of resampling.
    pub fn times_var(&self) -> IntegrableFunction {
        match self {
            IntegrableFunction::Constant(c) => IntegrableFunction::Polynomial(
                RatPoly::monomial(1).scale(&Rat::from_float(*c).expect("finite constant")),
            ),
            IntegrableFunction::Polynomial(p) => {
                IntegrableFunction::Polynomial(p * &RatPoly::monomial(1))
            }
            IntegrableFunction::Closure(e) => {
                IntegrableFunction::Closure(Expr::Mul(Box::new(Expr::Var), Box::new(e.clone())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn eval_str(src: &str, x: f64) -> f64 {
        parse(src).unwrap().eval(x)
    }

    #[test]
    fn precedence_cases() {
        assert_eq!(eval_str("2+3*4", 0.0), 14.0);
        assert_eq!(eval_str("2*3^2", 0.0), 18.0);
        assert_eq!(eval_str("(2+3)*4", 0.0), 20.0);
        assert_eq!(eval_str("10-4-3", 0.0), 3.0); // left associative
        assert_eq!(eval_str("8/4/2", 0.0), 1.0);
        assert_eq!(eval_str("2^3^2", 0.0), 512.0); // right associative
        assert_eq!(eval_str("-2^2", 0.0), -4.0); // power binds under minus
        assert_eq!(eval_str("-x^2", 3.0), -9.0);
        assert_eq!(eval_str("x^-2", 2.0), 0.25);
    }

    #[test]
    fn function_evaluation() {
        assert!((eval_str("sin(x)", 1.0) - 1f64.sin()).abs() < 1e-16);
        assert!((eval_str("log(exp(x))", 2.5) - 2.5).abs() < 1e-15);
        assert_eq!(eval_str("abs(-3)", 0.0), 3.0);
        assert!((eval_str("sqrt(2)", 0.0) - 2f64.sqrt()).abs() < 1e-16);
        assert!((eval_str("cosh(x)^2 - sinh(x)^2", 0.7) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scientific_notation_and_e_backtrack() {
        assert_eq!(eval_str("1e-3", 0.0), 1e-3);
        assert_eq!(eval_str("2.5E2", 0.0), 250.0);
        // a bare 'e' after digits is not an exponent marker
        assert!(parse("2e").is_err());
    }

    #[test]
    fn variable_exponent_is_rejected() {
        let err = parse("2^x").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(err.message.contains("exponent"));
        assert!(parse("x^(1+x)").is_err());
        assert!(parse("x^sin(x)").is_err());
        // variable-free calls are fine in exponents
        assert!(parse("x^sin(1)").is_ok());
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse("2 + * 3").unwrap_err().position, 4);
        assert_eq!(parse("sin(x").unwrap_err().position, 5);
        assert_eq!(parse("2 & 3").unwrap_err().position, 2);
        let err = parse("foo(x)").unwrap_err();
        assert_eq!(err.position, 0);
        assert!(err.message.contains("foo"));
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(parse("2x").is_err());
        assert!(parse("2(x+1)").is_err());
        assert!(parse("x y").is_err());
    }

    #[test]
    fn printing_is_canonical() {
        for src in [
            "x + 2*x^2 - 3",
            "-(x + 1)",
            "2^3^2",
            "(x + 1)*(x - 1)",
            "sin(x)*cos(x)",
            "x/(1 + x)",
            "1 - (2 - 3)",
            "-x^2",
            "(-x)^2",
            "exp(-x)",
        ] {
            let once = parse(src).unwrap();
            let printed = once.to_string();
            let twice = parse(&printed).unwrap();
            assert_eq!(once, twice, "reparse changed the tree for {src:?}");
            assert_eq!(printed, twice.to_string());
        }
    }

    #[test]
    fn polynomial_extraction() {
        let p = parse("3*x^2 - x/2 + 1").unwrap().to_polynomial().unwrap();
        assert_eq!(
            p,
            RatPoly::from_coeffs(vec![rat(1, 1), rat(-1, 2), rat(3, 1)])
        );
        // (1+x)^3 expands exactly
        let q = parse("(1+x)^3").unwrap().to_polynomial().unwrap();
        assert_eq!(
            q,
            RatPoly::from_coeffs(vec![rat(1, 1), rat(3, 1), rat(3, 1), rat(1, 1)])
        );
        assert!(parse("sin(x)").unwrap().to_polynomial().is_none());
        assert!(parse("1/x").unwrap().to_polynomial().is_none());
        assert!(parse("x^0.5").unwrap().to_polynomial().is_none());
        // variable-free transcendental folds to its f64 value exactly
        let c = parse("exp(1)").unwrap().to_polynomial().unwrap();
        assert_eq!(c.coeff(0), Rat::from_float(1f64.exp()).unwrap());
    }

    #[test]
    fn classification() {
        let c = IntegrableFunction::from_expr(parse("2^3 + 1").unwrap());
        assert_eq!(c.as_constant(), Some(9.0));
        assert!(matches!(
            IntegrableFunction::from_expr(parse("x^2 - 1").unwrap()),
            IntegrableFunction::Polynomial(_)
        ));
        assert!(matches!(
            IntegrableFunction::from_expr(parse("exp(-x)").unwrap()),
            IntegrableFunction::Closure(_)
        ));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(|n| Expr::Number(n as f64 / 8.0)),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(4, 48, 3, |inner| {
            let constant = (0u32..16).prop_map(|n| Expr::Number(n as f64));
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner.clone(), constant).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (any::<u8>(), inner).prop_map(|(f, a)| {
                    let funcs = [
                        Func::Sin,
                        Func::Cos,
                        Func::Exp,
                        Func::Sinh,
                        Func::Cosh,
                        Func::Tanh,
                        Func::Abs,
                    ];
                    Expr::Call(funcs[f as usize % funcs.len()], Box::new(a))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            prop_assert_eq!(reparsed.to_string(), printed);
        }

        #[test]
        fn eval_agrees_after_roundtrip(e in arb_expr(), x in -2.0f64..2.0) {
            let reparsed = parse(&e.to_string()).unwrap();
            let a = e.eval(x);
            let b = reparsed.eval(x);
            prop_assert!(a == b || (a.is_nan() && b.is_nan()));
        }
    }
}
