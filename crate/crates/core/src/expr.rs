//! Expressions over the chart coordinates `x0..x3`.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)*
//! atom    := number | 'i' | 'x0'..'x3' | ('exp' | 'sin' | 'cos') '(' sum ')' | '(' sum ')'
//! ```
//!
//! Numbers are decimal literals with an optional exponent and are stored as
//! exact rationals. Coordinates are real; `i` is the only source of complex
//! values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Point = [f64; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    ImagUnit,
    Coord(usize),
    Neg(Arc<Expr>),
    Sum(Arc<Expr>, Arc<Expr>),
    Prod(Arc<Expr>, Arc<Expr>),
    Quot(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, i64),
    Exp(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{symbol}` at position {position}")]
    UnknownSymbol { position: usize, symbol: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownSymbol { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{expr}` at point {point:?}")]
    DivisionByZero { expr: String, point: Point },
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Expr {
    pub fn constant(n: i64) -> Self {
        Expr::Const(rational(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Expr::Const(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Expr::constant(0)
    }

    pub fn one() -> Self {
        Expr::constant(1)
    }

    /// Panics unless `k` is in `0..4`.
    pub fn coord(k: usize) -> Self {
        assert!(k < 4, "coordinate index {k} out of range");
        Expr::Coord(k)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    /// True when the expression contains no coordinate.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::ImagUnit => true,
            Expr::Coord(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => a.is_constant(),
            Expr::Sum(a, b) | Expr::Prod(a, b) | Expr::Quot(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn exp(a: Expr) -> Self {
        if a.is_zero() {
            return Expr::one();
        }
        Expr::Exp(Arc::new(a))
    }

    pub fn sin(a: Expr) -> Self {
        if a.is_zero() {
            return Expr::zero();
        }
        Expr::Sin(Arc::new(a))
    }

    pub fn cos(a: Expr) -> Self {
        if a.is_zero() {
            return Expr::one();
        }
        Expr::Cos(Arc::new(a))
    }

    pub fn pow(a: Expr, n: i64) -> Self {
        match (&a, n) {
            (_, 0) => Expr::one(),
            (_, 1) => a,
            (Expr::Const(c), n) if !(c.is_zero() && n < 0) => Expr::Const(c.pow(n as i32)),
            _ => Expr::Pow(Arc::new(a), n),
        }
    }

    /// Complex conjugate as a function of real coordinates: `i ↦ −i`.
    pub fn conj(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Coord(_) => self.clone(),
            Expr::ImagUnit => -Expr::ImagUnit,
            Expr::Neg(a) => -a.conj(),
            Expr::Sum(a, b) => a.conj() + b.conj(),
            Expr::Prod(a, b) => a.conj() * b.conj(),
            Expr::Quot(a, b) => a.conj() / b.conj(),
            Expr::Pow(a, n) => Expr::pow(a.conj(), *n),
            Expr::Exp(a) => Expr::exp(a.conj()),
            Expr::Sin(a) => Expr::sin(a.conj()),
            Expr::Cos(a) => Expr::cos(a.conj()),
        }
    }

    pub fn eval(&self, point: &Point) -> Result<Complex64, EvalError> {
        Ok(match self {
            Expr::Const(c) => Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0),
            Expr::ImagUnit => Complex64::i(),
            Expr::Coord(k) => Complex64::new(point[*k], 0.0),
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Sum(a, b) => a.eval(point)? + b.eval(point)?,
            Expr::Prod(a, b) => a.eval(point)? * b.eval(point)?,
            Expr::Quot(a, b) => {
                let den = b.eval(point)?;
                if den.norm_sqr() == 0.0 {
                    return Err(self.division_by_zero(point));
                }
                a.eval(point)? / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(point)?;
                if *n < 0 && base.norm_sqr() == 0.0 {
                    return Err(self.division_by_zero(point));
                }
                base.powi(*n as i32)
            }
            Expr::Exp(a) => a.eval(point)?.exp(),
            Expr::Sin(a) => a.eval(point)?.sin(),
            Expr::Cos(a) => a.eval(point)?.cos(),
        })
    }

    fn division_by_zero(&self, point: &Point) -> EvalError {
        EvalError::DivisionByZero {
            expr: self.to_string(),
            point: *point,
        }
    }

    /// Symbolic partial derivative with respect to `x_k`.
    pub fn differentiate(&self, k: usize) -> Expr {
        match self {
            Expr::Const(_) | Expr::ImagUnit => Expr::zero(),
            Expr::Coord(j) => {
                if *j == k {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Neg(a) => -a.differentiate(k),
            Expr::Sum(a, b) => a.differentiate(k) + b.differentiate(k),
            Expr::Prod(a, b) => {
                let (a, b) = (a.as_ref(), b.as_ref());
                a.differentiate(k) * b.clone() + a.clone() * b.differentiate(k)
            }
            Expr::Quot(a, b) => {
                let (a, b) = (a.as_ref(), b.as_ref());
                let da = a.differentiate(k);
                let db = b.differentiate(k);
                if db.is_zero() {
                    return da / b.clone();
                }
                (da * b.clone() - a.clone() * db) / Expr::pow(b.clone(), 2)
            }
            Expr::Pow(a, n) => Expr::constant(*n) * Expr::pow((**a).clone(), n - 1) * a.differentiate(k),
            Expr::Exp(a) => self.clone() * a.differentiate(k),
            Expr::Sin(a) => Expr::cos((**a).clone()) * a.differentiate(k),
            Expr::Cos(a) => -(Expr::sin((**a).clone()) * a.differentiate(k)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Sum(..) => 1,
            Expr::Prod(..) | Expr::Quot(..) => 2,
            Expr::Const(c) if !c.is_integer() => 2,
            Expr::Const(c) if c.is_negative() => 3,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(a) => (*a).clone(),
            other => Expr::Neg(Arc::new(other)),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => b,
            (a, b) => Expr::Sum(Arc::new(a), Arc::new(b)),
        }
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (a, b) if a.is_zero() || b.is_zero() => Expr::zero(),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            (a, Expr::Const(c)) if (-c.clone()).is_one() => -a,
            (Expr::Const(c), b) if (-c.clone()).is_one() => -b,
            (a, b) => Expr::Prod(Arc::new(a), Arc::new(b)),
        }
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) if !b.is_zero() => Expr::Const(a / b),
            (a, b) if b.is_one() => a,
            (a, b) if a.is_zero() && !b.is_zero() => Expr::zero(),
            (a, b) => Expr::Quot(Arc::new(a), Arc::new(b)),
        }
    }
}

struct Operand<'a>(&'a Expr, u8);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::ImagUnit => write!(f, "i"),
            Expr::Coord(k) => write!(f, "x{k}"),
            Expr::Neg(a) => write!(f, "-{}", Operand(a, 3)),
            Expr::Sum(a, b) => match b.as_ref() {
                Expr::Neg(inner) => write!(f, "{} - {}", Operand(a, 1), Operand(inner, 2)),
                Expr::Const(c) if c.is_negative() => {
                    write!(f, "{} - {}", Operand(a, 1), Operand(&Expr::Const(-c.clone()), 2))
                }
                _ => write!(f, "{} + {}", Operand(a, 1), Operand(b, 2)),
            },
            Expr::Prod(a, b) => write!(f, "{}*{}", Operand(a, 2), Operand(b, 3)),
            Expr::Quot(a, b) => write!(f, "{}/{}", Operand(a, 2), Operand(b, 3)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", Operand(a, 5)),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_expr(s)
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.product()?;
                acc = Expr::Sum(Arc::new(acc), Arc::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.product()?;
                acc = Expr::Sum(Arc::new(acc), Arc::new(Expr::Neg(Arc::new(rhs))));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = Expr::Prod(Arc::new(acc), Arc::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = Expr::Quot(Arc::new(acc), Arc::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr::Neg(Arc::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let negative = self.eat(b'-');
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.syntax("expected an integer exponent"));
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            let n: i64 = digits.parse().map_err(|_| ParseError::Syntax {
                position: start,
                message: "exponent out of range".into(),
            })?;
            base = Expr::Pow(Arc::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.symbol(),
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            std::str::from_utf8(&p.src[s..p.pos]).expect("ascii digits").to_owned()
        };
        let int_part = digits(self);
        let mut frac_part = String::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = digits(self);
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseError::Syntax {
                position: start,
                message: "malformed number".into(),
            });
        }
        let mut exponent: i64 = 0;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E'))
            && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+')
        {
            self.pos += 1;
            let negative = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e = digits(self);
            let e: i64 = e.parse().map_err(|_| ParseError::Syntax {
                position: start,
                message: "malformed exponent".into(),
            })?;
            exponent = if negative { -e } else { e };
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}").parse().unwrap_or_default();
        let scale = exponent - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Expr::Const(value))
    }

    fn symbol(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let func: Option<fn(Arc<Expr>) -> Expr> = match name {
            "i" => return Ok(Expr::ImagUnit),
            "x0" => return Ok(Expr::Coord(0)),
            "x1" => return Ok(Expr::Coord(1)),
            "x2" => return Ok(Expr::Coord(2)),
            "x3" => return Ok(Expr::Coord(3)),
            "exp" => Some(Expr::Exp),
            "sin" => Some(Expr::Sin),
            "cos" => Some(Expr::Cos),
            _ => None,
        };
        let Some(func) = func else {
            return Err(ParseError::UnknownSymbol {
                position: start,
                symbol: name.to_owned(),
            });
        };
        if !self.eat(b'(') {
            return Err(self.syntax(format!("expected `(` after `{name}`")));
        }
        let arg = self.sum()?;
        if !self.eat(b')') {
            return Err(self.syntax("expected `)`"));
        }
        Ok(func(Arc::new(arg)))
    }
}

/// Central difference `(f(x + h e_k) − f(x − h e_k)) / 2h`.
pub fn central_difference(e: &Expr, k: usize, point: &Point, h: f64) -> Result<Complex64, EvalError> {
    let mut plus = *point;
    let mut minus = *point;
    plus[k] += h;
    minus[k] -= h;
    Ok((e.eval(&plus)? - e.eval(&minus)?) / (2.0 * h))
}

#[cfg(any(test, feature = "strategies"))]
pub mod strategies {
    use super::*;
    use proptest::prelude::*;

    /// Random expressions that are finite on `[−1, 1]^4`: quotients and
    /// negative powers only ever divide by something bounded below by one.
    pub fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::ratio(n, d)),
            Just(Expr::ImagUnit),
            (0usize..4).prop_map(Expr::Coord),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let arc = |e: Expr| Arc::new(e);
            let positive = inner.clone().prop_map(move |e| {
                Expr::Sum(Arc::new(Expr::constant(2)), Arc::new(Expr::Cos(Arc::new(e))))
            });
            prop_oneof![
                inner.clone().prop_map(move |a| Expr::Neg(arc(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sum(Arc::new(a), Arc::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Prod(Arc::new(a), Arc::new(b))),
                (inner.clone(), positive.clone()).prop_map(|(a, b)| Expr::Quot(Arc::new(a), Arc::new(b))),
                (inner.clone(), 0i64..4).prop_map(|(a, n)| Expr::Pow(Arc::new(a), n)),
                (positive, -3i64..0).prop_map(|(a, n)| Expr::Pow(Arc::new(a), n)),
                inner.clone().prop_map(|a| Expr::Exp(Arc::new(a))),
                inner.clone().prop_map(|a| Expr::Sin(Arc::new(a))),
                inner.prop_map(|a| Expr::Cos(Arc::new(a))),
            ]
        })
    }

    pub fn point() -> impl Strategy<Value = Point> {
        [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    const ORIGIN: Point = [0.0; 4];

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(p("exp(-x1)"), Expr::Exp(Arc::new(Expr::Neg(Arc::new(Expr::Coord(1))))));
        let expected = Expr::Sum(
            Arc::new(Expr::Prod(
                Arc::new(Expr::constant(2)),
                Arc::new(Expr::Pow(Arc::new(Expr::Coord(0)), 2)),
            )),
            Arc::new(Expr::Neg(Arc::new(Expr::Quot(
                Arc::new(Expr::constant(1)),
                Arc::new(Expr::constant(3)),
            )))),
        );
        assert_eq!(p("2*x0^2 - 1/3"), expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let pt = [0.0, 3.0, 2.0, 0.0];
        assert_eq!(p("-x1^2").eval(&pt).unwrap().re, -9.0);
        assert_eq!(p("x1 - x2 - 1").eval(&pt).unwrap().re, 0.0);
        assert_eq!(p("x1 / x2 / 3").eval(&pt).unwrap().re, 0.5);
        assert_eq!(p("2 + x1 * x2").eval(&pt).unwrap().re, 8.0);
        assert_eq!(p("(x1)^-2").eval(&pt).unwrap().re, 1.0 / 9.0);
        assert_eq!(p("1.5e1").eval(&pt).unwrap().re, 15.0);
        assert_eq!(p("0.25"), Expr::ratio(1, 4));
        assert_eq!(p("i*i").eval(&pt).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            parse_expr("x4").unwrap_err(),
            ParseError::UnknownSymbol {
                position: 0,
                symbol: "x4".into()
            }
        );
        assert_eq!(parse_expr("1 + y").unwrap_err().position(), 4);
        assert!(matches!(parse_expr("(x1"), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(parse_expr("x1 +"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x1^x2"), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(parse_expr("exp x1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x1 x2"), Err(ParseError::Syntax { position: 3, .. })));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p("x1").eval(&[0.0, 2.0, 0.0, 0.0]).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(p("exp(-x1)").eval(&ORIGIN).unwrap(), Complex64::new(1.0, 0.0));
        let err = p("1/x0").eval(&[0.0, 1.0, 1.0, 1.0]).unwrap_err();
        assert_eq!(
            err,
            EvalError::DivisionByZero {
                expr: "1/x0".into(),
                point: [0.0, 1.0, 1.0, 1.0]
            }
        );
        assert!(p("x0^-1").eval(&ORIGIN).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = p("exp(-x1)").differentiate(1);
        assert_eq!(d.to_string(), "-exp(-x1)");
        assert!(p("x1").differentiate(0).is_zero());
        let cube = p("x2^3");
        let pt = [0.0, 0.0, 2.0, 0.0];
        let exact = cube.differentiate(2).eval(&pt).unwrap();
        assert_eq!(exact.re, 12.0);
        let fd = central_difference(&cube, 2, &pt, 1e-5).unwrap();
        assert!((exact - fd).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn constant_folding_and_absorption() {
        assert_eq!(Expr::constant(2) * Expr::ratio(1, 2), Expr::one());
        assert_eq!(p("x1") * Expr::zero(), Expr::zero());
        assert_eq!(p("x1") + Expr::zero(), p("x1"));
        assert_eq!(-(-p("x1")), p("x1"));
        assert!(p("3*x0 + sin(x2)").differentiate(1).is_zero());
    }

    #[test]
    fn conjugation_flips_imaginary_unit() {
        let e = p("exp(i*x1) + 2*i");
        let pt = [0.0, 0.7, 0.0, 0.0];
        assert!(close(e.conj().eval(&pt).unwrap(), e.eval(&pt).unwrap().conj(), 1e-15));
    }

    #[test]
    fn printing_examples() {
        assert_eq!(p("x1 - (x2 - x3)").to_string(), "x1 - (x2 - x3)");
        assert_eq!(p("-(x1*x2)").to_string(), "-(x1*x2)");
        assert_eq!(p("(-x1)^2").to_string(), "(-x1)^2");
        assert_eq!(p("x1/(x2*x3)").to_string(), "x1/(x2*x3)");
        assert_eq!(Expr::ratio(-1, 3).to_string(), "-1/3");
        assert_eq!((p("x1") * Expr::ratio(1, 3)).to_string(), "x1*(1/3)");
        assert_eq!(Expr::pow(Expr::ratio(1, 3), 1).to_string(), "1/3");
        assert_eq!(Expr::Pow(Arc::new(Expr::ratio(1, 3)), 2).to_string(), "(1/3)^2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn derivative_matches_central_difference(e in strategies::expr(), pt in strategies::point(), k in 0usize..4) {
            let exact = e.differentiate(k).eval(&pt).unwrap();
            let fd = central_difference(&e, k, &pt, 1e-5).unwrap();
            prop_assume!(exact.norm().is_finite());
            prop_assert!((exact - fd).norm() <= 1e-5 * (1.0 + exact.norm()),
                "{e}: d/dx{k} = {exact} vs {fd}");
        }

        #[test]
        fn print_then_parse_is_numerically_exact(e in strategies::expr(), pt in strategies::point()) {
            let reparsed = parse_expr(&e.to_string()).unwrap();
            let a = e.eval(&pt).unwrap();
            let b = reparsed.eval(&pt).unwrap();
            prop_assert!(a == b, "{e}: {a} vs {b}");
        }

        #[test]
        fn differentiation_is_linear(a in strategies::expr(), b in strategies::expr(), pt in strategies::point(), k in 0usize..4) {
            let whole = (a.clone() + b.clone()).differentiate(k).eval(&pt).unwrap();
            let parts = a.differentiate(k).eval(&pt).unwrap() + b.differentiate(k).eval(&pt).unwrap();
            prop_assert!((whole - parts).norm() <= 1e-12 * (1.0 + whole.norm()));
        }
    }
}
