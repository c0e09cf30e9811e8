//! Text front end: expressions, ODEs in normal form, and their printing.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! ode      := expr "=" expr
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | power
//! power    := atom ("^" exponent)*            right-associative
//! exponent := "-"? integer | "(" "-"? integer ")"
//! atom     := integer | "x" | "y" "'"* | "y^(" integer ")" | "t" | "u"
//!           | "(" expr ")" | ("exp" | "log") "(" expr ")"
//! ```
//!
//! Which atoms are legal depends on the [`Context`]: ODE right-hand sides are
//! rational in `x` and the jet of `y`; transformation expressions may use
//! `exp`/`log` but no derivatives; generator components live in `t, u`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::jetcore::display::{derivative_name, rat_to_string, ratfunc_to_string};
use crate::jetcore::{jet, JetPoly, Rat, RatFunc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    Ode,
    Transform,
    Generator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceExpr {
    Num(Rat),
    X,
    /// `y^(k)`; `Y(0)` is `y` itself.
    Y(usize),
    T,
    U,
    Neg(Box<SourceExpr>),
    Add(Box<SourceExpr>, Box<SourceExpr>),
    Sub(Box<SourceExpr>, Box<SourceExpr>),
    Mul(Box<SourceExpr>, Box<SourceExpr>),
    Div(Box<SourceExpr>, Box<SourceExpr>),
    Pow(Box<SourceExpr>, i64),
    Func(Func, Box<SourceExpr>),
}

impl SourceExpr {
    pub fn num(n: i64) -> Self {
        SourceExpr::Num(Rat::from_integer(n.into()))
    }

    /// Converts a rational expression in `x` and the jet of `y` to normal form.
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        use SourceExpr::*;
        Ok(match self {
            Num(r) => RatFunc::constant(r.clone()),
            X => RatFunc::var(crate::jetcore::X),
            Y(k) => RatFunc::var(jet(*k)),
            T | U => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "t and u are not coordinates of the ODE".into(),
                })
            }
            Neg(a) => -a.to_ratfunc()?,
            Add(a, b) => a.to_ratfunc()? + b.to_ratfunc()?,
            Sub(a, b) => a.to_ratfunc()? - b.to_ratfunc()?,
            Mul(a, b) => a.to_ratfunc()? * b.to_ratfunc()?,
            Div(a, b) => a.to_ratfunc()?.div(&b.to_ratfunc()?)?,
            Pow(a, e) => a.to_ratfunc()?.pow(*e as i32)?,
            Func(f, _) => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("{} is not rational", f.name()),
                })
            }
        })
    }

    fn precedence(&self) -> u8 {
        use SourceExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Pow(..) => 4,
            Num(r) if r.is_negative() || !r.is_integer() => 2,
            _ => 5,
        }
    }
}

impl fmt::Display for SourceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SourceExpr::*;
        let wrap = |e: &SourceExpr, min: u8| -> String {
            if e.precedence() < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            Num(r) => write!(f, "{}", rat_to_string(r)),
            X => write!(f, "x"),
            Y(k) => write!(f, "{}", derivative_name("y", *k)),
            T => write!(f, "t"),
            U => write!(f, "u"),
            Neg(a) => write!(f, "-{}", wrap(a, 3)),
            Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 3)),
            Pow(a, e) => {
                let base = match **a {
                    Y(k) if k > 0 => format!("({a})"),
                    _ => wrap(a, 5),
                };
                if *e < 0 {
                    write!(f, "{base}^({e})")
                } else {
                    write!(f, "{base}^{e}")
                }
            }
            Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Prime => "'".into(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Equals => "=".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'\'' => Tok::Prime,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Equals,
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", text[start..].chars().next().unwrap_or('?')),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: Context,
}

impl Parser {
    fn new(text: &str, ctx: Context) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            ctx,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{}', found '{}'", describe(&t), describe(found))),
                None => self.err(format!("expected '{}', found end of input", describe(&t))),
            }
        }
    }

    fn at_atom_start(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) if self.at_atom_start() => {
                self.err("implicit multiplication is not supported; write '*'")
            }
            Some(t) => self.err(format!("unexpected '{}'", describe(t))),
        }
    }

    fn expr(&mut self) -> Result<SourceExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = SourceExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = SourceExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<SourceExpr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = SourceExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = SourceExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ if self.at_atom_start() => {
                    return self.err("implicit multiplication is not supported; write '*'")
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<SourceExpr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(SourceExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SourceExpr> {
        let base = self.atom()?;
        let mut exps = Vec::new();
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            exps.push(self.exponent()?);
        }
        let Some(mut e) = exps.pop() else {
            return Ok(base);
        };
        while let Some(b) = exps.pop() {
            if !(0..=64).contains(&e) {
                return self.err("exponent tower too large");
            }
            e = match b.checked_pow(e as u32) {
                Some(v) if v.abs() <= 1024 => v,
                _ => return self.err("exponent too large"),
            };
        }
        if e.abs() > 1024 {
            return self.err("exponent too large");
        }
        Ok(SourceExpr::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.pos += 1;
        }
        let v = match self.bump() {
            Some(Tok::Int(n)) => n.to_i64().filter(|v| *v <= 1024),
            _ => {
                self.pos -= 1;
                return self.err("exponent must be an integer");
            }
        };
        let Some(v) = v else {
            self.pos -= 1;
            return self.err("exponent too large");
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<SourceExpr> {
        let start = self.pos;
        match self.bump() {
            Some(Tok::Int(n)) => Ok(SourceExpr::Num(Rat::from_integer(n))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" if self.ctx != Context::Generator => Ok(SourceExpr::X),
                "y" if self.ctx != Context::Generator => self.y_atom(start),
                "t" if self.ctx == Context::Generator => Ok(SourceExpr::T),
                "u" if self.ctx == Context::Generator => Ok(SourceExpr::U),
                "exp" | "log" => {
                    if self.ctx == Context::Ode {
                        self.pos = start;
                        return self.err(format!(
                            "{name} is not allowed in an ODE; the right-hand side must be rational"
                        ));
                    }
                    let func = if name == "exp" { Func::Exp } else { Func::Log };
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(SourceExpr::Func(func, Box::new(e)))
                }
                _ => {
                    self.pos = start;
                    self.err(format!("unknown symbol '{name}'"))
                }
            },
            Some(t) => {
                self.pos = start;
                self.err(format!("unexpected '{}'", describe(&t)))
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn y_atom(&mut self, start: usize) -> Result<SourceExpr> {
        let mut primes = 0usize;
        while self.peek() == Some(&Tok::Prime) {
            self.pos += 1;
            primes += 1;
        }
        let explicit = primes == 0
            && self.peek() == Some(&Tok::Caret)
            && self.peek_at(1) == Some(&Tok::LParen)
            && matches!(self.peek_at(2), Some(Tok::Int(_)))
            && self.peek_at(3) == Some(&Tok::RParen);
        let order = if explicit {
            self.pos += 2;
            let Some(Tok::Int(k)) = self.bump() else {
                unreachable!("checked above")
            };
            self.pos += 1;
            match k.to_usize() {
                Some(k) if k <= 64 => k,
                _ => {
                    self.pos -= 2;
                    return self.err("derivative order too large");
                }
            }
        } else {
            primes
        };
        if order > 0 && self.ctx == Context::Transform {
            self.pos = start;
            return self.err("derivatives are not allowed in a point transformation");
        }
        Ok(SourceExpr::Y(order))
    }
}

/// Parses a standalone expression in the given context.
pub fn parse_expr(text: &str, ctx: Context) -> Result<SourceExpr> {
    let mut p = Parser::new(text, ctx)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses `lhs = rhs` into its two sides.
pub fn parse_equation(text: &str, ctx: Context) -> Result<(SourceExpr, SourceExpr)> {
    let mut p = Parser::new(text, ctx)?;
    let lhs = p.expr()?;
    if p.peek() != Some(&Tok::Equals) {
        if p.at_atom_start() {
            return p.err("implicit multiplication is not supported; write '*'");
        }
        return p.err("expected '='");
    }
    p.pos += 1;
    let rhs = p.expr()?;
    p.finish()?;
    Ok((lhs, rhs))
}

/// A scalar ODE `y^(n) + f(x, y, ..., y^(n-1)) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSpec {
    n: usize,
    f: JetPoly,
}

impl OdeSpec {
    pub fn new(n: usize, f: RatFunc) -> Result<Self> {
        if n == 0 {
            return Err(Error::OrderTooLow(0));
        }
        let f = JetPoly::new(n - 1, f).map_err(|_| {
            Error::Contract(format!("right-hand side must not involve y^({n}) or higher"))
        })?;
        Ok(OdeSpec { n, f })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rhs(&self) -> &JetPoly {
        &self.f
    }
}

impl fmt::Display for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_ode(self))
    }
}

/// Reads an ODE and isolates its highest derivative.
pub fn parse_ode(text: &str) -> Result<OdeSpec> {
    let (lhs, rhs) = parse_equation(text, Context::Ode)?;
    let expr = &lhs.to_ratfunc()? - &rhs.to_ratfunc()?;
    let num = expr.num();
    let n = num.max_var().map_or(0, |v| v.saturating_sub(1));
    if n < 2 {
        return Err(Error::OrderTooLow(n));
    }
    if num.degree_in(jet(n)) != 1 {
        return Err(Error::NotQuasiLinear(n));
    }
    let coeffs = num.coeffs_in(jet(n));
    let rest = RatFunc::from_poly(coeffs[0].clone());
    let lead = RatFunc::from_poly(coeffs[1].clone());
    OdeSpec::new(n, rest.div(&lead)?)
}

/// Renders `y^(n) + f = 0` (or `y^(n) = 0`) in the input grammar.
pub fn print_ode(o: &OdeSpec) -> String {
    let head = derivative_name("y", o.n);
    let f = o.f.expr();
    if f.is_zero() {
        return format!("{head} = 0");
    }
    if f.is_polynomial() {
        let body = ratfunc_to_string(f);
        return match body.strip_prefix('-') {
            Some(rest) => format!("{head} - {rest} = 0"),
            None => format!("{head} + {body} = 0"),
        };
    }
    if f.num().leading_coeff().is_negative() {
        format!("{head} - {} = 0", ratfunc_to_string(&-f))
    } else {
        format!("{head} + {} = 0", ratfunc_to_string(f))
    }
}

/// Renders a rational function of `x` and the jet of `y`.
pub fn print_expr(r: &RatFunc) -> String {
    ratfunc_to_string(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcore::{int, rat, X};

    fn yj(k: usize) -> RatFunc {
        RatFunc::var(jet(k))
    }

    #[test]
    fn parse_ode_examples() {
        let o = parse_ode("y'' + (y')^2 = 0").unwrap();
        assert_eq!(o.order(), 2);
        assert_eq!(o.rhs().expr(), &(&yj(1) * &yj(1)));

        let o = parse_ode("x*y''' = y'").unwrap();
        assert_eq!(o.order(), 3);
        assert_eq!(o.rhs().expr(), &(-&yj(1)).div(&RatFunc::var(X)).unwrap());

        assert_eq!(parse_ode("(y'')^2 = y"), Err(Error::NotQuasiLinear(2)));
    }

    #[test]
    fn order_too_low() {
        assert_eq!(parse_ode("y' = y"), Err(Error::OrderTooLow(1)));
        assert_eq!(parse_ode("x = 1"), Err(Error::OrderTooLow(0)));
    }

    #[test]
    fn explicit_derivative_notation() {
        let a = parse_ode("y^(3) - y^(1) = 0").unwrap();
        let b = parse_ode("y''' - y' = 0").unwrap();
        assert_eq!(a, b);
        // y^2 is a power, y^(2) a derivative
        let c = parse_ode("y^(2) = y^2").unwrap();
        assert_eq!(c.rhs().expr(), &-&(&RatFunc::var(1) * &RatFunc::var(1)));
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2", Context::Ode).unwrap().to_ratfunc().unwrap();
        assert_eq!(e, -&(&RatFunc::var(X) * &RatFunc::var(X)));
        let e = parse_expr("2^3^2", Context::Ode).unwrap().to_ratfunc().unwrap();
        assert_eq!(e.as_constant(), Some(int(512)));
        let e = parse_expr("3/2*x", Context::Ode).unwrap().to_ratfunc().unwrap();
        assert_eq!(e, RatFunc::var(X).scale(&rat(3, 2)));
        let e = parse_expr("1 - 2 - 3", Context::Ode).unwrap().to_ratfunc().unwrap();
        assert_eq!(e.as_constant(), Some(int(-4)));
        let e = parse_expr("x^(-1)", Context::Ode).unwrap().to_ratfunc().unwrap();
        assert_eq!(e, RatFunc::var(X).inv().unwrap());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ode("y'' = 2x") {
            Err(Error::Syntax { pos, msg }) => {
                assert_eq!(pos, 7);
                assert!(msg.contains("implicit multiplication"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_ode("y'' = exp(y)"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_ode("y'' + = 0"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_ode("y'' + z = 0"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_ode("y'' + 1"), Err(Error::Syntax { pos: 7, .. })));
    }

    #[test]
    fn transform_context() {
        let e = parse_expr("exp(y)", Context::Transform).unwrap();
        assert_eq!(e, SourceExpr::Func(Func::Exp, Box::new(SourceExpr::Y(0))));
        assert!(parse_expr("y'", Context::Transform).is_err());
        assert!(parse_expr("t*u", Context::Generator).is_ok());
        assert!(parse_expr("x", Context::Generator).is_err());
    }

    #[test]
    fn print_examples() {
        let o = OdeSpec::new(2, RatFunc::zero()).unwrap();
        assert_eq!(print_ode(&o), "y'' = 0");
        let o = OdeSpec::new(2, &yj(1) * &yj(1)).unwrap();
        assert_eq!(print_ode(&o), "y'' + (y')^2 = 0");
        let o = parse_ode("x*y''' = y'").unwrap();
        assert_eq!(print_ode(&o), "y''' - y'/x = 0");
        assert_eq!(parse_ode(&print_ode(&o)).unwrap(), o);
    }

    #[test]
    fn source_expr_display_roundtrip() {
        for text in ["exp(y)", "y/x", "1/x", "exp(-x)*(y + 1)^2", "-(x - y)", "x^(-2)"] {
            let e = parse_expr(text, Context::Transform).unwrap();
            let again = parse_expr(&e.to_string(), Context::Transform).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
