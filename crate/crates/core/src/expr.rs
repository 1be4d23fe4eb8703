//! A small arithmetic-expression language for integrands, densities and
//! parametrizations. Deliberately tiny: rational/decimal literals, the
//! constants pi and e, a fixed variable list, and a fixed function set.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};

pub const VARIABLES: &[&str] =
    &["x", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "r", "t", "theta"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Atan,
    Sinc,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "atan" => Func::Atan,
            "sinc" => Func::Sinc,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sinc => "sinc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Rational(Rat),
    Pi,
    E,
    Var(usize), // index into VARIABLES
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A fault raised while evaluating at a point outside the declared domain
/// (log/sqrt of a negative, division by zero). Quadrature drivers treat
/// faulted points as rejected.
#[derive(Debug, Clone)]
pub struct DomainFault {
    pub what: &'static str,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

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

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = Expr::Bin(BinOp::Add, Box::new(acc), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = Expr::Bin(BinOp::Sub, Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = Expr::Bin(BinOp::Mul, Box::new(acc), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = Expr::Bin(BinOp::Div, Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            let inner = self.parse_factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.parse_factor()?; // right-associative
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_ident(),
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn parse_number(&mut self) -> Result<Expr> {
        let int = self.parse_digits();
        // contiguous digits '/' digits is an exact rational literal;
        // anything else falls back to division at term level
        if self.pos + 1 < self.src.len()
            && self.src[self.pos] == b'/'
            && self.src[self.pos + 1].is_ascii_digit()
        {
            self.pos += 1;
            let den = self.parse_digits();
            let num: num::BigInt = int.parse().map_err(|_| Error::Parse {
                offset: self.pos,
                message: "bad numerator".into(),
            })?;
            let den: num::BigInt = den.parse().map_err(|_| Error::Parse {
                offset: self.pos,
                message: "bad denominator".into(),
            })?;
            if num::Zero::is_zero(&den) {
                return self.err("rational literal with zero denominator");
            }
            return Ok(Expr::Rational(Rat::new(num, den)));
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac = self.parse_digits();
            if frac.is_empty() {
                return self.err("expected digits after '.'");
            }
            let scale = num::BigInt::from(10u32).pow(frac.len() as u32);
            let whole: num::BigInt = int.parse().unwrap();
            let fpart: num::BigInt = frac.parse().unwrap();
            return Ok(Expr::Rational(
                Rat::from_integer(whole) + Rat::new(fpart, scale),
            ));
        }
        let n: num::BigInt = int.parse().unwrap();
        Ok(Expr::Rational(Rat::from_integer(n)))
    }

    fn parse_ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let func = match Func::from_name(&name) {
                Some(f) => f,
                None => {
                    self.pos = start;
                    return self.err(format!("unknown function {:?}", name));
                }
            };
            let arg = self.parse_expr()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        match name.as_str() {
            "pi" => Ok(Expr::Pi),
            "e" => Ok(Expr::E),
            _ => match VARIABLES.iter().position(|v| *v == name) {
                Some(i) => Ok(Expr::Var(i)),
                None => {
                    self.pos = start;
                    self.err(format!("unknown identifier {:?}", name))
                }
            },
        }
    }
}

/// Parses an expression; errors carry the byte offset.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::Parse { offset: p.pos, message: "trailing input".into() });
    }
    Ok(e)
}

/// Variable bindings by name.
pub type Bindings<'a> = &'a [(&'a str, f64)];

/// Evaluates in binary64; out-of-domain operations raise a fault.
pub fn evaluate(e: &Expr, bindings: Bindings<'_>) -> std::result::Result<f64, DomainFault> {
    let v = eval_inner(e, bindings)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DomainFault { what: "non-finite value" })
    }
}

fn eval_inner(e: &Expr, bindings: Bindings<'_>) -> std::result::Result<f64, DomainFault> {
    Ok(match e {
        Expr::Rational(r) => rat_to_f64(r),
        Expr::Pi => std::f64::consts::PI,
        Expr::E => std::f64::consts::E,
        Expr::Var(i) => {
            let name = VARIABLES[*i];
            bindings
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .ok_or(DomainFault { what: "unbound variable" })?
        }
        Expr::Neg(inner) => -eval_inner(inner, bindings)?,
        Expr::Bin(op, l, r) => {
            let a = eval_inner(l, bindings)?;
            let b = eval_inner(r, bindings)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(DomainFault { what: "division by zero" });
                    }
                    a / b
                }
                BinOp::Pow => {
                    let v = a.powf(b);
                    if v.is_nan() {
                        return Err(DomainFault { what: "invalid power" });
                    }
                    v
                }
            }
        }
        Expr::Call(f, arg) => {
            let x = eval_inner(arg, bindings)?;
            match f {
                Func::Abs => x.abs(),
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(DomainFault { what: "sqrt of a negative" });
                    }
                    x.sqrt()
                }
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(DomainFault { what: "log of a non-positive" });
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Atan => x.atan(),
                Func::Sinc => {
                    if x == 0.0 {
                        1.0
                    } else {
                        x.sin() / x
                    }
                }
            }
        }
    })
}

/// Free variables of the expression (indices into `VARIABLES`).
pub fn free_variables(e: &Expr) -> Vec<&'static str> {
    let mut seen = vec![false; VARIABLES.len()];
    fn walk(e: &Expr, seen: &mut [bool]) {
        match e {
            Expr::Var(i) => seen[*i] = true,
            Expr::Neg(inner) | Expr::Call(_, inner) => walk(inner, seen),
            Expr::Bin(_, l, r) => {
                walk(l, seen);
                walk(r, seen);
            }
            _ => {}
        }
    }
    walk(e, &mut seen);
    VARIABLES
        .iter()
        .zip(&seen)
        .filter(|(_, s)| **s)
        .map(|(v, _)| *v)
        .collect()
}

/// True when the expression is a polynomial in the given variable
/// (+, -, *, integer powers; other variables treated as constants only if
/// absent).
pub fn is_polynomial_in(e: &Expr, var: &str) -> bool {
    match e {
        Expr::Rational(_) | Expr::Pi | Expr::E => true,
        Expr::Var(i) => VARIABLES[*i] == var,
        Expr::Neg(inner) => is_polynomial_in(inner, var),
        Expr::Bin(BinOp::Add, l, r) | Expr::Bin(BinOp::Sub, l, r) | Expr::Bin(BinOp::Mul, l, r) => {
            is_polynomial_in(l, var) && is_polynomial_in(r, var)
        }
        Expr::Bin(BinOp::Pow, l, r) => {
            is_polynomial_in(l, var)
                && matches!(&**r, Expr::Rational(k) if k.is_integer() && !num::Signed::is_negative(k))
        }
        _ => false,
    }
}

/// Symbolic derivative for the polynomial subset.
pub fn poly_derivative(e: &Expr, var: &str) -> Option<Expr> {
    if !is_polynomial_in(e, var) {
        return None;
    }
    Some(derive(e, var))
}

fn derive(e: &Expr, var: &str) -> Expr {
    match e {
        Expr::Rational(_) | Expr::Pi | Expr::E => Expr::Rational(Rat::default()),
        Expr::Var(i) => {
            if VARIABLES[*i] == var {
                Expr::Rational(Rat::from_integer(1.into()))
            } else {
                Expr::Rational(Rat::default())
            }
        }
        Expr::Neg(inner) => Expr::Neg(Box::new(derive(inner, var))),
        Expr::Bin(BinOp::Add, l, r) => {
            Expr::Bin(BinOp::Add, Box::new(derive(l, var)), Box::new(derive(r, var)))
        }
        Expr::Bin(BinOp::Sub, l, r) => {
            Expr::Bin(BinOp::Sub, Box::new(derive(l, var)), Box::new(derive(r, var)))
        }
        Expr::Bin(BinOp::Mul, l, r) => Expr::Bin(
            BinOp::Add,
            Box::new(Expr::Bin(BinOp::Mul, Box::new(derive(l, var)), r.clone())),
            Box::new(Expr::Bin(BinOp::Mul, l.clone(), Box::new(derive(r, var)))),
        ),
        Expr::Bin(BinOp::Pow, base, k) => {
            let Expr::Rational(kr) = &**k else { unreachable!("polynomial check") };
            if num::Zero::is_zero(kr) {
                return Expr::Rational(Rat::default());
            }
            let km1 = Expr::Rational(kr - Rat::from_integer(1.into()));
            Expr::Bin(
                BinOp::Mul,
                Box::new(Expr::Rational(kr.clone())),
                Box::new(Expr::Bin(
                    BinOp::Mul,
                    Box::new(Expr::Bin(BinOp::Pow, base.clone(), Box::new(km1))),
                    Box::new(derive(base, var)),
                )),
            )
        }
        _ => unreachable!("polynomial check"),
    }
}

/// Crude sup bound of `|e|` over `var in [lo, hi]` for the polynomial
/// subset: triangle inequality with the endpoint maximum per power.
pub fn poly_abs_bound(e: &Expr, var: &str, lo: f64, hi: f64) -> Option<f64> {
    let m = lo.abs().max(hi.abs());
    fn bound(e: &Expr, var: &str, m: f64) -> Option<f64> {
        Some(match e {
            Expr::Rational(r) => rat_to_f64(r).abs(),
            Expr::Pi => std::f64::consts::PI,
            Expr::E => std::f64::consts::E,
            Expr::Var(i) => {
                if VARIABLES[*i] == var {
                    m
                } else {
                    return None;
                }
            }
            Expr::Neg(inner) => bound(inner, var, m)?,
            Expr::Bin(BinOp::Add, l, r) | Expr::Bin(BinOp::Sub, l, r) => {
                bound(l, var, m)? + bound(r, var, m)?
            }
            Expr::Bin(BinOp::Mul, l, r) => bound(l, var, m)? * bound(r, var, m)?,
            Expr::Bin(BinOp::Pow, l, k) => {
                let Expr::Rational(kr) = &**k else { return None };
                let kk = num::ToPrimitive::to_i32(&kr.to_integer())?;
                bound(l, var, m)?.powi(kk)
            }
            _ => return None,
        })
    }
    bound(e, var, m)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add, ..) | Expr::Bin(BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul, ..) | Expr::Bin(BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if precedence(e) < min_prec {
                write!(f, "(")?;
                write!(f, "{}", e)?;
                write!(f, ")")
            } else {
                write!(f, "{}", e)
            }
        }
        match self {
            Expr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::Var(i) => write!(f, "{}", VARIABLES[*i]),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                child(f, inner, 3)
            }
            Expr::Bin(op, l, r) => {
                let (sym, prec, right_tight) = match op {
                    BinOp::Add => ("+", 1, false),
                    BinOp::Sub => ("-", 1, false),
                    BinOp::Mul => ("*", 2, false),
                    BinOp::Div => ("/", 2, false),
                    BinOp::Pow => ("^", 4, true),
                };
                if *op == BinOp::Pow {
                    // left operand must be an atom; right side re-enters at
                    // factor level
                    child(f, l, 5)?;
                    write!(f, "{}", sym)?;
                    child(f, r, 3)
                } else {
                    child(f, l, prec)?;
                    write!(f, " {} ", sym)?;
                    // left-assoc: the right child needs strictly higher prec
                    child(f, r, prec + if right_tight { 0 } else { 1 })
                }
            }
            Expr::Call(func, arg) => write!(f, "{}({})", func.name(), arg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ev(src: &str, bindings: Bindings<'_>) -> f64 {
        evaluate(&parse(src).unwrap(), bindings).unwrap()
    }

    #[test]
    fn parse_examples() {
        // sinc structure via sin(x)/x
        let e = parse("sin(x)/x").unwrap();
        assert!(matches!(e, Expr::Bin(BinOp::Div, ..)));
        // exact rational literal inside an AST
        let e = parse("x^2 + 3/4").unwrap();
        match &e {
            Expr::Bin(BinOp::Add, _, r) => {
                assert_eq!(**r, Expr::Rational(rat(3, 4)));
            }
            other => panic!("unexpected {:?}", other),
        }
        // error with offset
        match parse("sin(") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
        match parse("foo + 1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ev("pi/2", &[]), std::f64::consts::FRAC_PI_2);
        assert_eq!(ev("abs(-2)^3", &[]), 8.0);
        assert!(evaluate(&parse("log(0)").unwrap(), &[]).is_err());
        assert_eq!(ev("x^2 + 3/4", &[("x", 2.0)]), 4.75);
        assert_eq!(ev("sinc(0)", &[]), 1.0);
        assert_eq!(ev("2^3^2", &[]), 512.0); // right-associative
        assert_eq!(ev("-x^2", &[("x", 3.0)]), -9.0); // -(x^2)
        assert_eq!(ev("1/2", &[]), 0.5);
        assert_eq!(ev("1 / 2", &[]), 0.5);
    }

    #[test]
    fn domain_faults() {
        assert!(evaluate(&parse("sqrt(0-1)").unwrap(), &[]).is_err());
        assert!(evaluate(&parse("1/x").unwrap(), &[("x", 0.0)]).is_err());
        assert!(evaluate(&parse("x").unwrap(), &[]).is_err()); // unbound
    }

    #[test]
    fn free_vars_and_polynomials() {
        let e = parse("x^2*t + 1").unwrap();
        assert_eq!(free_variables(&e), vec!["x", "t"]);
        assert!(is_polynomial_in(&parse("3*x^2 - x + 1/2").unwrap(), "x"));
        assert!(!is_polynomial_in(&parse("sin(x)").unwrap(), "x"));
        assert!(!is_polynomial_in(&parse("x^(0-1)").unwrap(), "x"));
    }

    #[test]
    fn poly_lipschitz_bound_is_valid() {
        // p = 3x^2 - x: p' = 6x - 1, sup over [0,2] of |p'| = 11; the bound
        // may overshoot but never undershoot.
        let e = parse("3*x^2 - x").unwrap();
        let d = poly_derivative(&e, "x").unwrap();
        let b = poly_abs_bound(&d, "x", 0.0, 2.0).unwrap();
        assert!(b >= 11.0);
        for i in 0..=100 {
            let x = 2.0 * i as f64 / 100.0;
            let slope = evaluate(&d, &[("x", x)]).unwrap();
            assert!(slope.abs() <= b + 1e-12);
        }
    }

    #[test]
    fn display_round_trip_fixed_cases() {
        for src in [
            "x^2 + 3/4",
            "sin(x)/x",
            "-x^2",
            "2^3^2",
            "(x + 1)*(x - 1)",
            "abs(-2)^3",
            "1/2*x",
            "exp(-(x^2))",
            "pi*e",
        ] {
            let e = parse(src).unwrap();
            let printed = format!("{}", e);
            let reparsed = parse(&printed).unwrap_or_else(|err| {
                panic!("failed to reparse {:?} printed as {:?}: {}", src, printed, err)
            });
            assert_eq!(e, reparsed, "source {:?} printed {:?}", src, printed);
        }
    }
}
