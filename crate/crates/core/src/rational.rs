//! Exact rational scalars used by the step-function calculus.
//!
//! Everything in the exact layer (`steps1d`, `stepsnd`, determinant checks)
//! runs on arbitrary-precision rationals; floating point only enters in the
//! analysis layers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Exact conversion of a finite binary64 value.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for huge components.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

/// Parses "p/q", "p" or a decimal literal "a.b" exactly.
pub fn rat_parse(s: &str) -> Option<Rat> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((a, b)) = s.split_once('.') {
        let int: BigInt = if a.is_empty() { BigInt::zero() } else { a.parse().ok()? };
        if b.is_empty() {
            return Some(Rat::from_integer(int));
        }
        let frac: BigInt = b.parse().ok()?;
        let scale = BigInt::from(10u32).pow(b.len() as u32);
        let sign = if a.trim_start().starts_with('-') { -1 } else { 1 };
        return Some(
            Rat::from_integer(int)
                + Rat::new(frac, scale) * Rat::from_integer(BigInt::from(sign)),
        );
    }
    let n: BigInt = s.trim().parse().ok()?;
    Some(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(rat_parse("3/4").unwrap(), rat(3, 4));
        assert_eq!(rat_parse("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(rat_parse("5").unwrap(), rat_int(5));
        assert_eq!(rat_parse("0.25").unwrap(), rat(1, 4));
        assert_eq!(rat_parse("-1.5").unwrap(), rat(-3, 2));
        assert!(rat_parse("1/0").is_none());
    }

    #[test]
    fn f64_round_trip_is_exact() {
        let x = 0.1f64;
        let r = rat_from_f64(x).unwrap();
        assert_eq!(rat_to_f64(&r), x);
    }
}
