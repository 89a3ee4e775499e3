//! Shared arbitrary-precision number aliases and parsing/formatting helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Exact integer square root test: returns `Some(s)` with `s*s == n` when `n`
/// is a perfect square, `None` otherwise.
pub fn perfect_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Squarefree part and square cofactor: `n = sf * c^2` with `sf` squarefree.
/// Trial division is fine for the small node/coefficient integers involved.
pub fn squarefree_split(n: &Int) -> (Int, Int) {
    assert!(n.is_positive(), "squarefree_split requires a positive input");
    let mut rest = n.clone();
    let mut sf = Int::from(1);
    let mut co = Int::from(1);
    let mut d = Int::from(2);
    while &d * &d <= rest {
        let mut count = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        if count % 2 == 1 {
            sf *= &d;
        }
        for _ in 0..count / 2 {
            co *= &d;
        }
        d += 1;
    }
    sf *= &rest;
    (sf, co)
}

/// Serialize a rational as `num/den` with a positive reduced denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer into an exact rational.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num
        .parse()
        .map_err(|_| Error::parse(format!("bad rational numerator in {s:?}")))?;
    let den: Int = den
        .parse()
        .map_err(|_| Error::parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

pub fn int_from_str(s: &str) -> Result<Int> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad integer {s:?}")))
}

/// Exact decimal expansion with a fixed number of fractional digits,
/// rounding half away from zero. Used by the SVG renderer so output is
/// byte-stable.
pub fn decimal_fixed(r: &Rat, digits: u32) -> String {
    let pow = Int::from(10).pow(digits);
    let scaled = r * Rat::from_integer(pow.clone());
    let n = scaled.numer().abs();
    let d = scaled.denom().clone();
    let rounded_abs: Int = (n * 2 + &d) / (d * 2);
    let sign = if r.is_negative() && !rounded_abs.is_zero() {
        "-"
    } else {
        ""
    };
    let whole = &rounded_abs / &pow;
    let frac = &rounded_abs % &pow;
    format!("{sign}{whole}.{frac:0width$}", width = digits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_sqrt_detects_squares() {
        assert_eq!(perfect_sqrt(&int(36)), Some(int(6)));
        assert_eq!(perfect_sqrt(&int(35)), None);
        assert_eq!(perfect_sqrt(&int(0)), Some(int(0)));
        assert_eq!(perfect_sqrt(&int(-4)), None);
    }

    #[test]
    fn squarefree_split_works() {
        let (sf, co) = squarefree_split(&int(18));
        assert_eq!((sf, co), (int(2), int(3)));
        let (sf, co) = squarefree_split(&int(1));
        assert_eq!((sf, co), (int(1), int(1)));
        let (sf, co) = squarefree_split(&int(12));
        assert_eq!((sf, co), (int(3), int(2)));
    }

    #[test]
    fn rational_round_trip() {
        let r = ratio(-3, 6);
        let s = rat_to_string(&r);
        assert_eq!(s, "-1/2");
        assert_eq!(rat_from_str(&s).unwrap(), r);
        assert_eq!(rat_from_str("7").unwrap(), rat(7));
    }

    #[test]
    fn decimal_rendering_is_exact() {
        assert_eq!(decimal_fixed(&ratio(1, 2), 6), "0.500000");
        assert_eq!(decimal_fixed(&ratio(-1, 3), 6), "-0.333333");
        assert_eq!(decimal_fixed(&ratio(2, 3), 6), "0.666667");
        assert_eq!(decimal_fixed(&rat(5), 6), "5.000000");
        assert_eq!(decimal_fixed(&ratio(-5, 2), 1), "-2.5");
    }
}
