//! Extended non-negative rationals `[0, ∞]`, the value domain of valuations.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("malformed value {0:?}: expected \"num/den\", an integer, or \"inf\"")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("negative value {0}")]
    Negative(String),
}

/// A value in `[0, ∞]` with exact rational finite part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtNonneg {
    Finite(BigRational),
    Infinite,
}

impl ExtNonneg {
    pub fn zero() -> Self {
        ExtNonneg::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: u64) -> Self {
        ExtNonneg::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`.
    ///
    /// # Panics
    /// If `den` is zero.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        ExtNonneg::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn try_from_rational(r: BigRational) -> Result<Self, ValueError> {
        if r.is_negative() {
            Err(ValueError::Negative(r.to_string()))
        } else {
            Ok(ExtNonneg::Finite(r))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNonneg::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNonneg::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtNonneg::Finite(r) => Some(r),
            ExtNonneg::Infinite => None,
        }
    }

    /// `self - other`, defined when `other <= self` and not `∞ - ∞`.
    /// `∞ - finite` is `∞`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (ExtNonneg::Infinite, ExtNonneg::Finite(_)) => Some(ExtNonneg::Infinite),
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) if a >= b => Some(ExtNonneg::Finite(a - b)),
            _ => None,
        }
    }

    /// Signed difference of two finite values; `None` if either is `∞`.
    pub fn finite_difference(&self, other: &Self) -> Option<BigRational> {
        Some(self.as_rational()? - other.as_rational()?)
    }

    /// Product of a finite value with a finite scalar.
    pub fn scale(&self, factor: &BigRational) -> Option<Self> {
        assert!(!factor.is_negative(), "negative scale factor");
        match self {
            ExtNonneg::Finite(r) => Some(ExtNonneg::Finite(r * factor)),
            ExtNonneg::Infinite => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self { other } else { self }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self { other } else { self }
    }
}

/// The way-below relation on `[0, ∞]`: `r ≪ s` iff `r = 0` or `r < s`.
pub fn way_below(r: &ExtNonneg, s: &ExtNonneg) -> bool {
    r.is_zero() || r < s
}

impl Default for ExtNonneg {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for ExtNonneg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNonneg {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => a.cmp(b),
            (ExtNonneg::Finite(_), ExtNonneg::Infinite) => Ordering::Less,
            (ExtNonneg::Infinite, ExtNonneg::Finite(_)) => Ordering::Greater,
            (ExtNonneg::Infinite, ExtNonneg::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: &ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite(a + b),
            _ => ExtNonneg::Infinite,
        }
    }
}

impl Add for ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite(a + b),
            _ => ExtNonneg::Infinite,
        }
    }
}

impl<'a> Sum<&'a ExtNonneg> for ExtNonneg {
    fn sum<I: Iterator<Item = &'a ExtNonneg>>(iter: I) -> Self {
        let mut acc = BigRational::zero();
        for v in iter {
            match v {
                ExtNonneg::Finite(r) => acc += r,
                ExtNonneg::Infinite => return ExtNonneg::Infinite,
            }
        }
        ExtNonneg::Finite(acc)
    }
}

impl Sum for ExtNonneg {
    fn sum<I: Iterator<Item = ExtNonneg>>(iter: I) -> Self {
        let mut acc = BigRational::zero();
        for v in iter {
            match v {
                ExtNonneg::Finite(r) => acc += r,
                ExtNonneg::Infinite => return ExtNonneg::Infinite,
            }
        }
        ExtNonneg::Finite(acc)
    }
}

impl From<BigRational> for ExtNonneg {
    /// # Panics
    /// On negative input.
    fn from(r: BigRational) -> Self {
        Self::try_from_rational(r).expect("negative rational")
    }
}

// "num/den" with a reduced fraction, integers without "/1", and "inf".
impl fmt::Display for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNonneg::Infinite => f.write_str("inf"),
            ExtNonneg::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtNonneg::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtNonneg {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(ExtNonneg::Infinite);
        }
        let malformed = || ValueError::Malformed(s.to_string());
        let parse_int = |p: &str| -> Result<BigInt, ValueError> {
            if p.is_empty() || !p.chars().enumerate().all(|(i, c)| c.is_ascii_digit() || (i == 0 && c == '-')) {
                return Err(malformed());
            }
            p.parse::<BigInt>().map_err(|_| malformed())
        };
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ValueError::ZeroDenominator(s.to_string()));
                }
                BigRational::new(num, den)
            }
            None => BigRational::from_integer(parse_int(t)?),
        };
        Self::try_from_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtNonneg {
        s.parse().unwrap()
    }

    #[test]
    fn way_below_rule() {
        assert!(way_below(&v("0"), &v("0")));
        assert!(!way_below(&v("1"), &v("1")));
        assert!(way_below(&v("3"), &v("inf")));
        assert!(!way_below(&v("inf"), &v("inf")));
        assert!(way_below(&v("1/2"), &v("1")));
    }

    #[test]
    fn parsing_and_printing() {
        assert_eq!(v("2/4").to_string(), "1/2");
        assert_eq!(v("6/3").to_string(), "2");
        assert_eq!(v("inf"), ExtNonneg::Infinite);
        assert_eq!(v(" 7 ").to_string(), "7");
        assert!(matches!("1/0".parse::<ExtNonneg>(), Err(ValueError::ZeroDenominator(_))));
        assert!(matches!("-1/2".parse::<ExtNonneg>(), Err(ValueError::Negative(_))));
        assert!(matches!("0.5".parse::<ExtNonneg>(), Err(ValueError::Malformed(_))));
        assert!(matches!("".parse::<ExtNonneg>(), Err(ValueError::Malformed(_))));
        assert!(matches!("1/+2".parse::<ExtNonneg>(), Err(ValueError::Malformed(_))));
    }

    #[test]
    fn arithmetic_with_infinity() {
        assert_eq!(&v("1/3") + &v("inf"), ExtNonneg::Infinite);
        assert_eq!(&v("1/3") + &v("1/6"), v("1/2"));
        assert_eq!(v("inf").checked_sub(&v("5")), Some(ExtNonneg::Infinite));
        assert_eq!(v("inf").checked_sub(&v("inf")), None);
        assert_eq!(v("1").checked_sub(&v("2")), None);
        assert!(v("100000") < v("inf"));
        let total: ExtNonneg = [v("1/2"), v("1/3"), v("1/6")].iter().sum();
        assert_eq!(total, ExtNonneg::one());
    }
}
