//! Points of the dense order `ℚ≥0`: exact nonnegative rationals with least
//! element `0` and no greatest element.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};

/// An exact nonnegative rational. The underlying ratio is always reduced, so
/// derived equality and hashing are semantic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Ratio<BigUint>);

impl Point {
    pub fn zero() -> Self {
        Point(Ratio::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        Point(Ratio::from_integer(BigUint::from(n)))
    }

    /// `numerator / denominator`, reduced. Fails when the denominator is zero.
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        Self::from_big(BigUint::from(numerator), BigUint::from(denominator))
    }

    fn from_big(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidValue {
                kind: "point",
                text: format!("{numerator}/0"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Point(Ratio::new(numerator, denominator)))
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The arithmetic mean of `a` and `b`; requires `a < b`.
    pub fn midpoint(a: &Point, b: &Point) -> Result<Point> {
        if a >= b {
            return Err(precondition("midpoint", format!("{a} is not below {b}")));
        }
        let two = Ratio::from_integer(BigUint::from(2u8));
        Ok(Point((&a.0 + &b.0) / two))
    }

    /// A point strictly above `self` (namely `self + 1`).
    pub fn above(&self) -> Point {
        Point(&self.0 + Ratio::one())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidValue {
            kind: "point",
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let text = s.trim();
        if text.starts_with('-') {
            return Err(bad("points are nonnegative"));
        }
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(num) || !digits(den) {
            return Err(bad("expected `p` or `p/q` with decimal digits"));
        }
        let num: BigUint = num.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigUint = den.parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Self::from_big(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn midpoint_examples() {
        assert_eq!(Point::midpoint(&p("0"), &p("1")).unwrap(), p("1/2"));
        assert_eq!(Point::midpoint(&p("1/3"), &p("1/2")).unwrap(), p("5/12"));
        assert!(matches!(
            Point::midpoint(&p("2"), &p("2")),
            Err(Error::Precondition { .. })
        ));
        assert!(Point::midpoint(&p("3"), &p("2")).is_err());
    }

    #[test]
    fn above_examples() {
        assert_eq!(p("0").above(), p("1"));
        assert_eq!(p("7/2").above(), p("9/2"));
        assert_eq!(p("1").above(), p("2"));
    }

    #[test]
    fn text_form() {
        assert_eq!(p("6/4").to_string(), "3/2");
        assert_eq!(p("4/2").to_string(), "2");
        assert_eq!(p("0/5").to_string(), "0");
        assert!("-1".parse::<Point>().is_err());
        assert!("1/0".parse::<Point>().is_err());
        assert!("x".parse::<Point>().is_err());
        assert!("1.5".parse::<Point>().is_err());
    }

    #[test]
    fn canonical_and_minimum() {
        assert_eq!(p("2/4"), p("1/2"));
        assert_eq!(p("2/4").numerator(), &BigUint::from(1u8));
        assert!(Point::zero() <= p("0/7"));
    }

    proptest! {
        #[test]
        fn density_and_unboundedness(an in 0u64..1000, ad in 1u64..50, bn in 0u64..1000, bd in 1u64..50) {
            let a = Point::new(an, ad).unwrap();
            let b = Point::new(bn, bd).unwrap();
            prop_assert!(a.above() > a);
            prop_assert!(Point::zero() <= a);
            if a < b {
                let m = Point::midpoint(&a, &b).unwrap();
                prop_assert!(a < m && m < b);
            }
            let parsed: Point = a.to_string().parse().unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
