//! Exact rationals and elements of Q/Z.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Rational64;

/// Parses a reduced or unreduced fraction string such as `"1/2"`, `"3"` or `" -2/4 "`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let r = Rational::from_str(t).map_err(|_| format!("not a fraction: {s:?}"))?;
    Ok(r)
}

/// Parses a comma separated list of fractions, e.g. `"1/2,1/2,1"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

/// An element of Q/Z stored as `p/q` with `0 <= p < q` and `gcd(p, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ { num: 0, den: 1 }
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut p, mut q) = if den < 0 { (-num, -den) } else { (num, den) };
        p = p.mod_floor(&q);
        let g = p.gcd(&q);
        if g > 1 {
            p /= g;
            q /= g;
        }
        if p == 0 {
            q = 1;
        }
        QmodZ { num: p, den: q }
    }

    pub fn from_rational(r: &Rational) -> Self {
        QmodZ::new(*r.numer(), *r.denom())
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The representative in `[0, 1)`.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num, self.den)
    }

    /// Additive order of the element.
    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn scale(&self, k: i64) -> Self {
        QmodZ::new((self.num as i128 * k as i128 % self.den as i128) as i64, self.den)
    }
}

impl std::ops::Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        let l = self.den.lcm(&rhs.den);
        QmodZ::new(self.num * (l / self.den) + rhs.num * (l / rhs.den), l)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for QmodZ {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(|r| QmodZ::from_rational(&r))
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer part and fractional part in `[0, 1)`.
pub fn floor_frac(r: &Rational) -> (i64, Rational) {
    let fl = r.floor();
    (*fl.numer(), r - fl)
}

pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

pub fn is_unit_interval(r: &Rational) -> bool {
    r.is_positive() && *r <= Rational::one()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative() || r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qz_reduces() {
        assert_eq!(QmodZ::new(7, 6), QmodZ::new(1, 6));
        assert_eq!(QmodZ::new(-1, 2), QmodZ::new(1, 2));
        assert_eq!(QmodZ::new(3, 3), QmodZ::zero());
        assert_eq!(QmodZ::new(2, -4).to_string(), "1/2");
        assert_eq!(QmodZ::zero().to_string(), "0");
    }

    #[test]
    fn qz_sum() {
        let a: QmodZ = "1/3".parse().unwrap();
        let b: QmodZ = "1/2".parse().unwrap();
        assert_eq!((a + b).to_string(), "5/6");
        assert_eq!(QmodZ::new(1, 2) + QmodZ::new(1, 2), QmodZ::zero());
    }

    #[test]
    fn parse_list() {
        let v = parse_rational_list("1/2, 2/4,1").unwrap();
        assert_eq!(v, vec![Rational::new(1, 2), Rational::new(1, 2), Rational::one()]);
        assert!(parse_rational_list("1/0").is_err() || parse_rational("x").is_err());
    }

    proptest! {
        #[test]
        fn qz_canonical(p in -500i64..500, q in 1i64..60) {
            let x = QmodZ::new(p, q);
            prop_assert!(x.numer() >= 0 && x.numer() < x.denom());
            prop_assert_eq!(x.numer().gcd(&x.denom()), 1);
            let back: QmodZ = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
            prop_assert!(x.scale(x.order()).is_zero());
        }
    }
}
