//! Exact rationals extended with `+∞`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = Ratio<i128>;

/// A rational number or `+∞`; finite values are always in lowest terms.
///
/// Arithmetic panics on the undefined forms `∞ − ∞`, `0 · ∞`, `x / 0` and any
/// operation producing `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XRational {
    Finite(Q),
    Infinity,
}

impl XRational {
    pub const ZERO: XRational = XRational::Finite(Ratio::new_raw(0, 1));
    pub const ONE: XRational = XRational::Finite(Ratio::new_raw(1, 1));

    /// `p/q`, with the convention `0/0 = 0`.
    ///
    /// # Panics
    /// If `q == 0` and `p != 0`.
    pub fn new(p: i128, q: i128) -> Self {
        if p == 0 && q == 0 {
            return Self::ZERO;
        }
        assert!(q != 0, "XRational::new with zero denominator");
        XRational::Finite(Ratio::new(p, q))
    }

    /// Ratio of counts under `0/0 = 0`.
    pub fn ratio(p: usize, q: usize) -> Self {
        Self::new(p as i128, q as i128)
    }

    pub fn int(p: i128) -> Self {
        XRational::Finite(Ratio::from_integer(p))
    }

    pub fn infinity() -> Self {
        XRational::Infinity
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, XRational::Infinity)
    }

    pub fn finite(&self) -> Option<Q> {
        match *self {
            XRational::Finite(q) => Some(q),
            XRational::Infinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XRational::Finite(q) if q.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, XRational::Finite(q) if q.is_negative())
    }

    pub fn numer(&self) -> Option<i128> {
        self.finite().map(|q| *q.numer())
    }

    pub fn denom(&self) -> Option<i128> {
        self.finite().map(|q| *q.denom())
    }

    /// `1/x`, with `1/∞ = 0`.
    ///
    /// # Panics
    /// On zero.
    pub fn recip(&self) -> Self {
        match *self {
            XRational::Infinity => Self::ZERO,
            XRational::Finite(q) => {
                assert!(!q.is_zero(), "reciprocal of zero");
                XRational::Finite(q.recip())
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            XRational::Infinity => f64::INFINITY,
            XRational::Finite(q) => *q.numer() as f64 / *q.denom() as f64,
        }
    }
}

impl From<Q> for XRational {
    fn from(q: Q) -> Self {
        XRational::Finite(q)
    }
}

impl From<i128> for XRational {
    fn from(p: i128) -> Self {
        XRational::int(p)
    }
}

impl Default for XRational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for XRational {
    type Output = XRational;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (XRational::Finite(a), XRational::Finite(b)) => XRational::Finite(a + b),
            _ => XRational::Infinity,
        }
    }
}

impl Sub for XRational {
    type Output = XRational;
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (XRational::Finite(a), XRational::Finite(b)) => XRational::Finite(a - b),
            (XRational::Infinity, XRational::Finite(_)) => XRational::Infinity,
            _ => panic!("subtracting infinity"),
        }
    }
}

impl Neg for XRational {
    type Output = XRational;
    fn neg(self) -> Self {
        match self {
            XRational::Finite(a) => XRational::Finite(-a),
            XRational::Infinity => panic!("negating infinity"),
        }
    }
}

impl Mul for XRational {
    type Output = XRational;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (XRational::Finite(a), XRational::Finite(b)) => XRational::Finite(a * b),
            (XRational::Finite(a), XRational::Infinity) | (XRational::Infinity, XRational::Finite(a)) => {
                assert!(a.is_positive(), "infinity times a non-positive value");
                XRational::Infinity
            }
            (XRational::Infinity, XRational::Infinity) => XRational::Infinity,
        }
    }
}

impl Div for XRational {
    type Output = XRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl fmt::Display for XRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRational::Infinity => f.write_str("inf"),
            XRational::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an extended rational")]
pub struct ParseXRationalError(String);

impl FromStr for XRational {
    type Err = ParseXRationalError;

    /// Accepts `inf`, `p/q` and plain integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseXRationalError(s.to_string());
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(XRational::Infinity);
        }
        match t.split_once('/') {
            Some((p, q)) => {
                let p: i128 = p.trim().parse().map_err(|_| bad())?;
                let q: i128 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 && p != 0 {
                    return Err(bad());
                }
                Ok(XRational::new(p, q))
            }
            None => t.parse::<i128>().map(XRational::int).map_err(|_| bad()),
        }
    }
}

impl Serialize for XRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for XRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_zero_convention() {
        let x = XRational::new(6, -4);
        assert_eq!(x.numer(), Some(-3));
        assert_eq!(x.denom(), Some(2));
        assert_eq!(XRational::new(0, 0), XRational::ZERO);
        assert_eq!(XRational::ratio(0, 0).to_string(), "0/1");
    }

    #[test]
    fn order_places_infinity_last() {
        let mut v = vec![
            XRational::Infinity,
            XRational::new(5, 2),
            XRational::new(-1, 3),
            XRational::new(7, 3),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                XRational::new(-1, 3),
                XRational::new(7, 3),
                XRational::new(5, 2),
                XRational::Infinity
            ]
        );
        assert!(XRational::new(1_000_000, 1) < XRational::Infinity);
    }

    #[test]
    fn arithmetic() {
        let a = XRational::new(3, 2);
        assert_eq!(XRational::int(2) - a.recip(), XRational::new(4, 3));
        assert_eq!(a * a, XRational::new(9, 4));
        assert_eq!(XRational::Infinity.recip(), XRational::ZERO);
        assert_eq!(a + XRational::Infinity, XRational::Infinity);
        assert_eq!(XRational::ONE / a, XRational::new(2, 3));
    }

    #[test]
    fn text_round_trip() {
        for s in ["3/2", "-7/3", "0/1", "inf", "4/1"] {
            let x: XRational = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("5".parse::<XRational>().unwrap(), XRational::int(5));
        assert!("1/0".parse::<XRational>().is_err());
        assert!("x".parse::<XRational>().is_err());
        let json = serde_json::to_string(&XRational::new(9, 5)).unwrap();
        assert_eq!(json, "\"9/5\"");
        let back: XRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, XRational::new(9, 5));
    }
}
