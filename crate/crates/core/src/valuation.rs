//! Exact rational valuations with lower-bound semantics.
//!
//! Valuations are normalized so that v(p) = 1. A value is either known
//! exactly, known only as a lower bound (the representative hit the
//! precision floor p^N), or exactly +infinity (a structural zero).

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

/// Shorthand for building an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// The valuation is exactly this rational.
    Exact(Rational),
    /// The true valuation is >= this rational; the exact value is lost
    /// below the precision floor.
    AtLeast(Rational),
    /// Exactly +infinity (structurally zero input).
    Infinite,
}

impl Valuation {
    pub fn exact_int(k: i64) -> Self {
        Valuation::Exact(Rational::from_integer(k))
    }

    pub fn at_least_int(k: i64) -> Self {
        Valuation::AtLeast(Rational::from_integer(k))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Valuation::Exact(_) | Valuation::Infinite)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The exact finite value, or an error when only a bound is known or
    /// the value is infinite.
    pub fn finite_exact(&self) -> Result<Rational> {
        match self {
            Valuation::Exact(r) => Ok(*r),
            Valuation::AtLeast(r) => Err(Error::IndeterminatePrecision(format!(
                "valuation only known to be >= {r}"
            ))),
            Valuation::Infinite => Err(Error::IndeterminatePrecision(
                "valuation is infinite".into(),
            )),
        }
    }

    /// Best known lower bound (the value itself when exact).
    pub fn lower_bound(&self) -> Option<Rational> {
        match self {
            Valuation::Exact(r) | Valuation::AtLeast(r) => Some(*r),
            Valuation::Infinite => None,
        }
    }

    /// Valuation of a product: bounds propagate pessimistically.
    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Infinite, _) | (_, Valuation::Infinite) => Valuation::Infinite,
            (Valuation::Exact(a), Valuation::Exact(b)) => Valuation::Exact(a + b),
            (a, b) => {
                let (x, y) = (a.lower_bound().unwrap(), b.lower_bound().unwrap());
                Valuation::AtLeast(x + y)
            }
        }
    }

    /// Decides `self >= bound` when possible.
    pub fn definitely_ge(&self, bound: Rational) -> Option<bool> {
        match self {
            Valuation::Infinite => Some(true),
            Valuation::Exact(r) => Some(*r >= bound),
            Valuation::AtLeast(r) => {
                if *r >= bound {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// Decides `self > bound` when possible.
    pub fn definitely_gt(&self, bound: Rational) -> Option<bool> {
        match self {
            Valuation::Infinite => Some(true),
            Valuation::Exact(r) => Some(*r > bound),
            Valuation::AtLeast(r) => {
                if *r > bound {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// Compares two valuations when the comparison is decidable.
    pub fn try_cmp(&self, other: &Valuation) -> Option<Ordering> {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Some(Ordering::Equal),
            (Valuation::Infinite, _) => Some(Ordering::Greater),
            (_, Valuation::Infinite) => Some(Ordering::Less),
            (Valuation::Exact(a), Valuation::Exact(b)) => Some(a.cmp(b)),
            (Valuation::AtLeast(a), Valuation::Exact(b)) if *a > *b => Some(Ordering::Greater),
            (Valuation::Exact(a), Valuation::AtLeast(b)) if *b > *a => Some(Ordering::Less),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(r) => write!(f, "{r}"),
            Valuation::AtLeast(r) => write!(f, ">= {r}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Valuation", 3)?;
        match self {
            Valuation::Exact(r) => {
                s.serialize_field("num", r.numer())?;
                s.serialize_field("den", r.denom())?;
                s.serialize_field("exact", &true)?;
            }
            Valuation::AtLeast(r) => {
                s.serialize_field("num", r.numer())?;
                s.serialize_field("den", r.denom())?;
                s.serialize_field("exact", &false)?;
            }
            Valuation::Infinite => {
                s.serialize_field("num", "inf")?;
                s.serialize_field("den", &1i64)?;
                s.serialize_field("exact", &true)?;
            }
        }
        s.end()
    }
}

/// Serialization helper for plain exact rationals in reports.
pub fn serialize_rational<S: Serializer>(
    r: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut s = serializer.serialize_struct("Rational", 2)?;
    s.serialize_field("num", r.numer())?;
    s.serialize_field("den", r.denom())?;
    s.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_bounds() {
        let half = Valuation::Exact(rat(1, 2));
        let floor = Valuation::AtLeast(rat(4, 1));
        assert_eq!(half.try_cmp(&floor), Some(Ordering::Less));
        assert_eq!(floor.try_cmp(&half), Some(Ordering::Greater));
        assert_eq!(floor.try_cmp(&Valuation::Exact(rat(5, 1))), None);
        assert_eq!(Valuation::Infinite.try_cmp(&floor), Some(Ordering::Greater));
        assert_eq!(half.definitely_gt(rat(1, 3)), Some(true));
        assert_eq!(floor.definitely_ge(rat(2, 1)), Some(true));
        assert_eq!(floor.definitely_ge(rat(5, 1)), None);
    }

    #[test]
    fn product_rule_propagates_bounds() {
        let a = Valuation::Exact(rat(3, 2));
        let b = Valuation::AtLeast(rat(4, 1));
        assert_eq!(a.add(&b), Valuation::AtLeast(rat(11, 2)));
        assert_eq!(a.add(&Valuation::Infinite), Valuation::Infinite);
        assert_eq!(a.add(&a), Valuation::Exact(rat(3, 1)));
    }

    #[test]
    fn finite_exact_rejects_bounds() {
        assert!(Valuation::Exact(rat(1, 8)).finite_exact().is_ok());
        assert!(Valuation::AtLeast(rat(8, 1)).finite_exact().is_err());
        assert!(Valuation::Infinite.finite_exact().is_err());
    }
}
