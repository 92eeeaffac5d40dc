//! Edge-weight functions `f: ℕ → (0, ∞)` for combs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A positive weight function on the naturals.
///
/// Text form (also the serde form):
///
/// | text                 | `f(n)`                          |
/// |----------------------|---------------------------------|
/// | `constant(c)`        | `c`                             |
/// | `poly(a0,a1,..)`     | `a0 + a1 n + a2 n² + ..`        |
/// | `rational(a..;b..)`  | `poly(a..) / poly(b..)`         |
/// | `log(s)`             | `ln(n + s)`, needs `s > 1`      |
/// | `expsqrt`            | `e^{√n}`                        |
/// | `geometric(r)`       | `rⁿ`                            |
/// | `invsquare`          | `1 / (n + 1)²`                  |
/// | `atan`               | `arctan(n + 1)`                 |
/// | `table(v0,v1,..)`    | `v_n`, undefined past the end   |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub enum WeightFunction<T: Scalar> {
    Constant(T),
    Polynomial(Vec<T>),
    Rational { num: Vec<T>, den: Vec<T> },
    LogShifted(T),
    ExpSqrt,
    Geometric(T),
    InverseSquare,
    Arctan,
    Table(Vec<T>),
}

fn horner<T: Scalar>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

impl<T: Scalar> WeightFunction<T> {
    /// Raw value at `n`; `None` only past the end of a table.
    pub fn eval(&self, n: usize) -> Option<T> {
        let x = T::from_count(n);
        Some(match self {
            Self::Constant(c) => *c,
            Self::Polynomial(a) => horner(a, x),
            Self::Rational { num, den } => horner(num, x) / horner(den, x),
            Self::LogShifted(s) => (x + *s).ln(),
            Self::ExpSqrt => x.sqrt().exp(),
            Self::Geometric(r) => r.powf(x),
            Self::InverseSquare => T::one() / ((x + T::one()) * (x + T::one())),
            Self::Arctan => (x + T::one()).atan(),
            Self::Table(v) => return v.get(n).copied(),
        })
    }

    /// Value at `n`, checked to be finite and positive.
    pub fn value(&self, n: usize) -> Result<T> {
        let v = self.eval(n).ok_or(Error::WeightUndefined(n))?;
        if v > T::zero() && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::WeightNotPositive(n))
        }
    }

    /// `f(n + k) / f(n)`, computed in closed form where the values themselves
    /// would overflow.
    pub fn ratio(&self, n: usize, k: usize) -> Result<T> {
        match self {
            Self::Constant(c) if *c > T::zero() => Ok(T::one()),
            Self::Geometric(r) if *r > T::zero() => Ok(r.powf(T::from_count(k))),
            Self::ExpSqrt => Ok((T::from_count(n + k).sqrt() - T::from_count(n).sqrt()).exp()),
            _ => Ok(self.value(n + k)? / self.value(n)?),
        }
    }

    /// Number of points in a table, `None` for closed-form kinds.
    pub fn domain_len(&self) -> Option<usize> {
        match self {
            Self::Table(v) => Some(v.len()),
            _ => None,
        }
    }
}

impl<T: Scalar> fmt::Display for WeightFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Self::Constant(c) => write!(f, "constant({c})"),
            Self::Polynomial(a) => write!(f, "poly({})", list(a)),
            Self::Rational { num, den } => write!(f, "rational({};{})", list(num), list(den)),
            Self::LogShifted(s) => write!(f, "log({s})"),
            Self::ExpSqrt => f.write_str("expsqrt"),
            Self::Geometric(r) => write!(f, "geometric({r})"),
            Self::InverseSquare => f.write_str("invsquare"),
            Self::Arctan => f.write_str("atan"),
            Self::Table(v) => write!(f, "table({})", list(v)),
        }
    }
}

impl<T: Scalar> FromStr for WeightFunction<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::WeightParse(s.to_string());
        let s_trim: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match s_trim.find('(') {
            Some(open) => {
                let inner = s_trim[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&s_trim[..open], Some(inner))
            }
            None => (s_trim.as_str(), None),
        };
        let nums = |text: &str| -> Result<Vec<T>> {
            text.split(',')
                .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()).map(T::lit).ok_or_else(bad))
                .collect()
        };
        let one = |text: Option<&str>| -> Result<T> {
            match nums(text.ok_or_else(bad)?)?.as_slice() {
                [x] => Ok(*x),
                _ => Err(bad()),
            }
        };
        let f = match (name, args) {
            ("constant", a) => {
                let c = one(a)?;
                if !(c > T::zero()) {
                    return Err(bad());
                }
                Self::Constant(c)
            }
            ("poly", Some(a)) => Self::Polynomial(nums(a)?),
            ("rational", Some(a)) => {
                let (num, den) = a.split_once(';').ok_or_else(bad)?;
                Self::Rational { num: nums(num)?, den: nums(den)? }
            }
            ("log", a) => {
                let shift = one(a)?;
                if !(shift > T::one()) {
                    return Err(bad());
                }
                Self::LogShifted(shift)
            }
            ("expsqrt", None) => Self::ExpSqrt,
            ("geometric", a) => {
                let r = one(a)?;
                if !(r > T::zero()) {
                    return Err(bad());
                }
                Self::Geometric(r)
            }
            ("invsquare", None) => Self::InverseSquare,
            ("atan", None) => Self::Arctan,
            ("table", Some(a)) => Self::Table(nums(a)?),
            _ => return Err(bad()),
        };
        Ok(f)
    }
}

impl<T: Scalar> TryFrom<String> for WeightFunction<T> {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl<T: Scalar> From<WeightFunction<T>> for String {
    fn from(f: WeightFunction<T>) -> Self {
        f.to_string()
    }
}
