//! The ten-element weight set and its Boolean-type product.
//!
//! A weight is either the absorbing zero or a product of at most one factor
//! per parameter axis, each factor being `b` or `1-b`. The parameters are
//! kept symbolic: two weights are equal only if they have the same factors,
//! whatever numeric values the parameters later take.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};

/// The factor contributed by one parameter axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    Absent,
    /// `b`
    Plain,
    /// `1 - b`
    Complement,
}

impl Factor {
    fn combine(self, other: Factor) -> Option<Factor> {
        match (self, other) {
            (Factor::Absent, f) | (f, Factor::Absent) => Some(f),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    fn eval(self, b: f64) -> f64 {
        match self {
            Factor::Absent => 1.0,
            Factor::Plain => b,
            Factor::Complement => 1.0 - b,
        }
    }

    /// Coefficients of `1` and `b` in the expansion of the factor.
    fn coefficients(self) -> [i64; 2] {
        match self {
            Factor::Absent => [1, 0],
            Factor::Plain => [0, 1],
            Factor::Complement => [1, -1],
        }
    }
}

/// An element of the weight set `{0, 1, b1, b2, 1-b1, 1-b2, b1 b2,
/// b1(1-b2), (1-b1)b2, (1-b1)(1-b2)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    zero: bool,
    b1: Factor,
    b2: Factor,
}

impl Weight {
    pub const ZERO: Weight = Weight { zero: true, b1: Factor::Absent, b2: Factor::Absent };
    pub const ONE: Weight = Weight::factors(Factor::Absent, Factor::Absent);
    pub const B1: Weight = Weight::factors(Factor::Plain, Factor::Absent);
    pub const ONE_MINUS_B1: Weight = Weight::factors(Factor::Complement, Factor::Absent);
    pub const B2: Weight = Weight::factors(Factor::Absent, Factor::Plain);
    pub const ONE_MINUS_B2: Weight = Weight::factors(Factor::Absent, Factor::Complement);

    /// Every representable weight, in a fixed order.
    pub const ALL: [Weight; 10] = [
        Weight::ZERO,
        Weight::ONE,
        Weight::B1,
        Weight::B2,
        Weight::ONE_MINUS_B1,
        Weight::ONE_MINUS_B2,
        Weight::factors(Factor::Plain, Factor::Plain),
        Weight::factors(Factor::Plain, Factor::Complement),
        Weight::factors(Factor::Complement, Factor::Plain),
        Weight::factors(Factor::Complement, Factor::Complement),
    ];

    /// The nonzero weight with the given axis factors.
    pub const fn factors(b1: Factor, b2: Factor) -> Weight {
        Weight { zero: false, b1, b2 }
    }

    pub fn is_zero(self) -> bool {
        self.zero
    }

    /// Axis factors, or `None` for the zero element.
    pub fn axis_factors(self) -> Option<(Factor, Factor)> {
        (!self.zero).then_some((self.b1, self.b2))
    }

    /// Number of factors; the weights with at most one factor form the
    /// single-color weight set.
    pub fn factor_count(self) -> usize {
        [self.b1, self.b2].iter().filter(|f| **f != Factor::Absent).count()
    }

    /// Whether the two weights have a factor in common.
    pub fn shares_factor(self, other: Weight) -> bool {
        (self.b1 != Factor::Absent && self.b1 == other.b1)
            || (self.b2 != Factor::Absent && self.b2 == other.b2)
    }

    /// The Boolean-type product: factor sets are merged, a repeated factor
    /// counts once, and `b` next to `1-b` on either axis annihilates.
    pub fn star(self, other: Weight) -> Weight {
        if self.zero || other.zero {
            return Weight::ZERO;
        }
        match (self.b1.combine(other.b1), self.b2.combine(other.b2)) {
            (Some(b1), Some(b2)) => Weight::factors(b1, b2),
            _ => Weight::ZERO,
        }
    }

    /// Numeric value at the given parameters.
    pub fn evaluate(self, b1: f64, b2: f64) -> Result<f64> {
        check_unit_interval("b1", b1)?;
        check_unit_interval("b2", b2)?;
        Ok(self.evaluate_unchecked(b1, b2))
    }

    pub(crate) fn evaluate_unchecked(self, b1: f64, b2: f64) -> f64 {
        if self.zero {
            0.0
        } else {
            self.b1.eval(b1) * self.b2.eval(b2)
        }
    }

    /// Integer coefficients of the expansion in the monomials
    /// `[1, b1, b2, b1*b2]`. Sums of weights can be compared exactly this way.
    pub fn expand(self) -> [i64; 4] {
        if self.zero {
            return [0; 4];
        }
        let [c0, c1] = self.b1.coefficients();
        let [d0, d1] = self.b2.coefficients();
        [c0 * d0, c1 * d0, c0 * d1, c1 * d1]
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::ONE
    }
}

/// Folds [`Weight::star`] over the list; the empty product is one.
pub fn star_product<I: IntoIterator<Item = Weight>>(ws: I) -> Weight {
    ws.into_iter().fold(Weight::ONE, Weight::star)
}

/// Sums weight expansions; used for exact symbolic identities.
pub fn expand_sum<I: IntoIterator<Item = Weight>>(ws: I) -> [i64; 4] {
    ws.into_iter().fold([0; 4], |mut acc, w| {
        for (a, c) in acc.iter_mut().zip(w.expand()) {
            *a += c;
        }
        acc
    })
}

fn factor_str(f: Factor, plain: &'static str, compl: &'static str) -> Option<&'static str> {
    match f {
        Factor::Absent => None,
        Factor::Plain => Some(plain),
        Factor::Complement => Some(compl),
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return f.write_str("0");
        }
        let a = factor_str(self.b1, "b1", "1-b1");
        let b = factor_str(self.b2, "b2", "1-b2");
        match (a, b) {
            (None, None) => f.write_str("1"),
            (Some(x), None) | (None, Some(x)) => f.write_str(x),
            (Some(x), Some(y)) => {
                let wrap = |s: &str| if s.contains('-') { format!("({s})") } else { s.to_string() };
                write!(f, "{}*{}", wrap(x), wrap(y))
            }
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Weight::ALL
            .into_iter()
            .find(|w| w.to_string() == s)
            .ok_or_else(|| Error::format(format!("not a weight: {s:?}")))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
