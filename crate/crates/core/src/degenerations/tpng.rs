//! At `b1 = t`, `b2 = 1` the weight set collapses onto `{0, t, 1-t, 1}`, and
//! the Boolean-type product of level weights agrees with a modified minimum.

use std::fmt;

use crate::error::{check_unit_interval, Error, Result};
use crate::lmatrix::{level_weights, VertexKey, EXHAUSTIVE_MAX_COLORS};
use crate::report::VerificationReport;
use crate::weights::{Factor, Weight};

/// Elements of `{0, t, 1-t, 1}` with `t` symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TValue {
    Zero,
    T,
    OneMinusT,
    One,
}

impl TValue {
    pub const ALL: [TValue; 4] = [TValue::Zero, TValue::T, TValue::OneMinusT, TValue::One];

    pub fn evaluate(self, t: f64) -> f64 {
        match self {
            TValue::Zero => 0.0,
            TValue::T => t,
            TValue::OneMinusT => 1.0 - t,
            TValue::One => 1.0,
        }
    }

    // 0 below both of t, 1-t, which sit below 1
    fn rank(self) -> u8 {
        match self {
            TValue::Zero => 0,
            TValue::T | TValue::OneMinusT => 1,
            TValue::One => 2,
        }
    }
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TValue::Zero => "0",
            TValue::T => "t",
            TValue::OneMinusT => "1-t",
            TValue::One => "1",
        })
    }
}

/// Substitutes `b1 -> t`, `b2 -> 1`.
pub fn collapse(w: Weight) -> TValue {
    match w.axis_factors() {
        None => TValue::Zero,
        Some((_, Factor::Complement)) => TValue::Zero,
        Some((Factor::Plain, _)) => TValue::T,
        Some((Factor::Complement, _)) => TValue::OneMinusT,
        Some((Factor::Absent, _)) => TValue::One,
    }
}

/// Minimum under `0 < t, 1-t < 1`, except that `t` together with `1-t`
/// gives 0. The empty minimum is 1.
pub fn modified_min(values: &[TValue]) -> TValue {
    if values.contains(&TValue::T) && values.contains(&TValue::OneMinusT) {
        return TValue::Zero;
    }
    values.iter().copied().min_by_key(|v| v.rank()).unwrap_or(TValue::One)
}

/// For every `n`-color key, the collapsed product of level weights equals
/// the modified minimum of the collapsed level weights, and both evaluate
/// alike at each `t` of the grid.
pub fn verify_tpng_equivalence(n: usize, t_grid: &[f64]) -> Result<VerificationReport> {
    if n == 0 || n > EXHAUSTIVE_MAX_COLORS {
        return Err(Error::resource(format!("exhaustive enumeration needs 1 <= n <= {EXHAUSTIVE_MAX_COLORS}")));
    }
    for &t in t_grid {
        check_unit_interval("t", t)?;
    }
    let mut report = VerificationReport::new(format!("modified min n={n}"));
    for key in VertexKey::all(n) {
        let levels: Vec<Weight> = level_weights(&key).collect();
        let product = collapse(crate::weights::star_product(levels.iter().copied()));
        let collapsed: Vec<TValue> = levels.iter().map(|&w| collapse(w)).collect();
        let min = modified_min(&collapsed);
        report.check(product == min, || format!("key {key}: product {product} vs min {min}"));
        for &t in t_grid {
            let direct = crate::weights::star_product(levels.iter().copied()).evaluate_unchecked(t, 1.0);
            let err = (direct - min.evaluate(t)).abs();
            report.check_close(err, 1e-12, || format!("key {key} at t={t}: {direct} vs {}", min.evaluate(t)));
        }
    }
    Ok(report)
}
