use crate::error::{check_unit_interval, Error, Result};

fn check_point(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite() && x >= 0.0 && y >= 0.0) {
        return Err(Error::domain(format!("point ({x}, {y}) must be finite and nonnegative")));
    }
    Ok(())
}

/// Homogeneous limit shape `g(x, y) = lim h(nx, ny) / n` of the upright
/// model with step data.
///
/// For `b1 < b2` there is a rarefaction fan between the directions
/// `x/y = (1-b2)/(1-b1)` and `x/y = (1-b1)/(1-b2)`; for `b1 >= b2` the
/// shape is `max(y - x, 0)`. Branch tests are cross-multiplied so that
/// boundary points pick the branch whose value is exact there.
pub fn limit_shape_g(x: f64, y: f64, b1: f64, b2: f64) -> Result<f64> {
    check_point(x, y)?;
    check_unit_interval("b1", b1)?;
    check_unit_interval("b2", b2)?;
    if b1 >= b2 {
        return Ok((y - x).max(0.0));
    }
    let (c1, c2) = (1.0 - b1, 1.0 - b2);
    Ok(if x * c2 >= y * c1 {
        0.0
    } else if x * c1 <= y * c2 {
        y - x
    } else {
        let d = (y * c1).sqrt() - (x * c2).sqrt();
        d * d / (b2 - b1)
    })
}

/// Limit of `H^d(nx, ny) / n` for the discrete Hammersley process with
/// density `p`.
pub fn hammersley_limit(x: f64, y: f64, p: f64) -> Result<f64> {
    check_point(x, y)?;
    check_unit_interval("p", p)?;
    if p == 1.0 {
        return Err(Error::domain("p = 1 has no finite-slope limit formula"));
    }
    Ok(if p * y < x && p * x < y {
        (2.0 * (p * x * y).sqrt() - (x + y) * p) / (1.0 - p)
    } else {
        x.min(y)
    })
}
