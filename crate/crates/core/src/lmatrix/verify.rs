//! Exhaustive checks of the structural properties of the colored weights.

use rayon::prelude::*;

use super::color::{low_mask, project_word, ColorVector, Partition, VertexKey};
use super::ln_weight;
use crate::error::{check_unit_interval, Error, Result};
use crate::numeric::CompensatedSum;
use crate::report::VerificationReport;
use crate::weights::Weight;

/// Largest color count for which the `16^n` keys are enumerated.
pub const EXHAUSTIVE_MAX_COLORS: usize = 4;

/// Absolute tolerance of every numeric comparison.
pub const TOLERANCE: f64 = 1e-12;

/// `{0, 0.3, 0.7, 1}^2`, which already contains the corners `(0, 1)` and
/// `(1, 0)`.
pub fn default_grid() -> Vec<(f64, f64)> {
    const AXIS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];
    AXIS.iter().flat_map(|&b1| AXIS.iter().map(move |&b2| (b1, b2))).collect()
}

fn check_request(n: usize, grid: &[(f64, f64)]) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("color count must be positive"));
    }
    if n > EXHAUSTIVE_MAX_COLORS {
        return Err(Error::resource(format!(
            "exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_COLORS}, got {n}"
        )));
    }
    for &(b1, b2) in grid {
        check_unit_interval("b1", b1)?;
        check_unit_interval("b2", b2)?;
    }
    Ok(())
}

fn rows(n: usize) -> Vec<(ColorVector, ColorVector)> {
    ColorVector::all(n).flat_map(|i| ColorVector::all(n).map(move |j| (i, j))).collect()
}

/// Every row of the `n`-color matrix sums to one, symbolically and at each
/// grid point, with nonnegative entries.
pub fn verify_stochastic(n: usize, grid: &[(f64, f64)]) -> Result<VerificationReport> {
    check_request(n, grid)?;
    let name = format!("stochastic n={n}");
    let parts: Vec<_> = rows(n)
        .into_par_iter()
        .map(|(i, j)| {
            let mut report = VerificationReport::new("");
            let weights: Vec<Weight> = ColorVector::all(n)
                .flat_map(|k| ColorVector::all(n).map(move |l| (k, l)))
                .map(|(k, l)| ln_weight(&VertexKey { i, j, k, l }))
                .filter(|w| !w.is_zero())
                .collect();
            let symbolic = crate::weights::expand_sum(weights.iter().copied());
            report.check(symbolic == [1, 0, 0, 0], || format!("row {i} {j}: symbolic sum {symbolic:?}"));
            for &(b1, b2) in grid {
                let values: Vec<f64> = weights.iter().map(|w| w.evaluate_unchecked(b1, b2)).collect();
                report.check(values.iter().all(|&v| v >= 0.0), || format!("row {i} {j}: negative entry"));
                let total: CompensatedSum = values.into_iter().collect();
                let total = total.value();
                report.check_close((total - 1.0).abs(), TOLERANCE, || {
                    format!("row {i} {j} at ({b1}, {b2}): sum {total}")
                });
            }
            report
        })
        .collect();
    Ok(VerificationReport::merged(name, parts))
}

/// Summing the `n`-color weights over all outputs that map to the same
/// reduced outputs gives the reduced `target_n`-color weight.
fn verify_collapse(
    name: String,
    n: usize,
    target_n: usize,
    map: impl Fn(u32) -> u32 + Sync,
    grid: &[(f64, f64)],
) -> VerificationReport {
    let side = 1usize << target_n;
    let parts: Vec<_> = rows(n)
        .into_par_iter()
        .map(|(i, j)| {
            let mut report = VerificationReport::new("");
            let mut buckets: Vec<Vec<Weight>> = vec![Vec::new(); side * side];
            for k in ColorVector::all(n) {
                for l in ColorVector::all(n) {
                    let w = ln_weight(&VertexKey { i, j, k, l });
                    if !w.is_zero() {
                        buckets[map(k.bits()) as usize * side + map(l.bits()) as usize].push(w);
                    }
                }
            }
            let ri = ColorVector::from_raw(target_n, map(i.bits()));
            let rj = ColorVector::from_raw(target_n, map(j.bits()));
            for (idx, bucket) in buckets.iter().enumerate() {
                let rk = ColorVector::from_raw(target_n, (idx / side) as u32);
                let rl = ColorVector::from_raw(target_n, (idx % side) as u32);
                let reduced = ln_weight(&VertexKey { i: ri, j: rj, k: rk, l: rl });
                let symbolic = crate::weights::expand_sum(bucket.iter().copied());
                report.check(symbolic == reduced.expand(), || {
                    format!("row {i} {j} -> {rk} {rl}: symbolic {symbolic:?} vs {reduced}")
                });
                for &(b1, b2) in grid {
                    let total: CompensatedSum = bucket.iter().map(|w| w.evaluate_unchecked(b1, b2)).collect();
                    let expected = reduced.evaluate_unchecked(b1, b2);
                    let total = total.value();
                    report.check_close((total - expected).abs(), TOLERANCE, || {
                        format!("row {i} {j} -> {rk} {rl} at ({b1}, {b2}): {total} vs {expected}")
                    });
                }
            }
            report
        })
        .collect();
    VerificationReport::merged(name, parts)
}

/// Marginalizing the lowest-priority colors `m+1..n` recovers the
/// `m`-color weights.
pub fn verify_color_ignorance(n: usize, m: usize, grid: &[(f64, f64)]) -> Result<VerificationReport> {
    check_request(n, grid)?;
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n, got m={m}, n={n}")));
    }
    let mask = low_mask(m);
    Ok(verify_collapse(format!("color ignorance n={n} m={m}"), n, m, move |x| x & mask, grid))
}

/// Merging the colors of each block of `pi` modulo two recovers the
/// weights with one color per block.
pub fn verify_mod2_erasure(n: usize, pi: &Partition, grid: &[(f64, f64)]) -> Result<VerificationReport> {
    check_request(n, grid)?;
    if pi.n() != n {
        return Err(Error::domain(format!("partition covers {} colors, expected {n}", pi.n())));
    }
    let name = format!("mod-2 erasure n={n} pi={pi}");
    Ok(verify_collapse(name, n, pi.len(), |x| project_word(x, pi), grid))
}
