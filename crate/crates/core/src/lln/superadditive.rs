use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{ks_two_sample, KsResult};
use crate::error::{Error, Result};
use crate::lattice::{sample_colored_cs6v, ColoringScheme, Model, ParameterField, PathEnsemble};
use crate::report::VerificationReport;
use crate::rng::SeedKey;

/// `X_{m,n}`: over the columns `z` of blocks `m+1..=n`, count the vertical
/// edges above `(z, n by)` that carry an odd number of the colors
/// `-n..=-(m+1)`.
pub fn compute_x(e: &PathEnsemble, scheme: &ColoringScheme, m: usize, n: usize) -> Result<u64> {
    if e.model() != Model::ColoredCs6v {
        return Err(Error::domain("block statistics need a colored ensemble"));
    }
    if m > n {
        return Err(Error::domain(format!("need m <= n, got m={m}, n={n}")));
    }
    if n > e.n_colors() || (n as u64 * scheme.bx) as usize > e.width() || (n as u64 * scheme.by) as usize > e.height() {
        return Err(Error::domain(format!("block {n} exceeds the sampled {} blocks", e.n_colors())));
    }
    if m == n {
        return Ok(0);
    }
    let mask: u32 = (m..n).fold(0, |acc, bit| acc | 1 << bit);
    let row = n * scheme.by as usize;
    let columns = (m * scheme.bx as usize + 1)..=(n * scheme.bx as usize);
    Ok(columns.filter(|&z| (e.v_word(z, row) & mask).count_ones() % 2 == 1).count() as u64)
}

/// Checks `X_{0,n} >= X_{0,m} + X_{m,n}` for all `0 <= m <= n <= n_max`.
pub fn verify_superadditivity(e: &PathEnsemble, scheme: &ColoringScheme, n_max: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("superadditivity n<={n_max}"));
    let mut table = vec![vec![0u64; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in 0..=n {
            table[m][n] = compute_x(e, scheme, m, n)?;
        }
    }
    for n in 0..=n_max {
        for m in 0..=n {
            let (whole, first, rest) = (table[0][n], table[0][m], table[m][n]);
            report.check(whole >= first + rest, || format!("X(0,{n})={whole} < X(0,{m})={first} + X({m},{n})={rest}"));
        }
    }
    Ok(report)
}

/// Distributional checks on the block statistics across replicas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicCheck {
    pub report: VerificationReport,
    /// `X_{0,k}` against `X_{k,2k}`.
    pub block_shift: KsResult,
    /// `X_{0,k}` against `X_{1,k+1}`.
    pub unit_shift: KsResult,
}

/// Significance level of the distributional tests.
pub const SIGNIFICANCE: f64 = 0.01;

/// Samples `2k` blocks per replica. The two samples of each comparison come
/// from disjoint halves of the replicas so that they are independent.
pub fn verify_ergodic_hypotheses(
    scheme: &ColoringScheme,
    field: &ParameterField,
    k: usize,
    replicas: usize,
    seed: u64,
) -> Result<ErgodicCheck> {
    if k == 0 {
        return Err(Error::domain("block step k must be positive"));
    }
    if replicas < 4 {
        return Err(Error::domain("need at least four replicas"));
    }
    let stats: Vec<[u64; 4]> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let e = sample_colored_cs6v(2 * k, scheme, field, SeedKey::new(seed, r as u64))?;
            Ok([compute_x(&e, scheme, 0, k)?, compute_x(&e, scheme, k, 2 * k)?, compute_x(&e, scheme, 1, k + 1)?, compute_x(&e, scheme, 0, 1)?])
        })
        .collect::<Result<_>>()?;
    let half = replicas / 2;
    let column = |range: std::ops::Range<usize>, idx: usize| -> Vec<f64> { stats[range].iter().map(|s| s[idx] as f64).collect() };
    let block_shift = ks_two_sample(&column(0..half, 0), &column(half..replicas, 1));
    let unit_shift = ks_two_sample(&column(0..half, 0), &column(half..replicas, 2));
    let mut report = VerificationReport::new(format!("ergodic hypotheses k={k} replicas={replicas}"));
    report.check(block_shift.p_value >= SIGNIFICANCE, || format!("X(0,k) vs X(k,2k): p = {}", block_shift.p_value));
    report.check(unit_shift.p_value >= SIGNIFICANCE, || format!("X(0,k) vs X(1,k+1): p = {}", unit_shift.p_value));
    // the negative part of X(0,1) vanishes: the counts are unsigned
    for s in &stats {
        report.check(s[3] <= scheme.bx, || format!("X(0,1) = {} out of range", s[3]));
    }
    Ok(ErgodicCheck { report, block_shift, unit_shift })
}
