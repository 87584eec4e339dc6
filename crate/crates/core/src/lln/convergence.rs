use std::fmt::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::limit::{hammersley_limit, limit_shape_g};
use super::stats::{mean, sample_std};
use crate::degenerations::{hammersley_corner, sample_pointset};
use crate::error::{check_unit_interval, Error, Result};
use crate::lattice::{render_ratio, sample_s6v, Direction, ParameterField};
use crate::rng::SeedKey;

/// Observation of one replica at one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub size: u64,
    pub replica: u64,
    /// `h(nx, ny) / n` for the lattice, `H^d(nx, ny) / n` for point sets.
    pub ratio: f64,
    /// `H(nx, ny) / n` of the complemented lattice ensemble.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_ratio: Option<f64>,
    pub reference: Option<f64>,
    pub abs_error: Option<f64>,
}

/// Cross-replica summary at one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub size: u64,
    pub mean: f64,
    pub std: f64,
    pub max_abs_error: Option<f64>,
}

/// Difference of mean ratios between consecutive sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyGap {
    pub from: u64,
    pub to: u64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub direction: (String, String),
    pub sizes: Vec<u64>,
    pub replicas: u64,
    pub seed: u64,
    pub rows: Vec<ConvergenceRow>,
    pub summaries: Vec<SizeSummary>,
    pub cauchy_gaps: Vec<CauchyGap>,
    /// Mean ratio at the largest size.
    pub running_mean: f64,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,replica,ratio,reference,abs_error\n");
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", row.size, row.replica, row.ratio, opt(row.reference), opt(row.abs_error));
        }
        out
    }

    pub fn summary(&self, size: u64) -> Option<&SizeSummary> {
        self.summaries.iter().find(|s| s.size == size)
    }

    /// One line per size, for terminal output.
    pub fn render_summary(&self) -> String {
        let mut out = String::new();
        for s in &self.summaries {
            let _ = write!(out, "{} n={} mean={:.6} std={:.6}", self.experiment, s.size, s.mean, s.std);
            if let Some(e) = s.max_abs_error {
                let _ = write!(out, " max_abs_error={e:.6}");
            }
            out.push('\n');
        }
        for g in &self.cauchy_gaps {
            let _ = writeln!(out, "{} gap {}->{} = {:.6}", self.experiment, g.from, g.to, g.gap);
        }
        out
    }
}

fn scaled(n: u64, r: Ratio<u64>) -> usize {
    (Ratio::from_integer(n) * r).to_integer() as usize
}

/// Replica index of replica `r` at size `n`, so every size draws fresh
/// randomness.
fn replica_id(size: u64, r: u64) -> u64 {
    (size << 32) | r
}

fn check_plan(sizes: &[u64], replicas: u64) -> Result<()> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::domain("sizes must be positive and strictly increasing"));
    }
    if sizes[sizes.len() - 1] >= 1 << 32 {
        return Err(Error::domain("sizes must be below 2^32"));
    }
    if replicas == 0 {
        return Err(Error::domain("need at least one replica"));
    }
    Ok(())
}

fn assemble(
    experiment: &str,
    direction: Direction,
    sizes: &[u64],
    replicas: u64,
    seed: u64,
    reference: Option<f64>,
    observe: impl Fn(u64, SeedKey) -> Result<(f64, Option<f64>)> + Sync,
) -> Result<ConvergenceReport> {
    let tasks: Vec<(u64, u64)> = sizes.iter().flat_map(|&n| (0..replicas).map(move |r| (n, r))).collect();
    let rows: Vec<ConvergenceRow> = tasks
        .into_par_iter()
        .map(|(size, replica)| {
            let (ratio, complement_ratio) = observe(size, SeedKey::new(seed, replica_id(size, replica)))?;
            Ok(ConvergenceRow {
                size,
                replica,
                ratio,
                complement_ratio,
                reference,
                abs_error: reference.map(|r| (ratio - r).abs()),
            })
        })
        .collect::<Result<_>>()?;
    let summaries: Vec<SizeSummary> = sizes
        .iter()
        .map(|&size| {
            let ratios: Vec<f64> = rows.iter().filter(|r| r.size == size).map(|r| r.ratio).collect();
            let max_abs_error = reference.map(|_| {
                rows.iter().filter(|r| r.size == size).filter_map(|r| r.abs_error).fold(0.0, f64::max)
            });
            SizeSummary { size, mean: mean(&ratios), std: sample_std(&ratios), max_abs_error }
        })
        .collect();
    let cauchy_gaps = summaries
        .windows(2)
        .map(|w| CauchyGap { from: w[0].size, to: w[1].size, gap: (w[1].mean - w[0].mean).abs() })
        .collect();
    Ok(ConvergenceReport {
        experiment: experiment.to_string(),
        direction: (render_ratio(direction.0), render_ratio(direction.1)),
        sizes: sizes.to_vec(),
        replicas,
        seed,
        running_mean: summaries.last().map_or(0.0, |s| s.mean),
        rows,
        summaries,
        cauchy_gaps,
    })
}

/// Samples the upright model on `[1, nx] x [1, ny]` for each size `n` and
/// records `h(nx, ny) / n` and `H(nx, ny) / n`. Homogeneous fields get the
/// closed-form reference.
pub fn convergence_experiment(
    direction: Direction,
    field: &ParameterField,
    sizes: &[u64],
    replicas: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    check_plan(sizes, replicas)?;
    let (x, y) = (direction.0, direction.1);
    let reference = if field.is_homogeneous() {
        let (b1, b2) = field.at(1, 1);
        Some(limit_shape_g(ratio_f64(x), ratio_f64(y), b1, b2)?)
    } else {
        None
    };
    assemble("s6v", direction, sizes, replicas, seed, reference, |n, key| {
        let (w, h) = (scaled(n, x), scaled(n, y));
        let e = sample_s6v(w, h, field, key)?;
        let low = e.h_at(w, h)?;
        let high = e.complement()?.H_at(w, h)?;
        Ok((low as f64 / n as f64, Some(high as f64 / n as f64)))
    })
}

/// Discrete Hammersley heights `H^d(nx, ny) / n` with the closed-form
/// reference.
pub fn hammersley_experiment(direction: Direction, p: f64, sizes: &[u64], replicas: u64, seed: u64) -> Result<ConvergenceReport> {
    check_plan(sizes, replicas)?;
    check_unit_interval("p", p)?;
    let (x, y) = (direction.0, direction.1);
    let reference = hammersley_limit(ratio_f64(x), ratio_f64(y), p)?;
    assemble("hammersley", direction, sizes, replicas, seed, Some(reference), |n, key| {
        let ps = sample_pointset(scaled(n, x), scaled(n, y), p, key)?;
        Ok((hammersley_corner(&ps) as f64 / n as f64, None))
    })
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
