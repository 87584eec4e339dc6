//! Colored vertex weights built from the single-color table by taking the
//! Boolean-type product over parity projections, and an exact sampler for
//! them.

mod color;
mod golden;
mod verify;

pub use color::{fold_projection, partition_projection, ColorVector, Partition, VertexKey, MAX_COLORS};
pub use golden::{l2_golden_table, render_golden_table};
pub use verify::{
    default_grid, verify_color_ignorance, verify_mod2_erasure, verify_stochastic, EXHAUSTIVE_MAX_COLORS,
};

pub(crate) use color::{from_prefix_parity, low_mask, prefix_parity};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};
use crate::weights::{star_product, Weight};

/// Single-color vertex weight for bottom `i`, left `j`, top `k`, right `l`
/// occupancies. Six tuples carry weight; every other tuple is zero.
pub fn l1_weight(i: bool, j: bool, k: bool, l: bool) -> Weight {
    match (i, j, k, l) {
        (true, false, true, false) => Weight::ONE,
        (false, true, false, true) => Weight::ONE,
        (false, false, false, false) => Weight::B2,
        (false, false, true, true) => Weight::ONE_MINUS_B2,
        (true, true, true, true) => Weight::B1,
        (true, true, false, false) => Weight::ONE_MINUS_B1,
        _ => Weight::ZERO,
    }
}

fn bit(word: u32, level: usize) -> bool {
    (word >> level) & 1 == 1
}

/// The single-color weights of the `n` parity projections of a key.
pub fn level_weights(key: &VertexKey) -> impl Iterator<Item = Weight> {
    let [pi, pj, pk, pl] = [key.i, key.j, key.k, key.l].map(|x| prefix_parity(x.bits()));
    (0..key.n()).map(move |r| l1_weight(bit(pi, r), bit(pj, r), bit(pk, r), bit(pl, r)))
}

/// Weight of a colored vertex configuration.
pub fn ln_weight(key: &VertexKey) -> Weight {
    star_product(level_weights(key))
}

/// Law of the outputs `(k, l)` for fixed inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub support: Vec<(ColorVector, ColorVector)>,
    pub probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn prob(&self, k: ColorVector, l: ColorVector) -> f64 {
        self.support
            .iter()
            .position(|&(a, b)| a == k && b == l)
            .map_or(0.0, |idx| self.probs[idx])
    }

    pub fn total(&self) -> f64 {
        crate::numeric::compensated_sum(self.probs.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn from_entries(mut entries: Vec<((ColorVector, ColorVector), f64)>) -> Self {
        entries.sort_by_key(|(kl, _)| *kl);
        let mut merged: Vec<((ColorVector, ColorVector), f64)> = Vec::with_capacity(entries.len());
        for (kl, p) in entries {
            match merged.last_mut() {
                Some((last, q)) if *last == kl => *q += p,
                _ => merged.push((kl, p)),
            }
        }
        merged.retain(|(_, p)| *p > 0.0);
        let (support, probs) = merged.into_iter().unzip();
        Self { support, probs }
    }
}

fn check_inputs(i: ColorVector, j: ColorVector, b1: f64, b2: f64) -> Result<()> {
    if i.n() != j.n() {
        return Err(Error::domain("input vectors have different color counts"));
    }
    check_unit_interval("b1", b1)?;
    check_unit_interval("b2", b2)
}

/// Symbolic outcomes `(k, l, weight)` with nonzero weight for inputs `(i, j)`.
///
/// Walks the projection levels, keeping every partial assignment of output
/// parities whose running product is nonzero. Because a second use of an
/// axis must repeat the first choice, at most four branches survive.
pub fn ln_outcomes(i: ColorVector, j: ColorVector) -> Result<Vec<(ColorVector, ColorVector, Weight)>> {
    if i.n() != j.n() {
        return Err(Error::domain("input vectors have different color counts"));
    }
    let n = i.n();
    let (pi, pj) = (prefix_parity(i.bits()), prefix_parity(j.bits()));
    let mut branches: Vec<(u32, u32, Weight)> = vec![(0, 0, Weight::ONE)];
    for r in 0..n {
        let (si, sj) = (bit(pi, r), bit(pj, r));
        let mut next = Vec::with_capacity(4);
        for (pk, pl, w) in branches {
            for (sk, sl) in [(false, false), (true, false), (false, true), (true, true)] {
                let product = w.star(l1_weight(si, sj, sk, sl));
                if !product.is_zero() {
                    next.push((pk | (sk as u32) << r, pl | (sl as u32) << r, product));
                }
            }
        }
        branches = next;
    }
    let mut out: Vec<_> = branches
        .into_iter()
        .map(|(pk, pl, w)| {
            (
                ColorVector::from_raw(n, from_prefix_parity(pk, n)),
                ColorVector::from_raw(n, from_prefix_parity(pl, n)),
                w,
            )
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Output law of the colored vertex at numeric parameters, with
/// zero-probability outcomes dropped.
pub fn ln_distribution(i: ColorVector, j: ColorVector, b1: f64, b2: f64) -> Result<OutcomeDistribution> {
    check_inputs(i, j, b1, b2)?;
    let entries = ln_outcomes(i, j)?
        .into_iter()
        .map(|(k, l, w)| ((k, l), w.evaluate_unchecked(b1, b2)))
        .collect();
    Ok(OutcomeDistribution::from_entries(entries))
}

/// Outcome of the two per-vertex coins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coins {
    /// Heads with probability `b1`.
    pub b1_heads: bool,
    /// Heads with probability `b2`.
    pub b2_heads: bool,
}

impl Coins {
    #[inline]
    pub fn from_uniforms(u1: f64, u2: f64, b1: f64, b2: f64) -> Self {
        Self { b1_heads: u1 < b1, b2_heads: u2 < b2 }
    }
}

/// Word-level sampler: outputs `(k, l)` for inputs `(i, j)` on `n` colors.
///
/// At every projection level a lone input continues deterministically, two
/// inputs cross on heads of the `b1` coin and annihilate otherwise, and no
/// input stays empty on heads of the `b2` coin and nucleates otherwise. All
/// levels share the same two coins.
#[inline]
pub fn sample_outputs(n: usize, i: u32, j: u32, coins: Coins) -> (u32, u32) {
    let mask = low_mask(n);
    let si = prefix_parity(i) & mask;
    let sj = prefix_parity(j) & mask;
    let both = si & sj;
    let neither = !(si | sj) & mask;
    let crossing = if coins.b1_heads { both } else { 0 };
    let nucleating = if coins.b2_heads { 0 } else { neither };
    let sk = (si & !sj) | crossing | nucleating;
    let sl = (sj & !si) | crossing | nucleating;
    (from_prefix_parity(sk, n), from_prefix_parity(sl, n))
}

/// Draws `(k, l)` from the colored vertex law using two uniforms in `[0, 1)`.
pub fn sample_vertex(
    i: ColorVector,
    j: ColorVector,
    b1: f64,
    b2: f64,
    u1: f64,
    u2: f64,
) -> Result<(ColorVector, ColorVector)> {
    check_inputs(i, j, b1, b2)?;
    let n = i.n();
    let (k, l) = sample_outputs(n, i.bits(), j.bits(), Coins::from_uniforms(u1, u2, b1, b2));
    Ok((ColorVector::from_raw(n, k), ColorVector::from_raw(n, l)))
}

/// Exact law induced by [`sample_vertex`], obtained by summing over the four
/// coin outcomes.
pub fn sampler_law(i: ColorVector, j: ColorVector, b1: f64, b2: f64) -> Result<OutcomeDistribution> {
    check_inputs(i, j, b1, b2)?;
    let n = i.n();
    let mut entries = Vec::with_capacity(4);
    for (b1_heads, p1) in [(true, b1), (false, 1.0 - b1)] {
        for (b2_heads, p2) in [(true, b2), (false, 1.0 - b2)] {
            let (k, l) = sample_outputs(n, i.bits(), j.bits(), Coins { b1_heads, b2_heads });
            entries.push(((ColorVector::from_raw(n, k), ColorVector::from_raw(n, l)), p1 * p2));
        }
    }
    Ok(OutcomeDistribution::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn cv(s: &str) -> ColorVector {
        s.parse().unwrap()
    }

    fn key(i: &str, j: &str, k: &str, l: &str) -> VertexKey {
        VertexKey::new(cv(i), cv(j), cv(k), cv(l)).unwrap()
    }

    #[test]
    fn single_color_table() {
        assert_eq!(l1_weight(false, false, false, false), Weight::B2);
        assert_eq!(l1_weight(true, true, false, false), Weight::ONE_MINUS_B1);
        assert_eq!(l1_weight(true, false, false, true), Weight::ZERO);
        let nonzero = (0..16u8)
            .filter(|m| !l1_weight(m & 8 != 0, m & 4 != 0, m & 2 != 0, m & 1 != 0).is_zero())
            .count();
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn single_color_rows_are_probability_measures() {
        for (i, j) in [(false, false), (false, true), (true, false), (true, true)] {
            for &(b1, b2) in &[(0.2, 0.6), (0.0, 1.0), (0.9, 0.1)] {
                let total: f64 = [(false, false), (false, true), (true, false), (true, true)]
                    .iter()
                    .map(|&(k, l)| l1_weight(i, j, k, l).evaluate(b1, b2).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_color_weights_by_hand() {
        assert_eq!(ln_weight(&key("10", "01", "10", "01")), Weight::B1);
        assert_eq!(ln_weight(&key("11", "00", "11", "00")), Weight::B2);
        assert_eq!(ln_weight(&key("00", "00", "11", "00")), Weight::ZERO);
        assert_eq!(ln_weight(&key("11", "11", "11", "11")).to_string(), "b1*b2");
    }

    #[test]
    fn one_color_distribution() {
        let d = ln_distribution(cv("1"), cv("1"), 0.3, 0.6).unwrap();
        assert_eq!(d.support, vec![(cv("0"), cv("0")), (cv("1"), cv("1"))]);
        assert!((d.probs[0] - 0.7).abs() < 1e-15);
        assert!((d.probs[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn distribution_matches_brute_force_enumeration() {
        for n in 1..=3 {
            for i in ColorVector::all(n) {
                for j in ColorVector::all(n) {
                    let d = ln_distribution(i, j, 0.3, 0.7).unwrap();
                    let mut expected = Vec::new();
                    for k in ColorVector::all(n) {
                        for l in ColorVector::all(n) {
                            let p = ln_weight(&VertexKey::new(i, j, k, l).unwrap()).evaluate(0.3, 0.7).unwrap();
                            if p > 0.0 {
                                expected.push(((k, l), p));
                            }
                        }
                    }
                    assert!(d.len() <= 4);
                    assert_eq!(d.support, expected.iter().map(|e| e.0).collect::<Vec<_>>());
                    for (a, b) in d.probs.iter().zip(expected.iter().map(|e| e.1)) {
                        assert!((a - b).abs() < 1e-15);
                    }
                    assert!((d.total() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn empty_inputs_only_nucleate_the_first_color() {
        for n in 1..=3 {
            let zero = ColorVector::empty(n).unwrap();
            let d = ln_distribution(zero, zero, 0.4, 0.25).unwrap();
            let mut first = ColorVector::empty(n).unwrap();
            first = ColorVector::new(n, first.bits() | 1).unwrap();
            assert_eq!(d.support, vec![(zero, zero), (first, first)]);
            assert!((d.prob(zero, zero) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn sampler_examples() {
        for &(u1, u2) in &[(0.0, 0.0), (0.5, 0.5), (0.999, 0.001)] {
            let out = sample_vertex(cv("1"), cv("0"), 0.3, 0.6, u1, u2).unwrap();
            assert_eq!(out, (cv("1"), cv("0")));
        }
        // b1 coin heads
        let out = sample_vertex(cv("10"), cv("01"), 0.5, 0.5, 0.1, 0.9).unwrap();
        assert_eq!(out, (cv("10"), cv("01")));
        // b1 coin tails: level 2 annihilates, the second color turns
        let out = sample_vertex(cv("10"), cv("01"), 0.5, 0.5, 0.9, 0.9).unwrap();
        assert_eq!(out, (cv("11"), cv("00")));
    }

    #[test]
    fn sampler_law_equals_matrix_row() {
        for n in 1..=3 {
            for i in ColorVector::all(n) {
                for j in ColorVector::all(n) {
                    for &(b1, b2) in &[(0.3, 0.7), (0.0, 1.0), (1.0, 0.0), (0.55, 0.55)] {
                        let exact = ln_distribution(i, j, b1, b2).unwrap();
                        let law = sampler_law(i, j, b1, b2).unwrap();
                        assert_eq!(exact.support, law.support, "n={n} i={i} j={j}");
                        for (a, b) in exact.probs.iter().zip(&law.probs) {
                            assert!((a - b).abs() <= 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sampler_frequencies_within_three_standard_errors() {
        const DRAWS: usize = 1_000_000;
        let (b1, b2) = (0.3, 0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(20221128);
        let mut uniform = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        for (i, j) in [("11", "11"), ("10", "01"), ("000", "000"), ("011", "101"), ("111", "010")] {
            let (i, j) = (cv(i), cv(j));
            let law = ln_distribution(i, j, b1, b2).unwrap();
            let mut counts = vec![0usize; law.len()];
            for _ in 0..DRAWS {
                let (u1, u2) = (uniform(), uniform());
                let (k, l) = sample_vertex(i, j, b1, b2, u1, u2).unwrap();
                let idx = law.support.iter().position(|&s| s == (k, l)).expect("draw outside support");
                counts[idx] += 1;
            }
            for (c, p) in counts.iter().zip(&law.probs) {
                let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
                let freq = *c as f64 / DRAWS as f64;
                assert!((freq - p).abs() <= 3.0 * se, "i={i} j={j} freq={freq} p={p}");
            }
        }
    }

    #[test]
    fn factorizes_over_the_last_level() {
        for n in 2..=4 {
            for key in VertexKey::all(n) {
                let prefix = VertexKey::new(
                    key.i.prefix(n - 1).unwrap(),
                    key.j.prefix(n - 1).unwrap(),
                    key.k.prefix(n - 1).unwrap(),
                    key.l.prefix(n - 1).unwrap(),
                )
                .unwrap();
                let last = level_weights(&key).last().unwrap();
                assert_eq!(ln_weight(&key), ln_weight(&prefix).star(last));
            }
        }
    }

    #[test]
    fn nonzero_weight_conserves_parity_at_every_level() {
        for n in 1..=3 {
            for key in VertexKey::all(n) {
                if ln_weight(&key).is_zero() {
                    continue;
                }
                for r in 1..=n {
                    let s = |x| fold_projection(x, r).unwrap() as u8;
                    assert_eq!((s(key.i) + s(key.j)) % 2, (s(key.k) + s(key.l)) % 2);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn support_has_at_most_four_outcomes(n in 1usize..=32, i in any::<u32>(), j in any::<u32>()) {
            let (i, j) = (ColorVector::from_raw(n, i), ColorVector::from_raw(n, j));
            let outcomes = ln_outcomes(i, j).unwrap();
            prop_assert!(outcomes.len() <= 4);
            let law = sampler_law(i, j, 0.35, 0.8).unwrap();
            let exact = ln_distribution(i, j, 0.35, 0.8).unwrap();
            prop_assert_eq!(&law.support, &exact.support);
            prop_assert!((exact.total() - 1.0).abs() < 1e-12);
        }
    }
}
