//! Sequential samplers. Rows are processed bottom to top; a vertex reads
//! the uniform pair keyed to its own coordinates, so the result depends only
//! on the seed key, the grid and the parameters.

use super::coloring::ColoringScheme;
use super::ensemble::{tail_mask, Model, PathEnsemble};
use super::field::ParameterField;
use crate::error::{Error, Result};
use crate::lmatrix::{sample_outputs, ColorVector, Coins, MAX_COLORS};
use crate::rng::{RowStream, SeedKey, Stream};

/// Coin words of row `y`: bit `x - 1` of `c1` is heads of the `b1` coin at
/// `(x, y)`, likewise `c2` for `b2`.
fn row_coins(field: &ParameterField, key: SeedKey, y: usize, width: usize, c1: &mut [u64], c2: &mut [u64]) {
    c1.fill(0);
    c2.fill(0);
    let mut stream = RowStream::new(key, Stream::Vertex, y as u64);
    let (rb1, rb2) = field.row(y);
    let period = rb1.len();
    let mut a = 0;
    for x in 0..width {
        let (u1, u2) = stream.next_pair();
        c1[x / 64] |= ((u1 < rb1[a]) as u64) << (x % 64);
        c2[x / 64] |= ((u2 < rb2[a]) as u64) << (x % 64);
        a += 1;
        if a == period {
            a = 0;
        }
    }
}

/// One row of the complemented single-color model.
///
/// The east output is `g | (west & q)` with `g = !s & !c2` (nucleation) and
/// `q = !s | c1`, and `g` implies `q`, so the east outputs along the row are
/// the carries of the integer sum `g + q + west_in`.
fn cs6v_row(south: &[u64], c1: &[u64], c2: &[u64], west_in: bool, width: usize, north: &mut [u64], east: &mut [u64]) {
    let words = south.len();
    let mut carry = west_in as u64;
    for idx in 0..words {
        let mask = if idx + 1 == words { tail_mask(width) } else { u64::MAX };
        let s = south[idx];
        let g = !s & !c2[idx] & mask;
        let q = (!s | c1[idx]) & mask;
        let (t, o1) = g.overflowing_add(q);
        let (sum, o2) = t.overflowing_add(carry);
        let carry_out = (o1 | o2) as u64;
        let into = sum ^ g ^ q;
        let e = ((into >> 1) | (carry_out << 63)) & mask;
        let w = (e << 1) | carry;
        north[idx] = ((s & w & c1[idx]) | (s & !w) | (!s & !w & !c2[idx])) & mask;
        east[idx] = e;
        carry = carry_out;
    }
}

fn sample_single(model: Model, width: usize, height: usize, field: &ParameterField, key: SeedKey) -> Result<PathEnsemble> {
    let mut e = PathEnsemble::empty(Model::Cs6v, width, height, 1)?;
    let wpr = e.words_per_row();
    let (mut c1, mut c2) = (vec![0u64; wpr], vec![0u64; wpr]);
    let mut south = vec![0u64; wpr];
    for y in 1..=height {
        row_coins(field, key, y, width, &mut c1, &mut c2);
        let (north, east) = e.rows_mut(1, y);
        cs6v_row(&south, &c1, &c2, false, width, north, east);
        south.copy_from_slice(north);
    }
    match model {
        Model::S6v => e.complement(),
        _ => Ok(e),
    }
}

/// Complemented model with empty boundary on `[1, width] x [1, height]`.
pub fn sample_cs6v(width: usize, height: usize, field: &ParameterField, key: impl Into<SeedKey>) -> Result<PathEnsemble> {
    sample_single(Model::Cs6v, width, height, field, key.into())
}

/// Upright model with step data. It is drawn as the complement of the
/// complemented model with the same key, so the two couple exactly.
pub fn sample_s6v(width: usize, height: usize, field: &ParameterField, key: impl Into<SeedKey>) -> Result<PathEnsemble> {
    sample_single(Model::S6v, width, height, field, key.into())
}

/// Maps the global colors `-k..-1` (bits `k-1..0`) to the local priorities
/// `1..k` (bits `0..k-1`), and back.
#[inline]
fn swap_priority(word: u32, k: usize) -> u32 {
    word.reverse_bits() >> (32 - k)
}

fn write_words(e: &mut PathEnsemble, x: usize, y: usize, north: u32, east: u32) {
    let mut bits = north;
    while bits != 0 {
        e.set_v(bits.trailing_zeros() as usize + 1, x, y, true);
        bits &= bits - 1;
    }
    let mut bits = east;
    while bits != 0 {
        e.set_h(bits.trailing_zeros() as usize + 1, x, y, true);
        bits &= bits - 1;
    }
}

/// Colored complemented model on `n_blocks` layers of `scheme`, with empty
/// boundary. Color `c` of the result is the block color `-c`.
pub fn sample_colored_cs6v(
    n_blocks: usize,
    scheme: &ColoringScheme,
    field: &ParameterField,
    key: impl Into<SeedKey>,
) -> Result<PathEnsemble> {
    if n_blocks == 0 || n_blocks > MAX_COLORS {
        return Err(Error::domain(format!("block count {n_blocks} is not in 1..={MAX_COLORS}")));
    }
    let key = key.into();
    let (width, height) = scheme.extent(n_blocks as u64);
    let mut e = PathEnsemble::empty(Model::ColoredCs6v, width, height, n_blocks)?;
    let mut below = vec![0u32; width];
    for y in 1..=height {
        let mut stream = RowStream::new(key, Stream::Vertex, y as u64);
        let mut west = 0u32;
        for x in 1..=width {
            let (u1, u2) = stream.next_pair();
            let (b1, b2) = field.at(x, y);
            let k = scheme.block(x as u64, y as u64) as usize;
            let (li, lj) = (swap_priority(below[x - 1], k), swap_priority(west, k));
            let (lk, ll) = sample_outputs(k, li, lj, Coins::from_uniforms(u1, u2, b1, b2));
            let (north, east) = (swap_priority(lk, k), swap_priority(ll, k));
            write_words(&mut e, x, y, north, east);
            below[x - 1] = north;
            west = east;
        }
    }
    Ok(e)
}

fn check_boundary(side: &str, words: &[ColorVector], len: usize) -> Result<()> {
    if words.len() != len {
        return Err(Error::domain(format!("{side} boundary has {} entries, expected {len}", words.len())));
    }
    for w in words {
        if w.n() != 2 {
            return Err(Error::domain(format!("{side} boundary entry {w} is not two-colored")));
        }
        if w.get(1) {
            return Err(Error::domain(format!("{side} boundary carries a first-color line")));
        }
    }
    Ok(())
}

/// Two-colored complemented model where only second-color lines enter, from
/// `left` (one entry per row) and `bottom` (one entry per column).
pub fn sample_two_colored_with_boundary(
    width: usize,
    height: usize,
    field: &ParameterField,
    left: &[ColorVector],
    bottom: &[ColorVector],
    key: impl Into<SeedKey>,
) -> Result<PathEnsemble> {
    check_boundary("left", left, height)?;
    check_boundary("bottom", bottom, width)?;
    let key = key.into();
    let mut e = PathEnsemble::empty(Model::TwoColored, width, height, 2)?;
    for (y, w) in left.iter().enumerate() {
        e.set_left(2, y + 1, w.get(2));
    }
    for (x, w) in bottom.iter().enumerate() {
        e.set_bottom(2, x + 1, w.get(2));
    }
    let mut below: Vec<u32> = bottom.iter().map(|w| w.bits()).collect();
    for y in 1..=height {
        let mut stream = RowStream::new(key, Stream::Vertex, y as u64);
        let mut west = left[y - 1].bits();
        for x in 1..=width {
            let (u1, u2) = stream.next_pair();
            let (b1, b2) = field.at(x, y);
            let (north, east) = sample_outputs(2, below[x - 1], west, Coins::from_uniforms(u1, u2, b1, b2));
            write_words(&mut e, x, y, north, east);
            below[x - 1] = north;
            west = east;
        }
    }
    Ok(e)
}

/// First-color height `H1(x, y)`: first-color lines leaving the top of
/// `[1, x] x [1, y]` (none enter through the boundary).
pub fn first_color_height(e: &PathEnsemble, x: usize, y: usize) -> u32 {
    e.top_count(1, x, y)
}

/// Height of the mod-2 projection of both colors at `(x, y)`.
pub fn parity_height(e: &PathEnsemble, x: usize, y: usize) -> u32 {
    let left = (1..=y).filter(|&w| e.left_word(w).count_ones() % 2 == 1).count() as u32;
    let top = if y == 0 { 0 } else { (1..=x).filter(|&z| e.v_word(z, y).count_ones() % 2 == 1).count() as u32 };
    left + top
}
