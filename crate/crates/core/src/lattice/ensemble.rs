use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmatrix::MAX_COLORS;

/// Which sampler produced an ensemble, and hence how its edges are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Upright paths with step data: a line enters every row from the left.
    S6v,
    /// Horizontally complemented paths with empty boundary.
    Cs6v,
    /// Block-colored complemented model; color `c` is the block color `-c`.
    ColoredCs6v,
    /// Two colors with second-color boundary lines.
    TwoColored,
}

impl Model {
    pub fn tag(self) -> u8 {
        match self {
            Model::S6v => 0,
            Model::Cs6v => 1,
            Model::ColoredCs6v => 2,
            Model::TwoColored => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        Ok(match tag {
            0 => Model::S6v,
            1 => Model::Cs6v,
            2 => Model::ColoredCs6v,
            3 => Model::TwoColored,
            _ => return Err(Error::format(format!("unknown model tag {tag}"))),
        })
    }

    pub fn is_single_color(self) -> bool {
        matches!(self, Model::S6v | Model::Cs6v)
    }
}

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Mask of the valid bits in the last word of a `bits`-long plane.
pub(crate) fn tail_mask(bits: usize) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[inline]
fn get_bit(words: &[u64], idx: usize) -> bool {
    (words[idx / 64] >> (idx % 64)) & 1 == 1
}

#[inline]
fn set_bit(words: &mut [u64], idx: usize, value: bool) {
    let bit = 1u64 << (idx % 64);
    if value {
        words[idx / 64] |= bit;
    } else {
        words[idx / 64] &= !bit;
    }
}

/// Number of set bits among the first `len` bits.
pub(crate) fn prefix_popcount(words: &[u64], len: usize) -> u32 {
    let full = len / 64;
    let mut count: u32 = words[..full].iter().map(|w| w.count_ones()).sum();
    if !len.is_multiple_of(64) {
        count += (words[full] & ((1u64 << (len % 64)) - 1)).count_ones();
    }
    count
}

/// Per-color occupancy of every edge of a `width x height` grid.
///
/// Vertex `(x, y)` with `1 <= x <= width`, `1 <= y <= height` owns the
/// vertical edge above it and the horizontal edge to its right. Each color
/// is a bit plane with one row of `u64` words per lattice row; column `x`
/// is bit `x - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEnsemble {
    model: Model,
    width: usize,
    height: usize,
    n_colors: usize,
    words_per_row: usize,
    v: Vec<u64>,
    h: Vec<u64>,
    left: Vec<u64>,
    bottom: Vec<u64>,
}

impl PathEnsemble {
    /// An ensemble with every edge empty.
    pub fn empty(model: Model, width: usize, height: usize, n_colors: usize) -> Result<Self> {
        if n_colors == 0 || n_colors > MAX_COLORS {
            return Err(Error::domain(format!("color count {n_colors} is not in 1..={MAX_COLORS}")));
        }
        if model.is_single_color() && n_colors != 1 {
            return Err(Error::domain("single-color model with several colors"));
        }
        if model == Model::TwoColored && n_colors != 2 {
            return Err(Error::domain("two-colored model needs exactly two colors"));
        }
        let words_per_row = words_for(width);
        let plane = words_per_row
            .checked_mul(height)
            .and_then(|p| p.checked_mul(n_colors))
            .ok_or_else(|| Error::resource("grid too large"))?;
        Ok(Self {
            model,
            width,
            height,
            n_colors,
            words_per_row,
            v: vec![0; plane],
            h: vec![0; plane],
            left: vec![0; words_for(height) * n_colors],
            bottom: vec![0; words_per_row * n_colors],
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    fn row_start(&self, c: usize, y: usize) -> usize {
        ((c - 1) * self.height + (y - 1)) * self.words_per_row
    }

    fn check_vertex(&self, c: usize, x: usize, y: usize) {
        assert!(
            (1..=self.n_colors).contains(&c) && (1..=self.width).contains(&x) && (1..=self.height).contains(&y),
            "edge ({c}, {x}, {y}) outside ensemble"
        );
    }

    /// Vertical plane of color `c` in row `y`.
    pub fn v_row(&self, c: usize, y: usize) -> &[u64] {
        let start = self.row_start(c, y);
        &self.v[start..start + self.words_per_row]
    }

    /// Horizontal plane of color `c` in row `y`.
    pub fn h_row(&self, c: usize, y: usize) -> &[u64] {
        let start = self.row_start(c, y);
        &self.h[start..start + self.words_per_row]
    }

    pub(crate) fn rows_mut(&mut self, c: usize, y: usize) -> (&mut [u64], &mut [u64]) {
        let start = self.row_start(c, y);
        let end = start + self.words_per_row;
        (&mut self.v[start..end], &mut self.h[start..end])
    }

    pub(crate) fn planes(&self) -> (&[u64], &[u64], &[u64], &[u64]) {
        (&self.v, &self.h, &self.left, &self.bottom)
    }

    pub(crate) fn planes_mut(&mut self) -> (&mut [u64], &mut [u64], &mut [u64], &mut [u64]) {
        (&mut self.v, &mut self.h, &mut self.left, &mut self.bottom)
    }

    /// Color `c` on the vertical edge above `(x, y)`.
    pub fn v(&self, c: usize, x: usize, y: usize) -> bool {
        self.check_vertex(c, x, y);
        get_bit(self.v_row(c, y), x - 1)
    }

    /// Color `c` on the horizontal edge right of `(x, y)`.
    pub fn h(&self, c: usize, x: usize, y: usize) -> bool {
        self.check_vertex(c, x, y);
        get_bit(self.h_row(c, y), x - 1)
    }

    pub fn set_v(&mut self, c: usize, x: usize, y: usize, value: bool) {
        self.check_vertex(c, x, y);
        let start = self.row_start(c, y);
        set_bit(&mut self.v[start..], x - 1, value);
    }

    pub fn set_h(&mut self, c: usize, x: usize, y: usize, value: bool) {
        self.check_vertex(c, x, y);
        let start = self.row_start(c, y);
        set_bit(&mut self.h[start..], x - 1, value);
    }

    /// Color `c` entering row `y` from the left.
    pub fn left(&self, c: usize, y: usize) -> bool {
        self.check_vertex(c, 1, y);
        get_bit(&self.left[(c - 1) * words_for(self.height)..], y - 1)
    }

    /// Color `c` entering column `x` from the bottom.
    pub fn bottom(&self, c: usize, x: usize) -> bool {
        self.check_vertex(c, x, 1);
        get_bit(&self.bottom[(c - 1) * self.words_per_row..], x - 1)
    }

    pub fn set_left(&mut self, c: usize, y: usize, value: bool) {
        self.check_vertex(c, 1, y);
        let start = (c - 1) * words_for(self.height);
        set_bit(&mut self.left[start..], y - 1, value);
    }

    pub fn set_bottom(&mut self, c: usize, x: usize, value: bool) {
        self.check_vertex(c, x, 1);
        let start = (c - 1) * self.words_per_row;
        set_bit(&mut self.bottom[start..], x - 1, value);
    }

    fn word_of(&self, get: impl Fn(usize) -> bool) -> u32 {
        (1..=self.n_colors).fold(0, |acc, c| acc | (get(c) as u32) << (c - 1))
    }

    /// All colors on the vertical edge above `(x, y)`; bit `c - 1` is color `c`.
    pub fn v_word(&self, x: usize, y: usize) -> u32 {
        self.word_of(|c| self.v(c, x, y))
    }

    pub fn h_word(&self, x: usize, y: usize) -> u32 {
        self.word_of(|c| self.h(c, x, y))
    }

    pub fn left_word(&self, y: usize) -> u32 {
        self.word_of(|c| self.left(c, y))
    }

    pub fn bottom_word(&self, x: usize) -> u32 {
        self.word_of(|c| self.bottom(c, x))
    }

    /// Input words `(south, west)` and output words `(north, east)` at `(x, y)`.
    pub fn vertex(&self, x: usize, y: usize) -> [u32; 4] {
        let south = if y == 1 { self.bottom_word(x) } else { self.v_word(x, y - 1) };
        let west = if x == 1 { self.left_word(y) } else { self.h_word(x - 1, y) };
        [south, west, self.v_word(x, y), self.h_word(x, y)]
    }

    /// Flips every horizontal edge, including the left boundary, turning an
    /// upright ensemble into its complemented form and back.
    pub fn complement(&self) -> Result<PathEnsemble> {
        let model = match self.model {
            Model::S6v => Model::Cs6v,
            Model::Cs6v => Model::S6v,
            _ => return Err(Error::domain("complement applies to single-color ensembles")),
        };
        let mut out = self.clone();
        out.model = model;
        let wpr = self.words_per_row;
        for row in out.h.chunks_mut(wpr.max(1)).take(self.height) {
            for (idx, w) in row.iter_mut().enumerate() {
                *w = !*w & if idx + 1 == wpr { tail_mask(self.width) } else { u64::MAX };
            }
        }
        let wl = words_for(self.height);
        for (idx, w) in out.left.iter_mut().enumerate() {
            *w = !*w & if idx + 1 == wl { tail_mask(self.height) } else { u64::MAX };
        }
        Ok(out)
    }

    /// Single-color ensemble whose edge is occupied where an odd number of
    /// colors is present.
    pub fn parity_projection(&self) -> PathEnsemble {
        self.project_colors(u32::MAX)
    }

    /// Single-color ensemble of the parity of the colors selected by `mask`
    /// (bit `c - 1` selects color `c`).
    pub fn project_colors(&self, mask: u32) -> PathEnsemble {
        let mut out = PathEnsemble::empty(Model::Cs6v, self.width, self.height, 1).expect("valid extents");
        if self.model == Model::S6v {
            out.model = Model::S6v;
        }
        let plane = self.words_per_row * self.height;
        let wl = words_for(self.height);
        for c in (1..=self.n_colors).filter(|c| mask >> (c - 1) & 1 == 1) {
            let xor = |dst: &mut [u64], src: &[u64]| dst.iter_mut().zip(src).for_each(|(d, s)| *d ^= s);
            xor(&mut out.v, &self.v[(c - 1) * plane..c * plane]);
            xor(&mut out.h, &self.h[(c - 1) * plane..c * plane]);
            xor(&mut out.left, &self.left[(c - 1) * wl..c * wl]);
            xor(&mut out.bottom, &self.bottom[(c - 1) * self.words_per_row..c * self.words_per_row]);
        }
        out
    }

    /// Lines of color `c` entering from the left in rows `1..=y`.
    pub fn left_count(&self, c: usize, y: usize) -> u32 {
        prefix_popcount(&self.left[(c - 1) * words_for(self.height)..], y)
    }

    /// Lines of color `c` leaving the top of `[1, x] x [1, y]`; zero for `y = 0`.
    pub fn top_count(&self, c: usize, x: usize, y: usize) -> u32 {
        if y == 0 {
            0
        } else {
            prefix_popcount(self.v_row(c, y), x)
        }
    }

    fn check_point(&self, x: usize, y: usize) -> Result<()> {
        if x > self.width || y > self.height {
            return Err(Error::domain(format!("point ({x}, {y}) outside {}x{} grid", self.width, self.height)));
        }
        Ok(())
    }

    /// Upright height at one point: lines entering from the left up to row
    /// `y` minus lines leaving the top of `[1, x] x [1, y]`.
    pub fn h_at(&self, x: usize, y: usize) -> Result<i64> {
        self.require(Model::S6v)?;
        self.check_point(x, y)?;
        Ok(self.left_count(1, y) as i64 - self.top_count(1, x, y) as i64)
    }

    /// Complemented height at one point: lines entering from the left up to
    /// row `y` plus lines leaving the top of `[1, x] x [1, y]`.
    #[allow(non_snake_case)]
    pub fn H_at(&self, x: usize, y: usize) -> Result<i64> {
        self.require(Model::Cs6v)?;
        self.check_point(x, y)?;
        Ok(self.left_count(1, y) as i64 + self.top_count(1, x, y) as i64)
    }

    fn require(&self, model: Model) -> Result<()> {
        if self.model != model {
            return Err(Error::domain(format!("expected a {model:?} ensemble, got {:?}", self.model)));
        }
        Ok(())
    }

    fn height_field(&self, sign: i64) -> HeightField {
        let (w, h) = (self.width, self.height);
        let mut values = vec![0i64; (w + 1) * (h + 1)];
        for y in 1..=h {
            let row = self.v_row(1, y);
            let mut acc = self.left_count(1, y) as i64;
            values[y * (w + 1)] = acc;
            for x in 1..=w {
                if get_bit(row, x - 1) {
                    acc += sign;
                }
                values[y * (w + 1) + x] = acc;
            }
        }
        HeightField { width: w, height: h, values }
    }

    /// Upright height field `h` on `[0, width] x [0, height]`.
    pub fn height_h(&self) -> Result<HeightField> {
        self.require(Model::S6v)?;
        Ok(self.height_field(-1))
    }

    /// Complemented height field `H` on `[0, width] x [0, height]`.
    #[allow(non_snake_case)]
    pub fn height_H(&self) -> Result<HeightField> {
        self.require(Model::Cs6v)?;
        Ok(self.height_field(1))
    }
}

/// Integer heights on `[0, width] x [0, height]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightField {
    pub width: usize,
    pub height: usize,
    values: Vec<i64>,
}

impl HeightField {
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut values = Vec::with_capacity((width + 1) * (height + 1));
        for y in 0..=height {
            for x in 0..=width {
                values.push(f(x, y));
            }
        }
        Self { width, height, values }
    }

    pub fn get(&self, x: usize, y: usize) -> i64 {
        assert!(x <= self.width && y <= self.height, "({x}, {y}) outside height field");
        self.values[y * (self.width + 1) + x]
    }

    /// Rows from `y = height` down to `y = 0`, as printed next to a picture.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for y in (0..=self.height).rev() {
            let row: Vec<String> = (0..=self.width).map(|x| self.get(x, y).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
