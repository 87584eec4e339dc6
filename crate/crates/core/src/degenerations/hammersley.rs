use std::fmt::Write;

use crate::error::{check_unit_interval, Error, Result};
use crate::lattice::{ensemble_words, HeightField};
use crate::numeric::CompensatedSum;
use crate::report::VerificationReport;
use crate::rng::{RowStream, SeedKey, Stream};

/// Largest number of cells whose subsets are enumerated exactly.
pub const EXACT_MAX_CELLS: usize = 12;

/// A subset of `[1, width] x [1, height]`, one bit row per lattice row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    width: usize,
    height: usize,
    rows: Vec<u64>,
}

impl PointSet {
    pub fn empty(width: usize, height: usize) -> Self {
        Self { width, height, rows: vec![0; ensemble_words(width) * height] }
    }

    pub fn from_points(width: usize, height: usize, points: &[(usize, usize)]) -> Result<Self> {
        let mut ps = Self::empty(width, height);
        for &(x, y) in points {
            ps.insert(x, y)?;
        }
        Ok(ps)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn slot(&self, x: usize, y: usize) -> (usize, u64) {
        let wpr = ensemble_words(self.width);
        ((y - 1) * wpr + (x - 1) / 64, 1u64 << ((x - 1) % 64))
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<()> {
        if !(1..=self.width).contains(&x) || !(1..=self.height).contains(&y) {
            return Err(Error::domain(format!("point ({x}, {y}) outside {}x{} grid", self.width, self.height)));
        }
        let (idx, bit) = self.slot(x, y);
        self.rows[idx] |= bit;
        Ok(())
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        if !(1..=self.width).contains(&x) || !(1..=self.height).contains(&y) {
            return false;
        }
        let (idx, bit) = self.slot(x, y);
        self.rows[idx] & bit != 0
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&w| w == 0)
    }

    /// Points sorted by `x`, then `y`.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut pts: Vec<_> = (1..=self.width)
            .flat_map(|x| (1..=self.height).map(move |y| (x, y)))
            .filter(|&(x, y)| self.contains(x, y))
            .collect();
        pts.sort_unstable();
        pts
    }

    /// One `x y` line per point, sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, y) in self.points() {
            let _ = writeln!(out, "{x} {y}");
        }
        out
    }

    pub fn from_text(width: usize, height: usize, text: &str) -> Result<Self> {
        let mut ps = Self::empty(width, height);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::format(format!("line {}: expected `x y`, got {line:?}", lineno + 1));
            let mut parts = line.split_whitespace();
            let x = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let y = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if parts.next().is_some() {
                return Err(bad());
            }
            ps.insert(x, y).map_err(|e| Error::format(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(ps)
    }
}

/// Independent Bernoulli(`p`) cells. Cell `(x, y)` is present unless the
/// second uniform of its vertex stream falls below `1 - p`, which is the
/// event of staying empty in the complemented model with `b2 = 1 - p`.
pub fn sample_pointset(width: usize, height: usize, p: f64, key: impl Into<SeedKey>) -> Result<PointSet> {
    check_unit_interval("p", p)?;
    let key = key.into();
    let stay = 1.0 - p;
    let mut ps = PointSet::empty(width, height);
    let wpr = ensemble_words(width);
    for y in 1..=height {
        let mut stream = RowStream::new(key, Stream::Vertex, y as u64);
        let row = &mut ps.rows[(y - 1) * wpr..y * wpr];
        for x in 0..width {
            let (_, u2) = stream.next_pair();
            row[x / 64] |= ((u2 >= stay) as u64) << (x % 64);
        }
    }
    Ok(ps)
}

/// Longest strictly increasing chain in `ps ∩ [1, x] x [1, y]`, for all
/// `(x, y)`.
pub fn hammersley_height(ps: &PointSet) -> HeightField {
    let (w, h) = (ps.width, ps.height);
    let mut values = vec![0i64; (w + 1) * (h + 1)];
    for y in 1..=h {
        for x in 1..=w {
            let at = |x: usize, y: usize| values[y * (w + 1) + x];
            let v = at(x - 1, y).max(at(x, y - 1)).max(at(x - 1, y - 1) + ps.contains(x, y) as i64);
            values[y * (w + 1) + x] = v;
        }
    }
    HeightField::from_fn(w, h, |x, y| values[y * (w + 1) + x])
}

/// Height at the top-right corner, keeping one row of the recursion.
pub fn hammersley_corner(ps: &PointSet) -> u64 {
    let w = ps.width;
    let mut prev = vec![0u64; w + 1];
    let mut cur = vec![0u64; w + 1];
    for y in 1..=ps.height {
        for x in 1..=w {
            cur[x] = prev[x].max(cur[x - 1]).max(prev[x - 1] + ps.contains(x, y) as u64);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[w]
}

fn check_exact(width: usize, height: usize) -> Result<()> {
    if width * height > EXACT_MAX_CELLS {
        return Err(Error::resource(format!(
            "exact enumeration needs width * height <= {EXACT_MAX_CELLS}, got {width}x{height}"
        )));
    }
    Ok(())
}

/// Law of the corner height over all point sets, indexed by height.
pub fn hammersley_distribution(width: usize, height: usize, p: f64) -> Result<Vec<f64>> {
    check_unit_interval("p", p)?;
    check_exact(width, height)?;
    let cells = width * height;
    let mut sums = vec![CompensatedSum::new(); width.min(height) + 1];
    for subset in 0u64..(1 << cells) {
        let mut ps = PointSet::empty(width, height);
        for c in 0..cells {
            if subset >> c & 1 == 1 {
                ps.insert(c % width + 1, c / width + 1)?;
            }
        }
        let k = subset.count_ones() as i32;
        let prob = p.powi(k) * (1.0 - p).powi(cells as i32 - k);
        sums[hammersley_corner(&ps) as usize].add(prob);
    }
    Ok(sums.iter().map(CompensatedSum::value).collect())
}

/// Law of the corner height `H(width, height)` of the complemented model with
/// empty boundary, by walking every branch of the sequential sampler.
pub fn cs6v_height_distribution(width: usize, height: usize, b1: f64, b2: f64) -> Result<Vec<f64>> {
    check_unit_interval("b1", b1)?;
    check_unit_interval("b2", b2)?;
    check_exact(width, height)?;
    let mut sums = vec![CompensatedSum::new(); width.min(height) + 1];
    // below: north outputs of the previous row, bit x-1 for column x
    fn walk(cell: usize, width: usize, cells: usize, below: u32, west: bool, prob: f64, b: (f64, f64), sums: &mut [CompensatedSum]) {
        if prob == 0.0 {
            return;
        }
        if cell == cells {
            sums[below.count_ones() as usize].add(prob);
            return;
        }
        let x = cell % width;
        let south = below >> x & 1 == 1;
        let west = west && x > 0;
        let mut go = |north: bool, east: bool, q: f64| {
            let below = (below & !(1 << x)) | (north as u32) << x;
            walk(cell + 1, width, cells, below, east, prob * q, b, sums);
        };
        match (south, west) {
            (true, false) => go(true, false, 1.0),
            (false, true) => go(false, true, 1.0),
            (true, true) => {
                go(true, true, b.0);
                go(false, false, 1.0 - b.0);
            }
            (false, false) => {
                go(false, false, b.1);
                go(true, true, 1.0 - b.1);
            }
        }
    }
    walk(0, width, width * height, 0, false, 1.0, (b1, b2), &mut sums);
    Ok(sums.iter().map(CompensatedSum::value).collect())
}

/// Compares the corner-height laws of the Hammersley process and of the
/// complemented model at `b1 = 0`, `b2 = 1 - p`.
pub fn verify_hammersley_equivalence(width: usize, height: usize, p: f64) -> Result<VerificationReport> {
    check_unit_interval("p", p)?;
    let lattice = cs6v_height_distribution(width, height, 0.0, 1.0 - p)?;
    let points = hammersley_distribution(width, height, p)?;
    let mut report = VerificationReport::new(format!("hammersley equivalence {width}x{height} p={p}"));
    for (k, (a, b)) in lattice.iter().zip(&points).enumerate() {
        report.check_close((a - b).abs(), 1e-12, || format!("P(H = {k}): lattice {a} vs points {b}"));
    }
    let total: f64 = lattice.iter().sum();
    report.check_close((total - 1.0).abs(), 1e-12, || format!("lattice law sums to {total}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_cs6v, ParameterField};

    /// Longest chain by trying every subset of points, smallest first.
    fn brute_force_chain(points: &[(usize, usize)], x: usize, y: usize) -> i64 {
        let inside: Vec<_> = points.iter().copied().filter(|&(a, b)| a <= x && b <= y).collect();
        let mut best = 0;
        for subset in 0u32..(1 << inside.len()) {
            let mut chain: Vec<_> = (0..inside.len()).filter(|i| subset >> i & 1 == 1).map(|i| inside[i]).collect();
            chain.sort_unstable();
            if chain.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                best = best.max(chain.len() as i64);
            }
        }
        best
    }

    #[test]
    fn published_nine_point_example() {
        let pts = [(1, 1), (1, 6), (4, 1), (2, 4), (3, 2), (3, 7), (5, 5), (6, 3), (7, 6)];
        let ps = PointSet::from_points(8, 8, &pts).unwrap();
        let h = hammersley_height(&ps);
        assert_eq!(h.get(8, 8), 4);
        assert_eq!(hammersley_corner(&ps), 4);
    }

    #[test]
    fn recursion_matches_brute_force() {
        for seed in 0..30 {
            let ps = sample_pointset(5, 5, 0.35, seed).unwrap();
            let pts = ps.points();
            let h = hammersley_height(&ps);
            for y in 0..=5 {
                for x in 0..=5 {
                    assert_eq!(h.get(x, y), brute_force_chain(&pts, x, y));
                }
            }
        }
    }

    #[test]
    fn simple_point_sets() {
        let h = hammersley_height(&PointSet::empty(4, 3));
        assert!((0..=4).all(|x| (0..=3).all(|y| h.get(x, y) == 0)));
        let h = hammersley_height(&PointSet::from_points(5, 5, &[(2, 3)]).unwrap());
        for y in 0..=5 {
            for x in 0..=5 {
                assert_eq!(h.get(x, y), (x >= 2 && y >= 3) as i64);
            }
        }
    }

    #[test]
    fn sampling_extremes_and_density() {
        assert!(sample_pointset(30, 30, 0.0, 1).unwrap().is_empty());
        assert_eq!(sample_pointset(30, 30, 1.0, 1).unwrap().len(), 900);
        assert!(sample_pointset(3, 3, 1.5, 1).is_err());
        let ps = sample_pointset(1000, 1000, 0.3, 2).unwrap();
        let n: f64 = 1e6;
        let sigma = (0.3 * 0.7 / n).sqrt();
        assert!((ps.len() as f64 / n - 0.3).abs() <= 3.0 * sigma);
    }

    #[test]
    fn text_round_trip() {
        let ps = sample_pointset(9, 7, 0.4, 3).unwrap();
        let text = ps.to_text();
        assert_eq!(PointSet::from_text(9, 7, &text).unwrap(), ps);
        assert!(PointSet::from_text(9, 7, "10 1\n").is_err());
        assert!(PointSet::from_text(9, 7, "1 x\n").is_err());
        assert!(PointSet::from_text(9, 7, "1 1 1\n").is_err());
        assert_eq!(PointSet::from_text(2, 2, "2 1\n1 2\n").unwrap().to_text(), "1 2\n2 1\n");
    }

    #[test]
    fn exact_laws_on_one_cell() {
        let h = hammersley_distribution(1, 1, 0.4).unwrap();
        let c = cs6v_height_distribution(1, 1, 0.0, 0.6).unwrap();
        assert!((h[1] - 0.4).abs() < 1e-15 && (c[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn equivalence_small_grids() {
        for (w, h, p) in [(2, 2, 0.5), (3, 3, 0.25), (2, 3, 0.75), (4, 3, 0.5)] {
            let r = verify_hammersley_equivalence(w, h, p).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(matches!(verify_hammersley_equivalence(4, 4, 0.5), Err(Error::Resource(_))));
    }

    #[test]
    fn coupling_is_pathwise() {
        for seed in 0..5 {
            let p = 0.3;
            let field = ParameterField::homogeneous(0.0, 1.0 - p).unwrap();
            let lattice = sample_cs6v(60, 45, &field, seed).unwrap().height_H().unwrap();
            let points = hammersley_height(&sample_pointset(60, 45, p, seed).unwrap());
            assert_eq!(lattice, points);
        }
    }
}
