use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of colors a [`ColorVector`] can carry.
pub const MAX_COLORS: usize = 32;

pub(crate) const fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Bit `r-1` of the result is the parity of bits `0..r` of `bits`.
pub(crate) const fn prefix_parity(bits: u32) -> u32 {
    let mut p = bits;
    p ^= p << 1;
    p ^= p << 2;
    p ^= p << 4;
    p ^= p << 8;
    p ^= p << 16;
    p
}

/// Inverse of [`prefix_parity`] on the low `n` bits.
pub(crate) const fn from_prefix_parity(parity: u32, n: usize) -> u32 {
    (parity ^ (parity << 1)) & low_mask(n)
}

/// Presence of each of `n` colors on one edge. Bit `r-1` of the word is
/// color `r`; color 1 has the highest priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorVector {
    n: u8,
    bits: u32,
}

impl ColorVector {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_COLORS {
            return Err(Error::domain(format!("color count {n} is not in 1..={MAX_COLORS}")));
        }
        if bits & !low_mask(n) != 0 {
            return Err(Error::domain(format!("occupancy word {bits:#x} uses more than {n} colors")));
        }
        Ok(Self { n: n as u8, bits })
    }

    pub(crate) const fn from_raw(n: usize, bits: u32) -> Self {
        Self { n: n as u8, bits: bits & low_mask(n) }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Builds a vector from per-color occupancies `(x_1, ..., x_n)`.
    pub fn from_occupancy(xs: &[u8]) -> Result<Self> {
        let mut bits = 0;
        for (r, &x) in xs.iter().enumerate() {
            match x {
                0 => {}
                1 if r < MAX_COLORS => bits |= 1 << r,
                _ => return Err(Error::domain(format!("occupancy {x} at color {} is not 0 or 1", r + 1))),
            }
        }
        Self::new(xs.len(), bits)
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Occupancy of color `r` (1-based).
    pub fn get(self, r: usize) -> bool {
        r >= 1 && r <= self.n() && (self.bits >> (r - 1)) & 1 == 1
    }

    pub fn line_count(self) -> u32 {
        self.bits.count_ones()
    }

    /// The first `m` coordinates.
    pub fn prefix(self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n() {
            return Err(Error::domain(format!("prefix length {m} is not in 1..={}", self.n())));
        }
        Ok(Self::from_raw(m, self.bits))
    }

    /// All `2^n` vectors in increasing word order.
    pub fn all(n: usize) -> impl Iterator<Item = ColorVector> {
        assert!((1..=16).contains(&n), "enumeration limited to 16 colors");
        (0..1u32 << n).map(move |bits| ColorVector::from_raw(n, bits))
    }
}

impl fmt::Display for ColorVector {
    /// Bit string, lowest color first: `(1,0,1,1)` renders as `1011`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 1..=self.n() {
            f.write_str(if self.get(r) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ColorVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let xs = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::format(format!("bad color bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_occupancy(&xs).map_err(|e| Error::format(e.to_string()))
    }
}

impl Serialize for ColorVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The `r`-fold projection: parity of the first `r` coordinates.
pub fn fold_projection(x: ColorVector, r: usize) -> Result<bool> {
    if r == 0 || r > x.n() {
        return Err(Error::domain(format!("projection level {r} is not in 1..={}", x.n())));
    }
    Ok((prefix_parity(x.bits) >> (r - 1)) & 1 == 1)
}

/// Occupancies on the bottom, left, top and right edges of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexKey {
    pub i: ColorVector,
    pub j: ColorVector,
    pub k: ColorVector,
    pub l: ColorVector,
}

impl VertexKey {
    pub fn new(i: ColorVector, j: ColorVector, k: ColorVector, l: ColorVector) -> Result<Self> {
        let n = i.n();
        if j.n() != n || k.n() != n || l.n() != n {
            return Err(Error::domain("vertex key vectors have different color counts"));
        }
        Ok(Self { i, j, k, l })
    }

    pub fn n(&self) -> usize {
        self.i.n()
    }

    /// All `16^n` keys, ordered by `(i, j, k, l)` words.
    pub fn all(n: usize) -> impl Iterator<Item = VertexKey> {
        assert!((1..=4).contains(&n), "key enumeration limited to 4 colors");
        let side = 1u32 << n;
        (0..side.pow(4)).map(move |idx| {
            let word = |shift: u32| ColorVector::from_raw(n, (idx >> (shift * n as u32)) & (side - 1));
            VertexKey { i: word(3), j: word(2), k: word(1), l: word(0) }
        })
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.i, self.j, self.k, self.l)
    }
}

/// A partition of `{1, ..., n}` into consecutive blocks
/// `{1..r_1}, {r_1+1..r_2}, ..., {r_{m-1}+1..r_m}` with `r_m = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    cuts: Vec<usize>,
}

impl Partition {
    pub fn new(cuts: Vec<usize>) -> Result<Self> {
        let Some(&last) = cuts.last() else {
            return Err(Error::domain("partition has no blocks"));
        };
        if cuts[0] < 1 {
            return Err(Error::domain("first cut point must be at least 1"));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!("cut points {cuts:?} are not strictly increasing")));
        }
        if last > MAX_COLORS {
            return Err(Error::domain(format!("partition of {last} colors exceeds {MAX_COLORS}")));
        }
        Ok(Self { cuts })
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    pub fn whole(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// All `2^(n-1)` contiguous partitions of `{1, ..., n}`.
    pub fn all(n: usize) -> Vec<Partition> {
        assert!((1..=16).contains(&n));
        (0..1u32 << (n - 1))
            .map(|mask| {
                let mut cuts: Vec<usize> = (1..n).filter(|r| (mask >> (r - 1)) & 1 == 1).collect();
                cuts.push(n);
                Partition { cuts }
            })
            .collect()
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// The number of colors partitioned.
    pub fn n(&self) -> usize {
        *self.cuts.last().expect("partition is nonempty")
    }

    /// Number of blocks, `ℓ(π)`.
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut start = 1;
        for (idx, &cut) in self.cuts.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            let block: Vec<String> = (start..=cut).map(|r| r.to_string()).collect();
            write!(f, "{{{}}}", block.join(","))?;
            start = cut + 1;
        }
        f.write_str("}")
    }
}

/// Merges each block of colors into one color, keeping the block parity.
pub fn partition_projection(x: ColorVector, pi: &Partition) -> Result<ColorVector> {
    if x.n() != pi.n() {
        return Err(Error::domain(format!("vector has {} colors, partition covers {}", x.n(), pi.n())));
    }
    Ok(ColorVector::from_raw(pi.len(), project_word(x.bits, pi)))
}

pub(crate) fn project_word(bits: u32, pi: &Partition) -> u32 {
    let parity = prefix_parity(bits);
    let mut out = 0;
    let mut previous = 0u32;
    for (block, &cut) in pi.cuts.iter().enumerate() {
        let level = (parity >> (cut - 1)) & 1;
        out |= (level ^ previous) << block;
        previous = level;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(s: &str) -> ColorVector {
        s.parse().unwrap()
    }

    #[test]
    fn fold_projection_example() {
        let x = cv("1011");
        let levels: Vec<bool> = (1..=4).map(|r| fold_projection(x, r).unwrap()).collect();
        assert_eq!(levels, [true, true, false, true]);
        for r in 1..=5 {
            assert!(!fold_projection(ColorVector::empty(5).unwrap(), r).unwrap());
        }
    }

    #[test]
    fn fold_projection_range() {
        let x = cv("10");
        assert!(matches!(fold_projection(x, 0), Err(Error::Domain(_))));
        assert!(matches!(fold_projection(x, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn color_vector_validation() {
        assert!(ColorVector::new(0, 0).is_err());
        assert!(ColorVector::new(33, 0).is_err());
        assert!(ColorVector::new(2, 0b100).is_err());
        assert!(ColorVector::new(32, u32::MAX).is_ok());
        assert!(ColorVector::from_occupancy(&[1, 2]).is_err());
        assert_eq!(cv("10").bits(), 1);
        assert_eq!(cv("01").bits(), 2);
    }

    #[test]
    fn partition_projection_examples() {
        let pi = Partition::new(vec![2, 3]).unwrap();
        assert_eq!(partition_projection(cv("110"), &pi).unwrap(), cv("00"));
        let pi = Partition::new(vec![3, 4]).unwrap();
        assert_eq!(partition_projection(cv("1011"), &pi).unwrap(), cv("01"));
        assert_eq!(pi.to_string(), "{{1,2,3},{4}}");
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![0, 2]).is_err());
        assert!(Partition::new(vec![2, 2]).is_err());
        assert!(Partition::new(vec![3, 1]).is_err());
        let pi = Partition::new(vec![1, 3]).unwrap();
        assert!(partition_projection(cv("10"), &pi).is_err());
        assert_eq!(Partition::all(3).len(), 4);
        assert!(Partition::all(3).iter().all(|p| p.n() == 3));
    }

    #[test]
    fn key_enumeration_covers_all_words() {
        let keys: Vec<VertexKey> = VertexKey::all(1).collect();
        assert_eq!(keys.len(), 16);
        let distinct: std::collections::BTreeSet<_> = VertexKey::all(2).collect();
        assert_eq!(distinct.len(), 256);
    }

    proptest! {
        #[test]
        fn singleton_partition_is_identity(n in 1usize..=32, bits in any::<u32>()) {
            let x = ColorVector::from_raw(n, bits);
            prop_assert_eq!(partition_projection(x, &Partition::singletons(n).unwrap()).unwrap(), x);
        }

        #[test]
        fn prefix_parity_round_trips(n in 1usize..=32, bits in any::<u32>()) {
            let x = ColorVector::from_raw(n, bits);
            let p = prefix_parity(x.bits()) & low_mask(n);
            prop_assert_eq!(from_prefix_parity(p, n), x.bits());
            for r in 1..=n {
                let direct = (1..=r).filter(|&m| x.get(m)).count() % 2 == 1;
                prop_assert_eq!(fold_projection(x, r).unwrap(), direct);
            }
        }

        #[test]
        fn display_parse_round_trip(n in 1usize..=32, bits in any::<u32>()) {
            let x = ColorVector::from_raw(n, bits);
            prop_assert_eq!(x.to_string().parse::<ColorVector>().unwrap(), x);
        }
    }
}
