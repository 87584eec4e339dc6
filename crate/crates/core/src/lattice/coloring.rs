use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::field::ParameterField;
use crate::error::{Error, Result};

/// Positive rational direction `(x, y)`.
pub type Direction = (Ratio<u64>, Ratio<u64>);

/// Parses `"p"` or `"p/q"` into a positive rational.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::domain(format!("cannot parse {text:?} as a positive rational"));
    let (num, den) = match text.trim().split_once('/') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (text.trim().parse().map_err(|_| bad())?, 1u64),
    };
    if num == 0 || den == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

/// Parses `"x,y"` such as `"3/2,1"`.
pub fn parse_direction(text: &str) -> Result<Direction> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| Error::domain(format!("direction {text:?} must be of the form x,y")))?;
    Ok((parse_ratio(x)?, parse_ratio(y)?))
}

pub fn render_ratio(r: Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Block structure of the colored quadrant: vertex `(a, b)` receives color
/// `-k` for the smallest `k` with `a` in the `k`-th column band
/// `[(k-1) bx + 1, k bx]` or `b` in the `k`-th row band. The colors thus
/// form nested L-shaped layers opening towards the upper right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringScheme {
    #[serde(with = "ratio_text")]
    pub x: Ratio<u64>,
    #[serde(with = "ratio_text")]
    pub y: Ratio<u64>,
    /// Smallest positive integer making `N x / I` and `N y / J` integral.
    pub n: u64,
    /// Block width `N x`.
    pub bx: u64,
    /// Block height `N y`.
    pub by: u64,
}

mod ratio_text {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render_ratio(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio<u64>, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

/// Builds the coloring for direction `(x, y)` and the periods of `field`.
pub fn make_coloring(x: Ratio<u64>, y: Ratio<u64>, field: &ParameterField) -> Result<ColoringScheme> {
    if *x.numer() == 0 || *y.numer() == 0 {
        return Err(Error::domain("direction must be positive"));
    }
    let qx = *(x / Ratio::from_integer(field.period_x() as u64)).denom();
    let qy = *(y / Ratio::from_integer(field.period_y() as u64)).denom();
    let n = qx.lcm(&qy);
    let scaled = |r: Ratio<u64>| (r * Ratio::from_integer(n)).to_integer();
    Ok(ColoringScheme { x, y, n, bx: scaled(x), by: scaled(y) })
}

impl ColoringScheme {
    /// Block index `k` of vertex `(a, b)`; its color is `-k`.
    pub fn block(&self, a: u64, b: u64) -> u64 {
        a.div_ceil(self.bx).min(b.div_ceil(self.by))
    }

    /// Grid extents covered by `n_blocks` layers.
    pub fn extent(&self, n_blocks: u64) -> (usize, usize) {
        ((self.bx * n_blocks) as usize, (self.by * n_blocks) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> Ratio<u64> {
        Ratio::new(a, b)
    }

    fn periodic(i: usize, j: usize) -> ParameterField {
        ParameterField::new(&vec![vec![0.5; j]; i], &vec![vec![0.5; j]; i]).unwrap()
    }

    #[test]
    fn block_sizes() {
        let s = make_coloring(r(2, 1), r(1, 1), &periodic(3, 2)).unwrap();
        assert_eq!((s.n, s.bx, s.by), (6, 12, 6));
        let s = make_coloring(r(1, 1), r(1, 1), &periodic(1, 1)).unwrap();
        assert_eq!((s.n, s.bx, s.by), (1, 1, 1));
        let s = make_coloring(r(3, 2), r(1, 1), &periodic(1, 1)).unwrap();
        assert_eq!((s.n, s.bx, s.by), (2, 3, 2));
        let s = make_coloring(r(1, 3), r(1, 2), &periodic(2, 2)).unwrap();
        assert_eq!((s.n, s.bx, s.by), (12, 4, 6));
    }

    #[test]
    fn minimality() {
        for (x, y, i, j) in [(r(2, 1), r(1, 1), 3, 2), (r(5, 3), r(7, 4), 2, 3), (r(1, 1), r(2, 1), 4, 6)] {
            let s = make_coloring(x, y, &periodic(i, j)).unwrap();
            let ok = |m: u64| {
                (x * Ratio::from_integer(m) / Ratio::from_integer(i as u64)).is_integer()
                    && (y * Ratio::from_integer(m) / Ratio::from_integer(j as u64)).is_integer()
            };
            assert!(ok(s.n));
            assert!((1..s.n).all(|m| !ok(m)));
        }
    }

    #[test]
    fn layer_colors() {
        let s = make_coloring(r(2, 1), r(1, 1), &periodic(3, 2)).unwrap();
        assert_eq!(s.block(1, 1), 1);
        assert_eq!(s.block(12, 6), 1);
        assert_eq!(s.block(13, 1), 1);
        assert_eq!(s.block(1, 7), 1);
        assert_eq!(s.block(13, 7), 2);
        assert_eq!(s.block(24, 12), 2);
        assert_eq!(s.block(25, 3), 1);
        assert_eq!(s.block(25, 13), 3);
        assert_eq!(s.block(100, 13), 3);
        assert_eq!(s.extent(3), (36, 18));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_direction("3/2,1").unwrap(), (r(3, 2), r(1, 1)));
        assert!(parse_direction("0,1").is_err());
        assert!(parse_direction("1").is_err());
        assert!(parse_ratio("1/0").is_err());
        assert_eq!(render_ratio(r(4, 2)), "2");
        let s = make_coloring(r(3, 2), r(1, 1), &periodic(1, 1)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"3/2\""));
        assert_eq!(serde_json::from_str::<ColoringScheme>(&text).unwrap(), s);
    }
}
