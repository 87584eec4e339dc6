//! Binary and JSON serialization of ensembles.
//!
//! Binary layout, all integers little-endian:
//! `"S6VE"`, version `u16`, model tag `u8`, reserved `u8`, width `u64`,
//! height `u64`, colors `u32`, words per row `u32`, then the vertical
//! planes, horizontal planes, left boundary planes and bottom boundary
//! planes as `u64` words, and finally a `u32` length followed by that many
//! bytes of provenance JSON (possibly empty).

use serde::{Deserialize, Serialize};

use super::ensemble::{words_for, Model, PathEnsemble};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"S6VE";
pub const FORMAT_VERSION: u16 = 1;

pub fn to_binary(e: &PathEnsemble, provenance: Option<&str>) -> Vec<u8> {
    let (v, h, left, bottom) = e.planes();
    let mut out = Vec::with_capacity(32 + 8 * (v.len() + h.len() + left.len() + bottom.len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(e.model().tag());
    out.push(0);
    out.extend_from_slice(&(e.width() as u64).to_le_bytes());
    out.extend_from_slice(&(e.height() as u64).to_le_bytes());
    out.extend_from_slice(&(e.n_colors() as u32).to_le_bytes());
    out.extend_from_slice(&(e.words_per_row() as u32).to_le_bytes());
    for plane in [v, h, left, bottom] {
        for w in plane {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    let prov = provenance.unwrap_or("").as_bytes();
    out.extend_from_slice(&(prov.len() as u32).to_le_bytes());
    out.extend_from_slice(prov);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::format("truncated ensemble file"))?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn words(&mut self, dst: &mut [u64]) -> Result<()> {
        for w in dst {
            *w = self.u64()?;
        }
        Ok(())
    }
}

/// Inverse of [`to_binary`]; returns the ensemble and its provenance text.
pub fn from_binary(bytes: &[u8]) -> Result<(PathEnsemble, String)> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::format("bad magic"));
    }
    let version = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::format(format!("unsupported format version {version}")));
    }
    let model = Model::from_tag(r.take(2)?[0])?;
    let width = r.u64()? as usize;
    let height = r.u64()? as usize;
    let n_colors = r.u32()? as usize;
    let wpr = r.u32()? as usize;
    if wpr != words_for(width) {
        return Err(Error::format("words per row does not match width"));
    }
    let plane_words = wpr.saturating_mul(height).saturating_mul(n_colors);
    if plane_words.saturating_mul(16) > bytes.len() {
        return Err(Error::format("truncated ensemble file"));
    }
    let mut e = PathEnsemble::empty(model, width, height, n_colors).map_err(|err| Error::format(err.to_string()))?;
    {
        let (v, h, left, bottom) = e.planes_mut();
        r.words(v)?;
        r.words(h)?;
        r.words(left)?;
        r.words(bottom)?;
    }
    let len = r.u32()? as usize;
    let prov = String::from_utf8(r.take(len)?.to_vec()).map_err(|_| Error::format("provenance is not UTF-8"))?;
    if r.pos != bytes.len() {
        return Err(Error::format("trailing bytes after ensemble"));
    }
    Ok((e, prov))
}

/// Readable lossless form: every plane as strings of `0`/`1`, column `x`
/// at character `x - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub model: Model,
    pub width: usize,
    pub height: usize,
    pub n_colors: usize,
    /// `[color][row]`, rows from `y = 1` upward.
    pub v: Vec<Vec<String>>,
    pub h: Vec<Vec<String>>,
    /// `[color]`, character `y - 1` is row `y`.
    pub left: Vec<String>,
    /// `[color]`, character `x - 1` is column `x`.
    pub bottom: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

fn bits(len: usize, get: impl Fn(usize) -> bool) -> String {
    (1..=len).map(|i| if get(i) { '1' } else { '0' }).collect()
}

pub fn to_json(e: &PathEnsemble, provenance: Option<serde_json::Value>) -> EnsembleJson {
    let colors = 1..=e.n_colors();
    let plane = |get: &dyn Fn(usize, usize, usize) -> bool| -> Vec<Vec<String>> {
        colors.clone().map(|c| (1..=e.height()).map(|y| bits(e.width(), |x| get(c, x, y))).collect()).collect()
    };
    EnsembleJson {
        model: e.model(),
        width: e.width(),
        height: e.height(),
        n_colors: e.n_colors(),
        v: plane(&|c, x, y| e.v(c, x, y)),
        h: plane(&|c, x, y| e.h(c, x, y)),
        left: colors.clone().map(|c| bits(e.height(), |y| e.left(c, y))).collect(),
        bottom: colors.map(|c| bits(e.width(), |x| e.bottom(c, x))).collect(),
        provenance,
    }
}

fn parse_bits(text: &str, len: usize) -> Result<Vec<bool>> {
    if text.len() != len {
        return Err(Error::format(format!("bit string of length {} where {len} expected", text.len())));
    }
    text.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::format(format!("bad bit character {ch:?}"))),
        })
        .collect()
}

pub fn from_json(doc: &EnsembleJson) -> Result<PathEnsemble> {
    let mut e = PathEnsemble::empty(doc.model, doc.width, doc.height, doc.n_colors)
        .map_err(|err| Error::format(err.to_string()))?;
    let n = doc.n_colors;
    if doc.v.len() != n || doc.h.len() != n || doc.left.len() != n || doc.bottom.len() != n {
        return Err(Error::format("plane count does not match color count"));
    }
    for c in 1..=n {
        for (planes, is_v) in [(&doc.v, true), (&doc.h, false)] {
            if planes[c - 1].len() != doc.height {
                return Err(Error::format("row count does not match height"));
            }
            for (y, row) in planes[c - 1].iter().enumerate() {
                for (x, b) in parse_bits(row, doc.width)?.into_iter().enumerate() {
                    if is_v {
                        e.set_v(c, x + 1, y + 1, b);
                    } else {
                        e.set_h(c, x + 1, y + 1, b);
                    }
                }
            }
        }
        for (y, b) in parse_bits(&doc.left[c - 1], doc.height)?.into_iter().enumerate() {
            e.set_left(c, y + 1, b);
        }
        for (x, b) in parse_bits(&doc.bottom[c - 1], doc.width)?.into_iter().enumerate() {
            e.set_bottom(c, x + 1, b);
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_colored_cs6v, sample_s6v, make_coloring, ParameterField};
    use num_rational::Ratio;

    #[test]
    fn binary_round_trip() {
        let field = ParameterField::homogeneous(0.3, 0.6).unwrap();
        let e = sample_s6v(70, 11, &field, 4).unwrap();
        let bytes = to_binary(&e, Some(r#"{"seed":4}"#));
        assert_eq!(&bytes[..4], MAGIC);
        let (back, prov) = from_binary(&bytes).unwrap();
        assert_eq!(back, e);
        assert_eq!(prov, r#"{"seed":4}"#);
        assert!(from_binary(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(from_binary(&bad).is_err());
    }

    #[test]
    fn json_round_trip_colored() {
        let field = ParameterField::homogeneous(0.3, 0.6).unwrap();
        let scheme = make_coloring(Ratio::new(2, 1), Ratio::new(1, 1), &field).unwrap();
        let e = sample_colored_cs6v(3, &scheme, &field, 2).unwrap();
        let doc = to_json(&e, None);
        let text = serde_json::to_string(&doc).unwrap();
        let back: EnsembleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(from_json(&back).unwrap(), e);
        let (bin, _) = from_binary(&to_binary(&e, None)).unwrap();
        assert_eq!(bin, e);
    }

    #[test]
    fn json_rejects_bad_bits() {
        let field = ParameterField::homogeneous(0.3, 0.6).unwrap();
        let mut doc = to_json(&sample_s6v(3, 2, &field, 1).unwrap(), None);
        doc.v[0][0] = "01x".into();
        assert!(from_json(&doc).is_err());
        doc.v[0][0] = "01".into();
        assert!(from_json(&doc).is_err());
    }
}
