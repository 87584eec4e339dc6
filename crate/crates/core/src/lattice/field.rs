use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};

/// Periodic vertex parameters. Entry `(a, b)` with `a < I`, `b < J` serves
/// every vertex `(x, y)` with `x - 1 = a mod I` and `y - 1 = b mod J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldSpec", into = "FieldSpec")]
pub struct ParameterField {
    period_x: usize,
    period_y: usize,
    // row-major in b, i.e. index a + I * b
    b1: Vec<f64>,
    b2: Vec<f64>,
}

/// Serialized form: `b1[a][b]` and `b2[a][b]` as nested arrays of size `I x J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub b1: Vec<Vec<f64>>,
    pub b2: Vec<Vec<f64>>,
}

impl ParameterField {
    /// Builds a field from `I x J` arrays indexed `[a][b]`.
    pub fn new(b1: &[Vec<f64>], b2: &[Vec<f64>]) -> Result<Self> {
        let period_x = b1.len();
        let period_y = b1.first().map_or(0, Vec::len);
        if period_x == 0 || period_y == 0 {
            return Err(Error::domain("parameter arrays must be nonempty"));
        }
        if b2.len() != period_x
            || b1.iter().chain(b2).any(|row| row.len() != period_y)
        {
            return Err(Error::domain(format!("parameter arrays must both be {period_x} x {period_y}")));
        }
        let mut flat1 = vec![0.0; period_x * period_y];
        let mut flat2 = vec![0.0; period_x * period_y];
        for a in 0..period_x {
            for b in 0..period_y {
                check_unit_interval("b1", b1[a][b])?;
                check_unit_interval("b2", b2[a][b])?;
                flat1[a + period_x * b] = b1[a][b];
                flat2[a + period_x * b] = b2[a][b];
            }
        }
        Ok(Self { period_x, period_y, b1: flat1, b2: flat2 })
    }

    pub fn homogeneous(b1: f64, b2: f64) -> Result<Self> {
        Self::new(&[vec![b1]], &[vec![b2]])
    }

    pub fn period_x(&self) -> usize {
        self.period_x
    }

    pub fn period_y(&self) -> usize {
        self.period_y
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b1.iter().all(|&v| v == self.b1[0]) && self.b2.iter().all(|&v| v == self.b2[0])
    }

    #[inline]
    fn index(&self, x: usize, y: usize) -> usize {
        (x - 1) % self.period_x + self.period_x * ((y - 1) % self.period_y)
    }

    /// Parameters `(b1, b2)` at vertex `(x, y)`, with `x, y >= 1`.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let idx = self.index(x, y);
        (self.b1[idx], self.b2[idx])
    }

    /// Parameters of the `I` residues of row `y`.
    pub(crate) fn row(&self, y: usize) -> (&[f64], &[f64]) {
        let start = self.period_x * ((y - 1) % self.period_y);
        (&self.b1[start..start + self.period_x], &self.b2[start..start + self.period_x])
    }

    pub fn spec(&self) -> FieldSpec {
        let grid = |flat: &[f64]| {
            (0..self.period_x)
                .map(|a| (0..self.period_y).map(|b| flat[a + self.period_x * b]).collect())
                .collect()
        };
        FieldSpec { b1: grid(&self.b1), b2: grid(&self.b2) }
    }
}

impl TryFrom<FieldSpec> for ParameterField {
    type Error = Error;

    fn try_from(spec: FieldSpec) -> Result<Self> {
        Self::new(&spec.b1, &spec.b2)
    }
}

impl From<ParameterField> for FieldSpec {
    fn from(field: ParameterField) -> Self {
        field.spec()
    }
}
