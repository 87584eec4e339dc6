//! The resolved run description. Flags compile into a [`RunConfig`]; a JSON
//! document deserializes into the same type.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use s6v_core::lattice::{make_coloring, parse_direction, ColoringScheme, Direction, FieldSpec, Model, ParameterField};

/// Which experiment to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    Sample,
    Converge,
    Hammersley,
    ExportGolden,
}

/// Output locations. Paths that are absent are not written; reports without
/// a path go to stdout.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Main artifact: JSON report, binary ensemble or golden table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    /// Readable JSON form of a sampled ensemble.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    /// `"x,y"` with positive rational entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    /// Number of colored blocks for the colored sampler.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    /// Largest color count for the exhaustive verifiers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    /// `(b1, b2)` points for the exhaustive verifiers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<(f64, f64)>>,
    /// Point density of the Hammersley pointset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Largest side of the exactly enumerated Hammersley rectangles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_max: Option<usize>,
    /// Bound on the largest-size error against the reference, if checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Config problems, reported as `{"kind": "config", ...}`.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl From<s6v_core::Error> for ConfigError {
    fn from(e: s6v_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// What the run needs, checked before any work starts.
pub enum Plan {
    Verify { colors: usize, grid: Vec<(f64, f64)> },
    Sample { model: Model, field: ParameterField, width: usize, height: usize, scheme: Option<(ColoringScheme, usize)>, seed: u64 },
    Converge { field: ParameterField, direction: Direction, sizes: Vec<u64>, replicas: u64, seed: u64, tolerance: Option<f64> },
    Hammersley { p: f64, direction: Direction, sizes: Vec<u64>, replicas: u64, seed: u64, exact_max: usize, tolerance: Option<f64> },
    ExportGolden,
}

fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T, ConfigError> {
    value.clone().ok_or_else(|| ConfigError(format!("missing required setting `{name}`")))
}

fn writable(path: &Path) -> Result<(), ConfigError> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if parent.is_dir() {
        Ok(())
    } else {
        Err(ConfigError(format!("output directory {} does not exist", parent.display())))
    }
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            model: None,
            field: None,
            direction: None,
            sizes: Vec::new(),
            replicas: None,
            seed: None,
            width: None,
            height: None,
            blocks: None,
            colors: None,
            grid: None,
            p: None,
            exact_max: None,
            tolerance: None,
            output: OutputConfig::default(),
        }
    }

    fn field(&self) -> Result<ParameterField, ConfigError> {
        let spec = require(&self.field, "field")?;
        Ok(ParameterField::new(&spec.b1, &spec.b2)?)
    }

    fn direction(&self) -> Result<Direction, ConfigError> {
        Ok(parse_direction(&require(&self.direction, "direction")?)?)
    }

    fn plan_sizes(&self) -> Result<(Vec<u64>, u64), ConfigError> {
        if self.sizes.is_empty() {
            return Err(ConfigError("missing required setting `sizes`".into()));
        }
        Ok((self.sizes.clone(), require(&self.replicas, "replicas")?))
    }

    fn check_tolerance(&self) -> Result<(), ConfigError> {
        match self.tolerance {
            Some(t) if t.is_nan() || t < 0.0 => Err(ConfigError(format!("tolerance must be nonnegative, got {t}"))),
            _ => Ok(()),
        }
    }

    /// Validates every setting the command uses and resolves it.
    pub fn plan(&self) -> Result<Plan, ConfigError> {
        let o = &self.output;
        for path in [&o.out, &o.csv, &o.svg, &o.json].into_iter().flatten() {
            writable(path)?;
        }
        match self.command {
            CommandKind::Verify => {
                let colors = self.colors.unwrap_or(3);
                if colors == 0 {
                    return Err(ConfigError("colors must be positive".into()));
                }
                let grid = self.grid.clone().unwrap_or_else(s6v_core::lmatrix::default_grid);
                if grid.iter().any(|&(b1, b2)| !(0.0..=1.0).contains(&b1) || !(0.0..=1.0).contains(&b2)) {
                    return Err(ConfigError("grid points must lie in [0,1]^2".into()));
                }
                Ok(Plan::Verify { colors, grid })
            }
            CommandKind::Sample => {
                let model = self.model.unwrap_or(Model::S6v);
                let field = self.field()?;
                let seed = require(&self.seed, "seed")?;
                match model {
                    Model::S6v | Model::Cs6v => {
                        let width = require(&self.width, "width")?;
                        let height = require(&self.height, "height")?;
                        Ok(Plan::Sample { model, field, width, height, scheme: None, seed })
                    }
                    Model::ColoredCs6v => {
                        let (x, y) = self.direction()?;
                        let blocks = require(&self.blocks, "blocks")?;
                        let scheme = make_coloring(x, y, &field)?;
                        let (width, height) = scheme.extent(blocks as u64);
                        Ok(Plan::Sample { model, field, width, height, scheme: Some((scheme, blocks)), seed })
                    }
                    Model::TwoColored => Err(ConfigError("the two-colored model needs boundary data and is not sampled from the command line".into())),
                }
            }
            CommandKind::Converge => {
                let field = self.field()?;
                let direction = self.direction()?;
                let (sizes, replicas) = self.plan_sizes()?;
                let seed = require(&self.seed, "seed")?;
                self.check_tolerance()?;
                Ok(Plan::Converge { field, direction, sizes, replicas, seed, tolerance: self.tolerance })
            }
            CommandKind::Hammersley => {
                let p = require(&self.p, "p")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(ConfigError(format!("p must lie in [0,1], got {p}")));
                }
                let direction = self.direction()?;
                let (sizes, replicas) = self.plan_sizes()?;
                let seed = require(&self.seed, "seed")?;
                self.check_tolerance()?;
                let exact_max = self.exact_max.unwrap_or(3);
                Ok(Plan::Hammersley { p, direction, sizes, replicas, seed, exact_max, tolerance: self.tolerance })
            }
            CommandKind::ExportGolden => Ok(Plan::ExportGolden),
        }
    }
}
