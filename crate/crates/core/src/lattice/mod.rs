//! Periodic parameter fields, path ensembles on finite grids, samplers and
//! height functions.

mod coloring;
mod ensemble;
pub mod export;
mod field;
mod sampler;
mod svg;

pub use coloring::{make_coloring, parse_direction, parse_ratio, render_ratio, ColoringScheme, Direction};
pub use ensemble::{HeightField, Model, PathEnsemble};
pub use field::{FieldSpec, ParameterField};
pub use sampler::{
    first_color_height, parity_height, sample_colored_cs6v, sample_cs6v, sample_s6v, sample_two_colored_with_boundary,
};
pub use svg::{render_svg, SvgStyle};

pub(crate) use ensemble::words_for as ensemble_words;

/// Builds a field from `I x J` arrays indexed `[a][b]`.
pub fn make_field(b1: &[Vec<f64>], b2: &[Vec<f64>]) -> crate::Result<ParameterField> {
    ParameterField::new(b1, b2)
}
