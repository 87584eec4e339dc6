//! Degenerations of the complemented model: the discrete Hammersley process
//! at `b1 = 0`, `b2 = 1 - p`, and the modified-minimum form at `b2 = 1`.

mod hammersley;
mod tpng;

pub use hammersley::{
    cs6v_height_distribution, hammersley_corner, hammersley_distribution, hammersley_height, sample_pointset,
    verify_hammersley_equivalence, PointSet, EXACT_MAX_CELLS,
};
pub use tpng::{collapse, modified_min, verify_tpng_equivalence, TValue};
