//! Randomness keyed by `(seed, replica, stream, row, column)`.
//!
//! Each lattice row reads its own ChaCha8 stream, and the vertex in column
//! `x` owns words `4(x-1)..4x` of that stream, so the uniforms a vertex sees
//! do not depend on traversal order or worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// Run seed together with a replica index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedKey {
    pub seed: u64,
    pub replica: u64,
}

impl SeedKey {
    pub fn new(seed: u64, replica: u64) -> Self {
        Self { seed, replica }
    }

    pub fn with_replica(self, replica: u64) -> Self {
        Self { replica, ..self }
    }
}

impl From<u64> for SeedKey {
    fn from(seed: u64) -> Self {
        Self { seed, replica: 0 }
    }
}

/// Independent families of streams under one key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    /// The two per-vertex coins of the lattice samplers. Point sets read
    /// the same stream so they couple with the degenerate sampler.
    Vertex = 0,
    /// Auxiliary draws such as random boundary data.
    Auxiliary = 1,
}

#[inline]
pub fn to_unit(u: u64) -> f64 {
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn stream_rng(key: SeedKey, stream: Stream, row: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&key.seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&key.replica.to_le_bytes());
    bytes[16..24].copy_from_slice(&(stream as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(bytes);
    rng.set_stream(row);
    rng
}

/// Sequential reader of the per-vertex uniform pairs of one row, starting at
/// column 1.
pub struct RowStream {
    rng: ChaCha8Rng,
}

impl RowStream {
    pub fn new(key: SeedKey, stream: Stream, row: u64) -> Self {
        Self { rng: stream_rng(key, stream, row) }
    }

    /// Uniform pair of the next column.
    #[inline]
    pub fn next_pair(&mut self) -> (f64, f64) {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        (to_unit(a), to_unit(b))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Uniform pair owned by vertex `(x, y)`, with `x, y >= 1`.
pub fn vertex_uniforms(key: SeedKey, stream: Stream, x: u64, y: u64) -> (f64, f64) {
    let mut rng = stream_rng(key, stream, y);
    rng.set_word_pos(4 * (x as u128 - 1));
    let a = rng.next_u64();
    let b = rng.next_u64();
    (to_unit(a), to_unit(b))
}
