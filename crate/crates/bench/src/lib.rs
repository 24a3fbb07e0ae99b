//! Synthetic inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsw_core::{ingest_labels, LabelMap, Raster};

/// Noisy grayscale image tiled into `cell x cell` blocks, each block one fine
/// region.
pub fn block_scene(width: usize, height: usize, cell: usize, seed: u64) -> (Raster, LabelMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = width.div_ceil(cell);
    let data = (0..width * height).map(|_| rng.random::<u8>()).collect();
    let ids: Vec<u32> = (0..width * height)
        .map(|i| ((i / width / cell) * cols + (i % width) / cell) as u32)
        .collect();
    (
        Raster::gray8(width, height, data).expect("sizes agree"),
        ingest_labels(width, height, &ids).expect("sizes agree"),
    )
}
