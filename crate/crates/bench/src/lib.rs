//! Shared helpers for the criterion benchmarks.

use aquaclean_core::pipeline::fixtures;
use aquaclean_core::ColorImage;

/// Deterministic degraded scene at the requested size.
pub fn bench_image(side: usize) -> ColorImage {
    let clean = fixtures::clean_scene(7, 0, side, side);
    fixtures::degrade(&clean, 7, 0, 8.0)
}
