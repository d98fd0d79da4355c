//! Seeded inputs shared by the benchmarks.

use mdms_core::{apply_mask, MaskAmount, MaskSpec, MissingValueSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_walk(n: usize, seed: u64) -> MissingValueSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    let values = (0..n)
        .map(|_| {
            level += rng.random_range(-1.0..1.0);
            level
        })
        .collect();
    MissingValueSeries::new(values).expect("finite walk")
}

/// A random walk with `fraction` of its points removed at random.
pub fn gappy_walk(n: usize, fraction: f64, seed: u64) -> MissingValueSeries {
    let spec = MaskSpec::random_points(MaskAmount::Fraction(fraction), seed);
    apply_mask(&random_walk(n, seed), &spec).expect("mask fits")
}
