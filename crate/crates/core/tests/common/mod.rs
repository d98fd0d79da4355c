#![allow(dead_code)]

use mdms_core::{apply_mask, MaskAmount, MaskSpec, MissingValueSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            level += rng.random_range(-1.0..1.0);
            level
        })
        .collect()
}

pub fn complete(values: Vec<f64>) -> MissingValueSeries {
    MissingValueSeries::new(values).unwrap()
}

/// Masks `fraction` of the points, as isolated points or as blocks of `block_len`.
pub fn masked(series: &MissingValueSeries, fraction: f64, block_len: Option<usize>, seed: u64) -> MissingValueSeries {
    let spec = match block_len {
        None => MaskSpec::random_points(MaskAmount::Fraction(fraction), seed),
        Some(p) => MaskSpec::uniform_blocks(p, MaskAmount::Fraction(fraction), seed),
    };
    apply_mask(series, &spec).unwrap()
}
