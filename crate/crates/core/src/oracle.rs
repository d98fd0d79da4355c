//! Sampling oracle for the lower bounds: fill the gaps, measure, keep the minimum.
//!
//! The sampled minimum is an upper estimate of the smallest distance any
//! completion can reach, so it must never fall below an admissible bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lb::CompletionBounds;

/// Squared Euclidean distance between the z-normalized versions of two
/// complete windows.
///
/// A constant window scores `2m` against a non-constant one and 0 against
/// another constant one.
pub fn znorm_sqdist(a: &[f64], b: &[f64], epsilon: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ma, sa) = mean_std(a);
    let (mb, sb) = mean_std(b);
    let (ca, cb) = (sa * sa <= epsilon, sb * sb <= epsilon);
    if ca && cb {
        return 0.0;
    }
    if ca || cb {
        return 2.0 * a.len() as f64;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - ma) / sa - (y - mb) / sb).powi(2))
        .sum()
}

fn mean_std(w: &[f64]) -> (f64, f64) {
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Fills the gaps of `incomplete` with the least-squares affine image of the
/// z-normalized `complete` window, fitted on the positions both have.
fn regression_completion(incomplete: &[f64], complete: &[f64]) -> Vec<f64> {
    let (mc, sc) = mean_std(complete);
    let zc: Vec<f64> = complete
        .iter()
        .map(|v| if sc > 0.0 { (v - mc) / sc } else { 0.0 })
        .collect();
    let present: Vec<usize> = (0..incomplete.len()).filter(|&k| !incomplete[k].is_nan()).collect();
    let n = present.len() as f64;
    let mx = present.iter().map(|&k| zc[k]).sum::<f64>() / n;
    let my = present.iter().map(|&k| incomplete[k]).sum::<f64>() / n;
    let sxx: f64 = present.iter().map(|&k| (zc[k] - mx).powi(2)).sum();
    let sxy: f64 = present.iter().map(|&k| (zc[k] - mx) * (incomplete[k] - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    incomplete
        .iter()
        .zip(&zc)
        .map(|(&v, &x)| if v.is_nan() { slope * x + intercept } else { v })
        .collect()
}

fn fill_uniform(window: &[f64], lo: f64, hi: f64, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
    out.clear();
    out.extend(window.iter().map(|&v| {
        if !v.is_nan() {
            v
        } else if hi > lo {
            rng.random_range(lo..=hi)
        } else {
            lo
        }
    }));
}

/// Smallest exact squared distance seen over `samples` random completions of
/// the two windows (`NaN` = missing).
///
/// Missing entries are drawn uniformly from each window's bounds, which default
/// to the range of its present values. When only one window has gaps its
/// completions are not range-limited: the first sample is the closed-form
/// affine fit to the other window and later samples draw from a range widened
/// by the present span on each side.
pub fn oracle_min_distance(
    window_a: &[f64],
    window_b: &[f64],
    bounds_a: Option<CompletionBounds>,
    bounds_b: Option<CompletionBounds>,
    samples: usize,
    seed: u64,
) -> f64 {
    assert!(samples >= 1, "at least one sample is required");
    assert_eq!(window_a.len(), window_b.len());
    let eps = 1e-12;
    let miss_a = window_a.iter().any(|v| v.is_nan());
    let miss_b = window_b.iter().any(|v| v.is_nan());
    if !miss_a && !miss_b {
        return znorm_sqdist(window_a, window_b, eps);
    }
    let range = |w: &[f64], given: Option<CompletionBounds>, widen: bool| -> (f64, f64) {
        let b = given.or_else(|| CompletionBounds::of_present(w));
        let (lo, hi) = b.map_or((-1.0, 1.0), |b| (b.v_min, b.v_max));
        if widen {
            let span = (hi - lo).max(1.0);
            (lo - span, hi + span)
        } else {
            (lo, hi)
        }
    };
    let one_sided = miss_a != miss_b;
    let (lo_a, hi_a) = range(window_a, bounds_a, one_sided);
    let (lo_b, hi_b) = range(window_b, bounds_b, one_sided);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut start = 0;
    if one_sided {
        let d = if miss_a {
            znorm_sqdist(&regression_completion(window_a, window_b), window_b, eps)
        } else {
            znorm_sqdist(window_a, &regression_completion(window_b, window_a), eps)
        };
        best = d;
        start = 1;
    }
    let (mut fa, mut fb) = (Vec::with_capacity(window_a.len()), Vec::with_capacity(window_b.len()));
    for _ in start..samples {
        fill_uniform(window_a, lo_a, hi_a, &mut rng, &mut fa);
        fill_uniform(window_b, lo_b, hi_b, &mut rng, &mut fb);
        best = best.min(znorm_sqdist(&fa, &fb, eps));
    }
    best
}
