//! Per-window statistics: rolling mean/std and extrema over present values.

use std::collections::VecDeque;

use crate::series::{AuxiliarySeries, MissingValueSeries};

/// Prefix sums accumulated with Neumaier compensation, kept as a (sum, error) pair.
struct CompensatedPrefix {
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl CompensatedPrefix {
    fn new<I: Iterator<Item = f64>>(values: I, len: usize) -> Self {
        let mut hi = Vec::with_capacity(len + 1);
        let mut lo = Vec::with_capacity(len + 1);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        hi.push(0.0);
        lo.push(0.0);
        for v in values {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            hi.push(sum);
            lo.push(comp);
        }
        Self { hi, lo }
    }

    fn range(&self, start: usize, end: usize) -> f64 {
        (self.hi[end] - self.hi[start]) + (self.lo[end] - self.lo[start])
    }
}

/// Population mean and standard deviation of every length-`m` window.
///
/// One pass over compensated cumulative sums of the values and their squares;
/// windows whose variance is tiny next to their second moment are recomputed
/// directly.
pub fn sliding_mean_std(values: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1 && m <= values.len(), "window length out of range");
    let len = values.len() + 1 - m;
    let sums = CompensatedPrefix::new(values.iter().copied(), values.len());
    let squares = CompensatedPrefix::new(values.iter().map(|v| v * v), values.len());
    let mf = m as f64;
    let mut means = Vec::with_capacity(len);
    let mut stds = Vec::with_capacity(len);
    for i in 0..len {
        let mean = sums.range(i, i + m) / mf;
        let mean_sq = squares.range(i, i + m) / mf;
        let mut var = mean_sq - mean * mean;
        if var <= 1e-4 * mean_sq {
            // Most of the second moment cancelled; redo the window in two passes.
            let w = &values[i..i + m];
            let mean = w.iter().sum::<f64>() / mf;
            var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / mf;
        }
        means.push(mean);
        stds.push(var.max(0.0).sqrt());
    }
    (means, stds)
}

/// Rolling max and min of the present values of each window, via monotonic
/// deques. Windows without a present value get `NaN` for both.
pub fn sliding_extrema(series: &MissingValueSeries, m: usize) -> (Vec<f64>, Vec<f64>) {
    let values = series.raw();
    assert!(m >= 1 && m <= values.len(), "window length out of range");
    let len = values.len() + 1 - m;
    let mut vmax = Vec::with_capacity(len);
    let mut vmin = Vec::with_capacity(len);
    let mut max_q: VecDeque<usize> = VecDeque::new();
    let mut min_q: VecDeque<usize> = VecDeque::new();
    for (k, &v) in values.iter().enumerate() {
        if !v.is_nan() {
            while max_q.back().is_some_and(|&b| values[b] <= v) {
                max_q.pop_back();
            }
            max_q.push_back(k);
            while min_q.back().is_some_and(|&b| values[b] >= v) {
                min_q.pop_back();
            }
            min_q.push_back(k);
        }
        if k + 1 < m {
            continue;
        }
        let start = k + 1 - m;
        while max_q.front().is_some_and(|&f| f < start) {
            max_q.pop_front();
        }
        while min_q.front().is_some_and(|&f| f < start) {
            min_q.pop_front();
        }
        vmax.push(max_q.front().map_or(f64::NAN, |&f| values[f]));
        vmin.push(min_q.front().map_or(f64::NAN, |&f| values[f]));
    }
    (vmax, vmin)
}

/// Window statistics consumed by the lower-bound distance computation.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowStats {
    pub m: usize,
    pub mu_z: Vec<f64>,
    pub sigma_z: Vec<f64>,
    pub mu_b: Vec<f64>,
    /// Kept for completeness; the distance formulas never read it.
    pub sigma_b: Vec<f64>,
    /// Present-value count of each window (`m * mu_b`, exactly).
    pub present: Vec<usize>,
    pub vmax: Vec<f64>,
    pub vmin: Vec<f64>,
}

impl WindowStats {
    /// `series` supplies the extrema and must be the series `aux` was built
    /// from, up to a constant shift that `aux` subtracted.
    pub fn compute(aux: &AuxiliarySeries, series: &MissingValueSeries, m: usize, shift: f64) -> Self {
        let (mu_z, sigma_z) = sliding_mean_std(&aux.z, m);
        let (_, sigma_b) = sliding_mean_std(&aux.bind, m);
        let (mut vmax, mut vmin) = sliding_extrema(series, m);
        if shift != 0.0 {
            vmax.iter_mut().chain(vmin.iter_mut()).for_each(|v| *v -= shift);
        }
        let len = aux.z.len() + 1 - m;
        let mut present = Vec::with_capacity(len);
        let mut count = aux.bind[..m].iter().filter(|&&b| b != 0.0).count();
        present.push(count);
        for i in 1..len {
            count += usize::from(aux.bind[i + m - 1] != 0.0);
            count -= usize::from(aux.bind[i - 1] != 0.0);
            present.push(count);
        }
        // Rebuild mu_b from exact counts so that mu_b == 1 iff the window is complete.
        let mf = m as f64;
        let mu_b = present.iter().map(|&c| c as f64 / mf).collect::<Vec<_>>();
        debug_assert_eq!(mu_b.len(), sigma_b.len());
        Self {
            m,
            mu_z,
            sigma_z,
            mu_b,
            sigma_b,
            present,
            vmax,
            vmin,
        }
    }

    pub fn len(&self) -> usize {
        self.mu_z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_z.is_empty()
    }

    pub fn is_complete(&self, i: usize) -> bool {
        self.present[i] == self.m
    }

    pub fn is_all_missing(&self, i: usize) -> bool {
        self.present[i] == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::build_auxiliary;
    use proptest::prelude::*;

    fn direct_mean_std(w: &[f64]) -> (f64, f64) {
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    }

    #[test]
    fn toy_mean_std() {
        let (mu, sd) = sliding_mean_std(&[0.0, 2.0, 0.0, 2.0], 4);
        assert_eq!(mu, vec![1.0]);
        assert_eq!(sd, vec![1.0]);
    }

    #[test]
    fn constant_and_unit_windows() {
        let (_, sd) = sliding_mean_std(&[3.5; 10], 4);
        assert!(sd.iter().all(|&s| s == 0.0));
        let (mu, sd) = sliding_mean_std(&[1.0, 2.0, 3.0], 1);
        assert_eq!(mu, vec![1.0, 2.0, 3.0]);
        assert_eq!(sd, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn extrema_skip_missing() {
        let s = MissingValueSeries::new(vec![0.0, f64::NAN, 2.0, 0.0]).unwrap();
        let (mx, mn) = sliding_extrema(&s, 3);
        assert_eq!((mx[1], mn[1]), (2.0, 0.0));
        assert_eq!((mx[0], mn[0]), (2.0, 0.0));

        let s = MissingValueSeries::new(vec![1.0, f64::NAN, f64::NAN, 4.0]).unwrap();
        let (mx, mn) = sliding_extrema(&s, 2);
        assert_eq!((mx[0], mn[0]), (1.0, 1.0));
        assert!(mx[1].is_nan() && mn[1].is_nan());
        assert_eq!((mx[2], mn[2]), (4.0, 4.0));
    }

    #[test]
    fn window_stats_counts() {
        let s = MissingValueSeries::new(vec![1.0, f64::NAN, 3.0, 4.0, f64::NAN, 6.0]).unwrap();
        let aux = build_auxiliary(&s);
        let ws = WindowStats::compute(&aux, &s, 3, 0.0);
        assert_eq!(ws.present, vec![2, 2, 2, 2]);
        assert!(ws.mu_b.iter().all(|&b| (0.0..=1.0).contains(&b)));
        assert!(!ws.is_complete(0));
        let full = MissingValueSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let ws = WindowStats::compute(&build_auxiliary(&full), &full, 2, 0.0);
        assert!(ws.mu_b.iter().all(|&b| b == 1.0));
    }

    proptest! {
        #[test]
        fn mean_std_matches_direct(values in prop::collection::vec(-1e3f64..1e3, 2..200), m_frac in 0.0f64..1.0) {
            let m = 1 + ((values.len() - 1) as f64 * m_frac) as usize;
            let (mu, sd) = sliding_mean_std(&values, m);
            for i in 0..mu.len() {
                let (dm, ds) = direct_mean_std(&values[i..i + m]);
                prop_assert!((mu[i] - dm).abs() <= 1e-10);
                prop_assert!((sd[i] - ds).abs() <= 1e-10);
            }
        }

        #[test]
        fn extrema_match_naive(values in prop::collection::vec(-50f64..50.0, 2..120), m_frac in 0.0f64..1.0) {
            let m = 1 + ((values.len() - 1) as f64 * m_frac) as usize;
            let s = MissingValueSeries::new(values.clone()).unwrap();
            let (mx, mn) = sliding_extrema(&s, m);
            for i in 0..mx.len() {
                let w = &values[i..i + m];
                prop_assert_eq!(mx[i], w.iter().cloned().fold(f64::MIN, f64::max));
                prop_assert_eq!(mn[i], w.iter().cloned().fold(f64::MAX, f64::min));
                prop_assert!(mn[i] <= mx[i]);
            }
        }

        #[test]
        fn bind_sums_are_exact_counts(mask in prop::collection::vec(any::<bool>(), 4..150), m_frac in 0.0f64..1.0) {
            let m = 1 + ((mask.len() - 1) as f64 * m_frac) as usize;
            let vals: Vec<f64> = mask.iter().enumerate().map(|(k, &miss)| if miss { f64::NAN } else { k as f64 }).collect();
            let s = MissingValueSeries::new(vals).unwrap();
            let aux = build_auxiliary(&s);
            let ws = WindowStats::compute(&aux, &s, m, 0.0);
            for i in 0..ws.len() {
                let direct: f64 = aux.bind[i..i + m].iter().sum();
                prop_assert_eq!(direct as usize, ws.present[i]);
                prop_assert_eq!(ws.mu_b[i] == 1.0, !mask[i..i + m].iter().any(|&b| b));
                prop_assert!(ws.sigma_z[i] >= 0.0);
            }
        }
    }
}
