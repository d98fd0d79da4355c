//! Pseudo-missing marking, the linear-imputation baseline and masking harnesses.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MdmsError, Result};
use crate::series::MissingValueSeries;

/// Fills gaps by straight lines between the bounding present values; leading
/// and trailing gaps take the nearest present value.
pub fn linear_impute(series: &MissingValueSeries) -> Result<MissingValueSeries> {
    let raw = series.raw();
    let present: Vec<usize> = (0..raw.len()).filter(|&k| !raw[k].is_nan()).collect();
    let (&first, &last) = match (present.first(), present.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(MdmsError::AllMissing),
    };
    let mut out = raw.to_vec();
    out[..first].fill(raw[first]);
    out[last + 1..].fill(raw[last]);
    for pair in present.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a > 1 {
            let (va, vb) = (raw[a], raw[b]);
            let span = (b - a) as f64;
            for (k, slot) in out.iter_mut().enumerate().take(b).skip(a + 1) {
                let t = (k - a) as f64 / span;
                *slot = va + (vb - va) * t;
            }
        }
    }
    MissingValueSeries::new(out)
}

/// Thresholds for [`mark_pseudo_missing`]. Each rule can be switched off.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMissingRules {
    /// A point is a spike when it deviates from its 5-point neighborhood median
    /// by more than this many series MADs.
    pub spike_mad_factor: f64,
    /// Shortest run of bit-identical values treated as a saturated plateau.
    pub plateau_min_run: usize,
    pub variance_window: usize,
    /// A window is a burst when its variance exceeds this multiple of the
    /// median rolling variance.
    pub variance_factor: f64,
    pub spikes: bool,
    pub plateaus: bool,
    pub variance_bursts: bool,
}

impl Default for PseudoMissingRules {
    fn default() -> Self {
        Self {
            spike_mad_factor: 8.0,
            plateau_min_run: 16,
            variance_window: 64,
            variance_factor: 6.0,
            spikes: true,
            plateaus: true,
            variance_bursts: true,
        }
    }
}

impl PseudoMissingRules {
    /// Defaults with the variance window set to the motif length.
    pub fn for_window(m: usize) -> Self {
        Self {
            variance_window: m,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spike_mad_factor > 0.0 && self.variance_factor > 0.0) {
            return Err(MdmsError::Config("pseudo-missing factors must be positive".into()));
        }
        if self.plateau_min_run < 3 {
            return Err(MdmsError::Config("plateau run length must be at least 3".into()));
        }
        if self.variance_window < 2 {
            return Err(MdmsError::Config("variance window must be at least 2".into()));
        }
        Ok(())
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn spike_mask(raw: &[f64], factor: f64) -> Vec<bool> {
    let mut present: Vec<f64> = raw.iter().copied().filter(|v| !v.is_nan()).collect();
    let mut mask = vec![false; raw.len()];
    if present.len() < 5 {
        return mask;
    }
    let med = median(&mut present);
    let mut dev: Vec<f64> = present.iter().map(|v| (v - med).abs()).collect();
    let mad = median(&mut dev);
    if mad <= 0.0 {
        return mask;
    }
    let mut hood = Vec::with_capacity(5);
    for (k, &v) in raw.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        hood.clear();
        hood.extend(
            raw[k.saturating_sub(2)..(k + 3).min(raw.len())]
                .iter()
                .copied()
                .filter(|x| !x.is_nan()),
        );
        mask[k] = (v - median(&mut hood)).abs() > factor * mad;
    }
    mask
}

fn plateau_mask(raw: &[f64], min_run: usize) -> Vec<bool> {
    let mut mask = vec![false; raw.len()];
    let mut start = 0;
    for k in 1..=raw.len() {
        let same = k < raw.len() && !raw[k].is_nan() && raw[k].to_bits() == raw[start].to_bits();
        if !same {
            if !raw[start].is_nan() && k - start >= min_run {
                mask[start..k].fill(true);
            }
            start = k;
        }
    }
    mask
}

fn variance_mask(raw: &[f64], w: usize, factor: f64) -> Vec<bool> {
    let n = raw.len();
    let mut mask = vec![false; n];
    if w > n {
        return mask;
    }
    let mut vars = Vec::with_capacity(n - w + 1);
    for s in 0..=n - w {
        let present: Vec<f64> = raw[s..s + w].iter().copied().filter(|v| !v.is_nan()).collect();
        if present.len() * 2 < w {
            vars.push(f64::NAN);
            continue;
        }
        let k = present.len() as f64;
        let mean = present.iter().sum::<f64>() / k;
        vars.push(present.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k);
    }
    let mut defined: Vec<f64> = vars.iter().copied().filter(|v| !v.is_nan()).collect();
    if defined.is_empty() {
        return mask;
    }
    let med = median(&mut defined);
    if med <= 0.0 {
        return mask;
    }
    for (s, &v) in vars.iter().enumerate() {
        if v > factor * med {
            mask[s..s + w].fill(true);
        }
    }
    mask
}

/// Marks spikes, saturated plateaus and variance bursts as missing. Points
/// already missing stay missing.
///
/// Spikes are found first; plateaus and bursts are judged on the series with
/// spikes removed.
pub fn mark_pseudo_missing(series: &MissingValueSeries, rules: &PseudoMissingRules) -> Result<MissingValueSeries> {
    rules.validate()?;
    let mut out = series.raw().to_vec();
    if rules.spikes {
        for (k, hit) in spike_mask(&out, rules.spike_mad_factor).into_iter().enumerate() {
            if hit {
                out[k] = f64::NAN;
            }
        }
    }
    let base = out.clone();
    let mut marks = vec![false; out.len()];
    if rules.plateaus {
        for (k, hit) in plateau_mask(&base, rules.plateau_min_run).into_iter().enumerate() {
            marks[k] |= hit;
        }
    }
    if rules.variance_bursts {
        for (k, hit) in variance_mask(&base, rules.variance_window, rules.variance_factor)
            .into_iter()
            .enumerate()
        {
            marks[k] |= hit;
        }
    }
    for (v, m) in out.iter_mut().zip(marks) {
        if m {
            *v = f64::NAN;
        }
    }
    MissingValueSeries::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskAmount {
    Count(usize),
    /// Fraction of the series length.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskMode {
    /// Individual points drawn without replacement from the present ones.
    RandomPoints,
    /// Blocks of `block_len`, one per equal slot of the series, jittered
    /// within their slot. The amount counts blocks, or a fraction of points.
    UniformBlocks { block_len: usize },
    /// One block of `block_len` centred on `target`.
    TargetedBlock { block_len: usize, target: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskSpec {
    pub mode: MaskMode,
    pub amount: MaskAmount,
    pub seed: u64,
}

impl MaskSpec {
    pub fn random_points(amount: MaskAmount, seed: u64) -> Self {
        Self {
            mode: MaskMode::RandomPoints,
            amount,
            seed,
        }
    }

    pub fn uniform_blocks(block_len: usize, amount: MaskAmount, seed: u64) -> Self {
        Self {
            mode: MaskMode::UniformBlocks { block_len },
            amount,
            seed,
        }
    }

    pub fn targeted_block(block_len: usize, target: usize) -> Self {
        Self {
            mode: MaskMode::TargetedBlock { block_len, target },
            amount: MaskAmount::Count(1),
            seed: 0,
        }
    }
}

fn fraction_points(f: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&f) {
        return Err(MdmsError::InfeasibleMask(format!("fraction {f} is outside [0, 1]")));
    }
    Ok((f * n as f64).round() as usize)
}

/// Marks positions missing according to `spec`. A pure function of its inputs.
pub fn apply_mask(series: &MissingValueSeries, spec: &MaskSpec) -> Result<MissingValueSeries> {
    let n = series.len();
    let mut out = series.raw().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.mode {
        MaskMode::RandomPoints => {
            let count = match spec.amount {
                MaskAmount::Count(c) => c,
                MaskAmount::Fraction(f) => fraction_points(f, n)?,
            };
            let present: Vec<usize> = (0..n).filter(|&k| !series.is_missing(k)).collect();
            if count > present.len() {
                return Err(MdmsError::InfeasibleMask(format!(
                    "cannot mask {count} points, only {} are present",
                    present.len()
                )));
            }
            for k in sample(&mut rng, present.len(), count) {
                out[present[k]] = f64::NAN;
            }
        }
        MaskMode::UniformBlocks { block_len } => {
            if block_len == 0 {
                return Err(MdmsError::InfeasibleMask("block length must be positive".into()));
            }
            let blocks = match spec.amount {
                MaskAmount::Count(c) => c,
                MaskAmount::Fraction(f) => (fraction_points(f, n)? as f64 / block_len as f64).round() as usize,
            };
            if blocks * block_len > n {
                return Err(MdmsError::InfeasibleMask(format!(
                    "{blocks} blocks of length {block_len} do not fit in {n} points"
                )));
            }
            for b in 0..blocks {
                let slot_start = b * n / blocks;
                let slot_end = (b + 1) * n / blocks;
                let slack = slot_end - slot_start - block_len;
                let start = slot_start + rng.random_range(0..=slack);
                out[start..start + block_len].fill(f64::NAN);
            }
        }
        MaskMode::TargetedBlock { block_len, target } => {
            if block_len == 0 {
                return Err(MdmsError::InfeasibleMask("block length must be positive".into()));
            }
            let start = target
                .checked_sub(block_len / 2)
                .filter(|s| s + block_len <= n)
                .ok_or_else(|| {
                    MdmsError::InfeasibleMask(format!("block of length {block_len} at {target} leaves the series"))
                })?;
            out[start..start + block_len].fill(f64::NAN);
        }
    }
    MissingValueSeries::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, prop_assume, proptest};
    use rand_distr::{Distribution, StandardNormal};

    const NA: f64 = f64::NAN;

    fn s(v: Vec<f64>) -> MissingValueSeries {
        MissingValueSeries::new(v).unwrap()
    }

    #[test]
    fn impute_examples() {
        assert_eq!(linear_impute(&s(vec![1.0, NA, 3.0])).unwrap().raw(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            linear_impute(&s(vec![0.0, NA, 0.0, 2.0])).unwrap().raw(),
            &[0.0, 0.0, 0.0, 2.0]
        );
        assert_eq!(linear_impute(&s(vec![NA, NA, 5.0])).unwrap().raw(), &[5.0, 5.0, 5.0]);
        assert_eq!(linear_impute(&s(vec![NA, NA])), Err(MdmsError::AllMissing));
    }

    fn sine(n: usize) -> Vec<f64> {
        (0..n).map(|k| (k as f64 * 0.05).sin()).collect()
    }

    #[test]
    fn spike_in_sine_is_the_only_mark() {
        let mut v = sine(1000);
        v[400] = 25.0;
        let out = mark_pseudo_missing(&s(v), &PseudoMissingRules::default()).unwrap();
        let hit: Vec<usize> = (0..1000).filter(|&k| out.is_missing(k)).collect();
        assert_eq!(hit, vec![400]);
    }

    #[test]
    fn saturated_segment_is_masked() {
        let mut v = sine(1000);
        v[300..350].fill(1.5);
        let out = mark_pseudo_missing(&s(v), &PseudoMissingRules::default()).unwrap();
        let hit: Vec<usize> = (0..1000).filter(|&k| out.is_missing(k)).collect();
        assert_eq!(hit, (300..350).collect::<Vec<_>>());
    }

    #[test]
    fn variance_burst_is_masked() {
        let mut v = sine(2000);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for x in &mut v[1000..1100] {
            *x += rng.random_range(-4.0..4.0);
        }
        let rules = PseudoMissingRules {
            spikes: false,
            ..PseudoMissingRules::default()
        };
        let out = mark_pseudo_missing(&s(v), &rules).unwrap();
        assert!((1010..1090).all(|k| out.is_missing(k)));
        assert!(!out.is_missing(500) && !out.is_missing(1500));
    }

    #[test]
    fn white_noise_false_mask_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let v: Vec<f64> = (0..20_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let out = mark_pseudo_missing(&s(v), &PseudoMissingRules::default()).unwrap();
        assert!(
            (out.missing_count() as f64) < 0.001 * 20_000.0,
            "{}",
            out.missing_count()
        );
    }

    #[test]
    fn mask_examples() {
        let base = s(sine(100));
        let a = apply_mask(&base, &MaskSpec::random_points(MaskAmount::Count(10), 7)).unwrap();
        let b = apply_mask(&base, &MaskSpec::random_points(MaskAmount::Count(10), 7)).unwrap();
        assert_eq!(a.missing_count(), 10);
        assert_eq!(
            a.raw().iter().map(|v| v.is_nan()).collect::<Vec<_>>(),
            b.raw().iter().map(|v| v.is_nan()).collect::<Vec<_>>()
        );

        let t = apply_mask(&s(sine(20)), &MaskSpec::targeted_block(4, 10)).unwrap();
        assert_eq!(
            (0..20).filter(|&k| t.is_missing(k)).collect::<Vec<_>>(),
            vec![8, 9, 10, 11]
        );

        let u = apply_mask(&base, &MaskSpec::uniform_blocks(5, MaskAmount::Count(4), 3)).unwrap();
        assert_eq!(u.missing_count(), 20);
        let starts = (0..100)
            .filter(|&k| u.is_missing(k) && (k == 0 || !u.is_missing(k - 1)))
            .count();
        assert_eq!(starts, 4);

        let f = apply_mask(&base, &MaskSpec::random_points(MaskAmount::Fraction(0.4), 1)).unwrap();
        assert_eq!(f.missing_count(), 40);

        assert!(apply_mask(&base, &MaskSpec::random_points(MaskAmount::Count(101), 1)).is_err());
        assert!(apply_mask(&base, &MaskSpec::targeted_block(10, 98)).is_err());
        assert!(apply_mask(&base, &MaskSpec::uniform_blocks(30, MaskAmount::Count(4), 1)).is_err());
    }

    proptest! {
        #[test]
        fn impute_is_idempotent_and_keeps_present(v in prop::collection::vec(prop::option::weighted(0.7, -50.0f64..50.0), 2..60)) {
            prop_assume!(v.iter().any(|x| x.is_some()));
            let series = MissingValueSeries::from_options(v.clone()).unwrap();
            let once = linear_impute(&series).unwrap();
            prop_assert!(once.is_complete());
            for (k, x) in v.iter().enumerate() {
                if let Some(x) = x {
                    prop_assert_eq!(once.raw()[k].to_bits(), x.to_bits());
                }
            }
            prop_assert_eq!(linear_impute(&once).unwrap(), once);
        }

        #[test]
        fn marking_never_unmarks(v in prop::collection::vec(prop::option::weighted(0.8, -5.0f64..5.0), 10..200)) {
            let series = MissingValueSeries::from_options(v).unwrap();
            let out = mark_pseudo_missing(&series, &PseudoMissingRules::for_window(8)).unwrap();
            for k in 0..series.len() {
                prop_assert!(!series.is_missing(k) || out.is_missing(k));
            }
        }

        #[test]
        fn random_mask_counts_exactly(n in 10usize..300, frac in 0.0f64..0.6, seed in 0u64..1000) {
            let series = MissingValueSeries::new(vec![1.0; n]).unwrap();
            let spec = MaskSpec::random_points(MaskAmount::Fraction(frac), seed);
            let out = apply_mask(&series, &spec).unwrap();
            prop_assert_eq!(out.missing_count(), (frac * n as f64).round() as usize);
            prop_assert_eq!(apply_mask(&series, &spec).unwrap().raw().iter().map(|v| v.is_nan()).collect::<Vec<_>>(),
                out.raw().iter().map(|v| v.is_nan()).collect::<Vec<_>>());
        }
    }
}
