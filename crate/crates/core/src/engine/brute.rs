//! Brute-force reference: every pair evaluated from explicitly extracted windows.

use super::profile::{apply_exclusion_zone, DistanceProfileBuffer, ProfileAccumulator};
use super::LowerBoundMatrixProfile;
use crate::error::{MdmsError, Result};
use crate::lb::{lb_sqdist, LbParams, PairProducts, WindowSummary};
use crate::series::{AllMissingPolicy, EngineConfig, MissingValueSeries};

/// Largest `len * len * m` the brute-force search accepts.
pub const BRUTE_FORCE_BUDGET: u128 = 1_000_000_000;

/// Brute-force profile plus, per position, the second smallest squared value
/// over distinct anchors. Indices are only meaningful where the two differ.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub profile: LowerBoundMatrixProfile,
    pub runner_up_sq: Vec<f64>,
}

impl BruteForceResult {
    /// Gap between the best and second-best squared values at position `j`.
    pub fn margin(&self, j: usize) -> f64 {
        let best = self.profile.values[j] * self.profile.values[j];
        self.runner_up_sq[j] - best
    }
}

/// Same contract as [`super::mdms`], computed without any rolling state.
pub fn brute_force_profile(series: &MissingValueSeries, cfg: &EngineConfig) -> Result<LowerBoundMatrixProfile> {
    brute_force_with_runner_up(series, cfg).map(|r| r.profile)
}

pub fn brute_force_with_runner_up(series: &MissingValueSeries, cfg: &EngineConfig) -> Result<BruteForceResult> {
    let n = series.len();
    cfg.validate(n)?;
    let m = cfg.m;
    let len = cfg.profile_len(n);
    let ops = (len as u128) * (len as u128) * (m as u128);
    if ops > BRUTE_FORCE_BUDGET {
        return Err(MdmsError::BudgetExceeded {
            ops,
            limit: BRUTE_FORCE_BUDGET,
        });
    }
    let params = LbParams {
        m,
        epsilon: cfg.epsilon,
        all_missing_bound_zero: cfg.all_missing_policy == AllMissingPolicy::BoundZero,
    };
    let raw = series.raw();
    let summaries: Vec<WindowSummary> = (0..len)
        .map(|i| WindowSummary::direct(&raw[i..i + m], cfg.value_bounds))
        .collect();
    let zf = |v: f64| if v.is_nan() { 0.0 } else { v };
    let filled: Vec<f64> = raw.iter().map(|&v| zf(v)).collect();
    let marks: Vec<f64> = raw.iter().map(|v| if v.is_nan() { 0.0 } else { 1.0 }).collect();
    let squares: Vec<f64> = filled.iter().map(|v| v * v).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut acc = ProfileAccumulator::new(len);
    let mut runner_up = vec![f64::INFINITY; len];
    let mut buf = DistanceProfileBuffer::new(len);
    for i in 0..len {
        let (zi, bi, xi) = (&filled[i..i + m], &marks[i..i + m], &squares[i..i + m]);
        for j in 0..len {
            let (zj, bj, xj) = (&filled[j..j + m], &marks[j..j + m], &squares[j..j + m]);
            let p = PairProducts {
                qz: dot(zi, zj),
                qb: dot(bi, bj),
                bz: dot(bi, zj),
                zb: dot(zi, bj),
                bx: dot(bi, xj),
                xb: dot(xi, bj),
            };
            match lb_sqdist(&p, &summaries[i], &summaries[j], &params) {
                Some((d, c)) => {
                    buf.d[j] = d;
                    buf.case[j] = c;
                }
                None => buf.d[j] = f64::NAN,
            }
        }
        apply_exclusion_zone(&mut buf.d, i, cfg.exclusion_half_width());
        for (j, &d) in buf.d.iter().enumerate() {
            if d < acc.sq[j] {
                runner_up[j] = acc.sq[j];
            } else if d < runner_up[j] {
                runner_up[j] = d;
            }
        }
        acc.merge_profile(&buf, i);
    }
    let all_missing = summaries.iter().map(|s| s.present == 0).collect();
    Ok(BruteForceResult {
        profile: LowerBoundMatrixProfile::from_accumulator(acc, all_missing, cfg),
        runner_up_sq: runner_up,
    })
}
