//! Lower-bound matrix profile engine.
//!
//! For every anchor window the engine keeps six rolling dot-product vectors
//! against the windows after it, turns them into squared lower bounds, skips
//! the trivial-match zone, and folds each bound into the running minimum of
//! both windows of the pair. Time is quadratic in the series length, extra
//! space linear.
//!
//! [`update_dot_row`] and [`calculate_lb_distance_profile`] are the full-row
//! form of the same recurrence, one anchor against every window.
//!
//! Anchors are processed in fixed blocks whose first row is evaluated
//! directly. The partition depends only on the problem size, and the merge
//! breaks ties by index, so a run on any number of threads performs the same
//! per-pair arithmetic and produces the same profile.

pub mod brute;
pub mod diag;
pub mod dot;
pub mod profile;

use rayon::prelude::*;

use crate::error::{MdmsError, Result};
use crate::lb::{variance_upper_bound, CaseLabel, CompletionBounds, LbParams, WindowSummary};
use crate::series::{build_auxiliary_shifted, AllMissingPolicy, AuxiliarySeries, EngineConfig, MissingValueSeries};
use crate::stats::WindowStats;

pub use brute::{brute_force_profile, brute_force_with_runner_up, BRUTE_FORCE_BUDGET};
pub use dot::{init_dot_products, sliding_dot_product, update_dot_row, DotProductRow, FirstRow};
pub use profile::{
    apply_exclusion_zone, calculate_lb_distance_profile, DistanceProfileBuffer, ProfileAccumulator, EXCLUDED,
};

/// Lower-bound matrix profile: for every window, the smallest admissible
/// distance to a non-trivial match and where it occurs. On a complete series
/// this is the ordinary matrix profile.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundMatrixProfile {
    /// Euclidean (square-rooted) values. `INFINITY` where every candidate was
    /// excluded, `NaN` where the position is invalid.
    pub values: Vec<f64>,
    pub index: Vec<Option<usize>>,
    /// Case of the minimizing pair.
    pub case: Vec<Option<CaseLabel>>,
    /// Windows without any present value.
    pub all_missing: Vec<bool>,
    pub m: usize,
    pub exclusion_half_width: usize,
}

impl LowerBoundMatrixProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True if position `i` has a finite value and a neighbor.
    pub fn is_valid(&self, i: usize) -> bool {
        self.index[i].is_some() && self.values[i].is_finite()
    }

    fn from_accumulator(acc: ProfileAccumulator, all_missing: Vec<bool>, cfg: &EngineConfig) -> Self {
        let flag_invalid = cfg.all_missing_policy == AllMissingPolicy::FlagInvalid;
        let mut values = Vec::with_capacity(acc.sq.len());
        let mut index = acc.index;
        let mut case = acc.case;
        for (j, &sq) in acc.sq.iter().enumerate() {
            if all_missing[j] {
                case[j] = Some(CaseLabel::DegenerateAllMissing);
                if flag_invalid {
                    values.push(f64::NAN);
                    index[j] = None;
                    continue;
                }
            }
            values.push(if index[j].is_some() {
                sq.max(0.0).sqrt()
            } else {
                f64::INFINITY
            });
        }
        Self {
            values,
            index,
            case,
            all_missing,
            m: cfg.m,
            exclusion_half_width: cfg.exclusion_half_width(),
        }
    }
}

/// Everything an anchor iteration reads, computed once per run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub m: usize,
    pub len: usize,
    pub aux: AuxiliarySeries,
    pub stats: WindowStats,
    pub summaries: Vec<WindowSummary>,
    pub params: LbParams,
    pub exclusion_half_width: usize,
}

impl Prepared {
    /// Validates `cfg` and precomputes auxiliary series and window statistics.
    ///
    /// Present values are centred on their mean first; every distance is shift
    /// invariant, and centred data keeps the rolling sums well conditioned.
    pub fn new(series: &MissingValueSeries, cfg: &EngineConfig) -> Result<Self> {
        let n = series.len();
        cfg.validate(n)?;
        let m = cfg.m;
        let present: Vec<f64> = series.iter().flatten().collect();
        let shift = if present.is_empty() {
            0.0
        } else {
            present.iter().sum::<f64>() / present.len() as f64
        };
        let aux = build_auxiliary_shifted(series, shift);
        let stats = WindowStats::compute(&aux, series, m, shift);
        let len = stats.len();
        let summaries = (0..len)
            .map(|i| {
                let bounds = match cfg.value_bounds {
                    Some((lo, hi)) => CompletionBounds::new(lo - shift, hi - shift),
                    None => CompletionBounds::new(stats.vmin[i], stats.vmax[i]),
                };
                let variance_bound = if stats.present[i] == 0 || stats.present[i] == m {
                    f64::NAN
                } else {
                    variance_upper_bound(stats.mu_z[i], stats.sigma_z[i], stats.mu_b[i], &bounds)
                };
                WindowSummary {
                    present: stats.present[i],
                    mu_z: stats.mu_z[i],
                    sigma_z: stats.sigma_z[i],
                    variance_bound,
                }
            })
            .collect();
        Ok(Self {
            m,
            len,
            aux,
            stats,
            summaries,
            params: LbParams {
                m,
                epsilon: cfg.epsilon,
                all_missing_bound_zero: cfg.all_missing_policy == AllMissingPolicy::BoundZero,
            },
            exclusion_half_width: cfg.exclusion_half_width(),
        })
    }
}

const MIN_BLOCK: usize = 512;
const TARGET_BLOCKS: usize = 16;

/// Anchor ranges whose first rows are evaluated directly. Blocks span at least
/// `8 m` anchors so the direct evaluations stay a small share of the work.
pub fn anchor_blocks(len: usize, m: usize) -> Vec<std::ops::Range<usize>> {
    let block = MIN_BLOCK.max(len.div_ceil(TARGET_BLOCKS)).max(8 * m);
    (0..len).step_by(block).map(|s| s..(s + block).min(len)).collect()
}

/// Lower-bound matrix profile of a series that may contain missing values.
pub fn mdms(series: &MissingValueSeries, cfg: &EngineConfig) -> Result<LowerBoundMatrixProfile> {
    mdms_with_threads(series, cfg, 1)
}

/// [`mdms`] spread over `threads` worker threads. The result is identical to
/// the single-threaded one.
pub fn mdms_with_threads(
    series: &MissingValueSeries,
    cfg: &EngineConfig,
    threads: usize,
) -> Result<LowerBoundMatrixProfile> {
    let prep = Prepared::new(series, cfg)?;
    let blocks = anchor_blocks(prep.len, prep.m);
    let acc = if threads <= 1 || blocks.len() == 1 {
        let mut acc = ProfileAccumulator::new(prep.len);
        for b in blocks {
            diag::run_block(&prep, b, &mut acc);
        }
        acc
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| MdmsError::Config(format!("thread pool: {e}")))?;
        pool.install(|| {
            blocks
                .into_par_iter()
                .map(|b| {
                    let mut acc = ProfileAccumulator::new(prep.len);
                    diag::run_block(&prep, b, &mut acc);
                    acc
                })
                .reduce(
                    || ProfileAccumulator::new(prep.len),
                    |mut a, b| {
                        a.merge(&b);
                        a
                    },
                )
        })
    };
    let all_missing = (0..prep.len).map(|i| prep.stats.is_all_missing(i)).collect();
    Ok(LowerBoundMatrixProfile::from_accumulator(acc, all_missing, cfg))
}

/// Exact matrix profile of a complete series. Runs the same code path as
/// [`mdms`], where every pair is complete.
pub fn stomp_exact(series: &MissingValueSeries, cfg: &EngineConfig) -> Result<LowerBoundMatrixProfile> {
    series.complete_values()?;
    mdms(series, cfg)
}
