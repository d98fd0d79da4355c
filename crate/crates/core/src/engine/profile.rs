//! Per-anchor distance profiles, the exclusion zone and the running minimum.

use super::dot::DotProductRow;
use super::Prepared;
use crate::lb::{lb_sqdist, CaseLabel};

/// Value stored for excluded (trivial-match) entries. Exceeds every attainable
/// squared distance, so it never wins a minimum.
pub const EXCLUDED: f64 = f64::INFINITY;

/// Squared lower-bound distances of one anchor to every window, overwritten
/// in full for each anchor. Undefined pairs hold `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfileBuffer {
    pub d: Vec<f64>,
    pub case: Vec<CaseLabel>,
}

impl DistanceProfileBuffer {
    pub fn new(len: usize) -> Self {
        Self {
            d: vec![f64::NAN; len],
            case: vec![CaseLabel::Case1Complete; len],
        }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Fills `buf` with the squared lower bound of every pair `(row.anchor, j)`.
pub fn calculate_lb_distance_profile(row: &DotProductRow, prep: &Prepared, buf: &mut DistanceProfileBuffer) {
    let i = row.anchor;
    let wi = prep.summaries[i];
    let params = prep.params;
    for j in 0..row.len() {
        let p = row.products(j);
        match lb_sqdist(&p, &wi, &prep.summaries[j], &params) {
            Some((d, c)) => {
                buf.d[j] = d;
                buf.case[j] = c;
            }
            None => {
                buf.d[j] = f64::NAN;
                buf.case[j] = CaseLabel::DegenerateAllMissing;
            }
        }
    }
}

/// Marks `anchor - w ..= anchor + w` (clipped) as excluded.
pub fn apply_exclusion_zone(d: &mut [f64], anchor: usize, half_width: usize) {
    if d.is_empty() {
        return;
    }
    let lo = anchor.saturating_sub(half_width);
    let hi = (anchor + half_width).min(d.len() - 1);
    if lo <= hi {
        d[lo..=hi].fill(EXCLUDED);
    }
}

/// Running column-wise minimum over anchors: entry `j` holds the smallest
/// squared bound seen for window `j` and the anchor that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileAccumulator {
    pub sq: Vec<f64>,
    pub index: Vec<Option<usize>>,
    pub case: Vec<Option<CaseLabel>>,
}

impl ProfileAccumulator {
    pub fn new(len: usize) -> Self {
        Self {
            sq: vec![EXCLUDED; len],
            index: vec![None; len],
            case: vec![None; len],
        }
    }

    /// Offers candidate `(d, idx)` for entry `j`. The smaller value wins, and on
    /// equal values the smaller index, so the outcome does not depend on the
    /// order of offers.
    #[inline]
    pub fn offer(&mut self, j: usize, d: f64, idx: usize, case: CaseLabel) {
        let better = match self.index[j] {
            None => d < EXCLUDED,
            Some(cur) => d < self.sq[j] || (d == self.sq[j] && idx < cur),
        };
        if better {
            self.sq[j] = d;
            self.index[j] = Some(idx);
            self.case[j] = Some(case);
        }
    }

    /// Merges anchor `i`'s profile.
    pub fn merge_profile(&mut self, buf: &DistanceProfileBuffer, i: usize) {
        for (j, &d) in buf.d.iter().enumerate() {
            self.offer(j, d, i, buf.case[j]);
        }
    }

    /// Merges another partial result.
    pub fn merge(&mut self, other: &ProfileAccumulator) {
        for j in 0..self.sq.len() {
            if let (Some(oi), Some(c)) = (other.index[j], other.case[j]) {
                self.offer(j, other.sq[j], oi, c);
            }
        }
    }
}
