//! Upper-triangle kernel used by the engine.
//!
//! The six dot-product streams are stored by diagonal offset `k = j - i`
//! instead of by column. Moving from anchor `i - 1` to `i` then updates every
//! entry in place:
//!
//! `S_i[k] = S_{i-1}[k] - A[i-1] C[i-1+k] + A[i+m-1] C[i+m-1+k]`
//!
//! Only offsets beyond the exclusion zone are kept, and each pair is scored
//! once and offered to both of its positions.

use super::dot::sliding_dot_product;
use super::profile::ProfileAccumulator;
use super::Prepared;
use crate::lb::{lb_sqdist, CaseLabel, PairProducts};

/// Streams for anchor `anchor`, entry `t` holding offset `k0 + t`, that is
/// the pair `(anchor, anchor + k0 + t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalRow {
    pub anchor: usize,
    pub k0: usize,
    pub qz: Vec<f64>,
    pub qb: Vec<f64>,
    pub bz: Vec<f64>,
    pub zb: Vec<f64>,
    pub bx: Vec<f64>,
    pub xb: Vec<f64>,
}

impl DiagonalRow {
    /// Direct evaluation for `anchor` over offsets `k0..`.
    pub fn at_anchor(prep: &Prepared, anchor: usize, k0: usize) -> Self {
        let m = prep.m;
        let (z, b, x) = (&prep.aux.z, &prep.aux.bind, &prep.aux.x);
        let w = anchor..anchor + m;
        let tail = anchor + k0..;
        let dot = |a: &[f64], c: &[f64]| {
            if c.len() >= m {
                sliding_dot_product(&a[w.clone()], &c[tail.clone()])
            } else {
                Vec::new()
            }
        };
        Self {
            anchor,
            k0,
            qz: dot(z, z),
            qb: dot(b, b),
            bz: dot(b, z),
            zb: dot(z, b),
            bx: dot(b, x),
            xb: dot(x, b),
        }
    }

    pub fn len(&self) -> usize {
        self.qz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qz.is_empty()
    }

    pub fn products(&self, t: usize) -> PairProducts {
        PairProducts {
            qz: self.qz[t],
            qb: self.qb[t],
            bz: self.bz[t],
            zb: self.zb[t],
            bx: self.bx[t],
            xb: self.xb[t],
        }
    }
}

#[inline(always)]
fn roll(v: &mut [f64], a_out: f64, a_in: f64, c_out: &[f64], c_in: &[f64]) {
    for ((s, &co), &ci) in v.iter_mut().zip(c_out).zip(c_in) {
        *s = *s - a_out * co + a_in * ci;
    }
}

/// Moves `row` to the next anchor, dropping its last offset.
pub fn advance(row: &mut DiagonalRow, prep: &Prepared) {
    let i = row.anchor + 1;
    let m = prep.m;
    let len = row.qz.len().min(prep.len.saturating_sub(i + row.k0));
    for v in [
        &mut row.qz,
        &mut row.qb,
        &mut row.bz,
        &mut row.zb,
        &mut row.bx,
        &mut row.xb,
    ] {
        v.truncate(len);
    }
    let (z, b, x) = (&prep.aux.z, &prep.aux.bind, &prep.aux.x);
    let (o, n) = (i - 1, i + m - 1);
    let out = o + row.k0..o + row.k0 + len;
    let inn = n + row.k0..n + row.k0 + len;
    roll(&mut row.qz, z[o], z[n], &z[out.clone()], &z[inn.clone()]);
    roll(&mut row.qb, b[o], b[n], &b[out.clone()], &b[inn.clone()]);
    roll(&mut row.bz, b[o], b[n], &z[out.clone()], &z[inn.clone()]);
    roll(&mut row.zb, z[o], z[n], &b[out.clone()], &b[inn.clone()]);
    roll(&mut row.bx, b[o], b[n], &x[out.clone()], &x[inn.clone()]);
    roll(&mut row.xb, x[o], x[n], &b[out], &b[inn]);
    row.anchor = i;
}

fn score_row(row: &DiagonalRow, prep: &Prepared, acc: &mut ProfileAccumulator) {
    let i = row.anchor;
    let wi = prep.summaries[i];
    let params = prep.params;
    let mut best = (f64::INFINITY, usize::MAX, CaseLabel::Case1Complete);
    for t in 0..row.qz.len() {
        let j = i + row.k0 + t;
        let Some((d, case)) = lb_sqdist(&row.products(t), &wi, &prep.summaries[j], &params) else {
            continue;
        };
        if d < best.0 {
            best = (d, j, case);
        }
        acc.offer(j, d, i, case);
    }
    if best.1 != usize::MAX {
        acc.offer(i, best.0, best.1, best.2);
    }
}

/// Scores every pair whose first member lies in `anchors`.
pub(crate) fn run_block(prep: &Prepared, anchors: std::ops::Range<usize>, acc: &mut ProfileAccumulator) {
    let k0 = prep.exclusion_half_width + 1;
    if anchors.is_empty() || anchors.start + k0 >= prep.len {
        return;
    }
    let mut row = DiagonalRow::at_anchor(prep, anchors.start, k0);
    for i in anchors {
        if i + k0 >= prep.len {
            break;
        }
        if i > row.anchor {
            advance(&mut row, prep);
        }
        score_row(&row, prep, acc);
    }
}
