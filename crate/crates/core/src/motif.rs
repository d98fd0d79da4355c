//! Ranked motif pairs from a (lower-bound) matrix profile.

use crate::engine::LowerBoundMatrixProfile;
use crate::lb::CaseLabel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotifPair {
    pub pos_a: usize,
    pub pos_b: usize,
    pub distance: f64,
    /// 1-based.
    pub rank: usize,
    pub case_label: Option<CaseLabel>,
}

/// Up to `k` motif pairs, best first.
///
/// Each round takes the smallest remaining profile entry together with its
/// stored neighbor, then removes the exclusion zones around both members.
/// Ties go to the smallest `pos_a`, then `pos_b`. All-missing positions are
/// never reported.
pub fn top_k_motifs(profile: &LowerBoundMatrixProfile, k: usize) -> Vec<MotifPair> {
    let len = profile.len();
    let w = profile.exclusion_half_width;
    let mut candidates: Vec<(f64, usize, usize)> = (0..len)
        .filter(|&j| !profile.all_missing[j] && profile.is_valid(j))
        .filter_map(|j| {
            let i = profile.index[j]?;
            if profile.all_missing[i] {
                return None;
            }
            Some((profile.values[j], j.min(i), j.max(i)))
        })
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut blocked = vec![false; len];
    let mut out = Vec::new();
    for (distance, a, b) in candidates {
        if out.len() >= k {
            break;
        }
        if blocked[a] || blocked[b] {
            continue;
        }
        for p in [a, b] {
            let lo = p.saturating_sub(w);
            let hi = (p + w).min(len - 1);
            blocked[lo..=hi].fill(true);
        }
        let case_label = if profile.index[a] == Some(b) {
            profile.case[a]
        } else {
            profile.case[b]
        };
        out.push(MotifPair {
            pos_a: a,
            pos_b: b,
            distance,
            rank: out.len() + 1,
            case_label,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(values: Vec<f64>, index: Vec<Option<usize>>, w: usize) -> LowerBoundMatrixProfile {
        let n = values.len();
        LowerBoundMatrixProfile {
            values,
            index,
            case: vec![Some(CaseLabel::Case1Complete); n],
            all_missing: vec![false; n],
            m: 4 * w.max(1),
            exclusion_half_width: w,
        }
    }

    #[test]
    fn unique_minimum_pair() {
        let p = profile(
            vec![5.0, 0.1, 3.0, 0.1, 7.0],
            vec![Some(3), Some(3), Some(0), Some(1), Some(1)],
            1,
        );
        let got = top_k_motifs(&p, 1);
        assert_eq!(got.len(), 1);
        assert_eq!(
            (got[0].pos_a, got[0].pos_b, got[0].distance, got[0].rank),
            (1, 3, 0.1, 1)
        );
    }

    #[test]
    fn masking_removes_overlaps_and_prefix_is_stable() {
        let p = profile(
            vec![0.5, 0.1, 0.2, 0.1, 0.9, 0.3, 0.4, 0.3, 0.8, 0.8],
            vec![
                Some(5),
                Some(3),
                Some(7),
                Some(1),
                Some(8),
                Some(7),
                Some(9),
                Some(5),
                Some(4),
                Some(6),
            ],
            1,
        );
        let all = top_k_motifs(&p, 10);
        for k in 1..=all.len() {
            assert_eq!(top_k_motifs(&p, k), all[..k].to_vec());
        }
        assert_eq!((all[0].pos_a, all[0].pos_b), (1, 3));
        assert_eq!((all[1].pos_a, all[1].pos_b), (5, 7));
        assert!(all.windows(2).all(|w| w[0].distance <= w[1].distance));
        for (x, y) in all.iter().zip(all.iter().skip(1)) {
            for p in [x.pos_a, x.pos_b] {
                for q in [y.pos_a, y.pos_b] {
                    assert!(p.abs_diff(q) > 1);
                }
            }
        }
    }

    #[test]
    fn flagged_and_empty_profiles() {
        let mut p = profile(vec![0.0, 1.0, 0.0, 1.0], vec![Some(2), Some(3), Some(0), Some(1)], 1);
        p.all_missing[0] = true;
        let got = top_k_motifs(&p, 5);
        assert_eq!((got[0].pos_a, got[0].pos_b), (1, 3));
        let none = profile(vec![f64::INFINITY; 3], vec![None; 3], 1);
        assert!(top_k_motifs(&none, 2).is_empty());
    }
}
