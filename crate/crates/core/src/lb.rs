//! Exact and lower-bound z-normalized squared distances between two windows.
//!
//! Every quantity is derived from six dot products between the windows' zero-filled
//! values `Z`, squared values `X` and presence indicators `B`, plus per-window
//! summaries. Three situations arise:
//!
//! * both windows complete: the exact distance `2m(1 - q)`;
//! * one window has gaps: the incomplete window's mean and scale are free, so the
//!   best achievable fit over the shared positions `R` bounds the distance;
//! * both have gaps: as above, with the complete side's unknown variance replaced by
//!   an upper bound that follows from a value range for the missing entries.
//!
//! All arithmetic is on squared distances.

/// Which of the three distance situations (or a degenerate one) a pair falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    Case1Complete,
    Case2OneMissing,
    Case3BothMissing,
    DegenerateNoOverlap,
    DegenerateAllMissing,
}

impl CaseLabel {
    /// Short code used in CSV output.
    pub fn code(self) -> &'static str {
        match self {
            CaseLabel::Case1Complete => "C1",
            CaseLabel::Case2OneMissing => "C2",
            CaseLabel::Case3BothMissing => "C3",
            CaseLabel::DegenerateNoOverlap => "NOV",
            CaseLabel::DegenerateAllMissing => "AMS",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "C1" => CaseLabel::Case1Complete,
            "C2" => CaseLabel::Case2OneMissing,
            "C3" => CaseLabel::Case3BothMissing,
            "NOV" => CaseLabel::DegenerateNoOverlap,
            "AMS" => CaseLabel::DegenerateAllMissing,
            _ => return None,
        })
    }

    /// Label from the present counts of two windows and of their overlap.
    pub fn classify(m: usize, present_i: usize, present_j: usize, overlap: usize) -> Self {
        if present_i == 0 || present_j == 0 {
            CaseLabel::DegenerateAllMissing
        } else if overlap == 0 {
            CaseLabel::DegenerateNoOverlap
        } else if overlap == m {
            CaseLabel::Case1Complete
        } else if present_i == m || present_j == m {
            CaseLabel::Case2OneMissing
        } else {
            CaseLabel::Case3BothMissing
        }
    }
}

/// The six dot products of windows `i` and `j`.
///
/// `bz` is `B_i . Z_j`, `zb` is `Z_i . B_j`, and likewise for `bx`/`xb`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairProducts {
    pub qz: f64,
    pub qb: f64,
    pub bz: f64,
    pub zb: f64,
    pub bx: f64,
    pub xb: f64,
}

impl PairProducts {
    /// Direct evaluation from two raw windows (`NaN` = missing).
    pub fn direct(a: &[f64], b: &[f64]) -> Self {
        assert_eq!(a.len(), b.len());
        let mut p = PairProducts::default();
        for (&u, &v) in a.iter().zip(b) {
            let (zu, bu) = if u.is_nan() { (0.0, 0.0) } else { (u, 1.0) };
            let (zv, bv) = if v.is_nan() { (0.0, 0.0) } else { (v, 1.0) };
            p.qz += zu * zv;
            p.qb += bu * bv;
            p.bz += bu * zv;
            p.zb += zu * bv;
            p.bx += bu * zv * zv;
            p.xb += zu * zu * bv;
        }
        p
    }

    /// Products of the pair seen from the other side.
    pub fn swapped(&self) -> Self {
        PairProducts {
            qz: self.qz,
            qb: self.qb,
            bz: self.zb,
            zb: self.bz,
            bx: self.xb,
            xb: self.bx,
        }
    }
}

/// Means, variances and correlation of two windows over their shared present positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedStats {
    pub r_count: usize,
    pub mu_i_r: f64,
    pub mu_j_r: f64,
    pub var_i_r: f64,
    pub var_j_r: f64,
    /// Pearson correlation over the overlap, clamped to `[-1, 1]`; `None` when
    /// either side is (numerically) constant there.
    pub q: Option<f64>,
}

const Q_SNAP: f64 = 1e-10;

pub fn restricted_stats(p: &PairProducts, epsilon: f64) -> RestrictedStats {
    let r = p.qb;
    if r <= 0.0 {
        return RestrictedStats {
            r_count: 0,
            mu_i_r: f64::NAN,
            mu_j_r: f64::NAN,
            var_i_r: f64::NAN,
            var_j_r: f64::NAN,
            q: None,
        };
    }
    let inv = 1.0 / r;
    let ui = p.zb * inv;
    let uj = p.bz * inv;
    let r_count = r.round() as usize;
    // Variances lost in the rounding of their second moments count as zero;
    // a smaller variance only lowers the bound.
    let centred = |second: f64, mean: f64| {
        let v = second - mean * mean;
        if r_count <= 1 || v <= 1e-11 * second {
            0.0
        } else {
            v
        }
    };
    let vi = centred(p.xb * inv, ui);
    let vj = centred(p.bx * inv, uj);
    let q = (vi > epsilon && vj > epsilon).then(|| {
        let q = ((p.qz * inv - ui * uj) / (vi * vj).sqrt()).clamp(-1.0, 1.0);
        // Two points are always perfectly (anti)correlated. Otherwise a
        // correlation within rounding of +-1 is taken as exact, which can only
        // lower the bound; the slack grows with how far the raw second moments
        // sit above the variances.
        let scale = ((p.xb * inv) * (p.bx * inv) / (vi * vj)).sqrt();
        if r_count == 2 || 1.0 - q.abs() <= Q_SNAP * scale {
            q.signum()
        } else {
            q
        }
    });
    RestrictedStats {
        r_count,
        mu_i_r: ui,
        mu_j_r: uj,
        var_i_r: vi,
        var_j_r: vj,
        q,
    }
}

/// Exact squared distance of two complete z-normalized windows with correlation `q`.
#[inline]
pub fn case1_sqdist(q: f64, m: usize) -> f64 {
    2.0 * m as f64 * (1.0 - q)
}

/// Exact squared distance of two complete windows from their full statistics.
///
/// A constant window matched against a non-constant one scores `2m` (as if
/// uncorrelated); two constant windows score 0, as do correlations within
/// rounding of 1.
#[inline]
pub fn case1_from_moments(qz: f64, m: usize, mu_i: f64, sd_i: f64, mu_j: f64, sd_j: f64, epsilon: f64) -> f64 {
    let const_i = sd_i * sd_i <= epsilon;
    let const_j = sd_j * sd_j <= epsilon;
    if const_i && const_j {
        return 0.0;
    }
    if const_i || const_j {
        return case1_sqdist(0.0, m);
    }
    let mf = m as f64;
    let q = ((qz / mf - mu_i * mu_j) / (sd_i * sd_j)).clamp(-1.0, 1.0);
    let scale = ((sd_i * sd_i + mu_i * mu_i) * (sd_j * sd_j + mu_j * mu_j)).sqrt() / (sd_i * sd_j);
    if 1.0 - q <= Q_SNAP * scale {
        return 0.0;
    }
    case1_sqdist(q, m).max(0.0)
}

/// The side of a pair that is complete, for [`case2_sqlb`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    I,
    J,
}

/// Lower bound when exactly one window has gaps.
///
/// `full_var` is the complete window's variance over all `m` positions.
#[inline]
pub fn case2_sqlb(stats: &RestrictedStats, complete: Side, full_var: f64, epsilon: f64) -> f64 {
    if full_var <= epsilon || stats.r_count == 0 {
        return 0.0;
    }
    let vo = match complete {
        Side::I => stats.var_i_r,
        Side::J => stats.var_j_r,
    };
    let base = stats.r_count as f64 * vo / full_var;
    match stats.q {
        Some(q) if q > 0.0 => base * (1.0 - q * q),
        _ => base,
    }
}

/// Admissible value range for the missing entries of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletionBounds {
    pub v_min: f64,
    pub v_max: f64,
    pub c: f64,
    pub b: f64,
    pub a: f64,
}

impl CompletionBounds {
    pub fn new(v_min: f64, v_max: f64) -> Self {
        debug_assert!(v_min <= v_max || v_min.is_nan() || v_max.is_nan());
        Self {
            v_min,
            v_max,
            c: v_max - v_min,
            b: v_max * v_min,
            a: v_max + v_min,
        }
    }

    /// Range of the present values of `window`, or `None` if all are missing.
    pub fn of_present(window: &[f64]) -> Option<Self> {
        let (lo, hi) = window
            .iter()
            .filter(|v| !v.is_nan())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        (lo <= hi).then(|| Self::new(lo, hi))
    }
}

/// Upper bound on a window's full variance given its present values and the
/// range of its missing ones: `mu_b (vr + b + ur (ur - a)) + c^2 / 4`, where
/// `ur` and `vr` are the mean and variance of the present values.
#[inline]
pub fn variance_upper_bound(mu_z: f64, sigma_z: f64, mu_b: f64, bounds: &CompletionBounds) -> f64 {
    let ur = mu_z / mu_b;
    let vr = (sigma_z * sigma_z + mu_z * mu_z) / mu_b - ur * ur;
    mu_b * (vr + bounds.b + ur * (ur - bounds.a)) + bounds.c * bounds.c / 4.0
}

/// Ratio of a window's variance over the overlap to the upper bound on its full
/// variance. Returns `None` for an all-missing window and 0 when the bound is
/// numerically degenerate.
pub fn f_lb(
    mu_z: f64,
    sigma_z: f64,
    mu_b: f64,
    bounds: &CompletionBounds,
    var_over_r: f64,
    epsilon: f64,
) -> Option<f64> {
    if mu_b <= 0.0 {
        return None;
    }
    Some(f_from_bound(
        variance_upper_bound(mu_z, sigma_z, mu_b, bounds),
        var_over_r,
        epsilon,
    ))
}

#[inline]
fn f_from_bound(denominator: f64, var_over_r: f64, epsilon: f64) -> f64 {
    if denominator <= epsilon {
        0.0
    } else {
        var_over_r / denominator
    }
}

/// Lower bound when both windows have gaps.
#[inline]
pub fn case3_sqlb(stats: &RestrictedStats, f_i: f64, f_j: f64) -> f64 {
    let base = stats.r_count as f64 * f_i.max(f_j);
    match stats.q {
        Some(q) if q > 0.0 => base * (1.0 - q * q),
        _ => base,
    }
    .max(0.0)
}

/// What the distance dispatch needs to know about one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSummary {
    pub present: usize,
    pub mu_z: f64,
    pub sigma_z: f64,
    /// Output of [`variance_upper_bound`]; unused for complete windows.
    pub variance_bound: f64,
}

impl WindowSummary {
    /// Direct computation from a raw window. `bounds_override` replaces the
    /// present-value range, mirroring the engine's global bounds option.
    pub fn direct(window: &[f64], bounds_override: Option<(f64, f64)>) -> Self {
        let m = window.len() as f64;
        let present = window.iter().filter(|v| !v.is_nan()).count();
        let zf = |v: f64| if v.is_nan() { 0.0 } else { v };
        let mu_z = window.iter().map(|&v| zf(v)).sum::<f64>() / m;
        let var = window.iter().map(|&v| (zf(v) - mu_z).powi(2)).sum::<f64>() / m;
        let sigma_z = var.sqrt();
        let bounds = match bounds_override {
            Some((lo, hi)) => Some(CompletionBounds::new(lo, hi)),
            None => CompletionBounds::of_present(window),
        };
        let mu_b = present as f64 / m;
        let variance_bound = match bounds {
            Some(b) if present > 0 => variance_upper_bound(mu_z, sigma_z, mu_b, &b),
            _ => f64::NAN,
        };
        Self {
            present,
            mu_z,
            sigma_z,
            variance_bound,
        }
    }
}

/// Numeric knobs shared by every pairwise evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbParams {
    pub m: usize,
    pub epsilon: f64,
    /// When false, pairs with an all-missing window are undefined instead of 0.
    pub all_missing_bound_zero: bool,
}

/// Lower bound on the squared z-normalized distance of windows `i` and `j`
/// (exact when both are complete). `None` only for all-missing pairs under the
/// flag-invalid policy.
#[inline]
pub fn lb_sqdist(
    p: &PairProducts,
    wi: &WindowSummary,
    wj: &WindowSummary,
    params: &LbParams,
) -> Option<(f64, CaseLabel)> {
    let m = params.m;
    let eps = params.epsilon;
    if wi.present == 0 || wj.present == 0 {
        return params
            .all_missing_bound_zero
            .then_some((0.0, CaseLabel::DegenerateAllMissing));
    }
    if p.qb <= 0.0 {
        return Some((0.0, CaseLabel::DegenerateNoOverlap));
    }
    if wi.present == m && wj.present == m {
        let d = case1_from_moments(p.qz, m, wi.mu_z, wi.sigma_z, wj.mu_z, wj.sigma_z, eps);
        return Some((d, CaseLabel::Case1Complete));
    }
    let stats = restricted_stats(p, eps);
    if wi.present == m {
        let d = case2_sqlb(&stats, Side::I, wi.sigma_z * wi.sigma_z, eps);
        return Some((d, CaseLabel::Case2OneMissing));
    }
    if wj.present == m {
        let d = case2_sqlb(&stats, Side::J, wj.sigma_z * wj.sigma_z, eps);
        return Some((d, CaseLabel::Case2OneMissing));
    }
    let f_i = f_from_bound(wi.variance_bound, stats.var_i_r, eps);
    let f_j = f_from_bound(wj.variance_bound, stats.var_j_r, eps);
    Some((case3_sqlb(&stats, f_i, f_j), CaseLabel::Case3BothMissing))
}

/// [`lb_sqdist`] on two raw windows, with every input computed directly.
pub fn lb_sqdist_windows(a: &[f64], b: &[f64], bounds_override: Option<(f64, f64)>, epsilon: f64) -> (f64, CaseLabel) {
    let params = LbParams {
        m: a.len(),
        epsilon,
        all_missing_bound_zero: true,
    };
    let p = PairProducts::direct(a, b);
    let wa = WindowSummary::direct(a, bounds_override);
    let wb = WindowSummary::direct(b, bounds_override);
    lb_sqdist(&p, &wa, &wb, &params).expect("bound-zero policy always yields a value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::znorm_sqdist;
    use proptest::prelude::*;

    const NA: f64 = f64::NAN;
    const EPS: f64 = 1e-12;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn self_correlation_is_one() {
        let w = [0.0, 2.0, 0.0, 2.0];
        let s = restricted_stats(&PairProducts::direct(&w, &w), EPS);
        assert_eq!(s.r_count, 4);
        assert!(close(s.q.unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn masked_toy_correlations() {
        let s = restricted_stats(&PairProducts::direct(&[0.0, NA, 0.0, 2.0], &[0.0, 2.0, 0.0, 2.0]), EPS);
        assert_eq!(s.r_count, 3);
        assert!(close(s.q.unwrap(), 1.0, 1e-12));

        let s = restricted_stats(&PairProducts::direct(&[0.0, NA, 2.0, 0.0], &[0.0, 2.0, 0.0, 2.0]), EPS);
        assert_eq!(s.r_count, 3);
        assert!(close(s.q.unwrap(), -0.5, 1e-12));
        assert!(close(s.var_j_r, 8.0 / 9.0, 1e-12));
    }

    #[test]
    fn no_overlap_is_undefined() {
        let s = restricted_stats(&PairProducts::direct(&[1.0, NA], &[NA, 2.0]), EPS);
        assert_eq!(s.r_count, 0);
        assert!(s.q.is_none() && s.mu_i_r.is_nan());
    }

    #[test]
    fn case1_values() {
        assert_eq!(case1_sqdist(1.0, 17), 0.0);
        assert_eq!(case1_sqdist(-1.0, 4), 16.0);
        assert_eq!(case1_sqdist(0.0, 8), 16.0);
        // q = 0 really is an orthogonal pair: check with the direct distance.
        let a = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let b = [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
        assert!(close(znorm_sqdist(&a, &b, EPS), 16.0, 1e-12));
        assert!(close(lb_sqdist_windows(&a, &b, None, EPS).0, 16.0, 1e-12));
    }

    #[test]
    fn case2_toy_examples() {
        let b = [0.0, 2.0, 0.0, 2.0];
        let (d, c) = lb_sqdist_windows(&[0.0, NA, 0.0, 2.0], &b, None, EPS);
        assert_eq!(c, CaseLabel::Case2OneMissing);
        assert!(close(d, 0.0, 1e-12));

        let (d, _) = lb_sqdist_windows(&[0.0, NA, 0.0, 2.0], &[0.0, -1.0, 0.0, 2.0], None, EPS);
        assert!(close(d, 0.0, 1e-12));

        let (d, c) = lb_sqdist_windows(&[0.0, NA, 2.0, 0.0], &b, None, EPS);
        assert_eq!(c, CaseLabel::Case2OneMissing);
        assert!(close(d, 8.0 / 3.0, 1e-12), "{d}");
    }

    #[test]
    fn case2_constant_complete_side() {
        let s = restricted_stats(&PairProducts::direct(&[0.0, NA, 3.0], &[5.0, 5.0, 5.0]), EPS);
        assert_eq!(case2_sqlb(&s, Side::J, 0.0, EPS), 0.0);
    }

    #[test]
    fn f_lb_examples() {
        let bounds = CompletionBounds::new(0.0, 2.0);
        // [0, missing, 0, 2]
        let w = WindowSummary::direct(&[0.0, NA, 0.0, 2.0], None);
        assert!(close(
            variance_upper_bound(w.mu_z, w.sigma_z, 0.75, &bounds),
            1.0,
            1e-12
        ));
        assert!(close(
            f_lb(w.mu_z, w.sigma_z, 0.75, &bounds, 1.0, EPS).unwrap(),
            1.0,
            1e-12
        ));
        // [0, 2, 0, missing, 1]
        let w = WindowSummary::direct(&[0.0, 2.0, 0.0, NA, 1.0], None);
        assert!(close(w.variance_bound, 0.8, 1e-12));
        assert!(close(
            f_lb(w.mu_z, w.sigma_z, 0.8, &bounds, 8.0 / 9.0, EPS).unwrap(),
            10.0 / 9.0,
            1e-12
        ));
        // A complete window with a collapsed range gives back its own variance.
        let w = WindowSummary::direct(&[1.0, 3.0, 2.0, 6.0], None);
        let collapsed = CompletionBounds::new(4.0, 4.0);
        let denom = variance_upper_bound(w.mu_z, w.sigma_z, 1.0, &collapsed);
        let var = w.sigma_z * w.sigma_z;
        assert!(close(denom, var + (w.mu_z - 4.0).powi(2), 1e-12));
        let at_mean = CompletionBounds::new(w.mu_z, w.mu_z);
        assert!(close(
            variance_upper_bound(w.mu_z, w.sigma_z, 1.0, &at_mean),
            var,
            1e-12
        ));
        assert!(f_lb(0.0, 0.0, 0.0, &bounds, 1.0, EPS).is_none());
    }

    #[test]
    fn case3_examples() {
        let (d, c) = lb_sqdist_windows(&[0.0, NA, 0.0, 2.0], &[0.0, 2.0, NA, 2.0], None, EPS);
        assert_eq!(c, CaseLabel::Case3BothMissing);
        assert!(close(d, 0.0, 1e-12));

        let (d, c) = lb_sqdist_windows(&[0.0, 2.0, 0.0, NA, 1.0], &[2.0, 0.0, 2.0, 1.0, NA], None, EPS);
        assert_eq!(c, CaseLabel::Case3BothMissing);
        assert!(close(d, 10.0 / 3.0, 1e-12), "{d}");

        let (d, _) = lb_sqdist_windows(&[1.0, NA, NA, 4.0], &[NA, 7.0, 2.0, 5.0], None, EPS);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn dispatch_labels() {
        let w = [0.3, 1.2, -0.7, 2.2];
        assert_eq!(lb_sqdist_windows(&w, &w, None, EPS), (0.0, CaseLabel::Case1Complete));
        assert_eq!(
            lb_sqdist_windows(&[1.0, 2.0, NA, NA], &[NA, NA, 3.0, 1.0], None, EPS),
            (0.0, CaseLabel::DegenerateNoOverlap)
        );
        assert_eq!(
            lb_sqdist_windows(&[NA; 4], &w, None, EPS),
            (0.0, CaseLabel::DegenerateAllMissing)
        );
        let params = LbParams {
            m: 4,
            epsilon: EPS,
            all_missing_bound_zero: false,
        };
        let a = [NA; 4];
        let p = PairProducts::direct(&a, &w);
        assert!(lb_sqdist(
            &p,
            &WindowSummary::direct(&a, None),
            &WindowSummary::direct(&w, None),
            &params
        )
        .is_none());
    }

    #[test]
    fn constant_windows_in_case1() {
        let c = [2.0; 6];
        let w = [0.0, 1.0, 0.0, 3.0, 1.0, 2.0];
        assert_eq!(lb_sqdist_windows(&c, &c, None, EPS).0, 0.0);
        assert_eq!(lb_sqdist_windows(&c, &w, None, EPS).0, 12.0);
    }

    #[test]
    fn classify_is_count_based() {
        assert_eq!(CaseLabel::classify(4, 4, 4, 4), CaseLabel::Case1Complete);
        assert_eq!(CaseLabel::classify(4, 3, 4, 3), CaseLabel::Case2OneMissing);
        assert_eq!(CaseLabel::classify(4, 3, 3, 2), CaseLabel::Case3BothMissing);
        assert_eq!(CaseLabel::classify(4, 2, 2, 0), CaseLabel::DegenerateNoOverlap);
        assert_eq!(CaseLabel::classify(4, 0, 4, 0), CaseLabel::DegenerateAllMissing);
        for c in ["C1", "C2", "C3", "NOV", "AMS"] {
            assert_eq!(CaseLabel::from_code(c).unwrap().code(), c);
        }
    }

    fn window_pair(m: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (
            prop::collection::vec((-5.0f64..5.0, prop::bool::weighted(0.25)), m),
            prop::collection::vec((-5.0f64..5.0, prop::bool::weighted(0.25)), m),
        )
            .prop_map(|(a, b)| {
                let f = |v: Vec<(f64, bool)>| v.into_iter().map(|(x, miss)| if miss { NA } else { x }).collect();
                (f(a), f(b))
            })
    }

    proptest! {
        #[test]
        fn symmetric((a, b) in (4usize..40).prop_flat_map(window_pair)) {
            let (d1, c1) = lb_sqdist_windows(&a, &b, None, EPS);
            let (d2, c2) = lb_sqdist_windows(&b, &a, None, EPS);
            prop_assert_eq!(c1, c2);
            prop_assert!((d1 - d2).abs() <= 1e-10 * (1.0 + d1.abs()));
            prop_assert!(d1 >= 0.0);
        }

        #[test]
        fn case1_agrees_with_direct(a in prop::collection::vec(-10.0f64..10.0, 3..64), seed in any::<u64>()) {
            let b: Vec<f64> = a.iter().enumerate().map(|(k, v)| (v * 0.7 + ((k as u64 ^ seed) % 13) as f64).sin()).collect();
            let (d, c) = lb_sqdist_windows(&a, &b, None, EPS);
            prop_assert_eq!(c, CaseLabel::Case1Complete);
            let direct = znorm_sqdist(&a, &b, EPS);
            prop_assert!((d - direct).abs() <= 1e-8 * direct.max(1.0));
            prop_assert!(d <= 4.0 * a.len() as f64 + 1e-9);
        }

        #[test]
        fn branches_meet_at_zero_correlation(r in 1usize..64, vo in 0.0f64..10.0, v in 0.01f64..10.0, f1 in 0.0f64..3.0, f2 in 0.0f64..3.0) {
            let mut s = RestrictedStats { r_count: r, mu_i_r: 0.0, mu_j_r: 0.0, var_i_r: vo, var_j_r: vo, q: Some(0.0) };
            let at_zero = (case2_sqlb(&s, Side::I, v, EPS), case3_sqlb(&s, f1, f2));
            s.q = Some(-0.0);
            let below = (case2_sqlb(&s, Side::I, v, EPS), case3_sqlb(&s, f1, f2));
            s.q = None;
            let undefined = (case2_sqlb(&s, Side::I, v, EPS), case3_sqlb(&s, f1, f2));
            prop_assert_eq!(at_zero, below);
            prop_assert_eq!(at_zero, undefined);
        }

        #[test]
        fn masking_never_exceeds_complete_distance(
            a in prop::collection::vec(-5.0f64..5.0, 8..32),
            noise in prop::collection::vec(-1.0f64..1.0, 32),
            mask_a in prop::collection::vec(prop::bool::weighted(0.3), 32),
            mask_b in prop::collection::vec(prop::bool::weighted(0.3), 32),
        ) {
            let m = a.len();
            let b: Vec<f64> = a.iter().zip(&noise).map(|(x, e)| x + e).collect();
            let exact = znorm_sqdist(&a, &b, EPS);
            let lo = a.iter().chain(&b).cloned().fold(f64::INFINITY, f64::min);
            let hi = a.iter().chain(&b).cloned().fold(f64::NEG_INFINITY, f64::max);
            let am: Vec<f64> = (0..m).map(|k| if mask_a[k] { NA } else { a[k] }).collect();
            let bm: Vec<f64> = (0..m).map(|k| if mask_b[k] { NA } else { b[k] }).collect();
            let (d, _) = lb_sqdist_windows(&am, &bm, Some((lo, hi)), EPS);
            prop_assert!(d <= exact + 1e-9, "bound {} > exact {}", d, exact);
        }
    }
}
