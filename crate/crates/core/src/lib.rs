//! Motif discovery on time series with missing values.
//!
//! [`mdms`] computes a lower-bound matrix profile: for every window, a value no
//! larger than the z-normalized distance to its nearest neighbor under any
//! completion of the missing data. On a complete series it is the exact
//! matrix profile.

pub mod engine;
pub mod error;
pub mod lb;
pub mod motif;
pub mod oracle;
pub mod preprocess;
pub mod series;
pub mod stats;

pub use engine::brute::BruteForceResult;
pub use engine::{
    brute_force_profile, brute_force_with_runner_up, mdms, mdms_with_threads, stomp_exact, LowerBoundMatrixProfile,
};
pub use error::{MdmsError, Result};
pub use lb::{lb_sqdist_windows, CaseLabel, CompletionBounds};
pub use motif::{top_k_motifs, MotifPair};
pub use oracle::{oracle_min_distance, znorm_sqdist};
pub use preprocess::{
    apply_mask, linear_impute, mark_pseudo_missing, MaskAmount, MaskMode, MaskSpec, PseudoMissingRules,
};
pub use series::{parse_series, AllMissingPolicy, AuxiliarySeries, CsvFormat, EngineConfig, MissingValueSeries};
