//! Missing-value time series, their auxiliary vectors and engine configuration.

use crate::error::{MdmsError, Result};

/// A time series in which any value may be missing.
///
/// Missing entries are stored as `NaN`; present entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct MissingValueSeries {
    values: Vec<f64>,
}

impl MissingValueSeries {
    pub const MIN_LEN: usize = 2;

    /// Builds a series from raw values, treating `NaN` as missing.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| v.is_infinite()) {
            return Err(MdmsError::NonFinite { line: pos + 1 });
        }
        if values.len() < Self::MIN_LEN {
            return Err(MdmsError::TooShort {
                found: values.len(),
                required: Self::MIN_LEN,
            });
        }
        Ok(Self { values })
    }

    pub fn from_options<I: IntoIterator<Item = Option<f64>>>(values: I) -> Result<Self> {
        Self::new(values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        let v = self.values[i];
        (!v.is_nan()).then_some(v)
    }

    pub fn is_missing(&self, i: usize) -> bool {
        self.values[i].is_nan()
    }

    /// Raw values with `NaN` in missing slots.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.values.iter().map(|&v| (!v.is_nan()).then_some(v))
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.missing_count() == 0
    }

    /// Values of a complete series; errors if anything is missing.
    pub fn complete_values(&self) -> Result<&[f64]> {
        match self.missing_count() {
            0 => Ok(&self.values),
            k => Err(MdmsError::MissingValues(k)),
        }
    }

    pub fn window(&self, start: usize, m: usize) -> &[f64] {
        &self.values[start..start + m]
    }

    pub fn into_raw(self) -> Vec<f64> {
        self.values
    }
}

/// Dialect for [`parse_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvFormat {
    pub delimiter: char,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self { delimiter: ',' }
    }
}

fn is_missing_token(token: &str) -> bool {
    token.is_empty() || token.eq_ignore_ascii_case("nan")
}

/// Parses one value per record, or `timestamp,value` records (the last field is
/// the value). Empty fields and `NaN` in any case are missing. A first record
/// whose value field is neither numeric nor a missing token is a header.
pub fn parse_series(raw: &str, format: CsvFormat) -> Result<MissingValueSeries> {
    let body = raw.strip_suffix('\n').unwrap_or(raw);
    let mut values = Vec::new();
    if !raw.is_empty() {
        for (idx, line) in body.split('\n').enumerate() {
            let line_no = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            let token = line.rsplit(format.delimiter).next().unwrap_or("").trim();
            if is_missing_token(token) {
                values.push(f64::NAN);
                continue;
            }
            match token.parse::<f64>() {
                Ok(v) if v.is_infinite() => return Err(MdmsError::NonFinite { line: line_no }),
                Ok(v) if v.is_nan() => values.push(f64::NAN),
                Ok(v) => values.push(v),
                Err(_) if idx == 0 => {}
                Err(_) => {
                    return Err(MdmsError::Parse {
                        line: line_no,
                        token: token.to_string(),
                    })
                }
            }
        }
    }
    MissingValueSeries::new(values)
}

/// Zero-filled values, their squares, and the presence indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliarySeries {
    pub z: Vec<f64>,
    pub x: Vec<f64>,
    pub bind: Vec<f64>,
}

pub fn build_auxiliary(series: &MissingValueSeries) -> AuxiliarySeries {
    build_auxiliary_shifted(series, 0.0)
}

/// Like [`build_auxiliary`] but subtracts `shift` from every present value.
/// Z-normalized quantities are shift invariant, and centring the data keeps
/// the rolling sums well conditioned.
pub(crate) fn build_auxiliary_shifted(series: &MissingValueSeries, shift: f64) -> AuxiliarySeries {
    let n = series.len();
    let mut z = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut bind = Vec::with_capacity(n);
    for v in series.iter() {
        match v {
            Some(v) => {
                let c = v - shift;
                z.push(c);
                x.push(c * c);
                bind.push(1.0);
            }
            None => {
                z.push(0.0);
                x.push(0.0);
                bind.push(0.0);
            }
        }
    }
    AuxiliarySeries { z, x, bind }
}

/// How pairs involving a window with no present values are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AllMissingPolicy {
    /// Score such pairs 0, the only admissible bound without evidence.
    #[default]
    BoundZero,
    /// Leave such pairs undefined; all-missing positions get no value.
    FlagInvalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub m: usize,
    pub exclusion_divisor: usize,
    /// Global `(v_min, v_max)` for missing entries, replacing per-window extrema.
    pub value_bounds: Option<(f64, f64)>,
    pub epsilon: f64,
    pub all_missing_policy: AllMissingPolicy,
}

impl EngineConfig {
    pub const DEFAULT_EXCLUSION_DIVISOR: usize = 4;
    pub const DEFAULT_EPSILON: f64 = 1e-12;

    pub fn new(m: usize) -> Self {
        Self {
            m,
            exclusion_divisor: Self::DEFAULT_EXCLUSION_DIVISOR,
            value_bounds: None,
            epsilon: Self::DEFAULT_EPSILON,
            all_missing_policy: AllMissingPolicy::default(),
        }
    }

    pub fn with_exclusion_divisor(mut self, divisor: usize) -> Self {
        self.exclusion_divisor = divisor;
        self
    }

    pub fn with_value_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.value_bounds = Some((lo, hi));
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_all_missing_policy(mut self, policy: AllMissingPolicy) -> Self {
        self.all_missing_policy = policy;
        self
    }

    /// Half-width of the trivial-match exclusion zone.
    pub fn exclusion_half_width(&self) -> usize {
        self.m / self.exclusion_divisor.max(1)
    }

    /// Number of windows in a series of length `n`.
    pub fn profile_len(&self, n: usize) -> usize {
        n + 1 - self.m
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.exclusion_divisor == 0 {
            return Err(MdmsError::Config("exclusion divisor must be positive".into()));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(MdmsError::Config("epsilon must be finite and nonnegative".into()));
        }
        if let Some((lo, hi)) = self.value_bounds {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(MdmsError::Config(format!("invalid value bounds ({lo}, {hi})")));
            }
        }
        if self.m < 3 || self.m > n / 2 {
            return Err(MdmsError::InfeasibleWindow { m: self.m, n });
        }
        Ok(())
    }
}
