//! Centered singular value thresholding and the uncentered baseline.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    singular_values_centered_with, singular_values_uncentered_with, DataMatrix, SpectralOptions,
    SpectrumResult, Strategy,
};

/// Rule for the slack term `t_n` added to `√p + √n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TnRule {
    /// `t_n = ln n`.
    #[default]
    LogN,
    /// A fixed non-negative `t_n`.
    Explicit(f64),
}

impl std::str::FromStr for TnRule {
    type Err = Error;

    /// `"log"` or a non-negative number.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("log") || s.eq_ignore_ascii_case("log_n") {
            return Ok(TnRule::LogN);
        }
        s.parse::<f64>().map(TnRule::Explicit).map_err(|_| {
            Error::InvalidParameter(format!("t_n must be `log` or a number, got {s:?}"))
        })
    }
}

/// The threshold `T = √p + √n + t_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    pub rule: TnRule,
    pub tn: f64,
    /// `T`.
    pub threshold: f64,
}

/// Output of [`csvt`]: `k_hat = r + 1` where `r` counts singular values
/// of the centered matrix strictly above the threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub k_hat: usize,
    pub r: usize,
    pub threshold: ThresholdSpec,
    pub spectrum: SpectrumResult,
    /// Seconds, for the whole estimate.
    pub wall_time: f64,
}

pub fn threshold(p: usize, n: usize, rule: TnRule) -> Result<ThresholdSpec> {
    if p == 0 || n == 0 {
        return Err(Error::InvalidDimensions(format!(
            "p and n must be positive, got p={p}, n={n}"
        )));
    }
    let tn = match rule {
        TnRule::LogN => {
            if n < 2 {
                return Err(Error::InvalidParameter(
                    "the log n rule needs n >= 2 so that t_n > 0".into(),
                ));
            }
            (n as f64).ln()
        }
        TnRule::Explicit(t) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "explicit t_n must be finite and >= 0, got {t}"
                )));
            }
            t
        }
    };
    Ok(ThresholdSpec {
        rule,
        tn,
        threshold: (p as f64).sqrt() + (n as f64).sqrt() + tn,
    })
}

/// Number of values strictly greater than `t`.
pub fn count_above(values: &[f64], t: f64) -> usize {
    values.iter().filter(|&&s| s > t).count()
}

pub fn csvt(x: &DataMatrix, rule: TnRule, strategy: Strategy) -> Result<EstimateReport> {
    csvt_with(x, rule, strategy, &SpectralOptions::default())
}

pub fn csvt_with(
    x: &DataMatrix,
    rule: TnRule,
    strategy: Strategy,
    opts: &SpectralOptions,
) -> Result<EstimateReport> {
    let start = Instant::now();
    if x.n() < 2 {
        // a single centered sample is identically zero whatever the mixture
        return Err(Error::InvalidDimensions(
            "CSVT needs at least two samples".into(),
        ));
    }
    let threshold = threshold(x.p(), x.n(), rule)?;
    let spectrum = singular_values_centered_with(x, strategy, opts)?;
    let r = count_above(&spectrum.singular_values, threshold.threshold);
    Ok(EstimateReport {
        k_hat: r + 1,
        r,
        threshold,
        spectrum,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// `|{i : σᵢ(X) > T}|` on the raw matrix, with no `+1`.
pub fn raw_count(x: &DataMatrix, rule: TnRule, strategy: Strategy) -> Result<usize> {
    raw_count_with(x, rule, strategy, &SpectralOptions::default())
}

pub fn raw_count_with(
    x: &DataMatrix,
    rule: TnRule,
    strategy: Strategy,
    opts: &SpectralOptions,
) -> Result<usize> {
    let threshold = threshold(x.p(), x.n(), rule)?;
    let spectrum = singular_values_uncentered_with(x, strategy, opts)?;
    Ok(count_above(&spectrum.singular_values, threshold.threshold))
}
