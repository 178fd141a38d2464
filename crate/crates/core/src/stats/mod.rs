//! Estimators: empirical tails with exact binomial intervals, log-linear
//! decay fits, drift, and the Chernoff bound for exponential sums.

mod experiments;

pub use experiments::*;

use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};
use thiserror::Error;

use crate::walk::WalkError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("no values to estimate from")]
    Empty,
    #[error("confidence must lie in (0, 1), got {0}")]
    Confidence(f64),
    #[error("thresholds must be ascending")]
    UnsortedThresholds,
    #[error("need at least 3 points with positive probability, got {0}")]
    TooFewPoints(usize),
    #[error("all x values coincide; slope is undefined")]
    DegenerateX,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Clopper–Pearson interval for `successes` out of `trials`.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("positive shape parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("positive shape parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

/// An observed frequency with its confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64, confidence: f64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(successes, trials, confidence);
        let p = successes as f64 / trials as f64;
        Proportion {
            successes,
            trials,
            p,
            // the beta quantile can land an ulp on the wrong side of p
            ci_low: ci_low.min(p),
            ci_high: ci_high.max(p),
        }
    }
}

/// `P̂(value ≥ t)` for ascending thresholds `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub thresholds: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub counts: Vec<u64>,
    pub sample_count: u64,
}

impl TailEstimate {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.thresholds
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
            .collect()
    }

    pub fn rows(&self) -> Vec<[f64; 4]> {
        (0..self.thresholds.len())
            .map(|i| {
                [
                    self.thresholds[i],
                    self.probabilities[i],
                    self.ci_low[i],
                    self.ci_high[i],
                ]
            })
            .collect()
    }
}

/// Frequencies of an event indexed by a parameter such as the walk length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencySeries {
    pub x: Vec<f64>,
    pub points: Vec<Proportion>,
}

impl FrequencySeries {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.x.iter().copied().zip(self.points.iter().map(|p| p.p)).collect()
    }

    pub fn rows(&self) -> Vec<[f64; 4]> {
        self.x
            .iter()
            .zip(&self.points)
            .map(|(&x, p)| [x, p.p, p.ci_low, p.ci_high])
            .collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p).collect()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].p < w[0].p)
    }

    pub fn non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].p <= w[0].p)
    }
}

fn check_confidence(confidence: f64) -> Result<(), StatsError> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(StatsError::Confidence(confidence))
    }
}

fn check_ascending(thresholds: &[f64]) -> Result<(), StatsError> {
    if thresholds.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(StatsError::UnsortedThresholds)
    }
}

pub fn empirical_tail(
    values: &[f64],
    thresholds: &[f64],
    confidence: f64,
) -> Result<TailEstimate, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    check_confidence(confidence)?;
    check_ascending(thresholds)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as u64;
    let mut est = TailEstimate {
        thresholds: thresholds.to_vec(),
        probabilities: Vec::with_capacity(thresholds.len()),
        ci_low: Vec::with_capacity(thresholds.len()),
        ci_high: Vec::with_capacity(thresholds.len()),
        counts: Vec::with_capacity(thresholds.len()),
        sample_count: n,
    };
    for &t in thresholds {
        let below = sorted.partition_point(|&v| v < t) as u64;
        let prop = Proportion::new(n - below, n, confidence);
        est.probabilities.push(prop.p);
        est.ci_low.push(prop.ci_low);
        est.ci_high.push(prop.ci_high);
        est.counts.push(prop.successes);
    }
    Ok(est)
}

/// Least-squares fit of `log p = intercept + slope·x`, so `p ≈ K cˣ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Points dropped because their probability was zero.
    pub excluded: usize,
}

pub fn fit_exponential_decay(series: &[(f64, f64)]) -> Result<DecayFit, StatsError> {
    let used: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(x, p)| (x, p.ln()))
        .collect();
    if used.len() < 3 {
        return Err(StatsError::TooFewPoints(used.len()));
    }
    let m = used.len() as f64;
    let mean_x = used.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = used.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = used.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(StatsError::DegenerateX);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = used.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = used
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        slope,
        intercept,
        c: slope.exp(),
        k: intercept.exp(),
        r_squared,
        points_used: used.len(),
        excluded: series.len() - used.len(),
    })
}

/// Mean rate of escape `d(1, w_n)/n` with a normal-approximation interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftEstimate {
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
    pub samples: usize,
    pub std_dev: f64,
}

impl DriftEstimate {
    pub(crate) fn from_rates(rates: &[f64], n: usize) -> Self {
        let m = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / m;
        let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let std_dev = var.sqrt();
        let half = 1.959_963_984_540_054 * std_dev / m.sqrt();
        DriftEstimate {
            rate: mean,
            ci_low: mean - half,
            ci_high: mean + half,
            n,
            samples: rates.len(),
            std_dev,
        }
    }
}

/// `((1 + t)/eᵗ)ⁿ`, the Chernoff bound for `P(Z₁ + … + Zₙ ≥ (1 + t) n E[Z])`
/// with i.i.d. exponential `Zᵢ`.
pub fn chernoff_bound(t: f64, n: u32) -> Result<f64, StatsError> {
    if !(t >= 0.0) {
        return Err(StatsError::Parameter(format!("t must be non-negative, got {t}")));
    }
    if n == 0 {
        return Err(StatsError::Parameter("n must be at least 1".into()));
    }
    Ok(((1.0 + t) / t.exp()).powi(n as i32))
}
