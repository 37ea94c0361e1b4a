//! Empirical probes of extremal cluster structure.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::estimators::{self, EstimatorError, ThresholdSpec};

/// Default minimum number of conditioning points for spectral ratios.
pub const MIN_CONDITIONING_POINTS: usize = 30;
/// Default conditioning level for spectral ratios, as a quantile of `|X|`.
pub const SPECTRAL_QUANTILE: f64 = 0.999;

/// Number of exceedances in each exceeding block, tabulated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterHistogram {
    pub threshold: f64,
    pub block_length: usize,
    /// Cluster size to number of blocks with that many exceedances.
    pub counts: BTreeMap<usize, usize>,
}

impl ClusterHistogram {
    pub fn exceeding_blocks(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn exceedances(&self) -> usize {
        self.counts.iter().map(|(size, freq)| size * freq).sum()
    }

    pub fn mean_cluster_size(&self) -> f64 {
        self.exceedances() as f64 / self.exceeding_blocks() as f64
    }
}

/// Cluster sizes over the complete disjoint blocks of length `r`.
pub fn cluster_size_histogram(series: &[f64], r: usize, u: f64) -> Result<ClusterHistogram, EstimatorError> {
    // Delegating validation keeps the error contract identical to the blocks estimator.
    estimators::blocks_estimator(series, r, u)?;
    let k = series.len() / r;
    let mut counts = BTreeMap::new();
    for block in series[..k * r].chunks_exact(r) {
        let c = block.iter().filter(|&&x| x > u).count();
        if c > 0 {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    Ok(ClusterHistogram { threshold: u, block_length: r, counts })
}

/// Block-level `theta_n`: exceeding blocks over exceedances in complete
/// blocks, the reciprocal of the empirical mean cluster size.
pub fn theta_n_empirical(series: &[f64], r: usize, u: f64) -> Result<f64, EstimatorError> {
    let hist = cluster_size_histogram(series, r, u)?;
    Ok(hist.exceeding_blocks() as f64 / hist.exceedances() as f64)
}

/// Sample of `X_{t+h} / |X_t|` over all `t` with `|X_t| > u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRatioSample {
    pub threshold: f64,
    pub lag: i64,
    pub ratios: Vec<f64>,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Empirical lag-`h` spectral ratios conditioned on `|X_t| > u`; positions
/// where `t + h` falls outside the sample are skipped.
pub fn empirical_spectral_ratio(
    series: &[f64],
    u: f64,
    lag: i64,
    min_points: usize,
) -> Result<SpectralRatioSample, EstimatorError> {
    if let Some(i) = series.iter().position(|x| !x.is_finite()) {
        return Err(EstimatorError::InvalidParameter(format!("non-finite value at position {}", i + 1)));
    }
    let n = series.len() as i64;
    let ratios: Vec<f64> = series
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > u)
        .filter_map(|(t, x)| {
            let target = t as i64 + lag;
            (0..n).contains(&target).then(|| series[target as usize] / x.abs())
        })
        .collect();
    if ratios.len() < min_points.max(1) {
        return Err(EstimatorError::TooFewExceedances { found: ratios.len(), needed: min_points.max(1) });
    }
    let mut sorted = ratios.clone();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    Ok(SpectralRatioSample {
        threshold: u,
        lag,
        median: quantile_sorted(&sorted, 0.5),
        q25: quantile_sorted(&sorted, 0.25),
        q75: quantile_sorted(&sorted, 0.75),
        ratios,
    })
}

/// The default conditioning threshold: the 99.9% sample quantile of `|X|`.
pub fn default_spectral_threshold(series: &[f64]) -> Result<f64, EstimatorError> {
    let abs: Vec<f64> = series.iter().map(|x| x.abs()).collect();
    estimators::resolve_threshold(&abs, ThresholdSpec::Quantile(SPECTRAL_QUANTILE))
}
