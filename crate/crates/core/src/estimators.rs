//! Extremal index estimators, the Hill tail-index estimator and threshold
//! utilities.
//!
//! Conventions shared by every estimator:
//!
//! - an exceedance of `u` is a strict `X_t > u`;
//! - disjoint blocks have length `r`, there are `k = floor(n / r)` of them and
//!   the trailing partial block is ignored;
//! - a sliding window starting at `t` covers the `r` observations
//!   `t, ..., t + r - 1`;
//! - positions reported to callers are 1-based.
//!
//! Estimators that operate on signed data expect the caller to pass `|X_t|`
//! when the target is the extremal index of the absolute values.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("NoExceedances: no observation exceeds the threshold {threshold}")]
    NoExceedances { threshold: f64 },
    #[error("DegenerateCounts: K = {clusters} of k = {blocks} blocks, N = {exceedances} of {observations} observations")]
    DegenerateCounts { clusters: usize, blocks: usize, exceedances: usize, observations: usize },
    #[error("AllWindowsExceed: every sliding window of length {window} contains an exceedance")]
    AllWindowsExceed { window: usize },
    #[error("TooFewExceedances: found {found}, need at least {needed}")]
    TooFewExceedances { found: usize, needed: usize },
    #[error("DegenerateIntervals: all inter-exceedance times equal 1")]
    DegenerateIntervals,
    #[error("NonPositiveOrderStatistic: the ({index})-th largest absolute value is {value}")]
    NonPositiveOrderStatistic { index: usize, value: f64 },
    #[error("NonIdentifiable: the top order statistics are all equal")]
    NonIdentifiable,
    #[error("NoQualifyingBlocks: no block sum exceeds the {s}-th largest")]
    NoQualifyingBlocks { s: usize },
}

impl EstimatorError {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorError::InvalidParameter(_) => "InvalidParameter",
            EstimatorError::NoExceedances { .. } => "NoExceedances",
            EstimatorError::DegenerateCounts { .. } => "DegenerateCounts",
            EstimatorError::AllWindowsExceed { .. } => "AllWindowsExceed",
            EstimatorError::TooFewExceedances { .. } => "TooFewExceedances",
            EstimatorError::DegenerateIntervals => "DegenerateIntervals",
            EstimatorError::NonPositiveOrderStatistic { .. } => "NonPositiveOrderStatistic",
            EstimatorError::NonIdentifiable => "NonIdentifiable",
            EstimatorError::NoQualifyingBlocks { .. } => "NoQualifyingBlocks",
        }
    }
}

fn invalid(msg: impl Into<String>) -> EstimatorError {
    EstimatorError::InvalidParameter(msg.into())
}

/// The estimator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorId {
    #[serde(rename = "bl")]
    Blocks,
    #[serde(rename = "dbl")]
    DisjointBlocks,
    #[serde(rename = "slbl")]
    SlidingBlocks,
    #[serde(rename = "runs")]
    Runs,
    #[serde(rename = "int")]
    Intervals,
    #[serde(rename = "Nsl", alias = "nsl")]
    NorthropSliding,
    #[serde(rename = "Ndbl", alias = "ndbl")]
    NorthropDisjoint,
    #[serde(rename = "scp")]
    SpectralCluster,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 8] = [
        EstimatorId::Blocks,
        EstimatorId::DisjointBlocks,
        EstimatorId::SlidingBlocks,
        EstimatorId::Runs,
        EstimatorId::Intervals,
        EstimatorId::NorthropSliding,
        EstimatorId::NorthropDisjoint,
        EstimatorId::SpectralCluster,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorId::Blocks => "bl",
            EstimatorId::DisjointBlocks => "dbl",
            EstimatorId::SlidingBlocks => "slbl",
            EstimatorId::Runs => "runs",
            EstimatorId::Intervals => "int",
            EstimatorId::NorthropSliding => "Nsl",
            EstimatorId::NorthropDisjoint => "Ndbl",
            EstimatorId::SpectralCluster => "scp",
        }
    }

    /// Name of the hyperparameter swept in studies: block length `r`, run
    /// length `l`, or the intervals threshold divisor `x`.
    pub fn param_name(&self) -> &'static str {
        match self {
            EstimatorId::Runs => "l",
            EstimatorId::Intervals => "x",
            _ => "r",
        }
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorId {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EstimatorId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown estimator '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimateFlag {
    /// Uncapped estimate above 1.
    ExceedsOne,
    /// The intervals estimate was capped at 1.
    Capped,
    /// Intervals denominator was zero with a positive numerator.
    DenominatorZero,
    /// Runs numerator was zero.
    DegenerateZero,
    /// Every inter-exceedance time exceeds 2.
    LongGaps,
}

/// One estimator evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub estimator: EstimatorId,
    pub hyper: BTreeMap<String, f64>,
    pub value: f64,
    pub counts: BTreeMap<String, u64>,
    pub flags: Vec<EstimateFlag>,
}

impl EstimateRecord {
    fn new(estimator: EstimatorId, value: f64) -> Self {
        let mut flags = Vec::new();
        if value > 1.0 {
            flags.push(EstimateFlag::ExceedsOne);
        }
        Self { estimator, hyper: BTreeMap::new(), value, counts: BTreeMap::new(), flags }
    }

    fn hyper(mut self, name: &str, v: f64) -> Self {
        self.hyper.insert(name.to_string(), v);
        self
    }

    fn count(mut self, name: &str, v: usize) -> Self {
        self.counts.insert(name.to_string(), v as u64);
        self
    }

    pub fn has_flag(&self, flag: EstimateFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// How a threshold `u` is chosen from a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSpec {
    Value(f64),
    /// The `k`-th largest observation.
    UpperOrderStatistic(usize),
    /// Empirical `q`-quantile without interpolation, `X_(ceil(q n))`.
    Quantile(f64),
}

fn check_series(series: &[f64]) -> Result<(), EstimatorError> {
    if series.is_empty() {
        return Err(invalid("series is empty"));
    }
    if let Some(i) = series.iter().position(|x| !x.is_finite()) {
        return Err(invalid(format!("non-finite value at position {}", i + 1)));
    }
    Ok(())
}

fn check_block_length(n: usize, r: usize) -> Result<usize, EstimatorError> {
    if r == 0 {
        return Err(invalid("block length r must be at least 1"));
    }
    let k = n / r;
    if k == 0 {
        return Err(invalid(format!("block length {r} exceeds the sample size {n}")));
    }
    Ok(k)
}

/// Resolve a threshold rule against `series`.
pub fn resolve_threshold(series: &[f64], spec: ThresholdSpec) -> Result<f64, EstimatorError> {
    check_series(series)?;
    let n = series.len();
    match spec {
        ThresholdSpec::Value(u) => {
            if u.is_nan() {
                return Err(invalid("threshold is NaN"));
            }
            Ok(u)
        }
        ThresholdSpec::UpperOrderStatistic(k) => {
            if k == 0 || k > n {
                return Err(invalid(format!("upper order statistic {k} out of range 1..={n}")));
            }
            let mut sorted = series.to_vec();
            // k-th largest is the (n-k)-th smallest, 0-based.
            let (_, kth, _) = sorted.select_nth_unstable_by(n - k, |a, b| a.total_cmp(b));
            Ok(*kth)
        }
        ThresholdSpec::Quantile(q) => {
            if !(q > 0.0 && q < 1.0) {
                return Err(invalid(format!("quantile level must lie in (0, 1), got {q}")));
            }
            let idx = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
            let mut sorted = series.to_vec();
            let (_, v, _) = sorted.select_nth_unstable_by(idx, |a, b| a.total_cmp(b));
            Ok(*v)
        }
    }
}

/// 1-based positions `t` with `X_t > u`.
pub fn exceedance_times(series: &[f64], u: f64) -> Vec<usize> {
    series
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > u)
        .map(|(i, _)| i + 1)
        .collect()
}

/// `(K, N)` over the first `k r` observations.
fn block_counts(series: &[f64], r: usize, k: usize, u: f64) -> (usize, usize) {
    let mut clusters = 0;
    let mut exceedances = 0;
    for block in series[..k * r].chunks_exact(r) {
        let c = block.iter().filter(|&&x| x > u).count();
        exceedances += c;
        if c > 0 {
            clusters += 1;
        }
    }
    (clusters, exceedances)
}

/// Blocks estimator `K_n(u) / N_n(u)`: exceeding blocks over exceedances,
/// both counted in the `k` complete blocks.
pub fn blocks_estimator(series: &[f64], r: usize, u: f64) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let k = check_block_length(series.len(), r)?;
    let (clusters, exceedances) = block_counts(series, r, k, u);
    if exceedances == 0 {
        return Err(EstimatorError::NoExceedances { threshold: u });
    }
    Ok(EstimateRecord::new(EstimatorId::Blocks, clusters as f64 / exceedances as f64)
        .hyper("r", r as f64)
        .hyper("u", u)
        .count("exceedances", exceedances)
        .count("clusters", clusters)
        .count("blocks", k))
}

/// Disjoint blocks estimator `log(1 - K/k) / (r log(1 - N/(k r)))`.
pub fn disjoint_blocks_estimator(series: &[f64], r: usize, u: f64) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let k = check_block_length(series.len(), r)?;
    let used = k * r;
    let (clusters, exceedances) = block_counts(series, r, k, u);
    if clusters == 0 || clusters == k || exceedances == 0 || exceedances == used {
        return Err(EstimatorError::DegenerateCounts { clusters, blocks: k, exceedances, observations: used });
    }
    let num = (1.0 - clusters as f64 / k as f64).ln();
    let den = r as f64 * (1.0 - exceedances as f64 / used as f64).ln();
    Ok(EstimateRecord::new(EstimatorId::DisjointBlocks, num / den)
        .hyper("r", r as f64)
        .hyper("u", u)
        .count("exceedances", exceedances)
        .count("clusters", clusters)
        .count("blocks", k))
}

/// Maxima of every window of `r` consecutive values, in window order.
pub fn sliding_maxima(series: &[f64], r: usize) -> Vec<f64> {
    if r == 0 || r > series.len() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(series.len() - r + 1);
    let mut deque: VecDeque<usize> = VecDeque::with_capacity(r);
    for (i, &x) in series.iter().enumerate() {
        while deque.back().is_some_and(|&j| series[j] <= x) {
            deque.pop_back();
        }
        deque.push_back(i);
        if deque[0] + r <= i {
            deque.pop_front();
        }
        if i + 1 >= r {
            out.push(series[deque[0]]);
        }
    }
    out
}

/// Sliding blocks estimator
/// `-log( #{quiet windows} / (n - r + 1) ) / (N_n(u) / k)`.
pub fn sliding_blocks_estimator(series: &[f64], r: usize, u: f64) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let n = series.len();
    let k = check_block_length(n, r)?;
    let exceedances = series.iter().filter(|&&x| x > u).count();
    if exceedances == 0 {
        return Err(EstimatorError::NoExceedances { threshold: u });
    }
    let maxima = sliding_maxima(series, r);
    let windows = maxima.len();
    let quiet = maxima.iter().filter(|&&m| m <= u).count();
    if quiet == 0 {
        return Err(EstimatorError::AllWindowsExceed { window: r });
    }
    let num = -(quiet as f64 / windows as f64).ln();
    let value = num / (exceedances as f64 / k as f64);
    Ok(EstimateRecord::new(EstimatorId::SlidingBlocks, value)
        .hyper("r", r as f64)
        .hyper("u", u)
        .count("exceedances", exceedances)
        .count("blocks", k)
        .count("windows", windows)
        .count("quiet_windows", quiet))
}

/// Runs estimator: the fraction of exceedances at positions `i <= n - l`
/// followed by `l` non-exceedances.
pub fn runs_estimator(series: &[f64], u: f64, l: usize) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let n = series.len();
    if l == 0 || l >= n {
        return Err(invalid(format!("run length must lie in 1..{n}, got {l}")));
    }
    let above: Vec<bool> = series.iter().map(|&x| x > u).collect();
    let exceedances = above.iter().filter(|&&a| a).count();
    if exceedances == 0 {
        return Err(EstimatorError::NoExceedances { threshold: u });
    }
    // next_above[i]: smallest j >= i with an exceedance, or n.
    let mut next_above = vec![n; n + 1];
    for i in (0..n).rev() {
        next_above[i] = if above[i] { i } else { next_above[i + 1] };
    }
    let run_ends = (0..n - l).filter(|&i| above[i] && next_above[i + 1] > i + l).count();
    let mut record = EstimateRecord::new(EstimatorId::Runs, run_ends as f64 / exceedances as f64)
        .hyper("u", u)
        .hyper("l", l as f64)
        .count("exceedances", exceedances)
        .count("clusters", run_ends);
    if run_ends == 0 {
        record.flags.push(EstimateFlag::DegenerateZero);
    }
    Ok(record)
}

/// Intervals estimator
/// `1 ∧ 2 (sum (T_i - 1))^2 / ((N - 1) sum (T_i - 1)(T_i - 2))` over the
/// inter-exceedance times `T_2, ..., T_N`.
///
/// A zero denominator with a positive numerator returns the cap 1 flagged
/// [`EstimateFlag::DenominatorZero`].
pub fn intervals_estimator(series: &[f64], u: f64) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let times = exceedance_times(series, u);
    let n_exc = times.len();
    if n_exc < 2 {
        return Err(EstimatorError::TooFewExceedances { found: n_exc, needed: 2 });
    }
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    let mut min_gap = usize::MAX;
    for w in times.windows(2) {
        let t = (w[1] - w[0]) as f64;
        min_gap = min_gap.min(w[1] - w[0]);
        sum1 += t - 1.0;
        sum2 += (t - 1.0) * (t - 2.0);
    }
    let numerator = 2.0 * sum1 * sum1;
    let denominator = (n_exc - 1) as f64 * sum2;
    let mut flags = Vec::new();
    let value = if denominator == 0.0 {
        if numerator == 0.0 {
            return Err(EstimatorError::DegenerateIntervals);
        }
        flags.push(EstimateFlag::DenominatorZero);
        flags.push(EstimateFlag::Capped);
        1.0
    } else {
        let raw = numerator / denominator;
        if raw > 1.0 {
            flags.push(EstimateFlag::Capped);
            1.0
        } else {
            raw
        }
    };
    if min_gap > 2 {
        flags.push(EstimateFlag::LongGaps);
    }
    let mut record = EstimateRecord::new(EstimatorId::Intervals, value)
        .hyper("u", u)
        .count("exceedances", n_exc);
    record.flags = flags;
    Ok(record)
}

/// Empirical distribution function with the shifted denominator,
/// `F_n(x) = #{i : X_i <= x} / (n + 1)`.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(series: &[f64]) -> Result<Self, EstimatorError> {
        check_series(series)?;
        let mut sorted = series.to_vec();
        sorted.sort_unstable_by(|a, b| a.total_cmp(b));
        Ok(Self { sorted })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / (self.sorted.len() + 1) as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

/// Shorthand for [`EmpiricalCdf::new`].
pub fn empirical_cdf(series: &[f64]) -> Result<EmpiricalCdf, EstimatorError> {
    EmpiricalCdf::new(series)
}

fn northrop_value(cdf: &EmpiricalCdf, maxima: &[f64], r: usize) -> f64 {
    let r = r as f64;
    let total: f64 = maxima.iter().map(|&m| -r * cdf.eval(m).ln()).sum();
    maxima.len() as f64 / total
}

/// Northrop's sliding blocks estimator: the reciprocal mean of
/// `-r log F_n(M)` over all `n - r + 1` windows of length `r`.
pub fn northrop_sliding(series: &[f64], r: usize) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let k = check_block_length(series.len(), r)?;
    let cdf = EmpiricalCdf::new(series)?;
    let maxima = sliding_maxima(series, r);
    Ok(EstimateRecord::new(EstimatorId::NorthropSliding, northrop_value(&cdf, &maxima, r))
        .hyper("r", r as f64)
        .count("windows", maxima.len())
        .count("blocks", k))
}

/// Northrop's disjoint blocks estimator over the `floor(n / r)` complete blocks.
pub fn northrop_disjoint(series: &[f64], r: usize) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    let k = check_block_length(series.len(), r)?;
    let cdf = EmpiricalCdf::new(series)?;
    let maxima: Vec<f64> = series[..k * r]
        .chunks_exact(r)
        .map(|b| b.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    Ok(EstimateRecord::new(EstimatorId::NorthropDisjoint, northrop_value(&cdf, &maxima, r))
        .hyper("r", r as f64)
        .count("blocks", k))
}

/// Classic Hill estimator of the tail index from the `k` largest absolute
/// values: `[ (1/k) sum_{i<=k} log(|X|_(i) / |X|_(k+1)) ]^-1`.
pub fn hill_estimator(series: &[f64], k: usize) -> Result<f64, EstimatorError> {
    check_series(series)?;
    let n = series.len();
    if k < 2 || k >= n {
        return Err(invalid(format!("Hill k must satisfy 2 <= k < n = {n}, got {k}")));
    }
    let mut abs: Vec<f64> = series.iter().map(|x| x.abs()).collect();
    // Partition so that abs[..=k] holds the k + 1 largest values, abs[k] the
    // smallest of them.
    abs.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let pivot = abs[k];
    if pivot <= 0.0 {
        return Err(EstimatorError::NonPositiveOrderStatistic { index: k + 1, value: pivot });
    }
    let mean_log = abs[..k].iter().map(|&x| (x / pivot).ln()).sum::<f64>() / k as f64;
    if mean_log <= 0.0 {
        return Err(EstimatorError::NonIdentifiable);
    }
    Ok(1.0 / mean_log)
}

/// Spectral cluster process estimator.
///
/// For each complete block of length `r` the block sum `S_i = sum X_t^alpha`
/// and maximum `M_i` are formed; with `v` the `s`-th largest block sum, the
/// estimate is the mean of `M_i^alpha / S_i` over the blocks with `S_i > v`.
/// The series must be non-negative.
pub fn scp_estimator(series: &[f64], r: usize, s: usize, alpha: f64) -> Result<EstimateRecord, EstimatorError> {
    check_series(series)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    if s < 2 {
        return Err(invalid(format!("s must be at least 2, got {s}")));
    }
    let k = check_block_length(series.len(), r)?;
    if k < s {
        return Err(invalid(format!("only {k} blocks available for s = {s}")));
    }
    if let Some(i) = series.iter().position(|&x| x < 0.0) {
        return Err(invalid(format!("negative value at position {}; pass |X|", i + 1)));
    }
    let blocks: Vec<(f64, f64)> = series[..k * r]
        .chunks_exact(r)
        .map(|b| {
            let sum: f64 = b.iter().map(|x| x.powf(alpha)).sum();
            let max = b.iter().copied().fold(0.0, f64::max);
            (sum, max)
        })
        .collect();
    let mut sums: Vec<f64> = blocks.iter().map(|b| b.0).collect();
    let (_, v, _) = sums.select_nth_unstable_by(s - 1, |a, b| b.total_cmp(a));
    let v = *v;
    let mut qualifying = 0usize;
    let mut ratio_sum = 0.0;
    for &(sum, max) in &blocks {
        if sum > v {
            qualifying += 1;
            ratio_sum += max.powf(alpha) / sum;
        }
    }
    if qualifying == 0 {
        return Err(EstimatorError::NoQualifyingBlocks { s });
    }
    Ok(EstimateRecord::new(EstimatorId::SpectralCluster, ratio_sum / qualifying as f64)
        .hyper("r", r as f64)
        .hyper("s", s as f64)
        .hyper("alpha", alpha)
        .hyper("v", v)
        .count("blocks", k)
        .count("qualifying_blocks", qualifying))
}
