//! Monte Carlo comparison of the estimators.
//!
//! An [`ExperimentConfig`] names a model, a sample size, a number of
//! replications and, per estimator, the hyperparameter values to sweep.
//! [`run_experiment`] simulates each replication from its own derived seed,
//! evaluates every grid point and stores the outcome by replication index, so
//! the report does not depend on how many worker threads were used.
//!
//! Thresholds follow per-estimator rules (see [`default_hyperparameters`])
//! and are recomputed for each estimator and replication.

use std::io;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::estimators::{self, EstimateRecord, EstimatorError, EstimatorId, ThresholdSpec};
use crate::models::{self, ModelError, ModelSpec};
use crate::theory;

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;
/// Replications used when a configuration does not say.
pub const DEFAULT_REPS: usize = 200;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("EmptySample: no finite values to summarise")]
    EmptySample,
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Threshold rule as a function of the sample size and the swept parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    /// The `ceil(n^exponent)`-th upper order statistic.
    PowerOfN { exponent: f64 },
    /// The `param`-th upper order statistic.
    ParamOrder,
    /// The `floor(n / param)`-th upper order statistic.
    NOverParam,
    /// The estimator takes no threshold.
    None,
}

/// Executable hyperparameter rules for one estimator at sample size `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleSet {
    pub estimator: EstimatorId,
    pub n: usize,
    pub threshold: ThresholdRule,
}

impl RuleSet {
    pub fn threshold_spec(&self, param: usize) -> Option<ThresholdSpec> {
        let n = self.n;
        match self.threshold {
            ThresholdRule::PowerOfN { exponent } => {
                Some(ThresholdSpec::UpperOrderStatistic((n as f64).powf(exponent).ceil() as usize))
            }
            ThresholdRule::ParamOrder => Some(ThresholdSpec::UpperOrderStatistic(param)),
            ThresholdRule::NOverParam => Some(ThresholdSpec::UpperOrderStatistic(n.checked_div(param).unwrap_or(0))),
            ThresholdRule::None => None,
        }
    }

    /// `s = max(2, floor(n^0.6 / r))` for the spectral cluster estimator.
    pub fn scp_s(&self, r: usize) -> usize {
        if r == 0 {
            return 2;
        }
        (((self.n as f64).powf(0.6) / r as f64).floor() as usize).max(2)
    }

    /// Number of upper order statistics for the Hill estimate,
    /// `max(2, floor(n^0.8))`.
    pub fn hill_k(&self) -> usize {
        (((self.n as f64).powf(0.8)).floor() as usize).max(2)
    }
}

/// Default threshold and selection rules for `estimator` at sample size `n`.
///
/// - bl, dbl, runs: the `ceil(n^0.6)`-th upper order statistic;
/// - slbl: the `r`-th upper order statistic;
/// - int: the `floor(n / x)`-th upper order statistic;
/// - Nsl, Ndbl, scp: no threshold; scp uses `s = max(2, floor(n^0.6 / r))`
///   and a Hill tail index from `floor(n^0.8)` order statistics.
pub fn default_hyperparameters(estimator: EstimatorId, n: usize) -> RuleSet {
    let threshold = match estimator {
        EstimatorId::Blocks | EstimatorId::DisjointBlocks | EstimatorId::Runs => {
            ThresholdRule::PowerOfN { exponent: 0.6 }
        }
        EstimatorId::SlidingBlocks => ThresholdRule::ParamOrder,
        EstimatorId::Intervals => ThresholdRule::NOverParam,
        EstimatorId::NorthropSliding | EstimatorId::NorthropDisjoint | EstimatorId::SpectralCluster => {
            ThresholdRule::None
        }
    };
    RuleSet { estimator, n, threshold }
}

/// Optional per-estimator overrides of the default rules.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub threshold: Option<ThresholdSpec>,
    /// Fixed tail index for scp instead of the Hill estimate.
    pub alpha: Option<f64>,
    pub s: Option<usize>,
}

/// A sample prepared for repeated estimator evaluation: the sorted values
/// and the Hill tail index are computed at most once.
pub struct PreparedSample<'a> {
    values: &'a [f64],
    sorted_desc: Vec<f64>,
    hill: std::cell::OnceCell<Result<f64, EstimatorError>>,
    magnitudes: std::cell::OnceCell<Vec<f64>>,
}

impl<'a> PreparedSample<'a> {
    pub fn new(values: &'a [f64]) -> Self {
        let mut sorted_desc = values.to_vec();
        sorted_desc.sort_unstable_by(|a, b| b.total_cmp(a));
        Self { values, sorted_desc, hill: std::cell::OnceCell::new(), magnitudes: std::cell::OnceCell::new() }
    }

    pub fn values(&self) -> &[f64] {
        self.values
    }

    pub fn threshold(&self, spec: ThresholdSpec) -> Result<f64, EstimatorError> {
        match spec {
            ThresholdSpec::UpperOrderStatistic(k) if k >= 1 && k <= self.sorted_desc.len() => {
                Ok(self.sorted_desc[k - 1])
            }
            other => estimators::resolve_threshold(self.values, other),
        }
    }

    pub fn hill_alpha(&self, k: usize) -> Result<f64, EstimatorError> {
        self.hill.get_or_init(|| estimators::hill_estimator(self.values, k)).clone()
    }

    /// The values themselves when non-negative, otherwise `|X|`.
    pub fn magnitudes(&self) -> &[f64] {
        if self.sorted_desc.last().is_none_or(|&m| m >= 0.0) {
            return self.values;
        }
        self.magnitudes.get_or_init(|| self.values.iter().map(|v| v.abs()).collect())
    }
}

/// Evaluate one estimator at one hyperparameter value under `rules`.
///
/// `param` is the block length `r`, run length `l` or divisor `x` depending on
/// the estimator. scp runs on `|X|` for signed samples; its record carries
/// `alpha` (and `alpha_hat` when it came from the Hill estimate).
pub fn evaluate(
    sample: &PreparedSample<'_>,
    rules: &RuleSet,
    param: usize,
    overrides: &Overrides,
) -> Result<EstimateRecord, EstimatorError> {
    let x = sample.values();
    let threshold = || -> Result<f64, EstimatorError> {
        let spec = overrides
            .threshold
            .or_else(|| rules.threshold_spec(param))
            .ok_or_else(|| EstimatorError::InvalidParameter("no threshold rule".into()))?;
        sample.threshold(spec)
    };
    match rules.estimator {
        EstimatorId::Blocks => estimators::blocks_estimator(x, param, threshold()?),
        EstimatorId::DisjointBlocks => estimators::disjoint_blocks_estimator(x, param, threshold()?),
        EstimatorId::SlidingBlocks => estimators::sliding_blocks_estimator(x, param, threshold()?),
        EstimatorId::Runs => estimators::runs_estimator(x, threshold()?, param),
        EstimatorId::Intervals => {
            let mut rec = estimators::intervals_estimator(x, threshold()?)?;
            rec.hyper.insert("x".into(), param as f64);
            Ok(rec)
        }
        EstimatorId::NorthropSliding => estimators::northrop_sliding(x, param),
        EstimatorId::NorthropDisjoint => estimators::northrop_disjoint(x, param),
        EstimatorId::SpectralCluster => {
            let s = overrides.s.unwrap_or_else(|| rules.scp_s(param));
            let (alpha, from_hill) = match overrides.alpha {
                Some(a) => (a, false),
                None => (sample.hill_alpha(rules.hill_k())?, true),
            };
            let mut rec = estimators::scp_estimator(sample.magnitudes(), param, s, alpha)?;
            if from_hill {
                rec.hyper.insert("alpha_hat".into(), alpha);
                rec.hyper.insert("hill_k".into(), rules.hill_k() as f64);
            }
            Ok(rec)
        }
    }
}

/// One estimator and the hyperparameter values swept for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub estimator: EstimatorId,
    pub values: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
}

impl GridEntry {
    pub fn new(estimator: EstimatorId, values: Vec<usize>) -> Self {
        Self { estimator, values, threshold: None, alpha: None, s: None }
    }

    pub fn overrides(&self) -> Overrides {
        Overrides { threshold: self.threshold, alpha: self.alpha, s: self.s }
    }
}

/// Declarative description of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n: usize,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    /// Defaults to the model's own burn-in rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    pub grid: Vec<GridEntry>,
}

fn default_reps() -> usize {
    DEFAULT_REPS
}

/// Powers of two from 2 to 512, the default sweep axis.
pub fn default_axis() -> Vec<usize> {
    (1..=9).map(|p| 1usize << p).collect()
}

impl ExperimentConfig {
    /// All eight estimators over [`default_axis`] with default rules.
    pub fn with_default_grid(model: ModelSpec, n: usize, reps: usize, master_seed: u64) -> Self {
        let grid = EstimatorId::ALL
            .into_iter()
            .map(|estimator| GridEntry::new(estimator, default_axis()))
            .collect();
        Self { model, n, reps, master_seed: Some(master_seed), burn_in: None, grid }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.model.validate()?;
        if self.n == 0 {
            return Err(HarnessError::InvalidConfig("n must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(HarnessError::InvalidConfig("reps must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(HarnessError::InvalidConfig("grid must name at least one estimator".into()));
        }
        let mut seen = Vec::new();
        for entry in &self.grid {
            if entry.values.is_empty() {
                return Err(HarnessError::InvalidConfig(format!("grid entry {} has no values", entry.estimator)));
            }
            if seen.contains(&entry.estimator) {
                return Err(HarnessError::InvalidConfig(format!("estimator {} listed twice", entry.estimator)));
            }
            seen.push(entry.estimator);
        }
        Ok(())
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or_else(|| self.model.default_burn_in())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Boxplot statistics. Quantiles are lower order statistics
/// `x_(floor(q (m - 1)))`; whiskers are the most extreme values within
/// 1.5 IQR of the quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary, HarnessError> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let m = sorted.len();
    let q = |p: f64| sorted[(p * (m - 1) as f64).floor() as usize];
    let (q25, median, q75) = (q(0.25), q(0.5), q(0.75));
    let iqr = q75 - q25;
    let lo_fence = q25 - 1.5 * iqr;
    let hi_fence = q75 + 1.5 * iqr;
    let whisker_low = *sorted.iter().find(|&&v| v >= lo_fence).unwrap_or(&sorted[0]);
    let whisker_high = *sorted.iter().rev().find(|&&v| v <= hi_fence).unwrap_or(&sorted[m - 1]);
    Ok(Summary { count: m, median, q25, q75, whisker_low, whisker_high, min: sorted[0], max: sorted[m - 1] })
}

/// Replicate outcomes at one hyperparameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPointReport {
    pub param_name: String,
    pub param_value: usize,
    /// One entry per replication; `None` where the estimator failed.
    pub values: Vec<Option<f64>>,
    /// Error name per replication; `None` where a value was produced.
    pub errors: Vec<Option<String>>,
    pub error_count: usize,
    pub summary: Option<Summary>,
}

impl GridPointReport {
    pub fn finite_values(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn median(&self) -> Option<f64> {
        self.summary.map(|s| s.median)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub code_version: String,
}

/// Results of a study, nested as estimator, then hyperparameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub schema: u32,
    pub model: ModelSpec,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub burn_in: usize,
    pub true_theta: Option<f64>,
    pub provenance: Provenance,
    pub estimators: IndexMap<String, IndexMap<String, GridPointReport>>,
}

impl McReport {
    pub fn point(&self, estimator: EstimatorId, param: usize) -> Option<&GridPointReport> {
        self.estimators.get(estimator.as_str())?.get(&param.to_string())
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Long-format rows `estimator,param_name,param_value,replication,value,error`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["estimator", "param_name", "param_value", "replication", "value", "error"])?;
        for (estimator, points) in &self.estimators {
            for point in points.values() {
                for (rep, (value, error)) in point.values.iter().zip(&point.errors).enumerate() {
                    let value = value.map(|v| v.to_string()).unwrap_or_default();
                    let error = error.clone().unwrap_or_default();
                    w.write_record([
                        estimator.as_str(),
                        &point.param_name,
                        &point.param_value.to_string(),
                        &rep.to_string(),
                        &value,
                        &error,
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// One row of the long-format CSV.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct CsvRow {
    pub estimator: String,
    pub param_name: String,
    pub param_value: usize,
    pub replication: usize,
    pub value: Option<f64>,
    pub error: Option<String>,
}

/// Parse the long-format CSV written by [`McReport::write_csv`].
pub fn read_csv<R: io::Read>(reader: R) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        let mut row: CsvRow = row?;
        if row.error.as_deref() == Some("") {
            row.error = None;
        }
        rows.push(row);
    }
    Ok(rows)
}

type Outcome = Result<f64, String>;

fn run_replication(config: &ExperimentConfig, master_seed: u64, rep: usize, rules: &[RuleSet]) -> Vec<Outcome> {
    let seed = models::derive_replication_seed(master_seed, rep as u64);
    let points = config.grid.iter().map(|g| g.values.len()).sum();
    let series = match models::simulate(&config.model, config.n, seed, config.burn_in()) {
        Ok(s) => s,
        Err(e) => return vec![Err(e.name().to_string()); points],
    };
    let values = series.estimation_values();
    let sample = PreparedSample::new(&values);
    let mut out = Vec::with_capacity(points);
    for (entry, rule) in config.grid.iter().zip(rules) {
        for &param in &entry.values {
            let outcome = match evaluate(&sample, rule, param, &entry.overrides()) {
                Ok(rec) if rec.value.is_finite() => Ok(rec.value),
                Ok(_) => Err("NonFiniteValue".to_string()),
                Err(e) => Err(e.name().to_string()),
            };
            out.push(outcome);
        }
    }
    out
}

/// Run the study with `workers` threads (0 lets rayon decide).
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<McReport, HarnessError> {
    config.validate()?;
    let master_seed = config
        .master_seed
        .ok_or_else(|| HarnessError::InvalidConfig("master_seed is not set".into()))?;
    let rules: Vec<RuleSet> = config.grid.iter().map(|g| default_hyperparameters(g.estimator, config.n)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    let by_rep: Vec<Vec<Outcome>> = pool.install(|| {
        (0..config.reps)
            .into_par_iter()
            .map(|rep| run_replication(config, master_seed, rep, &rules))
            .collect()
    });

    let mut estimators: IndexMap<String, IndexMap<String, GridPointReport>> = IndexMap::new();
    let mut column = 0;
    for entry in &config.grid {
        let points = estimators.entry(entry.estimator.as_str().to_string()).or_default();
        for &param in &entry.values {
            let outcomes: Vec<&Outcome> = by_rep.iter().map(|r| &r[column]).collect();
            let values: Vec<Option<f64>> = outcomes.iter().map(|o| o.as_ref().ok().copied()).collect();
            let errors: Vec<Option<String>> = outcomes.iter().map(|o| o.as_ref().err().cloned()).collect();
            let finite: Vec<f64> = values.iter().flatten().copied().collect();
            points.insert(
                param.to_string(),
                GridPointReport {
                    param_name: entry.estimator.param_name().to_string(),
                    param_value: param,
                    error_count: errors.iter().filter(|e| e.is_some()).count(),
                    summary: summarize(&finite).ok(),
                    values,
                    errors,
                },
            );
            column += 1;
        }
    }

    let mut resolved = config.clone();
    resolved.master_seed = Some(master_seed);
    Ok(McReport {
        schema: REPORT_SCHEMA,
        model: config.model,
        n: config.n,
        reps: config.reps,
        master_seed,
        burn_in: config.burn_in(),
        true_theta: theory::true_theta(&config.model),
        provenance: Provenance { config_hash: resolved.hash(), code_version: env!("CARGO_PKG_VERSION").to_string() },
        estimators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::NoiseSpec;

    #[test]
    fn scp_uses_magnitudes_of_signed_samples() {
        let signed = [3.0, -4.0, 1.0, 0.0, -0.5, 0.25];
        let abs: Vec<f64> = signed.iter().map(|v: &f64| v.abs()).collect();
        let rules = default_hyperparameters(EstimatorId::SpectralCluster, signed.len());
        let ov = Overrides { alpha: Some(1.0), ..Overrides::default() };
        let a = evaluate(&PreparedSample::new(&signed), &rules, 2, &ov).unwrap();
        let b = evaluate(&PreparedSample::new(&abs), &rules, 2, &ov).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.value, 4.0 / 7.0);
    }

    #[test]
    fn default_rules_at_n_5000() {
        let bl = default_hyperparameters(EstimatorId::Blocks, 5000);
        assert_eq!(bl.threshold_spec(16), Some(ThresholdSpec::UpperOrderStatistic(166)));
        let scp = default_hyperparameters(EstimatorId::SpectralCluster, 5000);
        assert_eq!(scp.scp_s(64), 2);
        assert_eq!(scp.scp_s(16), 10);
        assert_eq!(scp.hill_k(), 910);
        assert_eq!(scp.threshold_spec(64), None);
        let int = default_hyperparameters(EstimatorId::Intervals, 5000);
        assert_eq!(int.threshold_spec(32), Some(ThresholdSpec::UpperOrderStatistic(156)));
        let slbl = default_hyperparameters(EstimatorId::SlidingBlocks, 5000);
        assert_eq!(slbl.threshold_spec(70), Some(ThresholdSpec::UpperOrderStatistic(70)));
        let runs = default_hyperparameters(EstimatorId::Runs, 5000);
        assert_eq!(runs.threshold_spec(3), Some(ThresholdSpec::UpperOrderStatistic(166)));
    }

    #[test]
    fn summary_basics() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.median, s.q25, s.q75), (3.0, 2.0, 4.0));
        assert_eq!((s.whisker_low, s.whisker_high), (1.0, 5.0));
        let s = summarize(&[7.0]).unwrap();
        assert_eq!(
            [s.median, s.q25, s.q75, s.whisker_low, s.whisker_high, s.min, s.max],
            [7.0; 7]
        );
        assert!(matches!(summarize(&[]), Err(HarnessError::EmptySample)));
        assert!(matches!(summarize(&[f64::NAN]), Err(HarnessError::EmptySample)));
    }

    #[test]
    fn summary_whiskers_exclude_outliers() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0, 100.0]).unwrap();
        // q25 = x_(1) = 2, q75 = x_(3) = 4, fence 7
        assert_eq!(s.whisker_high, 5.0);
        assert_eq!(s.max, 100.0);
    }

    #[test]
    fn config_parses_from_toml() {
        let text = r#"
            n = 500
            reps = 3
            master_seed = 17

            [model]
            kind = "ar1"
            phi = 0.2
            noise = { kind = "student_t", df = 1.0 }

            [[grid]]
            estimator = "bl"
            values = [4, 8]

            [[grid]]
            estimator = "scp"
            values = [16]
            alpha = 1.0

            [[grid]]
            estimator = "int"
            values = [10]
            threshold = { upper_order_statistic = 20 }
        "#;
        let config = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(config.grid.len(), 3);
        assert_eq!(config.grid[1].alpha, Some(1.0));
        assert_eq!(config.grid[2].threshold, Some(ThresholdSpec::UpperOrderStatistic(20)));
        let report = run_experiment(&config, 2).unwrap();
        assert_eq!(report.reps, 3);
        assert_eq!(report.true_theta, Some(0.8));
        let p = report.point(EstimatorId::Blocks, 8).unwrap();
        assert_eq!(p.values.len(), 3);
        assert_eq!(p.error_count + p.finite_values().len(), 3);
    }

    #[test]
    fn config_errors() {
        assert!(ExperimentConfig::from_toml_str("n = 5").is_err());
        let dup = r#"
            n = 100
            [model]
            kind = "iid"
            noise = { kind = "standard_normal" }
            [[grid]]
            estimator = "bl"
            values = [4]
            [[grid]]
            estimator = "bl"
            values = [8]
        "#;
        assert!(matches!(ExperimentConfig::from_toml_str(dup), Err(HarnessError::InvalidConfig(_))));
        let unknown = r#"
            n = 100
            colour = "red"
            [model]
            kind = "iid"
            noise = { kind = "standard_normal" }
            [[grid]]
            estimator = "bl"
            values = [4]
        "#;
        assert!(ExperimentConfig::from_toml_str(unknown).is_err());
    }

    #[test]
    fn errors_are_recorded_not_fatal() {
        let model = ModelSpec::Iid { noise: NoiseSpec::Pareto { alpha: 1.0, p_plus: 1.0 } };
        let mut config = ExperimentConfig::with_default_grid(model, 200, 4, 5);
        // r = 512 exceeds n = 200 for every block estimator.
        let report = run_experiment(&config, 1).unwrap();
        let p = report.point(EstimatorId::Blocks, 512).unwrap();
        assert_eq!(p.error_count, 4);
        assert!(p.summary.is_none());
        assert!(p.errors.iter().all(|e| e.as_deref() == Some("InvalidParameter")));
        config.reps = 2;
        assert!(run_experiment(&config, 1).is_ok());
    }

    #[test]
    fn missing_seed_is_a_config_error() {
        let model = ModelSpec::Iid { noise: NoiseSpec::StandardNormal };
        let mut config = ExperimentConfig::with_default_grid(model, 100, 1, 0);
        config.master_seed = None;
        assert!(matches!(run_experiment(&config, 1), Err(HarnessError::InvalidConfig(_))));
    }
}
