//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for estimator or numeric failures, 2 for usage
//! and configuration errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostics;
use crate::estimators::{EstimateRecord, EstimatorId, ThresholdSpec};
use crate::harness::{self, ExperimentConfig, Overrides, PreparedSample};
use crate::models::{self, ModelSpec, NoiseSpec};
use crate::theory::{self, LadderConfig};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "EXINDEX_SEED";
/// Fewest usable observations accepted by `ingest`.
pub const MIN_INGEST_OBSERVATIONS: usize = 100;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn numeric(msg: impl Into<String>) -> CliError {
    CliError::Numeric(msg.into())
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        usage(format!("io error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "exindex", version, about = "Simulate heavy-tailed series and estimate their extremal index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a series and write it one value per line.
    Simulate(SimulateArgs),
    /// Run one estimator on a series file or a freshly simulated series.
    Estimate(EstimateArgs),
    /// Ground-truth extremal indices and special functions.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Run a Monte Carlo study from a configuration file.
    Mc(McArgs),
    /// Apply an estimator sweep to a delimited data file.
    Ingest(IngestArgs),
    /// Cluster-size histogram, block theta_n and spectral ratio summaries.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    Ar1,
    Sre,
    Maxma,
    Iid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NoiseKind {
    Student,
    Pareto,
    Normal,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "ar1")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, value_enum, default_value = "student")]
    pub noise: NoiseKind,
    /// Student-t degrees of freedom.
    #[arg(long, default_value_t = 1.0)]
    pub df: f64,
    /// Pareto noise tail index.
    #[arg(long, default_value_t = 1.0)]
    pub pareto_alpha: f64,
    /// Probability of a positive Pareto sign.
    #[arg(long, default_value_t = 1.0)]
    pub p_plus: f64,
    /// Max-moving-average window.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub log_a_mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub log_a_sd: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
}

impl ModelArgs {
    pub fn spec(&self) -> ModelSpec {
        let noise = match self.noise {
            NoiseKind::Student => NoiseSpec::StudentT { df: self.df },
            NoiseKind::Pareto => NoiseSpec::Pareto { alpha: self.pareto_alpha, p_plus: self.p_plus },
            NoiseKind::Normal => NoiseSpec::StandardNormal,
        };
        match self.model {
            ModelKind::Ar1 => ModelSpec::Ar1 { phi: self.phi, noise },
            ModelKind::Sre => ModelSpec::Sre { log_a_mean: self.log_a_mean, log_a_sd: self.log_a_sd, b: self.b },
            ModelKind::Maxma => ModelSpec::MaxMovingAverage { window: self.window, noise },
            ModelKind::Iid => ModelSpec::Iid { noise },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulationArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    /// Falls back to the EXINDEX_SEED environment variable.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Defaults to the model's burn-in rule.
    #[arg(long)]
    pub burn_in: Option<usize>,
}

impl SimulationArgs {
    fn run(&self) -> Result<models::TimeSeries, CliError> {
        let spec = self.model.spec();
        let seed = resolve_seed(self.seed)?;
        let burn_in = self.burn_in.unwrap_or_else(|| spec.default_burn_in());
        models::simulate(&spec, self.n, seed, burn_in).map_err(|e| usage(e.to_string()))
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV}='{v}' is not an unsigned 64-bit integer"))),
        Err(_) => Err(usage(format!("no --seed given and {SEED_ENV} is not set"))),
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimulationArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Transform {
    None,
    Absolute,
    LogReturns,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Series file (one value per line, `#` comments). Without it a series is
    /// simulated from the model flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    pub transform: Transform,
    #[command(flatten)]
    pub sim: SimulationArgs,
    #[arg(long)]
    pub estimator: EstimatorId,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HyperArgs {
    /// Block length.
    #[arg(long)]
    pub r: Option<usize>,
    /// Run length.
    #[arg(long)]
    pub l: Option<usize>,
    /// Intervals threshold divisor: u is the floor(n/x)-th upper order statistic.
    #[arg(long)]
    pub x: Option<usize>,
    /// Explicit threshold value.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Threshold as the k-th upper order statistic.
    #[arg(long)]
    pub threshold_k: Option<usize>,
    /// Threshold as an empirical quantile level.
    #[arg(long)]
    pub quantile: Option<f64>,
    /// Number of largest block sums excluded by the scp threshold.
    #[arg(long)]
    pub s: Option<usize>,
    /// scp tail index: `auto` for the Hill estimate or a positive number.
    #[arg(long, default_value = "auto")]
    pub alpha: String,
}

impl HyperArgs {
    fn threshold(&self) -> Option<ThresholdSpec> {
        self.u
            .map(ThresholdSpec::Value)
            .or(self.threshold_k.map(ThresholdSpec::UpperOrderStatistic))
            .or(self.quantile.map(ThresholdSpec::Quantile))
    }

    fn overrides(&self) -> Result<Overrides, CliError> {
        let alpha = if self.alpha.eq_ignore_ascii_case("auto") {
            None
        } else {
            Some(
                self.alpha
                    .parse::<f64>()
                    .map_err(|_| usage(format!("--alpha must be 'auto' or a number, got '{}'", self.alpha)))?,
            )
        };
        Ok(Overrides { threshold: self.threshold(), alpha, s: self.s })
    }

    fn param(&self, id: EstimatorId) -> Result<usize, CliError> {
        let (value, flag) = match id {
            EstimatorId::Runs => (self.l, "--l"),
            EstimatorId::Intervals => (self.x, "--x"),
            _ => (self.r, "--r"),
        };
        match value {
            Some(v) => Ok(v),
            // The intervals divisor only feeds the default threshold rule.
            None if id == EstimatorId::Intervals && self.threshold().is_some() => Ok(0),
            None => Err(usage(format!("estimator {id} needs {flag}"))),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum TheoryCommand {
    /// 1 - |phi|^alpha for AR(1) with regularly varying noise.
    Ar1 {
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// 1/m for the max-moving-average of window m.
    Maxma {
        #[arg(long)]
        window: usize,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// exp(zeta(1/2)/sqrt(2 pi))/2 for the lognormal recurrence.
    SreFirstOrder {
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Ladder-functional Monte Carlo for the lognormal recurrence.
    SreMc {
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        log_a_mean: f64,
        #[arg(long, default_value_t = 1.0)]
        log_a_sd: f64,
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        #[arg(long, default_value_t = 1_000_000)]
        reps: usize,
        #[arg(long, default_value_t = theory::DEFAULT_LADDER_BARRIER, allow_negative_numbers = true)]
        barrier: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extremal index of the Brown-Resnick process sampled on a grid of mesh delta.
    Br {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Riemann zeta at real s.
    Zeta {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long)]
        precision: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory receiving report.json and report.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses all cores. Never changes the output.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Override the configured number of replications.
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column name, or 0-based index.
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(long, value_enum, default_value = "none")]
    pub transform: Transform,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
    /// Comma-separated estimator ids.
    #[arg(long, value_delimiter = ',', default_value = "bl,dbl,slbl,runs,int,Nsl,Ndbl,scp")]
    pub estimators: Vec<EstimatorId>,
    /// Block lengths for bl, dbl, slbl, Nsl, Ndbl and scp.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256,512")]
    pub r: Vec<usize>,
    /// Run lengths for runs.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256,512")]
    pub l: Vec<usize>,
    /// Threshold divisors for int.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256,512")]
    pub x: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    pub transform: Transform,
    #[command(flatten)]
    pub sim: SimulationArgs,
    /// Block length for the histogram and theta_n.
    #[arg(long, default_value_t = 50)]
    pub r: usize,
    /// Block threshold as a quantile level of the series.
    #[arg(long, default_value_t = 0.995)]
    pub quantile: f64,
    /// Lag of the spectral ratios.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub lag: i64,
    /// Conditioning level for the spectral ratios, as a quantile of |X|.
    #[arg(long, default_value_t = diagnostics::SPECTRAL_QUANTILE)]
    pub spectral_quantile: f64,
    #[arg(long, default_value_t = diagnostics::MIN_CONDITIONING_POINTS)]
    pub min_points: usize,
}

/// Series text format: `#` metadata lines followed by one value per line.
pub fn format_series(series: &models::TimeSeries) -> String {
    let mut out = String::with_capacity(series.len() * 20 + 200);
    out.push_str("# exindex series\n");
    out.push_str(&format!("# model: {}\n", serde_json::to_string(&series.model).expect("model serialises")));
    out.push_str(&format!("# seed: {}\n", series.seed));
    out.push_str(&format!("# burn_in: {}\n", series.burn_in));
    out.push_str(&format!("# n: {}\n", series.len()));
    for v in series.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// Parse the series text format; blank and `#` lines are skipped.
pub fn parse_series(text: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| format!("line {}: cannot parse '{line}' as a number", i + 1))?;
        if !v.is_finite() {
            return Err(format!("line {}: value is not finite", i + 1));
        }
        values.push(v);
    }
    Ok(values)
}

fn read_series_file(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// `log(p_t / p_{t-1})`; prices must be positive.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>, String> {
    if let Some(i) = prices.iter().position(|&p| !(p > 0.0)) {
        return Err(format!("observation {} is not a positive price", i + 1));
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

fn apply_transform(values: Vec<f64>, transform: Transform) -> Result<Vec<f64>, CliError> {
    match transform {
        Transform::None => Ok(values),
        Transform::Absolute => Ok(values.into_iter().map(f64::abs).collect()),
        Transform::LogReturns => log_returns(&values).map_err(usage),
    }
}

/// The series to analyse: a file (with its transform) or a simulation (with
/// the model's absolute-value convention).
fn load_or_simulate(input: &Option<PathBuf>, transform: Transform, sim: &SimulationArgs) -> Result<Vec<f64>, CliError> {
    match input {
        Some(path) => apply_transform(read_series_file(path)?, transform),
        None => Ok(sim.run()?.estimation_values()),
    }
}

fn format_hyper(rec: &EstimateRecord) -> String {
    rec.hyper.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn format_counts(rec: &EstimateRecord) -> String {
    rec.counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn format_flags(rec: &EstimateRecord) -> String {
    rec.flags.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(";")
}

fn fmt_value(v: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{v:.p$}"),
        None => v.to_string(),
    }
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let series = args.sim.run()?;
    let text = format_series(&series);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let values = load_or_simulate(&args.input, args.transform, &args.sim)?;
    let id = args.estimator;
    let param = args.hyper.param(id)?;
    let overrides = args.hyper.overrides()?;
    let rules = harness::default_hyperparameters(id, values.len());
    let sample = PreparedSample::new(&values);
    let rec = harness::evaluate(&sample, &rules, param, &overrides)
        .map_err(|e| numeric(e.to_string()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["estimator", "hyperparameters", "value", "counts", "flags"])
        .map_err(|e| usage(e.to_string()))?;
    w.write_record([id.as_str(), &format_hyper(&rec), &rec.value.to_string(), &format_counts(&rec), &format_flags(&rec)])
        .map_err(|e| usage(e.to_string()))?;
    w.flush()?;
    Ok(())
}

fn cmd_theory(cmd: &TheoryCommand, out: &mut dyn Write) -> Result<(), CliError> {
    let err = |e: theory::TheoryError| match e {
        theory::TheoryError::InvalidParameter(_) => usage(e.to_string()),
        other => numeric(other.to_string()),
    };
    match cmd {
        TheoryCommand::Ar1 { phi, alpha, precision } => {
            writeln!(out, "{}", fmt_value(theory::ar1_theta(*phi, *alpha).map_err(err)?, *precision))?;
        }
        TheoryCommand::Maxma { window, precision } => {
            writeln!(out, "{}", fmt_value(theory::max_ma_theta(*window).map_err(err)?, *precision))?;
        }
        TheoryCommand::SreFirstOrder { precision } => {
            writeln!(out, "{}", fmt_value(theory::sre_theta_first_order(), *precision))?;
        }
        TheoryCommand::SreMc { log_a_mean, log_a_sd, horizon, reps, barrier, seed } => {
            let config = LadderConfig { horizon: *horizon, reps: *reps, barrier: *barrier, seed: resolve_seed(*seed).unwrap_or(0) };
            let est = theory::sre_theta_mc(*log_a_mean, *log_a_sd, config).map_err(err)?;
            writeln!(out, "value,std_error,reps")?;
            writeln!(out, "{},{},{}", est.value, est.std_error, est.reps)?;
        }
        TheoryCommand::Br { delta, tol } => {
            let r = theory::brown_resnick_theta(*delta, *tol).map_err(err)?;
            writeln!(out, "delta,theta,theta_over_delta,exponent,terms_used")?;
            writeln!(out, "{},{},{},{},{}", r.delta, r.value, r.pickands_ratio(), r.exponent, r.terms_used)?;
        }
        TheoryCommand::Zeta { s, precision } => {
            writeln!(out, "{}", fmt_value(theory::riemann_zeta(*s).map_err(err)?, *precision))?;
        }
    }
    Ok(())
}

fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| usage(format!("cannot read config {}: {e}", args.config.display())))?;
    let mut config = ExperimentConfig::from_toml_str(&text)
        .map_err(|e| usage(format!("{}: {e}", args.config.display())))?;
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if config.master_seed.is_none() {
        config.master_seed = Some(resolve_seed(None)?);
    }
    let report = harness::run_experiment(&config, args.workers).map_err(|e| usage(e.to_string()))?;
    fs::create_dir_all(&args.out_dir)?;
    fs::write(args.out_dir.join("report.json"), report.to_json().map_err(|e| usage(e.to_string()))?)?;
    let file = fs::File::create(args.out_dir.join("report.csv"))?;
    report.write_csv(io::BufWriter::new(file)).map_err(|e| usage(e.to_string()))?;
    Ok(())
}

/// Read one numeric column from a delimited file.
pub fn read_column(path: &Path, column: &str, delimiter: char, has_header: bool) -> Result<Vec<f64>, CliError> {
    if !delimiter.is_ascii() {
        return Err(usage("delimiter must be a single ASCII character"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter as u8)
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let index = match column.parse::<usize>() {
        Ok(i) => i,
        Err(_) => {
            if !has_header {
                return Err(usage(format!("column '{column}' given by name but the file has no header")));
            }
            let headers = reader.headers().map_err(|e| usage(e.to_string()))?;
            headers
                .iter()
                .position(|h| h.trim() == column)
                .ok_or_else(|| usage(format!("column '{column}' not found in header")))?
        }
    };
    let mut values = Vec::new();
    let mut bad = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| usage(e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        match record.get(index).map(|f| f.trim().parse::<f64>()) {
            Some(Ok(v)) if v.is_finite() => values.push(v),
            _ => bad.push(line),
        }
    }
    if !bad.is_empty() {
        let shown: Vec<String> = bad.iter().take(10).map(|l| l.to_string()).collect();
        return Err(usage(format!(
            "{}: {} unparsable row(s) at line(s) {}",
            path.display(),
            bad.len(),
            shown.join(", ")
        )));
    }
    Ok(values)
}

fn cmd_ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let raw = read_column(&args.input, &args.column, args.delimiter, !args.no_header)?;
    let values = apply_transform(raw, args.transform)?;
    if values.len() < MIN_INGEST_OBSERVATIONS {
        return Err(numeric(format!(
            "only {} usable observations; at least {MIN_INGEST_OBSERVATIONS} are required",
            values.len()
        )));
    }
    let sample = PreparedSample::new(&values);
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| usage(e.to_string());
    w.write_record(["estimator", "param_name", "param_value", "value", "error"]).map_err(csv_err)?;
    for &id in &args.estimators {
        let params = match id {
            EstimatorId::Runs => &args.l,
            EstimatorId::Intervals => &args.x,
            _ => &args.r,
        };
        let rules = harness::default_hyperparameters(id, values.len());
        for &p in params {
            let (value, error) = match harness::evaluate(&sample, &rules, p, &Overrides::default()) {
                Ok(rec) => (rec.value.to_string(), String::new()),
                Err(e) => (String::new(), e.name().to_string()),
            };
            w.write_record([id.as_str(), id.param_name(), &p.to_string(), &value, &error]).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_diagnose(args: &DiagnoseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let values = load_or_simulate(&args.input, args.transform, &args.sim)?;
    let est = |e: crate::estimators::EstimatorError| numeric(e.to_string());
    let u = crate::estimators::resolve_threshold(&values, ThresholdSpec::Quantile(args.quantile)).map_err(est)?;
    let hist = diagnostics::cluster_size_histogram(&values, args.r, u).map_err(est)?;
    let theta_n = diagnostics::theta_n_empirical(&values, args.r, u).map_err(est)?;
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let su = crate::estimators::resolve_threshold(&abs, ThresholdSpec::Quantile(args.spectral_quantile)).map_err(est)?;
    let ratios = diagnostics::empirical_spectral_ratio(&values, su, args.lag, args.min_points).map_err(est)?;

    writeln!(out, "section,key,value")?;
    writeln!(out, "theta_n,threshold,{u}")?;
    writeln!(out, "theta_n,r,{}", args.r)?;
    writeln!(out, "theta_n,value,{theta_n}")?;
    for (size, freq) in &hist.counts {
        writeln!(out, "histogram,{size},{freq}")?;
    }
    writeln!(out, "spectral,threshold,{su}")?;
    writeln!(out, "spectral,lag,{}", ratios.lag)?;
    writeln!(out, "spectral,count,{}", ratios.ratios.len())?;
    writeln!(out, "spectral,q25,{}", ratios.q25)?;
    writeln!(out, "spectral,median,{}", ratios.median)?;
    writeln!(out, "spectral,q75,{}", ratios.q75)?;
    Ok(())
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Theory(c) => cmd_theory(c, out),
        Command::Mc(a) => cmd_mc(a),
        Command::Ingest(a) => cmd_ingest(a, out),
        Command::Diagnose(a) => cmd_diagnose(a, out),
    }
}

/// Parse `args`, run, and report errors on `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}
