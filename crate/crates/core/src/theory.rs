//! Ground-truth extremal indices.
//!
//! Three kinds of routes are provided and cross-checked against each other in
//! the tests:
//!
//! - closed forms (`1 - |phi|^alpha` for AR(1), `1/m` for a max-moving-average
//!   of window `m`);
//! - Monte Carlo functionals of the spectral tail process `(Theta_t)`: the
//!   probability that the record of `|Theta_t|` is at lag zero, the expected
//!   spectral cluster ratio `max |Theta|^alpha / sum |Theta|^alpha`, the
//!   forward representation `E[(1 - sup_{t>=1} |Theta_t|^alpha)_+]`, and the
//!   random-walk ladder functional for the stochastic recurrence equation;
//! - zeta-series expansions for the lognormal recurrence and the discretised
//!   Brown-Resnick process.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::models::{derive_replication_seed, rng_from_seed, ModelSpec, SimRng};
use crate::special;

/// Default half-width of a stored spectral tail window.
pub const DEFAULT_HALF_WIDTH: usize = 200;
/// Truncation tolerance on `|Theta_{+-h}|^alpha` at the window edges.
pub const WINDOW_TOLERANCE: f64 = 1e-16;
/// Default log-scale barrier below which ladder paths are stopped.
pub const DEFAULT_LADDER_BARRIER: f64 = -35.0;
/// Maximum number of terms in the Brown-Resnick exponent series.
pub const MAX_SERIES_TERMS: usize = 200;

const MC_BATCH: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("WindowTooNarrow: |Theta|^alpha at the window edge is {edge:e} (half-width {half_width})")]
    WindowTooNarrow { half_width: usize, edge: f64 },
    #[error("PoleAtOne: zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("SeriesDiverged: {terms} terms did not reach tolerance {tol:e}")]
    SeriesDiverged { terms: usize, tol: f64 },
}

impl TheoryError {
    pub fn name(&self) -> &'static str {
        match self {
            TheoryError::InvalidParameter(_) => "InvalidParameter",
            TheoryError::WindowTooNarrow { .. } => "WindowTooNarrow",
            TheoryError::PoleAtOne => "PoleAtOne",
            TheoryError::SeriesDiverged { .. } => "SeriesDiverged",
        }
    }
}

fn invalid(msg: impl Into<String>) -> TheoryError {
    TheoryError::InvalidParameter(msg.into())
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub reps: usize,
}

impl MonteCarloEstimate {
    /// Sample variance of the per-path values.
    pub fn variance(&self) -> f64 {
        self.std_error * self.std_error * self.reps as f64
    }
}

/// `1 - |phi|^alpha`, the extremal index of `|X_t|` for an AR(1) process with
/// regularly varying noise of index `alpha`.
pub fn ar1_theta(phi: f64, alpha: f64) -> Result<f64, TheoryError> {
    if !(phi.abs() < 1.0) {
        return Err(invalid(format!("|phi| must be < 1, got {phi}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    Ok(1.0 - phi.abs().powf(alpha))
}

/// `1/m` for the max-moving-average of window `m`.
pub fn max_ma_theta(window: usize) -> Result<f64, TheoryError> {
    if window == 0 {
        return Err(invalid("window must be at least 1"));
    }
    Ok(1.0 / window as f64)
}

/// Finite window `(Theta_t)_{|t| <= h}` of a spectral tail process.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTailPath {
    half_width: usize,
    values: Vec<f64>,
    record_time: i64,
}

impl SpectralTailPath {
    /// `values[i]` is `Theta_{i - h}`; requires `2h + 1` entries and `|Theta_0| = 1`.
    pub fn new(half_width: usize, values: Vec<f64>) -> Result<Self, TheoryError> {
        if values.len() != 2 * half_width + 1 {
            return Err(invalid(format!(
                "expected {} values for half-width {half_width}, got {}",
                2 * half_width + 1,
                values.len()
            )));
        }
        if values[half_width].abs() != 1.0 {
            return Err(invalid(format!("|Theta_0| must be 1, got {}", values[half_width].abs())));
        }
        let record_time = record_time(half_width, &values);
        Ok(Self { half_width, values, record_time })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `Theta_t`, zero outside the stored window.
    pub fn at(&self, t: i64) -> f64 {
        let h = self.half_width as i64;
        if t < -h || t > h {
            0.0
        } else {
            self.values[(t + h) as usize]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lag of the largest `|Theta_t|`, smallest `|t|` on ties and `t >= 0`
    /// before `t < 0`.
    pub fn record_time(&self) -> i64 {
        self.record_time
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_t |Theta_t|^alpha / sum_t |Theta_t|^alpha` over the window.
    pub fn cluster_ratio(&self, alpha: f64) -> f64 {
        let max = self.max_abs();
        let total: f64 = self.values.iter().map(|v| (v.abs() / max).powf(alpha)).sum();
        1.0 / total
    }

    /// `sup_{1 <= t <= h} |Theta_t|^alpha`.
    pub fn forward_sup(&self, alpha: f64) -> f64 {
        self.values[self.half_width + 1..]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs().powf(alpha)))
    }

    fn edge_mass(&self, alpha: f64) -> f64 {
        let first = self.values[0].abs().powf(alpha);
        let last = self.values[self.values.len() - 1].abs().powf(alpha);
        first.max(last)
    }
}

fn record_time(half_width: usize, values: &[f64]) -> i64 {
    let h = half_width as i64;
    let mut best_t = 0i64;
    let mut best = values[half_width].abs();
    for d in 1..=h {
        for t in [d, -d] {
            let v = values[(t + h) as usize].abs();
            if v > best {
                best = v;
                best_t = t;
            }
        }
    }
    best_t
}

/// Source of spectral tail paths for the Monte Carlo oracles.
pub trait PathSampler: Sync {
    fn sample(&self, rng: &mut SimRng) -> SpectralTailPath;
}

impl<F> PathSampler for F
where
    F: Fn(&mut SimRng) -> SpectralTailPath + Sync,
{
    fn sample(&self, rng: &mut SimRng) -> SpectralTailPath {
        self(rng)
    }
}

/// Spectral tail process of a causal AR(1) with regularly varying noise.
///
/// `Theta_t = Theta_Z sign(phi^(J+t)) |phi|^t 1(J + t >= 0)` where `Theta_Z`
/// is `+1` with probability `p_plus` and `P(J = j) = (1 - |phi|^alpha) |phi|^(j alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1SpectralSampler {
    pub phi: f64,
    pub alpha: f64,
    pub p_plus: f64,
    pub half_width: usize,
}

impl Ar1SpectralSampler {
    pub fn new(phi: f64, alpha: f64, p_plus: f64, half_width: usize) -> Result<Self, TheoryError> {
        ar1_theta(phi, alpha)?;
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(invalid(format!("p_plus must lie in [0, 1], got {p_plus}")));
        }
        Ok(Self { phi, alpha, p_plus, half_width })
    }

    /// Smallest half-width whose forward edge satisfies
    /// `|phi|^(h alpha) < WINDOW_TOLERANCE`, floored at [`DEFAULT_HALF_WIDTH`].
    pub fn required_half_width(phi: f64, alpha: f64) -> usize {
        let a = phi.abs();
        if a == 0.0 {
            return DEFAULT_HALF_WIDTH;
        }
        let needed = (WINDOW_TOLERANCE.ln() / (alpha * a.ln())).floor() as usize + 1;
        needed.max(DEFAULT_HALF_WIDTH)
    }

    /// Geometric backward extent `J`.
    pub fn sample_backward_extent(&self, rng: &mut SimRng) -> u64 {
        let q = self.phi.abs().powf(self.alpha);
        if q == 0.0 {
            return 0;
        }
        let u: f64 = 1.0 - rng.random::<f64>();
        // P(J >= j) = q^j
        (u.ln() / q.ln()).floor() as u64
    }

    pub fn sample_path(&self, rng: &mut SimRng) -> SpectralTailPath {
        let j = self.sample_backward_extent(rng);
        let positive: f64 = rng.random();
        let sign = if positive < self.p_plus { 1.0 } else { -1.0 };
        ar1_spectral_path_given(self.phi, sign, j, self.half_width)
    }
}

impl PathSampler for Ar1SpectralSampler {
    fn sample(&self, rng: &mut SimRng) -> SpectralTailPath {
        self.sample_path(rng)
    }
}

/// The AR(1) spectral tail window for a fixed noise sign `theta_z` and
/// backward extent `j`.
pub fn ar1_spectral_path_given(phi: f64, theta_z: f64, j: u64, half_width: usize) -> SpectralTailPath {
    let h = half_width as i64;
    let a = phi.abs();
    let j = j.min(i64::MAX as u64 / 2) as i64;
    let values: Vec<f64> = (-h..=h)
        .map(|t| {
            let shifted = j + t;
            if shifted < 0 {
                return 0.0;
            }
            let sign = if phi < 0.0 && shifted % 2 == 1 { -1.0 } else { 1.0 };
            let magnitude = if t == 0 { 1.0 } else { a.powi(t as i32) };
            theta_z * sign * magnitude
        })
        .collect();
    let record_time = record_time(half_width, &values);
    SpectralTailPath { half_width, values, record_time }
}

/// One AR(1) spectral tail window drawn from `rng`.
pub fn ar1_spectral_tail(
    phi: f64,
    alpha: f64,
    p_plus: f64,
    half_width: usize,
    rng: &mut SimRng,
) -> Result<SpectralTailPath, TheoryError> {
    Ok(Ar1SpectralSampler::new(phi, alpha, p_plus, half_width)?.sample_path(rng))
}

/// Deterministic parallel Monte Carlo mean: paths are processed in fixed
/// batches, each with its own derived stream, and batch sums are combined in
/// batch order.
fn monte_carlo<F, E>(reps: usize, seed: u64, f: F) -> Result<MonteCarloEstimate, E>
where
    F: Fn(&mut SimRng) -> Result<f64, E> + Sync,
    E: Send,
{
    if reps == 0 {
        return Ok(MonteCarloEstimate { value: f64::NAN, std_error: f64::NAN, reps: 0 });
    }
    let batches = reps.div_ceil(MC_BATCH);
    // Per-batch Welford moments merged in batch order.
    let partial: Vec<Result<(f64, f64, f64), E>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_from_seed(derive_replication_seed(seed, b as u64));
            let count = MC_BATCH.min(reps - b * MC_BATCH);
            let (mut k, mut mean, mut m2) = (0.0, 0.0, 0.0);
            for _ in 0..count {
                let v = f(&mut rng)?;
                k += 1.0;
                let delta = v - mean;
                mean += delta / k;
                m2 += delta * (v - mean);
            }
            Ok((k, mean, m2))
        })
        .collect();
    let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for p in partial {
        let (k, mb, m2b) = p?;
        let total = n + k;
        let delta = mb - mean;
        mean += delta * k / total;
        m2 += m2b + delta * delta * n * k / total;
        n = total;
    }
    let var = if reps > 1 { (m2 / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(MonteCarloEstimate { value: mean, std_error: (var / n).sqrt(), reps })
}

/// `P(T* = 0)`: the fraction of sampled windows whose largest `|Theta_t|` is
/// at lag zero.
pub fn theta_from_record_probability<S: PathSampler + ?Sized>(
    sampler: &S,
    reps: usize,
    seed: u64,
) -> MonteCarloEstimate {
    let est = monte_carlo::<_, std::convert::Infallible>(reps, seed, |rng| {
        Ok(if sampler.sample(rng).record_time() == 0 { 1.0 } else { 0.0 })
    })
    .unwrap_or_else(|e| match e {});
    // Binomial standard error from the proportion itself.
    let p = est.value;
    MonteCarloEstimate { std_error: (p * (1.0 - p) / reps.max(1) as f64).sqrt(), ..est }
}

/// `E[max_t |Theta_t|^alpha / sum_t |Theta_t|^alpha]`, the expected lag-`T*`
/// mass of the spectral cluster process.
///
/// Fails with [`TheoryError::WindowTooNarrow`] if any sampled window has
/// `|Theta_{+-h}|^alpha >= 1e-16`.
pub fn theta_from_spectral_cluster<S: PathSampler + ?Sized>(
    sampler: &S,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<MonteCarloEstimate, TheoryError> {
    if !(alpha > 0.0) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    monte_carlo(reps, seed, |rng| {
        let path = sampler.sample(rng);
        let edge = path.edge_mass(alpha);
        if edge >= WINDOW_TOLERANCE {
            return Err(TheoryError::WindowTooNarrow { half_width: path.half_width(), edge });
        }
        Ok(path.cluster_ratio(alpha))
    })
}

/// `E[(1 - sup_{t>=1} |Theta_t|^alpha)_+]`, which depends only on the
/// forward part of each window.
pub fn theta_from_forward_path<S: PathSampler + ?Sized>(
    sampler: &S,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> MonteCarloEstimate {
    monte_carlo::<_, std::convert::Infallible>(reps, seed, |rng| {
        Ok((1.0 - sampler.sample(rng).forward_sup(alpha)).max(0.0))
    })
    .unwrap_or_else(|e| match e {})
}

/// Settings of the ladder-functional Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderConfig {
    pub horizon: usize,
    pub reps: usize,
    pub barrier: f64,
    pub seed: u64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self { horizon: 10_000, reps: 1_000_000, barrier: DEFAULT_LADDER_BARRIER, seed: 0 }
    }
}

/// Extremal index of the lognormal recurrence `X_t = A_t X_{t-1} + B_t`,
/// `log A ~ Normal(mean, sd^2)`, as `E[(1 - exp(alpha M))_+]` where `M` is the
/// running maximum of the negative-drift walk `S_t = sum_{i<=t} log A_i` and
/// `alpha = -2 mean / sd^2` solves `E[A^alpha] = 1`.
///
/// Each walk runs for at most `horizon` steps and stops early once it falls
/// below `barrier`.
pub fn sre_theta_mc(log_a_mean: f64, log_a_sd: f64, config: LadderConfig) -> Result<MonteCarloEstimate, TheoryError> {
    if !(log_a_mean < 0.0) {
        return Err(invalid(format!("log_a_mean must be negative, got {log_a_mean}")));
    }
    if !(log_a_sd > 0.0 && log_a_sd.is_finite()) {
        return Err(invalid(format!("log_a_sd must be positive, got {log_a_sd}")));
    }
    if config.horizon == 0 || config.reps == 0 {
        return Err(invalid("horizon and reps must be positive"));
    }
    let alpha = -2.0 * log_a_mean / (log_a_sd * log_a_sd);
    monte_carlo::<_, std::convert::Infallible>(config.reps, config.seed, |rng| {
        let mut walk = 0.0;
        let mut max = f64::NEG_INFINITY;
        for _ in 0..config.horizon {
            let z: f64 = rng.sample(StandardNormal);
            walk += log_a_mean + log_a_sd * z;
            max = max.max(walk);
            if walk < config.barrier {
                break;
            }
        }
        Ok((1.0 - (alpha * max).exp()).max(0.0))
    })
    .map_err(|e| match e {})
}

/// Riemann zeta on the real line.
pub fn riemann_zeta(s: f64) -> Result<f64, TheoryError> {
    special::zeta(s).ok_or(TheoryError::PoleAtOne)
}

/// `zeta(1/2) / sqrt(2 pi)`, the exponent of the first-order approximation.
pub fn sre_first_order_exponent() -> f64 {
    special::zeta(0.5).expect("0.5 is not a pole") / (2.0 * PI).sqrt()
}

/// First-order approximation `exp(zeta(1/2) / sqrt(2 pi)) / 2` to the
/// extremal index of the recurrence with `log A ~ Normal(-1/2, 1)`, `B = 1`.
pub fn sre_theta_first_order() -> f64 {
    0.5 * sre_first_order_exponent().exp()
}

/// Truncated exponent series of the discretised Brown-Resnick process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaSeriesResult {
    pub delta: f64,
    /// Partial sums of `sum_n zeta(1/2 - n) / (n! (2n + 1)) (-delta/4)^n`.
    pub partial_sums: Vec<f64>,
    /// `sqrt(delta / pi)` times the last partial sum.
    pub exponent: f64,
    /// `delta * exp(exponent)`.
    pub value: f64,
    pub terms_used: usize,
}

impl ZetaSeriesResult {
    /// `value / delta`, which tends to the Pickands constant 1 as `delta -> 0`.
    pub fn pickands_ratio(&self) -> f64 {
        self.value / self.delta
    }
}

/// `zeta(1/2 - n) / (n! (2n + 1))`, returned as `(sign, ln |.|)` so that large
/// `n` does not overflow.
pub fn brown_resnick_log_coefficient(n: usize) -> (f64, f64) {
    let z = special::zeta(0.5 - n as f64).expect("1/2 - n is never a pole");
    let nf = n as f64;
    (z.signum(), z.abs().ln() - special::ln_gamma(nf + 1.0) - (2.0 * nf + 1.0).ln())
}

/// Extremal index of the Brown-Resnick process sampled on the grid
/// `delta Z`: `delta exp( sqrt(delta/pi) sum_{n>=0} zeta(1/2-n)/(n!(2n+1)) (-delta/4)^n )`.
///
/// Terms are added until one falls below `tol` in absolute value.
pub fn brown_resnick_theta(delta: f64, tol: f64) -> Result<ZetaSeriesResult, TheoryError> {
    if !(delta > 0.0 && delta <= 4.0) {
        return Err(invalid(format!("delta must lie in (0, 4], got {delta}")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let log_x = (delta / 4.0).ln();
    let mut partial_sums = Vec::new();
    let mut sum = 0.0;
    for n in 0..MAX_SERIES_TERMS {
        let (sign, log_c) = brown_resnick_log_coefficient(n);
        let alternating = if n % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * alternating * (log_c + n as f64 * log_x).exp();
        sum += term;
        partial_sums.push(sum);
        if term.abs() < tol {
            let exponent = (delta / PI).sqrt() * sum;
            return Ok(ZetaSeriesResult {
                delta,
                partial_sums,
                exponent,
                value: delta * exponent.exp(),
                terms_used: n + 1,
            });
        }
    }
    Err(TheoryError::SeriesDiverged { terms: MAX_SERIES_TERMS, tol })
}

/// Ground-truth extremal index of the series the estimators see for `model`
/// (see [`ModelSpec::uses_absolute_values`]).
///
/// Closed forms where available; the lognormal recurrence uses the
/// first-order zeta expression at `(mean, sd) = (-1/2, 1)` and the ladder
/// Monte Carlo elsewhere. Gaussian AR(1) noise is not regularly varying and
/// has no entry.
pub fn true_theta(model: &ModelSpec) -> Option<f64> {
    match *model {
        ModelSpec::Ar1 { phi, noise } => noise.tail_index().and_then(|a| ar1_theta(phi, a).ok()),
        ModelSpec::Sre { log_a_mean, log_a_sd, .. } => {
            if log_a_mean == -0.5 && log_a_sd == 1.0 {
                Some(sre_theta_first_order())
            } else {
                let config = LadderConfig { reps: 200_000, ..LadderConfig::default() };
                sre_theta_mc(log_a_mean, log_a_sd, config).ok().map(|e| e.value)
            }
        }
        ModelSpec::MaxMovingAverage { window, .. } => max_ma_theta(window).ok(),
        ModelSpec::Iid { .. } => Some(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(ar1_theta(0.2, 1.0).unwrap(), 0.8);
        assert_eq!(ar1_theta(0.0, 2.5).unwrap(), 1.0);
        assert_eq!(ar1_theta(0.5, 3.0).unwrap(), 0.875);
        assert_eq!(ar1_theta(-0.5, 3.0).unwrap(), 0.875);
        assert!(ar1_theta(1.0, 1.0).is_err());
        assert!(ar1_theta(0.5, 0.0).is_err());
        assert_eq!(max_ma_theta(3).unwrap(), 1.0 / 3.0);
        assert_eq!(max_ma_theta(1).unwrap(), 1.0);
        assert_eq!(max_ma_theta(4).unwrap(), 0.25);
        assert!(max_ma_theta(0).is_err());
    }

    #[test]
    fn ar1_path_without_backward_extent() {
        let path = ar1_spectral_path_given(0.2, 1.0, 0, 10);
        for t in 0..=10i64 {
            assert!((path.at(t) - 0.2f64.powi(t as i32)).abs() < 1e-15);
        }
        for t in -10..0i64 {
            assert_eq!(path.at(t), 0.0);
        }
        assert_eq!(path.record_time(), 0);
    }

    #[test]
    fn ar1_path_with_backward_extent_and_negative_phi() {
        let path = ar1_spectral_path_given(-0.5, -1.0, 3, 10);
        // Theta_0 = -sign(phi^3) = 1 and Theta_t = Theta_0 phi^t for t >= -J
        assert_eq!(path.at(0), 1.0);
        assert_eq!(path.at(-4), 0.0);
        for t in -3..=5i64 {
            let expected = (-0.5f64).powi(t as i32);
            assert!((path.at(t) - expected).abs() < 1e-12, "t = {t}");
        }
        assert_eq!(path.record_time(), -3);
    }

    #[test]
    fn zero_phi_path_is_a_single_spike() {
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let path = ar1_spectral_tail(0.0, 1.0, 0.5, 5, &mut rng).unwrap();
            assert_eq!(path.at(0).abs(), 1.0);
            assert_eq!(path.values().iter().filter(|v| **v != 0.0).count(), 1);
        }
    }

    #[test]
    fn backward_extent_is_geometric() {
        let sampler = Ar1SpectralSampler::new(0.2, 1.0, 0.5, 50).unwrap();
        let mut rng = rng_from_seed(2);
        let n = 100_000;
        let zeros = (0..n).filter(|_| sampler.sample_backward_extent(&mut rng) == 0).count();
        let p = zeros as f64 / n as f64;
        assert!((p - 0.8).abs() < 0.01, "{p}");
    }

    #[test]
    fn record_time_tie_breaking() {
        // |Theta| ties between lags 2 and -2 and lag 0 is smaller.
        let mut values = vec![0.0; 7];
        values[3] = 1.0;
        values[1] = 2.0;
        values[5] = -2.0;
        let path = SpectralTailPath::new(3, values).unwrap();
        assert_eq!(path.record_time(), 2);

        let mut values = vec![0.0; 7];
        values[3] = -1.0;
        values[2] = 1.0;
        values[6] = 1.0;
        let path = SpectralTailPath::new(3, values).unwrap();
        assert_eq!(path.record_time(), 0);
    }

    #[test]
    fn path_requires_unit_lag_zero() {
        assert!(SpectralTailPath::new(1, vec![0.0, 0.5, 0.0]).is_err());
        assert!(SpectralTailPath::new(1, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn record_probability_ar1() {
        let sampler = Ar1SpectralSampler::new(0.2, 1.0, 0.5, DEFAULT_HALF_WIDTH).unwrap();
        let est = theta_from_record_probability(&sampler, 100_000, 3);
        assert!((est.value - 0.8).abs() < 0.005, "{est:?}");

        let sampler = Ar1SpectralSampler::new(0.5, 3.0, 0.5, DEFAULT_HALF_WIDTH).unwrap();
        let est = theta_from_record_probability(&sampler, 100_000, 4);
        assert!((est.value - 0.875).abs() < 0.005, "{est:?}");
    }

    #[test]
    fn degenerate_sampler_has_unit_theta() {
        let spike = |_: &mut SimRng| SpectralTailPath::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(theta_from_record_probability(&spike, 1000, 0).value, 1.0);
        let est = theta_from_spectral_cluster(&spike, 1.5, 1000, 0).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn spectral_cluster_ratio_is_deterministic_for_ar1() {
        // max |Theta|^a = |phi|^(-J a) and sum |Theta|^a = |phi|^(-J a) / (1 - |phi|^a),
        // so every path has ratio 1 - |phi|^a up to the window truncation.
        for &(phi, alpha) in &[(0.2, 1.0), (0.5, 3.0), (-0.7, 2.0), (0.9, 0.5)] {
            let h = Ar1SpectralSampler::required_half_width(phi, alpha);
            let sampler = Ar1SpectralSampler::new(phi, alpha, 0.5, h).unwrap();
            let est = theta_from_spectral_cluster(&sampler, alpha, 20_000, 5).unwrap();
            let exact = ar1_theta(phi, alpha).unwrap();
            assert!((est.value - exact).abs() < 1e-12, "{phi} {alpha}: {est:?}");
            assert!(est.std_error < 1e-12, "{est:?}");
        }
    }

    #[test]
    fn narrow_window_is_rejected() {
        let sampler = Ar1SpectralSampler::new(0.9, 0.5, 0.5, 20).unwrap();
        assert!(matches!(
            theta_from_spectral_cluster(&sampler, 0.5, 100, 0),
            Err(TheoryError::WindowTooNarrow { .. })
        ));
    }

    #[test]
    fn forward_representation_matches_closed_form() {
        for &(phi, alpha) in &[(0.2, 1.0), (0.8, 2.0), (-0.4, 0.5)] {
            let sampler = Ar1SpectralSampler::new(phi, alpha, 0.3, 50).unwrap();
            let est = theta_from_forward_path(&sampler, alpha, 10_000, 6);
            assert!((est.value - ar1_theta(phi, alpha).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let sampler = Ar1SpectralSampler::new(0.6, 1.0, 0.5, 100).unwrap();
        let a = theta_from_record_probability(&sampler, 10_000, 9);
        let b = theta_from_record_probability(&sampler, 10_000, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn ladder_with_huge_drift_is_one() {
        let config = LadderConfig { reps: 1000, ..LadderConfig::default() };
        let est = sre_theta_mc(-1e6, 1.0, config).unwrap();
        assert_eq!(est.value, 1.0);
        assert!(sre_theta_mc(0.0, 1.0, config).is_err());
        assert!(sre_theta_mc(0.5, 1.0, config).is_err());
    }

    #[test]
    fn first_order_sre_value() {
        assert!((sre_first_order_exponent() + 0.5826).abs() < 1e-4);
        assert!((sre_theta_first_order() - 0.2792).abs() < 5e-4);
    }

    #[test]
    fn zeta_pole() {
        assert_eq!(riemann_zeta(1.0), Err(TheoryError::PoleAtOne));
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-10);
        assert_eq!(riemann_zeta(0.0).unwrap(), -0.5);
    }

    #[test]
    fn brown_resnick_small_delta() {
        let r = brown_resnick_theta(1e-3, 1e-12).unwrap();
        assert!((0.95..=1.05).contains(&r.pickands_ratio()), "{r:?}");
        let last = r.partial_sums.len() - 1;
        assert!(last >= 1);
        assert!((r.partial_sums[last] - r.partial_sums[last - 1]).abs() < 1e-12);
        assert!(brown_resnick_theta(0.0, 1e-12).is_err());
        assert!(brown_resnick_theta(5.0, 1e-12).is_err());
    }

    #[test]
    fn brown_resnick_increments_shrink() {
        for &delta in &[0.01, 0.1, 0.5, 1.0] {
            let r = brown_resnick_theta(delta, 1e-15).unwrap();
            let incs: Vec<f64> = std::iter::once(r.partial_sums[0])
                .chain(r.partial_sums.windows(2).map(|w| w[1] - w[0]))
                .map(f64::abs)
                .collect();
            for w in incs.windows(2).skip(5) {
                assert!(w[1] <= w[0], "delta {delta}: {incs:?}");
            }
        }
    }

    #[test]
    fn true_theta_by_model() {
        use crate::models::NoiseSpec;
        let t = NoiseSpec::StudentT { df: 1.0 };
        assert_eq!(true_theta(&ModelSpec::Ar1 { phi: 0.2, noise: t }), Some(0.8));
        assert_eq!(true_theta(&ModelSpec::MaxMovingAverage { window: 3, noise: t }), Some(1.0 / 3.0));
        assert_eq!(true_theta(&ModelSpec::Iid { noise: t }), Some(1.0));
        let sre = true_theta(&ModelSpec::Sre { log_a_mean: -0.5, log_a_sd: 1.0, b: 1.0 }).unwrap();
        assert!((sre - 0.2792).abs() < 5e-4);
        assert_eq!(true_theta(&ModelSpec::Ar1 { phi: 0.2, noise: NoiseSpec::StandardNormal }), None);
    }
}
