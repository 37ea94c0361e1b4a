//! Stationary heavy-tailed processes and the random streams that drive them.
//!
//! Every sampler takes an explicit [`SimRng`]; there is no global generator.
//! Replication streams are derived from a master seed with
//! [`derive_replication_seed`], so results do not depend on the order in which
//! replications are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Random stream used by every simulator in the crate.
pub type SimRng = ChaCha8Rng;

/// Burn-in used for the stochastic recurrence equation and as the AR(1) floor.
pub const BASE_BURN_IN: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("NonFiniteValue: simulated value at position {0} is not finite")]
    NonFiniteValue(usize),
}

impl ModelError {
    pub fn name(&self) -> &'static str {
        match self {
            ModelError::InvalidParameter(_) => "InvalidParameter",
            ModelError::NonFiniteValue(_) => "NonFiniteValue",
        }
    }
}

fn invalid(msg: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter(msg.into())
}

/// Seeded stream for a given 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index` under `master_seed`.
///
/// Two rounds of the SplitMix64 finaliser: the index is mixed first so that
/// neighbouring indices land far apart, then combined with the master seed.
/// The map is a bijection in `index` for fixed `master_seed`.
pub fn derive_replication_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index.wrapping_add(0x6A09_E667_F3BC_C909)))
}

/// Noise law driving the AR(1), max-moving-average and iid models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    StudentT {
        df: f64,
    },
    /// Two-sided Pareto: `|Z|` has `P(|Z| > y) = y^-alpha` for `y > 1`, and the
    /// sign is positive with probability `p_plus`.
    Pareto {
        alpha: f64,
        #[serde(default = "one")]
        p_plus: f64,
    },
    StandardNormal,
}

fn one() -> f64 {
    1.0
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            NoiseSpec::StudentT { df } => {
                if !(df > 0.0 && df.is_finite()) {
                    return Err(invalid(format!("student-t df must be positive, got {df}")));
                }
            }
            NoiseSpec::Pareto { alpha, p_plus } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(invalid(format!("pareto alpha must be positive, got {alpha}")));
                }
                if !(0.0..=1.0).contains(&p_plus) {
                    return Err(invalid(format!("p_plus must lie in [0, 1], got {p_plus}")));
                }
            }
            NoiseSpec::StandardNormal => {}
        }
        Ok(())
    }

    /// Tail index of the noise; `None` for light tails.
    pub fn tail_index(&self) -> Option<f64> {
        match *self {
            NoiseSpec::StudentT { df } => Some(df),
            NoiseSpec::Pareto { alpha, .. } => Some(alpha),
            NoiseSpec::StandardNormal => None,
        }
    }

    /// Limit probability that a large `|Z|` is positive.
    pub fn p_plus(&self) -> f64 {
        match *self {
            NoiseSpec::Pareto { p_plus, .. } => p_plus,
            _ => 0.5,
        }
    }

    pub fn sampler(&self) -> Result<NoiseSampler, ModelError> {
        self.validate()?;
        Ok(match *self {
            NoiseSpec::StudentT { df } => NoiseSampler::StudentT {
                df,
                chi2: ChiSquared::new(df).map_err(|e| invalid(e.to_string()))?,
            },
            NoiseSpec::Pareto { alpha, p_plus } => NoiseSampler::Pareto { alpha, p_plus },
            NoiseSpec::StandardNormal => NoiseSampler::Normal,
        })
    }
}

/// A validated noise law ready to draw from.
#[derive(Debug, Clone, Copy)]
pub enum NoiseSampler {
    StudentT { df: f64, chi2: ChiSquared<f64> },
    Pareto { alpha: f64, p_plus: f64 },
    Normal,
}

impl NoiseSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseSampler::StudentT { df, chi2 } => {
                let z: f64 = rng.sample(StandardNormal);
                let c = chi2.sample(rng);
                z / (c / df).sqrt()
            }
            NoiseSampler::Pareto { alpha, p_plus } => pareto_draw(*alpha, *p_plus, rng),
            NoiseSampler::Normal => rng.sample(StandardNormal),
        }
    }
}

fn pareto_draw<R: Rng + ?Sized>(alpha: f64, p_plus: f64, rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the magnitude is at least 1 and finite.
    let u: f64 = rng.random();
    let magnitude = (1.0 - u).powf(-1.0 / alpha);
    let positive: f64 = rng.random();
    if positive < p_plus {
        magnitude
    } else {
        -magnitude
    }
}

/// One Student-t(df) variate built as a standard normal over the square root
/// of an independent scaled chi-square.
pub fn sample_student_t<R: Rng + ?Sized>(df: f64, rng: &mut R) -> Result<f64, ModelError> {
    Ok(NoiseSpec::StudentT { df }.sampler()?.draw(rng))
}

/// One two-sided Pareto(alpha) variate with positive sign probability `p_plus`.
pub fn sample_pareto<R: Rng + ?Sized>(alpha: f64, p_plus: f64, rng: &mut R) -> Result<f64, ModelError> {
    NoiseSpec::Pareto { alpha, p_plus }.validate()?;
    Ok(pareto_draw(alpha, p_plus, rng))
}

/// Stationary process to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// `X_t = phi X_{t-1} + Z_t`.
    Ar1 { phi: f64, noise: NoiseSpec },
    /// `X_t = A_t X_{t-1} + b` with `log A_t ~ Normal(log_a_mean, log_a_sd^2)`.
    Sre { log_a_mean: f64, log_a_sd: f64, b: f64 },
    /// `X_t = max(Z_t, ..., Z_{t+window-1})`.
    #[serde(rename = "maxma")]
    MaxMovingAverage { window: usize, noise: NoiseSpec },
    Iid { noise: NoiseSpec },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            ModelSpec::Ar1 { phi, noise } => {
                if !(phi.abs() < 1.0) {
                    return Err(invalid(format!("AR(1) requires |phi| < 1, got {phi}")));
                }
                noise.validate()
            }
            ModelSpec::Sre { log_a_mean, log_a_sd, b } => {
                if !(log_a_sd > 0.0 && log_a_sd.is_finite()) {
                    return Err(invalid(format!("log_a_sd must be positive, got {log_a_sd}")));
                }
                if !(log_a_mean < 0.0) {
                    return Err(invalid(format!(
                        "log_a_mean must be negative for a positive Kesten index, got {log_a_mean}"
                    )));
                }
                if !(b > 0.0 && b.is_finite()) {
                    return Err(invalid(format!("b must be positive, got {b}")));
                }
                Ok(())
            }
            ModelSpec::MaxMovingAverage { window, noise } => {
                if window == 0 {
                    return Err(invalid("max-moving-average window must be at least 1"));
                }
                noise.validate()
            }
            ModelSpec::Iid { noise } => noise.validate(),
        }
    }

    pub fn default_burn_in(&self) -> usize {
        match *self {
            ModelSpec::Ar1 { phi, .. } => {
                let a = phi.abs();
                if a == 0.0 {
                    BASE_BURN_IN
                } else {
                    let needed = (1e-12f64.ln() / a.ln()).ceil();
                    BASE_BURN_IN.max(needed as usize)
                }
            }
            ModelSpec::Sre { .. } => BASE_BURN_IN,
            ModelSpec::MaxMovingAverage { .. } | ModelSpec::Iid { .. } => 0,
        }
    }

    /// Tail index of the stationary marginal.
    ///
    /// For the lognormal recurrence this solves `E[A^alpha] = 1`, i.e.
    /// `alpha = -2 mean / sd^2`.
    pub fn tail_index(&self) -> Option<f64> {
        match *self {
            ModelSpec::Ar1 { noise, .. }
            | ModelSpec::MaxMovingAverage { noise, .. }
            | ModelSpec::Iid { noise } => noise.tail_index(),
            ModelSpec::Sre { log_a_mean, log_a_sd, .. } => Some(-2.0 * log_a_mean / (log_a_sd * log_a_sd)),
        }
    }

    /// Whether estimators should see `|X_t|` rather than `X_t`.
    ///
    /// The AR(1) and iid models carry two-sided noise and the target is the
    /// extremal index of `|X_t|`; the recurrence and max-moving-average models
    /// are estimated on the raw series.
    pub fn uses_absolute_values(&self) -> bool {
        matches!(self, ModelSpec::Ar1 { .. } | ModelSpec::Iid { .. })
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            ModelSpec::Ar1 { .. } => "ar1",
            ModelSpec::Sre { .. } => "sre",
            ModelSpec::MaxMovingAverage { .. } => "maxma",
            ModelSpec::Iid { .. } => "iid",
        }
    }
}

/// A finite realisation together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    pub model: ModelSpec,
    pub seed: u64,
    pub burn_in: usize,
}

impl TimeSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The series the estimators operate on (see [`ModelSpec::uses_absolute_values`]).
    pub fn estimation_values(&self) -> Vec<f64> {
        if self.model.uses_absolute_values() {
            self.values.iter().map(|x| x.abs()).collect()
        } else {
            self.values.clone()
        }
    }
}

/// Simulate `n` observations of `model` from `seed`, discarding `burn_in`
/// warm-up steps.
///
/// The AR(1) recursion starts from 0 and the recurrence equation from `b`;
/// both iterate `burn_in + n` steps and keep the last `n`. The
/// max-moving-average consumes `n + window - 1` noise draws and ignores
/// `burn_in`, as do iid draws.
pub fn simulate(model: &ModelSpec, n: usize, seed: u64, burn_in: usize) -> Result<TimeSeries, ModelError> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    model.validate()?;
    let mut rng = rng_from_seed(seed);
    let values = match *model {
        ModelSpec::Ar1 { phi, noise } => {
            let noise = noise.sampler()?;
            let mut x = 0.0;
            for _ in 0..burn_in {
                x = phi * x + noise.draw(&mut rng);
            }
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                x = phi * x + noise.draw(&mut rng);
                out.push(x);
            }
            out
        }
        ModelSpec::Sre { log_a_mean, log_a_sd, b } => {
            let mut x = b;
            let step = |x: f64, rng: &mut SimRng| {
                let z: f64 = rng.sample(StandardNormal);
                (log_a_mean + log_a_sd * z).exp() * x + b
            };
            for _ in 0..burn_in {
                x = step(x, &mut rng);
            }
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                x = step(x, &mut rng);
                out.push(x);
            }
            out
        }
        ModelSpec::MaxMovingAverage { window, noise } => {
            let noise = noise.sampler()?;
            let z: Vec<f64> = (0..n + window - 1).map(|_| noise.draw(&mut rng)).collect();
            z.windows(window)
                .map(|w| w.iter().copied().fold(f64::NEG_INFINITY, f64::max))
                .collect()
        }
        ModelSpec::Iid { noise } => {
            let noise = noise.sampler()?;
            (0..n).map(|_| noise.draw(&mut rng)).collect()
        }
    };
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(ModelError::NonFiniteValue(pos + 1));
    }
    Ok(TimeSeries { values, model: *model, seed, burn_in })
}

/// [`simulate`] with the model's default burn-in.
pub fn simulate_default(model: &ModelSpec, n: usize, seed: u64) -> Result<TimeSeries, ModelError> {
    simulate(model, n, seed, model.default_burn_in())
}
