//! Extremal index toolkit for regularly varying stationary time series.
//!
//! The crate is organised around the life cycle of a Monte Carlo study:
//!
//! - [`models`] simulates AR(1), stochastic recurrence, max-moving-average and
//!   iid sequences with heavy-tailed noise, using explicit seeded streams.
//! - [`theory`] computes ground-truth extremal indices: closed forms, Monte
//!   Carlo oracles built on the spectral tail process, and zeta-series
//!   expansions.
//! - [`estimators`] implements the blocks, disjoint blocks, sliding blocks,
//!   runs, intervals, Northrop (sliding and disjoint) and spectral cluster
//!   process estimators, plus the Hill tail-index estimator.
//! - [`diagnostics`] probes cluster structure empirically.
//! - [`harness`] sweeps estimators and hyperparameters over replications and
//!   summarises the results for boxplots.
//! - [`cli`] is the command-line front end used by the `exindex` binary.

pub mod cli;
pub mod diagnostics;
pub mod estimators;
pub mod harness;
pub mod models;
pub mod special;
pub mod theory;

pub use estimators::{EstimateRecord, EstimatorError, EstimatorId, ThresholdSpec};
pub use harness::{ExperimentConfig, HarnessError, McReport, Summary};
pub use models::{ModelError, ModelSpec, NoiseSpec, SimRng, TimeSeries};
pub use theory::{MonteCarloEstimate, SpectralTailPath, TheoryError, ZetaSeriesResult};
