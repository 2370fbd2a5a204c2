//! Annual emission forecasting toolkit.
//!
//! The crate covers the full pipeline for forecasting CO₂ per capita from
//! fossil-fuel consumption series: stationarity testing and differencing,
//! a univariate and a multivariate model zoo behind uniform fit/forecast
//! contracts, six-metric evaluation, a stacked-generalization ensemble,
//! and recursive multi-year projection back on level scale.
//!
//! Start with the runnable examples (`cargo run --example <name>`) or the
//! thin `emicast` binary, which exposes the batch pipeline as subcommands.

pub mod error;
pub mod numerics;
pub mod series;
pub mod stattests;
pub mod metrics;
pub mod univariate;
pub mod multivariate;

pub use error::{Error, Result};
