//! Diffusion adaptive filtering with asymmetric error costs.
//!
//! A network of agents estimates a common linear system `W°` from local
//! regressor/measurement streams. Each agent adapts its estimate with a
//! cost-specific update and then averages its neighbours' intermediate
//! estimates (adapt-then-combine). Three asymmetric costs are provided:
//! linear-linear (`DLLCLMS`), quadratic-quadratic (`DQQCLMS`) and
//! linear-exponential (`DLECLMS`), together with the `DLMS`, `DSELMS` and
//! `DLLAD` baselines.
//!
//! The crate also carries everything needed to run Monte-Carlo experiments:
//! random topologies, Gaussian / Bernoulli-Gaussian / alpha-stable noise,
//! regressor covariance profiles, network MSD curves, a declarative
//! experiment config and CSV/SVG/manifest output.

pub mod algorithms;
pub mod config;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod noise;
pub mod plot;
pub mod report;
pub mod rng;
pub mod signals;
pub mod topology;

pub use algorithms::{AlgorithmKind, AlgorithmSpec};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use metrics::MsdCurve;
pub use topology::{CombinationMatrix, NetworkTopology};
