//! Cost kernels, per-agent adaptation rules, the adapt-then-combine network
//! step and mean-stability step-size bounds.

mod adapt;
mod bounds;
mod cost;
mod network;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adapt::{
    adapt_dlms, adapt_dleclms, adapt_dllad, adapt_dllclms, adapt_dqqclms, adapt_dselms, sign, update_factor,
    AgentState, Update,
};
pub use bounds::{lec_linearization_error, step_bound, BranchLimits, StabilityBound};
pub use cost::{cost_lec, cost_llc, cost_qqc};
pub use network::{combine, NetworkState, StepReport};

/// `|a·e|` above this saturates the LEC exponent.
pub const DEFAULT_EXP_CLAMP: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    #[serde(rename = "DLMS")]
    Dlms,
    #[serde(rename = "DSELMS")]
    Dselms,
    #[serde(rename = "DLLAD")]
    Dllad,
    #[serde(rename = "DLLCLMS")]
    Dllclms,
    #[serde(rename = "DQQCLMS")]
    Dqqclms,
    #[serde(rename = "DLECLMS")]
    Dleclms,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::Dlms,
        AlgorithmKind::Dselms,
        AlgorithmKind::Dllad,
        AlgorithmKind::Dllclms,
        AlgorithmKind::Dqqclms,
        AlgorithmKind::Dleclms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Dlms => "DLMS",
            AlgorithmKind::Dselms => "DSELMS",
            AlgorithmKind::Dllad => "DLLAD",
            AlgorithmKind::Dllclms => "DLLCLMS",
            AlgorithmKind::Dqqclms => "DQQCLMS",
            AlgorithmKind::Dleclms => "DLECLMS",
        }
    }

    /// Whether the cut-offs `a`, `b` take part in the update.
    pub fn uses_cutoffs(self) -> bool {
        matches!(self, AlgorithmKind::Dllclms | AlgorithmKind::Dqqclms | AlgorithmKind::Dleclms)
    }

    /// Step size, `a`, `b` used when a config leaves them out.
    pub fn defaults(self) -> (f64, f64, f64) {
        match self {
            AlgorithmKind::Dlms | AlgorithmKind::Dselms | AlgorithmKind::Dllad => (0.35, 1.0, 1.0),
            AlgorithmKind::Dllclms => (0.4, 0.8, 4.0),
            AlgorithmKind::Dqqclms => (0.4, 0.8, 6.0),
            AlgorithmKind::Dleclms => (0.4, 0.32, 6.0),
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid("name", format!("unknown algorithm `{s}`")))
    }
}

/// An algorithm with its step size and cut-offs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
}

impl AlgorithmSpec {
    pub fn new(kind: AlgorithmKind, mu: f64, a: f64, b: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid("mu", "mu must be positive"));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid("a", "a must be positive"));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid("b", "b must be positive"));
        }
        Ok(Self { kind, mu, a, b })
    }

    /// Baseline without cut-offs.
    pub fn baseline(kind: AlgorithmKind, mu: f64) -> Result<Self> {
        Self::new(kind, mu, 1.0, 1.0)
    }

    pub fn with_defaults(kind: AlgorithmKind) -> Self {
        let (mu, a, b) = kind.defaults();
        Self { kind, mu, a, b }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }
}
