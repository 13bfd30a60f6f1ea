//! Per-agent adaptation. Every rule has the form `φ = W + f(e)·X`, so an
//! algorithm is fully described by its scalar factor `f(e)`.

use super::{AlgorithmKind, AlgorithmSpec, DEFAULT_EXP_CLAMP};
use crate::error::{check_len, Error, Result};
use crate::signals::estimation_error;

/// `sign(e)` with `sign(0) = 0`.
pub fn sign(e: f64) -> f64 {
    if e > 0.0 {
        1.0
    } else if e < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Update {
    /// Scalar multiplying the regressor.
    pub factor: f64,
    /// The LEC exponent hit the clamp.
    pub clamped: bool,
}

/// The scalar `f(e)` in `φ = W + f(e)·X`.
///
/// Piecewise rules split at `e > 0` / `e ≤ 0`. Products are formed as
/// `(μ·a)·g(e)` so that an asymmetric rule with `a = b = c` is bit-identical
/// to its symmetric counterpart run with step `μ·c`.
pub fn update_factor(spec: &AlgorithmSpec, e: f64, exp_clamp: f64) -> Update {
    let AlgorithmSpec { kind, mu, a, b } = *spec;
    let mut clamped = false;
    let factor = match kind {
        AlgorithmKind::Dlms => mu * e,
        AlgorithmKind::Dselms => mu * sign(e),
        AlgorithmKind::Dllad => mu * (e / (1.0 + e.abs())),
        AlgorithmKind::Dllclms => {
            if e > 0.0 {
                (mu * a) * sign(e)
            } else {
                (mu * b) * sign(e)
            }
        }
        AlgorithmKind::Dqqclms => {
            if e > 0.0 {
                (mu * a) * e
            } else {
                (mu * b) * e
            }
        }
        AlgorithmKind::Dleclms => {
            let x = a * e;
            let x = if x.abs() > exp_clamp {
                clamped = true;
                exp_clamp.copysign(x)
            } else {
                x
            };
            (mu * a * b) * x.exp_m1()
        }
    };
    Update { factor, clamped }
}

/// Local state of one agent: `W_n(i−1)` and the latest intermediate `φ_n(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentState {
    pub estimate: Vec<f64>,
    pub intermediate: Vec<f64>,
}

impl AgentState {
    pub fn zeros(taps: usize) -> Self {
        Self {
            estimate: vec![0.0; taps],
            intermediate: vec![0.0; taps],
        }
    }

    pub fn from_estimate(estimate: Vec<f64>) -> Self {
        let intermediate = estimate.clone();
        Self { estimate, intermediate }
    }

    /// Computes `φ` into `self.intermediate` and returns the error used.
    pub fn adapt(&mut self, spec: &AlgorithmSpec, regressor: &[f64], desired: f64) -> Result<f64> {
        check_len(self.estimate.len(), regressor.len())?;
        check_len(self.estimate.len(), self.intermediate.len())?;
        let e = estimation_error(&self.estimate, regressor, desired)?;
        let update = update_factor(spec, e, DEFAULT_EXP_CLAMP);
        for ((phi, w), x) in self.intermediate.iter_mut().zip(&self.estimate).zip(regressor) {
            *phi = w + update.factor * x;
        }
        if self.intermediate.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged {
                algorithm: spec.name(),
                iteration: 0,
            });
        }
        Ok(e)
    }
}

fn adapt_checked(
    expected: AlgorithmKind,
    state: &AgentState,
    regressor: &[f64],
    desired: f64,
    spec: &AlgorithmSpec,
) -> Result<Vec<f64>> {
    if spec.kind != expected {
        return Err(Error::invalid(
            "name",
            format!("expected a {} spec, got {}", expected.name(), spec.name()),
        ));
    }
    let mut scratch = state.clone();
    scratch.adapt(spec, regressor, desired)?;
    Ok(scratch.intermediate)
}

/// Sign-error rule weighted `a` for positive and `b` for non-positive errors.
pub fn adapt_dllclms(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dllclms, state, regressor, desired, spec)
}

/// LMS rule with error-sign dependent step `μa` / `μb`.
pub fn adapt_dqqclms(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dqqclms, state, regressor, desired, spec)
}

/// `φ = W + μab(exp(ae) − 1)·X`.
pub fn adapt_dleclms(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dleclms, state, regressor, desired, spec)
}

pub fn adapt_dlms(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dlms, state, regressor, desired, spec)
}

pub fn adapt_dselms(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dselms, state, regressor, desired, spec)
}

/// Log-absolute-difference rule, factor `μ·e/(1 + |e|)`.
pub fn adapt_dllad(state: &AgentState, regressor: &[f64], desired: f64, spec: &AlgorithmSpec) -> Result<Vec<f64>> {
    adapt_checked(AlgorithmKind::Dllad, state, regressor, desired, spec)
}
