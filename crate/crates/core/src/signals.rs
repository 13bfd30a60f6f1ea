//! Regressors, the unknown system and the measurement model
//! `d = W°ᵀX + v`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Error, Result};

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// The system `W°` every agent tries to identify.
#[derive(Clone, Debug, PartialEq)]
pub struct UnknownSystem {
    taps: Vec<f64>,
}

impl UnknownSystem {
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("taps", "system needs at least one tap"));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("taps", "entries must be finite"));
        }
        Ok(Self { taps })
    }

    /// Taps i.i.d. uniform on `[low, high]`.
    pub fn random<R: Rng + ?Sized>(len: usize, low: f64, high: f64, rng: &mut R) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low <= high) {
            return Err(Error::invalid("weight_range", "needs finite low <= high"));
        }
        Self::new((0..len).map(|_| low + (high - low) * rng.random::<f64>()).collect())
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }
}

/// Diagonal regressor covariance `R_xx,n`.
#[derive(Clone, Debug, PartialEq)]
pub enum CovarianceProfile {
    /// `σ²·I` at every node.
    UniformScalar { taps: usize, variance: f64 },
    /// `σ²_n·I`, one variance per node.
    PerNodeScalar { taps: usize, variances: Vec<f64> },
    /// A separate diagonal per node, one entry per tap.
    PerTapDiagonal { diagonals: Vec<Vec<f64>> },
}

fn check_variances<'a>(values: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    if values.into_iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::invalid("variance", "variances must be positive and finite"));
    }
    Ok(())
}

impl CovarianceProfile {
    pub fn uniform_scalar(taps: usize, variance: f64) -> Result<Self> {
        check_variances([&variance])?;
        Ok(Self::UniformScalar { taps, variance })
    }

    pub fn per_node_scalar(taps: usize, variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::invalid("variances", "needs at least one node"));
        }
        check_variances(&variances)?;
        Ok(Self::PerNodeScalar { taps, variances })
    }

    pub fn per_tap_diagonal(diagonals: Vec<Vec<f64>>) -> Result<Self> {
        let taps = diagonals
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("diagonals", "needs at least one node"))?;
        for d in &diagonals {
            check_len(taps, d.len())?;
            check_variances(d)?;
        }
        Ok(Self::PerTapDiagonal { diagonals })
    }

    pub fn taps(&self) -> usize {
        match self {
            Self::UniformScalar { taps, .. } | Self::PerNodeScalar { taps, .. } => *taps,
            Self::PerTapDiagonal { diagonals } => diagonals[0].len(),
        }
    }

    /// Number of nodes the profile is defined for, `None` when node-agnostic.
    pub fn node_count(&self) -> Option<usize> {
        match self {
            Self::UniformScalar { .. } => None,
            Self::PerNodeScalar { variances, .. } => Some(variances.len()),
            Self::PerTapDiagonal { diagonals } => Some(diagonals.len()),
        }
    }

    pub fn variance(&self, node: usize, tap: usize) -> f64 {
        match self {
            Self::UniformScalar { variance, .. } => *variance,
            Self::PerNodeScalar { variances, .. } => variances[node],
            Self::PerTapDiagonal { diagonals } => diagonals[node][tap],
        }
    }

    /// Largest eigenvalue over all nodes, i.e. the largest diagonal entry.
    pub fn rho_max(&self) -> f64 {
        match self {
            Self::UniformScalar { variance, .. } => *variance,
            Self::PerNodeScalar { variances, .. } => variances.iter().copied().fold(f64::MIN, f64::max),
            Self::PerTapDiagonal { diagonals } => diagonals.iter().flatten().copied().fold(f64::MIN, f64::max),
        }
    }

    /// Fills `out` with a fresh zero-mean Gaussian regressor for `node`.
    pub fn generate_regressor_into<R: Rng + ?Sized>(&self, node: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        check_len(self.taps(), out.len())?;
        if let Some(nodes) = self.node_count() {
            if node >= nodes {
                return Err(Error::invalid("node", format!("index {node} outside 0..{nodes}")));
            }
        }
        for (tap, x) in out.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(rng);
            *x = self.variance(node, tap).sqrt() * z;
        }
        Ok(())
    }

    pub fn generate_regressor<R: Rng + ?Sized>(&self, node: usize, rng: &mut R) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.taps()];
        self.generate_regressor_into(node, rng, &mut out)?;
        Ok(out)
    }
}

/// `d = W°ᵀX + v`.
pub fn measure(system: &UnknownSystem, regressor: &[f64], noise_sample: f64) -> Result<f64> {
    check_len(system.len(), regressor.len())?;
    Ok(dot(system.taps(), regressor) + noise_sample)
}

/// `e = d − WᵀX`.
pub fn estimation_error(weights: &[f64], regressor: &[f64], desired: f64) -> Result<f64> {
    check_len(weights.len(), regressor.len())?;
    Ok(desired - dot(weights, regressor))
}
