//! Measurement-noise models.
//!
//! Three families: white Gaussian, the Bernoulli-Gaussian impulsive mixture
//! `v = g + B·G`, and alpha-stable draws. Samplers take the caller's stream
//! so that each (trial, node, iteration) can be given its own substream.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianNoiseParams {
    sigma_g: Vec<f64>,
}

impl GaussianNoiseParams {
    pub fn new(sigma_g: Vec<f64>) -> Result<Self> {
        if sigma_g.is_empty() {
            return Err(Error::invalid("sigma_g", "needs at least one node"));
        }
        if sigma_g.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::invalid("sigma_g", "must be finite and nonnegative"));
        }
        Ok(Self { sigma_g })
    }

    pub fn uniform(nodes: usize, sigma: f64) -> Result<Self> {
        Self::new(vec![sigma; nodes])
    }

    pub fn sigma(&self, node: usize) -> f64 {
        self.sigma_g[node]
    }

    pub fn node_count(&self) -> usize {
        self.sigma_g.len()
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigma_g
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImpulsiveNoiseParams {
    gaussian: GaussianNoiseParams,
    impulse_probability: f64,
    impulse_strength: Vec<f64>,
}

impl ImpulsiveNoiseParams {
    pub fn new(gaussian: GaussianNoiseParams, impulse_probability: f64, impulse_strength: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&impulse_probability) {
            return Err(Error::invalid("impulse_probability", "must lie in [0, 1]"));
        }
        crate::error::check_len(gaussian.node_count(), impulse_strength.len())?;
        if impulse_strength.iter().any(|s| !(s.is_finite() && *s >= 1.0)) {
            return Err(Error::invalid("impulse_strength", "must be finite and at least 1"));
        }
        Ok(Self {
            gaussian,
            impulse_probability,
            impulse_strength,
        })
    }

    pub fn gaussian(&self) -> &GaussianNoiseParams {
        &self.gaussian
    }

    pub fn impulse_probability(&self) -> f64 {
        self.impulse_probability
    }

    pub fn impulse_strength(&self, node: usize) -> f64 {
        self.impulse_strength[node]
    }

    pub fn strengths(&self) -> &[f64] {
        &self.impulse_strength
    }

    /// Standard deviation of the impulse component at `node`, `√I_n·σ_{g,n}`.
    pub fn impulse_sigma(&self, node: usize) -> f64 {
        self.impulse_strength[node].sqrt() * self.gaussian.sigma(node)
    }
}

/// `S(alpha, beta, scale, location)` in the 1-parameterisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaStableParams {
    pub alpha: f64,
    pub beta: f64,
    pub scale: f64,
    pub location: f64,
}

impl AlphaStableParams {
    pub fn new(alpha: f64, beta: f64, scale: f64, location: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid("alpha", "must lie in (0, 2]"));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::invalid("beta", "must lie in [-1, 1]"));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
        if !location.is_finite() {
            return Err(Error::invalid("location", "must be finite"));
        }
        Ok(Self {
            alpha,
            beta,
            scale,
            location,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoiseModel {
    Gaussian(GaussianNoiseParams),
    Impulsive(ImpulsiveNoiseParams),
    AlphaStable(AlphaStableParams),
}

impl NoiseModel {
    pub fn kind(&self) -> &'static str {
        match self {
            NoiseModel::Gaussian(_) => "gaussian",
            NoiseModel::Impulsive(_) => "impulsive",
            NoiseModel::AlphaStable(_) => "alpha_stable",
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, node: usize, rng: &mut R) -> f64 {
        match self {
            NoiseModel::Gaussian(p) => sample_gaussian(p, node, rng),
            NoiseModel::Impulsive(p) => sample_impulsive(p, node, rng).value,
            NoiseModel::AlphaStable(p) => sample_alpha_stable(p, rng),
        }
    }

    /// The `X_v` factor of the sign-error mean-stability bound, maximised over
    /// nodes: `√(2/π)·[(1−P_r)/σ_g + P_r/σ_Im]`. Undefined for alpha-stable
    /// noise and for any node with `σ_g = 0`.
    pub fn chi_v(&self) -> Option<f64> {
        let k = (2.0 / PI).sqrt();
        let per_node: Vec<f64> = match self {
            NoiseModel::Gaussian(p) => p.sigmas().iter().map(|s| k / s).collect(),
            NoiseModel::Impulsive(p) => (0..p.gaussian().node_count())
                .map(|n| {
                    let pr = p.impulse_probability();
                    k * ((1.0 - pr) / p.gaussian().sigma(n) + pr / p.impulse_sigma(n))
                })
                .collect(),
            NoiseModel::AlphaStable(_) => return None,
        };
        let max = per_node.into_iter().fold(f64::NEG_INFINITY, f64::max);
        (max.is_finite() && max > 0.0).then_some(max)
    }
}

pub fn sample_gaussian<R: Rng + ?Sized>(params: &GaussianNoiseParams, node: usize, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    params.sigma(node) * z
}

/// One impulsive draw with its Bernoulli gate exposed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpulsiveDraw {
    pub value: f64,
    pub impulse: bool,
}

/// `g + B·G`. Draw order is fixed: `g`, then `B`, then `G` only when `B = 1`.
/// With `P_r = 0` the returned value equals [`sample_gaussian`] on the same
/// stream.
pub fn sample_impulsive<R: Rng + ?Sized>(params: &ImpulsiveNoiseParams, node: usize, rng: &mut R) -> ImpulsiveDraw {
    let g = sample_gaussian(params.gaussian(), node, rng);
    let impulse = rng.random::<f64>() < params.impulse_probability();
    let value = if impulse {
        let z: f64 = StandardNormal.sample(rng);
        g + params.impulse_sigma(node) * z
    } else {
        g
    };
    ImpulsiveDraw { value, impulse }
}

/// Chambers–Mallows–Stuck sampler, 1-parameterisation.
///
/// With `V ~ U(−π/2, π/2)` and `W ~ Exp(1)`:
///
/// ```text
/// α ≠ 1:  X = S·sin(α(V+B)) / cos(V)^(1/α) · (cos(V − α(V+B)) / W)^((1−α)/α)
///         B = atan(β tan(πα/2)) / α,  S = (1 + β² tan²(πα/2))^(1/(2α))
///         Y = scale·X + location
/// α = 1:  X = (2/π)·[(π/2 + βV) tan V − β ln((π/2)W cos V / (π/2 + βV))]
///         Y = scale·X + (2/π)β·scale·ln(scale) + location
/// ```
///
/// At `α = 2` this is `N(location, 2·scale²)`.
pub fn sample_alpha_stable<R: Rng + ?Sized>(params: &AlphaStableParams, rng: &mut R) -> f64 {
    let AlphaStableParams {
        alpha,
        beta,
        scale,
        location,
    } = *params;
    let v = PI * (rng.random::<f64>() - 0.5);
    let w: f64 = Exp1.sample(rng);

    if alpha == 1.0 {
        let shifted = FRAC_PI_2 + beta * v;
        let x = (shifted * v.tan() - beta * (FRAC_PI_2 * w * v.cos() / shifted).ln()) / FRAC_PI_2;
        scale * x + beta * scale * scale.ln() / FRAC_PI_2 + location
    } else {
        let t = beta * (FRAC_PI_2 * alpha).tan();
        let b = t.atan() / alpha;
        let s = (1.0 + t * t).powf(0.5 / alpha);
        let x = s * (alpha * (v + b)).sin() / v.cos().powf(1.0 / alpha)
            * ((v - alpha * (v + b)).cos() / w).powf((1.0 - alpha) / alpha);
        scale * x + location
    }
}
