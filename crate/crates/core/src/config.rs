//! Experiment configuration.
//!
//! The document is TOML: one table per section, flat `key = value` lines,
//! plus an `[[algorithms]]` array. Every key is optional except
//! `run.master_seed`, which may instead come from the command line. Unknown
//! keys are rejected.
//!
//! ```toml
//! [network]
//! nodes = 20
//! rule = "probability"   # or "radius"
//! param = 0.2
//!
//! [system]
//! taps = 16
//! weight_range = [-1.0, 1.0]
//!
//! [signal]
//! profile = "per_node_scalar"   # "uniform" | "per_node_scalar" | "per_tap_diagonal"
//! variance_range = [0.5, 1.5]
//!
//! [noise]
//! kind = "alpha_stable"   # "gaussian" | "impulsive" | "alpha_stable"
//! alpha = 1.6
//! beta = 0.05
//! scale = 2000.0
//! location = 0.0
//!
//! [[algorithms]]
//! name = "DLECLMS"
//! mu = 0.4
//! a = 0.32
//! b = 6.0
//!
//! [run]
//! iterations = 2000
//! monte_carlo = 20
//! master_seed = 1
//! topology_per_trial = "fixed"   # or "redraw"
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{AlgorithmKind, AlgorithmSpec, DEFAULT_EXP_CLAMP};
use crate::metrics::{InitialEstimate, NetworkRule, NetworkSpec, Scenario, TopologyPolicy};
use crate::noise::{AlphaStableParams, GaussianNoiseParams, ImpulsiveNoiseParams, NoiseModel};
use crate::rng::{substream, Purpose};
use crate::signals::{CovarianceProfile, UnknownSystem};
use crate::topology::{GeneratorOptions, DEFAULT_AREA, DEFAULT_MAX_RETRIES};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("unknown key `{key}`{}", hint.as_deref().map(|h| format!(" ({h})")).unwrap_or_default())]
    UnknownKey { key: String, hint: Option<String> },

    #[error("{field}: {constraint}")]
    Semantic { field: String, constraint: String },
}

fn semantic(field: impl Into<String>, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Semantic {
        field: field.into(),
        constraint: constraint.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Probability,
    Radius,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub nodes: usize,
    pub rule: RuleKind,
    pub param: f64,
    pub max_retries: usize,
    pub area: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            nodes: 20,
            rule: RuleKind::Probability,
            param: 0.2,
            max_retries: DEFAULT_MAX_RETRIES,
            area: DEFAULT_AREA,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// Taps drawn independently and uniformly from `weight_range`.
    Uniform,
    /// Taps listed in `weights`.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub taps: usize,
    pub weight_rule: WeightRule,
    pub weight_range: [f64; 2],
    /// Seed for `W°`; the master seed when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            taps: 16,
            weight_rule: WeightRule::Uniform,
            weight_range: [-1.0, 1.0],
            seed: None,
            weights: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Uniform,
    PerNodeScalar,
    PerTapDiagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalConfig {
    pub profile: ProfileKind,
    /// Used by `uniform`.
    pub variance: f64,
    /// Per-node variances for `per_node_scalar`; drawn from `variance_range`
    /// when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variances: Option<Vec<f64>>,
    pub variance_range: [f64; 2],
    /// `N` rows of `M` variances for `per_tap_diagonal`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<Vec<f64>>>,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self {
            profile: ProfileKind::PerNodeScalar,
            variance: 1.0,
            variances: None,
            variance_range: [0.5, 1.5],
            diagonal: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Gaussian,
    Impulsive,
    AlphaStable,
}

/// A value given once for all nodes or once per node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerNode {
    All(f64),
    Each(Vec<f64>),
}

impl PerNode {
    fn expand(&self, nodes: usize, field: &str) -> Result<Vec<f64>, ConfigError> {
        match self {
            PerNode::All(v) => Ok(vec![*v; nodes]),
            PerNode::Each(v) if v.len() == nodes => Ok(v.clone()),
            PerNode::Each(v) => Err(semantic(field, format!("expected {nodes} values, got {}", v.len()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub alpha: f64,
    pub beta: f64,
    pub scale: f64,
    pub location: f64,
    pub sigma_g: PerNode,
    pub impulse_probability: f64,
    pub impulse_strength: PerNode,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            kind: NoiseKind::AlphaStable,
            alpha: 1.6,
            beta: 0.05,
            scale: 2000.0,
            location: 0.0,
            sigma_g: PerNode::All(0.1),
            impulse_probability: 0.1,
            impulse_strength: PerNode::All(100.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl From<AlgorithmSpec> for AlgorithmEntry {
    fn from(s: AlgorithmSpec) -> Self {
        let cut = s.kind.uses_cutoffs();
        Self {
            name: s.kind.name().to_owned(),
            mu: Some(s.mu),
            a: cut.then_some(s.a),
            b: cut.then_some(s.b),
        }
    }
}

fn default_algorithms() -> Vec<AlgorithmEntry> {
    AlgorithmKind::ALL
        .iter()
        .map(|&k| AlgorithmSpec::with_defaults(k).into())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub iterations: usize,
    pub monte_carlo: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub topology_per_trial: TopologyMode,
    pub lec_exponent_clamp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyMode {
    Fixed,
    Redraw,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            iterations: 2000,
            monte_carlo: 20,
            master_seed: None,
            topology_per_trial: TopologyMode::Fixed,
            lec_exponent_clamp: DEFAULT_EXP_CLAMP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkConfig,
    pub system: SystemConfig,
    pub signal: SignalConfig,
    pub noise: NoiseConfig,
    pub algorithms: Vec<AlgorithmEntry>,
    pub run: RunConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            system: SystemConfig::default(),
            signal: SignalConfig::default(),
            noise: NoiseConfig::default(),
            algorithms: default_algorithms(),
            run: RunConfig::default(),
        }
    }
}

/// Everything a run needs, with the random parts of the setup drawn.
#[derive(Clone, Debug)]
pub struct ResolvedExperiment {
    pub scenario: Scenario,
    pub specs: Vec<AlgorithmSpec>,
}

impl ExperimentConfig {
    /// Parses and validates. `seed_override` replaces `run.master_seed`.
    pub fn parse(text: &str, seed_override: Option<u64>) -> Result<Self, ConfigError> {
        let mut config: Self = toml::from_str(text).map_err(|e| translate(text, &e))?;
        if let Some(seed) = seed_override {
            config.run.master_seed = Some(seed);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn master_seed(&self) -> Result<u64, ConfigError> {
        self.run
            .master_seed
            .ok_or_else(|| semantic("run.master_seed", "required (set it in the config or pass --seed)"))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let seed = self.master_seed()?;
        check_seed("run.master_seed", seed)?;
        if let Some(s) = self.system.seed {
            check_seed("system.seed", s)?;
        }
        let net = &self.network;
        if net.nodes == 0 {
            return Err(semantic("network.nodes", "must be at least 1"));
        }
        if net.max_retries == 0 {
            return Err(semantic("network.max_retries", "must be at least 1"));
        }
        match net.rule {
            RuleKind::Probability if !(0.0..=1.0).contains(&net.param) => {
                return Err(semantic("network.param", "edge probability must lie in [0, 1]"));
            }
            RuleKind::Radius if !(net.param.is_finite() && net.param >= 0.0) => {
                return Err(semantic("network.param", "radius must be nonnegative"));
            }
            _ => {}
        }
        if !(net.area.is_finite() && net.area > 0.0) {
            return Err(semantic("network.area", "must be positive"));
        }

        let sys = &self.system;
        if sys.taps == 0 {
            return Err(semantic("system.taps", "must be at least 1"));
        }
        match sys.weight_rule {
            WeightRule::Uniform => {
                let [lo, hi] = sys.weight_range;
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(semantic("system.weight_range", "needs finite low < high"));
                }
            }
            WeightRule::Explicit => match &sys.weights {
                Some(w) if w.len() == sys.taps && w.iter().all(|v| v.is_finite()) => {}
                Some(_) => return Err(semantic("system.weights", "needs `taps` finite values")),
                None => return Err(semantic("system.weights", "required when weight_rule = \"explicit\"")),
            },
        }

        self.validate_signal()?;
        self.noise_model()?;
        self.specs()?;

        let run = &self.run;
        if run.iterations == 0 {
            return Err(semantic("run.iterations", "must be at least 1"));
        }
        if run.monte_carlo == 0 {
            return Err(semantic("run.monte_carlo", "must be at least 1"));
        }
        if !(run.lec_exponent_clamp.is_finite() && run.lec_exponent_clamp > 0.0) {
            return Err(semantic("run.lec_exponent_clamp", "must be positive"));
        }
        Ok(())
    }

    fn validate_signal(&self) -> Result<(), ConfigError> {
        let sig = &self.signal;
        let positive = |v: &f64| v.is_finite() && *v > 0.0;
        match sig.profile {
            ProfileKind::Uniform if !positive(&sig.variance) => Err(semantic("signal.variance", "must be positive")),
            ProfileKind::PerNodeScalar => match &sig.variances {
                Some(v) if v.len() != self.network.nodes => Err(semantic(
                    "signal.variances",
                    format!("expected {} values, got {}", self.network.nodes, v.len()),
                )),
                Some(v) if !v.iter().all(positive) => Err(semantic("signal.variances", "must be positive")),
                Some(_) => Ok(()),
                None => {
                    let [lo, hi] = sig.variance_range;
                    if positive(&lo) && hi.is_finite() && lo <= hi {
                        Ok(())
                    } else {
                        Err(semantic("signal.variance_range", "needs 0 < low <= high"))
                    }
                }
            },
            ProfileKind::PerTapDiagonal => match &sig.diagonal {
                None => Err(semantic("signal.diagonal", "required for per_tap_diagonal")),
                Some(d)
                    if d.len() != self.network.nodes
                        || d.iter().any(|row| row.len() != self.system.taps || !row.iter().all(positive)) =>
                {
                    Err(semantic("signal.diagonal", "needs `nodes` rows of `taps` positive values"))
                }
                Some(_) => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn noise_model(&self) -> Result<NoiseModel, ConfigError> {
        let n = &self.noise;
        let nodes = self.network.nodes;
        let wrap = |field: &'static str| move |e: crate::Error| semantic(field, strip(e));
        Ok(match n.kind {
            NoiseKind::Gaussian => {
                let sigma = n.sigma_g.expand(nodes, "noise.sigma_g")?;
                NoiseModel::Gaussian(GaussianNoiseParams::new(sigma).map_err(wrap("noise.sigma_g"))?)
            }
            NoiseKind::Impulsive => {
                let sigma = n.sigma_g.expand(nodes, "noise.sigma_g")?;
                let g = GaussianNoiseParams::new(sigma).map_err(wrap("noise.sigma_g"))?;
                let strength = n.impulse_strength.expand(nodes, "noise.impulse_strength")?;
                NoiseModel::Impulsive(
                    ImpulsiveNoiseParams::new(g, n.impulse_probability, strength).map_err(wrap("noise"))?,
                )
            }
            NoiseKind::AlphaStable => NoiseModel::AlphaStable(
                AlphaStableParams::new(n.alpha, n.beta, n.scale, n.location).map_err(wrap("noise"))?,
            ),
        })
    }

    pub fn specs(&self) -> Result<Vec<AlgorithmSpec>, ConfigError> {
        if self.algorithms.is_empty() {
            return Err(semantic("algorithms", "at least one algorithm is required"));
        }
        self.algorithms
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let field = format!("algorithms[{i}]");
                let kind: AlgorithmKind = entry
                    .name
                    .parse()
                    .map_err(|_| semantic(format!("{field}.name"), format!("unknown algorithm `{}`", entry.name)))?;
                let (mu, a, b) = kind.defaults();
                if !kind.uses_cutoffs() && (entry.a.is_some() || entry.b.is_some()) {
                    return Err(semantic(
                        field,
                        format!("{kind} takes no cut-offs; a and b apply to DLLCLMS, DQQCLMS and DLECLMS"),
                    ));
                }
                AlgorithmSpec::new(kind, entry.mu.unwrap_or(mu), entry.a.unwrap_or(a), entry.b.unwrap_or(b))
                    .map_err(|e| match e {
                        crate::Error::InvalidParameter { field: f, reason } => semantic(format!("{field}.{f}"), reason),
                        other => semantic(field, other.to_string()),
                    })
            })
            .collect()
    }

    pub fn unknown_system(&self) -> Result<UnknownSystem, ConfigError> {
        let sys = &self.system;
        let built = match sys.weight_rule {
            WeightRule::Explicit => UnknownSystem::new(sys.weights.clone().unwrap_or_default()),
            WeightRule::Uniform => {
                let seed = sys.seed.map_or(self.master_seed(), Ok)?;
                let mut rng = substream(seed, Purpose::System, 0, 0, 0);
                UnknownSystem::random(sys.taps, sys.weight_range[0], sys.weight_range[1], &mut rng)
            }
        };
        built.map_err(|e| semantic("system", strip(e)))
    }

    pub fn covariance_profile(&self) -> Result<CovarianceProfile, ConfigError> {
        let sig = &self.signal;
        let taps = self.system.taps;
        let built = match sig.profile {
            ProfileKind::Uniform => CovarianceProfile::uniform_scalar(taps, sig.variance),
            ProfileKind::PerNodeScalar => {
                let variances = match &sig.variances {
                    Some(v) => v.clone(),
                    None => {
                        let [lo, hi] = sig.variance_range;
                        let mut rng = substream(self.master_seed()?, Purpose::Variances, 0, 0, 0);
                        (0..self.network.nodes)
                            .map(|_| if lo == hi { lo } else { rng.random_range(lo..hi) })
                            .collect()
                    }
                };
                CovarianceProfile::per_node_scalar(taps, variances)
            }
            ProfileKind::PerTapDiagonal => CovarianceProfile::per_tap_diagonal(sig.diagonal.clone().unwrap_or_default()),
        };
        built.map_err(|e| semantic("signal", strip(e)))
    }

    pub fn network_spec(&self) -> NetworkSpec {
        let net = &self.network;
        NetworkSpec {
            nodes: net.nodes,
            rule: match net.rule {
                RuleKind::Probability => NetworkRule::Probability(net.param),
                RuleKind::Radius => NetworkRule::Radius(net.param),
            },
            options: GeneratorOptions {
                max_retries: net.max_retries,
                area: net.area,
            },
        }
    }

    pub fn resolve(&self) -> Result<ResolvedExperiment, ConfigError> {
        self.validate()?;
        let scenario = Scenario {
            network: self.network_spec(),
            system: self.unknown_system()?,
            profile: self.covariance_profile()?,
            noise: self.noise_model()?,
            iterations: self.run.iterations,
            trials: self.run.monte_carlo,
            master_seed: self.master_seed()?,
            topology_policy: match self.run.topology_per_trial {
                TopologyMode::Fixed => TopologyPolicy::Fixed,
                TopologyMode::Redraw => TopologyPolicy::Redraw,
            },
            exp_clamp: self.run.lec_exponent_clamp,
            initial: InitialEstimate::Zero,
        };
        Ok(ResolvedExperiment {
            scenario,
            specs: self.specs()?,
        })
    }

    /// The config with every default and the seed written out.
    pub fn echo(&self) -> String {
        let mut full = self.clone();
        if let Ok(specs) = self.specs() {
            full.algorithms = specs.into_iter().map(AlgorithmEntry::from).collect();
        }
        toml::to_string(&full).expect("config is serializable")
    }
}

fn check_seed(field: &str, seed: u64) -> Result<(), ConfigError> {
    if seed > i64::MAX as u64 {
        return Err(semantic(field, format!("must not exceed {}", i64::MAX)));
    }
    Ok(())
}

fn strip(e: crate::Error) -> String {
    match e {
        crate::Error::InvalidParameter { reason, .. } => reason,
        other => other.to_string(),
    }
}

fn hint_for(key: &str) -> Option<String> {
    match key {
        "gamma" | "delta" => Some("use `scale` for the dispersion and `location` for the shift".into()),
        "seed" => Some("use `run.master_seed` or `system.seed`".into()),
        "trials" => Some("use `run.monte_carlo`".into()),
        _ => None,
    }
}

fn translate(text: &str, e: &toml::de::Error) -> ConfigError {
    let message = e.message().to_owned();
    let offset = e.span().map_or(0, |s| s.start);
    if let Some(rest) = message.strip_prefix("unknown field `") {
        let name = rest.split('`').next().unwrap_or_default().to_owned();
        let key = match section_at(text, offset) {
            Some(section) => format!("{section}.{name}"),
            None => name.clone(),
        };
        return ConfigError::UnknownKey {
            hint: hint_for(&name),
            key,
        };
    }
    let (line, column) = line_column(text, offset);
    ConfigError::Syntax { line, column, message }
}

fn section_at(text: &str, offset: usize) -> Option<String> {
    text[..offset.min(text.len())]
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('['))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_owned())
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = ExperimentConfig::parse("[run]\nmaster_seed = 7\n", None).unwrap();
        assert_eq!(c.system.taps, 16);
        assert_eq!(c.network.nodes, 20);
        assert_eq!(c.run.monte_carlo, 20);
        assert_eq!(c.run.iterations, 2000);
        let specs = c.specs().unwrap();
        assert_eq!(specs.len(), 6);
        assert_eq!(specs[0], AlgorithmSpec::baseline(AlgorithmKind::Dlms, 0.35).unwrap());
    }

    #[test]
    fn seed_is_required_unless_overridden() {
        let err = ExperimentConfig::parse("", None).unwrap_err();
        assert!(err.to_string().contains("master_seed"));
        assert_eq!(ExperimentConfig::parse("", Some(3)).unwrap().master_seed().unwrap(), 3);
    }

    #[test]
    fn zero_step_is_a_semantic_error() {
        let text = "[run]\nmaster_seed = 1\n[[algorithms]]\nname = \"DQQCLMS\"\nmu = 0\n";
        let err = ExperimentConfig::parse(text, None).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { .. }));
        assert!(err.to_string().contains("mu must be positive"), "{err}");
        assert!(err.to_string().contains("algorithms[0].mu"));
    }

    #[test]
    fn gamma_suggests_scale_and_location() {
        let err = ExperimentConfig::parse("[noise]\ngamma = 0\n", Some(1)).unwrap_err();
        match &err {
            ConfigError::UnknownKey { key, hint } => {
                assert_eq!(key, "noise.gamma");
                let hint = hint.as_deref().unwrap();
                assert!(hint.contains("scale") && hint.contains("location"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ExperimentConfig::parse("[run]\nmaster_seed = = 1\n", None).unwrap_err();
        match err {
            ConfigError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn per_node_lists_are_checked() {
        let text = "[network]\nnodes = 3\n[noise]\nkind = \"gaussian\"\nsigma_g = [0.1, 0.2]\n";
        let err = ExperimentConfig::parse(text, Some(1)).unwrap_err();
        assert!(err.to_string().contains("noise.sigma_g"));
        let text = "[network]\nnodes = 2\n[noise]\nkind = \"gaussian\"\nsigma_g = [0.1, 0.2]\n";
        assert!(ExperimentConfig::parse(text, Some(1)).is_ok());
    }

    #[test]
    fn baselines_reject_cutoffs() {
        let text = "[[algorithms]]\nname = \"DSELMS\"\na = 2\n";
        assert!(ExperimentConfig::parse(text, Some(1)).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let text = "[network]\nnodes = 5\n[[algorithms]]\nname = \"dleclms\"\n[run]\nmaster_seed = 9\n";
        let c = ExperimentConfig::parse(text, None).unwrap();
        let echo = c.echo();
        let again = ExperimentConfig::parse(&echo, None).unwrap();
        assert_eq!(again.echo(), echo);
        assert_eq!(again.specs().unwrap(), c.specs().unwrap());
        let a = c.resolve().unwrap().scenario;
        let b = again.resolve().unwrap().scenario;
        assert_eq!(a.system, b.system);
        assert_eq!(a.profile, b.profile);
    }

    #[test]
    fn resolved_setup_is_seeded() {
        let a = ExperimentConfig::parse("", Some(1)).unwrap().resolve().unwrap().scenario;
        let b = ExperimentConfig::parse("", Some(1)).unwrap().resolve().unwrap().scenario;
        let c = ExperimentConfig::parse("", Some(2)).unwrap().resolve().unwrap().scenario;
        assert_eq!(a.system, b.system);
        assert_ne!(a.system, c.system);
        assert!(a.system.taps().iter().all(|t| (-1.0..1.0).contains(t)));
        match a.profile {
            CovarianceProfile::PerNodeScalar { variances, .. } => {
                assert_eq!(variances.len(), 20);
                assert!(variances.iter().all(|v| (0.5..1.5).contains(v)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_of_range_values_name_their_field() {
        let cases = [
            ("[network]\nparam = 1.5\n", "network.param"),
            ("[noise]\nalpha = 2.5\n", "noise"),
            ("[run]\niterations = 0\n", "run.iterations"),
            ("[signal]\nprofile = \"per_tap_diagonal\"\n", "signal.diagonal"),
        ];
        for (text, field) in cases {
            let err = ExperimentConfig::parse(text, Some(1)).unwrap_err();
            assert!(err.to_string().starts_with(field), "{text}: {err}");
        }
    }
}
