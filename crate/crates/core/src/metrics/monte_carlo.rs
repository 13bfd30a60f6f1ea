//! Monte-Carlo driver.
//!
//! Within a trial every algorithm sees the same topology, regressors and
//! noise: data for iteration `i` is generated once and fed to all live
//! algorithms in lockstep. Regressor and noise draws for `(trial, node, i)`
//! come from their own substreams, so the data of a trial does not depend on
//! which algorithms are run or on thread scheduling.

use rayon::prelude::*;

use super::{network_msd_flat, MsdCurve};
use crate::algorithms::{AlgorithmSpec, NetworkState};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::rng::{derive_u64, substream, Purpose};
use crate::signals::{measure, CovarianceProfile, UnknownSystem};
use crate::topology::{
    build_probability_graph_with, build_radius_graph_with, uniform_combination, GeneratorOptions, NetworkTopology,
};

/// Network MSD above this (+100 dB) marks a trial as diverged.
pub const DIVERGENCE_MSD: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NetworkRule {
    Probability(f64),
    Radius(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkSpec {
    pub nodes: usize,
    pub rule: NetworkRule,
    pub options: GeneratorOptions,
}

impl NetworkSpec {
    pub fn build(&self, seed: u64) -> Result<NetworkTopology> {
        match self.rule {
            NetworkRule::Probability(p) => build_probability_graph_with(self.nodes, p, seed, &self.options),
            NetworkRule::Radius(r) => build_radius_graph_with(self.nodes, r, seed, &self.options),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyPolicy {
    /// One topology for all trials.
    Fixed,
    /// A fresh topology per trial.
    Redraw,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitialEstimate {
    #[default]
    Zero,
    /// Start every agent at `W°`.
    Truth,
}

/// Everything needed to simulate, independent of the algorithms under test.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub network: NetworkSpec,
    pub system: UnknownSystem,
    pub profile: CovarianceProfile,
    pub noise: NoiseModel,
    pub iterations: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub topology_policy: TopologyPolicy,
    pub exp_clamp: f64,
    pub initial: InitialEstimate,
}

impl Scenario {
    /// Seed handed to the topology generator for `trial`.
    pub fn topology_seed(&self, trial: usize) -> u64 {
        let slot = match self.topology_policy {
            TopologyPolicy::Fixed => 0,
            TopologyPolicy::Redraw => trial as u64 + 1,
        };
        derive_u64(self.master_seed, Purpose::Topology, slot, 0, 0)
    }

    pub fn topology(&self, trial: usize) -> Result<NetworkTopology> {
        self.network.build(self.topology_seed(trial))
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::invalid("iterations", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("monte_carlo", "must be at least 1"));
        }
        if self.profile.taps() != self.system.len() {
            return Err(Error::DimensionMismatch {
                expected: self.system.len(),
                actual: self.profile.taps(),
            });
        }
        if let Some(nodes) = self.profile.node_count() {
            if nodes != self.network.nodes {
                return Err(Error::DimensionMismatch {
                    expected: self.network.nodes,
                    actual: nodes,
                });
            }
        }
        Ok(())
    }

    /// Runs every trial for all `specs`. Trials run in parallel; results are
    /// kept in trial order.
    pub fn simulate(&self, specs: &[AlgorithmSpec]) -> Result<Simulation> {
        self.validate()?;
        let fixed = match self.topology_policy {
            TopologyPolicy::Fixed => Some(self.topology(0)?),
            TopologyPolicy::Redraw => None,
        };
        let trials = (0..self.trials)
            .into_par_iter()
            .map(|t| {
                let topology = match &fixed {
                    Some(top) => top.clone(),
                    None => self.topology(t)?,
                };
                Ok(self.run_trial(t, &topology, specs))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Simulation {
            specs: specs.to_vec(),
            trials,
        })
    }

    fn run_trial(&self, trial: usize, topology: &NetworkTopology, specs: &[AlgorithmSpec]) -> TrialRecord {
        let nodes = self.network.nodes;
        let taps = self.system.len();
        let weights = uniform_combination(topology);
        let truth = self.system.taps();

        let mut states: Vec<NetworkState> = specs
            .iter()
            .map(|_| match self.initial {
                InitialEstimate::Zero => NetworkState::zeros(nodes, taps),
                InitialEstimate::Truth => {
                    NetworkState::from_estimates(&vec![truth.to_vec(); nodes]).expect("uniform lengths")
                }
            })
            .collect();
        let mut runs: Vec<TrialRun> = specs
            .iter()
            .map(|_| TrialRun {
                msd: Vec::with_capacity(self.iterations),
                diverged_at: None,
                clamp_events: 0,
            })
            .collect();

        let mut regressors = vec![0.0; nodes * taps];
        let mut desired = vec![0.0; nodes];
        let mut checksum = Fnv64::default();
        let t = trial as u64;

        for i in 0..self.iterations {
            for n in 0..nodes {
                let x = &mut regressors[n * taps..(n + 1) * taps];
                let mut rng = substream(self.master_seed, Purpose::Regressor, t, n as u64, i as u64);
                self.profile
                    .generate_regressor_into(n, &mut rng, x)
                    .expect("validated profile");
                let mut rng = substream(self.master_seed, Purpose::Noise, t, n as u64, i as u64);
                let v = self.noise.sample(n, &mut rng);
                desired[n] = measure(&self.system, x, v).expect("validated lengths");
                x.iter().for_each(|xi| checksum.write_f64(*xi));
                checksum.write_f64(v);
            }

            for ((spec, state), run) in specs.iter().zip(&mut states).zip(&mut runs) {
                if run.diverged_at.is_some() {
                    continue;
                }
                match state.atc_iteration(&weights, spec, &regressors, &desired, self.exp_clamp) {
                    Ok(report) => {
                        run.clamp_events += report.clamped as u64;
                        let msd = network_msd_flat(state.estimates(), truth);
                        if msd.is_finite() && msd <= DIVERGENCE_MSD {
                            run.msd.push(msd);
                        } else {
                            run.diverged_at = Some(i);
                        }
                    }
                    Err(_) => run.diverged_at = Some(i),
                }
            }
        }

        TrialRecord {
            trial,
            checksum: checksum.finish(),
            runs,
        }
    }
}

/// FNV-1a over the bit patterns of the data a trial consumed.
#[derive(Clone, Copy, Debug)]
struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Self {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv64 {
    fn write_f64(&mut self, v: f64) {
        for byte in v.to_bits().to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn finish(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRun {
    /// Linear network MSD per iteration, truncated at divergence.
    pub msd: Vec<f64>,
    pub diverged_at: Option<usize>,
    pub clamp_events: u64,
}

impl TrialRun {
    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    /// Steady-state MSD in dB, `+∞` for a diverged trial.
    pub fn steady_state_db(&self) -> f64 {
        if self.diverged() {
            f64::INFINITY
        } else {
            super::steady_state_db(&self.msd)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Checksum of the regressor and noise streams of this trial.
    pub checksum: u64,
    /// One run per algorithm, in the order given to [`Scenario::simulate`].
    pub runs: Vec<TrialRun>,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub specs: Vec<AlgorithmSpec>,
    pub trials: Vec<TrialRecord>,
}

impl Simulation {
    pub fn curve(&self, algorithm: usize) -> Result<MsdCurve> {
        MsdCurve::aggregate(
            self.specs[algorithm].kind,
            self.trials.iter().map(|t| {
                let run = &t.runs[algorithm];
                (!run.diverged()).then_some(run.msd.as_slice())
            }),
        )
    }

    pub fn diverged_trials(&self, algorithm: usize) -> usize {
        self.trials.iter().filter(|t| t.runs[algorithm].diverged()).count()
    }

    pub fn clamp_events(&self, algorithm: usize) -> u64 {
        self.trials.iter().map(|t| t.runs[algorithm].clamp_events).sum()
    }

    /// Median over trials of the per-trial steady-state MSD (dB).
    pub fn median_steady_state_db(&self, algorithm: usize) -> f64 {
        let mut values: Vec<f64> = self.trials.iter().map(|t| t.runs[algorithm].steady_state_db()).collect();
        values.sort_by(f64::total_cmp);
        let k = values.len();
        if k % 2 == 1 {
            values[k / 2]
        } else {
            0.5 * (values[k / 2 - 1] + values[k / 2])
        }
    }

    pub fn checksums(&self) -> Vec<u64> {
        self.trials.iter().map(|t| t.checksum).collect()
    }
}

/// Monte-Carlo learning curve of a single algorithm.
pub fn monte_carlo(scenario: &Scenario, spec: &AlgorithmSpec) -> Result<MsdCurve> {
    scenario.simulate(std::slice::from_ref(spec))?.curve(0)
}
