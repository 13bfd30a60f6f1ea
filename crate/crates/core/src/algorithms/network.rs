use super::adapt::update_factor;
use super::AlgorithmSpec;
use crate::error::{check_len, Error, Result};
use crate::signals::dot;
use crate::topology::CombinationMatrix;

/// `W_n = Σ_{l∈N_n} c_{l,n} φ_l` for every node.
pub fn combine(intermediates: &[Vec<f64>], weights: &CombinationMatrix) -> Result<Vec<Vec<f64>>> {
    check_len(weights.node_count(), intermediates.len())?;
    let taps = intermediates.first().map_or(0, Vec::len);
    let mut flat = Vec::with_capacity(taps * intermediates.len());
    for phi in intermediates {
        check_len(taps, phi.len())?;
        flat.extend_from_slice(phi);
    }
    let mut out = vec![0.0; flat.len()];
    combine_into(&flat, taps, weights, &mut out);
    Ok(out.chunks(taps.max(1)).map(<[f64]>::to_vec).take(intermediates.len()).collect())
}

/// Evaluated as `φ_n + Σ_{l≠n} c_{l,n}(φ_l − φ_n)`, equal to the plain
/// weighted sum for column-stochastic weights and exact under consensus.
fn combine_into(intermediates: &[f64], taps: usize, weights: &CombinationMatrix, out: &mut [f64]) {
    for (n, w) in out.chunks_mut(taps).enumerate() {
        let own = &intermediates[n * taps..(n + 1) * taps];
        w.copy_from_slice(own);
        for &(l, c) in weights.column(n) {
            if l == n {
                continue;
            }
            let phi = &intermediates[l * taps..(l + 1) * taps];
            for ((wi, pi), oi) in w.iter_mut().zip(phi).zip(own) {
                *wi += c * (pi - oi);
            }
        }
    }
}

/// What one network iteration did besides moving the estimates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepReport {
    /// Nodes whose LEC exponent was saturated this iteration.
    pub clamped: usize,
}

/// Estimates of all agents, stored node-major.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    nodes: usize,
    taps: usize,
    estimates: Vec<f64>,
    intermediates: Vec<f64>,
    errors: Vec<f64>,
    iteration: usize,
}

impl NetworkState {
    /// All agents start at `W_{n,−1} = 0`.
    pub fn zeros(nodes: usize, taps: usize) -> Self {
        Self {
            nodes,
            taps,
            estimates: vec![0.0; nodes * taps],
            intermediates: vec![0.0; nodes * taps],
            errors: vec![0.0; nodes],
            iteration: 0,
        }
    }

    pub fn from_estimates(estimates: &[Vec<f64>]) -> Result<Self> {
        let taps = estimates.first().map_or(0, Vec::len);
        let mut state = Self::zeros(estimates.len(), taps);
        for (n, w) in estimates.iter().enumerate() {
            check_len(taps, w.len())?;
            state.estimates[n * taps..(n + 1) * taps].copy_from_slice(w);
        }
        Ok(state)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn estimate(&self, node: usize) -> &[f64] {
        &self.estimates[node * self.taps..(node + 1) * self.taps]
    }

    /// Node-major `N×M` block of all estimates.
    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }

    /// Pre-adaptation errors `e_n(i)` of the latest iteration.
    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    /// One adapt-then-combine step.
    ///
    /// `regressors` is node-major `N×M`, `desired` has one entry per node.
    /// A non-finite estimate yields [`Error::Diverged`]; the state is then
    /// left as computed and should be discarded.
    pub fn atc_iteration(
        &mut self,
        weights: &CombinationMatrix,
        spec: &AlgorithmSpec,
        regressors: &[f64],
        desired: &[f64],
        exp_clamp: f64,
    ) -> Result<StepReport> {
        check_len(self.nodes, weights.node_count())?;
        check_len(self.nodes * self.taps, regressors.len())?;
        check_len(self.nodes, desired.len())?;

        let m = self.taps;
        let mut report = StepReport::default();
        for n in 0..self.nodes {
            let w = &self.estimates[n * m..(n + 1) * m];
            let x = &regressors[n * m..(n + 1) * m];
            let e = desired[n] - dot(w, x);
            let update = update_factor(spec, e, exp_clamp);
            report.clamped += usize::from(update.clamped);
            self.errors[n] = e;
            for ((phi, wi), xi) in self.intermediates[n * m..(n + 1) * m].iter_mut().zip(w).zip(x) {
                *phi = wi + update.factor * xi;
            }
        }
        combine_into(&self.intermediates, m, weights, &mut self.estimates);
        self.iteration += 1;

        if self.estimates.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged {
                algorithm: spec.name(),
                iteration: self.iteration - 1,
            });
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{AgentState, AlgorithmKind, DEFAULT_EXP_CLAMP};
    use crate::rng::{substream, Purpose};
    use crate::topology::{build_probability_graph, uniform_combination, NetworkTopology};
    use rand::Rng;

    fn complete(n: usize) -> CombinationMatrix {
        let edges: Vec<_> = (0..n).flat_map(|l| (l + 1..n).map(move |k| (l, k))).collect();
        uniform_combination(&NetworkTopology::from_edges(n, &edges).unwrap())
    }

    #[test]
    fn identical_intermediates_are_preserved() {
        let t = build_probability_graph(8, 0.4, 3).unwrap();
        let c = uniform_combination(&t);
        let v = vec![0.3, -1.2, 7.0];
        let out = combine(&vec![v.clone(); 8], &c).unwrap();
        for w in out {
            for (a, b) in w.iter().zip(&v) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_node_combination_is_identity() {
        let c = uniform_combination(&NetworkTopology::from_edges(1, &[]).unwrap());
        assert_eq!(combine(&[vec![1.0, 2.0]], &c).unwrap(), vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn complete_graph_averages() {
        let out = combine(&[vec![1.0], vec![2.0], vec![6.0]], &complete(3)).unwrap();
        for w in out {
            assert!((w[0] - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn combine_checks_dimensions() {
        assert!(combine(&[vec![1.0], vec![2.0]], &complete(3)).is_err());
        assert!(combine(&[vec![1.0], vec![2.0, 3.0], vec![1.0]], &complete(3)).is_err());
    }

    #[test]
    fn noiseless_truth_is_a_fixed_point() {
        let t = build_probability_graph(6, 0.5, 1).unwrap();
        let c = uniform_combination(&t);
        let truth = [0.4, -0.9, 0.1];
        let mut rng = substream(9, Purpose::User, 0, 0, 0);
        for kind in AlgorithmKind::ALL {
            let spec = AlgorithmSpec::with_defaults(kind);
            let mut state = NetworkState::from_estimates(&vec![truth.to_vec(); 6]).unwrap();
            for _ in 0..20 {
                let x: Vec<f64> = (0..18).map(|_| rng.random_range(-2.0..2.0)).collect();
                let d: Vec<f64> = x.chunks(3).map(|xn| dot(&truth, xn)).collect();
                state.atc_iteration(&c, &spec, &x, &d, DEFAULT_EXP_CLAMP).unwrap();
                // d is computed with the same dot, so errors are exactly zero.
                assert!(state.errors().iter().all(|&e| e == 0.0), "{kind}");
                for n in 0..6 {
                    assert_eq!(state.estimate(n), &truth[..], "{kind}");
                }
            }
        }
    }

    #[test]
    fn single_node_network_is_the_plain_filter() {
        let c = complete(1);
        let mut rng = substream(10, Purpose::User, 0, 0, 0);
        for kind in AlgorithmKind::ALL {
            let spec = AlgorithmSpec::with_defaults(kind);
            let mut net = NetworkState::zeros(1, 4);
            let mut agent = AgentState::zeros(4);
            for _ in 0..50 {
                let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
                let d = rng.random_range(-1.0..1.0);
                net.atc_iteration(&c, &spec, &x, &[d], DEFAULT_EXP_CLAMP).unwrap();
                agent.adapt(&spec, &x, d).unwrap();
                agent.estimate = agent.intermediate.clone();
                assert_eq!(net.estimate(0), &agent.estimate[..]);
            }
        }
    }

    #[test]
    fn two_node_lms_step_by_hand() {
        let c = complete(2);
        let spec = AlgorithmSpec::baseline(AlgorithmKind::Dlms, 0.5).unwrap();
        let mut state = NetworkState::from_estimates(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let x = [1.0, 2.0, 3.0, -1.0];
        let d = [4.0, 0.5];
        state.atc_iteration(&c, &spec, &x, &d, DEFAULT_EXP_CLAMP).unwrap();
        // node 0: e = 4 − 1 = 3,   φ0 = (1 + 1.5, 0 + 3)    = (2.5, 3)
        // node 1: e = 0.5 + 2 = 2.5, φ1 = (0 + 3.75, 2 − 1.25) = (3.75, 0.75)
        assert_eq!(state.errors(), &[3.0, 2.5]);
        let expected = [(2.5 + 3.75) / 2.0, (3.0 + 0.75) / 2.0];
        for n in 0..2 {
            for (a, b) in state.estimate(n).iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-15 * b.abs());
            }
        }
    }

    #[test]
    fn divergence_is_reported_not_panicked() {
        let c = complete(2);
        let spec = AlgorithmSpec::baseline(AlgorithmKind::Dlms, 1.0).unwrap();
        let mut state = NetworkState::zeros(2, 1);
        let err = state
            .atc_iteration(&c, &spec, &[1e200, 1e200], &[1e200, 1e200], 50.0)
            .unwrap_err();
        assert!(matches!(err, Error::Diverged { iteration: 0, .. }));
    }

    #[test]
    fn combination_does_not_expand_max_norm() {
        let mut rng = substream(11, Purpose::User, 0, 0, 0);
        for seed in 0..20 {
            let c = uniform_combination(&build_probability_graph(10, 0.3, seed).unwrap());
            let phis: Vec<Vec<f64>> = (0..10)
                .map(|_| (0..3).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let max_in = phis.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            let out = combine(&phis, &c).unwrap();
            let max_out = out.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(max_out <= max_in + 1e-12);
        }
    }
}
