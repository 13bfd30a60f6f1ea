//! Network MSD, Monte-Carlo aggregation and the operation-count table.

mod complexity;
mod monte_carlo;

use serde::{Deserialize, Serialize};

use crate::algorithms::AlgorithmKind;
use crate::error::{check_len, Error, Result};

pub use complexity::{complexity_table, render_complexity_csv, render_complexity_table, ComplexityRow};
pub use monte_carlo::{
    monte_carlo, InitialEstimate, NetworkRule, NetworkSpec, Scenario, Simulation, TopologyPolicy, TrialRecord,
    TrialRun, DIVERGENCE_MSD,
};

/// Reported in place of `−∞` dB when the MSD underflows.
pub const ZERO_MSD_DB: f64 = -3000.0;
const ZERO_MSD_FLOOR: f64 = 1e-300;

/// `(1/N) Σ_n ‖W° − W_n‖²` for one trial at one iteration.
pub fn network_msd(estimates: &[Vec<f64>], truth: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::invalid("estimates", "needs at least one node"));
    }
    let mut total = 0.0;
    for w in estimates {
        check_len(truth.len(), w.len())?;
        total += squared_distance(w, truth);
    }
    Ok(total / estimates.len() as f64)
}

/// Same as [`network_msd`] over a node-major `N×M` block.
pub(crate) fn network_msd_flat(estimates: &[f64], truth: &[f64]) -> f64 {
    let m = truth.len();
    let nodes = estimates.len() / m;
    estimates.chunks(m).map(|w| squared_distance(w, truth)).sum::<f64>() / nodes as f64
}

fn squared_distance(w: &[f64], truth: &[f64]) -> f64 {
    w.iter().zip(truth).map(|(a, b)| (b - a) * (b - a)).sum()
}

/// `10·log10(msd)`, with [`ZERO_MSD_DB`] for vanishing values.
pub fn to_db(msd: f64) -> f64 {
    if msd < ZERO_MSD_FLOOR {
        ZERO_MSD_DB
    } else {
        10.0 * msd.log10()
    }
}

/// Number of trailing iterations treated as steady state (last 10%).
pub fn steady_state_window(len: usize) -> usize {
    len.div_ceil(10).max(1)
}

/// Mean of the last 10% of a linear MSD sequence, in dB.
pub fn steady_state_db(linear: &[f64]) -> f64 {
    if linear.is_empty() {
        return f64::NAN;
    }
    let window = steady_state_window(linear.len());
    let tail = &linear[linear.len() - window..];
    to_db(tail.iter().sum::<f64>() / window as f64)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Trial-averaged MSD learning curve of one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsdCurve {
    pub algorithm: AlgorithmKind,
    pub values_db: Vec<f64>,
    pub values_linear: Vec<f64>,
    /// Trials that entered the average.
    pub trials: usize,
    /// Trials excluded because they diverged.
    pub diverged_trials: usize,
}

impl MsdCurve {
    /// Averages linear MSD over the non-diverged trials (`None` entries),
    /// summing in trial order, then converts to dB.
    pub fn aggregate<'a, I>(algorithm: AlgorithmKind, trials: I) -> Result<Self>
    where
        I: IntoIterator<Item = Option<&'a [f64]>>,
    {
        let mut sums: Vec<CompensatedSum> = Vec::new();
        let mut used = 0usize;
        let mut diverged = 0usize;
        for trial in trials {
            let Some(curve) = trial else {
                diverged += 1;
                continue;
            };
            if used == 0 {
                sums = vec![CompensatedSum::default(); curve.len()];
            }
            check_len(sums.len(), curve.len())?;
            for (acc, &v) in sums.iter_mut().zip(curve) {
                acc.add(v);
            }
            used += 1;
        }
        if used == 0 {
            return Err(Error::AllDiverged {
                algorithm: algorithm.name(),
                trials: diverged,
            });
        }
        let values_linear: Vec<f64> = sums.iter().map(|s| s.value() / used as f64).collect();
        Ok(Self {
            algorithm,
            values_db: values_linear.iter().map(|&v| to_db(v)).collect(),
            values_linear,
            trials: used,
            diverged_trials: diverged,
        })
    }

    pub fn len(&self) -> usize {
        self.values_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_db.is_empty()
    }

    pub fn steady_state_db(&self) -> f64 {
        steady_state_db(&self.values_linear)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msd_definition() {
        let truth = [1.0, -1.0];
        assert_eq!(network_msd(&[truth.to_vec(), truth.to_vec()], &truth).unwrap(), 0.0);
        assert_eq!(network_msd(&[vec![0.0, -1.0]], &truth).unwrap(), 1.0);
        assert_eq!(to_db(1.0), 0.0);
        // squared deviations 1 and 3
        let w = [vec![0.0, -1.0], vec![1.0 - 3f64.sqrt(), -1.0]];
        assert!((network_msd(&w, &truth).unwrap() - 2.0).abs() < 1e-15);
        assert!(network_msd(&[vec![0.0]], &truth).is_err());
        assert!(network_msd(&[], &truth).is_err());
    }

    #[test]
    fn zero_msd_maps_to_sentinel() {
        assert_eq!(to_db(0.0), ZERO_MSD_DB);
        assert_eq!(to_db(1e-301), ZERO_MSD_DB);
        assert!((to_db(1e-3) + 30.0).abs() < 1e-12);
    }

    #[test]
    fn averaging_happens_before_log() {
        let a = [1.0, 100.0];
        let b = [100.0, 1.0];
        let c = MsdCurve::aggregate(AlgorithmKind::Dlms, [Some(&a[..]), Some(&b[..])]).unwrap();
        assert!((c.values_linear[0] - 50.5).abs() < 1e-12);
        assert!((c.values_db[0] - 10.0 * 50.5f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn duplicate_trials_match_single_trial() {
        let a = [0.3, 0.2, 0.1];
        let one = MsdCurve::aggregate(AlgorithmKind::Dlms, [Some(&a[..])]).unwrap();
        let two = MsdCurve::aggregate(AlgorithmKind::Dlms, [Some(&a[..]), Some(&a[..])]).unwrap();
        assert_eq!(one.values_db, two.values_db);
    }

    #[test]
    fn adding_the_average_changes_nothing() {
        let a = [0.37, 1.9, 1e-3];
        let b = [0.11, 2.4, 7e-3];
        let c = [0.5, 0.05, 2e-3];
        let base = MsdCurve::aggregate(AlgorithmKind::Dlms, [Some(&a[..]), Some(&b[..]), Some(&c[..])]).unwrap();
        let mean = base.values_linear.clone();
        let more = MsdCurve::aggregate(
            AlgorithmKind::Dlms,
            [Some(&a[..]), Some(&b[..]), Some(&c[..]), Some(&mean[..])],
        )
        .unwrap();
        for (x, y) in base.values_linear.iter().zip(&more.values_linear) {
            assert!((x - y).abs() <= 1e-12 * x.abs());
        }
    }

    #[test]
    fn diverged_trials_are_excluded_and_counted() {
        let a = [2.0, 1.0];
        let c = MsdCurve::aggregate(AlgorithmKind::Dselms, [None, Some(&a[..]), None]).unwrap();
        assert_eq!((c.trials, c.diverged_trials), (1, 2));
        assert_eq!(c.values_linear, vec![2.0, 1.0]);
        let err = MsdCurve::aggregate(AlgorithmKind::Dselms, [None, None]).unwrap_err();
        assert!(matches!(err, Error::AllDiverged { trials: 2, .. }));
    }

    #[test]
    fn steady_state_uses_last_tenth() {
        assert_eq!(steady_state_window(2000), 200);
        assert_eq!(steady_state_window(5), 1);
        let mut v = vec![100.0; 90];
        v.extend(vec![0.01; 10]);
        assert!((steady_state_db(&v) + 20.0).abs() < 1e-12);
    }
}
