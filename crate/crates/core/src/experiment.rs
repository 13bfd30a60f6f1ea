//! Running a configured experiment and turning it into artifacts.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::algorithms::AlgorithmSpec;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::metrics::{MsdCurve, Simulation, TopologyPolicy};
use crate::plot::render_svg;
use crate::signals::CovarianceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Complete,
    /// At least one algorithm diverged in every trial.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub label: String,
    pub name: &'static str,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub trials_used: usize,
    pub diverged_trials: usize,
    pub clamp_events: u64,
    /// `None` when every trial diverged.
    pub steady_state_db: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialChecksum {
    pub trial: usize,
    pub checksum: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub version: &'static str,
    pub status: RunStatus,
    /// The fully resolved config, re-runnable as is.
    pub config: String,
    pub master_seed: u64,
    pub system: Vec<f64>,
    /// Regressor variance per node and tap.
    pub variances: Vec<Vec<f64>>,
    /// One edge list for a fixed topology, one per trial otherwise.
    pub topologies: Vec<String>,
    pub algorithms: Vec<AlgorithmSummary>,
    pub checksums: Vec<TrialChecksum>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub csv: String,
    pub manifest: RunManifest,
    /// One entry per configured algorithm; `None` when all trials diverged.
    pub curves: Vec<Option<MsdCurve>>,
    pub labels: Vec<String>,
}

impl RunOutput {
    pub fn status(&self) -> RunStatus {
        self.manifest.status
    }

    pub fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("manifest is serializable");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv`, `<stem>.manifest.json` and optionally
    /// `<stem>.svg` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str, svg: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let csv = dir.join(format!("{stem}.csv"));
        fs::write(&csv, &self.csv)?;
        written.push(csv);
        let manifest = dir.join(format!("{stem}.manifest.json"));
        fs::write(&manifest, self.manifest_json())?;
        written.push(manifest);
        if svg {
            let path = dir.join(format!("{stem}.svg"));
            fs::write(&path, render_svg(&self.csv)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// CSV labels: the algorithm name, disambiguated by parameters when the
/// same algorithm is configured more than once.
pub fn series_labels(specs: &[AlgorithmSpec]) -> Vec<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for s in specs {
        *counts.entry(s.name()).or_default() += 1;
    }
    specs
        .iter()
        .map(|s| {
            if counts[s.name()] == 1 {
                s.name().to_owned()
            } else if s.kind.uses_cutoffs() {
                format!("{} mu={} a={} b={}", s.name(), s.mu, s.a, s.b)
            } else {
                format!("{} mu={}", s.name(), s.mu)
            }
        })
        .collect()
}

fn variance_table(profile: &CovarianceProfile, nodes: usize) -> Vec<Vec<f64>> {
    (0..nodes)
        .map(|n| (0..profile.taps()).map(|t| profile.variance(n, t)).collect())
        .collect()
}

fn render_csv(labels: &[String], curves: &[Option<MsdCurve>], iterations: usize) -> String {
    let mut out = String::with_capacity(iterations * labels.len() * 24);
    out.push_str("iteration,algorithm,msd_db\n");
    for i in 0..iterations {
        for (label, curve) in labels.iter().zip(curves) {
            match curve {
                Some(c) => {
                    let _ = writeln!(out, "{i},{label},{:.6}", c.values_db[i]);
                }
                None => {
                    let _ = writeln!(out, "{i},{label},inf");
                }
            }
        }
    }
    out
}

/// Runs every configured algorithm on shared per-trial data.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let resolved = config.resolve()?;
    let scenario = &resolved.scenario;
    let specs = &resolved.specs;
    let sim: Simulation = scenario.simulate(specs)?;
    let labels = series_labels(specs);

    let mut curves = Vec::with_capacity(specs.len());
    let mut summaries = Vec::with_capacity(specs.len());
    for (k, spec) in specs.iter().enumerate() {
        let curve = match sim.curve(k) {
            Ok(c) => Some(c),
            Err(Error::AllDiverged { .. }) => None,
            Err(e) => return Err(e),
        };
        summaries.push(AlgorithmSummary {
            label: labels[k].clone(),
            name: spec.name(),
            mu: spec.mu,
            a: spec.a,
            b: spec.b,
            trials_used: curve.as_ref().map_or(0, |c| c.trials),
            diverged_trials: sim.diverged_trials(k),
            clamp_events: sim.clamp_events(k),
            steady_state_db: curve.as_ref().map(MsdCurve::steady_state_db),
        });
        curves.push(curve);
    }

    let topologies = match scenario.topology_policy {
        TopologyPolicy::Fixed => vec![scenario.topology(0)?.to_edge_list()],
        TopologyPolicy::Redraw => (0..scenario.trials)
            .map(|t| scenario.topology(t).map(|top| top.to_edge_list()))
            .collect::<Result<_>>()?,
    };
    let status = if curves.iter().any(Option::is_none) {
        RunStatus::Partial
    } else {
        RunStatus::Complete
    };
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        status,
        config: config.echo(),
        master_seed: scenario.master_seed,
        system: scenario.system.taps().to_vec(),
        variances: variance_table(&scenario.profile, scenario.network.nodes),
        topologies,
        algorithms: summaries,
        checksums: sim
            .trials
            .iter()
            .map(|t| TrialChecksum {
                trial: t.trial,
                checksum: format!("{:016x}", t.checksum),
            })
            .collect(),
    };
    Ok(RunOutput {
        csv: render_csv(&labels, &curves, scenario.iterations),
        manifest,
        curves,
        labels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    A,
    B,
    Mu,
}

impl SweepParam {
    fn applies_to(self, spec: &AlgorithmSpec) -> bool {
        match self {
            SweepParam::Mu => true,
            SweepParam::A | SweepParam::B => spec.kind.uses_cutoffs(),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::Mu => "mu",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(SweepParam::A),
            "b" => Ok(SweepParam::B),
            "mu" => Ok(SweepParam::Mu),
            other => Err(Error::invalid("param", format!("expected a, b or mu, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub algorithm: String,
    /// Mean of the last 10% of the curve; `+∞` when every trial diverged.
    pub final_msd_db: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub param: SweepParam,
    pub runs: Vec<(f64, RunOutput)>,
    pub rows: Vec<SweepRow>,
}

impl SweepOutput {
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("value,algorithm,final_msd_db\n");
        for r in &self.rows {
            if r.final_msd_db.is_finite() {
                let _ = writeln!(out, "{},{},{:.6}", r.value, r.algorithm, r.final_msd_db);
            } else {
                let _ = writeln!(out, "{},{},inf", r.value, r.algorithm);
            }
        }
        out
    }

    /// Per swept algorithm, the value with the lowest final MSD (first one on
    /// ties). Algorithms that diverged at every value are left out.
    pub fn minimizers(&self) -> Vec<(String, f64, f64)> {
        let mut best: Vec<(String, f64, f64)> = Vec::new();
        for r in &self.rows {
            match best.iter_mut().find(|(name, ..)| *name == r.algorithm) {
                Some(entry) => {
                    if r.final_msd_db < entry.2 {
                        entry.1 = r.value;
                        entry.2 = r.final_msd_db;
                    }
                }
                None => best.push((r.algorithm.clone(), r.value, r.final_msd_db)),
            }
        }
        best.retain(|(_, _, db)| db.is_finite());
        best
    }

    /// Writes one run per value plus `<stem>_summary.csv`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (value, run) in &self.runs {
            written.extend(run.write(dir, &format!("{stem}_{}_{value}", self.param), false)?);
        }
        let summary = dir.join(format!("{stem}_summary.csv"));
        fs::write(&summary, self.summary_csv())?;
        written.push(summary);
        Ok(written)
    }

    pub fn any_partial(&self) -> bool {
        self.runs.iter().any(|(_, r)| r.status() == RunStatus::Partial)
    }
}

/// Repeats [`run`] once per value with `param` replaced on every algorithm
/// it applies to. Data streams are identical across values.
pub fn sweep(config: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<SweepOutput> {
    if values.is_empty() {
        return Err(Error::invalid("values", "sweep needs at least one value"));
    }
    let specs = config.specs()?;
    let swept: Vec<bool> = specs.iter().map(|s| param.applies_to(s)).collect();
    if !swept.iter().any(|&b| b) {
        return Err(Error::invalid(
            "param",
            format!("`{param}` does not apply to any configured algorithm"),
        ));
    }
    let mut runs = Vec::with_capacity(values.len());
    let mut rows = Vec::new();
    for &value in values {
        let mut cfg = config.clone();
        for (entry, &on) in cfg.algorithms.iter_mut().zip(&swept) {
            if on {
                match param {
                    SweepParam::A => entry.a = Some(value),
                    SweepParam::B => entry.b = Some(value),
                    SweepParam::Mu => entry.mu = Some(value),
                }
            }
        }
        let out = run(&cfg)?;
        for ((label, summary), &on) in out.labels.iter().zip(&out.manifest.algorithms).zip(&swept) {
            if on {
                rows.push(SweepRow {
                    value,
                    algorithm: label.clone(),
                    final_msd_db: summary.steady_state_db.unwrap_or(f64::INFINITY),
                });
            }
        }
        runs.push((value, out));
    }
    Ok(SweepOutput { param, runs, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(extra: &str) -> ExperimentConfig {
        let text = format!(
            "[network]\nnodes = 5\nparam = 0.6\n[system]\ntaps = 3\n[noise]\nkind = \"gaussian\"\nsigma_g = 0.1\n\
             [run]\niterations = 40\nmonte_carlo = 3\nmaster_seed = 11\n{extra}"
        );
        ExperimentConfig::parse(&text, None).unwrap()
    }

    #[test]
    fn csv_shape_single_iteration() {
        let text = "[run]\nmaster_seed = 1\niterations = 1\nmonte_carlo = 1\n";
        let out = run(&ExperimentConfig::parse(text, None).unwrap()).unwrap();
        assert_eq!(out.csv.lines().count(), 1 + 6);
        assert_eq!(out.csv.lines().next().unwrap(), "iteration,algorithm,msd_db");
    }

    #[test]
    fn rows_are_iteration_major() {
        let out = run(&small("")).unwrap();
        let lines: Vec<_> = out.csv.lines().skip(1).take(7).collect();
        assert!(lines[0].starts_with("0,DLMS,"));
        assert!(lines[5].starts_with("0,DLECLMS,"));
        assert!(lines[6].starts_with("1,DLMS,"));
        assert_eq!(out.csv.lines().count(), 1 + 40 * 6);
        assert_eq!(out.status(), RunStatus::Complete);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let a = run(&small("")).unwrap();
        let b = run(&small("")).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.manifest_json(), b.manifest_json());
    }

    #[test]
    fn manifest_config_reproduces_the_run() {
        let a = run(&small("")).unwrap();
        let again = ExperimentConfig::parse(&a.manifest.config, None).unwrap();
        assert_eq!(run(&again).unwrap().csv, a.csv);
        assert_eq!(a.manifest.checksums.len(), 3);
        assert_eq!(a.manifest.system.len(), 3);
        assert_eq!(a.manifest.variances.len(), 5);
        assert_eq!(a.manifest.topologies.len(), 1);
    }

    #[test]
    fn fully_diverged_algorithm_marks_partial() {
        let cfg = small("[[algorithms]]\nname = \"DLMS\"\nmu = 50\n[[algorithms]]\nname = \"DSELMS\"\n");
        let out = run(&cfg).unwrap();
        assert_eq!(out.status(), RunStatus::Partial);
        assert!(out.csv.lines().nth(1).unwrap().ends_with(",DLMS,inf"));
        assert_eq!(out.manifest.algorithms[0].diverged_trials, 3);
        assert_eq!(out.manifest.algorithms[0].steady_state_db, None);
        assert!(out.manifest_json().contains("\"status\": \"partial\""));
    }

    #[test]
    fn duplicate_algorithms_get_distinct_labels() {
        let specs = [
            AlgorithmSpec::baseline(crate::AlgorithmKind::Dlms, 0.1).unwrap(),
            AlgorithmSpec::baseline(crate::AlgorithmKind::Dlms, 0.2).unwrap(),
        ];
        assert_eq!(series_labels(&specs), vec!["DLMS mu=0.1", "DLMS mu=0.2"]);
    }

    #[test]
    fn single_value_sweep_matches_run() {
        let cfg = small("[[algorithms]]\nname = \"DLECLMS\"\na = 0.32\n");
        let sw = sweep(&cfg, SweepParam::A, &[0.32]).unwrap();
        let plain = run(&cfg).unwrap();
        assert_eq!(sw.runs[0].1.csv, plain.csv);
        assert_eq!(sw.rows[0].final_msd_db, plain.manifest.algorithms[0].steady_state_db.unwrap());
        assert!(sw.summary_csv().starts_with("value,algorithm,final_msd_db\n0.32,DLECLMS,"));
    }

    #[test]
    fn sweep_reports_the_measured_minimizer() {
        let cfg = small("[[algorithms]]\nname = \"DQQCLMS\"\na = 1\nb = 1\n");
        let sw = sweep(&cfg, SweepParam::Mu, &[0.001, 0.05, 50.0]).unwrap();
        let best = sw.minimizers();
        assert_eq!(best.len(), 1);
        let min = sw.rows.iter().map(|r| r.final_msd_db).fold(f64::INFINITY, f64::min);
        assert_eq!(best[0].2, min);
        assert_eq!(sw.rows[2].final_msd_db, f64::INFINITY);
        assert!(sw.any_partial());
    }

    #[test]
    fn sweep_argument_errors() {
        let cfg = small("[[algorithms]]\nname = \"DLMS\"\n");
        assert!(sweep(&cfg, SweepParam::A, &[1.0]).is_err());
        assert!(sweep(&cfg, SweepParam::Mu, &[]).is_err());
        assert!(sweep(&cfg, SweepParam::Mu, &[-1.0]).is_err());
        assert!("gamma".parse::<SweepParam>().is_err());
    }

    #[test]
    fn artifacts_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&small("")).unwrap();
        let files = out.write(dir.path(), "exp", true).unwrap();
        assert_eq!(files.len(), 3);
        assert!(fs::read_to_string(dir.path().join("exp.svg")).unwrap().starts_with("<svg"));
    }
}
