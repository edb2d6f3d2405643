use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{compute_metrics, run_scenario, DroneError, RunRecord, ScenarioConfig, Termination};

/// One run of a batch, condensed.
///
/// Metric fields are `None` when the run has no touchdowns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub termination: Termination,
    pub errors: Vec<DroneError>,
    pub rmse: Option<f64>,
    pub mean_error: Option<f64>,
    pub boundary_radius: Option<f64>,
    pub all_inside_footprint: Option<bool>,
    pub min_separation_pre_landing: Option<f64>,
    pub elections: usize,
    /// Wall-clock time of the run, seconds.
    pub runtime_s: f64,
}

/// Wall-clock runtime is not compared.
impl PartialEq for RunSummary {
    fn eq(&self, other: &Self) -> bool {
        self.scenario == other.scenario
            && self.seed == other.seed
            && self.termination == other.termination
            && self.errors == other.errors
            && self.rmse == other.rmse
            && self.mean_error == other.mean_error
            && self.boundary_radius == other.boundary_radius
            && self.all_inside_footprint == other.all_inside_footprint
            && self.min_separation_pre_landing == other.min_separation_pre_landing
            && self.elections == other.elections
    }
}

impl RunSummary {
    pub fn from_record(scenario: &str, record: &RunRecord, runtime_s: f64) -> Result<Self> {
        let metrics = match compute_metrics(record) {
            Ok(m) => Some(m),
            Err(Error::MetricsUnavailable) => None,
            Err(e) => return Err(e),
        };
        Ok(RunSummary {
            scenario: scenario.to_string(),
            seed: record.config.seed,
            termination: record.termination,
            errors: metrics.as_ref().map(|m| m.errors.clone()).unwrap_or_default(),
            rmse: metrics.as_ref().map(|m| m.rmse),
            mean_error: metrics.as_ref().map(|m| m.mean_error),
            boundary_radius: metrics.as_ref().map(|m| m.boundary_radius),
            all_inside_footprint: metrics.as_ref().map(|m| m.all_inside_footprint),
            min_separation_pre_landing: metrics.as_ref().map(|m| m.min_separation_pre_landing),
            elections: record.elections(),
            runtime_s,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BatchRun {
    pub summary: RunSummary,
    pub record: RunRecord,
}

/// Runs seeds `base_seed..base_seed + runs` in parallel; results are
/// ordered by seed.
pub fn run_batch_records(name: &str, config: &ScenarioConfig, runs: usize, base_seed: u64) -> Result<Vec<BatchRun>> {
    if runs == 0 {
        return Err(Error::config("runs must be at least 1"));
    }
    let last = base_seed
        .checked_add(runs as u64 - 1)
        .ok_or_else(|| Error::config(format!("seed range from {base_seed} overflows")))?;
    config.validate()?;
    (base_seed..=last)
        .into_par_iter()
        .map(|seed| {
            let c = ScenarioConfig { seed, ..config.clone() };
            let start = Instant::now();
            let record = run_scenario(&c)?;
            let runtime = start.elapsed().as_secs_f64();
            Ok(BatchRun { summary: RunSummary::from_record(name, &record, runtime)?, record })
        })
        .collect()
}

pub fn run_batch(name: &str, config: &ScenarioConfig, runs: usize, base_seed: u64) -> Result<Vec<RunSummary>> {
    Ok(run_batch_records(name, config, runs, base_seed)?.into_iter().map(|r| r.summary).collect())
}

/// Batch-level figures over the runs that have touchdowns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchAggregate {
    pub runs: usize,
    pub all_landed: usize,
    /// Mean over runs of the per-run mean error.
    pub mean_error: Option<f64>,
    /// Largest single touchdown error.
    pub max_error: Option<f64>,
    pub mean_rmse: Option<f64>,
    pub elections: usize,
}

pub fn aggregate(summaries: &[RunSummary]) -> BatchAggregate {
    let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let max_error = summaries
        .iter()
        .flat_map(|s| s.errors.iter().map(|e| e.error))
        .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
    BatchAggregate {
        runs: summaries.len(),
        all_landed: summaries.iter().filter(|s| s.termination == Termination::AllLanded).count(),
        mean_error: mean(summaries.iter().filter_map(|s| s.mean_error).collect()),
        max_error,
        mean_rmse: mean(summaries.iter().filter_map(|s| s.rmse).collect()),
        elections: summaries.iter().map(|s| s.elections).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{FaultEvent, FaultKind};

    #[test]
    fn single_run_equals_direct_composition() {
        let c = ScenarioConfig::default();
        let batch = run_batch("s", &c, 1, 3).unwrap();
        let record = run_scenario(&ScenarioConfig { seed: 3, ..c }).unwrap();
        let m = compute_metrics(&record).unwrap();
        assert_eq!(batch.len(), 1);
        let s = &batch[0];
        assert_eq!(s.seed, 3);
        assert_eq!(s.errors, m.errors);
        assert_eq!(s.rmse, Some(m.rmse));
        assert_eq!(s.boundary_radius, Some(m.boundary_radius));
        assert_eq!(s.termination, record.termination);
    }

    #[test]
    fn seeds_are_consecutive_and_sorted() {
        let c = ScenarioConfig { duration_max: 0.2, ..ScenarioConfig::default() };
        let seeds: Vec<u64> = run_batch("s", &c, 5, 10).unwrap().iter().map(|s| s.seed).collect();
        assert_eq!(seeds, vec![10, 11, 12, 13, 14]);
    }

    #[test]
    fn repeated_batches_match() {
        let c = ScenarioConfig::default();
        assert_eq!(run_batch("s", &c, 3, 0).unwrap(), run_batch("s", &c, 3, 0).unwrap());
    }

    #[test]
    fn bad_batches_are_rejected_up_front() {
        let c = ScenarioConfig::default();
        assert!(matches!(run_batch("s", &c, 0, 0), Err(Error::Config(_))));
        assert!(matches!(run_batch("s", &c, 2, u64::MAX), Err(Error::Config(_))));
        let bad = ScenarioConfig { dt: 0.0, ..c };
        assert!(matches!(run_batch("s", &bad, 3, 0), Err(Error::Config(_))));
    }

    #[test]
    fn aborted_run_has_no_metrics() {
        let faults = (0..3).map(|drone| FaultEvent { t: 0.5, drone, kind: FaultKind::CameraLoss }).collect();
        let c = ScenarioConfig { faults, ..ScenarioConfig::default() };
        let s = &run_batch("a", &c, 1, 0).unwrap()[0];
        assert_eq!(s.termination, Termination::Abort);
        assert!(s.errors.is_empty() && s.rmse.is_none());
    }

    #[test]
    fn aggregate_over_runs() {
        let mk = |seed, errs: &[f64]| RunSummary {
            scenario: "x".into(),
            seed,
            termination: Termination::AllLanded,
            errors: errs.iter().enumerate().map(|(drone, &error)| DroneError { drone, error }).collect(),
            rmse: Some(0.0),
            mean_error: Some(errs.iter().sum::<f64>() / errs.len() as f64),
            boundary_radius: errs.iter().copied().reduce(f64::max),
            all_inside_footprint: Some(true),
            min_separation_pre_landing: Some(1.0),
            elections: 1,
            runtime_s: 0.0,
        };
        let a = aggregate(&[mk(0, &[0.01, 0.03]), mk(1, &[0.04, 0.0])]);
        assert_eq!(a.runs, 2);
        assert_eq!(a.max_error, Some(0.04));
        assert!((a.mean_error.unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(a.elections, 2);
    }
}
