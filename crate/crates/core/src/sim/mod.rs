//! Monte Carlo driver: seeded trials per sweep point, mean and standard
//! deviation of the sum-DoF per partitioning method, CSV and JSON output.

mod config;
mod output;
mod trial;

use serde::Serialize;

pub use config::{Density, ExperimentConfig, Method, PointConfig, SweepVar, DEFAULT_TRIALS};
pub use output::{emit_results, format_sig, write_csv, write_json, OutputFormat};
pub use trial::{
    build_network, evaluate, partition_profiles, run_trial, trial_seed, trial_symbols,
    MethodOutcome, Network, TrialResult,
};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub sweep_var: SweepVar,
    pub sweep_value: f64,
    pub method: Method,
    pub mean_sum_dof: f64,
    /// Population standard deviation over trials.
    pub std_sum_dof: f64,
    #[serde(rename = "mean_K")]
    pub mean_users: f64,
    /// Trials with a defined sum-DoF (at least one reachable user).
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub sweep_value: f64,
    pub aggregates: Vec<AggregateResult>,
    pub trials: Vec<TrialResult>,
}

/// Population mean and standard deviation; `(NaN, NaN)` for no samples.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn run_trials(config: &ExperimentConfig, point: &PointConfig) -> Result<Vec<TrialResult>> {
    let one = |i: usize| {
        let seed = trial_seed(config.seed, i);
        run_trial(point, &config.methods, config.verify_decode, seed).map_err(|e| Error::Trial {
            trial: i,
            seed,
            source: Box::new(e),
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..config.trials).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..config.trials).map(one).collect()
    }
}

pub fn run_point(config: &ExperimentConfig, value: f64) -> Result<PointResult> {
    let point = config.point(value)?;
    let trials = run_trials(config, &point)?;
    let mean_users =
        trials.iter().map(|t| t.users as f64).sum::<f64>() / trials.len().max(1) as f64;
    let aggregates = config
        .methods
        .iter()
        .map(|&method| {
            let dofs: Vec<f64> = trials
                .iter()
                .filter_map(|t| t.outcome(method).and_then(|o| o.sum_dof))
                .collect();
            let (mean, std) = mean_std(&dofs);
            AggregateResult {
                sweep_var: config.sweep,
                sweep_value: value,
                method,
                mean_sum_dof: mean,
                std_sum_dof: std,
                mean_users,
                trials: dofs.len(),
                seed: config.seed,
            }
        })
        .collect();
    Ok(PointResult {
        sweep_value: value,
        aggregates,
        trials,
    })
}

/// Runs every sweep point in order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<PointResult>> {
    config.validate()?;
    config
        .values
        .iter()
        .map(|&v| run_point(config, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_std() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert_eq!(s, 2.0);
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn small_sweep_shape() {
        let mut c = ExperimentConfig::radius_sweep(vec![1.2, 4.2]);
        c.trials = 20;
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.len(), 2);
        for p in &out {
            assert_eq!(p.aggregates.len(), 2);
            assert_eq!(p.trials.len(), 20);
            for a in &p.aggregates {
                assert!(a.std_sum_dof >= 0.0);
                assert!(a.mean_sum_dof > 0.0 && a.mean_sum_dof <= 8.0);
            }
        }
    }
}
