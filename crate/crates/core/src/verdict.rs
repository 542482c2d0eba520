//! Randomised property suites: per-trial seeds, parallel evaluation and
//! replayable witnesses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state_space::random::trial_seed;

/// Default slack for randomised property checks.
pub const PROPERTY_TOL: f64 = 1e-8;
/// Witnesses kept per verdict; the failure count is always exact.
pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Monotonicity,
    Sufficiency,
    StatisticalLocality,
    Additivity,
    BregmanIdentity,
    MarginalIdentity,
    SeparoidPositivity,
    SeparoidSymmetry,
    ChainRule,
    DataProcessing,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Trial count, master seed and tolerance of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SuiteConfig {
            trials,
            seed,
            tol: PROPERTY_TOL,
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SuiteConfig { tol, ..self }
    }

    /// Seed of trial `i`; replaying a witness only needs this value.
    pub fn trial_seed(&self, i: usize) -> u64 {
        trial_seed(self.seed, i as u64)
    }
}

/// One failed trial: its seed replays it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    #[serde(with = "crate::json::float")]
    pub violation: f64,
    pub detail: serde_json::Value,
}

/// Outcome of one trial: the signed violation and data describing the inputs.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub violation: f64,
    pub detail: serde_json::Value,
}

impl TrialOutcome {
    pub fn new(violation: f64, detail: serde_json::Value) -> Self {
        TrialOutcome { violation, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub trials: usize,
    /// Maximum signed violation over all trials.
    #[serde(with = "crate::json::float")]
    pub worst_violation: f64,
    pub tol: f64,
    pub failures: usize,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyVerdict {
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Builds a verdict from already evaluated trial outcomes, in trial order.
    pub fn from_outcomes(property: Property, config: &SuiteConfig, outcomes: Vec<TrialOutcome>) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut failures = 0;
        let mut witnesses = Vec::new();
        for (i, o) in outcomes.into_iter().enumerate() {
            // NaN signals a broken evaluation and must count as a failure
            let v = if o.violation.is_nan() { f64::INFINITY } else { o.violation };
            worst = worst.max(v);
            if v > config.tol {
                failures += 1;
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(Witness {
                        trial: i,
                        seed: config.trial_seed(i),
                        violation: v,
                        detail: o.detail,
                    });
                }
            }
        }
        let trials = config.trials;
        PropertyVerdict {
            property,
            trials,
            worst_violation: if trials == 0 { 0.0 } else { worst },
            tol: config.tol,
            failures,
            pass: failures == 0,
            witnesses,
            note: None,
        }
    }
}

/// Runs `trial(seed)` for every trial in parallel; results are aggregated in
/// trial order so the verdict does not depend on scheduling.
pub fn run_trials<F>(property: Property, config: &SuiteConfig, trial: F) -> Result<PropertyVerdict>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|i| trial(config.trial_seed(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyVerdict::from_outcomes(property, config, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_collects_witnesses_in_trial_order() {
        let cfg = SuiteConfig::new(50, 3);
        let v = run_trials(Property::Monotonicity, &cfg, |s| {
            Ok(TrialOutcome::new(if s % 3 == 0 { 1.0 } else { -1.0 }, serde_json::json!(s)))
        })
        .unwrap();
        assert!(!v.pass);
        assert!(v.witnesses.windows(2).all(|w| w[0].trial < w[1].trial));
        for w in &v.witnesses {
            assert_eq!(w.seed, cfg.trial_seed(w.trial));
            assert_eq!(w.seed % 3, 0);
        }
        let again = run_trials(Property::Monotonicity, &cfg, |s| {
            Ok(TrialOutcome::new(if s % 3 == 0 { 1.0 } else { -1.0 }, serde_json::json!(s)))
        })
        .unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn nan_counts_as_failure() {
        let cfg = SuiteConfig::new(2, 0);
        let v = PropertyVerdict::from_outcomes(
            Property::ChainRule,
            &cfg,
            vec![
                TrialOutcome::new(0.0, serde_json::Value::Null),
                TrialOutcome::new(f64::NAN, serde_json::Value::Null),
            ],
        );
        assert_eq!(v.failures, 1);
        assert_eq!(v.worst_violation, f64::INFINITY);
    }
}
