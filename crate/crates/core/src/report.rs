//! Verification reports and the seeded parallel trial runner.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::sample::{trial_rng, TrialRng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub input: Value,
    pub expected: Value,
    pub got: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub precision_aborts: u64,
    pub details: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            trials: 0,
            failures: Vec::new(),
            precision_aborts: 0,
            details: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    /// Adds trials, failures and aborts of `other`; its details are nested
    /// under `label`.
    pub fn absorb(&mut self, label: &str, other: Report) {
        self.trials += other.trials;
        self.precision_aborts += other.precision_aborts;
        self.failures.extend(other.failures);
        if !other.details.is_empty() {
            self.details.insert(
                label.to_string(),
                serde_json::to_value(other.details).expect("details serialize"),
            );
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} trials, {} failures, {} precision aborts",
            self.suite,
            self.trials,
            self.failures.len(),
            self.precision_aborts
        )
    }
}

/// What one trial produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    Pass,
    /// Passed, with a label counted into `details` (e.g. which branch ran).
    PassTagged(&'static str),
    Fail(Failure),
    Abort,
}

impl Outcome {
    pub fn check(ok: bool, input: impl FnOnce() -> Value, expected: Value, got: Value) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(Failure {
                input: input(),
                expected,
                got,
            })
        }
    }

    /// Precision errors become aborts, anything else a failure.
    pub fn from_error(err: Error, input: Value) -> Self {
        match err {
            Error::InsufficientPrecision(_) | Error::SingularToPrecision => Outcome::Abort,
            other => Outcome::Fail(Failure {
                input,
                expected: Value::from("no error"),
                got: Value::from(other.to_string()),
            }),
        }
    }
}

/// Runs `trials` trials in parallel, trial `i` drawing from stream `i` of
/// `seed`, and folds the outcomes in trial order.
pub fn run_trials<F>(name: &str, seed: u64, trials: u64, f: F) -> Report
where
    F: Fn(u64, &mut TrialRng) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(seed, i)))
        .collect();
    let mut report = Report::new(name);
    report.trials = trials;
    let mut tags: BTreeMap<&'static str, u64> = BTreeMap::new();
    for o in outcomes {
        match o {
            Outcome::Pass => {}
            Outcome::PassTagged(tag) => *tags.entry(tag).or_default() += 1,
            Outcome::Fail(f) => report.failures.push(f),
            Outcome::Abort => report.precision_aborts += 1,
        }
    }
    for (tag, count) in tags {
        report.detail(tag, count);
    }
    report
}

/// Mixes a label into a seed so that sub-checks use unrelated streams.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, folded into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h.rotate_left(17)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn runner_is_order_independent() {
        let run = || {
            run_trials("t", 5, 200, |i, rng| {
                let x: u32 = rng.gen_range(0..10);
                if x == 0 {
                    Outcome::Fail(Failure {
                        input: Value::from(i),
                        expected: Value::from(1),
                        got: Value::from(0),
                    })
                } else if x == 1 {
                    Outcome::Abort
                } else {
                    Outcome::PassTagged("ok")
                }
            })
        };
        let a = run();
        assert_eq!(a, run());
        assert_eq!(
            a.failures.len() as u64 + a.precision_aborts + a.details["ok"].as_u64().unwrap(),
            200
        );
    }

    #[test]
    fn seeds_differ_by_label() {
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
        assert_eq!(derive_seed(1, "a"), derive_seed(1, "a"));
    }
}
