//! Session statistics.
//!
//! Aggregation is pure counting, so trials may complete in any order.
//! Aborted trials are excluded from every pass-rate denominator but reported
//! separately: a probability-1 claim stays falsifiable only if failures
//! cannot hide inside the denominator.

use crate::game::{Color, GuardId, RobberId};
use crate::harness::transcript::Transcript;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardTally {
    pub trials: u64,
    pub passes: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspectTally {
    pub answers: u64,
    pub red: u64,
    /// Answers given while each guard was the one under test.
    pub answers_by_guard: [u64; 4],
    /// Red answers given while each guard was the one under test.
    pub red_by_guard: [u64; 4],
}

/// Counters for one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub seed: u64,
    pub requested: u64,
    pub completed: u64,
    pub aborted: u64,
    pub passes: u64,
    pub per_guard: [GuardTally; 4],
    pub per_suspect: [SuspectTally; 3],
}

impl Stats {
    pub fn new(seed: u64, requested: u64) -> Self {
        Stats {
            seed,
            requested,
            completed: 0,
            aborted: 0,
            passes: 0,
            per_guard: [GuardTally::default(); 4],
            per_suspect: [SuspectTally::default(); 3],
        }
    }

    pub fn record(&mut self, transcript: &Transcript) {
        self.completed += 1;
        let guard = transcript.guard;
        let tally = &mut self.per_guard[guard.index()];
        tally.trials += 1;
        if transcript.verdict {
            self.passes += 1;
            tally.passes += 1;
        }
        for suspect in RobberId::ALL {
            let record = transcript.record_for(suspect);
            let tally = &mut self.per_suspect[suspect.index()];
            tally.answers += 1;
            tally.answers_by_guard[guard.index()] += 1;
            if record.answer == Color::Red {
                tally.red += 1;
                tally.red_by_guard[guard.index()] += 1;
            }
        }
    }

    pub fn record_aborted(&mut self) {
        self.aborted += 1;
    }

    /// Pass rate over completed trials. NaN when nothing completed.
    pub fn pass_rate(&self) -> f64 {
        self.passes as f64 / self.completed as f64
    }

    pub fn guard_pass_rate(&self, guard: GuardId) -> f64 {
        let tally = &self.per_guard[guard.index()];
        tally.passes as f64 / tally.trials as f64
    }

    pub fn red_frequency(&self, suspect: RobberId) -> f64 {
        let tally = &self.per_suspect[suspect.index()];
        tally.red as f64 / tally.answers as f64
    }

    /// Red-answer frequency of `suspect` conditioned on the tested guard.
    pub fn red_frequency_given(&self, suspect: RobberId, guard: GuardId) -> f64 {
        let tally = &self.per_suspect[suspect.index()];
        tally.red_by_guard[guard.index()] as f64 / tally.answers_by_guard[guard.index()] as f64
    }

    /// Exact (Clopper–Pearson) binomial confidence bounds on the pass rate.
    pub fn pass_rate_bounds(&self, confidence: f64) -> (f64, f64) {
        clopper_pearson(self.passes, self.completed, confidence)
    }

    /// Counting invariants: per-guard trials partition the completed trials,
    /// suspects answered once per completed trial, and completed plus
    /// aborted never exceeds the request.
    pub fn counts_consistent(&self) -> bool {
        let guard_total: u64 = self.per_guard.iter().map(|g| g.trials).sum();
        let guard_passes: u64 = self.per_guard.iter().map(|g| g.passes).sum();
        guard_total == self.completed
            && guard_passes == self.passes
            && self.completed + self.aborted <= self.requested
            && self.per_suspect.iter().all(|s| {
                s.answers == self.completed
                    && s.answers_by_guard.iter().sum::<u64>() == s.answers
                    && s.red_by_guard.iter().sum::<u64>() == s.red
            })
    }
}

/// Exact binomial confidence interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    assert!(
        (0.0..1.0).contains(&confidence),
        "confidence must be in [0, 1)"
    );
    if n == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (k_f, n_f) = (k as f64, n as f64);
    let lower = if k == 0 {
        0.0
    } else {
        Beta::new(k_f, n_f - k_f + 1.0)
            .expect("valid beta parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let upper = if k == n {
        1.0
    } else {
        Beta::new(k_f + 1.0, n_f - k_f)
            .expect("valid beta parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::SideView;
    use crate::harness::transcript::SuspectRecord;

    fn transcript(trial: u64, guard: GuardId, colors: [Color; 3], verdict: bool) -> Transcript {
        let suspects = RobberId::ALL.map(|suspect| SuspectRecord {
            suspect,
            question: SideView::Front,
            basis: None,
            outcome: None,
            answer: colors[suspect.index()],
            seq: suspect.index() as u32,
            at_micros: None,
        });
        Transcript {
            trial,
            guard,
            suspects,
            verdict,
            seed: 0,
        }
    }

    #[test]
    fn counting() {
        let mut stats = Stats::new(0, 3);
        stats.record(&transcript(
            0,
            GuardId::G1,
            [Color::Red, Color::Red, Color::Red],
            true,
        ));
        stats.record(&transcript(
            1,
            GuardId::G4,
            [Color::Green, Color::Red, Color::Red],
            true,
        ));
        stats.record_aborted();

        assert_eq!(stats.completed, 2);
        assert_eq!(stats.aborted, 1);
        assert_eq!(stats.passes, 2);
        assert_eq!(stats.pass_rate(), 1.0);
        assert_eq!(stats.per_guard[GuardId::G1.index()].trials, 1);
        assert_eq!(stats.red_frequency(RobberId::A), 0.5);
        assert_eq!(stats.red_frequency_given(RobberId::A, GuardId::G4), 0.0);
        assert!(stats.counts_consistent());
    }

    #[test]
    fn clopper_pearson_edges() {
        assert_eq!(clopper_pearson(0, 0, 0.95), (0.0, 1.0));

        let (lo, hi) = clopper_pearson(10, 10, 0.95);
        assert_eq!(hi, 1.0);
        // All successes in 10 trials: the exact 95% lower bound is
        // (alpha/2)^(1/n) ≈ 0.6915.
        assert!((lo - 0.025f64.powf(0.1)).abs() < 1e-9);

        let (lo, hi) = clopper_pearson(0, 10, 0.95);
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-9);
    }

    #[test]
    fn clopper_pearson_brackets_the_estimate() {
        for (k, n) in [(1u64, 7u64), (3, 4), (75, 100), (9_999, 10_000)] {
            let (lo, hi) = clopper_pearson(k, n, 0.95);
            let p_hat = k as f64 / n as f64;
            assert!(lo <= p_hat && p_hat <= hi, "({k}, {n}) → ({lo}, {hi})");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }
}
