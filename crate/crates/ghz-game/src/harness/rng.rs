//! Per-trial random streams.
//!
//! The generator is ChaCha8: seedable, and splittable into 2^64 independent
//! streams. Each trial draws from stream `trial` of the session seed, so a
//! trial's randomness does not depend on how many draws earlier trials made,
//! and the device can serve trials in any arrival order without
//! desynchronizing the rest of the session.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream for one trial of a session.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(seed: u64, trial: u64, n: usize) -> Vec<f64> {
        let mut rng = trial_rng(seed, trial);
        (0..n).map(|_| rng.random::<f64>()).collect()
    }

    #[test]
    fn streams_are_reproducible() {
        assert_eq!(draws(42, 7, 8), draws(42, 7, 8));
    }

    #[test]
    fn streams_differ_by_trial_and_seed() {
        assert_ne!(draws(42, 0, 8), draws(42, 1, 8));
        assert_ne!(draws(42, 0, 8), draws(43, 0, 8));
    }

    #[test]
    fn draws_are_unit_interval() {
        let mut rng = trial_rng(1, 1);
        for _ in 0..1000 {
            let u: f64 = rng.random();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
