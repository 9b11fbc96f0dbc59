//! The quantum strategy never fails: 10 000 seeded trials per guard and
//! 10 000 more under a uniform referee, all passing.
//!
//!     cargo run --example perfect_quantum_run

use ghz_game::game::GuardId;
use ghz_game::harness::{run_trials, GuardPolicy, SessionConfig, StrategyKind};

fn main() {
    for guard in GuardId::ALL {
        let config = SessionConfig::local(
            7,
            10_000,
            GuardPolicy::Fixed(guard),
            StrategyKind::Quantum,
        );
        let stats = run_trials(&config).unwrap();
        println!(
            "guard {guard} tested {} times: {} passes, {} failures",
            stats.completed,
            stats.passes,
            stats.completed - stats.passes
        );
        assert_eq!(stats.passes, stats.completed);
    }

    let config = SessionConfig::local(7, 10_000, GuardPolicy::Uniform, StrategyKind::Quantum);
    let stats = run_trials(&config).unwrap();
    println!(
        "uniform referee, {} trials: pass rate {}",
        stats.completed,
        stats.pass_rate()
    );
    println!("the guarantee is analytic, not statistical: zero failures at any seed.");
}
