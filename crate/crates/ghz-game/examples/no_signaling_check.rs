//! No answer carries information: analytically, every single-qubit marginal
//! is exactly one half whatever bases are measured; empirically, each
//! suspect's red frequency stays within the 3-sigma binomial band around 0.5
//! however the referee conditions on the tested guard.
//!
//!     cargo run --example no_signaling_check

use ghz_game::game::{GuardId, RobberId};
use ghz_game::harness::{run_trials, GuardPolicy, SessionConfig, StrategyKind};
use ghz_game::qsim::{BasisTriple, MeasBasis, QubitId, StateVector};

fn main() {
    println!("Analytic single-qubit marginals of the GHZ state:");
    let ghz = StateVector::ghz();
    for bases in [
        BasisTriple::new(MeasBasis::X, MeasBasis::X, MeasBasis::X),
        BasisTriple::new(MeasBasis::X, MeasBasis::Y, MeasBasis::Y),
        BasisTriple::new(MeasBasis::Y, MeasBasis::X, MeasBasis::Y),
        BasisTriple::new(MeasBasis::Y, MeasBasis::Y, MeasBasis::X),
    ] {
        let dist = ghz.joint_distribution(bases);
        let marginals: Vec<String> = QubitId::ALL
            .into_iter()
            .map(|q| format!("{q}: {:.6}", dist.marginal(q)[0]))
            .collect();
        println!("  bases {bases}: P(+1) per qubit -> {}", marginals.join("  "));
    }

    println!();
    let trials = 40_000u64;
    println!("Sampled red frequencies over {trials} uniform-guard trials,");
    println!("conditioned on which guard was tested (band: 0.5 ± 3σ):");
    let config = SessionConfig::local(42, trials, GuardPolicy::Uniform, StrategyKind::Quantum);
    let stats = run_trials(&config).unwrap();
    for suspect in RobberId::ALL {
        print!("  suspect {suspect}:");
        for guard in GuardId::ALL {
            let n = stats.per_suspect[suspect.index()].answers_by_guard[guard.index()];
            let freq = stats.red_frequency_given(suspect, guard);
            let band = 3.0 * (0.25 / n as f64).sqrt();
            let ok = (freq - 0.5).abs() <= band;
            print!("  g{guard}={freq:.4}{}", if ok { "" } else { " (!)" });
        }
        println!();
    }
    println!("the tested guard leaves no trace in any single suspect's answers.");
}
