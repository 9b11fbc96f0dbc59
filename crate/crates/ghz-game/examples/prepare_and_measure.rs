//! Walk the projection algebra by hand: prepare the GHZ state, measure
//! qubit A in X and qubit B in Y, and watch the register collapse until C's
//! answer is forced.
//!
//!     cargo run --example prepare_and_measure

use ghz_game::qsim::{basis_vectors, MeasBasis, MeasOutcome, QubitId, StateVector};

fn print_state(label: &str, state: &StateVector) {
    println!("{label}");
    for (index, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm_sqr() > 1e-18 {
            let bits = |b: usize| if b == 0 { '0' } else { '1' };
            println!(
                "  |{}{}{}>  {:+.6} {:+.6}i",
                bits(index >> 2 & 1),
                bits(index >> 1 & 1),
                bits(index & 1),
                amp.re,
                amp.im
            );
        }
    }
}

fn main() {
    let ghz = StateVector::ghz();
    print_state("GHZ state (amplitudes 1/sqrt(2) and -1/sqrt(2)):", &ghz);

    let p = ghz.outcome_probability(QubitId::A, MeasBasis::X, MeasOutcome::Plus);
    println!("\nP(A measures +1 in X) = {p}");

    // Draw 0.2 < 1/2 selects the +1 outcome.
    let (outcome, state) = ghz.measure_qubit(QubitId::A, MeasBasis::X, 0.2).unwrap();
    println!("\nA measured in X -> {outcome}");
    print_state("register afterwards (A factored out as |+x>):", &state);

    let (outcome, state) = state.measure_qubit(QubitId::B, MeasBasis::Y, 0.3).unwrap();
    println!("\nB measured in Y -> {outcome}");
    print_state("register afterwards:", &state);

    // The register is now the product |+x> |+y> |+y>; C's outcome is forced.
    let [x_plus, _] = basis_vectors(MeasBasis::X);
    let [y_plus, _] = basis_vectors(MeasBasis::Y);
    let expected = StateVector::product(x_plus, y_plus, y_plus);
    println!(
        "\nequal to |+x>|+y>|+y> up to global phase: {}",
        state.equal_up_to_global_phase(&expected, 1e-12)
    );

    let p = state.outcome_probability(QubitId::C, MeasBasis::Y, MeasOutcome::Plus);
    println!("P(C measures +1 in Y) = {p} -- C's answer is certain before it is given");
}
