//! Why one question per suspect tests exactly one statement, and why the
//! suspects cannot tell which: each suspect's question leaves two candidate
//! statements, and across the three suspects the candidates cover all four.
//!
//!     cargo run --example single_question_test

use ghz_game::game::{question_for, GuardId, RobberId, SideView};
use ghz_game::oracle::{ambiguity_cover, candidate_statements, testable_statements};

fn main() {
    println!("Three answers reveal three sides, enough for exactly one statement:");
    for guard in GuardId::ALL {
        let questions: Vec<String> = RobberId::ALL
            .into_iter()
            .map(|r| format!("{r}:{}", question_for(guard, r)))
            .collect();
        println!(
            "  testing guard {guard} asks {} -> testable: {}",
            questions.join(" "),
            testable_statements(guard)
        );
    }

    println!();
    println!("What one suspect can infer from his own question alone:");
    for robber in RobberId::ALL {
        for side in SideView::BOTH {
            let [g, h] = candidate_statements(robber, side);
            println!("  {robber} asked about {side:<5} -> the test is statement {g} or {h}");
        }
    }

    println!();
    println!("Collectively the suspects must prepare for every statement at once:");
    for guard in GuardId::ALL {
        println!("  tested guard {guard} -> candidates across suspects: {}", ambiguity_cover(guard));
    }
    println!();
    println!("Since the four statements are jointly unsatisfiable, no pre-agreed");
    println!("answer table covers all of them; see inconsistency_proof.");
}
