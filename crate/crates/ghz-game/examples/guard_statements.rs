//! The rules of the game: the view table, the parity each guard asserts,
//! and the verdict predicate.
//!
//!     cargo run --example guard_statements

use ghz_game::game::{
    question_for, required_parity, verify, AnswerSet, Color, GuardId, RobberId,
};

fn main() {
    println!("Which side of each robber each guard saw:");
    println!("          A      B      C    parity");
    for guard in GuardId::ALL {
        let row: Vec<String> = RobberId::ALL
            .into_iter()
            .map(|r| format!("{:<6}", question_for(guard, r).to_string()))
            .collect();
        println!(
            "  guard {}: {} {:+}",
            guard,
            row.join(" "),
            required_parity(guard)
        );
    }

    println!();
    println!("A verdict is one multiplication (red = +1, green = -1):");
    let answers = AnswerSet::new(Color::Red, Color::Red, Color::Red);
    println!(
        "  all red  -> guard 1 {}  guard 4 {}",
        verify(GuardId::G1, &answers),
        verify(GuardId::G4, &answers)
    );
    let answers = AnswerSet::new(Color::Green, Color::Red, Color::Red);
    println!(
        "  one green -> guard 1 {}  guard 4 {}",
        verify(GuardId::G1, &answers),
        verify(GuardId::G4, &answers)
    );

    println!();
    println!("Every (robber, side) pair is seen by exactly two guards:");
    for robber in RobberId::ALL {
        for side in ghz_game::game::SideView::BOTH {
            let seers: Vec<String> = GuardId::ALL
                .into_iter()
                .filter(|&g| question_for(g, robber) == side)
                .map(|g| g.to_string())
                .collect();
            println!("  ({robber}, {side:<5}) seen by guards {}", seers.join(" and "));
        }
    }
}
