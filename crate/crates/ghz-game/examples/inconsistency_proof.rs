//! Two independent proofs that the four statements cannot all hold: the
//! multiplicative product argument, and brute force over all 64 colorings.
//!
//!     cargo run --example inconsistency_proof

use ghz_game::oracle::{
    enumerate_colorings, max_satisfiable, product_argument, satisfied_guards,
};

fn main() {
    let proof = product_argument();
    println!("Product argument:");
    println!("  the guards' statements mention 12 sides in total;");
    for m in &proof.side_multiplicities {
        println!("    ({}, {:<5}) appears {} times", m.robber, m.side, m.count);
    }
    println!(
        "  so the product of all 12 signs is a product of squares: {:+}",
        proof.joint_product
    );
    println!(
        "  but the four parities multiply to {:+}, contradiction: {}",
        proof.required_product, proof.contradiction
    );

    println!();
    println!("Exhaustive check of all 64 colorings:");
    let mut histogram = [0usize; 5];
    for coloring in enumerate_colorings() {
        histogram[satisfied_guards(coloring).len()] += 1;
    }
    for (satisfied, count) in histogram.iter().enumerate() {
        println!("  {count:>2} colorings satisfy exactly {satisfied} statements");
    }

    let result = max_satisfiable();
    println!();
    println!(
        "max simultaneously satisfiable = {} (and {} colorings satisfy all four)",
        result.max_satisfied, result.satisfying_all_four
    );
    println!("one witness per 3-subset (colors given front/back):");
    for w in &result.witnesses {
        println!("  {}: {}", w.subset, w.coloring);
    }
}
