//! The t-shape calculus: Magnus derivatives, complexity, roots, clumps,
//! amenability, and the exponent-sum-one law checked by enumeration.
//!
//! Run with `cargo run --example shape_calculus`.

use diagramma::shape::{enumerate_shapes, TShape};

fn main() {
    let examples = [
        "T T'",
        "T T T'",
        "T T T' T' T' T T",
        "T T",
        "T T T' T T T' T T'",
    ];
    for text in examples {
        let shape = TShape::parse(text).unwrap();
        let analysis = shape.analyze();
        print!("{shape}:");
        let mut derived = shape.clone();
        while !derived.is_power() {
            derived = derived.derivative();
            print!("  D-> {derived}");
        }
        println!();
        println!(
            "    complexity={} root={} amenable={} one_clump={} power={} exponent_sum={}",
            analysis.complexity,
            analysis
                .root
                .map(|r| format!("[{}]", r.canonical_rotation()))
                .unwrap_or_else(|| "none".into()),
            analysis.amenable,
            analysis.one_clump,
            analysis.is_power,
            analysis.exponent_sum,
        );
    }

    // Every shape of exponent sum one is amenable; check every class up to
    // length nine.
    let mut total = 0;
    for shape in enumerate_shapes(9).unwrap() {
        if shape.exponent_sum() == 1 {
            assert!(shape.is_amenable(), "counterexample: {shape}");
            total += 1;
        }
    }
    println!("exponent-sum-one shapes of length <= 9: {total}, all amenable");
}
