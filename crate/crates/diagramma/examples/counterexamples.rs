//! The three counterexample families: the four-disc diagram over a group
//! with torsion, the two-disc power-shape diagrams, and substitution.
//!
//! Run with `cargo run --example counterexamples`.

use std::sync::Arc;

use diagramma::group::GroupSpec;
use diagramma::homotopy::read_cycle;
use diagramma::search::{construct_four_disc_example, construct_power, construct_substitution};
use diagramma::word::LinearWord;

fn main() {
    // Torsion coefficients.
    let four_disc = construct_four_disc_example().unwrap();
    println!("four-disc example over {}", diagramma::group::print_group_spec(&four_disc.group));
    println!("  word: {}", four_disc.word);
    println!("  irreducible: {}", four_disc.is_irreducible().verdict());
    println!("  cycle: {}", read_cycle(&four_disc).unwrap().display(&four_disc.group));

    // Power shapes: irreducible exactly at nonzero offset.
    let spec = Arc::new(GroupSpec::free(&["a"]));
    for (n, k) in [(2usize, 0usize), (2, 1), (3, 1), (4, 3)] {
        let d = construct_power(&spec, n, k, "a").unwrap();
        println!(
            "power({n},{k}): valid={} irreducible={} cycle={}",
            d.validate().is_valid(),
            d.is_irreducible().verdict(),
            read_cycle(&d).unwrap().display(&spec),
        );
    }

    // Substitution enlarges any diagram; irreducibility is preserved.
    let spec2 = Arc::new(GroupSpec::free(&["a", "b"]));
    let x = construct_power(&spec2, 2, 1, "a").unwrap();
    let u = LinearWord::parse(spec2.clone(), "T b T'").unwrap();
    let sub = construct_substitution(&x, &u).unwrap();
    println!(
        "substituted (u = T b T'): word={} discs={} arcs={} irreducible={}",
        sub.word,
        sub.discs.len(),
        sub.arcs.len(),
        sub.is_irreducible().verdict(),
    );
}
