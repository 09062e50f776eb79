//! Building diagrams by hand: validation, region words, irreducibility,
//! dipole reduction, boundary words, and the text format.
//!
//! Run with `cargo run --example diagram_basics`.

use std::sync::Arc;

use diagramma::corpus;
use diagramma::diagram::{parse_diagram, print_diagram};
use diagramma::group::GroupSpec;
use diagramma::word::RelWord;

fn main() {
    let spec = Arc::new(GroupSpec::free(&["a", "b"]));
    let w = RelWord::parse(spec.clone(), "T a T' b").unwrap();

    // The aligned mirror pair: valid, but every arc is a dipole.
    let pair = corpus::mirror_pair(&w);
    let report = pair.validate();
    println!("mirror pair valid: {}", report.is_valid());
    for region in pair.region_words().unwrap() {
        println!(
            "  region ({} corners) word: {}{}",
            region.corners.len(),
            spec.display_element(&region.word),
            if region.is_outer { "  [outer]" } else { "" },
        );
    }
    let irr = pair.is_irreducible();
    println!(
        "irreducible: {} (dipole_free={})",
        irr.verdict(),
        irr.dipole_free
    );
    let reduced = pair.reduce().unwrap();
    println!("after reduction: {} discs", reduced.discs.len());

    // A diagram with boundary: one disc, all legs out, boundary word = w.
    let boundary = corpus::single_disc_boundary(&w);
    println!("boundary word: {}", boundary.boundary_word().unwrap());

    // The line-oriented text format round-trips exactly.
    let text = print_diagram(&pair).unwrap();
    println!("--- file form ---\n{text}-----------------");
    let reparsed = parse_diagram(&text).unwrap();
    assert!(reparsed.isomorphic(&pair));
    assert_eq!(print_diagram(&reparsed).unwrap(), text);
    println!("parse(print(d)) == d");
}
