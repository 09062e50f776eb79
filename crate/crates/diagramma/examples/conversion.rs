//! The conversion pipeline, step by step, on the classic complexity-three
//! word: expansion with its ring of t-arcs, the coherent s-pairing, the
//! two-leg towers, and the final W-diagram over G*<s>.
//!
//! Run with `cargo run --example conversion`.

use std::sync::Arc;

use diagramma::convert::{
    convert, expand_disc, insert_twolegs_and_absorb, pair_s_legs, WorkingHypotheses,
};
use diagramma::corpus;
use diagramma::diagram::DiscKind;
use diagramma::group::GroupSpec;
use diagramma::shape::TShape;
use diagramma::word::{recover_blowup, RelWord};

fn main() {
    let spec = Arc::new(GroupSpec::free(&["a", "b", "c", "d", "e"]));
    let w = RelWord::parse(spec.clone(), "a T T b T' T' c d T' e T T").unwrap();
    let witness = recover_blowup(&w).unwrap();
    println!("w = {w}");
    println!("witness: {}", witness.display(&spec));

    let hyp = WorkingHypotheses::new(&spec, &witness).unwrap();
    println!(
        "Gamma = {} with H levels {:?}, H' levels {:?}",
        diagramma::group::print_group_spec(&hyp.gamma),
        hyp.h_window,
        hyp.h_prime_window,
    );
    println!("w0 over Gamma: {}", hyp.w0);

    let expanded = expand_disc(&hyp, &witness, false).unwrap();
    println!(
        "expanded disc: {} outer legs, {} root t-legs, {} s-legs, {} ring arcs",
        expanded.outer.len(),
        expanded.t_leg_count(),
        expanded.s_leg_count(),
        expanded.ring_arcs.len(),
    );
    let pairs = pair_s_legs(&expanded).unwrap();
    println!("coherent s-pairs: {}", pairs.len());
    for p in &pairs {
        println!("  pair ({}, {}) at depth {}", p.minus, p.plus, p.depth);
    }
    let fragment = insert_twolegs_and_absorb(&hyp, &expanded, &pairs).unwrap();
    for disc in &fragment.discs {
        if let DiscKind::TwoLeg(h) = &disc.kind {
            println!("  two-leg disc h = {}", h.display(&hyp.gamma));
        }
    }

    // End to end on the one-disc boundary diagram.
    let d = corpus::single_disc_boundary(&w);
    let converted = convert(&d, &witness).unwrap();
    let out = &converted.diagram;
    println!(
        "converted: {} discs, valid={}, boundary shape {}",
        out.discs.len(),
        out.validate().is_valid(),
        out.boundary_word().unwrap().shape(),
    );
    let main_shape = TShape::new(out.discs[0].legs.iter().map(|l| l.sign).collect());
    println!("main disc shape: {main_shape}");
}
