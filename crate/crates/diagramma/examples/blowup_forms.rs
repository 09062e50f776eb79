//! Words in G*<t>: coefficient roles, kernel-K canonical forms with their
//! level-window classes, and the blow-up normal form recovered by search.
//!
//! Run with `cargo run --example blowup_forms`.

use std::sync::Arc;

use diagramma::group::GroupSpec;
use diagramma::word::{assemble_blowup, recover_blowup, recover_blowup_all, RelWord};

fn main() {
    let spec = Arc::new(GroupSpec::free(&["a", "b", "c", "d", "e"]));
    let w = RelWord::parse(spec.clone(), "a T T b T' T' c d T' e T T").unwrap();
    println!("w = {w}");
    println!("shape: {}  (complexity {})", w.shape(), w.shape().complexity());
    let roles = w.coefficient_roles().unwrap();
    for (i, role) in roles.iter().enumerate() {
        let c = w.coefficient(i);
        if !c.is_identity() {
            println!("  coefficient after letter {i}: {} ({role})", spec.display_element(c));
        }
    }

    // The canonical witness: levels pin the X/Y/J classes.
    let witness = recover_blowup(&w).unwrap();
    println!("blown-up form: {}", witness.display(&spec));
    let back = assemble_blowup(&spec, &witness).unwrap();
    println!("reassembles to: {back}");
    assert!(back.cyclic_eq(&w));

    // The search space is small; every witness assembles back to w.
    let all = recover_blowup_all(&w).unwrap();
    println!("all witnesses found: {}", all.len());
    for b in &all {
        assert!(assemble_blowup(&spec, b).unwrap().cyclic_eq(&w));
    }
}
