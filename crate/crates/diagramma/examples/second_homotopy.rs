//! Diagrams as relative 2-cycles: reading, evaluating in finite quotients,
//! and the pseudo-projective plane ranks.
//!
//! Run with `cargo run --example second_homotopy`.

use std::sync::Arc;

use diagramma::group::{GroupSpec, Perm, PermHom};
use diagramma::homotopy::{eval_quotient, psp_rank, read_cycle, QuotientHom};
use diagramma::search::{construct_four_disc_example, construct_power};

fn main() {
    // The four-disc example evaluated in the dihedral quotient of order six:
    // reflections for the coefficients, a different reflection for t.
    let four_disc = construct_four_disc_example().unwrap();
    let cycle = read_cycle(&four_disc).unwrap();
    println!("cycle: {}", cycle.display(&four_disc.group));
    let r = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
    let hom = PermHom::new(
        four_disc.group.clone(),
        "dihedral6",
        3,
        vec![
            ("a".to_string(), r.clone()),
            ("b".to_string(), r.clone()),
            ("c".to_string(), r),
        ],
    )
    .unwrap();
    let t_image = Perm::from_cycles(3, &[vec![1, 3]]).unwrap();
    let q = QuotientHom::new(hom, t_image);
    let ev = eval_quotient(&cycle, &q, &four_disc.word).unwrap();
    println!("evaluation in the dihedral quotient:");
    for (p, c) in &ev.coefficients {
        println!("  {}: {c:+}", p.cycle_string());
    }
    println!("nontrivial: {}", !ev.is_zero());

    // Power diagrams land on the standard generators of the projective
    // plane's second homotopy.
    let spec = Arc::new(GroupSpec::free(&["a"]));
    for (n, k) in [(3usize, 1usize), (3, 2)] {
        let d = construct_power(&spec, n, k, "a").unwrap();
        let cycle = read_cycle(&d).unwrap();
        let hom = PermHom::new(
            spec.clone(),
            "collapse",
            n,
            vec![("a".to_string(), Perm::identity(n))],
        )
        .unwrap();
        let t_image = Perm::from_cycles(n, &[(1..=n).collect()]).unwrap();
        let q = QuotientHom::new(hom, t_image);
        let ev = eval_quotient(&cycle, &q, &d.word).unwrap();
        println!("power({n},{k}) class is zero: {}", ev.is_zero());
    }

    for n in 1..=12 {
        println!("psp rank({n}) = {}", psp_rank(n));
    }
}
