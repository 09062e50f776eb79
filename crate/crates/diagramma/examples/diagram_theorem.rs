//! Bounded exhaustive search: over a torsion-free group with an amenable
//! word there is no irreducible diagram (checked to a disc bound), while the
//! same word over a group with torsion admits one. Also runs the boundary
//! variant: no irreducible diagram has a boundary word of smaller
//! complexity, while a complexity-equal one exists.
//!
//! Run with `cargo run --release --example diagram_theorem`.

use std::sync::Arc;

use diagramma::corpus;
use diagramma::group::{parse_group_spec, GroupSpec};
use diagramma::search::{enumerate, find_irreducible, BoundaryFilter, SearchSpec};
use diagramma::word::RelWord;

fn main() {
    // Torsion-free coefficients: exhaustion certifies nothing irreducible.
    let free_spec = Arc::new(GroupSpec::free(&["a", "b", "c"]));
    let w = RelWord::parse(free_spec.clone(), "T a T b T' c").unwrap();
    let search = SearchSpec::new(w.clone(), 4).unwrap();
    let (found, stats) = find_irreducible(&search).unwrap();
    println!(
        "free group, <= 4 discs: searched={} irreducible={}",
        stats.searched, stats.irreducible
    );
    assert!(found.is_none());

    // The same word over coefficients with torsion: a counterexample exists.
    let torsion = parse_group_spec("group { a: inf; b: 2; def c = a^-1 b a; }").unwrap();
    let wt = RelWord::parse(torsion.clone(), "T a T b T' c").unwrap();
    let search = SearchSpec::new(wt.clone(), 4).unwrap();
    let (found, stats) = find_irreducible(&search).unwrap();
    println!(
        "torsion group, <= 4 discs: searched={} irreducible={}",
        stats.searched, stats.irreducible
    );
    let d = found.expect("the four-disc counterexample");
    println!("found: {} discs, {} arcs", d.discs.len(), d.arcs.len());

    // Boundary variant over the free group: nothing below the complexity of
    // w, while the one-disc diagram with boundary word w itself exists.
    let below = SearchSpec::new(w.clone(), 2)
        .unwrap()
        .with_filter(BoundaryFilter::ComplexityBelow(w.shape().complexity()));
    let (found, stats) = find_irreducible(&below).unwrap();
    println!(
        "boundary words below complexity {}: searched={} irreducible={}",
        w.shape().complexity(),
        stats.searched,
        stats.irreducible
    );
    assert!(found.is_none());

    let any = SearchSpec::new(w.clone(), 1)
        .unwrap()
        .with_filter(BoundaryFilter::AnyBoundary);
    let all = enumerate(&any).unwrap();
    let single = corpus::single_disc_boundary(&w);
    assert!(all.iter().any(|d| d.isomorphic(&single)));
    println!(
        "complexity-equal boundary diagram found among {} candidates; z = {}",
        all.len(),
        single.boundary_word().unwrap()
    );
}
