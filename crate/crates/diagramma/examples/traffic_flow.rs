//! Dual cell subdivisions and the bigon traffic flow: every all-bigon map
//! yields at least two complete crashes at distinct vertices, and the corner
//! words show what the crash argument reads there.
//!
//! Run with `cargo run --example traffic_flow`.

use std::sync::Arc;

use diagramma::corpus;
use diagramma::crash::{bigon_schedule, dual_map, simulate};
use diagramma::group::GroupSpec;
use diagramma::search::construct_four_disc_example;

fn main() {
    let spec = Arc::new(GroupSpec::free(&["a", "b"]));
    for k in [2usize, 4, 6] {
        let d = corpus::necklace(&spec, k);
        let map = dual_map(&d).unwrap();
        println!(
            "necklace of {k} discs: dual has {} vertices, {} edges, {} cells (Euler {})",
            map.vertex_count,
            map.edges.len(),
            map.cells.len(),
            map.euler_characteristic(),
        );
        let schedule = bigon_schedule(&map).unwrap();
        let events = simulate(&map, &schedule, 64).unwrap();
        for event in &events {
            println!("  {}", event.trace_line(&map, &spec));
        }
    }

    // The four-disc example has triangle cells; its dual still closes up
    // with Euler characteristic two, and the corner words expose the
    // torsion relation that defeats the crash contradiction.
    let four_disc = construct_four_disc_example().unwrap();
    let map = dual_map(&four_disc).unwrap();
    println!(
        "four-disc example: cells with boundary lengths {:?}",
        map.cells.iter().map(|c| c.boundary_len()).collect::<Vec<_>>(),
    );
    for v in 0..map.vertex_count {
        let word: Vec<String> = map
            .corner_word(v)
            .iter()
            .map(|l| format!("{}", four_disc.group.display_element(&l.label)))
            .collect();
        println!("  region {}: corner word {}", v + 1, word.join(" "));
    }
}
