//! Writes schematic SVG renderings of the fixture diagrams into a
//! `target/gallery` directory.
//!
//! Run with `cargo run --example render_gallery`.

use std::sync::Arc;

use diagramma::corpus;
use diagramma::group::GroupSpec;
use diagramma::render::render_svg;
use diagramma::search::{construct_four_disc_example, construct_power, construct_substitution};
use diagramma::word::{LinearWord, RelWord};

fn main() -> std::io::Result<()> {
    let dir = std::path::Path::new("target/gallery");
    std::fs::create_dir_all(dir)?;
    let spec = Arc::new(GroupSpec::free(&["a", "b"]));
    let w = RelWord::parse(spec.clone(), "T a T' b").unwrap();

    let mut entries: Vec<(&str, diagramma::diagram::Diagram)> = vec![
        ("mirror-pair", corpus::mirror_pair(&w)),
        ("boundary-disc", corpus::single_disc_boundary(&w)),
        ("four-disc", construct_four_disc_example().unwrap()),
        ("power-3-1", construct_power(&Arc::new(GroupSpec::free(&["a"])), 3, 1, "a").unwrap()),
    ];
    let x = construct_power(&spec, 2, 1, "a").unwrap();
    let u = LinearWord::parse(spec.clone(), "T b T'").unwrap();
    entries.push(("substituted", construct_substitution(&x, &u).unwrap()));

    for (name, diagram) in &entries {
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, render_svg(diagram))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
