//! Deterministic schematic SVG rendering: discs on a circle, arcs as
//! quadratic bands, legs ticked with orientation arrows, basepoints marked.
//! The layout is combinatorial, not a faithful planar embedding; identical
//! inputs produce byte-identical output.

use std::fmt::Write;

use crate::diagram::{Diagram, DiscKind, LegLetter, Placement};
use crate::shape::Sign;

const CANVAS: f64 = 640.0;
const RING_RADIUS: f64 = 210.0;
const DISC_RADIUS: f64 = 56.0;

pub fn render_svg(d: &Diagram) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">",
        c = CANVAS
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0.5\" y=\"0.5\" width=\"{w}\" height=\"{w}\" fill=\"white\" stroke=\"#cccccc\"/>",
        w = CANVAS - 1.0
    );
    let n = d.discs.len();
    let center = CANVAS / 2.0;
    // Disc centres on a ring (a single disc sits in the middle).
    let disc_center = |i: usize| -> (f64, f64) {
        if n == 1 {
            (center, center)
        } else {
            let angle = std::f64::consts::TAU * i as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
            (center + RING_RADIUS * angle.cos(), center + RING_RADIUS * angle.sin())
        }
    };
    let leg_point = |disc: usize, slot: usize| -> (f64, f64) {
        let (cx, cy) = disc_center(disc);
        let k = d.discs[disc].num_legs().max(1);
        let angle = std::f64::consts::TAU * slot as f64 / k as f64 - std::f64::consts::FRAC_PI_2;
        (cx + DISC_RADIUS * angle.cos(), cy + DISC_RADIUS * angle.sin())
    };
    // Boundary circle when present.
    if d.boundary.is_some() {
        let _ = writeln!(
            out,
            "  <circle cx=\"{center}\" cy=\"{center}\" r=\"{r}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>",
            r = CANVAS / 2.0 - 16.0
        );
    }
    // Arcs as quadratic curves bulging toward the canvas centre.
    for arc in &d.arcs {
        let (x1, y1) = leg_point(arc.ends[0].0, arc.ends[0].1);
        let (x2, y2) = leg_point(arc.ends[1].0, arc.ends[1].1);
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let (qx, qy) = (mx + (center - mx) * 0.35, my + (center - my) * 0.35);
        let _ = writeln!(
            out,
            "  <path d=\"M {x1:.2} {y1:.2} Q {qx:.2} {qy:.2} {x2:.2} {y2:.2}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"3\"/>"
        );
    }
    // Terminal stubs to the boundary circle.
    if let Some(boundary) = &d.boundary {
        let k = boundary.len().max(1);
        for (p, &(disc, slot)) in boundary.iter().enumerate() {
            let (x1, y1) = leg_point(disc, slot);
            let angle = std::f64::consts::TAU * p as f64 / k as f64 - std::f64::consts::FRAC_PI_2;
            let r = CANVAS / 2.0 - 16.0;
            let (x2, y2) = (center + r * angle.cos(), center + r * angle.sin());
            let _ = writeln!(
                out,
                "  <path d=\"M {x1:.2} {y1:.2} L {x2:.2} {y2:.2}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"3\" stroke-dasharray=\"none\"/>"
            );
            let _ = writeln!(
                out,
                "  <circle cx=\"{x2:.2}\" cy=\"{y2:.2}\" r=\"4\" fill=\"#1f6fb2\"/>"
            );
        }
    }
    // Discs over the arcs.
    for (i, disc) in d.discs.iter().enumerate() {
        let (cx, cy) = disc_center(i);
        let fill = if disc.kind.is_main() { "#f4e8c2" } else { "#dcecdc" };
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{DISC_RADIUS}\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"1.5\"/>"
        );
        let label = match &disc.kind {
            DiscKind::W => "w".to_string(),
            DiscKind::WBar => "w&#773;".to_string(),
            DiscKind::TwoLeg(_) => "h".to_string(),
            DiscKind::TwoLegBar(_) => "h&#773;".to_string(),
        };
        let _ = writeln!(
            out,
            "  <text x=\"{cx:.2}\" y=\"{cy:.2}\" font-size=\"20\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"serif\">{label} d{}</text>",
            i + 1
        );
        // Legs: ticks with orientation arrows; S-legs dashed.
        let k = disc.num_legs().max(1);
        for (slot, leg) in disc.legs.iter().enumerate() {
            let angle =
                std::f64::consts::TAU * slot as f64 / k as f64 - std::f64::consts::FRAC_PI_2;
            let (x1, y1) = (
                cx + (DISC_RADIUS - 6.0) * angle.cos(),
                cy + (DISC_RADIUS - 6.0) * angle.sin(),
            );
            let (x2, y2) = (
                cx + (DISC_RADIUS + 8.0) * angle.cos(),
                cy + (DISC_RADIUS + 8.0) * angle.sin(),
            );
            let dash = if leg.letter == LegLetter::S { " stroke-dasharray=\"3 2\"" } else { "" };
            let _ = writeln!(
                out,
                "  <path d=\"M {x1:.2} {y1:.2} L {x2:.2} {y2:.2}\" stroke=\"#883333\" stroke-width=\"2\"{dash}/>"
            );
            // Orientation: a small arrowhead, flipped for negative legs.
            let dir = match leg.sign {
                Sign::Plus => 1.0,
                Sign::Minus => -1.0,
            };
            let (tx, ty) = (
                cx + (DISC_RADIUS + 2.0) * angle.cos(),
                cy + (DISC_RADIUS + 2.0) * angle.sin(),
            );
            let (px, py) = (-angle.sin() * 5.0 * dir, angle.cos() * 5.0 * dir);
            let _ = writeln!(
                out,
                "  <path d=\"M {:.2} {:.2} L {tx:.2} {ty:.2}\" stroke=\"#883333\" stroke-width=\"2\"/>",
                tx - px + angle.cos() * 4.0,
                ty - py + angle.sin() * 4.0
            );
        }
        // Basepoint: a dot just before leg 0.
        let base_angle = -std::f64::consts::FRAC_PI_2 - 0.35;
        let (bx, by) = (
            cx + DISC_RADIUS * base_angle.cos(),
            cy + DISC_RADIUS * base_angle.sin(),
        );
        let _ = writeln!(out, "  <circle cx=\"{bx:.2}\" cy=\"{by:.2}\" r=\"4\" fill=\"#000000\"/>");
    }
    // Free-floating t-circles, bottom-left corner.
    for (i, place) in d.circles.iter().enumerate() {
        let x = 40.0 + 26.0 * i as f64;
        let tag = match place {
            Placement::Plane => "outer",
            Placement::Face(..) => "nested",
        };
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"10\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" stroke-dasharray=\"4 2\"><title>{tag}</title></circle>",
            y = CANVAS - 40.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::GroupSpec;
    use crate::word::RelWord;
    use std::sync::Arc;

    #[test]
    fn render_is_deterministic_and_counts_bands() {
        let spec = Arc::new(GroupSpec::free(&["a", "b"]));
        let w = RelWord::parse(spec.clone(), "T a T' b").unwrap();
        let d = corpus::mirror_pair(&w);
        let svg1 = render_svg(&d);
        let svg2 = render_svg(&d);
        assert_eq!(svg1, svg2);
        // two disc circles and two basepoint dots
        assert_eq!(svg1.matches("<circle").count(), 4);
        assert_eq!(svg1.matches("Q ").count(), 2); // two bands
        assert!(svg1.starts_with("<svg"));
        assert!(svg1.ends_with("</svg>\n"));
    }

    #[test]
    fn four_disc_example_renders_with_six_bands() {
        let d = crate::search::construct_four_disc_example().unwrap();
        let svg = render_svg(&d);
        assert_eq!(svg.matches("Q ").count(), 6);
        // four disc circles
        assert_eq!(svg.matches("font-size=\"20\"").count(), 4);
    }

    #[test]
    fn empty_diagram_renders_frame() {
        let spec = Arc::new(GroupSpec::free(&["a"]));
        let w = RelWord::parse(spec.clone(), "T a").unwrap();
        let d = crate::diagram::Diagram::new(spec, w);
        let svg = render_svg(&d);
        assert!(svg.contains("<rect"));
        assert!(svg.matches("Q ").count() == 0);
    }
}
