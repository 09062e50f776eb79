//! Line-oriented text format for diagrams.
//!
//! ```text
//! word: T a T b T' c
//! group: group { a: inf; b: 2; def c = a^-1 b a; }
//! disc d1 kind=W base=0
//! disc d2 kind=WBAR base=0
//! arc (d1,0)-(d2,2)
//! circle region=outer
//! nest d3 region=(d1,2)
//! boundary: (d1,1) (d1,2)
//! ```
//!
//! Printing is canonical (base is always 0); parse(print(d)) == d.

use std::collections::BTreeMap;

use super::{Diagram, DiagramError, Disc, DiscKind, LegLetter, Placement};
use crate::group::{parse_group_spec, print_group_spec};
use crate::word::{BlownUpWord, KCanonical, RelWord};

pub fn print_diagram(d: &Diagram) -> Result<String, DiagramError> {
    let mut out = String::new();
    out.push_str(&format!("word: {}\n", d.word));
    out.push_str(&format!("group: {}\n", print_group_spec(&d.group)));
    for (i, disc) in d.discs.iter().enumerate() {
        if disc.legs.iter().any(|l| l.letter == LegLetter::S) {
            return Err(DiagramError::Invalid(
                "diagrams with live s-legs are not serializable".into(),
            ));
        }
        let kind = match &disc.kind {
            DiscKind::W => "kind=W".to_string(),
            DiscKind::WBar => "kind=WBAR".to_string(),
            DiscKind::TwoLeg(h) => format!("kind=TWOLEG h={}", h.display(&d.group)),
            DiscKind::TwoLegBar(h) => format!("kind=TWOLEG_BAR h={}", h.display(&d.group)),
        };
        out.push_str(&format!("disc d{} {} base=0\n", i + 1, kind));
    }
    for arc in &d.arcs {
        out.push_str(&format!(
            "arc (d{},{})-(d{},{})\n",
            arc.ends[0].0 + 1,
            arc.ends[0].1,
            arc.ends[1].0 + 1,
            arc.ends[1].1
        ));
    }
    for circle in &d.circles {
        out.push_str(&format!("circle region={}\n", print_placement(circle)));
    }
    for (&key, place) in &d.nesting {
        out.push_str(&format!(
            "nest d{} region={}\n",
            key + 1,
            print_placement(place)
        ));
    }
    if let Some(boundary) = &d.boundary {
        out.push_str("boundary:");
        for &(disc, slot) in boundary {
            out.push_str(&format!(" (d{},{})", disc + 1, slot));
        }
        out.push('\n');
    }
    Ok(out)
}

fn print_placement(p: &Placement) -> String {
    match p {
        Placement::Plane => "outer".to_string(),
        Placement::Face(d, s) => format!("(d{},{})", d + 1, s),
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let err = |line: usize, message: String| DiagramError::Parse { line: line + 1, message };
    let mut word_text = None;
    let mut group_text = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("word:") {
            word_text = Some((i, rest.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("group:") {
            group_text = Some((i, rest.trim().to_string()));
        }
    }
    let (gline, group_text) =
        group_text.ok_or_else(|| err(0, "missing `group:` header".into()))?;
    let group = parse_group_spec(&group_text).map_err(|e| err(gline, e.to_string()))?;
    let (wline, word_text) = word_text.ok_or_else(|| err(0, "missing `word:` header".into()))?;
    let word =
        RelWord::parse(group.clone(), &word_text).map_err(|e| err(wline, e.to_string()))?;
    let mut diagram = Diagram::new(group.clone(), word);

    // First pass: discs (with base rotations to undo when reading refs).
    let mut bases: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let Some(rest) = line.strip_prefix("disc ") else { continue };
        let mut kind = None;
        let mut base = 0usize;
        let mut h_text: Option<String> = None;
        let mut parts = rest.split_whitespace().peekable();
        let name = parts.next().ok_or_else(|| err(i, "missing disc name".into()))?;
        let expect = format!("d{}", bases.len() + 1);
        if name != expect {
            return Err(err(i, format!("disc names must be sequential; expected {expect}")));
        }
        while let Some(part) = parts.next() {
            if let Some(k) = part.strip_prefix("kind=") {
                kind = Some(k.to_string());
                if k == "TWOLEG" || k == "TWOLEG_BAR" {
                    // h=... may contain spaces; gather the remainder.
                    let mut h = String::new();
                    for p in parts.by_ref() {
                        if let Some(b) = p.strip_prefix("base=") {
                            base = b
                                .parse()
                                .map_err(|_| err(i, format!("bad base `{b}`")))?;
                        } else {
                            if !h.is_empty() {
                                h.push(' ');
                            }
                            h.push_str(p);
                        }
                    }
                    let h = h
                        .strip_prefix("h=")
                        .ok_or_else(|| err(i, "two-leg disc needs h=".into()))?;
                    h_text = Some(h.to_string());
                    break;
                }
            } else if let Some(b) = part.strip_prefix("base=") {
                base = b.parse().map_err(|_| err(i, format!("bad base `{b}`")))?;
            } else {
                return Err(err(i, format!("unexpected token `{part}`")));
            }
        }
        let kind = kind.ok_or_else(|| err(i, "missing kind=".into()))?;
        let disc = match kind.as_str() {
            "W" => Disc::new_w(&diagram.word),
            "WBAR" => Disc::new_wbar(&diagram.word),
            "TWOLEG" | "TWOLEG_BAR" => {
                let h_text = h_text.ok_or_else(|| err(i, "two-leg disc needs h=".into()))?;
                let h = parse_k(&group, &h_text).map_err(|e| err(i, e))?;
                let s_gen = group
                    .lookup("s")
                    .ok_or_else(|| err(i, "two-leg discs need a generator `s`".into()))?;
                Disc::new_twoleg(&group, s_gen, &h, kind == "TWOLEG_BAR")
            }
            other => return Err(err(i, format!("unknown kind `{other}`"))),
        };
        bases.push(base % disc.num_legs().max(1));
        diagram.discs.push(disc);
    }

    // References (d, slot) in the file are relative to the declared base.
    let fix = |diagram: &Diagram, d: usize, s: usize| -> Option<(usize, usize)> {
        let n = diagram.discs.get(d)?.num_legs();
        if s >= n {
            return None;
        }
        Some((d, (s + bases[d]) % n))
    };

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("arc ") {
            let (a, b) = rest
                .split_once('-')
                .ok_or_else(|| err(i, "arc needs two ends".into()))?;
            let e1 = parse_end(a).ok_or_else(|| err(i, format!("bad arc end `{a}`")))?;
            let e2 = parse_end(b).ok_or_else(|| err(i, format!("bad arc end `{b}`")))?;
            let e1 = fix(&diagram, e1.0, e1.1)
                .ok_or_else(|| err(i, format!("arc end out of range `{a}`")))?;
            let e2 = fix(&diagram, e2.0, e2.1)
                .ok_or_else(|| err(i, format!("arc end out of range `{b}`")))?;
            diagram.arcs.push(super::DiagArc::new(e1, e2));
        } else if let Some(rest) = line.strip_prefix("circle ") {
            let place = rest
                .trim()
                .strip_prefix("region=")
                .ok_or_else(|| err(i, "circle needs region=".into()))?;
            diagram
                .circles
                .push(parse_placement(&diagram, place, &bases).map_err(|e| err(i, e))?);
        } else if let Some(rest) = line.strip_prefix("nest ") {
            let (name, place) = rest
                .split_once(' ')
                .ok_or_else(|| err(i, "nest needs a disc and region=".into()))?;
            let key = parse_disc_name(name.trim())
                .ok_or_else(|| err(i, format!("bad disc `{name}`")))?;
            let place = place
                .trim()
                .strip_prefix("region=")
                .ok_or_else(|| err(i, "nest needs region=".into()))?;
            let place = parse_placement(&diagram, place, &bases).map_err(|e| err(i, e))?;
            diagram.nesting.insert(key, place);
        } else if let Some(rest) = line.strip_prefix("boundary:") {
            let mut boundary = Vec::new();
            for part in rest.split_whitespace() {
                let end =
                    parse_end(part).ok_or_else(|| err(i, format!("bad terminal `{part}`")))?;
                let end = fix(&diagram, end.0, end.1)
                    .ok_or_else(|| err(i, format!("terminal out of range `{part}`")))?;
                boundary.push(end);
            }
            diagram.boundary = Some(boundary);
        }
    }
    // Normalize nesting keys to component representatives.
    if !diagram.nesting.is_empty() {
        let components = diagram.components();
        let mut nesting = BTreeMap::new();
        for (key, place) in std::mem::take(&mut diagram.nesting) {
            if key >= components.len() {
                return Err(err(0, format!("nest references missing disc d{}", key + 1)));
            }
            nesting.insert(components[key], place);
        }
        diagram.nesting = nesting;
    }
    Ok(diagram)
}

fn parse_k(spec: &crate::group::GroupSpec, text: &str) -> Result<KCanonical, String> {
    // Reuse the witness item syntax: `a@1 (b c)@2`.
    let fake = format!("root=[T T'] m=1 slots=[top: {text} | bot:]");
    let parsed = BlownUpWord::parse(spec, &fake).map_err(|e| e.to_string())?;
    Ok(parsed.slots[0].1.clone())
}

fn parse_disc_name(name: &str) -> Option<usize> {
    let n: usize = name.strip_prefix('d')?.parse().ok()?;
    n.checked_sub(1)
}

fn parse_end(text: &str) -> Option<(usize, usize)> {
    let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (d, s) = inner.split_once(',')?;
    let disc = parse_disc_name(d.trim())?;
    let slot: usize = s.trim().parse().ok()?;
    Some((disc, slot))
}

fn parse_placement(
    diagram: &Diagram,
    text: &str,
    bases: &[usize],
) -> Result<Placement, String> {
    let text = text.trim();
    if text == "outer" {
        return Ok(Placement::Plane);
    }
    // Accept `(d1-outer)` as the outer face of d1's component: resolved to
    // the plane placement since outer faces never host nested material.
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        if inner.ends_with("-outer") {
            return Ok(Placement::Plane);
        }
    }
    let (d, s) = parse_end(text).ok_or_else(|| format!("bad region `{text}`"))?;
    let n = diagram
        .discs
        .get(d)
        .ok_or_else(|| format!("region references missing disc d{}", d + 1))?
        .num_legs();
    if s >= n {
        return Err(format!("region segment out of range in `{text}`"));
    }
    Ok(Placement::Face(d, (s + bases[d]) % n))
}
