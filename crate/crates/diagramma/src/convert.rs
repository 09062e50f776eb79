//! The conversion pipeline: transform a w-diagram over an amenable word into
//! a W-diagram over `Gamma = G * <s>` with two-leg discs.
//!
//! Per main disc: replace it by a disc labelled by the blown-up form, with
//! an outer ring of t-arcs effecting the cyclic reduction back to w; pair
//! the s-legs in coherent nested cancelling pairs; cap each pair, outermost
//! first, with a two-leg disc; then delete the s-arcs, absorbing `s` into
//! the labels. Collapsing two-leg strings with trivial product and deleting
//! the floating t-circles this creates finishes the job.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::diagram::{
    invert_label, Diagram, DiagramError, Disc, DiscKind, LabelToken, LegLetter,
};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::shape::Sign;
use crate::word::{
    assemble_blowup, k_classify, BlownUpWord, KFlags, RelWord, Token, WordError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvertError {
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("the input diagram is invalid: {0}")]
    InvalidInput(String),
    #[error("the witness does not assemble to the diagram's word")]
    WitnessMismatch,
    #[error("s-legs are not coherently paired: {0}")]
    IncoherentPairing(String),
    #[error("conversion applies to closed main discs only; found {0}")]
    UnsupportedDisc(String),
}

/// The data extracted from a witness before converting: the extended group,
/// the blown-up word read over it, and the level windows of the subgroups H
/// and H' related by the shift `h -> h^s`.
///
/// Freeness of the top and bottom coefficients relative to H' and H is an
/// assumption recorded here, never re-proven.
#[derive(Debug, Clone)]
pub struct WorkingHypotheses {
    pub gamma: Arc<GroupSpec>,
    pub s_gen: usize,
    /// The blown-up word with coefficients in Gamma.
    pub w0: RelWord,
    pub m: usize,
    /// (min, max) levels of H.
    pub h_window: (i64, i64),
    /// (min, max) levels of H'.
    pub h_prime_window: (i64, i64),
    /// phi shifts levels by this amount (always one).
    pub phi_shift: i64,
}

impl WorkingHypotheses {
    pub fn new(g: &Arc<GroupSpec>, witness: &BlownUpWord) -> Result<Self, ConvertError> {
        witness.validate(g)?;
        let gamma = Arc::new(g.extended_with("s")?);
        let s_gen = gamma.lookup("s").expect("s was just added");
        let mut tokens = Vec::new();
        for (i, sign) in witness.root.letters().iter().enumerate() {
            tokens.push(Token::Letter(*sign));
            let coeff = witness.slots[i].1.as_group_element(&gamma, s_gen);
            if !coeff.is_identity() {
                tokens.push(Token::Coeff(coeff));
            }
        }
        let w0 = RelWord::from_tokens(gamma.clone(), &tokens);
        if w0.num_letters() != witness.root.len() {
            return Err(ConvertError::WitnessMismatch);
        }
        // Record the class facts: tops in X, bottoms in Y.
        for (i, (kind, k)) in witness.slots.iter().enumerate() {
            let flags = KFlags::of(k, witness.m);
            let ok = match kind {
                crate::word::SlotKind::Top => flags.in_x,
                crate::word::SlotKind::Bottom => flags.in_y,
                crate::word::SlotKind::Middle => flags.in_j,
            };
            if !ok {
                return Err(ConvertError::Word(WordError::SlotClass {
                    slot: i,
                    reason: "witness slot outside its class".into(),
                }));
            }
        }
        let m = witness.m as i64;
        Ok(WorkingHypotheses {
            gamma,
            s_gen,
            w0,
            m: witness.m,
            h_window: (0, m - 2),
            h_prime_window: (1, m - 1),
            phi_shift: 1,
        })
    }
}

/// A main disc expanded into its blown-up form: the inner disc with typed
/// legs, the ring arcs effecting the reduction, and the correspondence from
/// the original legs to the surviving inner positions.
#[derive(Debug, Clone)]
pub struct ExpandedDisc {
    pub reflected: bool,
    /// The inner disc labelled by the blown-up form; root letters are T
    /// legs, slot material appears as S legs.
    pub disc: Disc,
    /// Pairs of inner leg positions joined by ring t-arcs (the cancelling
    /// pairs of the reduction, each read `t` before `t^-1`).
    pub ring_arcs: Vec<(usize, usize)>,
    /// For each leg of the original disc, the surviving inner position.
    pub outer: Vec<usize>,
}

impl ExpandedDisc {
    pub fn t_leg_count(&self) -> usize {
        self.disc.legs.iter().filter(|l| l.letter == LegLetter::T).count()
    }

    pub fn s_leg_count(&self) -> usize {
        self.disc.legs.iter().filter(|l| l.letter == LegLetter::S).count()
    }
}

/// The typed label of the blown disc: root letters as T legs, the slot
/// material (per canonical-element factor) as S legs. Slot letters live in
/// G, whose generator indices are stable inside Gamma.
fn blown_label_tokens(witness: &BlownUpWord) -> Vec<LabelToken> {
    let mut tokens = Vec::new();
    for (i, sign) in witness.root.letters().iter().enumerate() {
        tokens.push(LabelToken::Leg(LegLetter::T, *sign));
        for token in witness.slots[i].1.s_word_tokens() {
            match token {
                Token::Letter(s) => tokens.push(LabelToken::Leg(LegLetter::S, s)),
                Token::Coeff(g) => tokens.push(LabelToken::Coeff(g)),
            }
        }
    }
    tokens
}

/// Replace a main disc by its blown-up form plus the ring of t-arcs that
/// effects the reduction back to the original label.
pub fn expand_disc(
    hyp: &WorkingHypotheses,
    witness: &BlownUpWord,
    reflected: bool,
) -> Result<ExpandedDisc, ConvertError> {
    // Everything here happens over G read inside Gamma; coefficients of the
    // original word embed unchanged because `extended_with` appends s after
    // the existing generators.
    let gamma = &hyp.gamma;
    let w = assemble_blowup(gamma, witness)?;
    let target = if reflected { Disc::new_wbar(&w) } else { Disc::new_w(&w) };
    let tokens = blown_label_tokens(witness);
    let tokens = if reflected { invert_label(gamma, tokens) } else { tokens };
    let kind = if reflected { DiscKind::WBar } else { DiscKind::W };
    let disc = Disc::from_label(gamma, kind, tokens);

    // Cancelling pairs of the cyclic reduction from w(t,t) to w, matched on
    // the inner legs with their segment labels.
    let n = disc.legs.len();
    let mut alive: Vec<bool> = vec![true; n];
    let mut segs: Vec<GroupElement> = disc.segs.clone();
    let mut ring = Vec::new();
    let next_alive = |alive: &[bool], mut i: usize| -> usize {
        loop {
            i = (i + 1) % alive.len();
            if alive[i] {
                return i;
            }
        }
    };
    let prev_alive = |alive: &[bool], mut i: usize| -> usize {
        loop {
            i = (i + alive.len() - 1) % alive.len();
            if alive[i] {
                return i;
            }
        }
    };
    loop {
        let alive_count = alive.iter().filter(|a| **a).count();
        if alive_count < 2 {
            break;
        }
        let mut cancelled = false;
        for i in 0..n {
            if !alive[i] || !segs[i].is_identity() {
                continue;
            }
            let j = next_alive(&alive, i);
            if j == i || disc.legs[j].sign != disc.legs[i].sign.opposite() {
                continue;
            }
            let (a, b) = if disc.legs[i].sign == Sign::Plus { (i, j) } else { (j, i) };
            ring.push((a, b));
            let p = prev_alive(&alive, i);
            alive[i] = false;
            alive[j] = false;
            if p != j {
                let merged = gamma.multiply(&segs[p], &segs[j]);
                segs[p] = merged;
            }
            cancelled = true;
            break;
        }
        if !cancelled {
            break;
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if survivors.len() != target.legs.len() {
        return Err(ConvertError::WitnessMismatch);
    }
    // Align the survivors with the original disc's legs.
    let k = survivors.len();
    let rotation = (0..k).find(|&r| {
        (0..k).all(|j| {
            let pos = survivors[(j + r) % k];
            disc.legs[pos].sign == target.legs[j].sign && segs[pos] == target.segs[j]
        })
    });
    let Some(r) = rotation else {
        return Err(ConvertError::WitnessMismatch);
    };
    let outer: Vec<usize> = (0..k).map(|j| survivors[(j + r) % k]).collect();
    Ok(ExpandedDisc { reflected, disc, ring_arcs: ring, outer })
}

/// One coherent cancelling pair of s-legs: `minus` reads s^-1 and `plus`
/// reads s, with `depth` pairs still open around them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SPair {
    pub minus: usize,
    pub plus: usize,
    pub depth: usize,
}

/// Pair the s-legs in nested cancelling pairs by extracting an adjacent
/// `s^-1 s` at a level minimum, leftmost first; every pair is coherent.
pub fn pair_s_legs(expanded: &ExpandedDisc) -> Result<Vec<SPair>, ConvertError> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (i, leg) in expanded.disc.legs.iter().enumerate() {
        match (leg.letter, leg.sign) {
            (LegLetter::T, _) => {
                if !stack.is_empty() {
                    return Err(ConvertError::IncoherentPairing(format!(
                        "root leg {i} interrupts an open s-pair"
                    )));
                }
            }
            (LegLetter::S, Sign::Minus) => stack.push(i),
            (LegLetter::S, Sign::Plus) => {
                let Some(minus) = stack.pop() else {
                    return Err(ConvertError::IncoherentPairing(format!(
                        "s-leg {i} closes no open pair"
                    )));
                };
                pairs.push(SPair { minus, plus: i, depth: stack.len() });
            }
        }
    }
    if let Some(open) = stack.pop() {
        return Err(ConvertError::IncoherentPairing(format!(
            "s-leg {open} never closes"
        )));
    }
    pairs.sort_by_key(|p| p.minus);
    Ok(pairs)
}

/// The final fragment replacing one main disc: the main disc relabelled by
/// the blown-up word over Gamma, the tower of two-leg discs, the internal
/// ring arcs, and the outer legs indexed like the original disc's legs.
#[derive(Debug, Clone)]
pub struct DiscFragment {
    pub discs: Vec<Disc>,
    /// Index of the main disc in `discs` (always 0).
    pub main: usize,
    pub arcs: Vec<((usize, usize), (usize, usize))>,
    pub outer: Vec<(usize, usize)>,
}

/// Cap every s-pair, outermost first, with a two-leg disc whose h is the
/// enclosed element of K; then delete the s-arcs, absorbing `s` into the
/// labels at their endpoints. All labels end up in Gamma.
pub fn insert_twolegs_and_absorb(
    hyp: &WorkingHypotheses,
    expanded: &ExpandedDisc,
    pairs: &[SPair],
) -> Result<DiscFragment, ConvertError> {
    let gamma = &hyp.gamma;
    let main = if expanded.reflected {
        Disc::new_wbar(&hyp.w0)
    } else {
        Disc::new_w(&hyp.w0)
    };
    let mut discs = vec![main];
    // Inner position -> final (disc, slot).
    let mut position: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut root_index = 0usize;
    for (i, leg) in expanded.disc.legs.iter().enumerate() {
        if leg.letter == LegLetter::T {
            position.insert(i, (0, root_index));
            root_index += 1;
        }
    }
    // Outermost pairs first so enclosed material is still s-material when
    // its K-element is read.
    let mut ordered: Vec<&SPair> = pairs.iter().collect();
    ordered.sort_by_key(|p| (p.depth, p.minus));
    for pair in ordered {
        // The element enclosed between the pair's legs, read at the level
        // just inside the pair.
        let mut tokens = Vec::new();
        for i in pair.minus..pair.plus {
            if i > pair.minus {
                let leg = expanded.disc.legs[i];
                debug_assert_eq!(leg.letter, LegLetter::S);
                tokens.push(Token::Letter(leg.sign));
            }
            if !expanded.disc.segs[i].is_identity() {
                tokens.push(Token::Coeff(expanded.disc.segs[i].clone()));
            }
        }
        let (h, _) = k_classify(gamma, &tokens, hyp.m)?;
        let disc = Disc::new_twoleg(gamma, hyp.s_gen, &h, false);
        let id = discs.len();
        discs.push(disc);
        position.insert(pair.minus, (id, 0));
        position.insert(pair.plus, (id, 1));
    }
    let arcs = expanded
        .ring_arcs
        .iter()
        .map(|&(a, b)| (position[&a], position[&b]))
        .collect();
    let outer = expanded.outer.iter().map(|p| position[p]).collect();
    Ok(DiscFragment { discs, main: 0, arcs, outer })
}

/// Collapse every maximal two-leg string with trivial product to a single
/// t-arc and delete the floating t-circles this creates; idempotent.
pub fn normalize_w_diagram(d: &Diagram) -> Result<Diagram, ConvertError> {
    let mut current = d.clone();
    while let Some(window) = current.trivial_twoleg_string() {
        current = collapse_string(&current, &window)?;
    }
    Ok(current)
}

fn collapse_string(d: &Diagram, window: &[usize]) -> Result<Diagram, ConvertError> {
    let att = d
        .attachment_table()
        .map_err(|f| ConvertError::Diagram(DiagramError::Invalid(format!("{:?}", f))))?;
    let first = window[0];
    let last = *window.last().unwrap();
    let in_att = att[first][0];
    let out_att = att[last][1];
    let removed: std::collections::BTreeSet<usize> = window.iter().copied().collect();
    let mut remap = vec![usize::MAX; d.discs.len()];
    let mut discs = Vec::new();
    for (i, disc) in d.discs.iter().enumerate() {
        if !removed.contains(&i) {
            remap[i] = discs.len();
            discs.push(disc.clone());
        }
    }
    let mut arcs = Vec::new();
    for arc in &d.arcs {
        if arc.ends.iter().all(|&(disc, _)| !removed.contains(&disc)) {
            arcs.push(crate::diagram::DiagArc::new(
                (remap[arc.ends[0].0], arc.ends[0].1),
                (remap[arc.ends[1].0], arc.ends[1].1),
            ));
        }
    }
    let mut boundary = d.boundary.as_ref().map(|b| {
        b.iter()
            .map(|&(disc, slot)| {
                if removed.contains(&disc) {
                    None
                } else {
                    Some((remap[disc], slot))
                }
            })
            .collect::<Vec<_>>()
    });
    use crate::diagram::Attachment as Att;
    match (in_att, out_att) {
        (Att::Arc(a_in, e_in), Att::Arc(a_out, e_out)) => {
            if a_in == a_out {
                // The string closed into a loop: it becomes a floating
                // t-circle, deleted on the spot.
            } else {
                let far_in = d.arcs[a_in].ends[1 - e_in];
                let far_out = d.arcs[a_out].ends[1 - e_out];
                match (removed.contains(&far_in.0), removed.contains(&far_out.0)) {
                    (false, false) => {
                        arcs.push(crate::diagram::DiagArc::new(
                            (remap[far_in.0], far_in.1),
                            (remap[far_out.0], far_out.1),
                        ));
                    }
                    _ => {
                        return Err(ConvertError::Diagram(DiagramError::Invalid(
                            "string collapse touched a non-maximal window".into(),
                        )))
                    }
                }
            }
        }
        (Att::Arc(a, e), Att::Boundary(p)) | (Att::Boundary(p), Att::Arc(a, e)) => {
            let far = d.arcs[a].ends[1 - e];
            if removed.contains(&far.0) {
                return Err(ConvertError::Diagram(DiagramError::Invalid(
                    "string collapse touched a non-maximal window".into(),
                )));
            }
            if let Some(b) = boundary.as_mut() {
                b[p] = Some((remap[far.0], far.1));
            }
        }
        (Att::Boundary(_), Att::Boundary(_)) => {
            return Err(ConvertError::Diagram(DiagramError::ChordProduced));
        }
        _ => {
            return Err(ConvertError::Diagram(DiagramError::Invalid(
                "string legs are unattached".into(),
            )));
        }
    }
    let boundary = boundary.map(|b| b.into_iter().flatten().collect::<Vec<_>>());
    let circles = d
        .circles
        .iter()
        .map(|p| match p {
            crate::diagram::Placement::Face(disc, seg) if !removed.contains(disc) => {
                crate::diagram::Placement::Face(remap[*disc], *seg)
            }
            crate::diagram::Placement::Face(..) => crate::diagram::Placement::Plane,
            crate::diagram::Placement::Plane => crate::diagram::Placement::Plane,
        })
        .collect();
    let mut nesting = BTreeMap::new();
    for (&key, &place) in &d.nesting {
        if removed.contains(&key) {
            continue;
        }
        let place = match place {
            crate::diagram::Placement::Face(disc, seg) if !removed.contains(&disc) => {
                crate::diagram::Placement::Face(remap[disc], seg)
            }
            crate::diagram::Placement::Face(..) => crate::diagram::Placement::Plane,
            other => other,
        };
        nesting.insert(remap[key], place);
    }
    Ok(Diagram {
        group: d.group.clone(),
        word: d.word.clone(),
        discs,
        arcs,
        boundary,
        circles,
        nesting,
    })
}

/// Outcome of a full conversion.
#[derive(Debug, Clone)]
pub struct Converted {
    pub diagram: Diagram,
    pub hypotheses: WorkingHypotheses,
    /// Whether the output is irreducible, when the input was; conversion is
    /// expected to preserve irreducibility and this records the check.
    pub irreducibility_preserved: Option<bool>,
}

/// Convert a valid w-diagram over an amenable word into a W-diagram over
/// `Gamma` by expanding every main disc and normalizing.
pub fn convert(d: &Diagram, witness: &BlownUpWord) -> Result<Converted, ConvertError> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(ConvertError::InvalidInput(format!("{:?}", report.failures)));
    }
    let hyp = WorkingHypotheses::new(&d.group, witness)?;
    // The witness must assemble to the diagram's word.
    let w_check = assemble_blowup(&d.group, witness)?;
    if !w_check.cyclic_eq(&d.word) {
        return Err(ConvertError::WitnessMismatch);
    }
    let expanded_w = expand_disc(&hyp, witness, false)?;
    let pairs_w = pair_s_legs(&expanded_w)?;
    let frag_w = insert_twolegs_and_absorb(&hyp, &expanded_w, &pairs_w)?;
    let expanded_bar = expand_disc(&hyp, witness, true)?;
    let pairs_bar = pair_s_legs(&expanded_bar)?;
    let frag_bar = insert_twolegs_and_absorb(&hyp, &expanded_bar, &pairs_bar)?;

    let mut out = Diagram::new(hyp.gamma.clone(), hyp.w0.clone());
    // Per input disc: its fragment's discs, with an offset map.
    let mut outer_map: Vec<Vec<(usize, usize)>> = Vec::new();
    for disc in &d.discs {
        let frag = match disc.kind {
            DiscKind::W => &frag_w,
            DiscKind::WBar => &frag_bar,
            _ => {
                return Err(ConvertError::UnsupportedDisc(
                    "two-leg discs cannot be converted again".into(),
                ))
            }
        };
        let offset = out.discs.len();
        for fd in &frag.discs {
            out.add_disc(fd.clone());
        }
        for &((d1, s1), (d2, s2)) in &frag.arcs {
            out.add_arc((offset + d1, s1), (offset + d2, s2));
        }
        outer_map.push(
            frag.outer.iter().map(|&(fd, fs)| (offset + fd, fs)).collect(),
        );
    }
    for arc in &d.arcs {
        let (d1, s1) = arc.ends[0];
        let (d2, s2) = arc.ends[1];
        out.add_arc(outer_map[d1][s1], outer_map[d2][s2]);
    }
    if let Some(boundary) = &d.boundary {
        out.boundary = Some(
            boundary.iter().map(|&(disc, slot)| outer_map[disc][slot]).collect(),
        );
    }
    out.circles = d.circles.clone();
    // Nested components keep their hosts' identities through the main discs.
    for (&key, &place) in &d.nesting {
        let new_key = outer_map[key][0].0;
        let place = match place {
            crate::diagram::Placement::Face(host, seg) => {
                crate::diagram::Placement::Face(outer_map[host][seg].0, outer_map[host][seg].1)
            }
            other => other,
        };
        out.nesting.insert(out.components()[new_key], place);
    }
    let input_irreducible = d.is_irreducible().verdict();
    let normalized = normalize_w_diagram(&out)?;
    let irreducibility_preserved = if input_irreducible {
        Some(normalized.is_irreducible().verdict())
    } else {
        None
    };
    Ok(Converted { diagram: normalized, hypotheses: hyp, irreducibility_preserved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::TShape;
    use crate::word::recover_blowup;

    fn free(names: &[&str]) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::free(names))
    }

    fn classic_word(spec: &Arc<GroupSpec>) -> RelWord {
        RelWord::parse(spec.clone(), "a T T b T' T' c d T' e T T").unwrap()
    }

    #[test]
    fn expand_matches_classic_counts() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let hyp = WorkingHypotheses::new(&spec, &witness).unwrap();
        let expanded = expand_disc(&hyp, &witness, false).unwrap();
        assert_eq!(expanded.outer.len(), 7);
        assert_eq!(expanded.t_leg_count(), 3);
        assert_eq!(expanded.s_leg_count(), 12);
        assert_eq!(expanded.ring_arcs.len(), 4);

        let mirrored = expand_disc(&hyp, &witness, true).unwrap();
        assert_eq!(mirrored.outer.len(), 7);
        assert_eq!(mirrored.s_leg_count(), 12);
    }

    #[test]
    fn pairing_is_nested_and_coherent() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let hyp = WorkingHypotheses::new(&spec, &witness).unwrap();
        let expanded = expand_disc(&hyp, &witness, false).unwrap();
        let pairs = pair_s_legs(&expanded).unwrap();
        assert_eq!(pairs.len(), 6);
        for p in &pairs {
            assert_eq!(expanded.disc.legs[p.minus].sign, Sign::Minus);
            assert_eq!(expanded.disc.legs[p.plus].sign, Sign::Plus);
            assert!(p.minus < p.plus);
        }
        // Nesting depth reaches the slot max level 2 but not m = 3.
        let max_depth = pairs.iter().map(|p| p.depth).max().unwrap();
        assert_eq!(max_depth, 1); // depth is 0-based: two nested pairs
    }

    #[test]
    fn conversion_fragment_shapes() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let mut d = Diagram::new(spec.clone(), w.clone());
        let dw = d.add_w_disc();
        d.boundary = Some((0..w.num_letters()).map(|s| (dw, s)).collect());
        assert!(d.validate().is_valid());
        let converted = convert(&d, &witness).unwrap();
        let out = &converted.diagram;
        let report = out.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        // Outer boundary shape is the original word's shape.
        let z = out.boundary_word().unwrap();
        assert!(z
            .shape()
            .cyclic_eq(&TShape::parse("T T T' T' T' T T").unwrap()));
        // The main disc has the root shape.
        let main = &out.discs[0];
        assert!(main.kind.is_main());
        assert_eq!(main.legs.len(), 3);
        let main_shape = TShape::new(main.legs.iter().map(|l| l.sign).collect());
        assert!(main_shape.cyclic_eq(&TShape::parse("T T T'").unwrap()));
        // Six two-leg discs carry the conjugated letters.
        let twolegs = out
            .discs
            .iter()
            .filter(|disc| !disc.kind.is_main())
            .count();
        assert_eq!(twolegs, 6);
    }

    #[test]
    fn complexity_one_is_identity_transformation() {
        let spec = free(&["a", "b"]);
        let w = RelWord::parse(spec.clone(), "T a T' b").unwrap();
        let witness = recover_blowup(&w).unwrap();
        let mut d = Diagram::new(spec.clone(), w.clone());
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        d.add_arc((dw, 0), (db, 1));
        d.add_arc((dw, 1), (db, 0));
        let converted = convert(&d, &witness).unwrap();
        let out = &converted.diagram;
        assert_eq!(out.discs.len(), 2);
        assert_eq!(out.arcs.len(), 2);
        assert!(out.validate().is_valid());
        // Same combinatorics, now over Gamma.
        assert!(out.group.lookup("s").is_some());
    }

    #[test]
    fn converted_mirror_pair_reduces_to_empty() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let n = w.num_letters();
        let mut d = Diagram::new(spec.clone(), w.clone());
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        for occ in 0..n {
            d.add_arc((dw, occ), (db, n - 1 - occ));
        }
        assert!(d.validate().is_valid());
        assert!(!d.is_irreducible().verdict());
        let converted = convert(&d, &witness).unwrap();
        let out = &converted.diagram;
        let report = out.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        assert!(!out.is_irreducible().verdict());
        assert!(converted.irreducibility_preserved.is_none());
        let reduced = out.reduce().unwrap();
        assert!(reduced.is_empty(), "left with {} discs", reduced.discs.len());
    }

    #[test]
    fn normalize_is_idempotent() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let mut d = Diagram::new(spec.clone(), w.clone());
        let dw = d.add_w_disc();
        d.boundary = Some((0..w.num_letters()).map(|s| (dw, s)).collect());
        let converted = convert(&d, &witness).unwrap();
        let once = normalize_w_diagram(&converted.diagram).unwrap();
        assert!(once.isomorphic(&converted.diagram));
    }

    #[test]
    fn four_disc_example_converts_over_torsion_group() {
        let d = crate::search::construct_four_disc_example().unwrap();
        let witness = recover_blowup(&d.word).unwrap();
        let converted = convert(&d, &witness).unwrap();
        let out = &converted.diagram;
        let report = out.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        assert!(out.is_irreducible().verdict());
        assert_eq!(converted.irreducibility_preserved, Some(true));
        assert!(out.group.has_torsion());
    }

    #[test]
    fn working_hypotheses_windows() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = classic_word(&spec);
        let witness = recover_blowup(&w).unwrap();
        let hyp = WorkingHypotheses::new(&spec, &witness).unwrap();
        assert_eq!(hyp.m, 3);
        assert_eq!(hyp.h_window, (0, 1));
        assert_eq!(hyp.h_prime_window, (1, 2));
        assert_eq!(hyp.phi_shift, 1);
        assert_eq!(hyp.w0.num_letters(), 3);
    }
}

