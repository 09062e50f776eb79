//! The combinatorial planar-map model of w-diagrams, W-diagrams and diagrams
//! with boundary: validation, region words, irreducibility, dipole reduction.
//!
//! Planarity is encoded combinatorially: the anticlockwise leg order of each
//! disc is a rotation system, faces come from corner traversal, and the genus
//! is checked through the Euler count. No coordinates anywhere.

mod canon;
mod format;

pub use canon::CanonicalForm;
pub use format::{parse_diagram, print_diagram};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::group::{GroupElement, GroupSpec};
use crate::shape::{Sign, TShape};
use crate::word::{KCanonical, RelWord, Token, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("disc {0} does not exist")]
    NoSuchDisc(usize),
    #[error("disc {disc} has no leg {slot}")]
    NoSuchLeg { disc: usize, slot: usize },
    #[error("diagram is structurally invalid: {0}")]
    Invalid(String),
    #[error("diagram has a boundary")]
    HasBoundary,
    #[error("diagram has no boundary")]
    NoBoundary,
    #[error("reduction produced an arc with both ends on the boundary")]
    ChordProduced,
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Which letter a leg carries. `S` legs exist only in the intermediate
/// diagrams of the conversion pipeline; serialized diagrams are all-`T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LegLetter {
    T,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Leg {
    pub letter: LegLetter,
    /// Exponent read when crossing this leg anticlockwise around the disc.
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscKind {
    W,
    WBar,
    TwoLeg(KCanonical),
    TwoLegBar(KCanonical),
}

impl DiscKind {
    pub fn is_main(&self) -> bool {
        matches!(self, DiscKind::W | DiscKind::WBar)
    }

    pub fn is_reflected(&self) -> bool {
        matches!(self, DiscKind::WBar | DiscKind::TwoLegBar(_))
    }
}

/// A disc with its legs in anticlockwise order and the boundary-segment
/// label after each leg. The basepoint sits immediately before leg 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disc {
    pub kind: DiscKind,
    pub legs: Vec<Leg>,
    pub segs: Vec<GroupElement>,
}

pub(crate) enum LabelToken {
    Leg(LegLetter, Sign),
    Coeff(GroupElement),
}

/// Fold a typed label into (legs, segments-after-leg); a leading coefficient
/// wraps behind the final leg. Labels are taken literally, never reduced.
pub(crate) fn fold_label(
    spec: &GroupSpec,
    tokens: Vec<LabelToken>,
) -> (Vec<Leg>, Vec<GroupElement>) {
    let mut lead = GroupElement::identity();
    let mut legs: Vec<Leg> = Vec::new();
    let mut segs: Vec<GroupElement> = Vec::new();
    for token in tokens {
        match token {
            LabelToken::Leg(letter, sign) => {
                legs.push(Leg { letter, sign });
                segs.push(GroupElement::identity());
            }
            LabelToken::Coeff(g) => match segs.last_mut() {
                Some(c) => *c = spec.multiply(c, &g),
                None => lead = spec.multiply(&lead, &g),
            },
        }
    }
    if let Some(last) = segs.last_mut() {
        *last = spec.multiply(last, &lead);
    }
    (legs, segs)
}

pub(crate) fn invert_label(spec: &GroupSpec, tokens: Vec<LabelToken>) -> Vec<LabelToken> {
    tokens
        .into_iter()
        .rev()
        .map(|t| match t {
            LabelToken::Leg(letter, sign) => LabelToken::Leg(letter, sign.opposite()),
            LabelToken::Coeff(g) => LabelToken::Coeff(spec.inverse(&g)),
        })
        .collect()
}

fn word_label_tokens(word: &RelWord) -> Vec<LabelToken> {
    let mut out = Vec::new();
    for (sign, coeff) in word.letters() {
        out.push(LabelToken::Leg(LegLetter::T, *sign));
        if !coeff.is_identity() {
            out.push(LabelToken::Coeff(coeff.clone()));
        }
    }
    out
}

impl Disc {
    pub fn new_w(word: &RelWord) -> Disc {
        let (legs, segs) = fold_label(&word.spec, word_label_tokens(word));
        Disc { kind: DiscKind::W, legs, segs }
    }

    pub fn new_wbar(word: &RelWord) -> Disc {
        let tokens = invert_label(&word.spec, word_label_tokens(word));
        let (legs, segs) = fold_label(&word.spec, tokens);
        Disc { kind: DiscKind::WBar, legs, segs }
    }

    /// A two-leg disc labelled `t^-1 h t (h^s)^-1`, with the s-letters of the
    /// coefficients already absorbed into the labels (all-T legs). `s_gen`
    /// names `s` inside `gamma`.
    pub fn new_twoleg(gamma: &GroupSpec, s_gen: usize, h: &KCanonical, reflected: bool) -> Disc {
        let h_elem = h.as_group_element(gamma, s_gen);
        let h_phi = h.shifted(1).as_group_element(gamma, s_gen);
        let tokens = vec![
            LabelToken::Leg(LegLetter::T, Sign::Minus),
            LabelToken::Coeff(h_elem),
            LabelToken::Leg(LegLetter::T, Sign::Plus),
            LabelToken::Coeff(gamma.inverse(&h_phi)),
        ];
        let kind = if reflected {
            DiscKind::TwoLegBar(h.clone())
        } else {
            DiscKind::TwoLeg(h.clone())
        };
        let tokens = if reflected { invert_label(gamma, tokens) } else { tokens };
        let (legs, segs) = fold_label(gamma, tokens);
        Disc { kind, legs, segs }
    }

    /// A disc built from an explicit typed label (the conversion pipeline's
    /// blown discs with live s-legs).
    pub(crate) fn from_label(
        spec: &GroupSpec,
        kind: DiscKind,
        tokens: Vec<LabelToken>,
    ) -> Disc {
        let (legs, segs) = fold_label(spec, tokens);
        Disc { kind, legs, segs }
    }

    /// A two-leg disc whose `h` and `h^s` coefficients still expose their
    /// s-letters as live S-legs (the state between insertion and absorption).
    pub fn new_twoleg_open(spec: &GroupSpec, h: &KCanonical, reflected: bool) -> Disc {
        let mut tokens = vec![LabelToken::Leg(LegLetter::T, Sign::Minus)];
        tokens.extend(s_tokens_as_label(h));
        tokens.push(LabelToken::Leg(LegLetter::T, Sign::Plus));
        let phi_tokens = s_tokens_as_label(&h.shifted(1));
        tokens.extend(invert_label(spec, phi_tokens));
        let kind = if reflected {
            DiscKind::TwoLegBar(h.clone())
        } else {
            DiscKind::TwoLeg(h.clone())
        };
        let tokens = if reflected { invert_label(spec, tokens) } else { tokens };
        let (legs, segs) = fold_label(spec, tokens);
        Disc { kind, legs, segs }
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    /// Word occurrence of a T-leg relative to the basepoint, counted among
    /// T-legs only: direct for W discs, mirrored for reflected ones.
    pub fn occurrence(&self, slot: usize) -> Option<usize> {
        if self.legs[slot].letter != LegLetter::T {
            return None;
        }
        let t_index = self.legs[..slot]
            .iter()
            .filter(|l| l.letter == LegLetter::T)
            .count();
        let total = self.legs.iter().filter(|l| l.letter == LegLetter::T).count();
        if self.kind.is_reflected() {
            Some(total - 1 - t_index)
        } else {
            Some(t_index)
        }
    }
}

fn s_tokens_as_label(k: &KCanonical) -> Vec<LabelToken> {
    k.s_word_tokens()
        .into_iter()
        .map(|t| match t {
            Token::Letter(sign) => LabelToken::Leg(LegLetter::S, sign),
            Token::Coeff(g) => LabelToken::Coeff(g),
        })
        .collect()
}

/// One t-arc (or s-arc), matching two legs with opposite anticlockwise
/// exponents and equal letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagArc {
    pub ends: [(usize, usize); 2],
}

impl DiagArc {
    pub fn new(a: (usize, usize), b: (usize, usize)) -> DiagArc {
        DiagArc { ends: [a, b] }
    }
}

/// Where a t-circle or a nested component sits: the plane, or a face of
/// another component identified by a (disc, segment) corner it collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Placement {
    Plane,
    Face(usize, usize),
}

#[derive(Debug, Clone)]
pub struct Diagram {
    pub group: Arc<GroupSpec>,
    /// The ambient word labelling W and WBar discs.
    pub word: RelWord,
    pub discs: Vec<Disc>,
    pub arcs: Vec<DiagArc>,
    /// Terminals on S^1 in anticlockwise order, when the diagram has one.
    pub boundary: Option<Vec<(usize, usize)>>,
    pub circles: Vec<Placement>,
    /// Placement of each connected component, keyed by its least disc id;
    /// missing entries mean the plane.
    pub nesting: BTreeMap<usize, Placement>,
}

impl Diagram {
    pub fn new(group: Arc<GroupSpec>, word: RelWord) -> Diagram {
        Diagram {
            group,
            word,
            discs: Vec::new(),
            arcs: Vec::new(),
            boundary: None,
            circles: Vec::new(),
            nesting: BTreeMap::new(),
        }
    }

    pub fn add_w_disc(&mut self) -> usize {
        self.discs.push(Disc::new_w(&self.word));
        self.discs.len() - 1
    }

    pub fn add_wbar_disc(&mut self) -> usize {
        self.discs.push(Disc::new_wbar(&self.word));
        self.discs.len() - 1
    }

    pub fn add_disc(&mut self, disc: Disc) -> usize {
        self.discs.push(disc);
        self.discs.len() - 1
    }

    pub fn add_arc(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.arcs.push(DiagArc::new(a, b));
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_none()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty() && self.circles.is_empty()
    }

    /// Component id (least member disc index) for every disc.
    pub fn components(&self) -> Vec<usize> {
        let n = self.discs.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for arc in &self.arcs {
            let a = find(&mut parent, arc.ends[0].0);
            let b = find(&mut parent, arc.ends[1].0);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    fn attachments(&self) -> Result<Vec<Vec<Attachment>>, Vec<Failure>> {
        let mut failures = Vec::new();
        let mut att: Vec<Vec<Attachment>> = self
            .discs
            .iter()
            .map(|d| vec![Attachment::Free; d.num_legs()])
            .collect();
        let mut set = |disc: usize, slot: usize, a: Attachment, failures: &mut Vec<Failure>| {
            if disc >= att.len() || slot >= att[disc].len() {
                failures.push(Failure::Incidence(format!(
                    "reference to missing leg ({}, {slot})",
                    DiscId(disc)
                )));
                return;
            }
            if att[disc][slot] != Attachment::Free {
                failures.push(Failure::Incidence(format!(
                    "leg ({}, {slot}) used twice",
                    DiscId(disc)
                )));
                return;
            }
            att[disc][slot] = a;
        };
        for (i, arc) in self.arcs.iter().enumerate() {
            for (e, &(disc, slot)) in arc.ends.iter().enumerate() {
                set(disc, slot, Attachment::Arc(i, e), &mut failures);
            }
        }
        if let Some(boundary) = &self.boundary {
            for (p, &(disc, slot)) in boundary.iter().enumerate() {
                set(disc, slot, Attachment::Boundary(p), &mut failures);
            }
        }
        for (d, legs) in att.iter().enumerate() {
            for (s, a) in legs.iter().enumerate() {
                if *a == Attachment::Free {
                    failures.push(Failure::Incidence(format!(
                        "leg ({}, {s}) is not matched by an arc or boundary point",
                        DiscId(d)
                    )));
                }
            }
        }
        for arc in &self.arcs {
            let (d1, s1) = arc.ends[0];
            let (d2, s2) = arc.ends[1];
            if d1 < self.discs.len()
                && d2 < self.discs.len()
                && s1 < self.discs[d1].num_legs()
                && s2 < self.discs[d2].num_legs()
            {
                let l1 = self.discs[d1].legs[s1];
                let l2 = self.discs[d2].legs[s2];
                if l1.letter != l2.letter {
                    failures.push(Failure::Incidence(format!(
                        "arc ({},{s1})-({},{s2}) joins different letters",
                        DiscId(d1),
                        DiscId(d2)
                    )));
                }
                if l1.sign != l2.sign.opposite() {
                    failures.push(Failure::Orientation(format!(
                        "arc ({},{s1})-({},{s2}) ends carry equal anticlockwise exponents",
                        DiscId(d1),
                        DiscId(d2)
                    )));
                }
            }
        }
        if failures.is_empty() {
            Ok(att)
        } else {
            Err(failures)
        }
    }

    /// Faces of the ribbon structure by corner traversal.
    pub fn faces(&self) -> Result<Faces, DiagramError> {
        let att = self
            .attachments()
            .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
        Ok(self.faces_with(&att))
    }

    fn faces_with(&self, att: &[Vec<Attachment>]) -> Faces {
        let components = self.components();
        let boundary_len = self.boundary.as_ref().map(|b| b.len()).unwrap_or(0);
        let mut darts: Vec<Dart> = Vec::new();
        for (i, _) in self.arcs.iter().enumerate() {
            darts.push(Dart::Arc { arc: i, to_end: 0 });
            darts.push(Dart::Arc { arc: i, to_end: 1 });
        }
        for p in 0..boundary_len {
            darts.push(Dart::FromBoundary { pos: p });
            darts.push(Dart::ToBoundary { pos: p });
        }
        darts.sort();
        let leave_from = |disc: usize, slot: usize| -> Dart {
            match att[disc][slot] {
                Attachment::Arc(a, e) => Dart::Arc { arc: a, to_end: 1 - e },
                Attachment::Boundary(p) => Dart::ToBoundary { pos: p },
                Attachment::Free => unreachable!("validated attachments"),
            }
        };
        let next = |d: Dart| -> (Dart, FaceItem) {
            match d {
                Dart::Arc { arc, to_end } => {
                    let (disc, slot) = self.arcs[arc].ends[to_end];
                    let n = self.discs[disc].num_legs();
                    let q = (slot + n - 1) % n;
                    (leave_from(disc, q), FaceItem::Corner { disc, seg: q })
                }
                Dart::FromBoundary { pos } => {
                    let (disc, slot) = self.boundary.as_ref().unwrap()[pos];
                    let n = self.discs[disc].num_legs();
                    let q = (slot + n - 1) % n;
                    (leave_from(disc, q), FaceItem::Corner { disc, seg: q })
                }
                Dart::ToBoundary { pos } => {
                    let to = (pos + 1) % boundary_len;
                    (Dart::FromBoundary { pos: to }, FaceItem::Stretch { from: pos, to })
                }
            }
        };
        let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
        let mut faces: Vec<Face> = Vec::new();
        for &start in &darts {
            if face_of.contains_key(&start) {
                continue;
            }
            let id = faces.len();
            let mut items = Vec::new();
            let mut orbit = Vec::new();
            let mut word = GroupElement::identity();
            let mut touches_boundary = false;
            let mut anchor: Option<(usize, usize)> = None;
            let mut component = usize::MAX;
            let mut d = start;
            loop {
                face_of.insert(d, id);
                orbit.push(d);
                let (nd, item) = next(d);
                match item {
                    FaceItem::Corner { disc, seg } => {
                        // Region words read each disc segment inverted: the
                        // traversal walks every disc clockwise.
                        let label = self.group.inverse(&self.discs[disc].segs[seg]);
                        word = self.group.multiply(&word, &label);
                        component = component.min(components[disc]);
                        let c = (disc, seg);
                        if anchor.is_none_or(|a| c < a) {
                            anchor = Some(c);
                        }
                    }
                    FaceItem::Stretch { .. } => touches_boundary = true,
                }
                items.push(item);
                d = nd;
                if d == start {
                    break;
                }
            }
            faces.push(Face {
                items,
                orbit,
                word,
                component,
                touches_boundary,
                anchor: anchor.expect("every face collects a corner"),
            });
        }
        Faces { faces, face_of }
    }

    /// Full validation: incidence, arc orientation, genus, nesting, and
    /// region-word triviality. Failures are report entries, not errors.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        if self.discs.is_empty() {
            if let Some(b) = &self.boundary {
                if !b.is_empty() {
                    failures.push(Failure::Incidence(
                        "boundary points without discs".into(),
                    ));
                }
            }
            if !self.nesting.is_empty() {
                failures.push(Failure::Nesting("nesting entries without discs".into()));
            }
            return ValidationReport { failures, faces: None };
        }
        let att = match self.attachments() {
            Ok(att) => att,
            Err(mut f) => {
                failures.append(&mut f);
                return ValidationReport { failures, faces: None };
            }
        };
        let faces = self.faces_with(&att);
        let components = self.components();
        let comp_ids: BTreeSet<usize> = components.iter().copied().collect();

        // Euler characteristic 2 per component (t-circles excluded; the
        // boundary circle and its terminals count as one extra vertex with
        // its terminal edges).
        let boundary_comps: BTreeSet<usize> = self
            .boundary
            .iter()
            .flat_map(|b| b.iter().map(|&(d, _)| components[d]))
            .collect();
        let terminal_count = self.boundary.as_ref().map(|b| b.len()).unwrap_or(0);
        let mut closed_counts: BTreeMap<usize, (i64, i64, i64)> = BTreeMap::new();
        let mut union_counts = (0i64, 0i64, 0i64);
        for &c in &comp_ids {
            let v = components.iter().filter(|&&x| x == c).count() as i64;
            let e = self
                .arcs
                .iter()
                .filter(|a| components[a.ends[0].0] == c)
                .count() as i64;
            let f = faces.faces.iter().filter(|f| f.component == c).count() as i64;
            if boundary_comps.contains(&c) {
                union_counts.0 += v;
                union_counts.1 += e;
                union_counts.2 += f;
            } else {
                closed_counts.insert(c, (v, e, f));
            }
        }
        for (c, (v, e, f)) in &closed_counts {
            if v - e + f != 2 {
                failures.push(Failure::Genus(format!(
                    "component {}: discs - arcs + regions = {} (want 2)",
                    DiscId(*c),
                    v - e + f
                )));
            }
        }
        if !boundary_comps.is_empty() {
            let (v, e, f) = union_counts;
            let chi = (v + 1) - (e + terminal_count as i64) + f;
            if chi != 2 {
                failures.push(Failure::Genus(format!(
                    "boundary part: Euler count {chi} (want 2)"
                )));
            }
        }

        // Nesting wellformedness and the outer-face rules.
        let mut placements: BTreeMap<usize, Placement> = BTreeMap::new();
        for &c in &comp_ids {
            placements.insert(c, Placement::Plane);
        }
        for (&key, &place) in &self.nesting {
            if key >= self.discs.len() || components[key] != key {
                failures.push(Failure::Nesting(format!(
                    "nesting key {} is not a component representative",
                    DiscId(key)
                )));
                continue;
            }
            placements.insert(key, place);
        }
        for (&c, &place) in &placements {
            if let Placement::Face(d, s) = place {
                if d >= self.discs.len() || s >= self.discs[d].num_legs() {
                    failures.push(Failure::Nesting(format!(
                        "component {} nested in missing corner ({}, {s})",
                        DiscId(c),
                        DiscId(d)
                    )));
                    continue;
                }
                if components[d] == c {
                    failures.push(Failure::Nesting(format!(
                        "component {} nested in itself",
                        DiscId(c)
                    )));
                }
                // Walk up the parent chain to detect cycles.
                let mut cur = components[d];
                let mut depth_guard = 0;
                while let Some(Placement::Face(pd, _)) = placements.get(&cur) {
                    cur = components[*pd];
                    depth_guard += 1;
                    if cur == c || depth_guard > placements.len() {
                        failures.push(Failure::Nesting(format!(
                            "nesting cycle through component {}",
                            DiscId(c)
                        )));
                        break;
                    }
                }
            }
        }
        for (i, place) in self.circles.iter().enumerate() {
            if let Placement::Face(d, s) = place {
                if *d >= self.discs.len() || *s >= self.discs[*d].num_legs() {
                    failures.push(Failure::Nesting(format!(
                        "circle {i} placed in missing corner ({}, {s})",
                        DiscId(*d)
                    )));
                }
            }
        }

        // Region words. Faces touching the boundary are outside regions and
        // unconstrained; otherwise each component may keep one nontrivial
        // face as its outer region, except that nested components sit inside
        // an inside region, so all their faces must be trivial.
        let outer = self.outer_faces(&faces, &placements, &boundary_comps);
        for (i, face) in faces.faces.iter().enumerate() {
            if face.touches_boundary {
                continue;
            }
            if outer.get(&face.component) == Some(&i) {
                continue;
            }
            if !face.word.is_identity() {
                failures.push(Failure::Region {
                    anchor: face.anchor,
                    word: face.word.clone(),
                });
            }
        }
        // A nested component's designated outer face must also be trivial.
        for (&c, &place) in &placements {
            if matches!(place, Placement::Face(..)) {
                if let Some(&fi) = outer.get(&c) {
                    let face = &faces.faces[fi];
                    if !face.word.is_identity() {
                        failures.push(Failure::Region {
                            anchor: face.anchor,
                            word: face.word.clone(),
                        });
                    }
                }
            }
        }
        // Boundary diagrams: every plane-placed component must touch S^1.
        if self.boundary.is_some() {
            for (&c, &place) in &placements {
                if place == Placement::Plane && !boundary_comps.contains(&c) {
                    failures.push(Failure::Nesting(format!(
                        "component {} floats in an outside region; nest it in an inside region",
                        DiscId(c)
                    )));
                }
            }
        }
        ValidationReport { failures, faces: Some(faces) }
    }

    /// The designated outer face per closed component: the unique nontrivial
    /// face if there is one, else the largest face (ties by anchor).
    fn outer_faces(
        &self,
        faces: &Faces,
        placements: &BTreeMap<usize, Placement>,
        boundary_comps: &BTreeSet<usize>,
    ) -> BTreeMap<usize, usize> {
        let mut outer = BTreeMap::new();
        for &c in placements.keys() {
            if boundary_comps.contains(&c) {
                continue;
            }
            let ids: Vec<usize> = (0..faces.faces.len())
                .filter(|&i| faces.faces[i].component == c)
                .collect();
            let nontrivial: Vec<usize> = ids
                .iter()
                .copied()
                .filter(|&i| !faces.faces[i].word.is_identity())
                .collect();
            let pick = match nontrivial.len() {
                1 => nontrivial[0],
                _ => ids
                    .iter()
                    .copied()
                    .max_by(|&a, &b| {
                        let ka = (faces.faces[a].corner_count(), std::cmp::Reverse(faces.faces[a].anchor));
                        let kb = (faces.faces[b].corner_count(), std::cmp::Reverse(faces.faces[b].anchor));
                        ka.cmp(&kb)
                    })
                    .unwrap_or(usize::MAX),
            };
            if pick != usize::MAX {
                outer.insert(c, pick);
            }
        }
        outer
    }

    /// Faces together with the designated outer face of each component;
    /// used by the cycle reader.
    pub fn faces_and_outer(
        &self,
    ) -> Result<(Faces, BTreeMap<usize, usize>), DiagramError> {
        let att = self
            .attachments()
            .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
        let faces = self.faces_with(&att);
        let components = self.components();
        let mut placements: BTreeMap<usize, Placement> = components
            .iter()
            .map(|&c| (c, Placement::Plane))
            .collect();
        for (&k, &v) in &self.nesting {
            placements.insert(k, v);
        }
        let boundary_comps: BTreeSet<usize> = self
            .boundary
            .iter()
            .flat_map(|b| b.iter().map(|&(d, _)| components[d]))
            .collect();
        let outer = self.outer_faces(&faces, &placements, &boundary_comps);
        Ok((faces, outer))
    }

    /// Component placements with the plane as default.
    pub fn placements(&self) -> BTreeMap<usize, Placement> {
        let components = self.components();
        let mut p: BTreeMap<usize, Placement> =
            components.iter().map(|&c| (c, Placement::Plane)).collect();
        for (&k, &v) in &self.nesting {
            p.insert(k, v);
        }
        p
    }

    /// Every region with its word; requires structural validity.
    pub fn region_words(&self) -> Result<Vec<Region>, DiagramError> {
        let att = self
            .attachments()
            .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
        let faces = self.faces_with(&att);
        let placements: BTreeMap<usize, Placement> = {
            let components = self.components();
            let mut p: BTreeMap<usize, Placement> = components
                .iter()
                .map(|&c| (c, Placement::Plane))
                .collect();
            for (&k, &v) in &self.nesting {
                p.insert(k, v);
            }
            p
        };
        let boundary_comps: BTreeSet<usize> = {
            let components = self.components();
            self.boundary
                .iter()
                .flat_map(|b| b.iter().map(|&(d, _)| components[d]))
                .collect()
        };
        let outer = self.outer_faces(&faces, &placements, &boundary_comps);
        Ok(faces
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| Region {
                corners: f
                    .items
                    .iter()
                    .filter_map(|it| match it {
                        FaceItem::Corner { disc, seg } => Some((*disc, *seg)),
                        FaceItem::Stretch { .. } => None,
                    })
                    .collect(),
                word: f.word.clone(),
                is_outer: outer.get(&f.component) == Some(&i),
                touches_boundary: f.touches_boundary,
            })
            .collect())
    }

    /// The four irreducibility components and the combined verdict.
    pub fn is_irreducible(&self) -> IrreducibilityReport {
        let components = self.components();
        let comp_count = components.iter().collect::<BTreeSet<_>>().len();
        let connected = if self.discs.is_empty() {
            self.circles.len() == 1
        } else {
            comp_count == 1 && self.circles.is_empty()
        };
        let has_main_disc = self.discs.iter().any(|d| d.kind.is_main());
        let dipole_free = self.find_dipole().is_none();
        let twoleg_strings_ok = self.trivial_string().is_none();
        IrreducibilityReport {
            connected,
            has_main_disc,
            dipole_free,
            twoleg_strings_ok,
        }
    }

    /// An arc joining the same basepoint-relative occurrence on a W disc and
    /// a WBar disc, if any.
    fn find_dipole(&self) -> Option<usize> {
        self.arcs.iter().position(|arc| self.arc_is_dipole(arc))
    }

    fn arc_is_dipole(&self, arc: &DiagArc) -> bool {
        let (d1, s1) = arc.ends[0];
        let (d2, s2) = arc.ends[1];
        let k1 = &self.discs[d1].kind;
        let k2 = &self.discs[d2].kind;
        let (w_end, bar_end) = match (k1, k2) {
            (DiscKind::W, DiscKind::WBar) => ((d1, s1), (d2, s2)),
            (DiscKind::WBar, DiscKind::W) => ((d2, s2), (d1, s1)),
            _ => return false,
        };
        let occ_w = self.discs[w_end.0].occurrence(w_end.1);
        let occ_bar = self.discs[bar_end.0].occurrence(bar_end.1);
        occ_w.is_some() && occ_w == occ_bar
    }

    /// A consecutive string of two-leg discs whose h-product is trivial;
    /// public for the conversion pipeline's normalization step.
    pub fn trivial_twoleg_string(&self) -> Option<Vec<usize>> {
        self.trivial_string()
    }

    /// Attachment of every leg (arc end or boundary terminal); fails with
    /// the incidence report when a leg is unmatched or doubly used.
    pub(crate) fn attachment_table(&self) -> Result<Vec<Vec<Attachment>>, Vec<Failure>> {
        self.attachments()
    }

    /// A consecutive string of two-leg discs whose h-product is trivial.
    fn trivial_string(&self) -> Option<Vec<usize>> {
        let att = self.attachments().ok()?;
        // Chain edges: slot 1 (the t-leg) of one two-leg disc to slot 0
        // (the t^-1-leg) of the next.
        let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
        for (d, disc) in self.discs.iter().enumerate() {
            if disc.kind.is_main() {
                continue;
            }
            if let Attachment::Arc(a, e) = att[d][1] {
                let (od, os) = self.arcs[a].ends[1 - e];
                if os == 0 && !self.discs[od].kind.is_main() {
                    succ.insert(d, od);
                }
            }
        }
        let contribution = |d: usize| -> KCanonical {
            match &self.discs[d].kind {
                DiscKind::TwoLeg(h) => h.clone(),
                DiscKind::TwoLegBar(h) => h.inverse(&self.group),
                _ => unreachable!(),
            }
        };
        // Check all windows along every chain and cycle.
        let starts: Vec<usize> = self
            .discs
            .iter()
            .enumerate()
            .filter(|(_, disc)| !disc.kind.is_main())
            .map(|(d, _)| d)
            .collect();
        for &start in &starts {
            let mut window = Vec::new();
            let mut product = KCanonical::identity();
            let mut cur = start;
            loop {
                window.push(cur);
                product = product.multiply(&self.group, &contribution(cur));
                if product.is_identity() {
                    return Some(window);
                }
                match succ.get(&cur) {
                    Some(&next) if next != start && window.len() < self.discs.len() => {
                        cur = next;
                    }
                    _ => break,
                }
            }
        }
        None
    }

    /// Remove dipole pairs until none remain; splices the orphaned legs
    /// pairwise through the vanished discs and deletes the t-circles this
    /// creates. Disc count strictly decreases per step.
    pub fn reduce(&self) -> Result<Diagram, DiagramError> {
        let mut current = self.clone();
        while let Some(arc_idx) = current.find_dipole() {
            current = current.remove_dipole(arc_idx)?;
        }
        Ok(current)
    }

    fn remove_dipole(&self, arc_idx: usize) -> Result<Diagram, DiagramError> {
        let arc = self.arcs[arc_idx];
        let (da, db) = (arc.ends[0].0, arc.ends[1].0);
        debug_assert!(da != db);
        let (d_w, d_bar) = if matches!(self.discs[da].kind, DiscKind::W) {
            (da, db)
        } else {
            (db, da)
        };
        let n = self.discs[d_w].num_legs();
        let (dd, ss) = if arc.ends[0].0 == d_w { arc.ends[0] } else { arc.ends[1] };
        let occ = self.discs[dd].occurrence(ss).expect("dipole arc lands on a t-leg");
        let att = self
            .attachments()
            .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
        let removed = [d_w, d_bar];
        let is_removed = |d: usize| removed.contains(&d);
        // For each occurrence o != occ, the fold glues the attachment at
        // (d_w, o) to the attachment at (d_bar, n-1-o). Legs of the removed
        // pair then form alternating splice/arc chains; each chain's two
        // outward ends reconnect, and closed chains become deleted circles.
        let mut splice: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for o in 0..n {
            if o == occ {
                continue;
            }
            let a = (d_w, o);
            let b = (d_bar, n - 1 - o);
            splice.insert(a, b);
            splice.insert(b, a);
        }
        #[derive(Clone, Copy, PartialEq, Eq, Debug)]
        enum External {
            ArcEnd(usize, usize),
            Boundary(usize),
        }
        // From a removed leg, step outward once: either external, or onward
        // to the next removed leg through an arc internal to the pair.
        let step_out = |leg: (usize, usize)| -> Result<External, Option<(usize, usize)>> {
            match att[leg.0][leg.1] {
                Attachment::Arc(a, e) => {
                    let other = self.arcs[a].ends[1 - e];
                    if is_removed(other.0) {
                        Err(Some(other))
                    } else {
                        Ok(External::ArcEnd(a, 1 - e))
                    }
                }
                Attachment::Boundary(p) => Ok(External::Boundary(p)),
                Attachment::Free => Err(None),
            }
        };
        let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut links: Vec<(External, External)> = Vec::new();
        for (&start, &partner) in &splice {
            if visited.contains(&start) {
                continue;
            }
            // Walk both outward directions of this splice.
            let walk = |mut leg: (usize, usize),
                        visited: &mut BTreeSet<(usize, usize)>|
             -> Option<External> {
                loop {
                    if !visited.insert(leg) {
                        return None; // closed loop
                    }
                    match step_out(leg) {
                        Ok(ext) => return Some(ext),
                        Err(Some(next_leg)) => {
                            if !visited.insert(next_leg) {
                                return None;
                            }
                            match splice.get(&next_leg) {
                                Some(&sp) => leg = sp,
                                None => return None,
                            }
                        }
                        Err(None) => return None,
                    }
                }
            };
            let out_a = walk(start, &mut visited);
            let out_b = walk(partner, &mut visited);
            if let (Some(x), Some(y)) = (out_a, out_b) {
                links.push((x, y));
            }
        }
        // Rebuild without the two discs and without arcs touching them.
        let mut remap = vec![usize::MAX; self.discs.len()];
        let mut discs = Vec::new();
        for (d, disc) in self.discs.iter().enumerate() {
            if !is_removed(d) {
                remap[d] = discs.len();
                discs.push(disc.clone());
            }
        }
        let mut arcs: Vec<DiagArc> = Vec::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if i != arc_idx && a.ends.iter().all(|&(d, _)| !is_removed(d)) {
                arcs.push(DiagArc::new(
                    (remap[a.ends[0].0], a.ends[0].1),
                    (remap[a.ends[1].0], a.ends[1].1),
                ));
            }
        }
        let mut boundary = self
            .boundary
            .as_ref()
            .map(|b| -> Vec<Option<(usize, usize)>> {
                b.iter()
                    .map(|&(d, s)| if is_removed(d) { None } else { Some((remap[d], s)) })
                    .collect()
            });
        for (x, y) in links {
            match (x, y) {
                (External::ArcEnd(a1, e1), External::ArcEnd(a2, e2)) => {
                    if a1 == a2 {
                        continue; // the arc closes into a circle: deleted
                    }
                    let (d1, s1) = self.arcs[a1].ends[e1];
                    let (d2, s2) = self.arcs[a2].ends[e2];
                    arcs.push(DiagArc::new((remap[d1], s1), (remap[d2], s2)));
                }
                (External::ArcEnd(a, e), External::Boundary(p))
                | (External::Boundary(p), External::ArcEnd(a, e)) => {
                    let (d, s) = self.arcs[a].ends[e];
                    if let Some(b) = boundary.as_mut() {
                        b[p] = Some((remap[d], s));
                    }
                }
                (External::Boundary(_), External::Boundary(_)) => {
                    return Err(DiagramError::ChordProduced);
                }
            }
        }
        let boundary = boundary.map(|b| b.into_iter().flatten().collect::<Vec<_>>());
        // Circle and nesting placements that referenced the removed discs
        // fall back to the plane.
        let circles = self
            .circles
            .iter()
            .map(|p| match p {
                Placement::Face(d, s) if !is_removed(*d) => Placement::Face(remap[*d], *s),
                Placement::Face(..) => Placement::Plane,
                Placement::Plane => Placement::Plane,
            })
            .collect();
        let mut nesting = BTreeMap::new();
        for (&key, &place) in &self.nesting {
            if is_removed(key) {
                continue;
            }
            let place = match place {
                Placement::Face(d, s) if !is_removed(d) => Placement::Face(remap[d], s),
                Placement::Face(..) => Placement::Plane,
                Placement::Plane => Placement::Plane,
            };
            nesting.insert(remap[key], place);
        }
        Ok(Diagram {
            group: self.group.clone(),
            word: self.word.clone(),
            discs,
            arcs,
            boundary,
            circles,
            nesting,
        })
    }

    /// The boundary word z read anticlockwise around S^1: terminal t-letters
    /// interleaved with the labels of the boundary stretches.
    pub fn boundary_word(&self) -> Result<RelWord, DiagramError> {
        let Some(boundary) = &self.boundary else {
            return Err(DiagramError::NoBoundary);
        };
        if boundary.is_empty() {
            return Ok(RelWord::from_tokens(self.group.clone(), &[]));
        }
        let att = self
            .attachments()
            .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
        let faces = self.faces_with(&att);
        // Label each stretch: inverse of the product of corner words between
        // this stretch and the next one in its face orbit.
        let mut stretch_label: BTreeMap<usize, GroupElement> = BTreeMap::new();
        for face in &faces.faces {
            let k = face.items.len();
            for (i, item) in face.items.iter().enumerate() {
                if let FaceItem::Stretch { from, .. } = item {
                    let mut acc = GroupElement::identity();
                    for j in 1..=k {
                        match &face.items[(i + j) % k] {
                            FaceItem::Corner { disc, seg } => {
                                let inv = self.group.inverse(&self.discs[*disc].segs[*seg]);
                                acc = self.group.multiply(&acc, &inv);
                            }
                            FaceItem::Stretch { .. } => break,
                        }
                    }
                    stretch_label.insert(*from, self.group.inverse(&acc));
                }
            }
        }
        let mut tokens = Vec::new();
        for (p, &(disc, slot)) in boundary.iter().enumerate() {
            let leg = self.discs[disc].legs[slot];
            tokens.push(Token::Letter(leg.sign));
            if let Some(label) = stretch_label.get(&p) {
                if !label.is_identity() {
                    tokens.push(Token::Coeff(label.clone()));
                }
            }
        }
        Ok(RelWord::from_tokens(self.group.clone(), &tokens))
    }

    pub fn shape(&self) -> TShape {
        self.word.shape()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Attachment {
    Free,
    Arc(usize, usize),
    Boundary(usize),
}

/// A directed traversal of an arc or a boundary hop; faces are its orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dart {
    Arc { arc: usize, to_end: usize },
    FromBoundary { pos: usize },
    ToBoundary { pos: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceItem {
    Corner { disc: usize, seg: usize },
    Stretch { from: usize, to: usize },
}

#[derive(Debug, Clone)]
pub struct Face {
    pub items: Vec<FaceItem>,
    pub orbit: Vec<Dart>,
    pub word: GroupElement,
    pub component: usize,
    pub touches_boundary: bool,
    /// Least corner collected; stable face identity across recomputation.
    pub anchor: (usize, usize),
}

impl Face {
    pub fn corner_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, FaceItem::Corner { .. }))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub faces: Vec<Face>,
    pub face_of: BTreeMap<Dart, usize>,
}

#[derive(Debug, Clone)]
pub struct Region {
    pub corners: Vec<(usize, usize)>,
    pub word: GroupElement,
    pub is_outer: bool,
    pub touches_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Incidence(String),
    Orientation(String),
    Genus(String),
    Region { anchor: (usize, usize), word: GroupElement },
    Nesting(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Incidence(m) => write!(f, "incidence: {m}"),
            Failure::Orientation(m) => write!(f, "orientation: {m}"),
            Failure::Genus(m) => write!(f, "genus: {m}"),
            Failure::Region { anchor, .. } => write!(
                f,
                "region at ({}, {}): word is not the identity",
                DiscId(anchor.0),
                anchor.1
            ),
            Failure::Nesting(m) => write!(f, "nesting: {m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
    pub faces: Option<Faces>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub connected: bool,
    pub has_main_disc: bool,
    pub dipole_free: bool,
    pub twoleg_strings_ok: bool,
}

impl IrreducibilityReport {
    pub fn verdict(&self) -> bool {
        self.connected && self.has_main_disc && self.dipole_free && self.twoleg_strings_ok
    }
}

/// 1-based display of disc indices, matching the file format.
struct DiscId(usize);

impl std::fmt::Display for DiscId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d{}", self.0 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn free(names: &[&str]) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::free(names))
    }

    fn word(spec: &Arc<GroupSpec>, text: &str) -> RelWord {
        RelWord::parse(spec.clone(), text).unwrap()
    }

    /// Two discs W and WBar with matching occurrences joined in order.
    fn mirror_pair(spec: &Arc<GroupSpec>, text: &str) -> Diagram {
        let w = word(spec, text);
        let n = w.num_letters();
        let mut d = Diagram::new(spec.clone(), w);
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        for occ in 0..n {
            d.add_arc((dw, occ), (db, n - 1 - occ));
        }
        d
    }

    #[test]
    fn mirror_pair_is_valid_and_trivial() {
        let spec = free(&["a", "b"]);
        let d = mirror_pair(&spec, "T a T' b");
        let report = d.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        let regions = d.region_words().unwrap();
        assert_eq!(regions.len(), 2);
        for r in &regions {
            assert!(r.word.is_identity());
        }
    }

    #[test]
    fn mirror_pair_reduces_to_empty() {
        let spec = free(&["a", "b"]);
        let d = mirror_pair(&spec, "T a T' b");
        let rep = d.is_irreducible();
        assert!(!rep.dipole_free);
        assert!(!rep.verdict());
        let reduced = d.reduce().unwrap();
        assert!(reduced.is_empty());
    }

    #[test]
    fn larger_mirror_pair_reduces_to_empty() {
        let spec = free(&["a", "b", "c"]);
        let d = mirror_pair(&spec, "T a T b T' c");
        assert!(d.validate().is_valid());
        let reduced = d.reduce().unwrap();
        assert!(reduced.is_empty());
    }

    /// The second-example diagram: shape t^n, two discs, arcs offset by k.
    fn power_diagram(spec: &Arc<GroupSpec>, n: usize, k: usize) -> Diagram {
        let text = (0..n).map(|_| "a T").collect::<Vec<_>>().join(" ");
        let w = word(spec, &text);
        let mut d = Diagram::new(spec.clone(), w);
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        for i in 0..n {
            let occ_bar = (i + k) % n;
            d.add_arc((dw, i), (db, n - 1 - occ_bar));
        }
        d
    }

    #[test]
    fn power_offset_zero_is_reducible() {
        let spec = free(&["a"]);
        let d = power_diagram(&spec, 2, 0);
        assert!(d.validate().is_valid());
        assert!(!d.is_irreducible().verdict());
        assert!(d.reduce().unwrap().is_empty());
    }

    #[test]
    fn power_offset_one_is_irreducible() {
        let spec = free(&["a"]);
        let d = power_diagram(&spec, 2, 1);
        let report = d.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        let rep = d.is_irreducible();
        assert!(rep.verdict(), "{rep:?}");
        // reduce leaves it untouched
        let reduced = d.reduce().unwrap();
        assert_eq!(reduced.discs.len(), 2);
    }

    #[test]
    fn euler_failure_detected() {
        // Join two discs over shape tt^-1 so that both arcs cross: the
        // rotation system forces genus 1.
        let spec = free(&["a", "b"]);
        let w = word(&spec, "T a T' b");
        let mut d = Diagram::new(spec.clone(), w);
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        // Aligned would be (dw,0)-(db,1), (dw,1)-(db,0); crossing instead:
        d.add_arc((dw, 0), (db, 0));
        d.add_arc((dw, 1), (db, 1));
        let report = d.validate();
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, Failure::Orientation(_) | Failure::Genus(_))));
    }

    #[test]
    fn region_word_failure_over_free_group() {
        // The aligned mirror pair over TaT'b is fine, but the self-arc
        // matching forces the coefficients to die in G.
        let spec = free(&["a", "b"]);
        let w = word(&spec, "T a T' b");
        let mut d = Diagram::new(spec.clone(), w);
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        d.add_arc((dw, 0), (dw, 1));
        d.add_arc((db, 0), (db, 1));
        d.nesting.insert(db, Placement::Plane);
        let report = d.validate();
        assert!(!report.is_valid());
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, Failure::Region { .. })));
    }

    #[test]
    fn boundary_single_disc_reads_w() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let mut d = Diagram::new(spec.clone(), w.clone());
        let dw = d.add_w_disc();
        d.boundary = Some((0..3).map(|s| (dw, s)).collect());
        let report = d.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        let z = d.boundary_word().unwrap();
        assert!(z.cyclic_eq(&w), "z = {z}");
        let rep = d.is_irreducible();
        assert!(rep.verdict());
    }

    #[test]
    fn boundary_empty_diagram() {
        let spec = free(&["a"]);
        let w = word(&spec, "T a");
        let mut d = Diagram::new(spec.clone(), w);
        d.boundary = Some(Vec::new());
        assert!(d.validate().is_valid());
        let z = d.boundary_word().unwrap();
        assert!(z.is_t_free());
        assert!(z.constant().is_identity());
    }

    #[test]
    fn boundary_twoleg_disc_reads_conjugate() {
        // Gamma = free(a) * <s>; h = a@1 (i.e. s^-1 a s).
        let gamma = free(&["a", "s"]);
        let s_gen = gamma.lookup("s").unwrap();
        let a = gamma.parse_element("a").unwrap();
        let h = KCanonical { items: vec![(a, 1)] };
        let w = word(&gamma, "T a T' a'"); // ambient word, not used by the disc
        let mut d = Diagram::new(gamma.clone(), w);
        let disc = d.add_disc(Disc::new_twoleg(&gamma, s_gen, &h, false));
        d.boundary = Some(vec![(disc, 0), (disc, 1)]);
        let report = d.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures);
        let z = d.boundary_word().unwrap();
        // z = t^-1 (s^-1 a s) t (s^-2 a^-1 s^2) up to rotation
        let expected = RelWord::parse(
            gamma.clone(),
            "T' s' a s T s^-2 a' s^2",
        )
        .unwrap();
        assert!(z.cyclic_eq(&expected), "z = {z}");
        assert!(z.shape().cyclic_eq(&TShape::parse("T' T").unwrap()));
    }

    #[test]
    fn reduce_is_local() {
        // an irreducible core plus an aligned mirror pair reduces to the core
        let spec = free(&["a"]);
        let core = power_diagram(&spec, 2, 1);
        let mut d = core.clone();
        let w2 = d.word.clone();
        let n = w2.num_letters();
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        for occ in 0..n {
            d.add_arc((dw, occ), (db, n - 1 - occ));
        }
        assert!(d.validate().is_valid());
        let reduced = d.reduce().unwrap();
        assert_eq!(reduced.discs.len(), 2);
        assert!(reduced.is_irreducible().dipole_free);
        assert!(reduced.validate().is_valid());
        assert!(reduced.isomorphic(&core));
    }

    #[test]
    fn reduce_preserves_validity() {
        let spec = free(&["a", "b", "c"]);
        for text in ["T a T b T' c", "T a T' b"] {
            let d = mirror_pair(&spec, text);
            assert!(d.validate().is_valid());
            let r = d.reduce().unwrap();
            assert!(r.validate().is_valid());
        }
    }

    #[test]
    fn lone_circle_fails_main_disc() {
        let spec = free(&["a"]);
        let w = word(&spec, "T a");
        let mut d = Diagram::new(spec.clone(), w);
        d.circles.push(Placement::Plane);
        let rep = d.is_irreducible();
        assert!(rep.connected);
        assert!(!rep.has_main_disc);
        assert!(!rep.verdict());
    }

    #[test]
    fn twoleg_string_with_trivial_product() {
        let gamma = free(&["a", "s"]);
        let s_gen = gamma.lookup("s").unwrap();
        let a = gamma.parse_element("a").unwrap();
        let h = KCanonical { items: vec![(a.clone(), 0)] };
        let h_inv = h.inverse(&gamma);
        let w = word(&gamma, "T a T' a'");
        let mut d = Diagram::new(gamma.clone(), w);
        let d1 = d.add_disc(Disc::new_twoleg(&gamma, s_gen, &h, false));
        let d2 = d.add_disc(Disc::new_twoleg(&gamma, s_gen, &h_inv, false));
        // chain d1 -> d2 and close up into a loop
        d.add_arc((d1, 1), (d2, 0));
        d.add_arc((d2, 1), (d1, 0));
        let rep = d.is_irreducible();
        assert!(!rep.twoleg_strings_ok);

        // a lone two-leg disc with nontrivial h closed on itself passes (4)
        let mut d2d = Diagram::new(gamma.clone(), word(&gamma, "T a T' a'"));
        let e1 = d2d.add_disc(Disc::new_twoleg(&gamma, s_gen, &h, false));
        d2d.add_arc((e1, 0), (e1, 1));
        assert!(d2d.is_irreducible().twoleg_strings_ok);
    }

    #[test]
    fn format_roundtrip() {
        let spec = parse_group_spec("group { a: inf; b: 2; def c = a^-1 b a; }").unwrap();
        let w = RelWord::parse(spec.clone(), "T a T b T' c").unwrap();
        let mut d = Diagram::new(spec.clone(), w);
        let dw = d.add_w_disc();
        let db = d.add_wbar_disc();
        for occ in 0..3 {
            d.add_arc((dw, occ), (db, 2 - occ));
        }
        let text = print_diagram(&d).unwrap();
        let reparsed = parse_diagram(&text).unwrap();
        assert!(reparsed.isomorphic(&d));
        assert_eq!(print_diagram(&reparsed).unwrap(), text);
    }

    #[test]
    fn format_roundtrip_boundary_and_twoleg() {
        let gamma = free(&["a", "s"]);
        let s_gen = gamma.lookup("s").unwrap();
        let a = gamma.parse_element("a").unwrap();
        let h = KCanonical { items: vec![(a, 1)] };
        let w = word(&gamma, "T a T' a'");
        let mut d = Diagram::new(gamma.clone(), w);
        let disc = d.add_disc(Disc::new_twoleg(&gamma, s_gen, &h, false));
        d.boundary = Some(vec![(disc, 0), (disc, 1)]);
        let text = print_diagram(&d).unwrap();
        let reparsed = parse_diagram(&text).unwrap();
        assert!(reparsed.isomorphic(&d));
        assert_eq!(print_diagram(&reparsed).unwrap(), text);
    }

    #[test]
    fn base_rotation_accepted_on_parse() {
        let spec = free(&["a"]);
        // power(2,1) written with an explicit base on the reflected disc
        let text = "\
word: T a T a
group: group { a: inf; }
disc d1 kind=W base=0
disc d2 kind=WBAR base=1
arc (d1,0)-(d2,1)
arc (d1,1)-(d2,0)
";
        let d = parse_diagram(text).unwrap();
        assert!(d.validate().is_valid());
        let direct = power_diagram(&spec, 2, 1);
        let aligned = power_diagram(&spec, 2, 0);
        assert!(d.isomorphic(&direct) || d.isomorphic(&aligned));
    }

    #[test]
    fn canonical_form_under_relabeling() {
        let spec = free(&["a", "b"]);
        let d1 = mirror_pair(&spec, "T a T' b");
        // Same diagram with disc order swapped.
        let w = word(&spec, "T a T' b");
        let n = w.num_letters();
        let mut d2 = Diagram::new(spec.clone(), w);
        let db = d2.add_wbar_disc();
        let dw = d2.add_w_disc();
        for occ in 0..n {
            d2.add_arc((dw, occ), (db, n - 1 - occ));
        }
        assert!(d1.isomorphic(&d2));
        // The power diagram with offset is NOT isomorphic to alignment.
        let spec_a = free(&["a"]);
        assert!(!power_diagram(&spec_a, 2, 1).isomorphic(&power_diagram(&spec_a, 2, 0)));
    }

    #[test]
    fn occurrence_indexing_mirrors() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let disc_w = Disc::new_w(&w);
        let disc_bar = Disc::new_wbar(&w);
        assert_eq!(disc_w.occurrence(0), Some(0));
        assert_eq!(disc_w.occurrence(2), Some(2));
        assert_eq!(disc_bar.occurrence(0), Some(2));
        assert_eq!(disc_bar.occurrence(2), Some(0));
        // Anticlockwise exponents negate in mirrored order.
        assert_eq!(disc_w.legs[0].sign, Sign::Plus);
        assert_eq!(disc_bar.legs[0].sign, Sign::Plus); // -e_2 = -(-1)
        assert_eq!(disc_bar.legs[2].sign, Sign::Minus); // -e_0
    }
}
