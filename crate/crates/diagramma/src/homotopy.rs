//! Reading a closed diagram as a relative 2-cycle over the symbol D, testing
//! nontriviality under finite permutation quotients, and the second homotopy
//! rank of pseudo-projective planes via Smith normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diagram::{Dart, Diagram, DiagramError, FaceItem, Placement};
use crate::group::{Perm, PermHom};
use crate::shape::Sign;
use crate::word::Token;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("cycles are read from closed diagrams only")]
    NotClosed,
    #[error("the homomorphism does not kill the ambient word")]
    DoesNotKillWord,
    #[error("path word uses a generator without an image")]
    MissingImage,
}

/// A formal integer combination of path-word translates of the 2-cell
/// symbol D: one term per main disc, sign +1 for W and -1 for WBar. Path
/// words are never reduced; only quotient images are compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleElement {
    pub terms: Vec<(i64, Vec<Token>)>,
}

impl CycleElement {
    pub fn display<'a>(&'a self, spec: &'a crate::group::GroupSpec) -> DisplayCycle<'a> {
        DisplayCycle { spec, cycle: self }
    }
}

pub struct DisplayCycle<'a> {
    spec: &'a crate::group::GroupSpec,
    cycle: &'a CycleElement,
}

impl fmt::Display for DisplayCycle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycle.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, path)) in self.cycle.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}[", if *sign >= 0 { "+" } else { "-" })?;
            if path.is_empty() {
                write!(f, "1")?;
            } else {
                for (j, token) in path.iter().enumerate() {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    match token {
                        Token::Letter(Sign::Plus) => write!(f, "t")?,
                        Token::Letter(Sign::Minus) => write!(f, "t'")?,
                        Token::Coeff(g) => write!(f, "{}", self.spec.display_element(g))?,
                    }
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Read the relative 2-cycle of a valid closed diagram.
///
/// The global basepoint sits in the outside region; each main disc
/// contributes the word read along the breadth-first spanning-tree path from
/// there to the disc's basepoint: crossing a t-arc contributes `t^{+-1}`,
/// walking region boundary segments contributes their G-labels.
pub fn read_cycle(d: &Diagram) -> Result<CycleElement, HomotopyError> {
    read_cycle_rooted(d, 0)
}

/// Like [`read_cycle`] with the global basepoint moved `base_offset` corners
/// along the outside region. All roots evaluate identically under every
/// admissible quotient: paths on the sphere are homotopic rel endpoints, so
/// the readings differ only by words that die in the fundamental group.
pub fn read_cycle_rooted(d: &Diagram, base_offset: usize) -> Result<CycleElement, HomotopyError> {
    if d.boundary.is_some() {
        return Err(HomotopyError::NotClosed);
    }
    if d.discs.is_empty() {
        return Ok(CycleElement { terms: Vec::new() });
    }
    let (faces, outer) = d.faces_and_outer()?;
    let placements = d.placements();

    // Region identification: every face is its own region except that each
    // component's outer face merges with the region hosting the component
    // (the plane for top-level components).
    let plane = faces.faces.len();
    let mut region_parent: Vec<usize> = (0..=plane).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let face_by_anchor = |anchor: (usize, usize)| -> Option<usize> {
        faces.faces.iter().position(|f| f.anchor == anchor)
    };
    // Process components so that hosts are resolved before their children.
    for (&comp, &place) in &placements {
        let Some(&outer_face) = outer.get(&comp) else { continue };
        let host = match place {
            Placement::Plane => plane,
            Placement::Face(hd, hs) => {
                let host_face = faces
                    .face_of
                    .iter()
                    .find_map(|(_, &fi)| {
                        let f = &faces.faces[fi];
                        f.items.iter().any(|it| {
                            matches!(it, FaceItem::Corner { disc, seg } if (*disc, *seg) == (hd, hs))
                        })
                        .then_some(fi)
                    })
                    .or_else(|| face_by_anchor((hd, hs)));
                match host_face {
                    Some(fi) => fi,
                    None => plane,
                }
            }
        };
        let a = find(&mut region_parent, outer_face);
        let b = find(&mut region_parent, host);
        region_parent[a] = b;
    }
    let region_of = |p: &mut Vec<usize>, face: usize| find(p, face);

    // Region adjacency through arcs, breadth-first from the plane region.
    // tree[r] = (arc, sign, entry position in the arrival face).
    let plane_region = find(&mut region_parent, plane);
    let mut tree: BTreeMap<usize, (usize, Sign, usize, usize)> = BTreeMap::new();
    let mut visited = vec![false; plane + 1];
    visited[plane_region] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(plane_region);
    // Positions of darts within their face orbits.
    let dart_pos = |dart: Dart| -> (usize, usize) {
        let face = faces.face_of[&dart];
        let pos = faces.faces[face].orbit.iter().position(|&x| x == dart).unwrap();
        (face, pos)
    };
    while let Some(region) = queue.pop_front() {
        // Candidate crossings in canonical arc order.
        for (a, arc) in d.arcs.iter().enumerate() {
            for to_end in 0..2 {
                let e = Dart::Arc { arc: a, to_end };
                let e_rev = Dart::Arc { arc: a, to_end: 1 - to_end };
                let from_face = faces.face_of[&e];
                if region_of(&mut region_parent, from_face) != region {
                    continue;
                }
                let to_face = faces.face_of[&e_rev];
                let to_region = region_of(&mut region_parent, to_face);
                if visited[to_region] {
                    continue;
                }
                visited[to_region] = true;
                // Crossing from face(e) to face(rev e) reads the exponent at
                // e's arrival leg, anticlockwise.
                let (disc, slot) = arc.ends[to_end];
                let sign = d.discs[disc].legs[slot].sign;
                let (entry_face, entry_pos) = dart_pos(e_rev);
                tree.insert(to_region, (a, sign, entry_face, entry_pos));
                queue.push_back(to_region);
            }
        }
    }

    // Path word from the global basepoint to a position in a face.
    // Walking a face orbit from position i collects the inverted segment
    // labels of its Corner transitions.
    let collect = |face: usize, from: usize, to: usize, out: &mut Vec<Token>| {
        let f = &faces.faces[face];
        let k = f.orbit.len();
        let mut i = from;
        while i != to {
            if let FaceItem::Corner { disc, seg } = f.items[i] {
                let label = d.group.inverse(&d.discs[disc].segs[seg]);
                if !label.is_identity() {
                    out.push(Token::Coeff(label));
                }
            }
            i = (i + 1) % k;
        }
    };
    // The canonical entry of a region: for the plane, position 0 of the
    // outer face of the least top-level component; for others, the tree
    // entry. Returns (face, position).
    let mut entry_of: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    {
        let lead_comp = placements
            .iter()
            .filter(|(_, p)| **p == Placement::Plane)
            .map(|(&c, _)| c)
            .min();
        if let Some(c) = lead_comp {
            if let Some(&fi) = outer.get(&c) {
                let len = faces.faces[fi].orbit.len().max(1);
                entry_of.insert(plane_region, (fi, base_offset % len));
            }
        }
        for (&region, &(_, _, entry_face, entry_pos)) in &tree {
            entry_of.insert(region, (entry_face, entry_pos));
        }
    }
    // Memoized path words to region entries: walk the parent chain up to a
    // known region, then extend the word back down the chain. Each step
    // collects the labels from the previous region's entry to the exit dart
    // and crosses the tree arc.
    let mut region_paths: BTreeMap<usize, Vec<Token>> = BTreeMap::new();
    region_paths.insert(plane_region, Vec::new());
    let path_to_region = |region: usize,
                              region_parent: &mut [usize],
                              region_paths: &mut BTreeMap<usize, Vec<Token>>|
     -> Vec<Token> {
        let mut chain = Vec::new();
        let mut r = region;
        while !region_paths.contains_key(&r) {
            chain.push(r);
            let (arc, _, _, _) = tree[&r];
            let e1 = Dart::Arc { arc, to_end: 1 };
            let exit = if find(region_parent, faces.face_of[&e1]) == r {
                Dart::Arc { arc, to_end: 0 }
            } else {
                e1
            };
            r = find(region_parent, faces.face_of[&exit]);
        }
        let mut word = region_paths[&r].clone();
        for &step in chain.iter().rev() {
            let (arc, sign, _, _) = tree[&step];
            let e1 = Dart::Arc { arc, to_end: 1 };
            let exit = if find(region_parent, faces.face_of[&e1]) == step {
                Dart::Arc { arc, to_end: 0 }
            } else {
                e1
            };
            let from_face = faces.face_of[&exit];
            let from_region = find(region_parent, from_face);
            let exit_pos = faces.faces[from_face]
                .orbit
                .iter()
                .position(|&x| x == exit)
                .unwrap();
            let (entry_face, entry_pos) = entry_of[&from_region];
            let start = if entry_face == from_face { entry_pos } else { 0 };
            collect(from_face, start, exit_pos, &mut word);
            word.push(Token::Letter(sign));
            region_paths.insert(step, word.clone());
        }
        word
    };

    let mut terms = Vec::new();
    for (di, disc) in d.discs.iter().enumerate() {
        if !disc.kind.is_main() {
            continue;
        }
        let sign = if disc.kind.is_reflected() { -1 } else { 1 };
        // The basepoint face: the one whose orbit contains the dart arriving
        // at leg 0 of this disc.
        let base_dart = d
            .arcs
            .iter()
            .enumerate()
            .find_map(|(a, arc)| {
                arc.ends
                    .iter()
                    .position(|&(dd, ss)| dd == di && ss == 0)
                    .map(|end| Dart::Arc { arc: a, to_end: end })
            })
            .ok_or(HomotopyError::NotClosed)?;
        let base_face = faces.face_of[&base_dart];
        let base_pos = faces.faces[base_face]
            .orbit
            .iter()
            .position(|&x| x == base_dart)
            .unwrap();
        let base_region = find(&mut region_parent, base_face);
        let mut word = path_to_region(base_region, &mut region_parent, &mut region_paths);
        let (entry_face, entry_pos) = entry_of[&base_region];
        let start = if entry_face == base_face { entry_pos } else { 0 };
        collect(base_face, start, base_pos, &mut word);
        terms.push((sign, word));
    }
    Ok(CycleElement { terms })
}

/// A permutation homomorphism extended with an image for t (a quotient of
/// the relative presentation's group when it kills the ambient word).
#[derive(Debug, Clone)]
pub struct QuotientHom {
    pub hom: PermHom,
    pub t_image: Perm,
}

impl QuotientHom {
    pub fn new(hom: PermHom, t_image: Perm) -> QuotientHom {
        QuotientHom { hom, t_image }
    }

    pub fn eval_tokens(&self, tokens: &[Token]) -> Perm {
        let mut acc = Perm::identity(self.hom.degree);
        for token in tokens {
            match token {
                Token::Letter(Sign::Plus) => acc = acc.then(&self.t_image),
                Token::Letter(Sign::Minus) => acc = acc.then(&self.t_image.inverse()),
                Token::Coeff(g) => acc = acc.then(&self.hom.eval(g)),
            }
        }
        acc
    }

    pub fn kills(&self, word: &crate::word::RelWord) -> bool {
        self.eval_tokens(&word.tokens()).is_identity()
    }
}

/// A group-ring element over the finite image group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientEvaluation {
    pub coefficients: BTreeMap<Perm, i64>,
}

impl QuotientEvaluation {
    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&c| c == 0)
    }

    pub fn coefficient(&self, p: &Perm) -> i64 {
        self.coefficients.get(p).copied().unwrap_or(0)
    }

    /// Left translation by g.
    pub fn translated(&self, g: &Perm) -> QuotientEvaluation {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(p, &c)| (g.then(p), c))
            .collect();
        QuotientEvaluation { coefficients }
    }

    /// The g with `self = g . other`, if one exists. Any solution must send
    /// some support element of `other` to one of `self`, so the candidate
    /// set `s . o^-1` is exhaustive.
    pub fn translate_of(&self, other: &QuotientEvaluation) -> Option<Perm> {
        if self.is_zero() || other.is_zero() {
            return (self.is_zero() && other.is_zero()).then(|| Perm::identity(1));
        }
        for s in self.coefficients.keys() {
            for o in other.coefficients.keys() {
                let g = s.then(&o.inverse());
                if other.translated(&g).coefficients_eq(self) {
                    return Some(g);
                }
            }
        }
        None
    }

    fn coefficients_eq(&self, other: &QuotientEvaluation) -> bool {
        let keys: std::collections::BTreeSet<&Perm> = self
            .coefficients
            .keys()
            .chain(other.coefficients.keys())
            .collect();
        keys.into_iter()
            .all(|k| self.coefficient(k) == other.coefficient(k))
    }
}

/// Push a cycle through a quotient and collect signed coefficients per image
/// element. The homomorphism must kill the ambient word.
pub fn eval_quotient(
    cycle: &CycleElement,
    hom: &QuotientHom,
    word: &crate::word::RelWord,
) -> Result<QuotientEvaluation, HomotopyError> {
    if !hom.kills(word) {
        return Err(HomotopyError::DoesNotKillWord);
    }
    let mut coefficients: BTreeMap<Perm, i64> = BTreeMap::new();
    for (sign, path) in &cycle.terms {
        let image = hom.eval_tokens(path);
        *coefficients.entry(image).or_insert(0) += sign;
    }
    coefficients.retain(|_, c| *c != 0);
    Ok(QuotientEvaluation { coefficients })
}

// ---------------------------------------------------------------------------
// Pseudo-projective planes

/// The chain data of `P_n = e^1 cup_n e^2`: boundary matrices over `Z[Z/n]`
/// in the regular representation.
#[derive(Debug, Clone)]
pub struct PspComplex {
    pub n: usize,
    /// Multiplication by the norm element `1 + t + ... + t^{n-1}`.
    pub d2: Vec<Vec<BigInt>>,
    /// Multiplication by `t - 1`.
    pub d1: Vec<Vec<BigInt>>,
}

impl PspComplex {
    pub fn new(n: usize) -> PspComplex {
        assert!(n >= 1);
        // The regular representation sends t^k . (basis j) to basis (j+k).
        let mut d2 = vec![vec![BigInt::from(0); n]; n];
        let mut d1 = vec![vec![BigInt::from(0); n]; n];
        for j in 0..n {
            for k in 0..n {
                // t^k sends basis j to (j + k) mod n
                d2[(j + k) % n][j] += 1;
            }
            d1[(j + 1) % n][j] += 1;
            d1[j][j] -= 1;
        }
        PspComplex { n, d2, d1 }
    }

    pub fn composition_is_zero(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::from(0);
                for k in 0..n {
                    acc += &self.d1[i][k] * &self.d2[k][j];
                }
                if acc != BigInt::from(0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Rank of the kernel of the norm map: the second homotopy rank of the
/// pseudo-projective plane, always `n - 1`.
pub fn psp_rank(n: usize) -> usize {
    let complex = PspComplex::new(n);
    let diag = smith_normal_form(complex.d2);
    let rank = diag.iter().filter(|d| **d != BigInt::from(0)).count();
    n - rank
}

/// Diagonal of the Smith normal form of an integer matrix; exact arithmetic
/// throughout.
#[allow(clippy::needless_range_loop)]
pub fn smith_normal_form(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut top = 0usize;
    while top < rows.min(cols) {
        // Find a pivot: the nonzero entry of least absolute value.
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if m[i][j] != BigInt::from(0) {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => abs(&m[i][j]) < abs(&m[pi][pj]),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }
        // Clear the row and column; restart if a remainder shrinks the pivot.
        loop {
            let mut clean = true;
            for i in top + 1..rows {
                if m[i][top] != BigInt::from(0) {
                    let q = div_round(&m[i][top], &m[top][top]);
                    for j in top..cols {
                        let sub = &q * &m[top][j];
                        m[i][j] -= sub;
                    }
                    if m[i][top] != BigInt::from(0) {
                        m.swap(top, i);
                        clean = false;
                    }
                }
            }
            for j in top + 1..cols {
                if m[top][j] != BigInt::from(0) {
                    let q = div_round(&m[top][j], &m[top][top]);
                    for i in top..rows {
                        let sub = &q * &m[i][top];
                        m[i][j] -= sub;
                    }
                    if m[top][j] != BigInt::from(0) {
                        for row in m.iter_mut() {
                            row.swap(top, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[top][top].clone());
        top += 1;
    }
    // Normalize signs (row negation is unimodular), then fix divisibility.
    for d in diag.iter_mut() {
        *d = abs(d);
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if diag[i] == BigInt::from(0) {
                diag.swap(i, j);
                continue;
            }
            if (&diag[j] % &diag[i]) != BigInt::from(0) {
                let g = gcd(diag[i].clone(), diag[j].clone());
                let l = (&diag[i] * &diag[j]) / &g;
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag
}

fn abs(x: &BigInt) -> BigInt {
    if x < &BigInt::from(0) {
        -x
    } else {
        x.clone()
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    while b != BigInt::from(0) {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    abs(&a)
}
