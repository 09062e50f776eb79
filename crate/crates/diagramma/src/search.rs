//! Bounded exhaustive enumeration of w-diagrams: the brute-force oracle for
//! the non-existence theorems, and the classic constructions (the four-disc
//! torsion example, power-shape pairs, substitution).

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, DiscKind, Placement};
use crate::group::GroupSpec;
use crate::shape::Sign;
use crate::word::{substitute, LinearWord, RelWord, WordError};

/// Hard cap on the disc bound; `DIAGRAMMA_MAX_DISCS` may lower the default
/// but never exceed this.
pub const MAX_DISCS_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("disc bound {0} exceeds the hard cap {MAX_DISCS_CAP}")]
    GuardExceeded(usize),
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("the ambient word must contain a t-letter")]
    TFreeWord,
}

/// What boundary words are admitted when searching diagrams with boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFilter {
    /// Closed diagrams only.
    Closed,
    /// Any boundary word.
    AnyBoundary,
    /// Boundary words whose t-shape has complexity strictly below the bound.
    ComplexityBelow(usize),
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub word: RelWord,
    pub max_discs: usize,
    pub filter: BoundaryFilter,
}

impl SearchSpec {
    pub fn new(word: RelWord, max_discs: usize) -> Result<SearchSpec, SearchError> {
        if max_discs > MAX_DISCS_CAP {
            return Err(SearchError::GuardExceeded(max_discs));
        }
        if word.is_t_free() {
            return Err(SearchError::TFreeWord);
        }
        Ok(SearchSpec { word, max_discs, filter: BoundaryFilter::Closed })
    }

    pub fn with_filter(mut self, filter: BoundaryFilter) -> SearchSpec {
        self.filter = filter;
        self
    }

    fn allow_boundary(&self) -> bool {
        !matches!(self.filter, BoundaryFilter::Closed)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    /// Valid diagrams examined (after dedup).
    pub searched: usize,
    /// Irreducible diagrams among them (after the boundary filter).
    pub irreducible: usize,
}

/// Enumerate every valid diagram over the spec's word with at most
/// `max_discs` discs, one representative per isomorphism class.
pub fn enumerate(spec: &SearchSpec) -> Result<Vec<Diagram>, SearchError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    visit_all(spec, &mut |d| {
        if seen.insert(d.canonical_form()) {
            out.push(d.clone());
        }
    })?;
    Ok(out)
}

/// The first irreducible diagram in canonical order, with search statistics.
/// `None` certifies exhaustion at the given disc bound only.
pub fn find_irreducible(
    spec: &SearchSpec,
) -> Result<(Option<Diagram>, SearchStats), SearchError> {
    let cases = disc_multisets(spec);
    let (d, stats) = search_cases(spec, &cases)?;
    Ok((d, stats))
}

/// Run the search over `jobs` threads, split by disc multiset; the result is
/// identical to the single-threaded call.
pub fn find_irreducible_jobs(
    spec: &SearchSpec,
    jobs: usize,
) -> Result<(Option<Diagram>, SearchStats), SearchError> {
    if jobs <= 1 {
        return find_irreducible(spec);
    }
    let cases = disc_multisets(spec);
    let chunk_size = cases.len().div_ceil(jobs);
    let results: Vec<Result<(Option<Diagram>, SearchStats), SearchError>> =
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in cases.chunks(chunk_size) {
                let spec = &*spec;
                let chunk: Vec<(usize, usize)> = chunk.to_vec();
                handles.push(scope.spawn(move || search_cases(spec, &chunk)));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker"))
                .collect()
        });
    let mut stats = SearchStats::default();
    let mut best: Option<(crate::diagram::CanonicalForm, Diagram)> = None;
    for r in results {
        let (d, s) = r?;
        // Disc multisets are disjoint isomorphism classes, so per-thread
        // dedup never double-counts across threads.
        stats.searched += s.searched;
        stats.irreducible += s.irreducible;
        if let Some(d) = d {
            let form = d.canonical_form();
            if best.as_ref().is_none_or(|(bf, _)| form < *bf) {
                best = Some((form, d));
            }
        }
    }
    Ok((best.map(|(_, d)| d), stats))
}

fn search_cases(
    spec: &SearchSpec,
    cases: &[(usize, usize)],
) -> Result<(Option<Diagram>, SearchStats), SearchError> {
    let mut stats = SearchStats::default();
    let mut seen = BTreeSet::new();
    let mut best: Option<(crate::diagram::CanonicalForm, Diagram)> = None;
    for &(n_w, n_bar) in cases {
        visit_multiset(spec, n_w, n_bar, &mut |d| {
            let form = d.canonical_form();
            if !seen.insert(form.clone()) {
                return;
            }
            stats.searched += 1;
            if !d.is_irreducible().verdict() {
                return;
            }
            if let BoundaryFilter::ComplexityBelow(bound) = spec.filter {
                let z = match d.boundary_word() {
                    Ok(z) => z,
                    Err(_) => return,
                };
                if z.shape().complexity() >= bound {
                    return;
                }
            }
            stats.irreducible += 1;
            if best.as_ref().is_none_or(|(bf, _)| form < *bf) {
                best = Some((form, d.clone()));
            }
        })?;
    }
    Ok((best.map(|(_, d)| d), stats))
}

fn disc_multisets(spec: &SearchSpec) -> Vec<(usize, usize)> {
    let mut cases = Vec::new();
    for total in 1..=spec.max_discs {
        for n_w in 0..=total {
            cases.push((n_w, total - n_w));
        }
    }
    cases
}

fn visit_all(spec: &SearchSpec, visit: &mut impl FnMut(&Diagram)) -> Result<(), SearchError> {
    for (n_w, n_bar) in disc_multisets(spec) {
        visit_multiset(spec, n_w, n_bar, visit)?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Fate {
    Open,
    Matched(usize),
    Boundary,
}

/// All valid diagrams with exactly `n_w` W discs and `n_bar` WBar discs:
/// perfect matchings of the legs respecting the opposite-exponent rule (plus
/// boundary terminations when allowed), filtered by validation.
fn visit_multiset(
    spec: &SearchSpec,
    n_w: usize,
    n_bar: usize,
    visit: &mut impl FnMut(&Diagram),
) -> Result<(), SearchError> {
    let word = &spec.word;
    let n = word.num_letters();
    let total = n_w + n_bar;
    if total == 0 {
        return Ok(());
    }
    let mut base = Diagram::new(word.spec.clone(), word.clone());
    for _ in 0..n_w {
        base.add_w_disc();
    }
    for _ in 0..n_bar {
        base.add_wbar_disc();
    }
    let mut legs: Vec<(usize, usize, Sign)> = Vec::new();
    for d in 0..total {
        for s in 0..n {
            legs.push((d, s, base.discs[d].legs[s].sign));
        }
    }
    let plus_count = legs.iter().filter(|l| l.2 == Sign::Plus).count();
    if !spec.allow_boundary() && plus_count * 2 != legs.len() {
        return Ok(());
    }
    let mut fate = vec![Fate::Open; legs.len()];
    rec_match(&legs, &mut fate, &base, spec, visit);
    Ok(())
}

fn rec_match(
    legs: &[(usize, usize, Sign)],
    fate: &mut Vec<Fate>,
    base: &Diagram,
    spec: &SearchSpec,
    visit: &mut impl FnMut(&Diagram),
) {
    let Some(i) = fate.iter().position(|f| *f == Fate::Open) else {
        finish_matching(legs, fate, base, spec, visit);
        return;
    };
    if spec.allow_boundary() {
        fate[i] = Fate::Boundary;
        rec_match(legs, fate, base, spec, visit);
        fate[i] = Fate::Open;
    }
    for j in i + 1..legs.len() {
        if fate[j] == Fate::Open && legs[j].2 == legs[i].2.opposite() {
            fate[i] = Fate::Matched(j);
            fate[j] = Fate::Matched(i);
            rec_match(legs, fate, base, spec, visit);
            fate[i] = Fate::Open;
            fate[j] = Fate::Open;
        }
    }
}

fn finish_matching(
    legs: &[(usize, usize, Sign)],
    fate: &[Fate],
    base: &Diagram,
    spec: &SearchSpec,
    visit: &mut impl FnMut(&Diagram),
) {
    let mut arcs = Vec::new();
    let mut terminals = Vec::new();
    for (i, f) in fate.iter().enumerate() {
        match f {
            Fate::Matched(j) if *j > i => {
                arcs.push(((legs[i].0, legs[i].1), (legs[*j].0, legs[*j].1)));
            }
            Fate::Boundary => terminals.push((legs[i].0, legs[i].1)),
            _ => {}
        }
    }
    let mut d = base.clone();
    for (a, b) in arcs {
        d.add_arc(a, b);
    }
    if !spec.allow_boundary() {
        emit_with_placements(&d, visit);
        return;
    }
    if terminals.is_empty() {
        d.boundary = Some(Vec::new());
        emit_with_placements(&d, visit);
        return;
    }
    // Enumerate cyclic orders of the terminals: fix the first and permute
    // the rest (pure rotations are identified by the canonical form).
    let first = terminals[0];
    let rest: Vec<(usize, usize)> = terminals[1..].to_vec();
    permute(&rest, &mut |perm| {
        let mut b = Vec::with_capacity(terminals.len());
        b.push(first);
        b.extend_from_slice(perm);
        let mut with_b = d.clone();
        with_b.boundary = Some(b);
        emit_with_placements(&with_b, visit);
    });
}

/// Validate and emit a candidate; for disconnected closed diagrams with at
/// most three components, also try nesting later components inside regions
/// of the others (invalid combinations are filtered by validation).
fn emit_with_placements(d: &Diagram, visit: &mut impl FnMut(&Diagram)) {
    let report = d.validate();
    if report.is_valid() {
        visit(d);
    }
    let components = d.components();
    let comp_ids: Vec<usize> = components
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if comp_ids.len() < 2 || comp_ids.len() > 3 || d.boundary.is_some() {
        return;
    }
    let Some(faces) = report.faces else {
        return;
    };
    let anchors: Vec<(usize, (usize, usize))> =
        faces.faces.iter().map(|f| (f.component, f.anchor)).collect();
    let tail = &comp_ids[1..];
    let mut choices: Vec<Vec<Placement>> = Vec::new();
    for &c in tail {
        let mut opts = vec![Placement::Plane];
        for &(fc, anchor) in &anchors {
            if fc != c {
                opts.push(Placement::Face(anchor.0, anchor.1));
            }
        }
        choices.push(opts);
    }
    let mut pick = vec![0usize; tail.len()];
    loop {
        if pick.iter().any(|&p| p != 0) {
            let mut variant = d.clone();
            for (idx, &c) in tail.iter().enumerate() {
                variant.nesting.insert(c, choices[idx][pick[idx]]);
            }
            if variant.validate().is_valid() {
                visit(&variant);
            }
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn permute(items: &[(usize, usize)], f: &mut impl FnMut(&[(usize, usize)])) {
    let mut items: Vec<(usize, usize)> = items.to_vec();
    let n = items.len();
    permute_rec(&mut items, 0, n, f);
}

fn permute_rec(
    items: &mut Vec<(usize, usize)>,
    k: usize,
    n: usize,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    if k == n {
        f(items);
        return;
    }
    for i in k..n {
        items.swap(k, i);
        permute_rec(items, k + 1, n, f);
        items.swap(k, i);
    }
}

// ---------------------------------------------------------------------------
// The classic constructions

/// The two-disc diagram over a word of shape t^n with the reflected disc's
/// arcs offset by `k`; irreducible exactly when `k != 0 (mod n)` since the
/// basepoints then fail to line up.
pub fn construct_power(
    spec: &Arc<GroupSpec>,
    n: usize,
    k: usize,
    coefficient: &str,
) -> Result<Diagram, SearchError> {
    let text = (0..n)
        .map(|_| format!("{coefficient} T"))
        .collect::<Vec<_>>()
        .join(" ");
    let word = RelWord::parse(spec.clone(), &text)?;
    let mut d = Diagram::new(spec.clone(), word);
    let dw = d.add_w_disc();
    let db = d.add_wbar_disc();
    for i in 0..n {
        let occ_bar = (i + n - (k % n)) % n;
        d.add_arc((dw, i), (db, n - 1 - occ_bar));
    }
    Ok(d)
}

/// Replace every t-arc of `x` by a parallel bundle of arcs spelling `u`,
/// converting a diagram over `w` into one over the substituted word; the new
/// inter-strand regions read `x x^-1` for the coefficients of `u`.
pub fn construct_substitution(x: &Diagram, u: &LinearWord) -> Result<Diagram, SearchError> {
    let word = substitute(&x.word, u)?;
    let len = u.len();
    let mut d = Diagram::new(x.group.clone(), word);
    for disc in &x.discs {
        match disc.kind {
            DiscKind::W => d.add_w_disc(),
            DiscKind::WBar => d.add_wbar_disc(),
            _ => {
                return Err(SearchError::Diagram(DiagramError::Invalid(
                    "substitution applies to diagrams of W and WBar discs".into(),
                )))
            }
        };
    }
    for arc in &x.arcs {
        let (d1, s1) = arc.ends[0];
        let (d2, s2) = arc.ends[1];
        for r in 0..len {
            d.add_arc((d1, s1 * len + r), (d2, s2 * len + (len - 1 - r)));
        }
    }
    if let Some(boundary) = &x.boundary {
        let mut b = Vec::new();
        for &(disc, slot) in boundary {
            for r in 0..len {
                b.push((disc, slot * len + r));
            }
        }
        d.boundary = Some(b);
    }
    d.circles = x.circles.clone();
    d.nesting = x.nesting.clone();
    Ok(d)
}

/// The four-disc irreducible diagram over `group { a: inf; b: 2;
/// def c = a^-1 b a; }` with `w = t a t b t^-1 c`; the arc table is the
/// fixture found by `enumerate` and frozen (the search tests re-derive it).
pub fn construct_four_disc_example() -> Result<Diagram, SearchError> {
    let spec = crate::group::parse_group_spec("group { a: inf; b: 2; def c = a^-1 b a; }")
        .map_err(WordError::from)?;
    let word = RelWord::parse(spec.clone(), "T a T b T' c")?;
    let mut d = Diagram::new(spec.clone(), word);
    let w1 = d.add_w_disc();
    let w2 = d.add_w_disc();
    let b1 = d.add_wbar_disc();
    let b2 = d.add_wbar_disc();
    for (a, b) in FOUR_DISC_ARCS {
        let map = |(which, slot): (usize, usize)| ([w1, w2, b1, b2][which], slot);
        d.add_arc(map(*a), map(*b));
    }
    Ok(d)
}

type ArcTable = [((usize, usize), (usize, usize))];

/// Arc table of the four-disc fixture: discs 0..1 are the W discs, 2..3 the
/// reflected ones; slots are basepoint-relative.
const FOUR_DISC_ARCS: &ArcTable = &[
    ((0, 0), (2, 1)),
    ((0, 1), (1, 2)),
    ((0, 2), (1, 1)),
    ((1, 0), (3, 1)),
    ((2, 0), (3, 2)),
    ((2, 2), (3, 0)),
];
