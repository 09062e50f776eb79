//! Coefficient-group backends: free products of cyclic groups with defined
//! generators, and evaluation homomorphisms into finite permutation groups.
//!
//! Elements are kept in syllable normal form for the free product, so the
//! word problem is a syntactic check: an element is trivial exactly when its
//! normal form is empty.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid order {0} for generator `{1}` (finite orders must be >= 2)")]
    BadOrder(i64, String),
    #[error("generator name `{0}` is reserved")]
    ReservedName(String),
    #[error("homomorphism does not define an image for `{0}`")]
    MissingImage(String),
    #[error("image of `{gen}` has order incompatible with the factor (expected {expected})")]
    ImageOrder { gen: String, expected: i64 },
    #[error("image of defined generator `{0}` disagrees with its defining word")]
    DefinedImageMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Order of a cyclic free factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Infinite,
    Finite(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub order: Order,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinedGenerator {
    pub name: String,
    /// Expansion into primitive generators, already normalized.
    pub expansion: GroupElement,
}

/// A free product of cyclic groups, plus defined-generator abbreviations.
///
/// Defined generators are macro-expanded eagerly when words are parsed, so
/// normal forms only ever mention primitive generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<Factor>,
    pub defined: Vec<DefinedGenerator>,
}

impl GroupSpec {
    pub fn new() -> Self {
        GroupSpec { factors: Vec::new(), defined: Vec::new() }
    }

    /// Free group on the given generators.
    pub fn free(names: &[&str]) -> Self {
        let mut spec = GroupSpec::new();
        for n in names {
            spec.add_factor(n, Order::Infinite).expect("free generators");
        }
        spec
    }

    pub fn add_factor(&mut self, name: &str, order: Order) -> Result<usize, GroupError> {
        self.check_new_name(name)?;
        if let Order::Finite(n) = order {
            if n < 2 {
                return Err(GroupError::BadOrder(n, name.to_string()));
            }
        }
        self.factors.push(Factor { name: name.to_string(), order });
        Ok(self.factors.len() - 1)
    }

    /// Declare `name` as an abbreviation for `word` (over earlier names).
    pub fn add_defined(&mut self, name: &str, word: &str) -> Result<(), GroupError> {
        self.check_new_name(name)?;
        let expansion = self.parse_element(word)?;
        self.defined.push(DefinedGenerator { name: name.to_string(), expansion });
        Ok(())
    }

    fn check_new_name(&self, name: &str) -> Result<(), GroupError> {
        if name == "t" {
            return Err(GroupError::ReservedName(name.to_string()));
        }
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(GroupError::Parse(format!("bad generator name `{name}`")));
        }
        if self.lookup(name).is_some() || self.lookup_defined(name).is_some() {
            return Err(GroupError::DuplicateGenerator(name.to_string()));
        }
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    fn lookup_defined(&self, name: &str) -> Option<&DefinedGenerator> {
        self.defined.iter().find(|d| d.name == name)
    }

    pub fn generator(&self, name: &str) -> Result<GroupElement, GroupError> {
        self.parse_element(name)
    }

    /// True iff some factor is finite: free products of infinite cyclic
    /// groups are torsion-free, and any finite factor contributes torsion.
    pub fn has_torsion(&self) -> bool {
        self.factors.iter().any(|f| matches!(f.order, Order::Finite(_)))
    }

    /// Extend with a fresh infinite-order generator (used to build `G * <s>`).
    pub fn extended_with(&self, name: &str) -> Result<GroupSpec, GroupError> {
        let mut spec = self.clone();
        spec.add_factor(name, Order::Infinite)?;
        Ok(spec)
    }

    /// Reduce `exp` modulo the factor order; `None` means the syllable dies.
    fn reduce_exp(&self, gen: usize, exp: i64) -> Option<i64> {
        match self.factors[gen].order {
            Order::Infinite => {
                if exp == 0 {
                    None
                } else {
                    Some(exp)
                }
            }
            Order::Finite(n) => {
                let r = exp.rem_euclid(n);
                if r == 0 {
                    None
                } else {
                    Some(r)
                }
            }
        }
    }

    /// Normal form in the free product: adjacent syllables carry distinct
    /// generators and exponents are reduced modulo the factor order.
    pub fn normalize(&self, g: &GroupElement) -> GroupElement {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(g.syllables.len());
        for &(gen, exp) in &g.syllables {
            debug_assert!(gen < self.factors.len());
            let mut gen = gen;
            let mut exp = exp;
            loop {
                match out.last() {
                    Some(&(top_gen, top_exp)) if top_gen == gen => {
                        out.pop();
                        match self.reduce_exp(gen, top_exp + exp) {
                            Some(e) => {
                                out.push((gen, e));
                                break;
                            }
                            None => match out.pop() {
                                Some((pg, pe)) => {
                                    gen = pg;
                                    exp = pe;
                                }
                                None => break,
                            },
                        }
                    }
                    _ => {
                        if let Some(e) = self.reduce_exp(gen, exp) { out.push((gen, e)) }
                        break;
                    }
                }
            }
        }
        GroupElement { syllables: out }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut syl = a.syllables.clone();
        syl.extend_from_slice(&b.syllables);
        self.normalize(&GroupElement { syllables: syl })
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        let syl = a.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect();
        self.normalize(&GroupElement { syllables: syl })
    }

    pub fn is_trivial(&self, a: &GroupElement) -> bool {
        self.normalize(a).is_identity()
    }

    /// Parse a space-separated word such as `a^-1 b a` or `a' b a`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let mut syllables = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = split_token(token)?;
            if let Some(idx) = self.lookup(&name) {
                syllables.push((idx, exp));
            } else if let Some(def) = self.lookup_defined(&name) {
                let body = def.expansion.clone();
                let powered = self.power(&body, exp);
                syllables.extend_from_slice(&powered.syllables);
            } else {
                return Err(GroupError::UnknownGenerator(name));
            }
        }
        Ok(self.normalize(&GroupElement { syllables }))
    }

    pub fn power(&self, a: &GroupElement, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse(a) } else { a.clone() };
        let mut syl = Vec::new();
        for _ in 0..n.unsigned_abs() {
            syl.extend_from_slice(&base.syllables);
        }
        self.normalize(&GroupElement { syllables: syl })
    }

    pub fn display_element<'a>(&'a self, g: &'a GroupElement) -> DisplayElement<'a> {
        DisplayElement { spec: self, elem: g }
    }

    pub fn gen_name(&self, idx: usize) -> &str {
        &self.factors[idx].name
    }
}

impl Default for GroupSpec {
    fn default() -> Self {
        Self::new()
    }
}

fn split_token(token: &str) -> Result<(String, i64), GroupError> {
    if let Some(stripped) = token.strip_suffix('\'') {
        if stripped.is_empty() {
            return Err(GroupError::Parse(format!("bad token `{token}`")));
        }
        return Ok((stripped.to_string(), -1));
    }
    if let Some((name, exp)) = token.split_once('^') {
        let e: i64 = exp
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad exponent in `{token}`")))?;
        if e == 0 {
            return Err(GroupError::Parse(format!("zero exponent in `{token}`")));
        }
        return Ok((name.to_string(), e));
    }
    Ok((token.to_string(), 1))
}

/// An element of a [`GroupSpec`], stored as syllables `(generator, exponent)`.
///
/// Only meaningful together with the spec that produced it; all arithmetic
/// goes through [`GroupSpec::normalize`] and friends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub syllables: Vec<(usize, i64)>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { syllables: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }
}

pub struct DisplayElement<'a> {
    spec: &'a GroupSpec,
    elem: &'a GroupElement,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, &(gen, exp)) in self.elem.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.spec.gen_name(gen);
            match exp {
                1 => write!(f, "{name}")?,
                -1 => write!(f, "{name}'")?,
                e => write!(f, "{name}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Parse the block form `group { a: inf; b: 2; def c = a^-1 b a; }`, or the
/// shorthand `free:a,b,c`.
pub fn parse_group_spec(text: &str) -> Result<Arc<GroupSpec>, GroupError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("free:") {
        let mut spec = GroupSpec::new();
        for name in rest.split(',') {
            let name = name.trim();
            if name.is_empty() {
                continue;
            }
            spec.add_factor(name, Order::Infinite)?;
        }
        return Ok(Arc::new(spec));
    }
    let body = text
        .strip_prefix("group")
        .map(|r| r.trim())
        .unwrap_or(text);
    let body = body
        .strip_prefix('{')
        .and_then(|r| r.trim_end().strip_suffix('}'))
        .ok_or_else(|| GroupError::Parse("expected `group { ... }` or `free:...`".into()))?;
    let mut spec = GroupSpec::new();
    for decl in body.split(';') {
        let decl = decl.trim();
        if decl.is_empty() {
            continue;
        }
        if let Some(def) = decl.strip_prefix("def ") {
            let (name, word) = def
                .split_once('=')
                .ok_or_else(|| GroupError::Parse(format!("bad definition `{decl}`")))?;
            spec.add_defined(name.trim(), word.trim())?;
        } else {
            let (name, order) = decl
                .split_once(':')
                .ok_or_else(|| GroupError::Parse(format!("bad factor `{decl}`")))?;
            let order = order.trim();
            let order = if order == "inf" {
                Order::Infinite
            } else {
                let n: i64 = order
                    .parse()
                    .map_err(|_| GroupError::Parse(format!("bad order `{order}`")))?;
                Order::Finite(n)
            };
            spec.add_factor(name.trim(), order)?;
        }
    }
    Ok(Arc::new(spec))
}

/// Render a spec in the block form accepted by [`parse_group_spec`].
pub fn print_group_spec(spec: &GroupSpec) -> String {
    let mut parts = Vec::new();
    for f in &spec.factors {
        match f.order {
            Order::Infinite => parts.push(format!("{}: inf", f.name)),
            Order::Finite(n) => parts.push(format!("{}: {}", f.name, n)),
        }
    }
    for d in &spec.defined {
        parts.push(format!("def {} = {}", d.name, spec.display_element(&d.expansion)));
    }
    format!("group {{ {}; }}", parts.join("; "))
}

// ---------------------------------------------------------------------------
// Permutations and permutation homomorphisms

/// A permutation of `{1..degree}`, stored 0-based in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { map: (0..degree).collect() }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply(&self, point: usize) -> usize {
        self.map[point]
    }

    /// Build from disjoint cycles over `{1..degree}` (1-based input).
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut map: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for i in 0..cycle.len() {
                let from = cycle[i];
                let to = cycle[(i + 1) % cycle.len()];
                if from == 0 || from > degree || to == 0 || to > degree {
                    return Err(GroupError::Parse(format!(
                        "cycle point out of range 1..{degree}"
                    )));
                }
                map[from - 1] = to - 1;
            }
        }
        Ok(Perm { map })
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm { map: self.map.iter().map(|&i| other.map[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Perm { map }
    }

    pub fn pow(&self, n: i64) -> Perm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..n.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.then(self);
            n += 1;
        }
        n
    }

    /// Cycle notation, e.g. `(1 2)(3 4)`; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.map.len()];
        let mut out = String::new();
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(p + 1).to_string());
                first = false;
                p = self.map[p];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// A homomorphism from a [`GroupSpec`] to a finite permutation group,
/// given by images of the generators.
#[derive(Debug, Clone)]
pub struct PermHom {
    pub name: String,
    pub degree: usize,
    images: Vec<Perm>,
    spec: Arc<GroupSpec>,
}

impl PermHom {
    /// Build and validate: images must respect factor orders, and images
    /// supplied for defined generators must agree with their expansions.
    pub fn new(
        spec: Arc<GroupSpec>,
        name: &str,
        degree: usize,
        images: Vec<(String, Perm)>,
    ) -> Result<Self, GroupError> {
        let mut by_factor: Vec<Option<Perm>> = vec![None; spec.factors.len()];
        let mut defined_images: Vec<(String, Perm)> = Vec::new();
        for (gen, perm) in images {
            if perm.degree() != degree {
                return Err(GroupError::Parse(format!(
                    "image of `{gen}` has degree {} != {degree}",
                    perm.degree()
                )));
            }
            if let Some(idx) = spec.lookup(&gen) {
                by_factor[idx] = Some(perm);
            } else if spec.defined.iter().any(|d| d.name == gen) {
                defined_images.push((gen, perm));
            } else {
                return Err(GroupError::UnknownGenerator(gen));
            }
        }
        let images: Vec<Perm> = by_factor
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| GroupError::MissingImage(spec.factors[i].name.clone())))
            .collect::<Result<_, _>>()?;
        let hom = PermHom { name: name.to_string(), degree, images, spec };
        for (i, factor) in hom.spec.factors.iter().enumerate() {
            if let Order::Finite(n) = factor.order {
                if !hom.images[i].pow(n).is_identity() {
                    return Err(GroupError::ImageOrder { gen: factor.name.clone(), expected: n });
                }
            }
        }
        for (gen, perm) in &defined_images {
            let def = hom.spec.defined.iter().find(|d| d.name == *gen).unwrap();
            if hom.eval(&def.expansion) != *perm {
                return Err(GroupError::DefinedImageMismatch(gen.clone()));
            }
        }
        Ok(hom)
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    /// Homomorphic image of `g` (words act left-to-right).
    pub fn eval(&self, g: &GroupElement) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for &(gen, exp) in &g.syllables {
            acc = acc.then(&self.images[gen].pow(exp));
        }
        acc
    }

    pub fn image_of(&self, factor: usize) -> &Perm {
        &self.images[factor]
    }
}

/// Parse `hom S3 { a = (2 3); b = (1 2); c = (1 3); }`. The degree is the
/// largest point mentioned in any cycle.
pub fn parse_perm_hom(spec: Arc<GroupSpec>, text: &str) -> Result<PermHom, GroupError> {
    parse_perm_hom_min(spec, text, 1)
}

/// Like [`parse_perm_hom`], with a floor on the inferred degree (used when
/// the homomorphism is extended by a t-image on more points).
pub fn parse_perm_hom_min(
    spec: Arc<GroupSpec>,
    text: &str,
    min_degree: usize,
) -> Result<PermHom, GroupError> {
    let text = text.trim();
    let rest = text
        .strip_prefix("hom")
        .ok_or_else(|| GroupError::Parse("expected `hom NAME { ... }`".into()))?
        .trim();
    let brace = rest
        .find('{')
        .ok_or_else(|| GroupError::Parse("expected `{` in hom".into()))?;
    let name = rest[..brace].trim().to_string();
    let body = rest[brace + 1..]
        .trim_end()
        .strip_suffix('}')
        .ok_or_else(|| GroupError::Parse("expected `}` in hom".into()))?;

    let mut raw: Vec<(String, Vec<Vec<usize>>)> = Vec::new();
    let mut degree = min_degree.max(1);
    for decl in body.split(';') {
        let decl = decl.trim();
        if decl.is_empty() {
            continue;
        }
        let (gen, cycles_text) = decl
            .split_once('=')
            .ok_or_else(|| GroupError::Parse(format!("bad hom entry `{decl}`")))?;
        let cycles = parse_cycles(cycles_text.trim())?;
        for c in &cycles {
            for &p in c {
                degree = degree.max(p);
            }
        }
        raw.push((gen.trim().to_string(), cycles));
    }
    let images = raw
        .into_iter()
        .map(|(gen, cycles)| Ok((gen, Perm::from_cycles(degree, &cycles)?)))
        .collect::<Result<Vec<_>, GroupError>>()?;
    PermHom::new(spec, &name, degree, images)
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    if rest == "()" || rest == "1" || rest.is_empty() {
        return Ok(cycles);
    }
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| GroupError::Parse(format!("bad cycles `{text}`")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| GroupError::Parse(format!("bad cycles `{text}`")))?;
        let inner = &rest[open + 1..close];
        let cycle: Vec<usize> = inner
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| GroupError::Parse(format!("bad cycle point `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim();
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reflection_spec() -> Arc<GroupSpec> {
        parse_group_spec("group { a: inf; b: 2; def c = a^-1 b a; }").unwrap()
    }

    #[test]
    fn normalize_identity_cases() {
        let spec = parse_group_spec("group { a: inf; b: 2; }").unwrap();
        let g = spec.parse_element("a b b a'").unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn defined_generator_expands() {
        let spec = reflection_spec();
        // c c = a^-1 b a a^-1 b a = a^-1 b^2 a = 1
        let g = spec.parse_element("c c").unwrap();
        assert!(g.is_identity(), "got {:?}", g);
        let h = spec.parse_element("a' b a c'").unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn reflection_relations_trivial() {
        let spec = reflection_spec();
        for rel in ["b b", "c c", "a' b a c'"] {
            assert!(spec.parse_element(rel).unwrap().is_identity(), "{rel}");
        }
    }

    #[test]
    fn torsion_detection() {
        assert!(!GroupSpec::free(&["a", "b"]).has_torsion());
        let spec = parse_group_spec("group { a: inf; b: 2; }").unwrap();
        assert!(spec.has_torsion());
        assert!(!GroupSpec::new().has_torsion());
    }

    #[test]
    fn normalize_idempotent_and_homomorphic() {
        let spec = parse_group_spec("group { a: inf; b: 2; c: 3; }").unwrap();
        let words = ["a b c", "b c^2 b a^-3", "c c c", "a' b a b", "c^2 c a a'"];
        for w in &words {
            let g = spec.parse_element(w).unwrap();
            assert_eq!(spec.normalize(&g), g);
        }
        for x in &words {
            for y in &words {
                let gx = spec.parse_element(x).unwrap();
                let gy = spec.parse_element(y).unwrap();
                let mut cat = gx.syllables.clone();
                cat.extend_from_slice(&gy.syllables);
                let direct = spec.normalize(&GroupElement { syllables: cat });
                assert_eq!(direct, spec.multiply(&gx, &gy));
            }
        }
    }

    #[test]
    fn finite_exponents_reduced_into_range() {
        let spec = parse_group_spec("group { b: 2; c: 5; }").unwrap();
        let g = spec.parse_element("c^7 b^-3 c^-1").unwrap();
        for &(gen, exp) in &g.syllables {
            let Order::Finite(n) = spec.factors[gen].order else { panic!() };
            assert!((1..n).contains(&exp));
        }
    }

    #[test]
    fn perm_eval_matches_hand_calculation() {
        let spec = reflection_spec();
        let hom = parse_perm_hom(spec.clone(), "hom S3 { a = (2 3); b = (1 2); c = (1 3); }")
            .unwrap();
        // (23)(12)(23) = (13)
        let g = spec.parse_element("a' b a c'").unwrap();
        assert!(hom.eval(&g).is_identity());
        assert!(hom.eval(&GroupElement::identity()).is_identity());
        let b = spec.parse_element("b").unwrap();
        assert_eq!(hom.eval(&b).cycle_string(), "(1 2)");
    }

    #[test]
    fn perm_eval_respects_normalization() {
        let spec = parse_group_spec("group { a: inf; b: 2; }").unwrap();
        let hom =
            parse_perm_hom(spec.clone(), "hom D { a = (1 2 3); b = (1 2); }").unwrap();
        let raw = GroupElement { syllables: vec![(0, 2), (0, -2), (1, 3), (0, 1), (0, 2)] };
        assert_eq!(hom.eval(&raw), hom.eval(&spec.normalize(&raw)));
    }

    #[test]
    fn hom_rejects_bad_order() {
        let spec = parse_group_spec("group { b: 2; }").unwrap();
        let err = parse_perm_hom(spec, "hom X { b = (1 2 3); }");
        assert!(matches!(err, Err(GroupError::ImageOrder { .. })));
    }

    #[test]
    fn hom_rejects_mismatched_defined_image() {
        let spec = reflection_spec();
        let err = parse_perm_hom(spec, "hom X { a = (2 3); b = (1 2); c = (1 2); }");
        assert!(matches!(err, Err(GroupError::DefinedImageMismatch(_))));
    }

    #[test]
    fn spec_roundtrip() {
        let spec = reflection_spec();
        let printed = print_group_spec(&spec);
        let reparsed = parse_group_spec(&printed).unwrap();
        assert_eq!(*spec, *reparsed);
    }
}
