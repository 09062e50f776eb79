//! Words in `G * <t>`: cyclic reduction, coefficient roles, substitution,
//! and the blow-up normal form `w(s,t)` with its X/Y/J slot classes and
//! kernel-K canonical forms.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{GroupElement, GroupSpec};
use crate::shape::{Sign, TShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word has no t-letters")]
    TFree,
    #[error("group error: {0}")]
    Group(#[from] crate::group::GroupError),
    #[error("substitution would cancel at letter {position} of the outer word")]
    SubstitutionCancellation { position: usize },
    #[error("substituted word must start and finish with a t-letter")]
    BadSubstitutionWord,
    #[error("word has nonzero exponent sum {0}")]
    NonzeroExponentSum(i64),
    #[error("t-shape is not amenable")]
    NotAmenable,
    #[error("t-shape is a power; it has no blown-up form")]
    PowerShape,
    #[error("slot {slot} violates its class: {reason}")]
    SlotClass { slot: usize, reason: String },
    #[error("blown-up witness is inconsistent: {0}")]
    BadWitness(String),
    #[error("no blown-up witness found within the search bound")]
    WitnessNotFound,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A token of a word over `G * <t>`: a t-letter or a coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Letter(Sign),
    Coeff(GroupElement),
}

/// A cyclically reduced word in `G * <t>`.
///
/// Stored as t-letters each followed by its coefficient, cyclically; the
/// basepoint sits immediately before letter 0. Words with zero t-letters are
/// representable (they arise from full cancellation and as region words) but
/// are rejected by every shape-dependent operation.
#[derive(Debug, Clone)]
pub struct RelWord {
    pub spec: Arc<GroupSpec>,
    letters: Vec<(Sign, GroupElement)>,
    constant: GroupElement,
}

impl PartialEq for RelWord {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec
            && self.letters == other.letters
            && self.constant == other.constant
    }
}

impl Eq for RelWord {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Top,
    Bottom,
    Middle,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Top => write!(f, "top"),
            Role::Bottom => write!(f, "bottom"),
            Role::Middle => write!(f, "middle"),
        }
    }
}

impl RelWord {
    /// Cyclic reduction: repeatedly cancel `t^e 1 t^-e` around the cycle and
    /// merge the flanking coefficients until the word is reduced.
    pub fn from_tokens(spec: Arc<GroupSpec>, tokens: &[Token]) -> RelWord {
        let mut lead = GroupElement::identity();
        let mut letters: Vec<(Sign, GroupElement)> = Vec::new();
        for token in tokens {
            match token {
                Token::Coeff(g) => match letters.last_mut() {
                    Some((_, c)) => *c = spec.multiply(c, g),
                    None => lead = spec.multiply(&lead, g),
                },
                Token::Letter(s) => letters.push((*s, GroupElement::identity())),
            }
        }
        if letters.is_empty() {
            return RelWord { spec, letters, constant: lead };
        }
        // Fold the leading coefficient behind the final t-letter.
        let last = letters.len() - 1;
        letters[last].1 = spec.multiply(&letters[last].1, &lead);

        loop {
            let n = letters.len();
            if n < 2 {
                break;
            }
            let mut cancelled = false;
            for i in 0..n {
                let j = (i + 1) % n;
                if letters[i].1.is_identity() && letters[j].0 == letters[i].0.opposite() {
                    let after = letters[j].1.clone();
                    let prev = (i + n - 1) % n;
                    if prev == j {
                        // Final two letters cancel into a t-free word.
                        return RelWord {
                            spec,
                            letters: Vec::new(),
                            constant: after,
                        };
                    }
                    letters[prev].1 = spec.multiply(&letters[prev].1, &after);
                    let mut keep: Vec<(Sign, GroupElement)> = Vec::with_capacity(n - 2);
                    for (k, l) in letters.into_iter().enumerate() {
                        if k != i && k != j {
                            keep.push(l);
                        }
                    }
                    letters = keep;
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                break;
            }
        }
        RelWord { spec, letters, constant: GroupElement::identity() }
    }

    /// Parse `a T T b T' T' c d T' e T T` style text (and reduce cyclically).
    pub fn parse(spec: Arc<GroupSpec>, text: &str) -> Result<RelWord, WordError> {
        let tokens = tokenize(&spec, text)?;
        Ok(RelWord::from_tokens(spec, &tokens))
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn is_t_free(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn constant(&self) -> &GroupElement {
        &self.constant
    }

    pub fn letters(&self) -> &[(Sign, GroupElement)] {
        &self.letters
    }

    pub fn letter_sign(&self, i: usize) -> Sign {
        self.letters[i].0
    }

    pub fn coefficient(&self, i: usize) -> &GroupElement {
        &self.letters[i].1
    }

    pub fn shape(&self) -> TShape {
        TShape::new(self.letters.iter().map(|&(s, _)| s).collect())
    }

    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        for (s, c) in &self.letters {
            out.push(Token::Letter(*s));
            if !c.is_identity() {
                out.push(Token::Coeff(c.clone()));
            }
        }
        if self.letters.is_empty() && !self.constant.is_identity() {
            out.push(Token::Coeff(self.constant.clone()));
        }
        out
    }

    pub fn rotated(&self, k: usize) -> RelWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let n = self.letters.len();
        let letters = (0..n).map(|i| self.letters[(i + k) % n].clone()).collect();
        RelWord { spec: self.spec.clone(), letters, constant: self.constant.clone() }
    }

    pub fn cyclic_eq(&self, other: &RelWord) -> bool {
        if self.letters.len() != other.letters.len() {
            return false;
        }
        if self.letters.is_empty() {
            return self.constant == other.constant;
        }
        (0..self.letters.len()).any(|k| self.rotated(k).letters == other.letters)
    }

    /// The word read backwards with inverted letters (the label of a
    /// reflected disc).
    pub fn inverse(&self) -> RelWord {
        if self.letters.is_empty() {
            return RelWord {
                spec: self.spec.clone(),
                letters: Vec::new(),
                constant: self.spec.inverse(&self.constant),
            };
        }
        // w^-1 = c_{n-1}^-1 t^{-e_{n-1}} ... c_0^-1 t^{-e_0}; refold so that
        // each letter carries the coefficient that follows it.
        let n = self.letters.len();
        let mut letters = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let sign = self.letters[i].0.opposite();
            let prev = (i + n - 1) % n;
            let coeff = self.spec.inverse(&self.letters[prev].1);
            letters.push((sign, coeff));
        }
        RelWord { spec: self.spec.clone(), letters, constant: GroupElement::identity() }
    }

    /// Per-coefficient role: between `t` and `t^-1` is top, between `t^-1`
    /// and `t` is bottom, between equal signs is middle.
    pub fn coefficient_roles(&self) -> Result<Vec<Role>, WordError> {
        if self.letters.is_empty() {
            return Err(WordError::TFree);
        }
        let n = self.letters.len();
        Ok((0..n)
            .map(|i| {
                let here = self.letters[i].0;
                let next = self.letters[(i + 1) % n].0;
                match (here, next) {
                    (Sign::Plus, Sign::Minus) => Role::Top,
                    (Sign::Minus, Sign::Plus) => Role::Bottom,
                    _ => Role::Middle,
                }
            })
            .collect())
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&(s, _)| s.exp()).sum()
    }
}

impl fmt::Display for RelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "{}", self.spec.display_element(&self.constant));
        }
        for (i, (s, c)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match s {
                Sign::Plus => write!(f, "T")?,
                Sign::Minus => write!(f, "T'")?,
            }
            if !c.is_identity() {
                write!(f, " {}", self.spec.display_element(c))?;
            }
        }
        Ok(())
    }
}

fn tokenize(spec: &GroupSpec, text: &str) -> Result<Vec<Token>, WordError> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        match token {
            "T" | "t" => out.push(Token::Letter(Sign::Plus)),
            "T'" | "t'" => out.push(Token::Letter(Sign::Minus)),
            "1" => {}
            other => {
                let g = spec.parse_element(other)?;
                out.push(Token::Coeff(g));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Linear words and substitution

/// A reduced linear word in `H * <t>` that starts and finishes with a
/// t-letter; the substitution words `u` of the third-example construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearWord {
    pub spec: Arc<GroupSpec>,
    /// Signs of the t-letters.
    pub signs: Vec<Sign>,
    /// Coefficients between consecutive t-letters (`signs.len() - 1` gaps).
    pub gaps: Vec<GroupElement>,
}

impl LinearWord {
    pub fn parse(spec: Arc<GroupSpec>, text: &str) -> Result<LinearWord, WordError> {
        let tokens = tokenize(&spec, text)?;
        let mut signs = Vec::new();
        let mut gaps: Vec<GroupElement> = Vec::new();
        let mut pending = GroupElement::identity();
        for token in &tokens {
            match token {
                Token::Letter(s) => {
                    if !signs.is_empty() {
                        gaps.push(std::mem::replace(&mut pending, GroupElement::identity()));
                    }
                    signs.push(*s);
                }
                Token::Coeff(g) => {
                    if signs.is_empty() {
                        return Err(WordError::BadSubstitutionWord);
                    }
                    pending = spec.multiply(&pending, g);
                }
            }
        }
        // Must start and finish with a t-letter.
        if signs.is_empty() || !pending.is_identity() {
            return Err(WordError::BadSubstitutionWord);
        }
        // Reduced: no t^e 1 t^-e inside.
        for i in 0..signs.len() - 1 {
            if gaps[i].is_identity() && signs[i + 1] == signs[i].opposite() {
                return Err(WordError::BadSubstitutionWord);
            }
        }
        Ok(LinearWord { spec, signs, gaps })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.signs.iter().map(|s| s.exp()).sum()
    }

    fn tokens_with_exponent(&self, e: Sign) -> Vec<Token> {
        let mut out = Vec::new();
        match e {
            Sign::Plus => {
                for i in 0..self.signs.len() {
                    out.push(Token::Letter(self.signs[i]));
                    if i + 1 < self.signs.len() && !self.gaps[i].is_identity() {
                        out.push(Token::Coeff(self.gaps[i].clone()));
                    }
                }
            }
            Sign::Minus => {
                for i in (0..self.signs.len()).rev() {
                    out.push(Token::Letter(self.signs[i].opposite()));
                    if i > 0 && !self.gaps[i - 1].is_identity() {
                        out.push(Token::Coeff(self.spec.inverse(&self.gaps[i - 1])));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LinearWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.signs.len() {
            if i > 0 {
                write!(f, " ")?;
            }
            match self.signs[i] {
                Sign::Plus => write!(f, "T")?,
                Sign::Minus => write!(f, "T'")?,
            }
            if i + 1 < self.signs.len() && !self.gaps[i].is_identity() {
                write!(f, " {}", self.spec.display_element(&self.gaps[i]))?;
            }
        }
        Ok(())
    }
}

/// Substitute `u^e` for every `t^e` of `w`. The result must be cyclically
/// reduced with no cancellation at all; when `u` starts and finishes with
/// opposite exponents this forces every coefficient of `w` to be nontrivial.
pub fn substitute(w: &RelWord, u: &LinearWord) -> Result<RelWord, WordError> {
    if w.is_t_free() {
        return Err(WordError::TFree);
    }
    let first = *u.signs.first().unwrap();
    let last = *u.signs.last().unwrap();
    if first == last.opposite() {
        for i in 0..w.num_letters() {
            if w.coefficient(i).is_identity() {
                return Err(WordError::SubstitutionCancellation { position: i });
            }
        }
    }
    let mut tokens = Vec::new();
    for i in 0..w.num_letters() {
        tokens.extend(u.tokens_with_exponent(w.letter_sign(i)));
        let c = w.coefficient(i);
        if !c.is_identity() {
            tokens.push(Token::Coeff(c.clone()));
        }
    }
    let result = RelWord::from_tokens(w.spec.clone(), &tokens);
    debug_assert_eq!(result.num_letters(), w.num_letters() * u.len());
    Ok(result)
}

// ---------------------------------------------------------------------------
// The kernel K and its canonical forms

/// Canonical form of an element of `K = ker(ex: G * <s> -> Z)`:
/// `k = g_1^{s^{O_1}} ... g_r^{s^{O_r}}` with `g_i != 1` and consecutive
/// levels distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KCanonical {
    pub items: Vec<(GroupElement, i64)>,
}

impl KCanonical {
    pub fn identity() -> Self {
        KCanonical { items: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.items.is_empty()
    }

    pub fn min_level(&self) -> Option<i64> {
        self.items.iter().map(|&(_, o)| o).min()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.items.iter().map(|&(_, o)| o).max()
    }

    /// Canonicalize a list of levelled G-elements: merge adjacent items at
    /// equal levels, drop trivial ones, cascade.
    pub fn from_items(spec: &GroupSpec, items: Vec<(GroupElement, i64)>) -> KCanonical {
        let mut out: Vec<(GroupElement, i64)> = Vec::new();
        for (g, level) in items {
            let g = spec.normalize(&g);
            if g.is_identity() {
                continue;
            }
            let mut g = g;
            let mut level = level;
            loop {
                match out.last() {
                    Some((_, top_level)) if *top_level == level => {
                        let (top, _) = out.pop().unwrap();
                        let merged = spec.multiply(&top, &g);
                        if merged.is_identity() {
                            match out.pop() {
                                Some((pg, pl)) => {
                                    g = pg;
                                    level = pl;
                                }
                                None => break,
                            }
                        } else {
                            out.push((merged, level));
                            break;
                        }
                    }
                    _ => {
                        out.push((g, level));
                        break;
                    }
                }
            }
        }
        KCanonical { items: out }
    }

    /// The level shift `k -> k^s` (all levels + 1); this is the isomorphism
    /// phi between the level-window subgroups H and H'.
    pub fn shifted(&self, by: i64) -> KCanonical {
        KCanonical { items: self.items.iter().map(|(g, o)| (g.clone(), o + by)).collect() }
    }

    pub fn inverse(&self, spec: &GroupSpec) -> KCanonical {
        KCanonical {
            items: self.items.iter().rev().map(|(g, o)| (spec.inverse(g), *o)).collect(),
        }
    }

    pub fn multiply(&self, spec: &GroupSpec, other: &KCanonical) -> KCanonical {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        KCanonical::from_items(spec, items)
    }

    /// The s-word written as the product of canonical element factors,
    /// `(s^{-O_1} g_1 s^{O_1})(s^{-O_2} g_2 s^{O_2})...`, emitted as tokens
    /// whose letters stand for `s`. Factors are kept separate (unmerged);
    /// this is the form whose s-letters become the s-legs of a disc.
    pub fn s_word_tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        for (g, o) in &self.items {
            push_run(&mut out, -o);
            out.push(Token::Coeff(g.clone()));
            push_run(&mut out, *o);
        }
        out
    }

    /// Materialize as an element of a spec that has `s` as generator `s_gen`.
    pub fn as_group_element(&self, gamma: &GroupSpec, s_gen: usize) -> GroupElement {
        let mut syllables = Vec::new();
        let mut level = 0i64;
        for (g, o) in &self.items {
            if o - level != 0 {
                syllables.push((s_gen, -(o - level)));
            }
            syllables.extend_from_slice(&g.syllables);
            level = *o;
        }
        if level != 0 {
            syllables.push((s_gen, level));
        }
        gamma.normalize(&GroupElement { syllables })
    }

    pub fn display<'a>(&'a self, spec: &'a GroupSpec) -> DisplayK<'a> {
        DisplayK { spec, k: self }
    }
}

fn push_run(out: &mut Vec<Token>, exp: i64) {
    let sign = if exp >= 0 { Sign::Plus } else { Sign::Minus };
    for _ in 0..exp.unsigned_abs() {
        out.push(Token::Letter(sign));
    }
}

pub struct DisplayK<'a> {
    spec: &'a GroupSpec,
    k: &'a KCanonical,
}

impl fmt::Display for DisplayK<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k.items.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, o)) in self.k.items.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if g.syllables.len() > 1 {
                write!(f, "({})@{}", self.spec.display_element(g), o)?;
            } else {
                write!(f, "{}@{}", self.spec.display_element(g), o)?;
            }
        }
        Ok(())
    }
}

/// Membership in the level-window subgroups and subsets of K, for a fixed
/// complexity `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KFlags {
    /// min >= 0 and max <= m-2
    pub in_h: bool,
    /// min >= 1 and max <= m-1
    pub in_h_prime: bool,
    /// min >= 0 and max <= m-1
    pub in_j: bool,
    /// min = 0 and max <= m-1
    pub in_x: bool,
    /// min >= 0 and max = m-1
    pub in_y: bool,
}

impl KFlags {
    pub fn of(k: &KCanonical, m: usize) -> KFlags {
        let m = m as i64;
        match (k.min_level(), k.max_level()) {
            (None, None) => KFlags {
                in_h: true,
                in_h_prime: true,
                in_j: true,
                in_x: false,
                in_y: false,
            },
            (Some(min), Some(max)) => KFlags {
                in_h: min >= 0 && max <= m - 2,
                in_h_prime: min >= 1 && max < m,
                in_j: min >= 0 && max < m,
                in_x: min == 0 && max < m,
                in_y: min >= 0 && max == m - 1,
            },
            _ => unreachable!(),
        }
    }
}

/// Canonical form and class flags of a linear word over `G * <s>` with
/// s-exponent sum 0; the tokens' letters stand for `s`.
pub fn k_classify(
    spec: &GroupSpec,
    tokens: &[Token],
    m: usize,
) -> Result<(KCanonical, KFlags), WordError> {
    let mut running = 0i64;
    let mut items = Vec::new();
    for token in tokens {
        match token {
            Token::Letter(s) => running += s.exp(),
            Token::Coeff(g) => items.push((g.clone(), -running)),
        }
    }
    if running != 0 {
        return Err(WordError::NonzeroExponentSum(running));
    }
    let k = KCanonical::from_items(spec, items);
    let flags = KFlags::of(&k, m);
    Ok((k, flags))
}

// ---------------------------------------------------------------------------
// Blown-up words

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Top,
    Bottom,
    Middle,
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotKind::Top => write!(f, "top"),
            SlotKind::Bottom => write!(f, "bot"),
            SlotKind::Middle => write!(f, "mid"),
        }
    }
}

/// The blown-up form of an amenable word: an amenable root shape together
/// with one slot per root-gap, each holding an element of X, Y or J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlownUpWord {
    pub root: TShape,
    pub m: usize,
    /// Slot `i` follows root letter `i`.
    pub slots: Vec<(SlotKind, KCanonical)>,
}

/// The slot kind forced by the signs around gap `i` of `root`.
pub fn gap_kind(root: &TShape, i: usize) -> SlotKind {
    let n = root.len();
    let here = root.letters()[i];
    let next = root.letters()[(i + 1) % n];
    match (here, next) {
        (Sign::Plus, Sign::Minus) => SlotKind::Top,
        (Sign::Minus, Sign::Plus) => SlotKind::Bottom,
        _ => SlotKind::Middle,
    }
}

impl BlownUpWord {
    pub fn validate(&self, spec: &GroupSpec) -> Result<(), WordError> {
        let n = self.root.len();
        if self.slots.len() != n {
            return Err(WordError::BadWitness(format!(
                "root has {} letters but {} slots given",
                n,
                self.slots.len()
            )));
        }
        if self.m == 0 {
            return Err(WordError::PowerShape);
        }
        let analysis = self.root.analyze();
        if !(analysis.amenable && analysis.complexity == 1) {
            return Err(WordError::BadWitness("root is not an amenable root shape".into()));
        }
        for (i, (kind, k)) in self.slots.iter().enumerate() {
            let expected = gap_kind(&self.root, i);
            if *kind != expected {
                return Err(WordError::BadWitness(format!(
                    "slot {i} marked {kind} but the root gap is {expected}"
                )));
            }
            for (g, _) in &k.items {
                if spec.normalize(g).is_identity() {
                    return Err(WordError::SlotClass {
                        slot: i,
                        reason: "trivial canonical element".into(),
                    });
                }
            }
            for w in k.items.windows(2) {
                if w[0].1 == w[1].1 {
                    return Err(WordError::SlotClass {
                        slot: i,
                        reason: "consecutive canonical elements at equal levels".into(),
                    });
                }
            }
            let flags = KFlags::of(k, self.m);
            let ok = match kind {
                SlotKind::Top => flags.in_x,
                SlotKind::Bottom => flags.in_y,
                SlotKind::Middle => flags.in_j,
            };
            if !ok {
                return Err(WordError::SlotClass {
                    slot: i,
                    reason: format!(
                        "levels {:?}..{:?} not in the {kind} class at m={}",
                        k.min_level(),
                        k.max_level(),
                        self.m
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, spec: &'a GroupSpec) -> DisplayWitness<'a> {
        DisplayWitness { spec, witness: self }
    }

    /// Parse the form printed by [`BlownUpWord::display`]:
    /// `root=[T T T'] m=3 slots=[mid: a@1 | top: b@0 c@2 | bot: d@1 e@2]`.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<BlownUpWord, WordError> {
        let text = text.trim();
        let root_start = text
            .find("root=[")
            .ok_or_else(|| WordError::Parse("missing root=[...]".into()))?;
        let rest = &text[root_start + 6..];
        let root_end = rest
            .find(']')
            .ok_or_else(|| WordError::Parse("unterminated root".into()))?;
        let root = TShape::parse(&rest[..root_end])
            .map_err(|e| WordError::Parse(e.to_string()))?;
        let rest = &rest[root_end + 1..];
        let m_start = rest
            .find("m=")
            .ok_or_else(|| WordError::Parse("missing m=".into()))?;
        let rest = &rest[m_start + 2..];
        let m_end = rest.find(' ').unwrap_or(rest.len());
        let m: usize = rest[..m_end]
            .parse()
            .map_err(|_| WordError::Parse("bad m".into()))?;
        let slots_start = rest
            .find("slots=[")
            .ok_or_else(|| WordError::Parse("missing slots=[...]".into()))?;
        let inner = &rest[slots_start + 7..];
        let slots_end = inner
            .rfind(']')
            .ok_or_else(|| WordError::Parse("unterminated slots".into()))?;
        let inner = &inner[..slots_end];
        let mut slots = Vec::new();
        for part in inner.split('|') {
            let part = part.trim();
            let (kind_text, body) = part
                .split_once(':')
                .ok_or_else(|| WordError::Parse(format!("bad slot `{part}`")))?;
            let kind = match kind_text.trim() {
                "top" => SlotKind::Top,
                "bot" => SlotKind::Bottom,
                "mid" => SlotKind::Middle,
                other => return Err(WordError::Parse(format!("bad slot kind `{other}`"))),
            };
            let mut items = Vec::new();
            for piece in split_slot_items(body.trim())? {
                let (g_text, level_text) = piece
                    .rsplit_once('@')
                    .ok_or_else(|| WordError::Parse(format!("bad slot item `{piece}`")))?;
                let g_text = g_text.trim().trim_start_matches('(').trim_end_matches(')');
                let g = spec.parse_element(g_text)?;
                let level: i64 = level_text
                    .trim()
                    .parse()
                    .map_err(|_| WordError::Parse(format!("bad level `{level_text}`")))?;
                items.push((g, level));
            }
            slots.push((kind, KCanonical { items }));
        }
        Ok(BlownUpWord { root, m, slots })
    }
}

fn split_slot_items(body: &str) -> Result<Vec<String>, WordError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in body.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| WordError::Parse("unbalanced parens".into()))?;
                cur.push(c);
            }
            ' ' if depth == 0 => {
                // items are separated by spaces NOT inside parens, but an
                // item like `a@1` has no spaces; `(a b)@1` keeps its spaces.
                if cur.contains('@') {
                    out.push(std::mem::take(&mut cur));
                } else if !cur.is_empty() {
                    cur.push(' ');
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    Ok(out.into_iter().filter(|s| !s.trim().is_empty()).collect())
}

pub struct DisplayWitness<'a> {
    spec: &'a GroupSpec,
    witness: &'a BlownUpWord,
}

impl fmt::Display for DisplayWitness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root=[{}] m={} slots=[", self.witness.root, self.witness.m)?;
        for (i, (kind, k)) in self.witness.slots.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            if k.is_identity() {
                write!(f, "{kind}:")?;
            } else {
                write!(f, "{kind}: {}", k.display(self.spec))?;
            }
        }
        write!(f, "]")
    }
}

/// Build `w(s,t)`, substitute `t` for `s`, and reduce cyclically to obtain
/// the amenable word `w`.
pub fn assemble_blowup(spec: &Arc<GroupSpec>, b: &BlownUpWord) -> Result<RelWord, WordError> {
    b.validate(spec)?;
    let mut tokens = Vec::new();
    for (i, sign) in b.root.letters().iter().enumerate() {
        tokens.push(Token::Letter(*sign));
        tokens.extend(b.slots[i].1.s_word_tokens());
    }
    Ok(RelWord::from_tokens(spec.clone(), &tokens))
}

/// Recover some blown-up witness for an amenable word of complexity >= 1.
///
/// The complexity-one case is immediate: the word is its own root and every
/// coefficient is a level-0 slot. For higher complexity this runs a bounded
/// placement search: the nontrivial coefficients of `w` split into pieces
/// carrying heights read off the t-letters of `w`, root letters are inserted
/// at run gaps or coefficient split points, and the one free level parameter
/// is pinned by the min/max equalities of the top and bottom slot classes.
/// `WitnessNotFound` reports exhaustion of the bounded search only.
pub fn recover_blowup(w: &RelWord) -> Result<BlownUpWord, WordError> {
    if w.is_t_free() {
        return Err(WordError::TFree);
    }
    let analysis = w.shape().analyze();
    if !analysis.amenable {
        return Err(WordError::NotAmenable);
    }
    let m = analysis.complexity;
    if m == 0 {
        return Err(WordError::PowerShape);
    }
    let root = analysis.root.clone().expect("complexity >= 1 has a root");
    if m == 1 {
        let shape = w.shape();
        let mut slots = Vec::new();
        for i in 0..w.num_letters() {
            let kind = gap_kind(&shape, i);
            let c = w.coefficient(i);
            let k = if c.is_identity() {
                KCanonical::identity()
            } else {
                KCanonical { items: vec![(c.clone(), 0)] }
            };
            slots.push((kind, k));
        }
        let witness = BlownUpWord { root: shape, m: 1, slots };
        witness.validate(&w.spec)?;
        return Ok(witness);
    }
    let searcher = RecoverSearch::new(w, &root, m)?;
    searcher.run()
}

/// Every witness the bounded search can see, deduplicated. Used by the
/// regression tests; `recover_blowup` returns the canonical minimum.
pub fn recover_blowup_all(w: &RelWord) -> Result<Vec<BlownUpWord>, WordError> {
    if w.is_t_free() {
        return Err(WordError::TFree);
    }
    let analysis = w.shape().analyze();
    if !analysis.amenable {
        return Err(WordError::NotAmenable);
    }
    if analysis.complexity == 0 {
        return Err(WordError::PowerShape);
    }
    if analysis.complexity == 1 {
        return Ok(vec![recover_blowup(w)?]);
    }
    let root = analysis.root.clone().unwrap();
    let searcher = RecoverSearch::new(w, &root, analysis.complexity)?;
    searcher.run_all()
}

struct RecoverSearch<'a> {
    w: &'a RelWord,
    root: &'a TShape,
    m: usize,
    /// Nontrivial coefficients in cyclic order with their walk heights.
    blocks: Vec<(GroupElement, i64)>,
    ex: i64,
    evaluations: std::cell::Cell<usize>,
}

#[derive(Debug, Clone)]
enum Event {
    Piece(GroupElement, i64),
    Root,
}

const RECOVER_EVAL_CAP: usize = 4_000_000;

impl<'a> RecoverSearch<'a> {
    fn new(w: &'a RelWord, root: &'a TShape, m: usize) -> Result<Self, WordError> {
        let n = w.num_letters();
        let mut blocks = Vec::new();
        // Walk heights: height after letter i, anchored at 0 before letter 0.
        let mut height = 0i64;
        let mut heights = Vec::with_capacity(n);
        for i in 0..n {
            height += w.letter_sign(i).exp();
            heights.push(height);
        }
        for (i, &h) in heights.iter().enumerate() {
            if !w.coefficient(i).is_identity() {
                blocks.push((w.coefficient(i).clone(), h));
            }
        }
        if blocks.is_empty() {
            return Err(WordError::PowerShape);
        }
        // Re-anchor so block 0 sits at height 0.
        let base = blocks[0].1;
        for b in &mut blocks {
            b.1 -= base;
        }
        Ok(RecoverSearch {
            w,
            root,
            m,
            blocks,
            ex: w.exponent_sum(),
            evaluations: std::cell::Cell::new(0),
        })
    }

    fn run(&self) -> Result<BlownUpWord, WordError> {
        let all = self.run_all()?;
        all.into_iter().next().ok_or(WordError::WitnessNotFound)
    }

    fn run_all(&self) -> Result<Vec<BlownUpWord>, WordError> {
        let n = self.root.len();
        let mut events = Vec::new();
        let mut found = Vec::new();
        self.place_block(0, n, &mut events, &mut found)?;
        // Canonical preference: the blow-up construction inserts an element
        // in every gap, so prefer witnesses with the most nonempty slots,
        // then the most canonical elements, then the least canonical key.
        let mut keyed: Vec<(usize, usize, WitnessKey, BlownUpWord)> = found
            .into_iter()
            .map(|w| {
                let w = canonicalize_witness(w);
                let nonempty = w.slots.iter().filter(|(_, k)| !k.is_identity()).count();
                let pieces: usize = w.slots.iter().map(|(_, k)| k.items.len()).sum();
                (n - nonempty, usize::MAX - pieces, witness_key(&w), w)
            })
            .collect();
        keyed.sort_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
        keyed.dedup_by(|a, b| a.2 == b.2);
        Ok(keyed.into_iter().map(|(_, _, _, w)| w).collect())
    }

    /// Walk block `idx`: enumerate split placements of roots inside it, then
    /// the run gap after it, then recurse into the next block.
    fn place_block(
        &self,
        idx: usize,
        roots_left: usize,
        events: &mut Vec<Event>,
        found: &mut Vec<BlownUpWord>,
    ) -> Result<(), WordError> {
        if idx == self.blocks.len() {
            if roots_left == 0 {
                self.evaluate(events, found)?;
            }
            return Ok(());
        }
        let (coeff, height) = self.blocks[idx].clone();
        self.place_syllables(idx, &coeff.syllables, height, roots_left, events, true, found)
    }

    /// Emit pieces of block `idx` from `syllables`, inserting up to
    /// `roots_left` root letters at split points. `fresh` marks that no piece
    /// of this block has been emitted yet (pieces must be nonempty).
    #[allow(clippy::too_many_arguments)]
    fn place_syllables(
        &self,
        idx: usize,
        syllables: &[(usize, i64)],
        height: i64,
        roots_left: usize,
        events: &mut Vec<Event>,
        fresh: bool,
        found: &mut Vec<BlownUpWord>,
    ) -> Result<(), WordError> {
        if syllables.is_empty() {
            if fresh {
                // An empty piece: only reachable on recursion bugs.
                return Ok(());
            }
            return self.place_run_gap(idx, roots_left, events, found);
        }
        // Option: emit the whole remainder as one piece, no further splits.
        let rest = GroupElement { syllables: syllables.to_vec() };
        events.push(Event::Piece(rest, height));
        self.place_run_gap(idx, roots_left, events, found)?;
        events.pop();
        if roots_left == 0 {
            return Ok(());
        }
        // Split: a nonempty prefix piece, then >= 1 roots, then the rest.
        for split in self.prefix_splits(syllables) {
            let (prefix, remainder) = split;
            events.push(Event::Piece(prefix, height));
            for k in 1..=roots_left {
                for _ in 0..k {
                    events.push(Event::Root);
                }
                self.place_syllables(
                    idx,
                    &remainder,
                    height,
                    roots_left - k,
                    events,
                    false,
                    found,
                )?;
                for _ in 0..k {
                    events.pop();
                }
            }
            events.pop();
        }
        Ok(())
    }

    /// All nontrivial (prefix, remainder) splits of a normal form: between
    /// syllables, and inside a syllable at exponent split points.
    fn prefix_splits(&self, syllables: &[(usize, i64)]) -> Vec<(GroupElement, Vec<(usize, i64)>)> {
        let spec = &self.w.spec;
        let mut out = Vec::new();
        for cut in 1..syllables.len() {
            out.push((
                GroupElement { syllables: syllables[..cut].to_vec() },
                syllables[cut..].to_vec(),
            ));
        }
        // Within-syllable splits of the first syllable g^e into g^e1 | g^e2.
        let (gen, exp) = syllables[0];
        let splits: Vec<(i64, i64)> = match spec.factors[gen].order {
            crate::group::Order::Infinite => {
                let sgn = exp.signum();
                (1..exp.abs()).map(|k| (sgn * k, exp - sgn * k)).collect()
            }
            crate::group::Order::Finite(order) => (1..order)
                .filter_map(|e1| {
                    let e2 = (exp - e1).rem_euclid(order);
                    if e2 == 0 {
                        None
                    } else {
                        Some((e1, e2))
                    }
                })
                .collect(),
        };
        for (e1, e2) in splits {
            let mut rem = syllables.to_vec();
            rem[0].1 = e2;
            out.push((GroupElement { syllables: vec![(gen, e1)] }, rem));
        }
        out
    }

    /// The single run-gap locus after block `idx`.
    fn place_run_gap(
        &self,
        idx: usize,
        roots_left: usize,
        events: &mut Vec<Event>,
        found: &mut Vec<BlownUpWord>,
    ) -> Result<(), WordError> {
        for k in 0..=roots_left {
            for _ in 0..k {
                events.push(Event::Root);
            }
            self.place_block(idx + 1, roots_left - k, events, found)?;
            for _ in 0..k {
                events.pop();
            }
        }
        Ok(())
    }

    fn evaluate(&self, events: &[Event], found: &mut Vec<BlownUpWord>) -> Result<(), WordError> {
        let count = self.evaluations.get() + 1;
        if count > RECOVER_EVAL_CAP {
            return Err(WordError::WitnessNotFound);
        }
        self.evaluations.set(count);

        let n = self.root.len();
        let root_letters = self.root.letters();
        // Index events: root positions and pieces per slot, in walk order.
        // Slot j holds the pieces strictly between walk-roots j and j+1;
        // slot n-1 wraps, picking up head pieces at height + ex(w).
        let mut slot_pieces: Vec<Vec<(GroupElement, i64)>> = vec![Vec::new(); n];
        let mut seen_roots = 0usize;
        let mut head: Vec<(GroupElement, i64)> = Vec::new();
        for ev in events {
            match ev {
                Event::Root => seen_roots += 1,
                Event::Piece(g, h) => {
                    if seen_roots == 0 {
                        head.push((g.clone(), h + self.ex));
                    } else {
                        slot_pieces[seen_roots - 1].push((g.clone(), *h));
                    }
                }
            }
        }
        debug_assert_eq!(seen_roots, n);
        slot_pieces[n - 1].extend(head);

        'rotation: for r in 0..n {
            let sigma: Vec<Sign> = (0..n).map(|j| root_letters[(r + j) % n]).collect();
            let mut pre = vec![0i64; n];
            for j in 1..n {
                pre[j] = pre[j - 1] + sigma[j].exp();
            }
            let kind = |j: usize| -> SlotKind {
                match (sigma[j], sigma[(j + 1) % n]) {
                    (Sign::Plus, Sign::Minus) => SlotKind::Top,
                    (Sign::Minus, Sign::Plus) => SlotKind::Bottom,
                    _ => SlotKind::Middle,
                }
            };
            // Pin the free offset lambda with the top/bottom equalities.
            let mut lambda: Option<i64> = None;
            for j in 0..n {
                let pieces = &slot_pieces[j];
                let candidate = match kind(j) {
                    SlotKind::Top => {
                        let Some(max_h) = pieces.iter().map(|&(_, h)| h).max() else {
                            continue 'rotation;
                        };
                        Some(max_h - pre[j])
                    }
                    SlotKind::Bottom => {
                        let Some(min_h) = pieces.iter().map(|&(_, h)| h).min() else {
                            continue 'rotation;
                        };
                        Some(min_h + (self.m as i64 - 1) - pre[j])
                    }
                    SlotKind::Middle => None,
                };
                if let Some(c) = candidate {
                    match lambda {
                        None => lambda = Some(c),
                        Some(l) if l == c => {}
                        Some(_) => continue 'rotation,
                    }
                }
            }
            let Some(lambda) = lambda else {
                continue 'rotation;
            };
            // Build slots, checking levels.
            let mut slots = Vec::with_capacity(n);
            for j in 0..n {
                let beta = lambda + pre[j];
                let mut items = Vec::new();
                for (g, h) in &slot_pieces[j] {
                    let level = beta - h;
                    if level < 0 || level > self.m as i64 - 1 {
                        continue 'rotation;
                    }
                    items.push((g.clone(), level));
                }
                for w2 in items.windows(2) {
                    if w2[0].1 == w2[1].1 {
                        continue 'rotation;
                    }
                }
                slots.push((kind(j), KCanonical { items }));
            }
            let witness = BlownUpWord {
                root: TShape::new(sigma),
                m: self.m,
                slots,
            };
            if witness.validate(&self.w.spec).is_err() {
                continue 'rotation;
            }
            let reassembled = assemble_blowup(&self.w.spec, &witness)?;
            if reassembled.cyclic_eq(self.w) {
                found.push(witness);
            }
        }
        Ok(())
    }
}

/// Rotation-invariant comparison key for a witness.
type WitnessKey = (Vec<Sign>, Vec<Vec<(i64, GroupElement)>>);

fn witness_key(w: &BlownUpWord) -> WitnessKey {
    let n = w.root.len();
    let root = w.root.letters().to_vec();
    let slots: Vec<Vec<(i64, GroupElement)>> = (0..n)
        .map(|j| w.slots[j].1.items.iter().map(|(g, o)| (*o, g.clone())).collect())
        .collect();
    (root, slots)
}

/// Rotate a witness so that (root, slots) is rotation-lexicographically
/// least; makes `recover_blowup` output independent of search order.
fn canonicalize_witness(w: BlownUpWord) -> BlownUpWord {
    let n = w.root.len();
    let mut best: Option<(WitnessKey, BlownUpWord)> = None;
    for r in 0..n {
        let rotated = BlownUpWord {
            root: w.root.rotated(r),
            m: w.m,
            slots: (0..n).map(|j| w.slots[(r + j) % n].clone()).collect(),
        };
        let key = witness_key(&rotated);
        if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
            best = Some((key, rotated));
        }
    }
    best.unwrap().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;
    use crate::shape::Sign;

    fn free(names: &[&str]) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::free(names))
    }

    fn word(spec: &Arc<GroupSpec>, text: &str) -> RelWord {
        RelWord::parse(spec.clone(), text).unwrap()
    }

    #[test]
    fn cyclic_reduce_to_t_free() {
        let spec = free(&["a"]);
        let w = word(&spec, "T 1 T' a");
        assert!(w.is_t_free());
        assert_eq!(format!("{}", w), "a");
    }

    #[test]
    fn cyclic_reduce_collapses_the_blown_form() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        // w(t,t) for the blown-up form t(s^-1 a s)t(b)(s^-2 c s^2)t^-1(s^-1 d s)(s^-2 e s^2)
        let raw = "T T' a T T b T' T' c T T T' T' d T T' T' e T T";
        let w = word(&spec, raw);
        let expected = word(&spec, "a T T b T' T' c d T' e T T");
        assert!(w.cyclic_eq(&expected), "got {w}");
    }

    #[test]
    fn already_reduced_unchanged() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let reparsed = RelWord::parse(spec.clone(), &format!("{w}")).unwrap();
        assert_eq!(w, reparsed);
    }

    #[test]
    fn roles_of_the_reflection_word() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let roles = w.coefficient_roles().unwrap();
        assert_eq!(roles, vec![Role::Middle, Role::Top, Role::Bottom]);

        let w2 = word(&spec, "T a");
        assert_eq!(w2.coefficient_roles().unwrap(), vec![Role::Middle]);

        let w3 = word(&spec, "T a T' b");
        assert_eq!(w3.coefficient_roles().unwrap(), vec![Role::Top, Role::Bottom]);
    }

    #[test]
    fn substitution_doubles_strands() {
        let spec = free(&["a", "b"]);
        let w = word(&spec, "a T a T");
        let u = LinearWord::parse(spec.clone(), "T b T'").unwrap();
        let w2 = substitute(&w, &u).unwrap();
        let expected = word(&spec, "a T b T' a T b T'");
        assert!(w2.cyclic_eq(&expected), "got {w2}");
    }

    #[test]
    fn substitution_identity() {
        let spec = free(&["a", "b"]);
        let w = word(&spec, "T a T b");
        let u = LinearWord::parse(spec.clone(), "T").unwrap();
        let w2 = substitute(&w, &u).unwrap();
        assert!(w2.cyclic_eq(&w));
    }

    #[test]
    fn substitution_rejects_trivial_middle() {
        let spec = free(&["a", "b"]);
        // T a T T' b has shape ttt^-1; the coefficient after the first T is a,
        // after the second T is trivial... build one with a trivial middle:
        let w = word(&spec, "T T a T b");
        let u = LinearWord::parse(spec.clone(), "T b T'").unwrap();
        let err = substitute(&w, &u);
        assert!(matches!(err, Err(WordError::SubstitutionCancellation { .. })));
    }

    #[test]
    fn substitution_exponent_multiplies() {
        let spec = free(&["a", "b"]);
        let w = word(&spec, "T a T a T' a");
        let u = LinearWord::parse(spec.clone(), "T b T b T").unwrap();
        let w2 = substitute(&w, &u).unwrap();
        assert_eq!(w2.exponent_sum(), w.exponent_sum() * u.exponent_sum());
        assert_eq!(w2.num_letters(), w.num_letters() * u.len());
    }

    #[test]
    fn k_classify_classic_slots() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        // b s^-2 c s^2 at m=3
        let tokens = vec![
            Token::Coeff(spec.parse_element("b").unwrap()),
            Token::Letter(Sign::Minus),
            Token::Letter(Sign::Minus),
            Token::Coeff(spec.parse_element("c").unwrap()),
            Token::Letter(Sign::Plus),
            Token::Letter(Sign::Plus),
        ];
        let (k, flags) = k_classify(&spec, &tokens, 3).unwrap();
        assert_eq!(
            k.items,
            vec![
                (spec.parse_element("b").unwrap(), 0),
                (spec.parse_element("c").unwrap(), 2)
            ]
        );
        assert!(flags.in_x && flags.in_j);
        // min 0 rules out H and H'; max = m-1 puts it in Y as well as X.
        assert!(flags.in_y && !flags.in_h && !flags.in_h_prime);

        // s^-1 d s s^-2 e s^2 at m=3
        let tokens = vec![
            Token::Letter(Sign::Minus),
            Token::Coeff(spec.parse_element("d").unwrap()),
            Token::Letter(Sign::Plus),
            Token::Letter(Sign::Minus),
            Token::Letter(Sign::Minus),
            Token::Coeff(spec.parse_element("e").unwrap()),
            Token::Letter(Sign::Plus),
            Token::Letter(Sign::Plus),
        ];
        let (k, flags) = k_classify(&spec, &tokens, 3).unwrap();
        assert_eq!(k.min_level(), Some(1));
        assert_eq!(k.max_level(), Some(2));
        assert!(flags.in_y && flags.in_h_prime && flags.in_j);
        assert!(!flags.in_x && !flags.in_h);

        let (k, flags) = k_classify(&spec, &[], 3).unwrap();
        assert!(k.is_identity());
        assert!(flags.in_h && flags.in_h_prime && flags.in_j);
        assert!(!flags.in_x && !flags.in_y);
    }

    #[test]
    fn k_classify_rejects_nonzero_sum() {
        let spec = free(&["a"]);
        let tokens = vec![Token::Letter(Sign::Plus)];
        assert!(matches!(
            k_classify(&spec, &tokens, 2),
            Err(WordError::NonzeroExponentSum(1))
        ));
    }

    #[test]
    fn k_canonical_merges_levels() {
        let spec = free(&["a", "b"]);
        let a = spec.parse_element("a").unwrap();
        let a_inv = spec.parse_element("a'").unwrap();
        let b = spec.parse_element("b").unwrap();
        let k = KCanonical::from_items(
            &spec,
            vec![(a.clone(), 1), (b.clone(), 1), (a.clone(), 0), (a_inv, 0), (b, 1)],
        );
        // a@1 b@1 merge; a@0 a^-1@0 cancel; the final b@1 then merges too.
        assert_eq!(k.items.len(), 1);
        assert_eq!(k.items[0].1, 1);
        assert_eq!(format!("{}", spec.display_element(&k.items[0].0)), "a b^2");
    }

    fn classic_witness(spec: &Arc<GroupSpec>) -> BlownUpWord {
        let g = |t: &str| spec.parse_element(t).unwrap();
        BlownUpWord {
            root: TShape::parse("T T T'").unwrap(),
            m: 3,
            slots: vec![
                (SlotKind::Middle, KCanonical { items: vec![(g("a"), 1)] }),
                (SlotKind::Top, KCanonical { items: vec![(g("b"), 0), (g("c"), 2)] }),
                (SlotKind::Bottom, KCanonical { items: vec![(g("d"), 1), (g("e"), 2)] }),
            ],
        }
    }

    #[test]
    fn assemble_classic_witness() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let b = classic_witness(&spec);
        let w = assemble_blowup(&spec, &b).unwrap();
        let expected = word(&spec, "a T T b T' T' c d T' e T T");
        assert!(w.cyclic_eq(&expected), "got {w}");
        let analysis = w.shape().analyze();
        assert_eq!(analysis.complexity, 3);
        assert!(analysis.root.unwrap().cyclic_eq(&b.root));
    }

    #[test]
    fn assemble_m1_is_literal() {
        let spec = free(&["a", "b"]);
        let g = |t: &str| spec.parse_element(t).unwrap();
        let b = BlownUpWord {
            root: TShape::parse("T T'").unwrap(),
            m: 1,
            slots: vec![
                (SlotKind::Top, KCanonical { items: vec![(g("a"), 0)] }),
                (SlotKind::Bottom, KCanonical { items: vec![(g("b"), 0)] }),
            ],
        };
        let w = assemble_blowup(&spec, &b).unwrap();
        assert!(w.cyclic_eq(&word(&spec, "T a T' b")));
    }

    #[test]
    fn assemble_rejects_bad_class() {
        let spec = free(&["g", "h"]);
        let g = |t: &str| spec.parse_element(t).unwrap();
        let b = BlownUpWord {
            root: TShape::parse("T T'").unwrap(),
            m: 2,
            slots: vec![
                (SlotKind::Top, KCanonical { items: vec![(g("g"), 1)] }), // min != 0
                (SlotKind::Bottom, KCanonical { items: vec![(g("h"), 1)] }),
            ],
        };
        assert!(matches!(
            assemble_blowup(&spec, &b),
            Err(WordError::SlotClass { slot: 0, .. })
        ));
    }

    #[test]
    fn recover_m1_trivial_witness() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let witness = recover_blowup(&w).unwrap();
        assert_eq!(witness.m, 1);
        assert!(witness.root.cyclic_eq(&w.shape()));
        let back = assemble_blowup(&spec, &witness).unwrap();
        assert!(back.cyclic_eq(&w));
    }

    #[test]
    fn recover_classic_witness() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let w = word(&spec, "a T T b T' T' c d T' e T T");
        let witness = recover_blowup(&w).unwrap();
        assert_eq!(witness.m, 3);
        assert!(witness.root.cyclic_eq(&TShape::parse("T T T'").unwrap()));
        let back = assemble_blowup(&spec, &witness).unwrap();
        assert!(back.cyclic_eq(&w), "reassembled to {back}");
        // The canonical witness: one middle slot with
        // levels {1}, one top slot with levels {0, 2}, one bottom slot with
        // levels {1, 2}.
        let mut mids = Vec::new();
        let mut tops = Vec::new();
        let mut bots = Vec::new();
        for (kind, k) in &witness.slots {
            let levels: Vec<i64> = k.items.iter().map(|&(_, o)| o).collect();
            match kind {
                SlotKind::Middle => mids.push(levels),
                SlotKind::Top => tops.push(levels),
                SlotKind::Bottom => bots.push(levels),
            }
        }
        assert_eq!(mids, vec![vec![1]]);
        assert_eq!(tops, vec![vec![0, 2]]);
        assert_eq!(bots, vec![vec![1, 2]]);
    }

    #[test]
    fn recover_rejects_non_amenable() {
        let spec = free(&["a"]);
        let w = word(&spec, "T a T a");
        assert!(matches!(recover_blowup(&w), Err(WordError::NotAmenable)));
        let w1 = word(&spec, "T a");
        assert!(matches!(recover_blowup(&w1), Err(WordError::PowerShape)));
    }

    #[test]
    fn witness_display_roundtrip() {
        let spec = free(&["a", "b", "c", "d", "e"]);
        let b = classic_witness(&spec);
        let text = format!("{}", b.display(&spec));
        assert_eq!(
            text,
            "root=[T T T'] m=3 slots=[mid: a@1 | top: b@0 c@2 | bot: d@1 e@2]"
        );
        let reparsed = BlownUpWord::parse(&spec, &text).unwrap();
        assert_eq!(b, reparsed);
    }

    #[test]
    fn inverse_word_reads_backwards() {
        let spec = free(&["a", "b", "c"]);
        let w = word(&spec, "T a T b T' c");
        let inv = w.inverse();
        // w^-1 = c^-1 t b^-1 t^-1 a^-1 t^-1, cyclically
        let expected = word(&spec, "T b' T' a' T' c'");
        assert!(inv.cyclic_eq(&expected), "got {inv}");
        let double = inv.inverse();
        assert!(double.cyclic_eq(&w));
    }

    #[test]
    fn recover_splits_finite_order_syllables() {
        // Over a torsion factor the merged coefficient b*b = b^2 must split
        // back into b | b during recovery (modular exponent split).
        let spec = parse_group_spec("group { a: inf; b: 3; }").unwrap();
        let g = |t: &str| spec.parse_element(t).unwrap();
        let witness = BlownUpWord {
            root: TShape::parse("T T T'").unwrap(),
            m: 3,
            slots: vec![
                (SlotKind::Middle, KCanonical { items: vec![(g("a"), 1)] }),
                (SlotKind::Top, KCanonical { items: vec![(g("b"), 0), (g("b"), 2)] }),
                (SlotKind::Bottom, KCanonical { items: vec![(g("b"), 1), (g("a"), 2)] }),
            ],
        };
        let w = assemble_blowup(&spec, &witness).unwrap();
        // The reduction merges the top slot's level-2 letter with the bottom
        // slot's level-1 letter into a single b^2 coefficient.
        assert!(w
            .letters()
            .iter()
            .any(|(_, c)| c.syllables == vec![(spec.lookup("b").unwrap(), 2)]));
        let recovered = recover_blowup(&w).unwrap();
        let back = assemble_blowup(&spec, &recovered).unwrap();
        assert!(back.cyclic_eq(&w), "reassembled to {back}");
    }

    #[test]
    fn recover_splits_infinite_order_syllables() {
        let spec = free(&["a", "b"]);
        let g = |t: &str| spec.parse_element(t).unwrap();
        let witness = BlownUpWord {
            root: TShape::parse("T T T'").unwrap(),
            m: 2,
            slots: vec![
                (SlotKind::Middle, KCanonical::identity()),
                (SlotKind::Top, KCanonical { items: vec![(g("a^2"), 0), (g("a^3"), 1)] }),
                (SlotKind::Bottom, KCanonical { items: vec![(g("b"), 1)] }),
            ],
        };
        let w = assemble_blowup(&spec, &witness).unwrap();
        let recovered = recover_blowup(&w).unwrap();
        let back = assemble_blowup(&spec, &recovered).unwrap();
        assert!(back.cyclic_eq(&w), "reassembled to {back}");
    }

    #[test]
    fn defined_generators_in_words() {
        let spec = parse_group_spec("group { a: inf; b: 2; def c = a^-1 b a; }").unwrap();
        let w = RelWord::parse(spec.clone(), "T a T b T' c").unwrap();
        assert_eq!(w.num_letters(), 3);
        // c expands: the stored coefficient is a^-1 b a
        assert_eq!(
            format!("{}", spec.display_element(w.coefficient(2))),
            "a' b a"
        );
    }
}
