//! The calculus of cyclic unreduced t-shapes: Magnus derivative, complexity,
//! root, clump structure, amenability.
//!
//! A t-shape is the cyclic word of t-exponents of a word in `G * <t>`.
//! Equality is up to cyclic rotation only; mirror shapes are distinct.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration length {0} exceeds the guard (max 20)")]
    EnumerationGuard(usize),
}

/// One t-letter: `T` is exponent +1, `T'` is exponent -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn exp(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_exp(e: i64) -> Sign {
        if e >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A cyclic unreduced word over `{t, t^-1}`, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TShape {
    letters: Vec<Sign>,
}

impl TShape {
    pub fn new(letters: Vec<Sign>) -> Self {
        TShape { letters }
    }

    pub fn empty() -> Self {
        TShape { letters: Vec::new() }
    }

    /// The power shape `t^q` (empty when `q = 0`).
    pub fn power(q: i64) -> Self {
        let sign = Sign::from_exp(q);
        TShape { letters: vec![sign; q.unsigned_abs() as usize] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Sign] {
        &self.letters
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|s| s.exp()).sum()
    }

    /// `t^q` for some `q` (including the empty shape).
    pub fn is_power(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] == w[1])
    }

    pub fn rotated(&self, k: usize) -> TShape {
        if self.letters.is_empty() {
            return self.clone();
        }
        let n = self.letters.len();
        let mut letters = Vec::with_capacity(n);
        for i in 0..n {
            letters.push(self.letters[(i + k) % n]);
        }
        TShape { letters }
    }

    /// Equality up to cyclic rotation (reflection is not quotiented).
    pub fn cyclic_eq(&self, other: &TShape) -> bool {
        if self.letters.len() != other.letters.len() {
            return false;
        }
        if self.letters.is_empty() {
            return true;
        }
        (0..self.letters.len()).any(|k| self.rotated(k).letters == other.letters)
    }

    /// The lexicographically least rotation (`T < T'`), used for printing
    /// and dedup.
    pub fn canonical_rotation(&self) -> TShape {
        if self.letters.is_empty() {
            return self.clone();
        }
        (0..self.letters.len())
            .map(|k| self.rotated(k))
            .min_by(|a, b| a.letters.cmp(&b.letters))
            .unwrap()
    }

    pub fn inverse(&self) -> TShape {
        TShape { letters: self.letters.iter().rev().map(|s| s.opposite()).collect() }
    }

    /// The Magnus derivative: delete every cyclic occurrence of the pattern
    /// `T T'` simultaneously and close up. Power shapes are fixed points.
    pub fn derivative(&self) -> TShape {
        let n = self.letters.len();
        if n < 2 {
            return self.clone();
        }
        let mut delete = vec![false; n];
        for i in 0..n {
            let j = (i + 1) % n;
            if self.letters[i] == Sign::Plus && self.letters[j] == Sign::Minus {
                delete[i] = true;
                delete[j] = true;
            }
        }
        let letters = (0..n).filter(|&i| !delete[i]).map(|i| self.letters[i]).collect();
        TShape { letters }
    }

    /// Maximal cyclic runs `t^q` / `t^-q` with `q > 1`.
    pub fn clumps(&self) -> Vec<(Sign, usize)> {
        let n = self.letters.len();
        if n == 0 {
            return Vec::new();
        }
        if self.is_power() {
            return if n > 1 { vec![(self.letters[0], n)] } else { Vec::new() };
        }
        // Start at a sign change so runs never wrap.
        let start = (0..n)
            .find(|&i| self.letters[(i + n - 1) % n] != self.letters[i])
            .unwrap();
        let mut runs: Vec<(Sign, usize)> = Vec::new();
        for k in 0..n {
            let s = self.letters[(start + k) % n];
            match runs.last_mut() {
                Some((sign, len)) if *sign == s => *len += 1,
                _ => runs.push((s, 1)),
            }
        }
        runs.into_iter().filter(|&(_, len)| len > 1).collect()
    }

    /// Exactly one clump, and that clump is not the whole shape; equivalently
    /// the shape is `t^p (t t^-1)^q` for `p, q > 0` or its inverse.
    pub fn is_one_clump(&self) -> bool {
        if self.is_power() {
            return false;
        }
        self.clumps().len() == 1
    }

    pub fn analyze(&self) -> ShapeAnalysis {
        let mut complexity = 0usize;
        let mut prev: Option<TShape> = None;
        let mut cur = self.clone();
        while !cur.is_power() {
            prev = Some(cur.clone());
            cur = cur.derivative();
            complexity += 1;
        }
        let root = prev;
        let is_power = self.is_power();
        let tt_bar = TShape::new(vec![Sign::Plus, Sign::Minus]);
        let root_amenable = match &root {
            Some(r) => r.cyclic_eq(&tt_bar) || r.is_one_clump(),
            None => false,
        };
        // Shapes of a single letter are the exponent-sum +-1 power shapes;
        // they sit inside every theorem here, so they count as amenable even
        // though they have no root.
        let amenable = root_amenable || self.len() == 1;
        ShapeAnalysis {
            complexity,
            root,
            amenable,
            one_clump: self.is_one_clump(),
            is_power,
            exponent_sum: self.exponent_sum(),
        }
    }

    pub fn complexity(&self) -> usize {
        self.analyze().complexity
    }

    pub fn is_amenable(&self) -> bool {
        self.analyze().amenable
    }

    /// Parse `T T T'` or the compact form `++-`.
    pub fn parse(text: &str) -> Result<TShape, ShapeError> {
        let text = text.trim();
        let mut letters = Vec::new();
        if text.is_empty() {
            return Ok(TShape::empty());
        }
        if text.chars().all(|c| c == '+' || c == '-') {
            for c in text.chars() {
                letters.push(if c == '+' { Sign::Plus } else { Sign::Minus });
            }
            return Ok(TShape { letters });
        }
        for token in text.split_whitespace() {
            match token {
                "T" | "t" => letters.push(Sign::Plus),
                "T'" | "t'" => letters.push(Sign::Minus),
                other => return Err(ShapeError::Parse(format!("bad t-letter `{other}`"))),
            }
        }
        Ok(TShape { letters })
    }
}

impl fmt::Display for TShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match s {
                Sign::Plus => write!(f, "T")?,
                Sign::Minus => write!(f, "T'")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeAnalysis {
    /// Least `m` with the m-th derivative a power shape.
    pub complexity: usize,
    /// The (m-1)-st derivative when `m >= 1`; `None` for power shapes.
    pub root: Option<TShape>,
    pub amenable: bool,
    pub one_clump: bool,
    pub is_power: bool,
    pub exponent_sum: i64,
}

/// One representative per cyclic-equality class of nonempty shapes with
/// length at most `max_len`.
pub fn enumerate_shapes(max_len: usize) -> Result<Vec<TShape>, ShapeError> {
    if max_len > 20 {
        return Err(ShapeError::EnumerationGuard(max_len));
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0u32..(1u32 << len) {
            let letters: Vec<Sign> = (0..len)
                .map(|i| if bits >> i & 1 == 0 { Sign::Plus } else { Sign::Minus })
                .collect();
            let shape = TShape::new(letters);
            // Keep only the canonical rotation representative.
            if shape.canonical_rotation().letters == shape.letters
                && !out.iter().any(|s: &TShape| s.len() == len && s.cyclic_eq(&shape))
            {
                out.push(shape);
            }
        }
    }
    Ok(out)
}
