//! Deterministic generators for test corpora: random amenable witnesses,
//! always-valid diagrams over them, and all-bigon necklaces. Everything is
//! seeded; the property suites pass fixed seeds so runs are reproducible.

use std::sync::Arc;

use crate::diagram::Diagram;
use crate::group::GroupSpec;
use crate::shape::{Sign, TShape};
use crate::word::{BlownUpWord, KCanonical, RelWord, SlotKind};

/// SplitMix64; tiny, seedable, and stable across platforms.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// An amenable root shape: `t t^-1`, or `t^p (t t^-1)^q` (possibly
/// inverted) with small p, q.
pub fn random_root(rng: &mut Rng) -> TShape {
    if rng.below(3) == 0 {
        return TShape::new(vec![Sign::Plus, Sign::Minus]);
    }
    let p = 1 + rng.below(2);
    let q = 1 + rng.below(2);
    let mut letters = vec![Sign::Plus; p];
    for _ in 0..q {
        letters.push(Sign::Plus);
        letters.push(Sign::Minus);
    }
    let shape = TShape::new(letters);
    if rng.flip() {
        shape.inverse()
    } else {
        shape
    }
}

/// A random valid witness of the given complexity over `spec`; slot letters
/// are single generators, the paper's own style.
pub fn random_witness(rng: &mut Rng, spec: &Arc<GroupSpec>, m: usize) -> BlownUpWord {
    assert!(m >= 1);
    let root = random_root(rng);
    let gen_count = spec.factors.len();
    let letter = |rng: &mut Rng| -> crate::group::GroupElement {
        let g = rng.below(gen_count);
        let e = if rng.flip() { 1 } else { -1 };
        spec.normalize(&crate::group::GroupElement { syllables: vec![(g, e)] })
    };
    let m_i = m as i64;
    let mut slots = Vec::new();
    for i in 0..root.len() {
        let kind = crate::word::gap_kind(&root, i);
        let levels: Vec<i64> = match kind {
            SlotKind::Top => {
                // min = 0, max <= m-1
                let mut ls = vec![0];
                if m_i > 1 && rng.flip() {
                    ls.push(1 + rng.below((m_i - 1) as usize) as i64);
                }
                ls
            }
            SlotKind::Bottom => {
                // max = m-1, min >= 0
                let mut ls = vec![m_i - 1];
                if m_i > 1 && rng.flip() {
                    ls.insert(0, rng.below((m_i - 1) as usize) as i64);
                }
                ls
            }
            SlotKind::Middle => {
                let count = rng.below(3); // may be empty
                let mut ls = Vec::new();
                let mut prev: Option<i64> = None;
                for _ in 0..count {
                    let l = rng.below(m) as i64;
                    if prev == Some(l) {
                        continue;
                    }
                    ls.push(l);
                    prev = Some(l);
                }
                ls
            }
        };
        let items = levels.into_iter().map(|l| (letter(rng), l)).collect();
        slots.push((kind, KCanonical { items }));
    }
    let witness = BlownUpWord { root, m, slots };
    debug_assert!(witness.validate(spec).is_ok());
    witness
}

/// The aligned mirror pair over `w`: always valid, always reducible.
pub fn mirror_pair(w: &RelWord) -> Diagram {
    let n = w.num_letters();
    let mut d = Diagram::new(w.spec.clone(), w.clone());
    let dw = d.add_w_disc();
    let db = d.add_wbar_disc();
    for occ in 0..n {
        d.add_arc((dw, occ), (db, n - 1 - occ));
    }
    d
}

/// The one-disc diagram with every leg on the boundary in word order; its
/// boundary word is `w` itself.
pub fn single_disc_boundary(w: &RelWord) -> Diagram {
    let mut d = Diagram::new(w.spec.clone(), w.clone());
    let dw = d.add_w_disc();
    d.boundary = Some((0..w.num_letters()).map(|s| (dw, s)).collect());
    d
}

/// A random diagram over `w` that is valid by construction: a mirror pair,
/// a boundary disc, or two mirror pairs side by side.
pub fn random_valid_diagram(rng: &mut Rng, w: &RelWord) -> Diagram {
    match rng.below(3) {
        0 => mirror_pair(w),
        1 => single_disc_boundary(w),
        _ => {
            let mut d = mirror_pair(w);
            let n = w.num_letters();
            let dw = d.add_w_disc();
            let db = d.add_wbar_disc();
            for occ in 0..n {
                d.add_arc((dw, occ), (db, n - 1 - occ));
            }
            d
        }
    }
}

/// A cycle of `k` alternating main discs over a `t t^-1`-shaped word; its
/// dual is the all-bigon melon.
pub fn necklace(spec: &Arc<GroupSpec>, k: usize) -> Diagram {
    assert!(k >= 2 && k.is_multiple_of(2));
    let w = RelWord::parse(spec.clone(), "T a T' b").unwrap();
    let mut d = Diagram::new(spec.clone(), w);
    for i in 0..k {
        if i % 2 == 0 {
            d.add_w_disc();
        } else {
            d.add_wbar_disc();
        }
    }
    for i in 0..k {
        d.add_arc((i, 1), ((i + 1) % k, 0));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{assemble_blowup, recover_blowup};

    #[test]
    fn generators_are_deterministic() {
        let spec = Arc::new(GroupSpec::free(&["a", "b", "c", "d", "e"]));
        let mut r1 = Rng::new(7);
        let mut r2 = Rng::new(7);
        let w1 = random_witness(&mut r1, &spec, 3);
        let w2 = random_witness(&mut r2, &spec, 3);
        assert_eq!(w1, w2);
    }

    #[test]
    fn random_witnesses_assemble_and_recover() {
        let spec = Arc::new(GroupSpec::free(&["a", "b", "c", "d", "e"]));
        let mut rng = Rng::new(42);
        for _ in 0..25 {
            let m = 1 + rng.below(3);
            let witness = random_witness(&mut rng, &spec, m);
            let w = assemble_blowup(&spec, &witness).unwrap();
            let analysis = w.shape().analyze();
            assert_eq!(analysis.complexity, m, "witness {}", witness.display(&spec));
            assert!(analysis.root.unwrap().cyclic_eq(&witness.root));
            let recovered = recover_blowup(&w).unwrap();
            let back = assemble_blowup(&spec, &recovered).unwrap();
            assert!(back.cyclic_eq(&w));
        }
    }

    #[test]
    fn generated_diagrams_validate() {
        let spec = Arc::new(GroupSpec::free(&["a", "b", "c", "d", "e"]));
        let mut rng = Rng::new(11);
        for _ in 0..10 {
            let m = 1 + rng.below(3);
            let witness = random_witness(&mut rng, &spec, m);
            let w = assemble_blowup(&spec, &witness).unwrap();
            let d = random_valid_diagram(&mut rng, &w);
            assert!(d.validate().is_valid(), "word {w}");
        }
    }
}
