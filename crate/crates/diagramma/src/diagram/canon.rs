//! Canonical forms for diagram isomorphism: discs may be renumbered within
//! equal (kind, label) classes and the boundary rotated, nothing else.
//! Reflection is deliberately not quotiented.

use std::collections::BTreeMap;

use super::{Diagram, Disc, DiscKind, LegLetter, Placement};
use crate::shape::Sign;

/// Opaque comparable key; equal keys mean isomorphic diagrams.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<i64>);

fn disc_class(disc: &Disc) -> Vec<i64> {
    let mut out = Vec::new();
    match &disc.kind {
        DiscKind::W => out.push(0),
        DiscKind::WBar => out.push(1),
        DiscKind::TwoLeg(h) => {
            out.push(2);
            for (g, o) in &h.items {
                out.push(*o);
                for &(gen, exp) in &g.syllables {
                    out.push(gen as i64);
                    out.push(exp);
                }
                out.push(i64::MIN + 1);
            }
        }
        DiscKind::TwoLegBar(h) => {
            out.push(3);
            for (g, o) in &h.items {
                out.push(*o);
                for &(gen, exp) in &g.syllables {
                    out.push(gen as i64);
                    out.push(exp);
                }
                out.push(i64::MIN + 1);
            }
        }
    }
    for leg in &disc.legs {
        out.push(match leg.letter {
            LegLetter::T => 10,
            LegLetter::S => 11,
        });
        out.push(match leg.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        });
    }
    for seg in &disc.segs {
        for &(gen, exp) in &seg.syllables {
            out.push(gen as i64);
            out.push(exp);
        }
        out.push(i64::MIN + 2);
    }
    out
}

impl Diagram {
    pub fn canonical_form(&self) -> CanonicalForm {
        let classes: Vec<Vec<i64>> = self.discs.iter().map(disc_class).collect();
        // Group disc indices by class.
        let mut by_class: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            by_class.entry(c.clone()).or_default().push(i);
        }
        let class_list: Vec<(Vec<i64>, Vec<usize>)> = by_class.into_iter().collect();
        let components = self.components();

        let mut best: Option<Vec<i64>> = None;
        // Enumerate permutations within classes; new ids follow class order.
        let mut perm_sets: Vec<Vec<Vec<usize>>> = Vec::new();
        for (_, members) in &class_list {
            perm_sets.push(permutations(members));
        }
        let mut choice = vec![0usize; perm_sets.len()];
        loop {
            // Build old -> new mapping.
            let mut map = vec![usize::MAX; self.discs.len()];
            let mut next_id = 0;
            for (ci, (_, _members)) in class_list.iter().enumerate() {
                for &old in &perm_sets[ci][choice[ci]] {
                    map[old] = next_id;
                    next_id += 1;
                }
            }
            let encoding = self.encode_with(&map, &class_list, &components);
            if best.as_ref().is_none_or(|b| encoding < *b) {
                best = Some(encoding);
            }
            // Advance the mixed-radix choice counter.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return CanonicalForm(best.unwrap());
                }
                choice[i] += 1;
                if choice[i] < perm_sets[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn encode_with(
        &self,
        map: &[usize],
        class_list: &[(Vec<i64>, Vec<usize>)],
        components: &[usize],
    ) -> Vec<i64> {
        let mut out = Vec::new();
        for (class, members) in class_list {
            out.push(members.len() as i64);
            out.extend_from_slice(class);
            out.push(i64::MIN + 3);
        }
        let mut arcs: Vec<[(usize, usize); 2]> = self
            .arcs
            .iter()
            .map(|a| {
                let e0 = (map[a.ends[0].0], a.ends[0].1);
                let e1 = (map[a.ends[1].0], a.ends[1].1);
                if e0 <= e1 {
                    [e0, e1]
                } else {
                    [e1, e0]
                }
            })
            .collect();
        arcs.sort();
        for a in &arcs {
            out.extend_from_slice(&[
                a[0].0 as i64,
                a[0].1 as i64,
                a[1].0 as i64,
                a[1].1 as i64,
            ]);
        }
        out.push(i64::MIN + 4);
        if let Some(boundary) = &self.boundary {
            let mapped: Vec<(usize, usize)> =
                boundary.iter().map(|&(d, s)| (map[d], s)).collect();
            let min_rot = (0..mapped.len().max(1))
                .map(|k| {
                    let mut rot = Vec::with_capacity(mapped.len());
                    for i in 0..mapped.len() {
                        rot.push(mapped[(i + k) % mapped.len()]);
                    }
                    rot
                })
                .min()
                .unwrap_or_default();
            out.push(1);
            for (d, s) in min_rot {
                out.push(d as i64);
                out.push(s as i64);
            }
        } else {
            out.push(0);
        }
        out.push(i64::MIN + 5);
        let placement_code = |p: &Placement| -> (i64, i64, i64) {
            match p {
                Placement::Plane => (0, 0, 0),
                Placement::Face(d, s) => (1, map[*d] as i64, *s as i64),
            }
        };
        let mut circles: Vec<(i64, i64, i64)> =
            self.circles.iter().map(placement_code).collect();
        circles.sort();
        for c in circles {
            out.extend_from_slice(&[c.0, c.1, c.2]);
        }
        out.push(i64::MIN + 6);
        let mut nest: Vec<(i64, (i64, i64, i64))> = self
            .nesting
            .iter()
            .map(|(&key, place)| {
                // The canonical component identifier is the least new id.
                let comp_min = (0..self.discs.len())
                    .filter(|&d| components[d] == components[key])
                    .map(|d| map[d])
                    .min()
                    .unwrap() as i64;
                (comp_min, placement_code(place))
            })
            .collect();
        nest.sort();
        for (k, p) in nest {
            out.extend_from_slice(&[k, p.0, p.1, p.2]);
        }
        out
    }

    pub fn isomorphic(&self, other: &Diagram) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest: Vec<usize> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}
