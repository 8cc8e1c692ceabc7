use serde_json::Value;

use super::{check_carrier, Subset, DEFAULT_CONGRUENCE_BOUND};
use crate::error::Result;
use crate::semiring::FiniteSemiring;

/// An equivalence relation on a finite carrier, stored as block labels.
///
/// `class[a]` is the block of `a`; blocks are numbered by first occurrence,
/// so equal partitions have equal label vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<usize> = Vec::new();
        let class = labels
            .iter()
            .map(|l| match seen.iter().position(|x| x == l) {
                Some(i) => i,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            })
            .collect();
        Congruence { class }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            class: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { class: vec![0; n] }
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class[a]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn block_count(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Subset> {
        let mut out = vec![Subset::empty(); self.block_count()];
        for (a, &c) in self.class.iter().enumerate() {
            out[c].insert(a);
        }
        out
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    /// Inclusion of relations: every pair related here is related in `other`.
    pub fn is_subset(&self, other: &Congruence) -> bool {
        let n = self.class.len();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    /// Stability under both operations.
    pub fn is_congruence(&self, s: &FiniteSemiring) -> bool {
        stable_prefix(s, &self.class, s.size())
    }

    pub fn to_json(&self, s: &FiniteSemiring) -> Value {
        Value::from(
            self.blocks()
                .into_iter()
                .map(|b| b.to_json(s))
                .collect::<Vec<_>>(),
        )
    }
}

/// Stability restricted to the first `k` elements: only pairs whose results also lie below `k` are tested.
fn stable_prefix(s: &FiniteSemiring, class: &[usize], k: usize) -> bool {
    for a in 0..k {
        for b in 0..a {
            if class[a] != class[b] {
                continue;
            }
            for c in s.elements() {
                for (x, y) in [(s.plus(a, c), s.plus(b, c)), (s.times(a, c), s.times(b, c))] {
                    if x < k && y < k && class[x] != class[y] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every congruence, sorted.
pub fn enumerate_congruences(s: &FiniteSemiring) -> Result<Vec<Congruence>> {
    enumerate_congruences_bounded(s, DEFAULT_CONGRUENCE_BOUND)
}

/// Walks set partitions as restricted growth strings, pruning prefixes that already fail stability.
pub fn enumerate_congruences_bounded(s: &FiniteSemiring, bound: usize) -> Result<Vec<Congruence>> {
    check_carrier(s, bound)?;
    let n = s.size();
    let mut out = Vec::new();
    let mut class = vec![0usize; n];
    fn walk(s: &FiniteSemiring, class: &mut Vec<usize>, k: usize, max: usize, out: &mut Vec<Congruence>) {
        let n = class.len();
        if !stable_prefix(s, class, k) {
            return;
        }
        if k == n {
            out.push(Congruence { class: class.clone() });
            return;
        }
        for c in 0..=max + 1 {
            class[k] = c;
            walk(s, class, k + 1, max.max(c), out);
        }
    }
    if n > 0 {
        class[0] = 0;
        walk(s, &mut class, 1, 0, &mut out);
    }
    out.sort();
    Ok(out)
}

/// The least congruence relating every given pair.
pub fn congruence_generated(s: &FiniteSemiring, pairs: &[(usize, usize)]) -> Congruence {
    let n = s.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| -> bool {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra == rb {
            return false;
        }
        p[ra.max(rb)] = ra.min(rb);
        true
    };
    for &(a, b) in pairs {
        union(&mut parent, a, b);
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..a {
                if find(&mut parent, a) != find(&mut parent, b) {
                    continue;
                }
                for c in 0..n {
                    changed |= union(&mut parent, s.plus(a, c), s.plus(b, c));
                    changed |= union(&mut parent, s.times(a, c), s.times(b, c));
                }
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|a| find(&mut parent, a)).collect();
    Congruence::from_labels(&roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::catalogue::{chain, corpus};
    use crate::semiring::Boolean;

    /// Set partitions of an n-set, by brute force over all label functions.
    fn all_partitions(n: usize) -> Vec<Congruence> {
        let mut out: Vec<Congruence> = (0..n.pow(n as u32))
            .map(|mut code| {
                let labels: Vec<usize> = (0..n)
                    .map(|_| {
                        let l = code % n;
                        code /= n;
                        l
                    })
                    .collect();
                Congruence::from_labels(&labels)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn boolean_has_two_congruences() {
        let b = Boolean::as_finite();
        assert_eq!(
            enumerate_congruences(&b).unwrap(),
            vec![Congruence::total(2), Congruence::identity(2)]
        );
    }

    #[test]
    fn chain_top_block_is_a_congruence() {
        let c = chain(3);
        let cong = Congruence::from_labels(&[0, 1, 1]);
        assert!(cong.is_congruence(&c));
        assert!(enumerate_congruences(&c).unwrap().contains(&cong));
    }

    #[test]
    fn pruned_enumeration_matches_brute_force() {
        for (name, s) in corpus() {
            let fast = enumerate_congruences(&s).unwrap();
            let slow: Vec<_> = all_partitions(s.size())
                .into_iter()
                .filter(|p| p.is_congruence(&s))
                .collect();
            assert_eq!(fast, slow, "{name}");
        }
    }

    #[test]
    fn generated_congruences() {
        let b = Boolean::as_finite();
        assert_eq!(congruence_generated(&b, &[]), Congruence::identity(2));
        assert_eq!(congruence_generated(&b, &[(1, 0)]), Congruence::total(2));
        let c = chain(3);
        assert_eq!(
            congruence_generated(&c, &[(1, 0)]),
            Congruence::from_labels(&[0, 0, 1])
        );
    }

    #[test]
    fn generated_is_least() {
        for (name, s) in corpus() {
            let all = enumerate_congruences(&s).unwrap();
            for a in s.elements() {
                for b in s.elements() {
                    let g = congruence_generated(&s, &[(a, b)]);
                    assert!(g.is_congruence(&s) && g.related(a, b), "{name}");
                    for y in all.iter().filter(|y| y.related(a, b)) {
                        assert!(g.is_subset(y), "{name}");
                    }
                }
            }
        }
    }
}
