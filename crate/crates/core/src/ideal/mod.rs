//! Ideals, subtractive ideals, congruences and the retraction theorems on finite semirings.

mod congruence;
mod poset;
mod retraction;

pub use congruence::{congruence_generated, enumerate_congruences, enumerate_congruences_bounded, Congruence};
pub use poset::{compact_elements, is_continuous, is_lo_semigroup, LoSemigroupCheck, PosetSpace, Topology};
pub use retraction::{
    kideal_semiring, kideals_are_down_closed, map_c, map_i, map_j, map_r, quotient_kideal_bijection_check,
    quotient_semiring, verify_retraction_congruences, verify_retraction_ideals, Quotient,
};

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::semiring::FiniteSemiring;

/// Largest carrier for which ideals are enumerated by closing every subset.
pub const DEFAULT_IDEAL_BOUND: usize = 12;
/// Largest carrier for which set partitions are enumerated.
pub const DEFAULT_CONGRUENCE_BOUND: usize = 8;

/// A subset of a finite carrier of at most 64 elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn from_elems(elems: impl IntoIterator<Item = usize>) -> Self {
        Subset(elems.into_iter().fold(0, |acc, e| acc | (1u64 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) -> bool {
        let fresh = !self.contains(e);
        self.0 |= 1u64 << e;
        fresh
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&e| self.contains(e))
    }

    pub fn labels(self, s: &FiniteSemiring) -> Vec<String> {
        self.iter().map(|e| s.label(e).to_string()).collect()
    }

    pub fn to_json(self, s: &FiniteSemiring) -> Value {
        Value::from(self.labels(s))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

fn check_carrier(s: &FiniteSemiring, bound: usize) -> Result<()> {
    if s.size() > bound.min(64) {
        return Err(Error::Resource(format!(
            "carrier of {} elements exceeds the enumeration bound {bound}",
            s.size()
        )));
    }
    Ok(())
}

/// Whether `set` contains 0 and is closed under addition and under multiplication by the carrier.
pub fn is_ideal(s: &FiniteSemiring, set: Subset) -> bool {
    if !set.contains(s.zero_index()) {
        return false;
    }
    for a in set.iter() {
        for b in set.iter() {
            if !set.contains(s.plus(a, b)) {
                return false;
            }
        }
        for c in s.elements() {
            if !set.contains(s.times(a, c)) {
                return false;
            }
        }
    }
    true
}

/// Whether `a + c = b` with `a, b ∈ set` forces `c ∈ set`.
pub fn is_subtractive(s: &FiniteSemiring, set: Subset) -> bool {
    set.iter()
        .all(|a| s.elements().all(|c| !set.contains(s.plus(a, c)) || set.contains(c)))
}

pub fn is_k_ideal(s: &FiniteSemiring, set: Subset) -> bool {
    is_ideal(s, set) && is_subtractive(s, set)
}

/// Downward closed under the canonical order `a ≤ b ⇔ a + b = b`.
pub fn is_down_closed(s: &FiniteSemiring, set: Subset) -> bool {
    set.iter()
        .all(|b| s.elements().all(|a| !s.leq(a, b) || set.contains(a)))
}

/// Proper ideal whose complement is multiplicatively closed.
pub fn is_prime(s: &FiniteSemiring, set: Subset) -> bool {
    if !is_ideal(s, set) || set.contains(s.one_index()) {
        return false;
    }
    let outside: Vec<usize> = s.elements().filter(|&a| !set.contains(a)).collect();
    outside
        .iter()
        .all(|&a| outside.iter().all(|&b| !set.contains(s.times(a, b))))
}

/// The smallest ideal containing `seed`.
pub fn ideal_closure(s: &FiniteSemiring, seed: Subset) -> Subset {
    let mut set = seed;
    set.insert(s.zero_index());
    let mut frontier: Vec<usize> = set.iter().collect();
    while let Some(a) = frontier.pop() {
        for c in s.elements() {
            let p = s.times(a, c);
            if set.insert(p) {
                frontier.push(p);
            }
        }
        for b in set.iter().collect::<Vec<_>>() {
            let q = s.plus(a, b);
            if set.insert(q) {
                frontier.push(q);
            }
        }
    }
    set
}

/// The smallest k-ideal containing `seed`, with the number of closure rounds.
///
/// Each round adds every `c` with `a + c ∈ I` for some `a ∈ I` and re-closes
/// as an ideal. On idempotent semirings one round already gives
/// `{c : a + c = a for some a ∈ ⟨seed⟩}`.
pub fn subtractive_closure(s: &FiniteSemiring, seed: Subset) -> (Subset, usize) {
    let mut set = ideal_closure(s, seed);
    let mut rounds = 0;
    loop {
        let mut next = set;
        for a in set.iter() {
            for c in s.elements() {
                if set.contains(s.plus(a, c)) {
                    next.insert(c);
                }
            }
        }
        let next = ideal_closure(s, next);
        rounds += 1;
        if next == set {
            return (set, rounds);
        }
        set = next;
    }
}

/// Every ideal, sorted, found by closing every subset of the carrier.
pub fn enumerate_ideals(s: &FiniteSemiring) -> Result<Vec<Subset>> {
    enumerate_ideals_bounded(s, DEFAULT_IDEAL_BOUND)
}

pub fn enumerate_ideals_bounded(s: &FiniteSemiring, bound: usize) -> Result<Vec<Subset>> {
    check_carrier(s, bound)?;
    let n = s.size();
    let mut out: Vec<Subset> = (0..1u64 << n)
        .map(|seed| ideal_closure(s, Subset(seed)))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn enumerate_k_ideals(s: &FiniteSemiring) -> Result<Vec<Subset>> {
    enumerate_k_ideals_bounded(s, DEFAULT_IDEAL_BOUND)
}

pub fn enumerate_k_ideals_bounded(s: &FiniteSemiring, bound: usize) -> Result<Vec<Subset>> {
    Ok(enumerate_ideals_bounded(s, bound)?
        .into_iter()
        .filter(|&i| is_subtractive(s, i))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::catalogue::{chain, corpus, integers_mod, zero_semiring};
    use crate::semiring::Boolean;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elems(e.iter().copied())
    }

    #[test]
    fn boolean_ideals() {
        let b = Boolean::as_finite();
        assert_eq!(enumerate_ideals(&b).unwrap(), vec![set(&[0]), set(&[0, 1])]);
        assert_eq!(enumerate_k_ideals(&b).unwrap(), vec![set(&[0]), set(&[0, 1])]);
    }

    #[test]
    fn chain_ideals() {
        let c = chain(3);
        let expected = vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 2])];
        assert_eq!(enumerate_ideals(&c).unwrap(), expected);
        assert_eq!(enumerate_k_ideals(&c).unwrap(), expected);
        assert_eq!(subtractive_closure(&c, set(&[1])).0, set(&[0, 1]));
    }

    #[test]
    fn zero_semiring_has_one_ideal() {
        assert_eq!(enumerate_ideals(&zero_semiring()).unwrap(), vec![set(&[0])]);
    }

    #[test]
    fn closure_of_a_k_ideal_is_itself() {
        for (_, s) in corpus() {
            for i in enumerate_k_ideals(&s).unwrap() {
                assert_eq!(subtractive_closure(&s, i).0, i);
            }
        }
    }

    #[test]
    fn closure_terminates_within_carrier_size() {
        for (name, s) in corpus() {
            for seed in 0..1u64 << s.size() {
                let (_, rounds) = subtractive_closure(&s, Subset(seed));
                assert!(rounds <= s.size(), "{name}: {rounds} rounds");
            }
        }
    }

    #[test]
    fn idempotent_closure_is_down_closure() {
        for (_, s) in corpus().into_iter().filter(|(_, s)| s.is_idempotent()) {
            for seed in 0..1u64 << s.size() {
                let generated = ideal_closure(&s, Subset(seed));
                let below = Subset::from_elems(
                    s.elements()
                        .filter(|&c| generated.iter().any(|a| s.plus(a, c) == a)),
                );
                assert_eq!(subtractive_closure(&s, Subset(seed)).0, below);
            }
        }
    }

    #[test]
    fn ring_ideals_of_z6() {
        let s = integers_mod(6);
        let ideals = enumerate_ideals(&s).unwrap();
        assert_eq!(ideals.len(), 4);
        assert!(ideals.iter().all(|&i| is_subtractive(&s, i)));
        let primes: Vec<_> = ideals.into_iter().filter(|&i| is_prime(&s, i)).collect();
        assert_eq!(primes, vec![set(&[0, 3]), set(&[0, 2, 4])]);
    }

    #[test]
    fn resource_bound() {
        assert!(matches!(
            enumerate_ideals_bounded(&chain(5), 4),
            Err(Error::Resource(_))
        ));
    }
}
