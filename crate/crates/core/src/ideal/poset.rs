use crate::error::{Error, Result};
use crate::semiring::FiniteSemiring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Closed subbasis: principal up-sets `U(x) = {y : x ≤ y}`.
    CoarseLower,
    /// Closed subbasis: principal down-sets.
    CoarseUpper,
}

/// A finite poset carrying one of its two poset topologies.
#[derive(Debug, Clone)]
pub struct PosetSpace {
    leq: Vec<Vec<bool>>,
    topology: Topology,
    /// `cover[y]`: union of the subbasic closed sets avoiding `y`.
    cover: Vec<Vec<bool>>,
}

impl PosetSpace {
    pub fn new(size: usize, leq: impl Fn(usize, usize) -> bool, topology: Topology) -> Result<Self> {
        let leq: Vec<Vec<bool>> = (0..size).map(|a| (0..size).map(|b| leq(a, b)).collect()).collect();
        for a in 0..size {
            if !leq[a][a] {
                return Err(Error::Structural(format!("order is not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Structural(format!("order is not antisymmetric at ({a},{b})")));
                }
                for c in 0..size {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Structural(format!(
                            "order is not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut space = PosetSpace {
            leq,
            topology,
            cover: Vec::new(),
        };
        let basis = space.subbasis();
        space.cover = (0..size)
            .map(|y| {
                let mut u = vec![false; size];
                for set in basis.iter().filter(|set| !set[y]) {
                    for (slot, &m) in u.iter_mut().zip(set) {
                        *slot |= m;
                    }
                }
                u
            })
            .collect();
        Ok(space)
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// The subbasic closed set generated by `x`.
    pub fn subbasic(&self, x: usize) -> Vec<bool> {
        (0..self.size())
            .map(|y| match self.topology {
                Topology::CoarseLower => self.leq[x][y],
                Topology::CoarseUpper => self.leq[y][x],
            })
            .collect()
    }

    pub fn subbasis(&self) -> Vec<Vec<bool>> {
        (0..self.size()).map(|x| self.subbasic(x)).collect()
    }

    /// A set is closed iff it is an intersection of finite unions of subbasic sets;
    /// the largest such union avoiding a point `y` is `cover[y]`.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        (0..self.size()).filter(|&y| !set[y]).all(|y| {
            set.iter()
                .zip(&self.cover[y])
                .all(|(&inside, &covered)| !inside || covered)
        })
    }
}

/// Checks continuity on subbasic closed sets; returns a subbasic generator whose preimage is not closed.
pub fn is_continuous(map: &[usize], from: &PosetSpace, to: &PosetSpace) -> std::result::Result<(), usize> {
    for x in 0..to.size() {
        let target = to.subbasic(x);
        let preimage: Vec<bool> = map.iter().map(|&p| target[p]).collect();
        if !from.is_closed(&preimage) {
            return Err(x);
        }
    }
    Ok(())
}

/// Compact elements of a finite join-semilattice given by an idempotent addition.
///
/// Every join over a subset is already a finite join, so every element qualifies.
pub fn compact_elements(s: &FiniteSemiring) -> Vec<usize> {
    s.elements().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoSemigroupCheck {
    pub lo_semiring: bool,
    pub complete: bool,
    pub compact_submonoid: bool,
    pub algebraic: bool,
    /// A pair without a greatest lower bound, if any.
    pub missing_meet: Option<(usize, usize)>,
}

impl LoSemigroupCheck {
    pub fn holds(&self) -> bool {
        self.lo_semiring && self.complete && self.compact_submonoid && self.algebraic
    }
}

/// The LO-semigroup conditions on a finite semiring.
pub fn is_lo_semigroup(s: &FiniteSemiring) -> LoSemigroupCheck {
    let lo = s.is_lo_semiring();
    let lo_semiring = s.is_idempotent() && lo.holds();
    // finite lattices with a bottom are complete; 0 is the bottom of any idempotent semiring
    let complete = lo_semiring && s.elements().all(|a| s.leq(s.zero_index(), a));
    let compact = compact_elements(s);
    let compact_submonoid = compact.contains(&s.one_index())
        && compact
            .iter()
            .all(|&a| compact.iter().all(|&b| compact.contains(&s.times(a, b))));
    let algebraic = s.elements().all(|a| {
        let below: Vec<usize> = compact.iter().copied().filter(|&c| s.leq(c, a)).collect();
        below.iter().fold(s.zero_index(), |acc, &c| s.plus(acc, c)) == a
    });
    LoSemigroupCheck {
        lo_semiring,
        complete,
        compact_submonoid,
        algebraic,
        missing_meet: lo.missing_meet,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::catalogue::chain;

    fn divisibility(n: usize) -> PosetSpace {
        PosetSpace::new(n, |a, b| (b + 1) % (a + 1) == 0, Topology::CoarseLower).unwrap()
    }

    fn all_sets(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn lower_closed_sets_are_up_sets() {
        let p = divisibility(8);
        for set in all_sets(8) {
            let up = (0..8).all(|a| (0..8).all(|b| !set[a] || !p.leq(a, b) || set[b]));
            assert_eq!(p.is_closed(&set), up);
        }
    }

    #[test]
    fn upper_closed_sets_are_down_sets() {
        let p = PosetSpace::new(6, |a, b| (b + 1) % (a + 1) == 0, Topology::CoarseUpper).unwrap();
        for set in all_sets(6) {
            let down = (0..6).all(|b| (0..6).all(|a| !set[b] || !p.leq(a, b) || set[a]));
            assert_eq!(p.is_closed(&set), down);
        }
    }

    #[test]
    fn continuity_is_monotonicity() {
        let p = divisibility(6);
        let q = PosetSpace::new(2, |a, b| a <= b, Topology::CoarseLower).unwrap();
        // 0 ↦ 0, others ↦ 1 is monotone
        assert!(is_continuous(&[0, 1, 1, 1, 1, 1], &p, &q).is_ok());
        // 2 goes up while its multiple 4 goes down
        assert!(is_continuous(&[0, 1, 1, 0, 1, 1], &p, &q).is_err());
    }

    #[test]
    fn rejects_non_orders() {
        assert!(PosetSpace::new(2, |_, _| true, Topology::CoarseLower).is_err());
        assert!(PosetSpace::new(2, |a, b| a < b, Topology::CoarseLower).is_err());
    }

    #[test]
    fn chains_are_lo_semigroups() {
        for k in 1..6 {
            assert!(is_lo_semigroup(&chain(k)).holds());
        }
    }

    #[test]
    fn non_lattice_is_not_an_lo_semigroup() {
        let check = is_lo_semigroup(&crate::semiring::finite::tests::missing_meet_table());
        assert!(!check.holds());
        assert_eq!(check.missing_meet, Some((0, 1)));
    }
}
