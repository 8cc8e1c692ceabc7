//! Commutative semirings with unit.

pub mod catalogue;
pub(crate) mod finite;
mod fractions;

pub use finite::{
    localize_semiring, Axiom, AxiomViolation, FiniteSemiring, Localization, LoCheck,
    ValidationReport,
};
pub use fractions::{Frac, NatFractions, NatMultSet, PidFractions, PidMultSet};

use std::fmt::Debug;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A commutative semiring with unit.
///
/// Implementations fix a canonical form for elements, so `==` on
/// `Self::Elem` is semiring equality.
pub trait Semiring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Whether `a` is a canonical element of this semiring.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn name(&self) -> String;

    fn pow(&self, a: &Self::Elem, mut n: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// The canonical order of an idempotent semiring: `a ≤ b` iff `a + b = b`.
pub fn natural_leq<S: Semiring>(s: &S, a: &S::Elem, b: &S::Elem) -> Result<bool> {
    for x in [a, b] {
        if !s.contains(x) {
            return Err(Error::Domain(format!("{x:?} is not an element of {}", s.name())));
        }
    }
    Ok(s.add(a, b) == *b)
}

/// `a + a = a` on every sample.
pub fn idempotent_on<S: Semiring>(s: &S, samples: &[S::Elem]) -> bool {
    samples.iter().all(|a| s.add(a, a) == *a)
}

/// `a + 1 = 1` on every sample.
pub fn simple_on<S: Semiring>(s: &S, samples: &[S::Elem]) -> bool {
    let one = s.one();
    samples.iter().all(|a| s.add(a, &one) == one)
}

/// The Boolean semiring 𝔹 = {0, 1} with 1 + 1 = 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;
    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn name(&self) -> String {
        "B".into()
    }
}

/// Nonnegative integers with gcd as addition and the product as multiplication.
///
/// The additive identity is 0 (gcd(0, a) = a) and the order `a ≤ b` means
/// `b` divides `a`, so 0 is the bottom and 1 the top.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NatGcd;

impl Semiring for NatGcd {
    type Elem = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a.gcd(b)
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn name(&self) -> String {
        "N^gcd".into()
    }
}

impl Boolean {
    pub fn as_finite() -> FiniteSemiring {
        FiniteSemiring::new(
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![0, 0], vec![0, 1]],
            0,
            1,
        )
        .expect("Boolean tables are well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn natgcd_order_is_reverse_divisibility() {
        assert!(natural_leq(&NatGcd, &n(12), &n(4)).unwrap());
        assert!(!natural_leq(&NatGcd, &n(4), &n(12)).unwrap());
        assert!(natural_leq(&NatGcd, &n(0), &n(7)).unwrap());
        assert!(natural_leq(&NatGcd, &n(7), &n(1)).unwrap());
    }

    #[test]
    fn natgcd_is_simple_and_idempotent_on_samples() {
        let samples: Vec<BigUint> = (0..200u64).map(n).collect();
        assert!(idempotent_on(&NatGcd, &samples));
        assert!(simple_on(&NatGcd, &samples));
    }

    #[test]
    fn natural_leq_rejects_foreign_elements() {
        let s = Boolean::as_finite();
        assert!(matches!(natural_leq(&s, &0, &5), Err(Error::Domain(_))));
    }

    #[test]
    fn pow_and_sum() {
        assert_eq!(NatGcd.pow(&n(3), 4), n(81));
        assert_eq!(NatGcd.sum([n(12), n(18), n(8)].iter()), n(2));
        assert!(Boolean.sum([false, true].iter()));
    }
}
