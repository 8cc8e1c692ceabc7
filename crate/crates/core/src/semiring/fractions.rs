use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Semiring;
use crate::error::{Error, Result};
use crate::ring::EuclideanDomain;

/// Multiplicative subsets of ℕ^gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatMultSet {
    /// `{1}`.
    Trivial,
    /// All nonzero naturals.
    AllNonzero,
    /// Powers of a positive integer.
    PowersOf(BigUint),
    /// Naturals not divisible by a prime `p`, the complement of `{m : p | m}`.
    CoprimeTo(BigUint),
}

/// The localization of ℕ^gcd at a multiplicative subset.
///
/// Elements are nonnegative rationals in lowest terms whose denominators lie
/// in the saturation of the subset; `a/b + c/d = gcd(ad, cb)/(bd)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatFractions {
    set: NatMultSet,
}

impl NatFractions {
    pub fn new(set: NatMultSet) -> Result<Self> {
        match &set {
            NatMultSet::PowersOf(f) if f.is_zero() => {
                Err(Error::Domain("powers of 0 contain 0".into()))
            }
            NatMultSet::CoprimeTo(p) if !crate::ring::field::is_prime_u64(p.try_into().unwrap_or(0)) => {
                Err(Error::Domain(format!("{p} is not prime")))
            }
            _ => Ok(NatFractions { set }),
        }
    }

    pub fn set(&self) -> &NatMultSet {
        &self.set
    }

    /// Whether `d` becomes invertible.
    pub fn inverts(&self, d: &BigUint) -> bool {
        if d.is_zero() {
            return false;
        }
        match &self.set {
            NatMultSet::Trivial => d.is_one(),
            NatMultSet::AllNonzero => true,
            NatMultSet::CoprimeTo(p) => !(d % p).is_zero(),
            NatMultSet::PowersOf(f) => {
                let mut x = d.clone();
                loop {
                    let g = x.gcd(f);
                    if g.is_one() {
                        return x.is_one();
                    }
                    x /= g;
                }
            }
        }
    }

    /// The fraction `s/v`; `v` must be in the subset's saturation.
    pub fn fraction(&self, s: &BigUint, v: &BigUint) -> Result<BigRational> {
        if !self.inverts(v) {
            return Err(Error::Domain(format!("{v} is not inverted")));
        }
        Ok(BigRational::new(BigInt::from(s.clone()), BigInt::from(v.clone())))
    }

    /// The structure map `s ↦ s/1`.
    pub fn embed(&self, s: &BigUint) -> BigRational {
        BigRational::from_integer(BigInt::from(s.clone()))
    }
}

impl Semiring for NatFractions {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
        BigRational::new(num, a.denom() * b.denom())
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn contains(&self, a: &BigRational) -> bool {
        !a.is_negative() && self.inverts(&a.denom().magnitude().clone())
    }
    fn name(&self) -> String {
        match &self.set {
            NatMultSet::Trivial => "N^gcd".into(),
            NatMultSet::AllNonzero => "Frac(N^gcd)".into(),
            NatMultSet::PowersOf(f) => format!("N^gcd[1/{f}]"),
            NatMultSet::CoprimeTo(p) => format!("N^gcd_({p})"),
        }
    }
}

/// Multiplicative subsets of `fgId(D)` for a PID `D`, named by ring elements:
/// an ideal `⟨a⟩` is identified with the unit-normal `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PidMultSet<E> {
    Units,
    AllNonzero,
    PowersOf(E),
    /// Classes of elements not divisible by the prime `q`.
    AvoidingPrime(E),
}

/// A fraction in lowest terms with unit-normal numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac<E> {
    pub num: E,
    pub den: E,
}

/// The localization of `fgId(D)` at a multiplicative subset, for a PID `D`.
///
/// `fgId(D)` is the gcd semiring on unit-normal elements; fractions
/// add by `a/b + c/d = gcd(ad, cb)/(bd)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PidFractions<D: EuclideanDomain> {
    pub domain: D,
    pub set: PidMultSet<D::Elem>,
}

impl<D: EuclideanDomain> PidFractions<D> {
    pub fn new(domain: D, set: PidMultSet<D::Elem>) -> Self {
        let set = match set {
            PidMultSet::PowersOf(f) => PidMultSet::PowersOf(domain.normalize(&f)),
            PidMultSet::AvoidingPrime(q) => PidMultSet::AvoidingPrime(domain.normalize(&q)),
            s => s,
        };
        PidFractions { domain, set }
    }

    /// All elements collapse when 0 is inverted.
    fn trivial(&self) -> bool {
        matches!(&self.set, PidMultSet::PowersOf(f) if self.domain.is_zero(f))
    }

    pub fn inverts(&self, d: &D::Elem) -> bool {
        let r = &self.domain;
        if self.trivial() {
            return true;
        }
        if r.is_zero(d) {
            return false;
        }
        match &self.set {
            PidMultSet::Units => r.is_unit(d),
            PidMultSet::AllNonzero => true,
            PidMultSet::AvoidingPrime(q) => !r.divides(q, d),
            PidMultSet::PowersOf(f) => {
                let mut x = r.normalize(d);
                loop {
                    let g = r.gcd(&x, f);
                    if r.is_unit(&g) {
                        return r.is_unit(&x);
                    }
                    x = r.exact_div(&x, &g);
                }
            }
        }
    }

    fn reduce(&self, num: D::Elem, den: D::Elem) -> Frac<D::Elem> {
        let r = &self.domain;
        if self.trivial() || r.is_zero(&num) {
            return Frac {
                num: r.zero(),
                den: r.one(),
            };
        }
        let g = r.gcd(&num, &den);
        Frac {
            num: r.normalize(&r.exact_div(&num, &g)),
            den: r.normalize(&r.exact_div(&den, &g)),
        }
    }

    pub fn fraction(&self, num: &D::Elem, den: &D::Elem) -> Result<Frac<D::Elem>> {
        if !self.inverts(den) {
            return Err(Error::Domain(format!(
                "{} is not inverted",
                self.domain.format(den)
            )));
        }
        Ok(self.reduce(num.clone(), den.clone()))
    }

    pub fn embed(&self, a: &D::Elem) -> Frac<D::Elem> {
        self.reduce(a.clone(), self.domain.one())
    }

    pub fn format(&self, a: &Frac<D::Elem>) -> String {
        if self.domain.is_unit(&a.den) {
            format!("<{}>", self.domain.format(&a.num))
        } else {
            format!("<{}>/<{}>", self.domain.format(&a.num), self.domain.format(&a.den))
        }
    }
}

impl<D: EuclideanDomain> Semiring for PidFractions<D> {
    type Elem = Frac<D::Elem>;
    fn zero(&self) -> Self::Elem {
        self.reduce(self.domain.zero(), self.domain.one())
    }
    fn one(&self) -> Self::Elem {
        self.reduce(self.domain.one(), self.domain.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.domain;
        let num = r.gcd(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.reduce(num, r.mul(&a.den, &b.den))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.domain;
        self.reduce(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den))
    }
    fn contains(&self, a: &Self::Elem) -> bool {
        self.inverts(&a.den) && self.reduce(a.num.clone(), a.den.clone()) == *a
    }
    fn name(&self) -> String {
        "fgId fractions".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::IntegerRing;
    use crate::semiring::{idempotent_on, natural_leq, NatGcd};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_localization_is_a_copy() {
        let loc = NatFractions::new(NatMultSet::Trivial).unwrap();
        for a in 0u32..30 {
            for b in 0u32..30 {
                let (x, y) = (BigUint::from(a), BigUint::from(b));
                assert_eq!(
                    loc.add(&loc.embed(&x), &loc.embed(&y)),
                    loc.embed(&NatGcd.add(&x, &y))
                );
                assert_eq!(
                    loc.mul(&loc.embed(&x), &loc.embed(&y)),
                    loc.embed(&NatGcd.mul(&x, &y))
                );
            }
        }
        assert!(loc.fraction(&BigUint::from(1u8), &BigUint::from(2u8)).is_err());
    }

    #[test]
    fn positive_rationals() {
        let loc = NatFractions::new(NatMultSet::AllNonzero).unwrap();
        assert_eq!(loc.add(&q(1, 2), &q(1, 3)), q(1, 6));
        assert_eq!(loc.add(&q(2, 3), &q(4, 9)), q(2, 9));
        assert_eq!(loc.add(&q(0, 1), &q(5, 7)), q(5, 7));
        let samples: Vec<_> = (1..20).flat_map(|n| (1..10).map(move |d| q(n, d))).collect();
        assert!(idempotent_on(&loc, &samples));
        assert!(natural_leq(&loc, &q(4, 1), &q(2, 1)).unwrap());
    }

    #[test]
    fn pid_fractions_match_nat_fractions() {
        let nat = NatFractions::new(NatMultSet::AllNonzero).unwrap();
        let pid = PidFractions::new(IntegerRing, PidMultSet::AllNonzero);
        for (a, b, c, d) in [(4, 6, 3, 5), (0, 1, 7, 3), (12, 35, 18, 25)] {
            let x = pid.fraction(&a.into(), &b.into()).unwrap();
            let y = pid.fraction(&c.into(), &d.into()).unwrap();
            let s = pid.add(&x, &y);
            let t = nat.add(&q(a, b), &q(c, d));
            assert_eq!(BigRational::new(s.num, s.den), t);
        }
        let four_over_six = pid.fraction(&4.into(), &6.into()).unwrap();
        assert_eq!(four_over_six, pid.fraction(&2.into(), &3.into()).unwrap());
    }

    #[test]
    fn avoiding_prime_denominators() {
        let pid = PidFractions::new(IntegerRing, PidMultSet::AvoidingPrime(BigInt::from(3)));
        assert!(pid.fraction(&1.into(), &3.into()).is_err());
        assert!(pid.fraction(&1.into(), &10.into()).is_ok());
        let powers = PidFractions::new(IntegerRing, PidMultSet::PowersOf(BigInt::from(6)));
        assert!(powers.inverts(&BigInt::from(12)));
        assert!(!powers.inverts(&BigInt::from(10)));
        let all = PidFractions::new(IntegerRing, PidMultSet::PowersOf(BigInt::from(0)));
        assert_eq!(all.one(), all.zero());
    }
}
