//! Exact commutative rings and their finitely generated ideals.

pub mod euclid;
pub mod field;
mod ideal;
pub mod morphism;
pub mod mpoly;
mod parse;
pub mod upoly;

pub use euclid::{EuclideanDomain, IntegerRing};
pub use field::FieldKind;
pub use ideal::{
    ideal_canonicalize, ideal_intersection, ideal_membership, ideal_product, ideal_sum, is_prime_ring_ideal,
    int_ideal, is_primary_ring_ideal, ring_radical, spec_truncated, spec_truncated_with_height,
    FgRingIdeal,
};
pub use morphism::{induced_ideal_map, induced_ideal_map_from_generators, RingMorphism};
pub use mpoly::{MPoly, MPolyRing, MonomialOrder};
pub use upoly::{UPoly, UniPolyRing};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// A principal ideal domain usable as the base of a localization or of `fgMod`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pid {
    Integers,
    Field(FieldKind),
    UniPoly(UniPolyRing),
}

/// A multiplicative subset of a PID, described by its saturation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocalSet {
    /// Powers of a nonzero element.
    PowersOf(RingElement),
    /// Complement of the prime ideal generated by a prime element.
    AvoidingPrime(RingElement),
    /// All nonzero elements: the fraction field.
    AllNonzero,
}

/// The rings supported by the backends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    /// The zero ring, where 0 = 1.
    Zero,
    Integers,
    IntegersMod(u64),
    PrimeField(u64),
    Rationals,
    UniPoly(UniPolyRing),
    MultiPoly(MPolyRing),
    Localized { base: Pid, set: LocalSet },
    /// `K[x]/(modulus)` with `modulus` monic of positive degree.
    PolyQuotient { ring: UniPolyRing, modulus: UPoly },
}

/// An element in canonical form for its ring.
///
/// `Int` is used by ℤ, ℤ/n (residues in `[0, n)`) and the zero ring; `Rat`
/// by prime fields and ℚ; `Poly` by `K[x]` and its quotients; `Frac` by
/// localizations, holding a reduced numerator and unit-normal denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElement {
    Int(BigInt),
    Rat(BigRational),
    Poly(UPoly),
    Multi(MPolyOrd),
    Frac(Box<RingElement>, Box<RingElement>),
}

/// Wrapper giving multivariate polynomials a (structural) total order, so
/// elements can be sorted for deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPolyOrd(pub MPoly);

impl PartialOrd for MPolyOrd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MPolyOrd {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.terms().cmp(other.0.terms())
    }
}

impl RingElement {
    pub fn int(v: i64) -> Self {
        RingElement::Int(BigInt::from(v))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            RingElement::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&UPoly> {
        match self {
            RingElement::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_mpoly(&self) -> Option<&MPoly> {
        match self {
            RingElement::Multi(p) => Some(&p.0),
            _ => None,
        }
    }

    pub fn frac(num: RingElement, den: RingElement) -> Self {
        RingElement::Frac(Box::new(num), Box::new(den))
    }

    pub fn as_frac(&self) -> Option<(&RingElement, &RingElement)> {
        match self {
            RingElement::Frac(n, d) => Some((n, d)),
            _ => None,
        }
    }
}

fn bad(ring: &impl fmt::Debug, a: &RingElement) -> ! {
    panic!("element {a:?} does not belong to {ring:?}")
}

impl Pid {
    pub fn name(&self) -> String {
        match self {
            Pid::Integers => "Z".into(),
            Pid::Field(k) => k.name(),
            Pid::UniPoly(r) => format!("{}[{}]", r.field.name(), r.var),
        }
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match self {
            Pid::Integers => RingDescriptor::Integers,
            Pid::Field(FieldKind::Rationals) => RingDescriptor::Rationals,
            Pid::Field(FieldKind::Prime(p)) => RingDescriptor::PrimeField(*p),
            Pid::UniPoly(r) => RingDescriptor::UniPoly(r.clone()),
        }
    }

    /// Whether `a` lies in the saturation of `set`, i.e. becomes a unit after localizing.
    pub fn in_saturation(&self, set: &LocalSet, a: &RingElement) -> bool {
        if self.is_zero(a) {
            return matches!(set, LocalSet::PowersOf(f) if self.is_zero(f));
        }
        match set {
            LocalSet::AllNonzero => true,
            LocalSet::AvoidingPrime(q) => self.is_unit(&self.gcd(a, q)),
            LocalSet::PowersOf(f) => {
                if self.is_zero(f) {
                    return true;
                }
                self.is_unit(&self.strip(set, a))
            }
        }
    }

    /// Removes from a nonzero `a` every factor that becomes a unit in the localization at `set`.
    pub fn strip(&self, set: &LocalSet, a: &RingElement) -> RingElement {
        if self.is_zero(a) {
            return self.zero();
        }
        match set {
            LocalSet::AllNonzero => self.one(),
            LocalSet::AvoidingPrime(q) => {
                let k = self.multiplicity(q, a);
                self.normalize(&EuclideanDomain::pow(self, q, k))
            }
            LocalSet::PowersOf(f) => {
                if self.is_zero(f) {
                    return self.zero();
                }
                let mut x = self.normalize(a);
                loop {
                    let g = self.gcd(&x, f);
                    if self.is_unit(&g) {
                        return x;
                    }
                    x = self.exact_div(&x, &g);
                }
            }
        }
    }

    /// Whether the element generates a prime ideal (0 counts as prime in a domain).
    pub fn is_prime_element(&self, a: &RingElement) -> Result<bool> {
        match (self, a) {
            (_, a) if self.is_zero(a) => Ok(true),
            (Pid::Integers, RingElement::Int(n)) => Ok(is_prime_bigint(n)?),
            (Pid::Field(_), _) => Ok(false),
            (Pid::UniPoly(r), RingElement::Poly(p)) => r.is_irreducible(p),
            _ => bad(self, a),
        }
    }

    pub fn random<R: Rng>(&self, rng: &mut R, size: i64) -> RingElement {
        match self {
            Pid::Integers => RingElement::Int(rng.gen_range(-size..=size).into()),
            Pid::Field(k) => RingElement::Rat(k.random(rng, size)),
            Pid::UniPoly(r) => RingElement::Poly(r.random(rng, size.max(0) as usize, 5)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match self {
            Pid::Integers => RingElement::Int(n.clone()),
            Pid::Field(k) => RingElement::Rat(
                k.from_rational(&BigRational::from_integer(n.clone()))
                    .expect("integers embed"),
            ),
            Pid::UniPoly(r) => RingElement::Poly(
                r.from_coeffs(vec![BigRational::from_integer(n.clone())])
                    .expect("integers embed"),
            ),
        }
    }
}

pub(crate) fn is_prime_bigint(n: &BigInt) -> Result<bool> {
    let n = n.abs();
    match n.to_u64() {
        Some(v) => Ok(field::is_prime_u64(v)),
        None => Err(Error::Unsupported(format!("primality of {n}"))),
    }
}

pub fn squarefree_u64(mut n: u64) -> u64 {
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out *= d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out *= n;
    }
    out
}

pub(crate) fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl EuclideanDomain for Pid {
    type Elem = RingElement;

    fn zero(&self) -> RingElement {
        match self {
            Pid::Integers => RingElement::Int(BigInt::zero()),
            Pid::Field(_) => RingElement::Rat(BigRational::zero()),
            Pid::UniPoly(_) => RingElement::Poly(UPoly::zero()),
        }
    }
    fn one(&self) -> RingElement {
        match self {
            Pid::Integers => RingElement::Int(BigInt::one()),
            Pid::Field(_) => RingElement::Rat(BigRational::one()),
            Pid::UniPoly(_) => RingElement::Poly(UPoly::one()),
        }
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Int(v) => v.is_zero(),
            RingElement::Rat(v) => v.is_zero(),
            RingElement::Poly(p) => p.is_zero(),
            _ => bad(self, a),
        }
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.lift2(a, b, |r, x, y| r.add(x, y), |k, x, y| k.add(x, y), |r, x, y| r.add(x, y))
    }
    fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.lift2(a, b, |r, x, y| r.sub(x, y), |k, x, y| k.sub(x, y), |r, x, y| r.sub(x, y))
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.lift2(a, b, |r, x, y| r.mul(x, y), |k, x, y| k.mul(x, y), |r, x, y| r.mul(x, y))
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        self.sub(&self.zero(), a)
    }
    fn div_rem(&self, a: &RingElement, b: &RingElement) -> (RingElement, RingElement) {
        match (self, a, b) {
            (Pid::Integers, RingElement::Int(x), RingElement::Int(y)) => {
                let (q, r) = IntegerRing.div_rem(x, y);
                (RingElement::Int(q), RingElement::Int(r))
            }
            (Pid::Field(k), RingElement::Rat(x), RingElement::Rat(y)) => {
                let (q, r) = EuclideanDomain::div_rem(k, x, y);
                (RingElement::Rat(q), RingElement::Rat(r))
            }
            (Pid::UniPoly(ring), RingElement::Poly(x), RingElement::Poly(y)) => {
                let (q, r) = ring.div_rem(x, y);
                (RingElement::Poly(q), RingElement::Poly(r))
            }
            _ => bad(self, a),
        }
    }
    fn normalize(&self, a: &RingElement) -> RingElement {
        match (self, a) {
            (Pid::Integers, RingElement::Int(x)) => RingElement::Int(x.abs()),
            (Pid::Field(k), RingElement::Rat(x)) => RingElement::Rat(k.normalize(x)),
            (Pid::UniPoly(r), RingElement::Poly(x)) => RingElement::Poly(r.monic(x)),
            _ => bad(self, a),
        }
    }
    fn is_unit(&self, a: &RingElement) -> bool {
        match (self, a) {
            (Pid::Integers, RingElement::Int(x)) => x.abs().is_one(),
            (Pid::Field(_), RingElement::Rat(x)) => !x.is_zero(),
            (Pid::UniPoly(_), RingElement::Poly(x)) => x.degree() == Some(0),
            _ => bad(self, a),
        }
    }
    fn reduce_mod(&self, a: &RingElement, m: &RingElement) -> RingElement {
        match (self, a, m) {
            (Pid::Integers, RingElement::Int(x), RingElement::Int(y)) => {
                RingElement::Int(IntegerRing.reduce_mod(x, y))
            }
            (Pid::Field(_), _, _) => self.zero(),
            (Pid::UniPoly(_), _, _) => self.div_rem(a, m).1,
            _ => bad(self, a),
        }
    }
    fn format(&self, a: &RingElement) -> String {
        self.descriptor().format(a)
    }
}

impl Pid {
    fn lift2(
        &self,
        a: &RingElement,
        b: &RingElement,
        fi: impl Fn(&IntegerRing, &BigInt, &BigInt) -> BigInt,
        fk: impl Fn(&FieldKind, &BigRational, &BigRational) -> BigRational,
        fp: impl Fn(&UniPolyRing, &UPoly, &UPoly) -> UPoly,
    ) -> RingElement {
        match (self, a, b) {
            (Pid::Integers, RingElement::Int(x), RingElement::Int(y)) => {
                RingElement::Int(fi(&IntegerRing, x, y))
            }
            (Pid::Field(k), RingElement::Rat(x), RingElement::Rat(y)) => {
                RingElement::Rat(fk(k, x, y))
            }
            (Pid::UniPoly(r), RingElement::Poly(x), RingElement::Poly(y)) => {
                RingElement::Poly(fp(r, x, y))
            }
            _ => bad(self, a),
        }
    }
}

impl RingDescriptor {
    pub fn integers_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("modulus {n} must be at least 2")));
        }
        Ok(RingDescriptor::IntegersMod(n))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        FieldKind::prime(p).map(|_| RingDescriptor::PrimeField(p))
    }

    pub fn uni_poly(field: FieldKind, var: &str) -> Self {
        RingDescriptor::UniPoly(UniPolyRing::new(field, var))
    }

    pub fn multi_poly(vars: &[&str], order: MonomialOrder) -> Self {
        RingDescriptor::MultiPoly(MPolyRing::new(
            vars.iter().map(|v| v.to_string()).collect(),
            order,
        ))
    }

    /// The localization of a PID at a multiplicative set, validating the set.
    pub fn localized(base: Pid, set: LocalSet) -> Result<Self> {
        if let Pid::Field(_) = base {
            return Err(Error::Domain("localizing a field".into()));
        }
        let set = match set {
            LocalSet::AvoidingPrime(q) => {
                if base.is_zero(&q) {
                    LocalSet::AllNonzero
                } else if !base.is_prime_element(&q)? {
                    return Err(Error::Domain(format!(
                        "{} is not prime in {}",
                        base.format(&q),
                        base.name()
                    )));
                } else {
                    LocalSet::AvoidingPrime(base.normalize(&q))
                }
            }
            LocalSet::PowersOf(f) => LocalSet::PowersOf(base.normalize(&f)),
            LocalSet::AllNonzero => LocalSet::AllNonzero,
        };
        Ok(RingDescriptor::Localized { base, set })
    }

    pub fn poly_quotient(ring: UniPolyRing, modulus: UPoly) -> Result<Self> {
        match modulus.degree() {
            None => Err(Error::Domain("quotient by zero is the ring itself".into())),
            Some(0) => Ok(RingDescriptor::Zero),
            Some(_) => {
                let modulus = ring.monic(&modulus);
                Ok(RingDescriptor::PolyQuotient { ring, modulus })
            }
        }
    }

    /// The PID this ring is, if it is one.
    pub fn as_pid(&self) -> Option<Pid> {
        match self {
            RingDescriptor::Integers => Some(Pid::Integers),
            RingDescriptor::Rationals => Some(Pid::Field(FieldKind::Rationals)),
            RingDescriptor::PrimeField(p) => Some(Pid::Field(FieldKind::Prime(*p))),
            RingDescriptor::UniPoly(r) => Some(Pid::UniPoly(r.clone())),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            RingDescriptor::Zero => "0".into(),
            RingDescriptor::Integers => "Z".into(),
            RingDescriptor::IntegersMod(n) => format!("Z/{n}"),
            RingDescriptor::PrimeField(p) => format!("F{p}"),
            RingDescriptor::Rationals => "Q".into(),
            RingDescriptor::UniPoly(r) => format!("{}[{}]", r.field.name(), r.var),
            RingDescriptor::MultiPoly(r) => {
                let order = match r.order {
                    MonomialOrder::Grevlex => "",
                    MonomialOrder::Lex => ";lex",
                };
                format!("Q[{}{}]", r.vars.join(","), order)
            }
            RingDescriptor::Localized { base, set } => match set {
                LocalSet::AllNonzero => format!("{}_(0)", base.name()),
                LocalSet::AvoidingPrime(q) => format!("{}_({})", base.name(), base.format(q)),
                LocalSet::PowersOf(f) => format!("{}[1/{}]", base.name(), base.format(f)),
            },
            RingDescriptor::PolyQuotient { ring, modulus } => format!(
                "{}[{}]/({})",
                ring.field.name(),
                ring.var,
                ring.format(modulus)
            ),
        }
    }

    pub fn is_domain(&self) -> bool {
        match self {
            RingDescriptor::Zero => false,
            RingDescriptor::IntegersMod(n) => field::is_prime_u64(*n),
            RingDescriptor::PolyQuotient { ring, modulus } => {
                ring.is_irreducible(modulus).unwrap_or(false)
            }
            RingDescriptor::Localized { set: LocalSet::PowersOf(f), base } => !base.is_zero(f),
            _ => true,
        }
    }

    pub fn zero(&self) -> RingElement {
        match self {
            RingDescriptor::Zero | RingDescriptor::Integers | RingDescriptor::IntegersMod(_) => {
                RingElement::Int(BigInt::zero())
            }
            RingDescriptor::PrimeField(_) | RingDescriptor::Rationals => {
                RingElement::Rat(BigRational::zero())
            }
            RingDescriptor::UniPoly(_) | RingDescriptor::PolyQuotient { .. } => {
                RingElement::Poly(UPoly::zero())
            }
            RingDescriptor::MultiPoly(_) => RingElement::Multi(MPolyOrd(MPoly::zero())),
            RingDescriptor::Localized { base, .. } => RingElement::frac(base.zero(), base.one()),
        }
    }

    pub fn one(&self) -> RingElement {
        match self {
            RingDescriptor::Zero => RingElement::Int(BigInt::zero()),
            _ => self.from_bigint(&BigInt::one()),
        }
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the unique ring map from ℤ.
    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match self {
            RingDescriptor::Zero => RingElement::Int(BigInt::zero()),
            RingDescriptor::Integers => RingElement::Int(n.clone()),
            RingDescriptor::IntegersMod(m) => RingElement::Int(n.mod_floor(&BigInt::from(*m))),
            RingDescriptor::PrimeField(p) => RingElement::Rat(
                FieldKind::Prime(*p).from_rational(&BigRational::from_integer(n.clone())).unwrap(),
            ),
            RingDescriptor::Rationals => RingElement::Rat(BigRational::from_integer(n.clone())),
            RingDescriptor::UniPoly(r) => RingElement::Poly(
                r.from_coeffs(vec![BigRational::from_integer(n.clone())]).unwrap(),
            ),
            RingDescriptor::PolyQuotient { ring, .. } => RingElement::Poly(
                ring.from_coeffs(vec![BigRational::from_integer(n.clone())]).unwrap(),
            ),
            RingDescriptor::MultiPoly(r) => {
                RingElement::Multi(MPolyOrd(r.constant(BigRational::from_integer(n.clone()))))
            }
            RingDescriptor::Localized { base, .. } => {
                self.make_frac(base.from_bigint(n), base.one())
            }
        }
    }

    /// Image of a rational scalar, when the ring contains the needed inverses.
    pub fn from_rational(&self, c: &BigRational) -> Result<RingElement> {
        let num = self.from_bigint(c.numer());
        let den = self.from_bigint(c.denom());
        let inv = self
            .inverse(&den)
            .ok_or_else(|| Error::Domain(format!("{} is not invertible in {}", c.denom(), self.name())))?;
        Ok(self.mul(&num, &inv))
    }

    /// The `i`-th variable of a polynomial ring (or of its localization or quotient).
    pub fn var(&self, i: usize) -> Result<RingElement> {
        match self {
            RingDescriptor::UniPoly(r) if i == 0 => Ok(RingElement::Poly(r.x())),
            RingDescriptor::PolyQuotient { ring, modulus } if i == 0 => {
                Ok(RingElement::Poly(ring.div_rem(&ring.x(), modulus).1))
            }
            RingDescriptor::MultiPoly(r) if i < r.nvars() => Ok(RingElement::Multi(MPolyOrd(r.var(i)))),
            RingDescriptor::Localized {
                base: Pid::UniPoly(r),
                ..
            } if i == 0 => Ok(self.make_frac(RingElement::Poly(r.x()), RingElement::Poly(UPoly::one()))),
            _ => Err(Error::Domain(format!("{} has no variable {i}", self.name()))),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        match self {
            RingDescriptor::UniPoly(r) | RingDescriptor::PolyQuotient { ring: r, .. } => {
                vec![r.var.clone()]
            }
            RingDescriptor::Localized {
                base: Pid::UniPoly(r),
                ..
            } => vec![r.var.clone()],
            RingDescriptor::MultiPoly(r) => r.vars.clone(),
            _ => Vec::new(),
        }
    }

    /// Reduced fraction `num/den` in a localization; `den` must become a unit.
    pub(crate) fn make_frac(&self, num: RingElement, den: RingElement) -> RingElement {
        let RingDescriptor::Localized { base, set } = self else {
            bad(self, &num)
        };
        if let LocalSet::PowersOf(f) = set {
            if base.is_zero(f) {
                return RingElement::frac(base.zero(), base.one());
            }
        }
        if base.is_zero(&num) {
            return RingElement::frac(base.zero(), base.one());
        }
        let g = base.gcd(&num, &den);
        let (mut n, mut d) = (base.exact_div(&num, &g), base.exact_div(&den, &g));
        let dn = base.normalize(&d);
        let unit = base.exact_div(&d, &dn);
        let unit_inv = base.exact_div(&base.one(), &unit);
        n = base.mul(&n, &unit_inv);
        d = dn;
        RingElement::frac(n, d)
    }

    pub fn contains(&self, a: &RingElement) -> bool {
        match (self, a) {
            (RingDescriptor::Zero, RingElement::Int(v)) => v.is_zero(),
            (RingDescriptor::Integers, RingElement::Int(_)) => true,
            (RingDescriptor::IntegersMod(n), RingElement::Int(v)) => {
                !v.is_negative() && v < &BigInt::from(*n)
            }
            (RingDescriptor::PrimeField(p), RingElement::Rat(v)) => FieldKind::Prime(*p).contains(v),
            (RingDescriptor::Rationals, RingElement::Rat(_)) => true,
            (RingDescriptor::UniPoly(r), RingElement::Poly(p)) => r.contains(p),
            (RingDescriptor::PolyQuotient { ring, modulus }, RingElement::Poly(p)) => {
                ring.contains(p) && p.degree().map_or(true, |d| d < modulus.degree().unwrap())
            }
            (RingDescriptor::MultiPoly(r), RingElement::Multi(p)) => r.contains(&p.0),
            (RingDescriptor::Localized { base, set }, RingElement::Frac(n, d)) => {
                let base_ring = base.descriptor();
                base_ring.contains(n)
                    && base_ring.contains(d)
                    && !base.is_zero(d)
                    && base.in_saturation(set, d)
                    && self.make_frac((**n).clone(), (**d).clone()) == *a
            }
            _ => false,
        }
    }

    /// Errors unless `a` is a canonical element of this ring.
    pub fn check(&self, a: &RingElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{a:?} is not an element of {}", self.name())))
        }
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        *a == self.zero()
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        use RingElement as E;
        match (self, a, b) {
            (RingDescriptor::Zero, _, _) => self.zero(),
            (RingDescriptor::Integers, E::Int(x), E::Int(y)) => E::Int(x + y),
            (RingDescriptor::IntegersMod(n), E::Int(x), E::Int(y)) => {
                E::Int((x + y).mod_floor(&BigInt::from(*n)))
            }
            (RingDescriptor::PrimeField(p), E::Rat(x), E::Rat(y)) => {
                E::Rat(FieldKind::Prime(*p).add(x, y))
            }
            (RingDescriptor::Rationals, E::Rat(x), E::Rat(y)) => E::Rat(x + y),
            (RingDescriptor::UniPoly(r), E::Poly(x), E::Poly(y)) => E::Poly(r.add(x, y)),
            (RingDescriptor::PolyQuotient { ring, .. }, E::Poly(x), E::Poly(y)) => {
                E::Poly(ring.add(x, y))
            }
            (RingDescriptor::MultiPoly(r), E::Multi(x), E::Multi(y)) => {
                E::Multi(MPolyOrd(r.add(&x.0, &y.0)))
            }
            (RingDescriptor::Localized { base, .. }, E::Frac(n1, d1), E::Frac(n2, d2)) => {
                let num = base.add(&base.mul(n1, d2), &base.mul(n2, d1));
                self.make_frac(num, base.mul(d1, d2))
            }
            _ => bad(self, a),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        use RingElement as E;
        match (self, a) {
            (RingDescriptor::Zero, _) => self.zero(),
            (RingDescriptor::Integers, E::Int(x)) => E::Int(-x),
            (RingDescriptor::IntegersMod(n), E::Int(x)) => E::Int((-x).mod_floor(&BigInt::from(*n))),
            (RingDescriptor::PrimeField(p), E::Rat(x)) => E::Rat(FieldKind::Prime(*p).neg(x)),
            (RingDescriptor::Rationals, E::Rat(x)) => E::Rat(-x),
            (RingDescriptor::UniPoly(r), E::Poly(x))
            | (RingDescriptor::PolyQuotient { ring: r, .. }, E::Poly(x)) => E::Poly(r.neg(x)),
            (RingDescriptor::MultiPoly(r), E::Multi(x)) => E::Multi(MPolyOrd(r.neg(&x.0))),
            (RingDescriptor::Localized { base, .. }, E::Frac(n, d)) => {
                E::frac(base.neg(n), (**d).clone())
            }
            _ => bad(self, a),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        use RingElement as E;
        match (self, a, b) {
            (RingDescriptor::Zero, _, _) => self.zero(),
            (RingDescriptor::Integers, E::Int(x), E::Int(y)) => E::Int(x * y),
            (RingDescriptor::IntegersMod(n), E::Int(x), E::Int(y)) => {
                E::Int((x * y).mod_floor(&BigInt::from(*n)))
            }
            (RingDescriptor::PrimeField(p), E::Rat(x), E::Rat(y)) => {
                E::Rat(FieldKind::Prime(*p).mul(x, y))
            }
            (RingDescriptor::Rationals, E::Rat(x), E::Rat(y)) => E::Rat(x * y),
            (RingDescriptor::UniPoly(r), E::Poly(x), E::Poly(y)) => E::Poly(r.mul(x, y)),
            (RingDescriptor::PolyQuotient { ring, modulus }, E::Poly(x), E::Poly(y)) => {
                E::Poly(ring.div_rem(&ring.mul(x, y), modulus).1)
            }
            (RingDescriptor::MultiPoly(r), E::Multi(x), E::Multi(y)) => {
                E::Multi(MPolyOrd(r.mul(&x.0, &y.0)))
            }
            (RingDescriptor::Localized { base, .. }, E::Frac(n1, d1), E::Frac(n2, d2)) => {
                self.make_frac(base.mul(n1, n2), base.mul(d1, d2))
            }
            _ => bad(self, a),
        }
    }

    pub fn pow(&self, a: &RingElement, n: u32) -> RingElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: &RingElement) -> Option<RingElement> {
        use RingElement as E;
        match (self, a) {
            (RingDescriptor::Zero, _) => Some(self.zero()),
            (RingDescriptor::Integers, E::Int(x)) => x.abs().is_one().then(|| a.clone()),
            (RingDescriptor::IntegersMod(n), E::Int(x)) => {
                let n = BigInt::from(*n);
                let (g, s, _) = IntegerRing.ext_gcd(x, &n);
                g.is_one().then(|| E::Int(s.mod_floor(&n)))
            }
            (RingDescriptor::PrimeField(p), E::Rat(x)) => FieldKind::Prime(*p).inv(x).map(E::Rat),
            (RingDescriptor::Rationals, E::Rat(x)) => FieldKind::Rationals.inv(x).map(E::Rat),
            (RingDescriptor::UniPoly(r), E::Poly(x)) => {
                (x.degree() == Some(0)).then(|| E::Poly(r.constant(r.field.inv(&x.coeff(0)).unwrap())))
            }
            (RingDescriptor::PolyQuotient { ring, modulus }, E::Poly(x)) => {
                let pid = Pid::UniPoly(ring.clone());
                let (g, s, _) = pid.ext_gcd(&E::Poly(x.clone()), &E::Poly(modulus.clone()));
                pid.is_unit(&g)
                    .then(|| E::Poly(ring.div_rem(s.as_poly().unwrap(), modulus).1))
            }
            (RingDescriptor::MultiPoly(r), E::Multi(x)) => {
                let lead = x.0.leading()?;
                (x.0.terms().len() == 1 && lead.0.iter().all(|&e| e == 0))
                    .then(|| E::Multi(MPolyOrd(r.constant(lead.1.recip()))))
            }
            (RingDescriptor::Localized { base, set }, E::Frac(n, d)) => base
                .in_saturation(set, n)
                .then(|| self.make_frac((**d).clone(), (**n).clone())),
            _ => bad(self, a),
        }
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        self.inverse(a).is_some()
    }

    /// All elements of a finite ring, in a fixed order.
    pub fn elements(&self) -> Option<Vec<RingElement>> {
        match self {
            RingDescriptor::Zero => Some(vec![self.zero()]),
            RingDescriptor::IntegersMod(n) => Some((0..*n).map(|i| RingElement::Int(i.into())).collect()),
            RingDescriptor::PrimeField(p) => Some(
                (0..*p)
                    .map(|i| RingElement::Rat(BigRational::from_integer(i.into())))
                    .collect(),
            ),
            RingDescriptor::PolyQuotient { ring, modulus } => {
                let p = match ring.field {
                    FieldKind::Prime(p) => p,
                    FieldKind::Rationals => return None,
                };
                let d = modulus.degree().unwrap() as u32;
                let count = p.checked_pow(d)?;
                Some(
                    (0..count)
                        .map(|mut idx| {
                            let cs = (0..d)
                                .map(|_| {
                                    let c = idx % p;
                                    idx /= p;
                                    BigRational::from_integer(c.into())
                                })
                                .collect();
                            RingElement::Poly(ring.from_coeffs(cs).unwrap())
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// A random element whose size is governed by `size` (integer range, degree, ...).
    pub fn random<R: Rng>(&self, rng: &mut R, size: i64) -> RingElement {
        match self {
            RingDescriptor::Zero => self.zero(),
            RingDescriptor::Integers => RingElement::Int(rng.gen_range(-size..=size).into()),
            RingDescriptor::IntegersMod(n) => RingElement::Int(rng.gen_range(0..*n).into()),
            RingDescriptor::PrimeField(p) => {
                RingElement::Rat(BigRational::from_integer(rng.gen_range(0..*p).into()))
            }
            RingDescriptor::Rationals => RingElement::Rat(FieldKind::Rationals.random(rng, size)),
            RingDescriptor::UniPoly(r) => RingElement::Poly(r.random(rng, size.max(0) as usize, 5)),
            RingDescriptor::PolyQuotient { ring, modulus } => {
                let p = ring.random(rng, modulus.degree().unwrap(), 5);
                RingElement::Poly(ring.div_rem(&p, modulus).1)
            }
            RingDescriptor::MultiPoly(r) => {
                RingElement::Multi(MPolyOrd(r.random(rng, size.max(0) as u32, 3, 5)))
            }
            RingDescriptor::Localized { base, set } => {
                let num = base.random(rng, size);
                let den = match set {
                    LocalSet::PowersOf(f) => {
                        EuclideanDomain::pow(base, f, rng.gen_range(0..3))
                    }
                    LocalSet::AvoidingPrime(q) => loop {
                        let d = base.random(rng, size);
                        if !base.is_zero(&d) && base.is_unit(&base.gcd(&d, q)) {
                            break d;
                        }
                    },
                    LocalSet::AllNonzero => loop {
                        let d = base.random(rng, size);
                        if !base.is_zero(&d) {
                            break d;
                        }
                    },
                };
                self.make_frac(num, den)
            }
        }
    }

    pub fn format(&self, a: &RingElement) -> String {
        match (self, a) {
            (_, RingElement::Int(v)) => v.to_string(),
            (_, RingElement::Rat(v)) => v.to_string(),
            (RingDescriptor::UniPoly(r), RingElement::Poly(p))
            | (RingDescriptor::PolyQuotient { ring: r, .. }, RingElement::Poly(p)) => r.format(p),
            (RingDescriptor::MultiPoly(r), RingElement::Multi(p)) => r.format(&p.0),
            (RingDescriptor::Localized { base, .. }, RingElement::Frac(n, d)) => {
                let ns = base.format(n);
                if base.is_unit(d) {
                    ns
                } else {
                    let wrap = |s: String| {
                        if s.contains(' ') {
                            format!("({s})")
                        } else {
                            s
                        }
                    };
                    format!("{}/{}", wrap(ns), wrap(base.format(d)))
                }
            }
            _ => format!("{a:?}"),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        parse::parse_element(self, text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_ring(text)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse() {
        let r = RingDescriptor::IntegersMod(12);
        assert_eq!(r.inverse(&RingElement::int(5)), Some(RingElement::int(5)));
        assert_eq!(r.inverse(&RingElement::int(4)), None);
    }

    #[test]
    fn quotient_ring_inverse() {
        let ring = UniPolyRing::new(FieldKind::Prime(2), "x");
        let r = RingDescriptor::poly_quotient(ring.clone(), ring.from_ints(&[1, 1, 1])).unwrap();
        let x = r.var(0).unwrap();
        let inv = r.inverse(&x).unwrap();
        assert_eq!(r.mul(&x, &inv), r.one());
    }

    #[test]
    fn localized_fraction_normal_form() {
        let r = RingDescriptor::localized(Pid::Integers, LocalSet::AvoidingPrime(RingElement::int(3))).unwrap();
        let a = r.make_frac(RingElement::int(-4), RingElement::int(-10));
        assert_eq!(a, RingElement::frac(RingElement::int(2), RingElement::int(5)));
        assert!(r.contains(&a));
        assert!(r.is_unit(&a));
        let b = r.make_frac(RingElement::int(3), RingElement::int(2));
        assert!(!r.is_unit(&b));
        assert!(!r.contains(&RingElement::frac(RingElement::int(1), RingElement::int(3))));
    }

    #[test]
    fn powers_of_zero_give_the_zero_ring() {
        let r = RingDescriptor::localized(Pid::Integers, LocalSet::PowersOf(RingElement::int(0))).unwrap();
        assert_eq!(r.one(), r.zero());
    }

    #[test]
    fn finite_element_counts() {
        let ring = UniPolyRing::new(FieldKind::Prime(2), "x");
        let r = RingDescriptor::poly_quotient(ring.clone(), ring.from_ints(&[0, 1, 1])).unwrap();
        assert_eq!(r.elements().unwrap().len(), 4);
        assert_eq!(RingDescriptor::IntegersMod(6).elements().unwrap().len(), 6);
    }

    #[test]
    fn helpers() {
        assert_eq!(squarefree_u64(360), 30);
        assert_eq!(prime_divisors_u64(360), vec![2, 3, 5]);
    }
}
