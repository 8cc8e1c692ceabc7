use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{
    field, prime_divisors_u64, EuclideanDomain, FieldKind, LocalSet, MPolyOrd, Pid,
    RingDescriptor, RingElement, UPoly,
};
use crate::error::{Error, Result};

/// A finitely generated ideal together with its canonical generating set.
///
/// Equality and hashing look only at the ring and the canonical form.
#[derive(Debug, Clone)]
pub struct FgRingIdeal {
    ring: RingDescriptor,
    generators: Vec<RingElement>,
    canonical: Vec<RingElement>,
}

impl PartialEq for FgRingIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.canonical == other.canonical
    }
}

impl Eq for FgRingIdeal {}

impl Hash for FgRingIdeal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.hash(state);
        self.canonical.hash(state);
    }
}

impl PartialOrd for FgRingIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A structural total order, for deterministic sorting only.
impl Ord for FgRingIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical
            .len()
            .cmp(&other.canonical.len())
            .then_with(|| self.canonical.cmp(&other.canonical))
    }
}

/// Canonical form of the ideal generated by `gens` in `ring`.
pub fn ideal_canonicalize(ring: &RingDescriptor, gens: &[RingElement]) -> Result<FgRingIdeal> {
    for g in gens {
        ring.check(g)?;
    }
    Ok(FgRingIdeal {
        ring: ring.clone(),
        generators: gens.to_vec(),
        canonical: canonical_form(ring, gens),
    })
}

fn pid_gcd(pid: &Pid, gens: &[RingElement]) -> RingElement {
    gens.iter().fold(pid.zero(), |acc, g| pid.gcd(&acc, g))
}

fn canonical_form(ring: &RingDescriptor, gens: &[RingElement]) -> Vec<RingElement> {
    match ring {
        RingDescriptor::Zero => vec![ring.zero()],
        RingDescriptor::Integers | RingDescriptor::Rationals | RingDescriptor::PrimeField(_) | RingDescriptor::UniPoly(_) => {
            let pid = ring.as_pid().unwrap();
            vec![pid_gcd(&pid, gens)]
        }
        RingDescriptor::IntegersMod(n) => {
            let n = BigInt::from(*n);
            let d = gens
                .iter()
                .fold(n.clone(), |acc, g| acc.gcd(g.as_int().unwrap()));
            vec![RingElement::Int(if d == n { BigInt::zero() } else { d })]
        }
        RingDescriptor::PolyQuotient { ring: r, modulus } => {
            let d = gens
                .iter()
                .fold(modulus.clone(), |acc, g| r.gcd(&acc, g.as_poly().unwrap()));
            vec![RingElement::Poly(if &d == modulus { UPoly::zero() } else { d })]
        }
        RingDescriptor::MultiPoly(r) => {
            let polys: Vec<_> = gens.iter().map(|g| g.as_mpoly().unwrap().clone()).collect();
            r.groebner(&polys)
                .into_iter()
                .map(|p| RingElement::Multi(MPolyOrd(p)))
                .collect()
        }
        RingDescriptor::Localized { base, set } => {
            let nums: Vec<RingElement> = gens
                .iter()
                .map(|g| g.as_frac().unwrap().0.clone())
                .collect();
            let g = base.strip(set, &pid_gcd(base, &nums));
            vec![ring.make_frac(g, base.one())]
        }
    }
}

impl FgRingIdeal {
    pub fn principal(ring: &RingDescriptor, a: &RingElement) -> Result<Self> {
        ideal_canonicalize(ring, std::slice::from_ref(a))
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        FgRingIdeal {
            ring: ring.clone(),
            generators: vec![ring.zero()],
            canonical: canonical_form(ring, &[ring.zero()]),
        }
    }

    pub fn unit(ring: &RingDescriptor) -> Self {
        FgRingIdeal {
            ring: ring.clone(),
            generators: vec![ring.one()],
            canonical: canonical_form(ring, &[ring.one()]),
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn canonical(&self) -> &[RingElement] {
        &self.canonical
    }

    /// The canonical single generator, for every backend except multivariate polynomials.
    pub fn generator(&self) -> Option<&RingElement> {
        match self.ring {
            RingDescriptor::MultiPoly(_) => None,
            _ => self.canonical.first(),
        }
    }

    /// The same ideal presented by its canonical generators only.
    pub fn canonical_presentation(&self) -> Self {
        FgRingIdeal {
            ring: self.ring.clone(),
            generators: self.canonical.clone(),
            canonical: self.canonical.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == FgRingIdeal::zero(&self.ring)
    }

    pub fn is_unit(&self) -> bool {
        *self == FgRingIdeal::unit(&self.ring)
    }

    pub fn contains(&self, f: &RingElement) -> bool {
        match &self.ring {
            RingDescriptor::MultiPoly(r) => {
                let basis: Vec<_> = self.canonical.iter().map(|g| g.as_mpoly().unwrap().clone()).collect();
                r.normal_form(f.as_mpoly().unwrap(), &basis).is_zero()
            }
            _ => {
                let mut gens = self.canonical.clone();
                gens.push(f.clone());
                canonical_form(&self.ring, &gens) == self.canonical
            }
        }
    }

    /// Containment `self ⊆ other`.
    pub fn is_subset(&self, other: &FgRingIdeal) -> bool {
        self.ring == other.ring && self.canonical.iter().all(|g| other.contains(g))
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.canonical.iter().map(|g| self.ring.format(g)).collect();
        if parts.is_empty() {
            "<0>".into()
        } else {
            format!("<{}>", parts.join(", "))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring.name(),
            "generators": self.generators.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>(),
            "canonical": self.canonical.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>(),
        })
    }

    /// The ideal of ℤ or `K[x]` whose image is this ideal, for ℤ/n and `K[x]/(g)`:
    /// the canonical generator, with the zero ideal lifted to the modulus.
    pub fn base_generator(&self) -> Option<(Pid, RingElement)> {
        let g = self.generator()?.clone();
        match &self.ring {
            RingDescriptor::IntegersMod(n) => {
                let d = if g.as_int().unwrap().is_zero() { RingElement::int(*n as i64) } else { g };
                Some((Pid::Integers, d))
            }
            RingDescriptor::PolyQuotient { ring, modulus } => {
                let d = if g.as_poly().unwrap().is_zero() { RingElement::Poly(modulus.clone()) } else { g };
                Some((Pid::UniPoly(ring.clone()), d))
            }
            RingDescriptor::Localized { base, .. } => Some((base.clone(), g.as_frac().unwrap().0.clone())),
            r => r.as_pid().map(|p| (p, g)),
        }
    }
}

fn same_ring(i: &FgRingIdeal, j: &FgRingIdeal) -> Result<()> {
    if i.ring != j.ring {
        return Err(Error::Domain(format!(
            "ideals of different rings: {} and {}",
            i.ring.name(),
            j.ring.name()
        )));
    }
    Ok(())
}

pub fn ideal_membership(f: &RingElement, i: &FgRingIdeal) -> Result<bool> {
    i.ring.check(f)?;
    Ok(i.contains(f))
}

pub fn ideal_sum(i: &FgRingIdeal, j: &FgRingIdeal) -> Result<FgRingIdeal> {
    same_ring(i, j)?;
    let mut gens = i.canonical.clone();
    gens.extend(j.canonical.iter().cloned());
    Ok(FgRingIdeal {
        ring: i.ring.clone(),
        generators: [i.generators.clone(), j.generators.clone()].concat(),
        canonical: canonical_form(&i.ring, &gens),
    })
}

pub fn ideal_product(i: &FgRingIdeal, j: &FgRingIdeal) -> Result<FgRingIdeal> {
    same_ring(i, j)?;
    let r = &i.ring;
    let prods: Vec<RingElement> = i
        .canonical
        .iter()
        .flat_map(|a| j.canonical.iter().map(move |b| r.mul(a, b)))
        .collect();
    let gens: Vec<RingElement> = i
        .generators
        .iter()
        .flat_map(|a| j.generators.iter().map(move |b| r.mul(a, b)))
        .collect();
    Ok(FgRingIdeal {
        ring: r.clone(),
        generators: gens,
        canonical: canonical_form(r, &prods),
    })
}

fn unsupported_multi(i: &FgRingIdeal, what: &str) -> Result<()> {
    if let RingDescriptor::MultiPoly(_) = i.ring {
        return Err(Error::Unsupported(format!("{what} in {}", i.ring.name())));
    }
    Ok(())
}

fn radical_element(pid: &Pid, a: &RingElement) -> Result<RingElement> {
    if pid.is_zero(a) {
        return Ok(pid.zero());
    }
    match (pid, a) {
        (Pid::Integers, RingElement::Int(n)) => {
            let v = n
                .to_u64()
                .map(|v| v.max(1))
                .ok_or_else(|| Error::Unsupported(format!("radical of {n}")))?;
            Ok(RingElement::Int(super::squarefree_u64(v).into()))
        }
        (Pid::Field(_), _) => Ok(pid.one()),
        (Pid::UniPoly(r), RingElement::Poly(p)) => Ok(RingElement::Poly(r.squarefree_part(p))),
        _ => unreachable!("element kind matches its PID"),
    }
}

/// √I for PIDs, ℤ/n, `K[x]/(g)` and localizations.
pub fn ring_radical(i: &FgRingIdeal) -> Result<FgRingIdeal> {
    unsupported_multi(i, "radical")?;
    if let RingDescriptor::Zero = i.ring {
        return Ok(i.clone());
    }
    let (pid, d) = i.base_generator().expect("single generator");
    let r = radical_element(&pid, &d)?;
    FgRingIdeal::principal(&i.ring, &from_base(&i.ring, r))
}

/// The image in `ring` of an element of the PID it is built from.
fn from_base(ring: &RingDescriptor, r: RingElement) -> RingElement {
    match ring {
        RingDescriptor::IntegersMod(n) => RingElement::Int(r.as_int().unwrap().mod_floor(&BigInt::from(*n))),
        RingDescriptor::PolyQuotient { ring, modulus } => {
            RingElement::Poly(ring.div_rem(r.as_poly().unwrap(), modulus).1)
        }
        RingDescriptor::Localized { base, .. } => ring.make_frac(r, base.one()),
        _ => r,
    }
}

/// `I ∩ J` for PIDs, ℤ/n, `K[x]/(g)` and localizations, through the lcm of lifted generators.
pub fn ideal_intersection(i: &FgRingIdeal, j: &FgRingIdeal) -> Result<FgRingIdeal> {
    same_ring(i, j)?;
    unsupported_multi(i, "intersection")?;
    if let RingDescriptor::Zero = i.ring {
        return Ok(i.clone());
    }
    let (pid, a) = i.base_generator().expect("single generator");
    let (_, b) = j.base_generator().expect("single generator");
    FgRingIdeal::principal(&i.ring, &from_base(&i.ring, pid.lcm(&a, &b)))
}

fn is_prime_power_element(pid: &Pid, d: &RingElement) -> Result<bool> {
    if pid.is_zero(d) || pid.is_unit(d) {
        return Ok(false);
    }
    let r = radical_element(pid, d)?;
    pid.is_prime_element(&r)
}

/// Prime test: the zero ideal of a domain, or a prime (irreducible) generator.
pub fn is_prime_ring_ideal(i: &FgRingIdeal) -> Result<bool> {
    unsupported_multi(i, "primality")?;
    if let RingDescriptor::Zero = i.ring {
        return Ok(false);
    }
    if i.is_unit() {
        return Ok(false);
    }
    let (pid, d) = i.base_generator().unwrap();
    if pid.is_zero(&d) {
        return Ok(true);
    }
    pid.is_prime_element(&d)
}

/// Primary test: the zero ideal of a domain, or a proper ideal whose generator
/// (lifted to ℤ or `K[x]` for quotient rings) is a power of a prime.
pub fn is_primary_ring_ideal(i: &FgRingIdeal) -> Result<bool> {
    unsupported_multi(i, "primary test")?;
    if let RingDescriptor::Zero = i.ring {
        return Ok(false);
    }
    if i.is_unit() {
        return Ok(false);
    }
    let (pid, d) = i.base_generator().unwrap();
    if pid.is_zero(&d) {
        return Ok(true);
    }
    is_prime_power_element(&pid, &d)
}

/// Default coefficient height for the catalogue of irreducibles over ℚ.
const RATIONAL_CATALOGUE_HEIGHT: i64 = 2;

/// The primes of `r` within `bound`: integers up to `bound`, polynomials up to degree `bound`.
pub fn spec_truncated(r: &RingDescriptor, bound: u64) -> Result<Vec<FgRingIdeal>> {
    spec_truncated_with_height(r, bound, RATIONAL_CATALOGUE_HEIGHT)
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| field::is_prime_u64(p)).collect()
}

fn pid_primes(pid: &Pid, bound: u64, height: i64) -> Result<Vec<RingElement>> {
    Ok(match pid {
        Pid::Integers => primes_up_to(bound).into_iter().map(|p| RingElement::int(p as i64)).collect(),
        Pid::Field(_) => Vec::new(),
        Pid::UniPoly(ring) => match ring.field {
            FieldKind::Prime(_) => ring
                .monic_irreducibles(bound as usize)?
                .into_iter()
                .map(RingElement::Poly)
                .collect(),
            FieldKind::Rationals => ring
                .rational_irreducible_catalogue(bound as usize, height)
                .into_iter()
                .map(RingElement::Poly)
                .collect(),
        },
    })
}

/// As [`spec_truncated`], with an explicit coefficient height for the ℚ catalogue.
pub fn spec_truncated_with_height(
    r: &RingDescriptor,
    bound: u64,
    height: i64,
) -> Result<Vec<FgRingIdeal>> {
    let principal = |a: RingElement| FgRingIdeal::principal(r, &a);
    let mut out: Vec<FgRingIdeal> = match r {
        RingDescriptor::Zero => Vec::new(),
        RingDescriptor::MultiPoly(_) => {
            return Err(Error::Unsupported(format!("prime enumeration in {}", r.name())))
        }
        RingDescriptor::IntegersMod(n) => prime_divisors_u64(*n)
            .into_iter()
            .map(|p| principal(RingElement::int(p as i64)))
            .collect::<Result<_>>()?,
        RingDescriptor::PolyQuotient { ring, modulus } => ring
            .irreducible_factors(modulus)?
            .into_iter()
            .map(|f| principal(RingElement::Poly(f)))
            .collect::<Result<_>>()?,
        RingDescriptor::Localized { base, set } => {
            let mut v = vec![FgRingIdeal::zero(r)];
            if !r.is_domain() {
                v.clear();
            }
            for p in pid_primes(base, bound, height)? {
                let survives = match set {
                    LocalSet::AllNonzero => false,
                    LocalSet::AvoidingPrime(q) => base.associated(&p, q),
                    LocalSet::PowersOf(f) => !base.is_zero(f) && !base.divides(&p, f),
                };
                if survives {
                    v.push(principal(r.make_frac(p, base.one()))?);
                }
            }
            v
        }
        _ => {
            let pid = r.as_pid().unwrap();
            let mut v = vec![FgRingIdeal::zero(r)];
            for p in pid_primes(&pid, bound, height)? {
                v.push(principal(p)?);
            }
            v
        }
    };
    out.dedup();
    Ok(out)
}

/// Convenience for tests and examples: `⟨n⟩ ⊂ ℤ`.
pub fn int_ideal(n: i64) -> FgRingIdeal {
    FgRingIdeal::principal(&RingDescriptor::Integers, &RingElement::int(n)).unwrap()
}

impl FgRingIdeal {
    /// `1 ∈ I` as a quick predicate for localization code.
    pub fn contains_one(&self) -> bool {
        self.contains(&self.ring.one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{MonomialOrder, UniPolyRing};

    fn qx() -> RingDescriptor {
        RingDescriptor::uni_poly(FieldKind::Rationals, "x")
    }

    fn parse(r: &RingDescriptor, s: &str) -> RingElement {
        r.parse_element(s).unwrap()
    }

    #[test]
    fn integer_canonical_forms() {
        let z = RingDescriptor::Integers;
        let i = ideal_canonicalize(&z, &[RingElement::int(4), RingElement::int(6)]).unwrap();
        assert_eq!(i, int_ideal(2));
        assert_eq!(int_ideal(-6), int_ideal(6));
        assert!(int_ideal(0).is_zero());
        assert!(ideal_membership(&RingElement::int(10), &int_ideal(2)).unwrap());
    }

    #[test]
    fn polynomial_gcd_canonical_form() {
        let r = qx();
        let i = ideal_canonicalize(&r, &[parse(&r, "x^2 - 1"), parse(&r, "x^3 - 1")]).unwrap();
        assert_eq!(i.canonical(), &[parse(&r, "x - 1")]);
        let one = ideal_canonicalize(&r, &[parse(&r, "x"), parse(&r, "x + 1")]).unwrap();
        assert!(ideal_membership(&r.one(), &one).unwrap());
    }

    #[test]
    fn multivariate_membership() {
        let r = RingDescriptor::multi_poly(&["x", "y"], MonomialOrder::Grevlex);
        let i = ideal_canonicalize(&r, &[parse(&r, "x^2 + y^2 - 1"), parse(&r, "x - y")]).unwrap();
        assert!(!ideal_membership(&parse(&r, "x + y"), &i).unwrap());
        assert!(ideal_membership(&parse(&r, "2*y^2 - 1"), &i).unwrap());
        let xy = ideal_product(
            &FgRingIdeal::principal(&r, &parse(&r, "x")).unwrap(),
            &FgRingIdeal::principal(&r, &parse(&r, "y")).unwrap(),
        )
        .unwrap();
        assert_eq!(xy.canonical(), &[parse(&r, "x*y")]);
        assert!(FgRingIdeal::zero(&r).canonical().is_empty());
    }

    #[test]
    fn sums_and_products() {
        assert_eq!(ideal_sum(&int_ideal(4), &int_ideal(6)).unwrap(), int_ideal(2));
        assert_eq!(ideal_product(&int_ideal(4), &int_ideal(6)).unwrap(), int_ideal(24));
        let i = int_ideal(9);
        assert_eq!(ideal_sum(&i, &int_ideal(0)).unwrap(), i);
        assert_eq!(ideal_product(&i, &int_ideal(1)).unwrap(), i);
        let mixed = ideal_sum(&i, &FgRingIdeal::zero(&qx()));
        assert!(matches!(mixed, Err(Error::Domain(_))));
    }

    #[test]
    fn radicals() {
        assert_eq!(ring_radical(&int_ideal(12)).unwrap(), int_ideal(6));
        assert_eq!(ring_radical(&int_ideal(1)).unwrap(), int_ideal(1));
        let r = qx();
        let x2 = FgRingIdeal::principal(&r, &parse(&r, "x^2")).unwrap();
        assert_eq!(ring_radical(&x2).unwrap().canonical(), &[parse(&r, "x")]);
        let m = RingDescriptor::multi_poly(&["x", "y"], MonomialOrder::Grevlex);
        assert!(matches!(ring_radical(&FgRingIdeal::zero(&m)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn primary_and_prime() {
        assert!(is_primary_ring_ideal(&int_ideal(8)).unwrap());
        assert!(!is_primary_ring_ideal(&int_ideal(12)).unwrap());
        assert!(is_primary_ring_ideal(&int_ideal(0)).unwrap());
        assert!(is_prime_ring_ideal(&int_ideal(0)).unwrap());
        assert!(!is_prime_ring_ideal(&int_ideal(9)).unwrap());
        assert!(!is_primary_ring_ideal(&int_ideal(1)).unwrap());
        let z12 = RingDescriptor::IntegersMod(12);
        let four = FgRingIdeal::principal(&z12, &RingElement::int(4)).unwrap();
        assert!(is_primary_ring_ideal(&four).unwrap());
        assert!(!is_prime_ring_ideal(&four).unwrap());
        assert!(!is_primary_ring_ideal(&FgRingIdeal::zero(&z12)).unwrap());
        let z8 = RingDescriptor::IntegersMod(8);
        assert!(is_primary_ring_ideal(&FgRingIdeal::zero(&z8)).unwrap());
    }

    #[test]
    fn modular_canonical_forms() {
        let z12 = RingDescriptor::IntegersMod(12);
        let i = FgRingIdeal::principal(&z12, &RingElement::int(8)).unwrap();
        assert_eq!(i.canonical(), &[RingElement::int(4)]);
        let zero = FgRingIdeal::principal(&z12, &RingElement::int(0)).unwrap();
        assert!(zero.is_zero());
        assert_eq!(ring_radical(&zero).unwrap().canonical(), &[RingElement::int(6)]);
    }

    #[test]
    fn truncated_spectra() {
        let z = spec_truncated(&RingDescriptor::Integers, 10).unwrap();
        let gens: Vec<_> = z.iter().map(|i| i.format()).collect();
        assert_eq!(gens, ["<0>", "<2>", "<3>", "<5>", "<7>"]);
        let f2 = RingDescriptor::uni_poly(FieldKind::Prime(2), "x");
        let pts: Vec<_> = spec_truncated(&f2, 2).unwrap().iter().map(|i| i.format()).collect();
        assert_eq!(pts, ["<0>", "<x>", "<x + 1>", "<x^2 + x + 1>"]);
        let z12: Vec<_> = spec_truncated(&RingDescriptor::IntegersMod(12), 0)
            .unwrap()
            .iter()
            .map(|i| i.format())
            .collect();
        assert_eq!(z12, ["<2>", "<3>"]);
    }

    #[test]
    fn localized_ideals() {
        let ring = UniPolyRing::new(FieldKind::Rationals, "x");
        let base = Pid::UniPoly(ring.clone());
        let r = RingDescriptor::localized(base, LocalSet::PowersOf(RingElement::Poly(ring.x()))).unwrap();
        let f = parse(&r, "x^3 - x^2");
        let i = FgRingIdeal::principal(&r, &f).unwrap();
        assert_eq!(i, FgRingIdeal::principal(&r, &parse(&r, "x - 1")).unwrap());
        let zp = RingDescriptor::localized(Pid::Integers, LocalSet::AvoidingPrime(RingElement::int(3))).unwrap();
        let i = FgRingIdeal::principal(&zp, &parse(&zp, "18")).unwrap();
        assert_eq!(i, FgRingIdeal::principal(&zp, &parse(&zp, "9")).unwrap());
        assert!(is_primary_ring_ideal(&i).unwrap());
        let pts = spec_truncated(&zp, 20).unwrap();
        assert_eq!(pts.len(), 2);
    }
}
