use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Deserialize;

use super::fgid::{u_r, FgIdSemiring};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{EuclideanDomain, FgRingIdeal, Pid, RingDescriptor, RingElement};
use crate::semiring::{natural_leq, FiniteSemiring, Frac, NatGcd, PidFractions, Semiring};

/// Codomains of catalogued valuations.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    FgId(FgIdSemiring),
    Boolean,
    NatGcd,
    Finite(FiniteSemiring),
    /// A localization of `fgId(D)` for a PID `D`.
    Fractions(PidFractions<Pid>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetElem {
    Ideal(FgRingIdeal),
    Bool(bool),
    Nat(BigUint),
    Index(usize),
    Frac(Frac<RingElement>),
}

impl Target {
    pub fn format(&self, a: &TargetElem) -> String {
        match (self, a) {
            (_, TargetElem::Ideal(i)) => i.format(),
            (_, TargetElem::Bool(b)) => u8::from(*b).to_string(),
            (_, TargetElem::Nat(n)) => n.to_string(),
            (Target::Finite(s), TargetElem::Index(i)) if *i < s.size() => s.label(*i).to_string(),
            (_, TargetElem::Index(i)) => format!("#{i}"),
            (Target::Fractions(f), TargetElem::Frac(x)) => f.format(x),
            (_, TargetElem::Frac(x)) => format!("{:?}/{:?}", x.num, x.den),
        }
    }

    /// Every element, when the carrier is finite.
    pub fn elements(&self) -> Option<Vec<TargetElem>> {
        match self {
            Target::Boolean => Some(vec![TargetElem::Bool(false), TargetElem::Bool(true)]),
            Target::Finite(s) => Some(s.elements().map(TargetElem::Index).collect()),
            _ => None,
        }
    }
}

fn mismatch(t: &Target, a: &TargetElem) -> ! {
    panic!("{a:?} is not an element of {}", t.name())
}

impl Semiring for Target {
    type Elem = TargetElem;

    fn zero(&self) -> TargetElem {
        match self {
            Target::FgId(s) => TargetElem::Ideal(s.zero()),
            Target::Boolean => TargetElem::Bool(false),
            Target::NatGcd => TargetElem::Nat(BigUint::zero()),
            Target::Finite(s) => TargetElem::Index(s.zero_index()),
            Target::Fractions(f) => TargetElem::Frac(f.zero()),
        }
    }
    fn one(&self) -> TargetElem {
        match self {
            Target::FgId(s) => TargetElem::Ideal(s.one()),
            Target::Boolean => TargetElem::Bool(true),
            Target::NatGcd => TargetElem::Nat(NatGcd.one()),
            Target::Finite(s) => TargetElem::Index(s.one_index()),
            Target::Fractions(f) => TargetElem::Frac(f.one()),
        }
    }
    fn add(&self, a: &TargetElem, b: &TargetElem) -> TargetElem {
        use TargetElem as E;
        match (self, a, b) {
            (Target::FgId(s), E::Ideal(x), E::Ideal(y)) => E::Ideal(s.add(x, y)),
            (Target::Boolean, E::Bool(x), E::Bool(y)) => E::Bool(*x || *y),
            (Target::NatGcd, E::Nat(x), E::Nat(y)) => E::Nat(NatGcd.add(x, y)),
            (Target::Finite(s), E::Index(x), E::Index(y)) => E::Index(s.plus(*x, *y)),
            (Target::Fractions(f), E::Frac(x), E::Frac(y)) => E::Frac(f.add(x, y)),
            _ => mismatch(self, if self.contains(a) { b } else { a }),
        }
    }
    fn mul(&self, a: &TargetElem, b: &TargetElem) -> TargetElem {
        use TargetElem as E;
        match (self, a, b) {
            (Target::FgId(s), E::Ideal(x), E::Ideal(y)) => E::Ideal(s.mul(x, y)),
            (Target::Boolean, E::Bool(x), E::Bool(y)) => E::Bool(*x && *y),
            (Target::NatGcd, E::Nat(x), E::Nat(y)) => E::Nat(NatGcd.mul(x, y)),
            (Target::Finite(s), E::Index(x), E::Index(y)) => E::Index(s.times(*x, *y)),
            (Target::Fractions(f), E::Frac(x), E::Frac(y)) => E::Frac(f.mul(x, y)),
            _ => mismatch(self, if self.contains(a) { b } else { a }),
        }
    }
    fn contains(&self, a: &TargetElem) -> bool {
        match (self, a) {
            (Target::FgId(s), TargetElem::Ideal(i)) => s.contains(i),
            (Target::Boolean, TargetElem::Bool(_)) | (Target::NatGcd, TargetElem::Nat(_)) => true,
            (Target::Finite(s), TargetElem::Index(i)) => *i < s.size(),
            (Target::Fractions(f), TargetElem::Frac(x)) => f.contains(x),
            _ => false,
        }
    }
    fn name(&self) -> String {
        match self {
            Target::FgId(s) => s.name(),
            Target::Boolean => "B".into(),
            Target::NatGcd => NatGcd.name(),
            Target::Finite(_) => "finite".into(),
            Target::Fractions(f) => f.name(),
        }
    }
}

/// How a catalogued valuation computes its values.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueMap {
    /// `a ↦ ⟨a⟩`.
    Universal,
    /// `0 ↦ 0`, everything else `↦ 1`.
    CollapseToBoolean,
    /// `n ↦ |n|` on ℤ, valued in ℕ^gcd.
    NatGcdAbs,
    /// An explicit table on a finite ring.
    Table(Vec<(RingElement, usize)>),
    /// `a/b ↦ ⟨a⟩/⟨b⟩` from a localization of a PID (or the PID itself) to fractions of ideals.
    IdealQuotient,
}

/// A map from a ring to an idempotent semiring, to be checked against the seminorm axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationData {
    pub name: String,
    pub source: RingDescriptor,
    pub target: Target,
    pub map: ValueMap,
}

#[derive(Deserialize)]
struct TableJson {
    ring: String,
    target: serde_json::Value,
    values: BTreeMap<String, String>,
}

impl ValuationData {
    pub fn universal(ring: &RingDescriptor) -> Self {
        ValuationData {
            name: "u_R".into(),
            source: ring.clone(),
            target: Target::FgId(FgIdSemiring::new(ring.clone())),
            map: ValueMap::Universal,
        }
    }

    pub fn collapse_to_boolean(ring: &RingDescriptor) -> Self {
        ValuationData {
            name: "collapse_to_boolean".into(),
            source: ring.clone(),
            target: Target::Boolean,
            map: ValueMap::CollapseToBoolean,
        }
    }

    pub fn nat_gcd_abs() -> Self {
        ValuationData {
            name: "nat_gcd_abs".into(),
            source: RingDescriptor::Integers,
            target: Target::NatGcd,
            map: ValueMap::NatGcdAbs,
        }
    }

    /// A table valuation on a finite ring; every element must be assigned.
    pub fn table(ring: &RingDescriptor, target: FiniteSemiring, values: Vec<(RingElement, usize)>) -> Result<Self> {
        let elems = ring
            .elements()
            .ok_or_else(|| Error::Domain(format!("table valuation on the infinite ring {}", ring.name())))?;
        for e in &elems {
            if !values.iter().any(|(a, _)| a == e) {
                return Err(Error::Structural(format!("no value for {}", ring.format(e))));
            }
        }
        for (a, i) in &values {
            ring.check(a)?;
            if *i >= target.size() {
                return Err(Error::Structural(format!("value index {i} out of range")));
            }
        }
        Ok(ValuationData {
            name: "table".into(),
            source: ring.clone(),
            target: Target::Finite(target),
            map: ValueMap::Table(values),
        })
    }

    /// `{"ring": "Z/4", "target": <semiring table>, "values": {"0": "label", ...}}`.
    pub fn table_from_json(text: &str) -> Result<Self> {
        let raw: TableJson = serde_json::from_str(text).map_err(|e| Error::Structural(e.to_string()))?;
        let ring = RingDescriptor::parse(&raw.ring)?;
        let target = FiniteSemiring::from_json_str(&raw.target.to_string())?;
        let values = raw
            .values
            .iter()
            .map(|(k, v)| {
                let a = ring.parse_element(k)?;
                let i = target
                    .index_of(v)
                    .ok_or_else(|| Error::Structural(format!("unknown label {v}")))?;
                Ok((a, i))
            })
            .collect::<Result<Vec<_>>>()?;
        ValuationData::table(&ring, target, values)
    }

    /// Looks up a catalogue entry by its configured name.
    pub fn by_name(name: &str, ring: &RingDescriptor) -> Result<Self> {
        match name {
            "u_R" => Ok(ValuationData::universal(ring)),
            "collapse_to_boolean" => Ok(ValuationData::collapse_to_boolean(ring)),
            "nat_gcd_abs" if *ring == RingDescriptor::Integers => Ok(ValuationData::nat_gcd_abs()),
            _ => Err(Error::Domain(format!("no catalogued valuation {name} on {}", ring.name()))),
        }
    }

    pub fn eval(&self, a: &RingElement) -> Result<TargetElem> {
        self.source.check(a)?;
        Ok(match &self.map {
            ValueMap::Universal => TargetElem::Ideal(u_r(&self.source, a)?),
            ValueMap::CollapseToBoolean => TargetElem::Bool(!self.source.is_zero(a)),
            ValueMap::NatGcdAbs => {
                let n = a.as_int().expect("integer");
                TargetElem::Nat(n.abs().to_biguint().expect("nonnegative"))
            }
            ValueMap::Table(t) => TargetElem::Index(
                t.iter()
                    .find(|(x, _)| x == a)
                    .map(|(_, i)| *i)
                    .expect("table covers the ring"),
            ),
            ValueMap::IdealQuotient => {
                let Target::Fractions(f) = &self.target else {
                    return Err(Error::Domain("ideal quotients need a fraction target".into()));
                };
                let (num, den) = match a.as_frac() {
                    Some((n, d)) => (n.clone(), d.clone()),
                    None => (a.clone(), f.domain.one()),
                };
                let d = &f.domain;
                TargetElem::Frac(f.fraction(&d.normalize(&num), &d.normalize(&den))?)
            }
        })
    }

    /// Whether every value is `≤ 1`; complete for finite sources, automatic for the other entries.
    pub fn is_integral(&self) -> Result<bool> {
        match &self.map {
            ValueMap::Table(t) => {
                let one = self.target.one();
                for (_, i) in t {
                    if !natural_leq(&self.target, &TargetElem::Index(*i), &one)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ValueMap::IdealQuotient => Ok(!matches!(self.source, RingDescriptor::Localized { .. })),
            _ => Ok(true),
        }
    }
}

/// Checks the seminorm axioms on all pairs of samples.
///
/// Unit: `v(0) = 0`, `v(1) = 1`; sign: `v(−1) = 1`; submultiplicativity
/// `v(ab) ≤ v(a)v(b)`; subadditivity `v(a+b) ≤ v(a) + v(b)`. Whether `v` is
/// multiplicative and whether it is a norm are reported in `details`.
pub fn check_seminorm(v: &ValuationData, samples: &[RingElement]) -> Result<Report> {
    let r = &v.source;
    let t = &v.target;
    let mut report = Report::new("seminorm-axioms", format!("{}: {} -> {}", v.name, r.name(), t.name()));
    let values: Vec<TargetElem> = samples.iter().map(|a| v.eval(a)).collect::<Result<_>>()?;
    let idem = values.iter().all(|x| t.add(x, x) == *x);
    report.check(idem, "idempotent-target", || "a value with x + x != x".into());
    let fmt = |x: &RingElement| r.format(x);
    let v0 = v.eval(&r.zero())?;
    report.check(v0 == t.zero(), "unit", || format!("v(0) = {}", t.format(&v0)));
    let v1 = v.eval(&r.one())?;
    report.check(v1 == t.one(), "unit", || format!("v(1) = {}", t.format(&v1)));
    let vm1 = v.eval(&r.neg(&r.one()))?;
    report.check(vm1 == t.one(), "sign", || format!("v(-1) = {}", t.format(&vm1)));
    let mut multiplicative = true;
    let mut norm = true;
    for (a, va) in samples.iter().zip(&values) {
        if *va == t.zero() && !r.is_zero(a) {
            norm = false;
        }
        for (b, vb) in samples.iter().zip(&values) {
            let vab = v.eval(&r.mul(a, b))?;
            let prod = t.mul(va, vb);
            report.check(natural_leq(t, &vab, &prod)?, "submultiplicativity", || {
                format!("a = {}, b = {}", fmt(a), fmt(b))
            });
            multiplicative &= vab == prod;
            let vsum = v.eval(&r.add(a, b))?;
            report.check(natural_leq(t, &vsum, &t.add(va, vb))?, "subadditivity", || {
                format!("a = {}, b = {}", fmt(a), fmt(b))
            });
        }
    }
    report.note("multiplicative", multiplicative);
    report.note("norm", norm);
    report.note("valuation", report.pass && multiplicative);
    Ok(report)
}

/// The semiring morphism `v̂: fgId(R) → T`, `Σ⟨aᵢ⟩ ↦ Σ v(aᵢ)`.
#[derive(Debug, Clone)]
pub struct InducedMorphism {
    v: ValuationData,
}

/// `v̂` for an integral valuation.
pub fn induced_vhat(v: &ValuationData) -> Result<InducedMorphism> {
    if !v.is_integral()? {
        return Err(Error::Domain(format!("{} is not integral: some value exceeds 1", v.name)));
    }
    Ok(InducedMorphism { v: v.clone() })
}

impl InducedMorphism {
    pub fn valuation(&self) -> &ValuationData {
        &self.v
    }

    /// Evaluates on an explicit generating set.
    pub fn apply_presentation(&self, gens: &[RingElement]) -> Result<TargetElem> {
        let t = &self.v.target;
        gens.iter().try_fold(t.zero(), |acc, g| Ok(t.add(&acc, &self.v.eval(g)?)))
    }

    /// Evaluates on the presentation the ideal was built from, and on its
    /// canonical generators; the two must agree.
    pub fn apply(&self, i: &FgRingIdeal) -> Result<TargetElem> {
        let given = self.apply_presentation(i.generators())?;
        let canonical = self.apply_presentation(i.canonical())?;
        if given != canonical {
            return Err(Error::Domain(format!(
                "v-hat depends on the presentation of {}: {} vs {}",
                i.format(),
                self.v.target.format(&given),
                self.v.target.format(&canonical)
            )));
        }
        Ok(canonical)
    }
}

/// Another generating set of `i`: unit multiples of its generators plus random combinations.
pub fn random_presentation<R: Rng>(i: &FgRingIdeal, rng: &mut R) -> Vec<RingElement> {
    let r = i.ring();
    let gens = i.canonical();
    let mut out: Vec<RingElement> = gens
        .iter()
        .map(|g| {
            let u = if rng.gen_bool(0.5) { r.neg(&r.one()) } else { r.one() };
            r.mul(&u, g)
        })
        .collect();
    for _ in 0..rng.gen_range(0..3) {
        let combo = gens
            .iter()
            .fold(r.zero(), |acc, g| r.add(&acc, &r.mul(&r.random(rng, 3), g)));
        out.push(combo);
    }
    let k = rng.gen_range(0..=out.len());
    out.rotate_left(k);
    out
}

/// Universal property instance: `v = v̂∘u_R`, `v̂` is a semiring morphism, and every
/// candidate morphism that agrees with `v` on principal ideals coincides with `v̂`.
///
/// Candidates are the additive extensions of `v` along other generating sets;
/// any morphism agreeing on principal ideals is one of these, since every
/// finitely generated ideal is a finite sum of principal ones.
pub fn universal_property_check<R: Rng>(
    v: &ValuationData,
    samples: &[RingElement],
    rng: &mut R,
) -> Result<Report> {
    let vhat = induced_vhat(v)?;
    let r = &v.source;
    let t = &v.target;
    let fgid = FgIdSemiring::new(r.clone());
    let mut report = Report::new("universal-property", format!("{}: {}", v.name, r.name()));
    for a in samples {
        let direct = v.eval(a)?;
        let factored = vhat.apply(&u_r(r, a)?)?;
        report.check(direct == factored, "factorization", || {
            format!("a = {}: {} vs {}", r.format(a), t.format(&direct), t.format(&factored))
        });
    }
    report.check(vhat.apply(&fgid.zero())? == t.zero(), "morphism-zero", String::new);
    report.check(vhat.apply(&fgid.one())? == t.one(), "morphism-one", String::new);
    let ideals: Vec<FgRingIdeal> = samples
        .chunks(2)
        .map(|c| crate::ring::ideal_canonicalize(r, c))
        .collect::<Result<_>>()?;
    for pair in ideals.windows(2) {
        let (i, j) = (&pair[0], &pair[1]);
        let (vi, vj) = (vhat.apply(i)?, vhat.apply(j)?);
        report.check(vhat.apply(&fgid.add(i, j))? == t.add(&vi, &vj), "morphism-sum", || {
            format!("{} + {}", i.format(), j.format())
        });
        report.check(vhat.apply(&fgid.mul(i, j))? == t.mul(&vi, &vj), "morphism-product", || {
            format!("{} * {}", i.format(), j.format())
        });
    }
    let mut candidates = 0usize;
    for i in &ideals {
        let expected = vhat.apply(i)?;
        for _ in 0..3 {
            let gens = random_presentation(i, rng);
            let got = vhat.apply_presentation(&gens)?;
            candidates += 1;
            report.check(got == expected, "uniqueness", || {
                format!("{} on another presentation gives {}", i.format(), t.format(&got))
            });
        }
    }
    report.note("candidates", candidates);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, FieldKind};
    use crate::semiring::catalogue::chain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(range: std::ops::RangeInclusive<i64>) -> Vec<RingElement> {
        range.map(RingElement::int).collect()
    }

    #[test]
    fn universal_valuation_is_a_multiplicative_norm() {
        let report = check_seminorm(&ValuationData::universal(&RingDescriptor::Integers), &ints(-30..=30)).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["multiplicative"], true);
        assert_eq!(report.details["norm"], true);
    }

    #[test]
    fn boolean_collapse_is_a_valuation() {
        let v = ValuationData::collapse_to_boolean(&RingDescriptor::Integers);
        let report = check_seminorm(&v, &ints(-20..=20)).unwrap();
        assert!(report.pass);
        assert_eq!(report.details["valuation"], true);
    }

    #[test]
    fn sign_violation_is_named() {
        let z3 = RingDescriptor::integers_mod(3).unwrap();
        let table = vec![(RingElement::int(0), 0), (RingElement::int(1), 2), (RingElement::int(2), 1)];
        let v = ValuationData::table(&z3, chain(3), table).unwrap();
        let report = check_seminorm(&v, &z3.elements().unwrap()).unwrap();
        assert!(!report.pass);
        assert!(report.witnesses.iter().any(|w| w.check == "sign"));
    }

    #[test]
    fn vhat_examples() {
        let id = induced_vhat(&ValuationData::universal(&RingDescriptor::Integers)).unwrap();
        assert_eq!(id.apply(&int_ideal(12)).unwrap(), TargetElem::Ideal(int_ideal(12)));
        let collapse = induced_vhat(&ValuationData::collapse_to_boolean(&RingDescriptor::Integers)).unwrap();
        assert_eq!(collapse.apply(&int_ideal(0)).unwrap(), TargetElem::Bool(false));
        assert_eq!(collapse.apply(&int_ideal(7)).unwrap(), TargetElem::Bool(true));
        let nat = induced_vhat(&ValuationData::nat_gcd_abs()).unwrap();
        let four_six = crate::ring::ideal_canonicalize(&RingDescriptor::Integers, &ints(4..=4).into_iter().chain(ints(6..=6)).collect::<Vec<_>>()).unwrap();
        assert_eq!(nat.apply(&four_six).unwrap(), nat.apply(&int_ideal(2)).unwrap());
        assert_eq!(nat.apply(&four_six).unwrap(), TargetElem::Nat(BigUint::from(2u32)));
    }

    #[test]
    fn non_integral_is_rejected() {
        // max-plus values {-inf, 0, 1}: 0 is the unit and 1 lies above it
        let labels = vec!["-inf".to_string(), "0".to_string(), "1".to_string()];
        let t = FiniteSemiring::from_fns(
            labels,
            |a, b| a.max(b),
            |a, b| if a == 0 || b == 0 { 0 } else { (a + b - 1).min(2) },
            0,
            1,
        )
        .unwrap();
        let z2 = RingDescriptor::integers_mod(2).unwrap();
        let v = ValuationData::table(&z2, t, vec![(RingElement::int(0), 0), (RingElement::int(1), 2)]).unwrap();
        assert!(matches!(induced_vhat(&v), Err(Error::Domain(_))));
    }

    #[test]
    fn table_from_json() {
        let text = r#"{"ring": "Z/3", "target": {"carrier": ["0", "1"], "add": [["0","1"],["1","1"]], "mul": [["0","0"],["0","1"]], "zero": "0", "one": "1"}, "values": {"0": "0", "1": "1", "2": "1"}}"#;
        let v = ValuationData::table_from_json(text).unwrap();
        let report = check_seminorm(&v, &v.source.elements().unwrap()).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert!(ValuationData::table_from_json(r#"{"ring": "Z/3"}"#).is_err());
    }

    #[test]
    fn universal_property_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
        let catalogue = [
            ValuationData::universal(&RingDescriptor::Integers),
            ValuationData::collapse_to_boolean(&RingDescriptor::Integers),
            ValuationData::nat_gcd_abs(),
            ValuationData::universal(&qx),
        ];
        for v in &catalogue {
            let samples: Vec<_> = (0..40).map(|_| v.source.random(&mut rng, 30)).collect();
            let report = universal_property_check(v, &samples, &mut rng).unwrap();
            assert!(report.pass, "{}: {:?}", v.name, report.witnesses);
        }
    }
}
