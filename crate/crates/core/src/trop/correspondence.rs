use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde_json::{json, Value};

use super::fgid::{u_r, FgIdSemiring};
use super::fgmod::Submodule;
use super::valuation::{check_seminorm, induced_vhat, Target, TargetElem, ValuationData};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{ideal_product, ideal_sum, FgRingIdeal, FieldKind, RingDescriptor, RingElement};
use crate::semiring::Semiring;

/// A subtractive ideal of `fgId(R)`, carried by the ring ideal it corresponds to.
///
/// Its members are the finitely generated ideals contained in that ring ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KIdealHandle {
    ideal: FgRingIdeal,
}

impl KIdealHandle {
    pub fn ring(&self) -> &RingDescriptor {
        self.ideal.ring()
    }

    pub fn ring_ideal(&self) -> &FgRingIdeal {
        &self.ideal
    }

    pub fn contains(&self, beta: &FgRingIdeal) -> bool {
        beta.ring() == self.ideal.ring() && beta.is_subset(&self.ideal)
    }

    /// Whether every member of `self` is a member of `other`; tested on the generators.
    pub fn is_subset(&self, other: &KIdealHandle) -> bool {
        self.ideal
            .canonical()
            .iter()
            .all(|g| u_r(self.ring(), g).is_ok_and(|p| other.contains(&p)))
    }

    pub fn format(&self) -> String {
        format!("h{}", self.ideal.format())
    }

    pub fn to_json(&self) -> Value {
        self.ideal.to_json()
    }
}

/// `L ↦ ⟨u_R(L)⟩_k`.
pub fn correspondence_forward(l: &FgRingIdeal) -> KIdealHandle {
    KIdealHandle {
        ideal: l.canonical_presentation(),
    }
}

/// `h ↦ u_R⁻¹(h)`.
pub fn correspondence_backward(h: &KIdealHandle) -> FgRingIdeal {
    h.ideal.clone()
}

pub fn handle_sum(h1: &KIdealHandle, h2: &KIdealHandle) -> Result<KIdealHandle> {
    Ok(correspondence_forward(&ideal_sum(&h1.ideal, &h2.ideal)?))
}

/// `h1 × h2 = ⟨h1·h2⟩_k`, computed through the ring-ideal product.
pub fn kideal_product(h1: &KIdealHandle, h2: &KIdealHandle) -> Result<KIdealHandle> {
    Ok(correspondence_forward(&ideal_product(&h1.ideal, &h2.ideal)?))
}

/// A random member of a handle: `⟨r₁g₁, …⟩` for random multiples of its generators.
pub fn random_member<R: Rng>(h: &KIdealHandle, rng: &mut R, size: i64) -> Result<FgRingIdeal> {
    let r = h.ring();
    let mut gens: Vec<RingElement> = Vec::new();
    for g in h.ideal.canonical() {
        if rng.gen_bool(0.7) {
            gens.push(r.mul(&r.random(rng, size), g));
        }
    }
    crate::ring::ideal_canonicalize(r, &gens)
}

/// Cross-checks [`kideal_product`] against the direct definition on samples.
///
/// Every sum `Σ αᵢβᵢ` with `αᵢ ∈ h1`, `βᵢ ∈ h2` must lie in the product, and
/// sampled members of the product must lie below such a sum.
pub fn kideal_product_cross_check<R: Rng>(
    h1: &KIdealHandle,
    h2: &KIdealHandle,
    rng: &mut R,
    samples: usize,
) -> Result<Report> {
    let s = FgIdSemiring::new(h1.ring().clone());
    let prod = kideal_product(h1, h2)?;
    let mut report = Report::new("kideal-product", s.name());
    for _ in 0..samples {
        let terms = rng.gen_range(1..=3);
        let mut sum = s.zero();
        for _ in 0..terms {
            let a = random_member(h1, rng, 4)?;
            let b = random_member(h2, rng, 4)?;
            sum = s.add(&sum, &s.mul(&a, &b));
        }
        report.check(prod.contains(&sum), "sums-of-products-inside", || {
            format!("{} not in {}", sum.format(), prod.format())
        });
        let member = random_member(&prod, rng, 4)?;
        // the sum over generator pairs dominates every member
        let mut bound = s.zero();
        for g in h1.ideal.canonical() {
            for k in h2.ideal.canonical() {
                bound = s.add(&bound, &s.mul(&u_r(s.ring(), g)?, &u_r(s.ring(), k)?));
            }
        }
        report.check(member.is_subset(&bound), "members-below-a-sum", || {
            format!("{} is not below {}", member.format(), bound.format())
        });
    }
    Ok(report)
}

/// A subtractive subsemimodule of `fgMod(Rⁿ)`, carried by its submodule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubmoduleHandle {
    module: Submodule,
}

impl SubmoduleHandle {
    pub fn submodule(&self) -> &Submodule {
        &self.module
    }

    pub fn contains(&self, nu: &Submodule) -> bool {
        nu.is_subset(&self.module)
    }

    pub fn is_subset(&self, other: &SubmoduleHandle) -> bool {
        self.module.rows().iter().all(|r| {
            Submodule::new(self.module.pid(), self.module.rank(), &[r.clone()])
                .is_ok_and(|c| other.contains(&c))
        })
    }
}

pub fn module_forward(l: &Submodule) -> SubmoduleHandle {
    SubmoduleHandle { module: l.clone() }
}

pub fn module_backward(h: &SubmoduleHandle) -> Submodule {
    h.module.clone()
}

/// Round trips, membership consistency and order preservation for ideal fixtures.
///
/// `probes` are ring elements used to compare `a ∈ L` with `u_R(a) ∈ forward(L)`.
pub fn correspondence_check(ideals: &[FgRingIdeal], probes: &[RingElement]) -> Result<Report> {
    let ring = match ideals.first() {
        Some(i) => i.ring().clone(),
        None => return Ok(Report::new("correspondence", "empty")),
    };
    let s = FgIdSemiring::new(ring.clone());
    let mut report = Report::new("correspondence", s.name());
    let handles: Vec<KIdealHandle> = ideals.iter().map(correspondence_forward).collect();
    for (l, h) in ideals.iter().zip(&handles) {
        let back = correspondence_backward(h);
        report.check(back == *l, "backward-forward", || {
            format!("{} came back as {}", l.format(), back.format())
        });
        let again = correspondence_forward(&back);
        report.check(again == *h, "forward-backward", || h.format());
        for a in probes {
            let ua = u_r(&ring, a)?;
            let (ring_side, semiring_side) = (l.contains(a), h.contains(&ua));
            report.check(ring_side == semiring_side, "preimage", || {
                format!("{} in {}: ring {ring_side}, handle {semiring_side}", ring.format(a), l.format())
            });
            if semiring_side {
                for b in probes {
                    let ub = u_r(&ring, b)?;
                    let below = s.add(&ub, &ua) == ua;
                    report.check(!below || h.contains(&ub), "down-closed", || {
                        format!("{} <= {} in {}", ub.format(), ua.format(), h.format())
                    });
                    report.check(h.contains(&s.mul(&ub, &ua)), "absorbs", || {
                        format!("{} * {}", ub.format(), ua.format())
                    });
                }
            }
        }
    }
    for (l1, h1) in ideals.iter().zip(&handles) {
        for (l2, h2) in ideals.iter().zip(&handles) {
            let (ring_side, semiring_side) = (l1.is_subset(l2), h1.is_subset(h2));
            report.check(ring_side == semiring_side, "order", || {
                format!("{} <= {}: ring {ring_side}, handles {semiring_side}", l1.format(), l2.format())
            });
        }
    }
    Ok(report)
}

/// The module analogue of [`correspondence_check`].
pub fn module_correspondence_check(modules: &[Submodule], probes: &[Vec<RingElement>]) -> Result<Report> {
    let Some(first) = modules.first() else {
        return Ok(Report::new("module-correspondence", "empty"));
    };
    let (pid, rank) = (first.pid().clone(), first.rank());
    let mut report = Report::new("module-correspondence", format!("fgMod({}^{rank})", pid.name()));
    let handles: Vec<SubmoduleHandle> = modules.iter().map(module_forward).collect();
    for (l, h) in modules.iter().zip(&handles) {
        report.check(module_backward(h) == *l, "backward-forward", || l.format());
        report.check(module_forward(&module_backward(h)) == *h, "forward-backward", || l.format());
        for m in probes {
            let um = Submodule::new(&pid, rank, &[m.clone()])?;
            let (ring_side, semiring_side) = (l.contains(m), h.contains(&um));
            report.check(ring_side == semiring_side, "preimage", || {
                format!("{m:?} in {}: {ring_side} vs {semiring_side}", l.format())
            });
        }
    }
    for (l1, h1) in modules.iter().zip(&handles) {
        for (l2, h2) in modules.iter().zip(&handles) {
            let (ring_side, semiring_side) = (l1.is_subset(l2), h1.is_subset(h2));
            report.check(ring_side == semiring_side, "order", || {
                format!("{} <= {}", l1.format(), l2.format())
            });
        }
    }
    Ok(report)
}

/// The primary condition read literally on `fgId(R)`, over the given candidate elements:
/// whenever `ab ∈ h` and `a ∉ h`, some `bⁿ` with `n ≤ max_power` lies in `h`.
pub fn literal_is_primary(h: &KIdealHandle, candidates: &[FgRingIdeal], max_power: u32) -> bool {
    let s = FgIdSemiring::new(h.ring().clone());
    if h.contains(&s.one()) {
        return false;
    }
    let inside: Vec<bool> = candidates.iter().map(|a| h.contains(a)).collect();
    for (a, &a_in) in candidates.iter().zip(&inside) {
        if a_in {
            continue;
        }
        for b in candidates {
            if !h.contains(&s.mul(a, b)) {
                continue;
            }
            let mut power = b.clone();
            let mut found = h.contains(&power);
            for _ in 1..max_power {
                if found {
                    break;
                }
                power = s.mul(&power, b);
                found = h.contains(&power);
            }
            if !found {
                return false;
            }
        }
    }
    true
}

/// The prime condition read literally: proper, and `ab ∈ h` forces `a ∈ h` or `b ∈ h`.
pub fn literal_is_prime(h: &KIdealHandle, candidates: &[FgRingIdeal]) -> bool {
    let s = FgIdSemiring::new(h.ring().clone());
    if h.contains(&s.one()) {
        return false;
    }
    let inside: Vec<bool> = candidates.iter().map(|a| h.contains(a)).collect();
    for (i, a) in candidates.iter().enumerate() {
        for (j, b) in candidates.iter().enumerate().skip(i) {
            if !inside[i] && !inside[j] && h.contains(&s.mul(a, b)) {
                return false;
            }
        }
    }
    true
}

/// Principal ideals `⟨d⟩` for the divisors of `n`, then `⟨0⟩, …, ⟨extra⟩`.
pub fn integer_candidates(n: u64, extra: u64) -> Vec<FgRingIdeal> {
    let mut vals: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    vals.extend(0..=extra);
    vals.sort_unstable();
    vals.dedup();
    vals.into_iter()
        .map(|v| crate::ring::int_ideal(v as i64))
        .collect()
}

/// Elements of `fgId(R)`: all of them for finite rings and fields, otherwise
/// principal ideals up to `bound`. The flag says whether the list is complete.
pub fn fgid_carrier(ring: &RingDescriptor, bound: u64) -> Result<(Vec<FgRingIdeal>, bool)> {
    let principal = |a: &RingElement| FgRingIdeal::principal(ring, a);
    let mut out: Vec<FgRingIdeal> = match ring {
        RingDescriptor::Rationals | RingDescriptor::PrimeField(_) => {
            vec![FgRingIdeal::zero(ring), FgRingIdeal::unit(ring)]
        }
        RingDescriptor::Integers => (0..=bound as i64)
            .map(|n| principal(&RingElement::int(n)))
            .collect::<Result<_>>()?,
        RingDescriptor::UniPoly(r) if matches!(r.field, FieldKind::Prime(_)) => {
            let mut v = vec![FgRingIdeal::zero(ring)];
            for d in 0..=bound as usize {
                for p in r.monic_of_degree(d)? {
                    v.push(principal(&RingElement::Poly(p))?);
                }
            }
            v
        }
        _ => match ring.elements() {
            Some(elems) => elems.iter().map(principal).collect::<Result<_>>()?,
            None => {
                return Err(Error::Unsupported(format!("enumerating fgId({})", ring.name())));
            }
        },
    };
    let complete = !matches!(ring, RingDescriptor::Integers | RingDescriptor::UniPoly(_));
    out.sort();
    out.dedup();
    Ok((out, complete))
}

const AXIOM_SAMPLES: usize = 150;

fn sample_elements(ring: &RingDescriptor, carrier: &[FgRingIdeal]) -> Vec<RingElement> {
    let mut out: Vec<RingElement> = Vec::new();
    if let Some(e) = ring.elements() {
        return e;
    }
    for i in carrier {
        for g in i.canonical() {
            out.push(g.clone());
            out.push(ring.neg(g));
        }
    }
    if *ring == RingDescriptor::Rationals {
        for a in -4i64..=4 {
            for b in 1i64..=4 {
                out.push(RingElement::Rat(BigRational::new(BigInt::from(a), BigInt::from(b))));
            }
        }
    }
    out.sort();
    out.dedup();
    if out.len() > AXIOM_SAMPLES {
        // the axioms are checked pairwise, so large carriers are thinned evenly
        let step = out.len().div_ceil(AXIOM_SAMPLES);
        out = out.into_iter().step_by(step).collect();
    }
    out
}

/// Checks that `v` realizes its target: a surjective valuation whose `v̂` is bijective.
///
/// Complete when both `fgId(R)` and the target are finite; otherwise the
/// carrier is truncated at `bound` and the report says so.
pub fn is_realization(v: &ValuationData, bound: u64) -> Result<Report> {
    let (carrier, complete) = fgid_carrier(&v.source, bound)?;
    let t = &v.target;
    let mut report = Report::new("realization", format!("{}: {} -> {}", v.name, v.source.name(), t.name()));
    let samples = sample_elements(&v.source, &carrier);
    let axioms = check_seminorm(v, &samples)?;
    let multiplicative = axioms.details.get("multiplicative") == Some(&Value::Bool(true));
    report.absorb(axioms);
    report.check(multiplicative, "valuation", || "v is not multiplicative".into());
    let vhat = match induced_vhat(v) {
        Ok(m) => m,
        Err(e) => {
            report.fail("integral", e.to_string());
            return Ok(report);
        }
    };
    let mut classes: BTreeMap<TargetElem, Vec<FgRingIdeal>> = BTreeMap::new();
    for i in &carrier {
        classes.entry(vhat.apply(i)?).or_default().push(i.clone());
    }
    for (value, members) in classes.iter().filter(|(_, m)| m.len() > 1).take(5) {
        let shown: Vec<String> = members.iter().take(4).map(|i| i.format()).collect();
        report.fail(
            "injective",
            format!("{} all map to {}", shown.join(" and "), t.format(value)),
        );
    }
    report.checks += carrier.len();
    let wanted: Vec<TargetElem> = match t {
        Target::NatGcd => (0..=bound).map(|n| TargetElem::Nat(n.into())).collect(),
        Target::FgId(_) => carrier.iter().cloned().map(TargetElem::Ideal).collect(),
        _ => t.elements().expect("finite target"),
    };
    for w in &wanted {
        report.check(classes.contains_key(w), "surjective", || format!("{} is not hit", t.format(w)));
    }
    let complete = complete && t.elements().is_some();
    report.note("complete", complete);
    report.note("carrier", carrier.len());
    if !complete {
        report.note("bound", bound);
    }
    Ok(report)
}

/// The isomorphism `fgId(ℤ) ≅ ℕ^gcd` checked on generators up to `max`: bijectivity on
/// the truncated carrier and agreement of both operation tables on random pairs.
pub fn natgcd_isomorphism_check<R: Rng>(max: u64, pairs: usize, rng: &mut R) -> Result<Report> {
    let v = ValuationData::nat_gcd_abs();
    let vhat = induced_vhat(&v)?;
    let s = FgIdSemiring::new(RingDescriptor::Integers);
    let mut report = Report::new("fgid-z-natgcd", "fgId(Z)");
    let mut hit = vec![false; max as usize + 1];
    for n in 0..=max {
        let i = crate::ring::int_ideal(n as i64);
        let TargetElem::Nat(value) = vhat.apply(&i)? else {
            unreachable!("nat_gcd_abs lands in N^gcd")
        };
        let slot = usize::try_from(&value).ok().filter(|&k| k <= max as usize);
        match slot {
            Some(k) if !hit[k] => hit[k] = true,
            _ => report.fail("bijective", format!("{} maps to {value}", i.format())),
        }
        report.checks += 1;
    }
    report.check(hit.iter().all(|&h| h), "surjective", || "missing value".into());
    let nat = Target::NatGcd;
    for _ in 0..pairs {
        let (a, b) = (rng.gen_range(0..=max as i64), rng.gen_range(0..=max as i64));
        let (i, j) = (crate::ring::int_ideal(a), crate::ring::int_ideal(b));
        let (vi, vj) = (vhat.apply(&i)?, vhat.apply(&j)?);
        report.check(vhat.apply(&s.add(&i, &j))? == nat.add(&vi, &vj), "sum-table", || {
            format!("<{a}> + <{b}>")
        });
        report.check(vhat.apply(&s.mul(&i, &j))? == nat.mul(&vi, &vj), "product-table", || {
            format!("<{a}> * <{b}>")
        });
    }
    report.note("max", max);
    report.note("pairs", pairs);
    Ok(report)
}

pub fn handle_json(h: &KIdealHandle) -> Value {
    json!({ "ring": h.ring().name(), "generators": h.ring_ideal().canonical().iter().map(|g| h.ring().format(g)).collect::<Vec<_>>() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, is_primary_ring_ideal, is_prime_ring_ideal, Pid};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zi(n: i64) -> FgRingIdeal {
        int_ideal(n)
    }

    #[test]
    fn zero_handle() {
        let h = correspondence_forward(&zi(0));
        assert!(h.contains(&zi(0)));
        assert!((1..30).all(|n| !h.contains(&zi(n))));
    }

    #[test]
    fn handle_of_two() {
        let h = correspondence_forward(&zi(2));
        assert!(h.contains(&zi(4)));
        assert!(!h.contains(&zi(3)));
        assert_eq!(correspondence_backward(&h), zi(2));
    }

    #[test]
    fn lattice_round_trip() {
        let pid = Pid::Integers;
        let l = Submodule::new(&pid, 2, &[vec![RingElement::int(2), RingElement::int(0)], vec![RingElement::int(0), RingElement::int(2)]]).unwrap();
        assert_eq!(module_backward(&module_forward(&l)), l);
    }

    #[test]
    fn product_examples() {
        let (h2, h3) = (correspondence_forward(&zi(2)), correspondence_forward(&zi(3)));
        assert_eq!(kideal_product(&h2, &h3).unwrap(), correspondence_forward(&zi(6)));
        let one = correspondence_forward(&zi(1));
        assert_eq!(kideal_product(&h2, &one).unwrap(), h2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = kideal_product_cross_check(&h2, &h3, &mut rng, 50).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
    }

    #[test]
    fn integer_correspondence() {
        let ideals: Vec<_> = [0, 1, 2, 3, 4, 6, 12].into_iter().map(zi).collect();
        let probes: Vec<_> = (-13..=13).map(RingElement::int).collect();
        let report = correspondence_check(&ideals, &probes).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
    }

    #[test]
    fn literal_primary_matches_ring_side() {
        for n in 2..=120u64 {
            let i = zi(n as i64);
            let h = correspondence_forward(&i);
            let cands = integer_candidates(n, 12);
            assert_eq!(literal_is_primary(&h, &cands, 8), is_primary_ring_ideal(&i).unwrap(), "{n}");
            assert_eq!(literal_is_prime(&h, &cands), is_prime_ring_ideal(&i).unwrap(), "{n}");
        }
        let zero = correspondence_forward(&zi(0));
        assert!(literal_is_prime(&zero, &integer_candidates(12, 12)));
    }

    #[test]
    fn realization_examples() {
        let nat = is_realization(&ValuationData::nat_gcd_abs(), 60).unwrap();
        assert!(nat.pass, "{:?}", nat.witnesses);
        let q = is_realization(&ValuationData::collapse_to_boolean(&RingDescriptor::Rationals), 10).unwrap();
        assert!(q.pass, "{:?}", q.witnesses);
        assert_eq!(q.details["complete"], true);
        let z = is_realization(&ValuationData::collapse_to_boolean(&RingDescriptor::Integers), 10).unwrap();
        assert!(!z.pass);
        assert!(z
            .witnesses
            .iter()
            .any(|w| w.check == "injective" && w.detail.contains("<2> and <3>")));
        let z6 = RingDescriptor::integers_mod(6).unwrap();
        let u = is_realization(&ValuationData::universal(&z6), 0).unwrap();
        assert!(u.pass, "{:?}", u.witnesses);
        assert_eq!(u.details["carrier"], 4);
    }

    #[test]
    fn natgcd_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let report = natgcd_isomorphism_check(300, 300, &mut rng).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
    }

    proptest! {
        #[test]
        fn product_distributes(a in 0i64..40, b in 0i64..40, c in 0i64..40) {
            let (h1, h2, h3) = (correspondence_forward(&zi(a)), correspondence_forward(&zi(b)), correspondence_forward(&zi(c)));
            let left = kideal_product(&h1, &handle_sum(&h2, &h3).unwrap()).unwrap();
            let right = handle_sum(&kideal_product(&h1, &h2).unwrap(), &kideal_product(&h1, &h3).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn handle_order_is_reverse_divisibility(a in 0i64..60, b in 0i64..60) {
            let (h1, h2) = (correspondence_forward(&zi(a)), correspondence_forward(&zi(b)));
            let divides = if a == 0 { b == 0 } else { b % a == 0 };
            prop_assert_eq!(h2.is_subset(&h1), divides);
        }
    }
}
