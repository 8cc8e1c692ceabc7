use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{is_prime_ring_ideal, spec_truncated, FgRingIdeal, LocalSet, RingDescriptor, RingElement};
use crate::semiring::{natural_leq, NatGcd, Semiring};
use crate::trop::{correspondence_forward, handle_sum, kideal_product, u_r, KIdealHandle};

/// A prime of `R` together with the prime k-ideal of `fgId(R)` it corresponds to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub prime: FgRingIdeal,
    pub handle: KIdealHandle,
}

impl SpectrumPoint {
    pub fn new(prime: FgRingIdeal) -> Result<Self> {
        if !is_prime_ring_ideal(&prime)? {
            return Err(Error::Domain(format!("{} is not prime", prime.format())));
        }
        let handle = correspondence_forward(&prime);
        Ok(SpectrumPoint { prime, handle })
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.prime.ring()
    }

    pub fn format(&self) -> String {
        self.prime.format()
    }

    pub fn to_json(&self) -> Value {
        json!({ "prime": self.prime.format(), "handle": self.handle.format() })
    }
}

pub type PointSet = BTreeSet<usize>;

/// The primes of a ring up to a size bound, viewed on both sides of the correspondence.
#[derive(Debug, Clone)]
pub struct TruncatedSpectrum {
    ring: RingDescriptor,
    bound: u64,
    points: Vec<SpectrumPoint>,
    complete: bool,
}

/// `Spec_k(fgId(R))` truncated at `bound`, with each point carrying its ring-side prime.
pub fn speck_truncated(r: &RingDescriptor, bound: u64) -> Result<TruncatedSpectrum> {
    let points = spec_truncated(r, bound)?
        .into_iter()
        .map(SpectrumPoint::new)
        .collect::<Result<Vec<_>>>()?;
    let complete = match r {
        RingDescriptor::Integers | RingDescriptor::UniPoly(_) => false,
        RingDescriptor::Localized { set, .. } => !matches!(set, LocalSet::PowersOf(_)),
        _ => true,
    };
    Ok(TruncatedSpectrum {
        ring: r.clone(),
        bound,
        points,
        complete,
    })
}

impl TruncatedSpectrum {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn points(&self) -> &[SpectrumPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the truncation lists every prime of the ring.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn all(&self) -> PointSet {
        (0..self.points.len()).collect()
    }

    /// Index of the point with this ring-side prime.
    pub fn position(&self, prime: &FgRingIdeal) -> Option<usize> {
        self.points.iter().position(|p| p.prime == *prime)
    }

    /// `V_k(h)`: the points whose handle contains `h`.
    pub fn vk(&self, h: &KIdealHandle) -> PointSet {
        (0..self.points.len())
            .filter(|&k| h.is_subset(&self.points[k].handle))
            .collect()
    }

    /// `D_k(f)`: the points whose handle omits `f`.
    pub fn dk(&self, f: &FgRingIdeal) -> PointSet {
        (0..self.points.len())
            .filter(|&k| !self.points[k].handle.contains(f))
            .collect()
    }

    /// `V(I)` on the ring side.
    pub fn v_ring(&self, i: &FgRingIdeal) -> PointSet {
        (0..self.points.len())
            .filter(|&k| i.is_subset(&self.points[k].prime))
            .collect()
    }

    /// `D(f)` on the ring side.
    pub fn d_ring(&self, f: &RingElement) -> PointSet {
        (0..self.points.len())
            .filter(|&k| !self.points[k].prime.contains(f))
            .collect()
    }

    pub fn format_set(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|&k| self.points[k].format()).collect()
    }

    /// Closed-set laws and the homeomorphism with `Spec(R)`, over every pair and
    /// triple of the given ideals, and basic opens for the given elements.
    pub fn topology_check(&self, ideals: &[FgRingIdeal], elements: &[RingElement]) -> Result<Report> {
        let mut report = Report::new("speck-topology", self.ring.name());
        let handles: Vec<KIdealHandle> = ideals.iter().map(correspondence_forward).collect();
        let closed: Vec<PointSet> = handles.iter().map(|h| self.vk(h)).collect();
        let show = |i: usize| ideals[i].format();

        let unit = correspondence_forward(&FgRingIdeal::unit(&self.ring));
        report.check(self.vk(&unit).is_empty(), "empty-set-closed", String::new);
        let zero = correspondence_forward(&FgRingIdeal::zero(&self.ring));
        report.check(self.vk(&zero) == self.all(), "whole-space-closed", String::new);

        for (i, ideal) in ideals.iter().enumerate() {
            report.check(self.v_ring(ideal) == closed[i], "homeomorphism", || show(i));
        }
        for i in 0..ideals.len() {
            for j in i..ideals.len() {
                let union: PointSet = closed[i].union(&closed[j]).copied().collect();
                let product = self.vk(&kideal_product(&handles[i], &handles[j])?);
                report.check(union == product, "union-is-product", || format!("{} and {}", show(i), show(j)));
                let meet: PointSet = closed[i].intersection(&closed[j]).copied().collect();
                let sum = self.vk(&handle_sum(&handles[i], &handles[j])?);
                report.check(meet == sum, "intersection-is-sum", || format!("{} and {}", show(i), show(j)));
            }
        }
        if ideals.len() <= 30 {
            for i in 0..ideals.len() {
                for j in i + 1..ideals.len() {
                    for k in j + 1..ideals.len() {
                        let meet: PointSet = closed[i]
                            .iter()
                            .filter(|x| closed[j].contains(x) && closed[k].contains(x))
                            .copied()
                            .collect();
                        let sum = handle_sum(&handle_sum(&handles[i], &handles[j])?, &handles[k])?;
                        report.check(meet == self.vk(&sum), "intersection-is-sum", || {
                            format!("{}, {} and {}", show(i), show(j), show(k))
                        });
                    }
                }
            }
        }
        if !handles.is_empty() {
            let mut total = handles[0].clone();
            for h in &handles[1..] {
                total = handle_sum(&total, h)?;
            }
            let meet = closed.iter().skip(1).fold(closed[0].clone(), |acc, c| {
                acc.intersection(c).copied().collect()
            });
            report.check(meet == self.vk(&total), "intersection-is-sum", || "whole family".into());
        }
        for f in elements {
            let uf = u_r(&self.ring, f)?;
            report.check(self.d_ring(f) == self.dk(&uf), "basic-open", || self.ring.format(f));
            let complement: PointSet = self.all().difference(&self.vk(&correspondence_forward(&uf))).copied().collect();
            report.check(self.dk(&uf) == complement, "open-is-complement", || self.ring.format(f));
        }
        report.note("points", self.len());
        report.note("complete", self.complete);
        if !self.complete {
            report.note("scope", "inconclusive beyond bound");
        }
        Ok(report)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.name(),
            "bound": self.bound,
            "complete": self.complete,
            "points": self.points.iter().map(SpectrumPoint::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The prime k-ideals of ℕ^gcd among the down-sets `{m : m ≤ n}` for `n ≤ bound`,
/// found with the literal prime condition over `0..=bound`, compared against the
/// primes of ℤ, and with membership of each point checked for `m ≤ membership_max`.
pub fn natgcd_spectrum_check(bound: u64, membership_max: u64) -> Result<Report> {
    let s = NatGcd;
    let mut report = Report::new("natgcd-spectrum", s.name());
    let cands: Vec<BigUint> = (0..=bound).map(BigUint::from).collect();
    let below = |m: &BigUint, n: &BigUint| natural_leq(&s, m, n);
    let mut found = Vec::new();
    for n in &cands {
        if below(&s.one(), n)? {
            continue;
        }
        let inside: Vec<bool> = cands.iter().map(|a| below(a, n)).collect::<Result<_>>()?;
        let mut prime = true;
        'pairs: for (i, a) in cands.iter().enumerate() {
            if inside[i] {
                continue;
            }
            for (j, b) in cands.iter().enumerate().skip(i) {
                if !inside[j] && below(&s.mul(a, b), n)? {
                    prime = false;
                    break 'pairs;
                }
            }
        }
        if prime {
            found.push(n.clone());
        }
    }
    let spec = speck_truncated(&RingDescriptor::Integers, bound)?;
    let expected: Vec<BigUint> = spec
        .points()
        .iter()
        .map(|p| {
            let g = p.prime.generator().and_then(RingElement::as_int).expect("integer generator");
            g.magnitude().clone()
        })
        .collect();
    report.check(found == expected, "matches-ring-spectrum", || {
        format!("found {found:?}, ring side {expected:?}")
    });
    for (n, point) in found.iter().zip(spec.points()) {
        for m in 0..=membership_max {
            let bm = BigUint::from(m);
            let literal = below(&bm, n)?;
            let divides = if n == &BigUint::from(0u8) { m == 0 } else { (&bm % n) == BigUint::from(0u8) };
            let handle = point.handle.contains(&u_r(&RingDescriptor::Integers, &RingElement::int(m as i64))?);
            report.check(literal == divides && literal == handle, "membership", || {
                format!("m = {m} against <{n}>: down-set {literal}, divisibility {divides}, handle {handle}")
            });
        }
    }
    report.note(
        "points",
        found.iter().map(|n| format!("<{n}>")).collect::<Vec<_>>(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, FieldKind};

    #[test]
    fn integers_up_to_ten() {
        let spec = speck_truncated(&RingDescriptor::Integers, 10).unwrap();
        let names: Vec<String> = spec.points().iter().map(SpectrumPoint::format).collect();
        assert_eq!(names, ["<0>", "<2>", "<3>", "<5>", "<7>"]);
        assert!(!spec.is_complete());
    }

    #[test]
    fn f2x_degree_two_has_four_points() {
        let r = RingDescriptor::parse("F2[x]").unwrap();
        let spec = speck_truncated(&r, 2).unwrap();
        assert_eq!(spec.len(), 4);
    }

    #[test]
    fn closed_sets_of_six() {
        let spec = speck_truncated(&RingDescriptor::Integers, 10).unwrap();
        let zero = correspondence_forward(&int_ideal(0));
        assert_eq!(spec.vk(&zero), spec.all());
        let six = correspondence_forward(&int_ideal(6));
        assert_eq!(spec.format_set(&spec.vk(&six)), ["<2>", "<3>"]);
        assert_eq!(spec.format_set(&spec.dk(&int_ideal(6))), ["<0>", "<5>", "<7>"]);
    }

    #[test]
    fn topology_laws_hold_on_small_truncations() {
        let spec = speck_truncated(&RingDescriptor::Integers, 20).unwrap();
        let ideals: Vec<_> = (0..=24).map(int_ideal).collect();
        let elems: Vec<_> = (-10..=30).map(RingElement::int).collect();
        let report = spec.topology_check(&ideals, &elems).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);

        let r = RingDescriptor::uni_poly(FieldKind::Prime(3), "x");
        let spec = speck_truncated(&r, 2).unwrap();
        let ideals: Vec<_> = ["0", "1", "x", "x^2", "x^2 + 1", "x^2 - 1", "x^3 - x", "x + 2"]
            .iter()
            .map(|t| FgRingIdeal::principal(&r, &r.parse_element(t).unwrap()).unwrap())
            .collect();
        let report = spec.topology_check(&ideals, &[r.parse_element("x^2 + x").unwrap()]).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
    }

    #[test]
    fn finite_rings_are_complete() {
        let spec = speck_truncated(&RingDescriptor::integers_mod(12).unwrap(), 0).unwrap();
        assert!(spec.is_complete());
        assert_eq!(spec.len(), 2);
    }

    #[test]
    fn natgcd_points_are_multiples() {
        let report = natgcd_spectrum_check(30, 200).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["points"].as_array().unwrap().len(), 11);
    }
}
