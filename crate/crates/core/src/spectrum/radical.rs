use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde_json::json;

use super::points::speck_truncated;
use super::residue::truncated_quotient;
use super::{element_size, pid_generator, TruncatedSpectrum};
use crate::error::{Error, Result};
use crate::ideal::{enumerate_k_ideals, is_prime, Subset};
use crate::report::Report;
use crate::ring::{
    ideal_intersection, prime_divisors_u64, ring_radical, spec_truncated, EuclideanDomain, FgRingIdeal, Pid,
    RingDescriptor, RingElement,
};
use crate::semiring::Semiring;
use crate::trop::{correspondence_forward, literal_is_prime, FgIdSemiring, KIdealHandle};

/// `√h`, computed as the handle of the radical of the corresponding ring ideal.
pub fn radical_handle(h: &KIdealHandle) -> Result<KIdealHandle> {
    Ok(correspondence_forward(&ring_radical(h.ring_ideal())?))
}

pub fn is_radical(h: &KIdealHandle) -> Result<bool> {
    Ok(radical_handle(h)? == *h)
}

/// Compares `√h` with the literal radical `{a : aⁿ ∈ h for some n ≤ max_power}` on candidates.
pub fn literal_radical_agrees(h: &KIdealHandle, candidates: &[FgRingIdeal], max_power: u32) -> Result<bool> {
    let rad = radical_handle(h)?;
    let s = FgIdSemiring::new(h.ring().clone());
    for c in candidates {
        let mut power = c.clone();
        let mut literal = h.contains(&power);
        for _ in 1..max_power {
            if literal {
                break;
            }
            power = s.mul(&power, c);
            literal = h.contains(&power);
        }
        if literal != rad.contains(c) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Distinct unit-normal prime factors of a nonzero element of ℤ or `K[x]`.
pub fn prime_factors(pid: &Pid, a: &RingElement) -> Result<Vec<RingElement>> {
    if pid.is_zero(a) {
        return Err(Error::Domain("factoring zero".into()));
    }
    match (pid, a) {
        (Pid::Integers, RingElement::Int(n)) => {
            let v = n
                .magnitude()
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("factoring {n}")))?;
            Ok(prime_divisors_u64(v).into_iter().map(|p| RingElement::int(p as i64)).collect())
        }
        (Pid::UniPoly(r), RingElement::Poly(p)) => {
            Ok(r.irreducible_factors(p)?.into_iter().map(RingElement::Poly).collect())
        }
        _ => Ok(Vec::new()),
    }
}

/// Unit-normal divisors of a nonzero element, sorted.
pub fn divisors(pid: &Pid, a: &RingElement) -> Result<Vec<RingElement>> {
    let mut out = vec![pid.one()];
    for p in prime_factors(pid, a)? {
        let k = pid.multiplicity(&p, a);
        let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
        for d in &out {
            let mut x = d.clone();
            for _ in 0..=k {
                next.push(pid.normalize(&x));
                x = pid.mul(&x, &p);
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// Compares `√h` with the intersection of the primes of `V_k(h)` in the truncation.
/// When the truncation may miss a prime over `h` the comparison is skipped and
/// the report says the result is inconclusive beyond the bound.
pub fn radical_cross_check(spec: &TruncatedSpectrum, h: &KIdealHandle) -> Result<Report> {
    let ring = spec.ring();
    if h.ring() != ring {
        return Err(Error::Domain(format!("{} is not over {}", h.format(), ring.name())));
    }
    let mut report = Report::new("radical-intersection", ring.name());
    let over = spec.vk(h);
    let mut meet = FgRingIdeal::unit(ring);
    for &k in &over {
        meet = ideal_intersection(&meet, &spec.points()[k].prime)?;
    }
    let ideal = h.ring_ideal();
    let conclusive = if spec.is_complete() || ideal.is_zero() || ideal.is_unit() {
        true
    } else {
        let (pid, g) = pid_generator(ideal)?;
        let mut all = true;
        for p in prime_factors(&pid, &g)? {
            all &= spec.position(&FgRingIdeal::principal(ring, &p)?).is_some();
        }
        all
    };
    report.note("primes", spec.format_set(&over));
    report.note("intersection", correspondence_forward(&meet).format());
    report.note("conclusive", conclusive);
    if conclusive {
        let rad = radical_handle(h)?;
        report.check(rad == correspondence_forward(&meet), "radical-is-intersection", || {
            format!("{} has radical {}, intersection {}", h.format(), rad.format(), meet.format())
        });
    } else {
        report.note("status", "inconclusive beyond bound");
    }
    Ok(report)
}

fn quotient_image(quotient: &RingDescriptor, d: &RingElement) -> RingElement {
    match (quotient, d) {
        (RingDescriptor::IntegersMod(m), RingElement::Int(v)) => {
            RingElement::Int(num_integer::Integer::mod_floor(v, &(*m).into()))
        }
        (RingDescriptor::PolyQuotient { ring, modulus }, RingElement::Poly(p)) => {
            RingElement::Poly(ring.div_rem(p, modulus).1)
        }
        _ => quotient.zero(),
    }
}

/// The ideal of `R` lying over an ideal of `R/I`.
fn lift(r: &RingDescriptor, j: &FgRingIdeal) -> Result<FgRingIdeal> {
    let (_, g) = j
        .base_generator()
        .ok_or_else(|| Error::Unsupported(format!("lifting from {}", j.ring().name())))?;
    FgRingIdeal::principal(r, &g)
}

type Points = BTreeSet<FgRingIdeal>;

fn show(points: &Points) -> Vec<String> {
    points.iter().map(FgRingIdeal::format).collect()
}

/// Checks that the five spaces `Spec_k(fgId(R/I))`, `Spec(R/I)`, `V(I)`,
/// `V_k(I)` and `Spec_k(T/I)` are identified by the natural maps, on points and on
/// the closed sets cut out by every ideal containing `I`.
pub fn quotient_diagram_check(r: &RingDescriptor, i: &FgRingIdeal, bound: u64) -> Result<Report> {
    let pid = match r.as_pid() {
        Some(p @ (Pid::Integers | Pid::UniPoly(_))) => p,
        _ => return Err(Error::Unsupported(format!("quotient diagram over {}", r.name()))),
    };
    if i.ring() != r {
        return Err(Error::Domain(format!("{} is not an ideal of {}", i.format(), r.name())));
    }
    if i.is_zero() {
        return Err(Error::Domain("the quotient by zero is the ring itself".into()));
    }
    let n = i.generator().expect("principal").clone();
    let quotient = if i.is_unit() {
        RingDescriptor::Zero
    } else {
        match (&pid, &n) {
            (Pid::Integers, RingElement::Int(v)) => RingDescriptor::integers_mod(
                v.to_u64().ok_or_else(|| Error::Unsupported(format!("quotient by {v}")))?,
            )?,
            (Pid::UniPoly(ring), RingElement::Poly(p)) => RingDescriptor::poly_quotient(ring.clone(), p.clone())?,
            _ => unreachable!("generator matches its ring"),
        }
    };
    let mut report = Report::new("quotient-diagram", format!("{} / {}", r.name(), i.format()));
    let divs = divisors(&pid, &n)?;

    // fgId(R/I): every ideal of R/I is generated by the image of a divisor of n
    let mut carrier_q: Vec<FgRingIdeal> = divs
        .iter()
        .map(|d| FgRingIdeal::principal(&quotient, &quotient_image(&quotient, d)))
        .collect::<Result<_>>()?;
    carrier_q.sort();
    carrier_q.dedup();
    let a_side: Vec<FgRingIdeal> = carrier_q
        .iter()
        .filter(|c| literal_is_prime(&correspondence_forward(c), &carrier_q))
        .cloned()
        .collect();
    let a_points: Points = a_side.iter().map(|p| lift(r, p)).collect::<Result<_>>()?;

    let b_side = spec_truncated(&quotient, 0)?;
    let b_points: Points = b_side.iter().map(|p| lift(r, p)).collect::<Result<_>>()?;

    let spec = speck_truncated(r, bound.max(element_size(&pid, &n)?))?;
    let c_points: Points = spec.v_ring(i).iter().map(|&k| spec.points()[k].prime.clone()).collect();
    let d_set = spec.vk(&correspondence_forward(i));
    let d_points: Points = d_set.iter().map(|&k| spec.points()[k].prime.clone()).collect();

    let mut carrier_t: Vec<FgRingIdeal> = divs
        .iter()
        .map(|d| FgRingIdeal::principal(r, d))
        .collect::<Result<_>>()?;
    carrier_t.push(FgRingIdeal::zero(r));
    let tq = truncated_quotient(&carrier_t, &correspondence_forward(i))?;
    let s = &tq.semiring;
    let e_primes: Vec<Subset> = enumerate_k_ideals(s)?
        .into_iter()
        .filter(|&p| is_prime(s, p))
        .collect();
    // each point of V_k(I) pushed down to T/I
    let mut e_of: BTreeMap<FgRingIdeal, Subset> = BTreeMap::new();
    for &k in &d_set {
        let point = &spec.points()[k];
        let image = Subset::from_elems(
            tq.carrier
                .iter()
                .enumerate()
                .filter(|(_, c)| point.handle.contains(c))
                .map(|(x, _)| tq.projection[x]),
        );
        report.check(e_primes.contains(&image), "image-is-prime", || {
            format!("{} gives {:?}", point.format(), image.labels(s))
        });
        e_of.insert(point.prime.clone(), image);
    }
    let e_images: BTreeSet<Subset> = e_of.values().copied().collect();
    let e_all: BTreeSet<Subset> = e_primes.iter().copied().collect();
    report.check(
        e_images.len() == e_of.len() && e_images == e_all,
        "quotient-spectrum-bijection",
        || format!("{} points over I, {} primes of T/I", e_of.len(), e_primes.len()),
    );

    let spaces = [
        ("fgId-quotient", &a_points),
        ("ring-quotient", &b_points),
        ("ring-closed-set", &c_points),
    ];
    for (name, pts) in spaces {
        report.check(*pts == d_points, &format!("points-{name}"), || {
            format!("{:?} vs {:?}", show(pts), show(&d_points))
        });
    }

    for d in &divs {
        let j = FgRingIdeal::principal(r, d)?;
        let jq = FgRingIdeal::principal(&quotient, &quotient_image(&quotient, d))?;
        let hq = correspondence_forward(&jq);
        let a: Points = a_side
            .iter()
            .filter(|p| hq.is_subset(&correspondence_forward(p)))
            .map(|p| lift(r, p))
            .collect::<Result<_>>()?;
        let b: Points = b_side
            .iter()
            .filter(|p| jq.is_subset(p))
            .map(|p| lift(r, p))
            .collect::<Result<_>>()?;
        let c: Points = spec.v_ring(&j).iter().map(|&k| spec.points()[k].prime.clone()).collect();
        let dk: Points = spec
            .vk(&correspondence_forward(&j))
            .iter()
            .map(|&k| spec.points()[k].prime.clone())
            .collect();
        let class = tq.class_of(&j).expect("divisors are in the carrier");
        let e: Points = e_of
            .iter()
            .filter(|(_, set)| set.contains(class))
            .map(|(p, _)| p.clone())
            .collect();
        for (name, pts) in [("fgId-quotient", &a), ("ring-quotient", &b), ("ring-closed-set", &c), ("quotient-spectrum", &e)] {
            report.check(*pts == dk, &format!("closed-{name}"), || {
                format!("V({}): {:?} vs {:?}", j.format(), show(pts), show(&dk))
            });
        }
    }
    report.note("points", json!(show(&d_points)));
    report.note("quotient_ring", quotient.name());
    report.note("quotient_semiring_size", s.size());
    report.note("closed_sets", divs.len());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, is_primary_ring_ideal};
    use crate::trop::integer_candidates;
    use proptest::prelude::*;

    fn h(n: i64) -> KIdealHandle {
        correspondence_forward(&int_ideal(n))
    }

    #[test]
    fn radical_of_twelve() {
        assert_eq!(radical_handle(&h(12)).unwrap(), h(6));
        assert!(is_radical(&h(7)).unwrap());
        assert!(!is_radical(&h(12)).unwrap());
        assert!(literal_radical_agrees(&h(12), &integer_candidates(12, 12), 6).unwrap());
    }

    #[test]
    fn intersection_cross_check() {
        let spec = speck_truncated(&RingDescriptor::Integers, 3).unwrap();
        let report = radical_cross_check(&spec, &h(12)).unwrap();
        assert!(report.pass);
        assert_eq!(report.details["conclusive"], true);
        assert_eq!(report.details["intersection"], "h<6>");
        assert_eq!(report.details["primes"], json!(["<2>", "<3>"]));

        let report = radical_cross_check(&spec, &h(10)).unwrap();
        assert!(report.pass);
        assert_eq!(report.details["status"], "inconclusive beyond bound");
    }

    #[test]
    fn multivariate_radicals_are_unsupported() {
        let r = RingDescriptor::parse("Q[x,y]").unwrap();
        let x = FgRingIdeal::principal(&r, &r.var(0).unwrap()).unwrap();
        assert!(matches!(radical_handle(&correspondence_forward(&x)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn divisors_of_polynomials() {
        let r = RingDescriptor::parse("F2[x]").unwrap();
        let pid = r.as_pid().unwrap();
        let f = r.parse_element("x^3 + x^2").unwrap();
        let ds = divisors(&pid, &f).unwrap();
        assert_eq!(ds.len(), 6);
        assert_eq!(divisors(&Pid::Integers, &RingElement::int(12)).unwrap().len(), 6);
    }

    #[test]
    fn quotient_diagram_examples() {
        let report = quotient_diagram_check(&RingDescriptor::Integers, &int_ideal(12), 10).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["points"], json!(["<2>", "<3>"]));

        let report = quotient_diagram_check(&RingDescriptor::Integers, &int_ideal(30), 10).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["points"].as_array().unwrap().len(), 3);

        let report = quotient_diagram_check(&RingDescriptor::Integers, &int_ideal(1), 10).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["points"], json!([]));

        let r = RingDescriptor::parse("F2[x]").unwrap();
        let i = FgRingIdeal::principal(&r, &r.parse_element("x^2 + x").unwrap()).unwrap();
        let report = quotient_diagram_check(&r, &i, 2).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["points"], json!(["<x>", "<x + 1>"]));

        assert!(quotient_diagram_check(&RingDescriptor::Integers, &int_ideal(0), 10).is_err());
    }

    proptest! {
        #[test]
        fn radical_is_a_closure(a in 1i64..400, b in 1i64..400) {
            let (ha, hab) = (h(a), h(a * b));
            let ra = radical_handle(&ha).unwrap();
            prop_assert_eq!(radical_handle(&ra).unwrap(), ra.clone());
            prop_assert!(ha.is_subset(&ra));
            // ⟨ab⟩ ⊆ ⟨a⟩ forces √⟨ab⟩ ⊆ √⟨a⟩
            prop_assert!(radical_handle(&hab).unwrap().is_subset(&ra));
        }

        #[test]
        fn radical_of_primary_is_prime(n in 2i64..2000) {
            if is_primary_ring_ideal(&int_ideal(n)).unwrap() {
                let r = radical_handle(&h(n)).unwrap();
                prop_assert!(crate::ring::is_prime_ring_ideal(r.ring_ideal()).unwrap());
            }
        }
    }
}
