use std::collections::BTreeSet;

use serde_json::json;

use super::points::{speck_truncated, SpectrumPoint, TruncatedSpectrum};
use super::{pid_generator, small_elements};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{EuclideanDomain, FgRingIdeal, LocalSet, Pid, RingDescriptor, RingElement};
use crate::semiring::{Frac, PidFractions, PidMultSet, Semiring};
use crate::trop::{check_seminorm, FgIdSemiring, Target, ValuationData, ValueMap};

/// The localizations `R_𝔭` and `T_𝔭 = fgId(R)_𝔭†` at a prime of a PID, with the maps between them.
#[derive(Debug, Clone)]
pub struct LocalizedData {
    point: SpectrumPoint,
    base: Pid,
    set: LocalSet,
    ring_local: RingDescriptor,
    semiring_local: PidFractions<Pid>,
}

/// Builds `R_𝔭` and `T_𝔭` for a prime of ℤ, `K[x]` or a field.
pub fn localize_at_prime(point: &SpectrumPoint) -> Result<LocalizedData> {
    let (base, g) = pid_generator(&point.prime)?;
    let (set, tset) = if base.is_zero(&g) {
        (LocalSet::AllNonzero, PidMultSet::AllNonzero)
    } else {
        (LocalSet::AvoidingPrime(g.clone()), PidMultSet::AvoidingPrime(g))
    };
    let ring_local = match base {
        Pid::Field(_) => base.descriptor(),
        _ => RingDescriptor::localized(base.clone(), set.clone())?,
    };
    Ok(LocalizedData {
        point: point.clone(),
        semiring_local: PidFractions::new(base.clone(), tset),
        base,
        set,
        ring_local,
    })
}

impl LocalizedData {
    pub fn point(&self) -> &SpectrumPoint {
        &self.point
    }

    pub fn base(&self) -> &Pid {
        &self.base
    }

    pub fn ring_local(&self) -> &RingDescriptor {
        &self.ring_local
    }

    pub fn semiring_local(&self) -> &PidFractions<Pid> {
        &self.semiring_local
    }

    /// Whether `d` becomes a unit in `R_𝔭`.
    pub fn inverts(&self, d: &RingElement) -> bool {
        match self.base {
            Pid::Field(_) => !self.base.is_zero(d),
            _ => self.base.in_saturation(&self.set, d),
        }
    }

    /// `a/d ∈ R_𝔭` for base elements.
    pub fn local_fraction(&self, a: &RingElement, d: &RingElement) -> Result<RingElement> {
        if !self.inverts(d) {
            return Err(Error::Domain(format!("{} is not inverted", self.base.format(d))));
        }
        Ok(match self.base {
            Pid::Field(_) => self.base.exact_div(a, d),
            _ => self.ring_local.make_frac(a.clone(), d.clone()),
        })
    }

    /// The structure map `R → R_𝔭`.
    pub fn to_local(&self, a: &RingElement) -> RingElement {
        self.local_fraction(a, &self.base.one()).expect("1 is inverted")
    }

    fn split(&self, x: &RingElement) -> Result<(RingElement, RingElement)> {
        self.ring_local.check(x)?;
        Ok(match x.as_frac() {
            Some((n, d)) => (n.clone(), d.clone()),
            None => (x.clone(), self.base.one()),
        })
    }

    /// `μ(a/b) = ⟨a⟩/⟨b⟩`.
    pub fn mu(&self, x: &RingElement) -> Result<Frac<RingElement>> {
        let (n, d) = self.split(x)?;
        self.semiring_local
            .fraction(&self.base.normalize(&n), &self.base.normalize(&d))
    }

    /// `μ` as a valuation, for the seminorm checks.
    pub fn mu_valuation(&self) -> ValuationData {
        ValuationData {
            name: "mu".into(),
            source: self.ring_local.clone(),
            target: Target::Fractions(self.semiring_local.clone()),
            map: ValueMap::IdealQuotient,
        }
    }

    /// The structure map `ι_U: T → T_𝔭` on the ideal `⟨a⟩`.
    pub fn iota(&self, a: &RingElement) -> Frac<RingElement> {
        self.semiring_local.embed(&self.base.normalize(a))
    }

    /// `ζ(t/u)`: the ideal of `R_𝔭` generated by the image of `t`, after checking
    /// that the image of `u` generates the unit ideal.
    pub fn zeta_raw(&self, t: &RingElement, u: &RingElement) -> Result<FgRingIdeal> {
        if !self.semiring_local.inverts(u) {
            return Err(Error::Domain(format!("<{}> is not inverted", self.base.format(u))));
        }
        let image_u = FgRingIdeal::principal(&self.ring_local, &self.to_local(u))?;
        if !image_u.is_unit() {
            return Err(Error::Structural(format!(
                "<{}> is inverted in the semiring but not in {}",
                self.base.format(u),
                self.ring_local.name()
            )));
        }
        FgRingIdeal::principal(&self.ring_local, &self.to_local(t))
    }

    pub fn zeta(&self, f: &Frac<RingElement>) -> Result<FgRingIdeal> {
        self.zeta_raw(&f.num, &f.den)
    }

    pub fn format_fraction(&self, f: &Frac<RingElement>) -> String {
        self.semiring_local.format(f)
    }

    /// Base elements up to `bound`, and those among them that are inverted.
    fn base_samples(&self, bound: u64) -> Result<(Vec<RingElement>, Vec<RingElement>)> {
        let elems = small_elements(&self.base, bound)?;
        let dens = elems.iter().filter(|d| self.inverts(d)).cloned().collect();
        Ok((elems, dens))
    }

    /// Elements `±a/d` of `R_𝔭` and `⟨a⟩/⟨d⟩` of `T_𝔭` with `a, d` up to `bound`.
    pub fn samples(&self, bound: u64) -> Result<(Vec<RingElement>, Vec<Frac<RingElement>>)> {
        let (elems, dens) = self.base_samples(bound)?;
        let mut ring = BTreeSet::new();
        let mut semi = BTreeSet::new();
        for a in &elems {
            for d in &dens {
                ring.insert(self.local_fraction(a, d)?);
                ring.insert(self.local_fraction(&self.base.neg(a), d)?);
                semi.insert(self.semiring_local.fraction(a, d)?);
            }
        }
        Ok((ring.into_iter().collect(), semi.into_iter().collect()))
    }

    /// `ζ ∘ μ = u_{R_𝔭}` on samples, with both sides computed separately.
    pub fn zeta_mu_check(&self, samples: &[RingElement]) -> Result<Report> {
        let mut report = Report::new("zeta-mu", self.ring_local.name());
        for x in samples {
            let left = self.zeta(&self.mu(x)?)?;
            let right = FgRingIdeal::principal(&self.ring_local, x)?;
            report.check(left == right, "factorization", || {
                format!("{}: {} vs {}", self.ring_local.format(x), left.format(), right.format())
            });
        }
        Ok(report)
    }

    /// `μ` is a seminorm on samples.
    pub fn mu_seminorm_check(&self, samples: &[RingElement]) -> Result<Report> {
        check_seminorm(&self.mu_valuation(), samples)
    }

    /// Membership of `x = n/d` in the localized k-ideal `U⁻¹𝔮†`: some inverted `w`
    /// among `witnesses` has `⟨n·w⟩ ∈ 𝔮†`.
    fn in_localized(&self, q: &SpectrumPoint, x: &Frac<RingElement>, witnesses: &[RingElement]) -> Result<bool> {
        let ring = q.ring();
        for w in witnesses {
            if q.handle.contains(&FgRingIdeal::principal(ring, &self.base.mul(&x.num, w))?) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The primes of `T_𝔭` come exactly from the truncation primes inside `𝔭`:
    /// `U⁻¹𝔮†` is proper and satisfies the literal prime condition on samples iff
    /// `𝔮 ⊆ 𝔭`, and their number matches the primes of `R_𝔭`.
    pub fn prime_bijection_check(&self, spec: &TruncatedSpectrum, sample_bound: u64) -> Result<Report> {
        let mut report = Report::new("localization-primes", format!("{} at {}", spec.ring().name(), self.point.format()));
        let (elems, witnesses) = self.base_samples(sample_bound.min(spec.bound()).max(1))?;
        let mut fracs = BTreeSet::new();
        for a in &elems {
            for d in &witnesses {
                fracs.insert(self.semiring_local.fraction(a, d)?);
            }
        }
        let fracs: Vec<_> = fracs.into_iter().collect();
        let t = &self.semiring_local;
        let mut proper_count = 0;
        for q in spec.points() {
            let inside = q.prime.is_subset(&self.point.prime);
            let mut wit = witnesses.clone();
            if let Some(g) = q.prime.generator() {
                if self.inverts(g) {
                    wit.push(g.clone());
                }
            }
            let proper = !self.in_localized(q, &t.one(), &wit)?;
            report.check(proper == inside, "proper-iff-inside", || {
                format!("{}: proper {proper}, inside {inside}", q.format())
            });
            if !proper {
                continue;
            }
            proper_count += 1;
            let member: Vec<bool> = fracs
                .iter()
                .map(|x| self.in_localized(q, x, &wit))
                .collect::<Result<_>>()?;
            for (i, a) in fracs.iter().enumerate() {
                for (j, b) in fracs.iter().enumerate().skip(i) {
                    let ab = t.mul(a, b);
                    if self.in_localized(q, &ab, &wit)? && !member[i] && !member[j] {
                        report.fail(
                            "prime",
                            format!("{}: {} * {}", q.format(), t.format(a), t.format(b)),
                        );
                    }
                    report.checks += 1;
                    if member[i] {
                        let ok = self.in_localized(q, &ab, &wit)?;
                        report.check(ok, "absorbs", || format!("{}: {}", q.format(), t.format(a)));
                    }
                    if member[i] && member[j] {
                        let ok = self.in_localized(q, &t.add(a, b), &wit)?;
                        report.check(ok, "closed-under-sum", || {
                            format!("{}: {} + {}", q.format(), t.format(a), t.format(b))
                        });
                    }
                }
            }
        }
        let local_spec = speck_truncated(&self.ring_local, spec.bound())?;
        report.check(local_spec.len() == proper_count, "matches-local-ring", || {
            format!("{} primes of {}, {} localized k-ideals", local_spec.len(), self.ring_local.name(), proper_count)
        });
        report.note("primes", proper_count);
        Ok(report)
    }
}

/// Evaluates `ζ` on sample fractions: well-definedness under rescaling, the
/// morphism laws, surjectivity onto the principal ideals of `R_𝔭` with
/// numerator and denominator among the samples, and the fractions `≠ 1` sent to `⟨1⟩`.
pub fn zeta_kernel_probe(loc: &LocalizedData, sample_bound: u64) -> Result<Report> {
    let mut report = Report::new(
        "zeta-kernel",
        format!("{} at {}", loc.point.ring().name(), loc.point.format()),
    );
    let t = &loc.semiring_local;
    let target = FgIdSemiring::new(loc.ring_local.clone());
    let (elems, dens) = loc.base_samples(sample_bound)?;
    let (_, samples) = loc.samples(sample_bound)?;
    let mut images = BTreeSet::new();
    let mut kernel = Vec::new();
    let values: Vec<FgRingIdeal> = samples.iter().map(|f| loc.zeta(f)).collect::<Result<_>>()?;
    for (f, z) in samples.iter().zip(&values) {
        for c in dens.iter().take(6) {
            let scaled = loc.zeta_raw(&loc.base.mul(&f.num, c), &loc.base.mul(&f.den, c))?;
            report.check(scaled == *z, "well-defined", || {
                format!("{} scaled by {}", loc.format_fraction(f), loc.base.format(c))
            });
        }
        if z.is_unit() && *f != t.one() {
            kernel.push(loc.format_fraction(f));
        }
        images.insert(z.clone());
    }
    for (i, j) in (0..samples.len()).zip((1..samples.len()).chain(std::iter::once(0))) {
        let (a, b) = (&samples[i], &samples[j]);
        report.check(loc.zeta(&t.add(a, b))? == target.add(&values[i], &values[j]), "preserves-sum", || {
            format!("{} + {}", loc.format_fraction(a), loc.format_fraction(b))
        });
        report.check(loc.zeta(&t.mul(a, b))? == target.mul(&values[i], &values[j]), "preserves-product", || {
            format!("{} * {}", loc.format_fraction(a), loc.format_fraction(b))
        });
    }
    let mut codomain = BTreeSet::new();
    for a in &elems {
        for d in &dens {
            codomain.insert(FgRingIdeal::principal(&loc.ring_local, &loc.local_fraction(a, d)?)?);
        }
    }
    for ideal in &codomain {
        report.check(images.contains(ideal), "surjective", || ideal.format());
    }
    report.note("kernel_size", kernel.len());
    report.note("kernel", json!(kernel.iter().take(20).collect::<Vec<_>>()));
    report.note(
        "image",
        json!(images.iter().map(FgRingIdeal::format).collect::<Vec<_>>()),
    );
    report.note("samples", samples.len());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(ring: &RingDescriptor, gen: &str) -> LocalizedData {
        let p = FgRingIdeal::principal(ring, &ring.parse_element(gen).unwrap()).unwrap();
        localize_at_prime(&SpectrumPoint::new(p).unwrap()).unwrap()
    }

    #[test]
    fn generic_point_of_integers() {
        let loc = at(&RingDescriptor::Integers, "0");
        let two_thirds = loc.semiring_local().fraction(&RingElement::int(2), &RingElement::int(3)).unwrap();
        assert!(loc.zeta(&two_thirds).unwrap().is_unit());
        let report = zeta_kernel_probe(&loc, 8).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert!(report.details["kernel_size"].as_u64().unwrap() >= 10);
        assert_eq!(report.details["image"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn zeta_at_a_prime_sends_p_to_p() {
        let loc = at(&RingDescriptor::Integers, "3");
        let z = loc.zeta(&loc.iota(&RingElement::int(3))).unwrap();
        assert_eq!(z.format(), "<3>");
        assert!(loc.zeta(&loc.iota(&RingElement::int(2))).unwrap().is_unit());
        let report = zeta_kernel_probe(&loc, 12).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        let images: Vec<String> = report.details["image"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        assert_eq!(images, ["<0>", "<1>", "<3>", "<9>"]);
    }

    #[test]
    fn denominators_outside_the_set_are_rejected() {
        let loc = at(&RingDescriptor::Integers, "3");
        assert!(loc.zeta_raw(&RingElement::int(1), &RingElement::int(6)).is_err());
    }

    #[test]
    fn mu_is_a_seminorm_and_factors_through_zeta() {
        for (ring, gen) in [
            (RingDescriptor::Integers, "0"),
            (RingDescriptor::Integers, "5"),
            (RingDescriptor::parse("F2[x]").unwrap(), "x^2 + x + 1"),
            (RingDescriptor::parse("Q").unwrap(), "0"),
        ] {
            let loc = at(&ring, gen);
            let (samples, _) = loc.samples(3).unwrap();
            let samples: Vec<_> = samples.into_iter().take(40).collect();
            let report = loc.mu_seminorm_check(&samples).unwrap();
            assert!(report.pass, "{gen}: {:?}", report.witnesses);
            let report = loc.zeta_mu_check(&samples).unwrap();
            assert!(report.pass, "{gen}: {:?}", report.witnesses);
        }
    }

    #[test]
    fn mu_is_not_integral_on_a_localization() {
        let loc = at(&RingDescriptor::Integers, "0");
        assert!(!loc.mu_valuation().is_integral().unwrap());
        assert!(crate::trop::induced_vhat(&loc.mu_valuation()).is_err());
    }

    #[test]
    fn field_at_zero_is_boolean() {
        let loc = at(&RingDescriptor::Rationals, "0");
        let (_, fracs) = loc.samples(3).unwrap();
        assert_eq!(fracs.len(), 2);
    }

    #[test]
    fn primes_inside_correspond() {
        let spec = speck_truncated(&RingDescriptor::Integers, 12).unwrap();
        for p in ["0", "2", "7"] {
            let loc = at(&RingDescriptor::Integers, p);
            let report = loc.prime_bijection_check(&spec, 6).unwrap();
            assert!(report.pass, "{p}: {:?}", report.witnesses);
            let expected = if p == "0" { 1 } else { 2 };
            assert_eq!(report.details["primes"], expected);
        }
    }
}
