use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::basic_open::{structure_sections_on_basic_open, BasicOpenSections};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{ideal_product, ideal_sum, EuclideanDomain, FgRingIdeal, LocalSet, Pid, RingDescriptor, RingElement};
use crate::semiring::{localize_semiring, Frac, Semiring};
use crate::spectrum::{divisors, localize_at_prime, speck_truncated, truncated_quotient, LocalizedData, SpectrumPoint, TruncatedSpectrum};
use crate::trop::correspondence_forward;

/// Where to compare: the generic stalk, a basic open `D(f)`, or the whole space.
#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonOpen {
    Generic,
    Whole,
    Basic(RingElement),
}

impl ComparisonOpen {
    /// `generic`, `whole` or `D(f)`.
    pub fn parse(ring: &RingDescriptor, text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "generic" => Ok(ComparisonOpen::Generic),
            "whole" => Ok(ComparisonOpen::Whole),
            _ => {
                let inner = t
                    .strip_prefix("D(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown open {t:?}: use generic, whole or D(f)")))?;
                Ok(ComparisonOpen::Basic(ring.parse_element(inner)?))
            }
        }
    }
}

fn ideal_key(i: &FgRingIdeal) -> String {
    i.format()
}

/// `φ(s)(𝔭) = ζ_𝔭(s(𝔭))` for a section over `D(f)`, at each point of the truncated open.
fn phi_section(sec: &BasicOpenSections, locs: &[LocalizedData], s: &Frac<RingElement>) -> Result<Vec<FgRingIdeal>> {
    locs.iter().map(|l| l.zeta(&sec.value_at(l, s)?)).collect()
}

fn compare_basic(
    r: &mut Report,
    spec: &TruncatedSpectrum,
    pid: &Pid,
    f: &RingElement,
    elems: &[RingElement],
) -> Result<Value> {
    let ring = spec.ring();
    let sec = structure_sections_on_basic_open(ring, f)?;
    let pts: Vec<usize> = spec.d_ring(f).into_iter().collect();
    let locs: Vec<LocalizedData> = pts
        .iter()
        .map(|&i| localize_at_prime(&spec.points()[i]))
        .collect::<Result<_>>()?;
    let samples = sec.samples(elems, 2)?;
    let images: Vec<Vec<FgRingIdeal>> = samples
        .iter()
        .map(|s| phi_section(&sec, &locs, s))
        .collect::<Result<_>>()?;
    let open = format!("D({})", pid.format(f));

    let t = sec.semiring();
    for (a, s) in samples.iter().enumerate().step_by(3) {
        for (b, u) in samples.iter().enumerate().step_by(5) {
            let sum = phi_section(&sec, &locs, &t.add(s, u))?;
            let prod = phi_section(&sec, &locs, &t.mul(s, u))?;
            for k in 0..locs.len() {
                let ok_sum = sum[k] == ideal_sum(&images[a][k], &images[b][k])?;
                let ok_prod = prod[k] == ideal_product(&images[a][k], &images[b][k])?;
                r.check(ok_sum && ok_prod, "pointwise-morphism", || {
                    format!("{}, {} at {} on {open}", sec.format(s), sec.format(u), locs[k].point().format())
                });
            }
        }
    }
    // naturality along D(fg) ⊆ D(f)
    for g in elems.iter().filter(|g| !pid.is_zero(g) && !pid.is_unit(g)).take(4) {
        let fg = pid.mul(f, g);
        let smaller = structure_sections_on_basic_open(ring, &fg)?;
        let sub: Vec<(usize, LocalizedData)> = pts
            .iter()
            .enumerate()
            .filter(|(_, &p)| spec.d_ring(&fg).contains(&p))
            .map(|(k, &p)| Ok((k, localize_at_prime(&spec.points()[p])?)))
            .collect::<Result<_>>()?;
        let sub_locs: Vec<LocalizedData> = sub.iter().map(|(_, l)| l.clone()).collect();
        for (a, s) in samples.iter().enumerate() {
            let restricted = phi_section(&smaller, &sub_locs, &sec.restrict(&smaller, s)?)?;
            let direct: Vec<FgRingIdeal> = sub.iter().map(|(k, _)| images[a][*k].clone()).collect();
            r.check(restricted == direct, "naturality", || {
                format!("{} from {open} to D({})", sec.format(s), pid.format(&fg))
            });
        }
    }
    let one = t.one();
    let kernel: Vec<String> = samples
        .iter()
        .zip(&images)
        .filter(|(s, img)| **s != one && img.iter().all(FgRingIdeal::is_unit))
        .map(|(s, _)| sec.format(s))
        .collect();
    let mut by_image: HashMap<Vec<String>, usize> = HashMap::new();
    for img in &images {
        *by_image.entry(img.iter().map(ideal_key).collect()).or_default() += 1;
    }
    Ok(json!({
        "points": pts.len(),
        "sections": samples.len(),
        "kernel_size": kernel.len(),
        "kernel": kernel.iter().take(20).collect::<Vec<_>>(),
        "kernel_nontrivial": !kernel.is_empty(),
        "injective_on_samples": by_image.len() == samples.len(),
    }))
}

fn compare_generic(r: &mut Report, ring: &RingDescriptor, bound: u64) -> Result<Value> {
    let point = SpectrumPoint::new(FgRingIdeal::zero(ring))?;
    let loc = localize_at_prime(&point)?;
    let (_, fracs) = loc.samples(bound)?;
    let t = loc.semiring_local();
    let mut kernel = Vec::new();
    let mut image: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_image: HashMap<String, usize> = HashMap::new();
    for s in &fracs {
        let z = loc.zeta(s)?;
        *image.entry(ideal_key(&z)).or_default() += 1;
        *by_image.entry(ideal_key(&z)).or_default() += 1;
        if *s != t.one() && z.is_unit() {
            kernel.push(loc.format_fraction(s));
        }
    }
    let local = loc.ring_local();
    for target in [FgRingIdeal::zero(local), FgRingIdeal::unit(local)] {
        r.check(image.contains_key(&ideal_key(&target)), "surjective", || {
            format!("{} is not hit at the generic point", target.format())
        });
    }
    Ok(json!({
        "points": 1,
        "sections": fracs.len(),
        "image": image.keys().collect::<Vec<_>>(),
        "kernel_size": kernel.len(),
        "kernel": kernel.iter().take(20).collect::<Vec<_>>(),
        "kernel_nontrivial": !kernel.is_empty(),
        "injective_on_samples": by_image.len() == fracs.len(),
    }))
}

/// The comparison `φ: 𝒪_{Spec_k(T)} → Trop(𝒪_{Spec R})` through the pointwise
/// maps `ζ_𝔭`, on the requested opens: morphism and naturality checks, and the
/// sampled kernel (sections other than 1 sent to the unit ideal everywhere).
pub fn comparison_phi(ring: &RingDescriptor, opens: &[ComparisonOpen], bound: u64) -> Result<Report> {
    let pid = ring
        .as_pid()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a principal ideal domain", ring.name())))?;
    let mut r = Report::new("comparison-phi", format!("fgId({})", ring.name()));
    let spec = speck_truncated(ring, bound)?;
    let elems: Vec<RingElement> = crate::spectrum::small_elements(&pid, bound.min(12))?
        .into_iter()
        .take(16)
        .collect();
    let mut per_open = BTreeMap::new();
    let mut nontrivial = false;
    for o in opens {
        let (name, v) = match o {
            ComparisonOpen::Generic => ("generic".to_string(), compare_generic(&mut r, ring, bound.min(12))?),
            ComparisonOpen::Whole => ("whole".to_string(), compare_basic(&mut r, &spec, &pid, &pid.one(), &elems)?),
            ComparisonOpen::Basic(f) => (format!("D({})", pid.format(f)), compare_basic(&mut r, &spec, &pid, f, &elems)?),
        };
        nontrivial |= v["kernel_nontrivial"] == true;
        per_open.insert(name, v);
    }
    r.note("opens", json!(per_open));
    r.note("kernel_nontrivial", nontrivial);
    r.note("truncation", bound);
    Ok(r)
}

/// Sections over `D(f)` of the pushforward of the structure sheaf of `Spec_k(T/I)`,
/// namely `(T/I)_f`, against those of the quotient `T_f/I_f`, for `I = ⟨n⟩` in ℤ or
/// `K[x]`. Both are computed on finite carriers and compared through
/// `[d]/[f]ʲ ↦ [d/fʲ]`; the outcome is reported, not asserted.
pub fn closed_subscheme_comparison(ring: &RingDescriptor, n: &RingElement, f: &RingElement, max_power: u32) -> Result<Report> {
    let pid = ring
        .as_pid()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a principal ideal domain", ring.name())))?;
    let (n, f) = (pid.normalize(n), pid.normalize(f));
    if pid.is_zero(&n) || pid.is_zero(&f) {
        return Err(Error::Domain("n and f must be nonzero".into()));
    }
    let mut r = Report::new(
        "closed-subscheme-sections",
        format!("{}, I = <{}>, D({})", ring.name(), pid.format(&n), pid.format(&f)),
    );
    let principal = |a: &RingElement| FgRingIdeal::principal(ring, a);

    // (T/I)_f
    let mut carrier: Vec<FgRingIdeal> = divisors(&pid, &n)?.iter().map(principal).collect::<Result<_>>()?;
    carrier.push(FgRingIdeal::zero(ring));
    let tq = truncated_quotient(&carrier, &correspondence_forward(&principal(&n)?))?;
    let s = &tq.semiring;
    let f_bar = tq
        .class_of(&principal(&pid.gcd(&f, &n))?)
        .ok_or_else(|| Error::Structural("gcd(f, n) is not in the carrier".into()))?;
    let mut powers = vec![s.one_index()];
    loop {
        let next = s.times(*powers.last().expect("nonempty"), f_bar);
        if powers.contains(&next) {
            break;
        }
        powers.push(next);
    }
    let loc = localize_semiring(s, &powers)?;

    // T_f / I_f on fractions d/fᵏ
    let sec = structure_sections_on_basic_open(ring, &f)?;
    let t = sec.semiring();
    let fk = pid.pow(&f, max_power);
    let mut fr: Vec<Frac<RingElement>> = vec![t.zero()];
    for a in divisors(&pid, &pid.mul(&n, &fk))? {
        for b in divisors(&pid, &fk)? {
            fr.push(t.fraction(&a, &b)?);
        }
    }
    fr.sort();
    fr.dedup();
    let index: HashMap<&Frac<RingElement>, usize> = fr.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let n_away = pid.strip(&LocalSet::PowersOf(f.clone()), &n);
    let members: Vec<usize> = (0..fr.len()).filter(|&k| pid.divides(&n_away, &fr[k].num)).collect();
    let mut parent: Vec<usize> = (0..fr.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for x in 0..fr.len() {
        for &i in &members {
            if let Some(&y) = index.get(&t.add(&fr[x], &fr[i])) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..fr.len()).map(|k| find(&mut parent, k)).collect();
    let right_class = roots.clone();
    roots.sort_unstable();
    roots.dedup();

    // [d]/[f]ʲ ↦ [d/fʲ]
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut well_defined = true;
    for a in s.elements() {
        let d = tq.carrier[tq.projection.iter().position(|&c| c == a).expect("class has a member")]
            .generator()
            .expect("principal")
            .clone();
        for (k, &den) in loc.denominators.iter().enumerate() {
            let j = powers.iter().position(|&p| p == den).expect("denominator is a power") as u32;
            if j > max_power {
                continue;
            }
            let x = t.fraction(&d, &pid.pow(&f, j))?;
            let Some(&xi) = index.get(&x) else { continue };
            let rc = right_class[xi];
            match map.get(&loc.class[a][k]) {
                Some(&prev) if prev != rc => well_defined = false,
                _ => {
                    map.insert(loc.class[a][k], rc);
                }
            }
        }
    }
    let mut hit: Vec<usize> = map.values().copied().collect();
    hit.sort_unstable();
    hit.dedup();
    let bijective = well_defined && map.len() == loc.semiring.size() && hit.len() == map.len() && hit.len() == roots.len();
    r.note("pushforward_size", loc.semiring.size());
    r.note("quotient_size", roots.len());
    r.note("map_well_defined", well_defined);
    r.note("equal", bijective);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        RingElement::int(n)
    }

    #[test]
    fn generic_kernel_over_z() {
        let r = comparison_phi(&RingDescriptor::Integers, &[ComparisonOpen::Generic], 12).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        let g = &r.details["opens"]["generic"];
        assert_eq!(g["kernel_nontrivial"], true);
        let kernel: Vec<String> = serde_json::from_value(g["kernel"].clone()).unwrap();
        assert!(kernel.contains(&"<2>/<3>".to_string()));
        assert!(g["kernel_size"].as_u64().unwrap() >= 10);
    }

    #[test]
    fn basic_opens_over_z() {
        let opens = [
            ComparisonOpen::Whole,
            ComparisonOpen::Basic(z(6)),
            ComparisonOpen::parse(&RingDescriptor::Integers, "D(10)").unwrap(),
        ];
        let r = comparison_phi(&RingDescriptor::Integers, &opens, 30).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        let d6 = &r.details["opens"]["D(6)"];
        // 1/3 = 2/6 is sent to the unit ideal at every point of D(6)
        let kernel: Vec<String> = serde_json::from_value(d6["kernel"].clone()).unwrap();
        assert!(kernel.contains(&"<1>/<3>".to_string()), "{kernel:?}");
        // on the whole space only units have unit images
        assert_eq!(r.details["opens"]["whole"]["kernel_size"], 0);
    }

    #[test]
    fn field_is_injective() {
        let r = comparison_phi(&RingDescriptor::Rationals, &[ComparisonOpen::Generic, ComparisonOpen::Whole], 5).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        for o in ["generic", "whole"] {
            assert_eq!(r.details["opens"][o]["injective_on_samples"], true);
            assert_eq!(r.details["opens"][o]["kernel_nontrivial"], false);
        }
    }

    #[test]
    fn polynomial_ring() {
        let ring = RingDescriptor::parse("F2[x]").unwrap();
        let opens = [ComparisonOpen::Generic, ComparisonOpen::parse(&ring, "D(x)").unwrap()];
        let r = comparison_phi(&ring, &opens, 3).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        assert_eq!(r.details["kernel_nontrivial"], true);
    }

    #[test]
    fn bad_open_names() {
        assert!(ComparisonOpen::parse(&RingDescriptor::Integers, "nowhere").is_err());
    }

    #[test]
    fn closed_subscheme_sizes() {
        for (n, f) in [(12, 1), (12, 5), (12, 2), (30, 3)] {
            let r = closed_subscheme_comparison(&RingDescriptor::Integers, &z(n), &z(f), 2).unwrap();
            assert_eq!(r.details["map_well_defined"], true, "{n} {f}");
        }
        let r = closed_subscheme_comparison(&RingDescriptor::Integers, &z(12), &z(1), 2).unwrap();
        // fgId(Z/12) has six elements
        assert_eq!(r.details["pushforward_size"], 6);
    }
}
