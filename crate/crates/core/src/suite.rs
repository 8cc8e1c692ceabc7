//! Seeded end-to-end verification runs, shared by the command line and the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ideal::{verify_retraction_congruences, verify_retraction_ideals};
use crate::report::Report;
use crate::ring::{
    ideal_canonicalize, ideal_product, ideal_sum, int_ideal, is_primary_ring_ideal, is_prime_ring_ideal, ring_radical,
    squarefree_u64, EuclideanDomain, FgRingIdeal, FieldKind, Pid, RingDescriptor, RingElement,
};
use crate::semiring::catalogue::corpus;
use crate::semiring::Semiring;
use crate::sheaf::{
    fixture_presheaves, phi_presheaf, sheaf_axioms_check, sheafification_check, sheafify, stalk_commutation_check,
    GluingData, TropScheme,
};
use crate::spectrum::{
    localize_at_prime, natgcd_spectrum_check, quotient_diagram_check, radical_handle, speck_truncated, zeta_kernel_probe,
    PointSet, SpectrumPoint,
};
use crate::trop::{
    check_module_seminorm, correspondence_check, correspondence_forward, handle_sum, integer_candidates, is_realization,
    kideal_product, kideal_product_cross_check, literal_is_primary, literal_is_prime, module_correspondence_check,
    natgcd_isomorphism_check, universal_property_check, FgIdSemiring, FgModSemimodule, KIdealHandle, Submodule,
    ValuationData,
};

pub const DEFAULT_SEED: u64 = 20240917;
pub const DEFAULT_TRIALS: usize = 200;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Where random ideals and submodules are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Ring { ring: RingDescriptor, size: i64 },
    Lattice { rank: usize, entries: i64 },
}

impl Backend {
    /// `Z`, `F5[x]`, `Q[x,y]`, .. or `Z^n` for submodules of a free module.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rank) = t.strip_prefix("Z^") {
            let rank = rank.parse().map_err(|_| Error::Parse(format!("bad rank in {t:?}")))?;
            return Ok(Backend::Lattice { rank, entries: 50 });
        }
        let ring = RingDescriptor::parse(t)?;
        let size = match &ring {
            RingDescriptor::Integers => 60,
            RingDescriptor::Rationals => 20,
            _ => 4,
        };
        Ok(Backend::Ring { ring, size })
    }

    pub fn name(&self) -> String {
        match self {
            Backend::Ring { ring, .. } => ring.name(),
            Backend::Lattice { rank, .. } => format!("Z^{rank}"),
        }
    }

    fn ring(&self) -> Result<(&RingDescriptor, i64)> {
        match self {
            Backend::Ring { ring, size } => Ok((ring, *size)),
            Backend::Lattice { .. } => Err(Error::Unsupported(format!("{} has no ideals", self.name()))),
        }
    }
}

fn random_generators<R: Rng>(ring: &RingDescriptor, rng: &mut R, size: i64) -> Vec<RingElement> {
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| ring.random(rng, size)).collect()
}

/// An ideal with one to three random generators.
pub fn random_ideal<R: Rng>(ring: &RingDescriptor, rng: &mut R, size: i64) -> Result<FgRingIdeal> {
    ideal_canonicalize(ring, &random_generators(ring, rng, size))
}

/// A small multiple of one of the given generators.
fn member<R: Rng>(ring: &RingDescriptor, gens: &[RingElement], rng: &mut R) -> RingElement {
    let g = &gens[rng.gen_range(0..gens.len())];
    let scale = if *ring == RingDescriptor::Integers { 3 } else { 0 };
    ring.mul(&ring.random(rng, scale), g)
}

const BATCH: usize = 10;

/// Round trips, membership and order preservation for `trials` random ideals
/// (or submodules), checked in batches so that order is compared pairwise within each batch.
pub fn correspondence_trials(backend: &Backend, trials: usize, seed: u64) -> Result<Report> {
    let mut rng = seeded(seed);
    let mut report = Report::new("correspondence-trials", backend.name());
    let mut done = 0;
    while done < trials {
        let n = BATCH.min(trials - done);
        match backend {
            Backend::Ring { ring, size } => {
                let gens: Vec<Vec<RingElement>> = (0..n).map(|_| random_generators(ring, &mut rng, *size)).collect();
                let ideals: Vec<FgRingIdeal> = gens.iter().map(|g| ideal_canonicalize(ring, g)).collect::<Result<_>>()?;
                // Buchberger over Q can blow up on pairs of dense quartics, so probes stay smaller than the ideals
                let mut probes: Vec<RingElement> = (0..6).map(|_| ring.random(&mut rng, (*size / 2).max(1))).collect();
                probes.extend(gens.iter().map(|g| member(ring, g, &mut rng)));
                report.absorb(correspondence_check(&ideals, &probes)?);
            }
            Backend::Lattice { rank, entries } => {
                let m = FgModSemimodule::new(Pid::Integers, *rank);
                let subs: Vec<Submodule> = (0..n).map(|_| m.random_submodule(&mut rng, *entries, 3)).collect();
                let mut probes: Vec<Vec<RingElement>> = (0..6).map(|_| m.random_vector(&mut rng, *entries)).collect();
                for s in &subs {
                    let mut v: Vec<RingElement> = (0..*rank).map(|_| RingElement::int(0)).collect();
                    for row in s.rows() {
                        let c = Pid::Integers.random(&mut rng, 3);
                        for (x, y) in v.iter_mut().zip(row) {
                            *x = Pid::Integers.add(x, &Pid::Integers.mul(&c, y));
                        }
                    }
                    probes.push(v);
                }
                report.absorb(module_correspondence_check(&subs, &probes)?);
            }
        }
        done += n;
    }
    report.note("trials", trials);
    report.note("seed", seed);
    report.note("backend", backend.name());
    Ok(report)
}

/// For random triples: the handle product is the handle of the ring product and is
/// generated by products of principal generators, and it distributes over handle sums.
pub fn product_trials(backend: &Backend, trials: usize, seed: u64) -> Result<Report> {
    let (ring, size) = backend.ring()?;
    let mut rng = seeded(seed);
    let s = FgIdSemiring::new(ring.clone());
    let mut report = Report::new("kideal-product-trials", backend.name());
    for t in 0..trials {
        let ideals: Vec<FgRingIdeal> = (0..3).map(|_| random_ideal(ring, &mut rng, size)).collect::<Result<_>>()?;
        let h: Vec<KIdealHandle> = ideals.iter().map(correspondence_forward).collect();
        let prod = kideal_product(&h[0], &h[1])?;
        let ring_side = ideal_product(&ideals[0], &ideals[1])?;
        report.check(prod == correspondence_forward(&ring_side), "product-is-ring-product", || {
            format!("{} and {}", ideals[0].format(), ideals[1].format())
        });
        let mut generated = s.zero();
        for g in ideals[0].canonical() {
            for k in ideals[1].canonical() {
                generated = s.add(&generated, &s.mul(&s.principal(g)?, &s.principal(k)?));
            }
        }
        report.check(generated == ring_side, "generated-by-products", || {
            format!("{} vs {}", generated.format(), ring_side.format())
        });
        let left = kideal_product(&h[0], &handle_sum(&h[1], &h[2])?)?;
        let right = handle_sum(&kideal_product(&h[0], &h[1])?, &kideal_product(&h[0], &h[2])?)?;
        report.check(left == right, "distributive", || {
            format!("{} x ({} + {})", h[0].format(), h[1].format(), h[2].format())
        });
        if t % 20 == 0 {
            report.absorb(kideal_product_cross_check(&h[0], &h[1], &mut rng, 3)?);
        }
    }
    report.note("trials", trials);
    report.note("seed", seed);
    Ok(report)
}

fn literal_is_radical(h: &KIdealHandle, candidates: &[FgRingIdeal], max_power: u32) -> bool {
    let s = FgIdSemiring::new(h.ring().clone());
    candidates.iter().filter(|c| !h.contains(c)).all(|c| {
        let mut power = c.clone();
        (1..max_power).all(|_| {
            power = s.mul(&power, c);
            !h.contains(&power)
        })
    })
}

/// Primary, prime and radical status of `⟨n⟩` for `2 ≤ n ≤ max`, on the ring and by the
/// literal semiring definitions over divisor candidates, and `√h = h(squarefree part)`.
pub fn primary_prime_radical_run(max: u64) -> Result<Report> {
    let mut report = Report::new("primary-prime-radical", "fgId(Z)");
    let mut counts = [0usize; 3];
    for n in 2..=max {
        let i = int_ideal(n as i64);
        let h = correspondence_forward(&i);
        let cands = integer_candidates(n, 12);
        let power = 64 - n.leading_zeros();
        let statuses = [
            ("primary", is_primary_ring_ideal(&i)?, literal_is_primary(&h, &cands, power)),
            ("prime", is_prime_ring_ideal(&i)?, literal_is_prime(&h, &cands)),
            ("radical", ring_radical(&i)? == i, literal_is_radical(&h, &cands, power)),
        ];
        for (k, (name, ring_side, literal)) in statuses.into_iter().enumerate() {
            counts[k] += ring_side as usize;
            report.check(ring_side == literal, name, || format!("<{n}>: ring {ring_side}, literal {literal}"));
        }
        let rad = radical_handle(&h)?;
        report.check(rad == correspondence_forward(&int_ideal(squarefree_u64(n) as i64)), "radical-is-squarefree", || {
            format!("<{n}> has radical {}", rad.format())
        });
    }
    report.note("primary", counts[0]);
    report.note("prime", counts[1]);
    report.note("radical", counts[2]);
    Ok(report)
}

/// Both retraction theorems on every semiring of the built-in corpus.
pub fn retraction_corpus_run() -> Result<Report> {
    let mut report = Report::new("retraction-corpus", "corpus");
    let c = corpus();
    for (name, s) in &c {
        let mut a = verify_retraction_congruences(s)?;
        a.semiring = name.clone();
        let mut b = verify_retraction_ideals(s)?;
        b.semiring = name.clone();
        report.absorb(a);
        report.absorb(b);
    }
    report.note("semirings", c.len());
    Ok(report)
}

/// `V_k(I) ∪ V_k(J) = V_k(I×J)`, `V_k(I) ∩ V_k(J) = V_k(I+J)` on random pairs and the
/// intersection law on random families of three, plus the fixed-list topology check.
pub fn topology_trials(ring: &RingDescriptor, bound: u64, pairs: usize, seed: u64) -> Result<Report> {
    let spec = speck_truncated(ring, bound)?;
    let mut rng = seeded(seed);
    let size = if *ring == RingDescriptor::Integers { bound as i64 * 2 } else { bound as i64 };
    let mut report = Report::new("topology-trials", ring.name());
    let vk = |i: &FgRingIdeal| spec.vk(&correspondence_forward(i));
    for _ in 0..pairs {
        let fam: Vec<FgRingIdeal> = (0..3).map(|_| random_ideal(ring, &mut rng, size)).collect::<Result<_>>()?;
        let closed: Vec<PointSet> = fam.iter().map(vk).collect();
        let union: PointSet = closed[0].union(&closed[1]).copied().collect();
        report.check(union == vk(&ideal_product(&fam[0], &fam[1])?), "union-is-product", || {
            format!("{} and {}", fam[0].format(), fam[1].format())
        });
        let meet: PointSet = closed[0].intersection(&closed[1]).copied().collect();
        report.check(meet == vk(&ideal_sum(&fam[0], &fam[1])?), "intersection-is-sum", || {
            format!("{} and {}", fam[0].format(), fam[1].format())
        });
        let meet3: PointSet = meet.intersection(&closed[2]).copied().collect();
        let sum3 = ideal_sum(&ideal_sum(&fam[0], &fam[1])?, &fam[2])?;
        report.check(meet3 == vk(&sum3), "family-intersection-is-sum", || {
            format!("{}, {} and {}", fam[0].format(), fam[1].format(), fam[2].format())
        });
    }
    let ideals: Vec<FgRingIdeal> = (0..12).map(|_| random_ideal(ring, &mut rng, size)).collect::<Result<_>>()?;
    let elems: Vec<RingElement> = (0..12).map(|_| ring.random(&mut rng, size)).collect();
    report.absorb(spec.topology_check(&ideals, &elems)?);
    report.note("points", spec.len());
    report.note("pairs", pairs);
    report.note("seed", seed);
    Ok(report)
}

/// The quotient diagram for `⟨12⟩`, `⟨30⟩`, `⟨1⟩` in ℤ and `⟨x²+x⟩` in `F2[x]`.
pub fn quotient_diagram_run() -> Result<Report> {
    let mut report = Report::new("quotient-diagram-fixtures", "Z, F2[x]");
    for n in [12, 30, 1] {
        report.absorb(quotient_diagram_check(&RingDescriptor::Integers, &int_ideal(n), 60)?);
    }
    let f2x = RingDescriptor::parse("F2[x]")?;
    let i = FgRingIdeal::principal(&f2x, &f2x.parse_element("x^2 + x")?)?;
    report.absorb(quotient_diagram_check(&f2x, &i, 4)?);
    Ok(report)
}

/// Stalk commutation at every point of every presheaf fixture.
pub fn stalks_run() -> Result<Report> {
    let mut report = Report::new("stalk-commutation-fixtures", "fixtures");
    let mut names = Vec::new();
    for (name, p) in fixture_presheaves() {
        let phi = phi_presheaf(&p)?;
        for x in 0..p.site().num_points() {
            let mut r = stalk_commutation_check(&phi, x)?;
            r.semiring = format!("{name} at {}", p.site().points()[x]);
            report.absorb(r);
        }
        names.push(name);
    }
    report.note("fixtures", names);
    Ok(report)
}

/// Sheafification of the `fgId` presheaf of every fixture.
pub fn sheafification_run() -> Result<Report> {
    let mut report = Report::new("sheafification-fixtures", "fixtures");
    for (name, p) in fixture_presheaves() {
        let phi = phi_presheaf(&p)?;
        let mut r = sheafification_check(phi.semirings())?;
        r.semiring = name.clone();
        report.absorb(r);
        let sheaf = sheafify(phi.semirings())?;
        let mut again = sheaf_axioms_check(sheaf.sheaf())?;
        again.semiring = name;
        report.absorb(again);
    }
    Ok(report)
}

/// `Trop` of the projective line over `field`, charts truncated at `bound`.
pub fn projective_line_run(field: &str, bound: u64) -> Result<TropScheme> {
    crate::sheaf::trop_scheme(&GluingData::projective_line(field)?, bound)
}

/// The generic stalk of `Spec_k(ℕ^gcd)`: `ζ` from fractions onto `𝔹`.
pub fn generic_kernel_run(sample_bound: u64) -> Result<Report> {
    let point = SpectrumPoint::new(FgRingIdeal::zero(&RingDescriptor::Integers))?;
    let loc = localize_at_prime(&point)?;
    let mut report = zeta_kernel_probe(&loc, sample_bound)?;
    let kernel = report.details.get("kernel_size").and_then(|v| v.as_u64()).unwrap_or(0);
    report.check(kernel >= 10, "kernel-witnesses", || format!("only {kernel} kernel fractions"));
    Ok(report)
}

/// `fgId(ℤ) ≅ ℕ^gcd`: realization up to `max` and both tables on `pairs` random pairs.
pub fn natgcd_realization_run(max: u64, pairs: usize, seed: u64) -> Result<Report> {
    let mut report = is_realization(&ValuationData::nat_gcd_abs(), max)?;
    report.absorb(natgcd_isomorphism_check(max, pairs, &mut seeded(seed))?);
    report.note("seed", seed);
    Ok(report)
}

pub fn natgcd_spectrum_run() -> Result<Report> {
    natgcd_spectrum_check(100, 1000)
}

/// The valuations in the catalogue, each with a sampling range.
pub fn valuation_catalogue() -> Result<Vec<(ValuationData, i64)>> {
    let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
    let f5x = RingDescriptor::uni_poly(FieldKind::Prime(5), "x");
    Ok(vec![
        (ValuationData::universal(&RingDescriptor::Integers), 200),
        (ValuationData::collapse_to_boolean(&RingDescriptor::Integers), 200),
        (ValuationData::nat_gcd_abs(), 200),
        (ValuationData::collapse_to_boolean(&RingDescriptor::Rationals), 20),
        (ValuationData::universal(&qx), 3),
        (ValuationData::universal(&f5x), 4),
        (ValuationData::universal(&RingDescriptor::integers_mod(12)?), 12),
    ])
}

/// Factorization through `u_R` and uniqueness for each catalogued valuation, and the
/// module analogue for `u_M` on `ℤ²`: the seminorm laws and that every submodule is
/// the sum of the cyclic submodules of any of its generating sets.
pub fn universal_property_run(samples: usize, seed: u64) -> Result<Report> {
    let mut rng = seeded(seed);
    let mut report = Report::new("universal-property-catalogue", "catalogue");
    let mut names = Vec::new();
    for (v, size) in valuation_catalogue()? {
        let xs: Vec<RingElement> = (0..samples).map(|_| v.source.random(&mut rng, size)).collect();
        report.absorb(universal_property_check(&v, &xs, &mut rng)?);
        names.push(format!("{} on {}", v.name, v.source.name()));
    }
    let m = FgModSemimodule::new(Pid::Integers, 2);
    let vectors: Vec<Vec<RingElement>> = (0..samples).map(|_| m.random_vector(&mut rng, 50)).collect();
    let scalars: Vec<RingElement> = (0..3).map(|_| Pid::Integers.random(&mut rng, 20)).collect();
    let c = FgRingIdeal::unit(&RingDescriptor::Integers);
    let mut strong = true;
    for chunk in vectors.chunks(25) {
        let r = check_module_seminorm(&m, &scalars, chunk, &c)?;
        strong &= r.details.get("strong_equality") == Some(&json!(true));
        report.absorb(r);
    }
    report.check(strong, "module-strong-equality", || "u_M(rm) differs from u_R(r)u_M(m)".into());
    for chunk in vectors.chunks(3) {
        let sub = Submodule::new(&Pid::Integers, 2, chunk)?;
        let mut gens: Vec<Vec<RingElement>> = sub.rows().to_vec();
        let z = Pid::Integers;
        let combo: Vec<RingElement> = (0..2)
            .map(|k| {
                chunk.iter().enumerate().fold(z.zero(), |acc, (c, v)| {
                    z.add(&acc, &z.mul(&RingElement::int(c as i64 + 2), &v[k]))
                })
            })
            .collect();
        gens.push(combo);
        for presentation in [chunk.to_vec(), gens] {
            let mut total = Submodule::zero(&Pid::Integers, 2);
            for g in &presentation {
                total = total.sum(&m.u_m(g)?)?;
            }
            report.check(total == sub, "module-uniqueness", || sub.format());
        }
    }
    names.push("u_M on Z^2".into());
    report.note("catalogue", names);
    report.note("samples", samples);
    report.note("seed", seed);
    Ok(report)
}
