use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;
use serde_json::{json, Value};

use super::site::{FiniteSite, SiteJson};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{induced_ideal_map_from_generators, FgRingIdeal, RingDescriptor, RingElement, RingMorphism};
use crate::semiring::{FiniteSemiring, Semiring};
use crate::trop::{fgid_carrier, fgid_functor, FgIdSemiring};

/// A presheaf of rings on a finite site: one ring per open and a morphism per inclusion.
#[derive(Debug, Clone)]
pub struct RingPresheaf {
    site: FiniteSite,
    rings: Vec<RingDescriptor>,
    restrictions: BTreeMap<(usize, usize), RingMorphism>,
}

#[derive(Deserialize)]
struct RingPresheafJson {
    #[serde(flatten)]
    site: SiteJson,
    rings: Vec<String>,
}

impl RingPresheaf {
    /// Restrictions are the identity on `U ⊆ U` and the canonical structure maps otherwise.
    pub fn canonical(site: FiniteSite, rings: Vec<RingDescriptor>) -> Result<Self> {
        if rings.len() != site.opens().len() {
            return Err(Error::Structural(format!(
                "{} rings for {} opens",
                rings.len(),
                site.opens().len()
            )));
        }
        let mut restrictions = BTreeMap::new();
        for (u, v) in site.inclusions() {
            let m = if u == v {
                RingMorphism::Identity(rings[u].clone())
            } else {
                RingMorphism::canonical(&rings[u], &rings[v])?
            };
            restrictions.insert((u, v), m);
        }
        Ok(RingPresheaf { site, rings, restrictions })
    }

    /// The same ring on every nonempty open and the zero ring on the empty one.
    pub fn constant(site: FiniteSite, ring: RingDescriptor) -> Result<Self> {
        let rings = (0..site.opens().len())
            .map(|u| if site.open(u).is_empty() { RingDescriptor::Zero } else { ring.clone() })
            .collect();
        Self::canonical(site, rings)
    }

    /// A site description with a `rings` list parallel to its `opens`.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: RingPresheafJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let site = FiniteSite::from_site_json(&j.site)?;
        if j.rings.len() != j.site.opens.len() {
            return Err(Error::Parse(format!("{} rings for {} opens", j.rings.len(), j.site.opens.len())));
        }
        let mut rings = vec![None; site.opens().len()];
        for (labels, ring) in j.site.opens.iter().zip(&j.rings) {
            let s = site
                .open_index(FiniteSite::resolve(site.points(), labels)?)
                .expect("open was parsed from these labels");
            rings[s] = Some(RingDescriptor::parse(ring)?);
        }
        let rings = rings
            .into_iter()
            .map(|r| r.ok_or_else(|| Error::Parse("an open is listed twice".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::canonical(site, rings)
    }

    pub fn site(&self) -> &FiniteSite {
        &self.site
    }

    pub fn ring(&self, u: usize) -> &RingDescriptor {
        &self.rings[u]
    }

    pub fn restriction(&self, u: usize, v: usize) -> &RingMorphism {
        &self.restrictions[&(u, v)]
    }

    /// The stalk at `x`: the ring over the minimal open containing `x`.
    pub fn stalk(&self, x: usize) -> &RingDescriptor {
        &self.rings[self.site.minimal_open(x)]
    }

    fn finite_elements(&self, u: usize) -> Result<Vec<RingElement>> {
        self.rings[u]
            .elements()
            .ok_or_else(|| Error::Unsupported(format!("{} is not finite", self.rings[u].name())))
    }

    /// Identity, composition and ring-morphism laws, by enumeration of all sections.
    pub fn functoriality_check(&self) -> Result<Report> {
        let mut r = Report::new("presheaf-functoriality", self.site.name());
        let n = self.site.opens().len();
        for u in 0..n {
            let elems = self.finite_elements(u)?;
            let ring = &self.rings[u];
            for a in &elems {
                let id = self.restriction(u, u).apply(a)?;
                r.check(id == *a, "identity", || format!("{} on {}", ring.format(a), self.site.open_label(u)));
            }
            for v in (0..n).filter(|&v| self.restrictions.contains_key(&(u, v))) {
                let ruv = self.restriction(u, v);
                let tv = &self.rings[v];
                r.check(ruv.apply(&ring.one())? == tv.one(), "preserves-one", || {
                    format!("{} -> {}", self.site.open_label(u), self.site.open_label(v))
                });
                for a in &elems {
                    for b in &elems {
                        let (fa, fb) = (ruv.apply(a)?, ruv.apply(b)?);
                        let sum_ok = ruv.apply(&ring.add(a, b))? == tv.add(&fa, &fb);
                        let prod_ok = ruv.apply(&ring.mul(a, b))? == tv.mul(&fa, &fb);
                        r.check(sum_ok && prod_ok, "ring-morphism", || {
                            format!("{}, {} on {}", ring.format(a), ring.format(b), self.site.open_label(u))
                        });
                    }
                }
                for w in (0..n).filter(|&w| self.restrictions.contains_key(&(v, w))) {
                    let ruw = self.restriction(u, w);
                    let rvw = self.restriction(v, w);
                    for a in &elems {
                        let ok = rvw.apply(&ruv.apply(a)?)? == ruw.apply(a)?;
                        r.check(ok, "composition", || {
                            format!(
                                "{} along {} ⊇ {} ⊇ {}",
                                ring.format(a),
                                self.site.open_label(u),
                                self.site.open_label(v),
                                self.site.open_label(w)
                            )
                        });
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let sections: BTreeMap<String, String> = (0..self.rings.len())
            .map(|u| (self.site.open_label(u), self.rings[u].name()))
            .collect();
        json!({"site": self.site.to_json(), "rings": sections})
    }
}

/// A presheaf of finite semirings: one table semiring per open and index maps per inclusion.
#[derive(Debug, Clone)]
pub struct SemiringPresheaf {
    site: FiniteSite,
    sections: Vec<FiniteSemiring>,
    restrictions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl SemiringPresheaf {
    pub fn new(
        site: FiniteSite,
        sections: Vec<FiniteSemiring>,
        restrictions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        if sections.len() != site.opens().len() {
            return Err(Error::Structural(format!(
                "{} section semirings for {} opens",
                sections.len(),
                site.opens().len()
            )));
        }
        for (u, v) in site.inclusions() {
            let map = restrictions.get(&(u, v)).ok_or_else(|| {
                Error::Structural(format!("no restriction {} -> {}", site.open_label(u), site.open_label(v)))
            })?;
            if map.len() != sections[u].size() || map.iter().any(|&i| i >= sections[v].size()) {
                return Err(Error::Structural(format!(
                    "restriction {} -> {} has the wrong shape",
                    site.open_label(u),
                    site.open_label(v)
                )));
            }
        }
        Ok(SemiringPresheaf { site, sections, restrictions })
    }

    /// The same semiring on every open, including the empty one, with identity restrictions.
    pub fn constant(site: FiniteSite, s: FiniteSemiring) -> Self {
        let n = site.opens().len();
        let restrictions = site
            .inclusions()
            .into_iter()
            .map(|k| (k, s.elements().collect()))
            .collect();
        SemiringPresheaf {
            sections: vec![s; n],
            site,
            restrictions,
        }
    }

    pub fn site(&self) -> &FiniteSite {
        &self.site
    }

    pub fn sections(&self, u: usize) -> &FiniteSemiring {
        &self.sections[u]
    }

    pub fn restrict(&self, u: usize, v: usize, s: usize) -> usize {
        self.restrictions[&(u, v)][s]
    }

    pub fn stalk(&self, x: usize) -> &FiniteSemiring {
        &self.sections[self.site.minimal_open(x)]
    }

    /// The germ at `x ∈ U` of a section over `U`.
    pub fn germ(&self, u: usize, x: usize, s: usize) -> usize {
        self.restrict(u, self.site.minimal_open(x), s)
    }

    pub fn functoriality_check(&self) -> Report {
        let mut r = Report::new("presheaf-functoriality", self.site.name());
        let incl = self.site.inclusions();
        for &(u, v) in &incl {
            if u == v {
                let ok = self.restrictions[&(u, u)].iter().enumerate().all(|(i, &j)| i == j);
                r.check(ok, "identity", || self.site.open_label(u));
                continue;
            }
            for &(v2, w) in incl.iter().filter(|(a, _)| *a == v) {
                for s in self.sections[u].elements() {
                    let ok = self.restrict(v2, w, self.restrict(u, v, s)) == self.restrict(u, w, s);
                    r.check(ok, "composition", || {
                        format!(
                            "{} along {} ⊇ {} ⊇ {}",
                            self.sections[u].label(s),
                            self.site.open_label(u),
                            self.site.open_label(v),
                            self.site.open_label(w)
                        )
                    });
                }
            }
        }
        r
    }

    /// Every restriction preserves 0, 1, sums and products.
    pub fn morphism_check(&self) -> Report {
        let mut r = Report::new("restriction-morphisms", self.site.name());
        for (u, v) in self.site.inclusions() {
            let (su, sv) = (&self.sections[u], &self.sections[v]);
            let f = |s: usize| self.restrict(u, v, s);
            let label = || format!("{} -> {}", self.site.open_label(u), self.site.open_label(v));
            r.check(f(su.zero_index()) == sv.zero_index(), "preserves-zero", label);
            r.check(f(su.one_index()) == sv.one_index(), "preserves-one", label);
            for a in su.elements() {
                for b in su.elements() {
                    r.check(f(su.plus(a, b)) == sv.plus(f(a), f(b)), "preserves-sum", || {
                        format!("{}, {} on {}", su.label(a), su.label(b), label())
                    });
                    r.check(f(su.times(a, b)) == sv.times(f(a), f(b)), "preserves-product", || {
                        format!("{}, {} on {}", su.label(a), su.label(b), label())
                    });
                }
            }
        }
        r
    }

    pub fn to_json(&self) -> Value {
        let sections: BTreeMap<String, Value> = (0..self.sections.len())
            .map(|u| (self.site.open_label(u), json!(self.sections[u].labels())))
            .collect();
        json!({"site": self.site.to_json(), "sections": sections})
    }
}

/// `Φ(F)`: the presheaf `U ↦ fgId(F(U))` with restrictions `fgId(ρ)`, kept
/// together with `F` and the ideals labelling each section.
#[derive(Debug, Clone)]
pub struct PhiPresheaf {
    rings: RingPresheaf,
    carriers: Vec<Vec<FgRingIdeal>>,
    semirings: SemiringPresheaf,
}

/// `fgId(R)` of a finite ring as a table semiring on its sorted ideals.
pub fn fgid_table(ring: &RingDescriptor) -> Result<(Vec<FgRingIdeal>, FiniteSemiring)> {
    let (carrier, complete) = fgid_carrier(ring, 0)?;
    if !complete {
        return Err(Error::Unsupported(format!("fgId({}) is infinite", ring.name())));
    }
    let t = FgIdSemiring::new(ring.clone());
    let index: HashMap<&FgRingIdeal, usize> = carrier.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let n = carrier.len();
    let mut add = vec![vec![0; n]; n];
    let mut mul = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let lookup = |x: FgRingIdeal| {
                index
                    .get(&x)
                    .copied()
                    .ok_or_else(|| Error::Structural(format!("{} is not in the carrier", x.format())))
            };
            add[a][b] = lookup(t.add(&carrier[a], &carrier[b]))?;
            mul[a][b] = lookup(t.mul(&carrier[a], &carrier[b]))?;
        }
    }
    let labels = carrier.iter().map(|c| c.format()).collect();
    let zero = index[&t.zero()];
    let one = index[&t.one()];
    let s = FiniteSemiring::new(labels, add, mul, zero, one)?;
    Ok((carrier, s))
}

/// Applies `fgId` open-wise and re-checks functoriality of the result.
pub fn phi_presheaf(p: &RingPresheaf) -> Result<PhiPresheaf> {
    let site = p.site().clone();
    let mut carriers = Vec::new();
    let mut sections = Vec::new();
    for u in 0..site.opens().len() {
        let (c, s) = fgid_table(p.ring(u))?;
        carriers.push(c);
        sections.push(s);
    }
    let mut restrictions = BTreeMap::new();
    for (u, v) in site.inclusions() {
        let f = fgid_functor(p.restriction(u, v));
        let map = carriers[u]
            .iter()
            .map(|i| {
                let img = f.apply(i)?;
                carriers[v]
                    .iter()
                    .position(|c| *c == img)
                    .ok_or_else(|| Error::Structural(format!("{} has no image in the carrier", i.format())))
            })
            .collect::<Result<Vec<_>>>()?;
        restrictions.insert((u, v), map);
    }
    let semirings = SemiringPresheaf::new(site, sections, restrictions)?;
    let check = semirings.functoriality_check();
    if !check.pass {
        let w = &check.witnesses[0];
        return Err(Error::Structural(format!("Φ is not functorial here ({}): {}", w.check, w.detail)));
    }
    Ok(PhiPresheaf {
        rings: p.clone(),
        carriers,
        semirings,
    })
}

impl PhiPresheaf {
    pub fn rings(&self) -> &RingPresheaf {
        &self.rings
    }

    pub fn semirings(&self) -> &SemiringPresheaf {
        &self.semirings
    }

    pub fn carrier(&self, u: usize) -> &[FgRingIdeal] {
        &self.carriers[u]
    }
}

/// Equivalence classes of pairs `(U, s)` with `x ∈ U`, where two pairs are identified when
/// they agree on some open `W ∋ x` inside both: the colimit defining a stalk.
fn germ_classes(
    site: &FiniteSite,
    x: usize,
    sizes: &[usize],
    restrict: impl Fn(usize, usize, usize) -> usize,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let opens: Vec<usize> = (0..site.opens().len()).filter(|&u| site.open(u).contains(x)).collect();
    let pairs: Vec<(usize, usize)> = opens.iter().flat_map(|&u| (0..sizes[u]).map(move |s| (u, s))).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let ((u, s), (v, t)) = (pairs[a], pairs[b]);
            let meet = site.open(u).0 & site.open(v).0;
            let agree = opens.iter().any(|&w| {
                site.open(w).0 & !meet == 0 && restrict(u, w, s) == restrict(v, w, t)
            });
            if agree {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let class = (0..pairs.len()).map(|i| find(&mut parent, i)).collect();
    (pairs, class)
}

/// Compares `Φ(F)_x` with `Φ(F_x)` through `[(U, ΣF(U)sᵢ)] ↦ ΣF_x·s_{i,x}`,
/// enumerating every germ class.
pub fn stalk_commutation_check(phi: &PhiPresheaf, x: usize) -> Result<Report> {
    let site = phi.rings.site();
    let mut r = Report::new("stalk-commutation", format!("{} at {}", site.name(), site.points()[x]));
    let ux = site.minimal_open(x);

    // the ring stalk as a colimit agrees with the minimal-open ring
    let ring_elems: Vec<Vec<RingElement>> = (0..site.opens().len())
        .map(|u| phi.rings.finite_elements(u))
        .collect::<Result<_>>()?;
    let elem_index: Vec<HashMap<&RingElement, usize>> = ring_elems
        .iter()
        .map(|es| es.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let ring_sizes: Vec<usize> = ring_elems.iter().map(Vec::len).collect();
    let ring_restrict = |u: usize, w: usize, s: usize| {
        let img = phi.rings.restriction(u, w).apply(&ring_elems[u][s]).expect("element of the source");
        elem_index[w][&img]
    };
    let (_, ring_class) = germ_classes(site, x, &ring_sizes, ring_restrict);
    let mut rc = ring_class.clone();
    rc.sort_unstable();
    rc.dedup();
    r.check(rc.len() == ring_sizes[ux], "ring-stalk-is-minimal-open", || {
        format!("{} germ classes, {} sections over the minimal open", rc.len(), ring_sizes[ux])
    });

    // Φ(F)_x as a colimit
    let sp = &phi.semirings;
    let sizes: Vec<usize> = (0..site.opens().len()).map(|u| sp.sections(u).size()).collect();
    let (pairs, class) = germ_classes(site, x, &sizes, |u, w, s| sp.restrict(u, w, s));

    // Φ(F_x) computed directly from the stalk ring
    let stalk_ring = phi.rings.stalk(x);
    let (target, _) = fgid_table(stalk_ring)?;
    let to_stalk = |u: usize| phi.rings.restriction(u, ux);

    let mut image_of_class: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, &(u, s)) in pairs.iter().enumerate() {
        let ideal = &phi.carriers[u][s];
        let img = induced_ideal_map_from_generators(to_stalk(u), ideal)?;
        let Some(t) = target.iter().position(|c| *c == img) else {
            r.fail("image-in-target", format!("{} has image {} outside fgId of the stalk", ideal.format(), img.format()));
            continue;
        };
        match image_of_class.get(&class[k]) {
            Some(&prev) => {
                r.check(prev == t, "well-defined", || {
                    format!("class of ({}, {}) maps to {} and {}", site.open_label(u), ideal.format(), target[prev].format(), target[t].format())
                });
            }
            None => {
                image_of_class.insert(class[k], t);
            }
        }
    }
    let mut hit = vec![false; target.len()];
    for &t in image_of_class.values() {
        r.check(!hit[t], "injective", || format!("two classes map to {}", target[t].format()));
        hit[t] = true;
    }
    for (t, h) in hit.iter().enumerate() {
        r.check(*h, "surjective", || format!("{} is not hit", target[t].format()));
    }
    r.note("classes", image_of_class.len());
    r.note("stalk", stalk_ring.name());
    r.note("stalk_size", target.len());
    let map: BTreeMap<String, String> = image_of_class
        .iter()
        .map(|(&c, &t)| {
            let k = class.iter().position(|&d| d == c).expect("class has a member");
            let (u, s) = pairs[k];
            (format!("[{}, {}]", site.open_label(u), phi.carriers[u][s].format()), target[t].format())
        })
        .collect();
    r.note("map", json!(map));
    Ok(r)
}

/// The presheaves used as fixtures: finite-ring chains on the one-point,
/// Sierpiński, three-point chain and two-point discrete sites.
pub fn fixture_presheaves() -> Vec<(String, RingPresheaf)> {
    let zn = |n: u64| RingDescriptor::integers_mod(n).expect("modulus");
    let build = |site: FiniteSite, rings: Vec<RingDescriptor>| RingPresheaf::canonical(site, rings).expect("fixture");
    vec![
        ("one-point Z/4".into(), RingPresheaf::constant(FiniteSite::one_point(), zn(4)).expect("fixture")),
        ("sierpinski constant Z/4".into(), RingPresheaf::constant(FiniteSite::sierpinski(), zn(4)).expect("fixture")),
        (
            "sierpinski Z/4 -> Z/2".into(),
            build(FiniteSite::sierpinski(), vec![RingDescriptor::Zero, zn(2), zn(4)]),
        ),
        (
            "chain Z/8 -> Z/4 -> Z/2".into(),
            build(FiniteSite::chain(3), vec![RingDescriptor::Zero, zn(2), zn(4), zn(8)]),
        ),
        (
            "chain Z/4 -> Z/4 -> Z/2".into(),
            build(FiniteSite::chain(3), vec![RingDescriptor::Zero, zn(2), zn(4), zn(4)]),
        ),
        (
            "discrete constant Z/2".into(),
            build(FiniteSite::discrete(2), vec![RingDescriptor::Zero, zn(2), zn(2), zn(2)]),
        ),
        (
            "discrete Z/6 -> Z/2, Z/3".into(),
            build(FiniteSite::discrete(2), vec![RingDescriptor::Zero, zn(2), zn(3), zn(6)]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingDescriptor {
        RingDescriptor::integers_mod(n).unwrap()
    }

    #[test]
    fn constant_z4_on_sierpinski() {
        let p = RingPresheaf::constant(FiniteSite::sierpinski(), z(4)).unwrap();
        assert!(p.functoriality_check().unwrap().pass);
        let phi = phi_presheaf(&p).unwrap();
        let whole = phi.semirings().site().whole();
        let mut labels = phi.semirings().sections(whole).labels().to_vec();
        labels.sort();
        assert_eq!(labels, ["<0>", "<1>", "<2>"]);
        assert_eq!(phi.semirings().sections(0).size(), 1);
    }

    #[test]
    fn restriction_sends_two_to_zero() {
        let p = RingPresheaf::canonical(FiniteSite::sierpinski(), vec![RingDescriptor::Zero, z(2), z(4)]).unwrap();
        let phi = phi_presheaf(&p).unwrap();
        let sp = phi.semirings();
        let (whole, open) = (sp.site().whole(), 1);
        let two = sp.sections(whole).index_of("<2>").unwrap();
        let img = sp.restrict(whole, open, two);
        assert_eq!(sp.sections(open).label(img), "<0>");
        assert!(sp.morphism_check().pass);
    }

    #[test]
    fn one_point_phi_is_fgid_of_the_stalk() {
        let p = RingPresheaf::constant(FiniteSite::one_point(), z(12)).unwrap();
        let phi = phi_presheaf(&p).unwrap();
        let (_, direct) = fgid_table(&z(12)).unwrap();
        assert_eq!(phi.semirings().stalk(0), &direct);
        assert_eq!(direct.size(), 6);
        assert!(stalk_commutation_check(&phi, 0).unwrap().pass);
    }

    #[test]
    fn stalks_commute_on_fixtures() {
        for (name, p) in fixture_presheaves() {
            assert!(p.functoriality_check().unwrap().pass, "{name}");
            let phi = phi_presheaf(&p).unwrap();
            for x in 0..p.site().num_points() {
                let r = stalk_commutation_check(&phi, x).unwrap();
                assert!(r.pass, "{name} at {x}: {:?}", r.witnesses);
            }
        }
    }

    #[test]
    fn sierpinski_stalk_sizes() {
        let p = RingPresheaf::canonical(FiniteSite::sierpinski(), vec![RingDescriptor::Zero, z(2), z(4)]).unwrap();
        let phi = phi_presheaf(&p).unwrap();
        let at = |x| stalk_commutation_check(&phi, x).unwrap().details["classes"].clone();
        // the open point sees Z/2, the closed point sees all of Z/4
        assert_eq!(at(1), json!(2));
        assert_eq!(at(0), json!(3));
    }

    #[test]
    fn parses_presheaf_json() {
        let p = RingPresheaf::from_json(
            r#"{"name":"s","points":["c","o"],"opens":[["c","o"],["o"],[]],"rings":["Z/4","Z/2","0"]}"#,
        )
        .unwrap();
        assert_eq!(p.ring(p.site().whole()), &z(4));
        assert_eq!(p.ring(0), &RingDescriptor::Zero);
    }

    #[test]
    fn non_morphism_is_rejected() {
        assert!(RingPresheaf::canonical(FiniteSite::sierpinski(), vec![RingDescriptor::Zero, z(3), z(4)]).is_err());
    }
}
