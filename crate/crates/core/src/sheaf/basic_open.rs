use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{EuclideanDomain, FgRingIdeal, LocalSet, Pid, RingDescriptor, RingElement, RingMorphism};
use crate::semiring::{Frac, PidFractions, PidMultSet, Semiring};
use crate::spectrum::{localize_at_prime, LocalizedData, SpectrumPoint, TruncatedSpectrum};
use crate::trop::{fgid_functor, FgModSemimodule, Submodule};

fn pid_of(ring: &RingDescriptor) -> Result<Pid> {
    ring.as_pid()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a principal ideal domain", ring.name())))
}

/// Sections of the structure sheaf of `Spec_k(fgId(R))` over `D_k(u(f))`: the
/// semiring `T_f` of fractions `⟨a⟩/⟨f⟩ⁿ` in lowest terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicOpenSections {
    f: RingElement,
    fractions: PidFractions<Pid>,
}

pub fn structure_sections_on_basic_open(ring: &RingDescriptor, f: &RingElement) -> Result<BasicOpenSections> {
    let pid = pid_of(ring)?;
    ring.check(f)?;
    let f = pid.normalize(f);
    Ok(BasicOpenSections {
        fractions: PidFractions::new(pid, PidMultSet::PowersOf(f.clone())),
        f,
    })
}

impl BasicOpenSections {
    pub fn pid(&self) -> &Pid {
        &self.fractions.domain
    }

    pub fn denominator(&self) -> &RingElement {
        &self.f
    }

    pub fn semiring(&self) -> &PidFractions<Pid> {
        &self.fractions
    }

    /// Whether the open is empty, in which case every section is zero.
    pub fn is_empty_open(&self) -> bool {
        self.pid().is_zero(&self.f)
    }

    /// `⟨a⟩/⟨f⟩ⁿ`.
    pub fn section(&self, a: &RingElement, n: u32) -> Result<Frac<RingElement>> {
        let pid = self.pid();
        self.fractions.fraction(&pid.normalize(a), &pid.pow(&self.f, n))
    }

    /// Whether `D(g) ⊆ D(f)`, where `g` is the denominator of `other`.
    pub fn contains_open(&self, other: &BasicOpenSections) -> bool {
        other.fractions.inverts(&self.f)
    }

    pub fn restrict(&self, to: &BasicOpenSections, s: &Frac<RingElement>) -> Result<Frac<RingElement>> {
        if !self.contains_open(to) {
            return Err(Error::Domain(format!(
                "D({}) is not inside D({})",
                self.pid().format(&to.f),
                self.pid().format(&self.f)
            )));
        }
        to.fractions.fraction(&s.num, &s.den)
    }

    /// The value of a section in `T_𝔭` at a point of `D_k(f)`.
    pub fn value_at(&self, loc: &LocalizedData, s: &Frac<RingElement>) -> Result<Frac<RingElement>> {
        loc.semiring_local().fraction(&s.num, &s.den)
    }

    /// Sections `⟨a⟩/⟨f⟩ⁿ` for `a` among `elems` and `n ≤ max_power`.
    pub fn samples(&self, elems: &[RingElement], max_power: u32) -> Result<Vec<Frac<RingElement>>> {
        let mut out = Vec::new();
        for a in elems {
            for n in 0..=max_power {
                out.push(self.section(a, n)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn format(&self, s: &Frac<RingElement>) -> String {
        self.fractions.format(s)
    }
}

/// Restrictions `T → T_f → T_fg` against `T → T_fg`, and sections agreeing at
/// every point of the truncated `D_k(f)` exactly when they are equal.
pub fn basic_open_check(
    spec: &TruncatedSpectrum,
    f: &RingElement,
    further: &[RingElement],
    elems: &[RingElement],
) -> Result<Report> {
    let ring = spec.ring();
    let pid = pid_of(ring)?;
    let sec = structure_sections_on_basic_open(ring, f)?;
    let whole = structure_sections_on_basic_open(ring, &pid.one())?;
    let mut r = Report::new("structure-sheaf-basic-open", format!("fgId({}) on D({})", ring.name(), pid.format(f)));
    let samples = sec.samples(elems, 2)?;
    for g in further {
        let fg = structure_sections_on_basic_open(ring, &pid.mul(f, g))?;
        for a in elems {
            let s = whole.section(a, 0)?;
            let two_step = sec.restrict(&fg, &whole.restrict(&sec, &s)?)?;
            let direct = whole.restrict(&fg, &s)?;
            r.check(two_step == direct, "restriction-composes", || {
                format!("{} on D({})", whole.format(&s), pid.format(g))
            });
        }
        for s in &samples {
            let t = sec.restrict(&fg, s)?;
            r.check(fg.semiring().contains(&t), "restriction-lands", || sec.format(s));
        }
    }
    let points = spec.d_ring(f);
    let locs: Vec<LocalizedData> = points
        .iter()
        .map(|&i| localize_at_prime(&spec.points()[i]))
        .collect::<Result<_>>()?;
    for (i, s) in samples.iter().enumerate() {
        for t in &samples[i..] {
            let equal = s == t;
            let mut pointwise = true;
            for loc in &locs {
                if sec.value_at(loc, s)? != sec.value_at(loc, t)? {
                    pointwise = false;
                    break;
                }
            }
            r.check(equal == pointwise, "sections-are-pointwise", || {
                format!("{} vs {}: equal {equal}, pointwise {pointwise}", sec.format(s), sec.format(t))
            });
        }
    }
    r.note("points", points.len());
    r.note("sections", samples.len());
    if !spec.is_complete() {
        r.note("status", "sampled within the truncation");
    }
    Ok(r)
}

/// The colimit of `fgId(R_f)` over `f ∉ 𝔭` against `fgId(R_𝔭)`, on sampled
/// denominators and ideals.
pub fn affine_stalk_check(point: &SpectrumPoint, elems: &[RingElement]) -> Result<Report> {
    let loc = localize_at_prime(point)?;
    let pid = loc.base().clone();
    let mut r = Report::new("affine-stalk", format!("{} at {}", pid.name(), point.format()));
    let dens: Vec<RingElement> = elems.iter().filter(|d| loc.inverts(d)).cloned().collect();
    let local_ring = |f: &RingElement| RingDescriptor::localized(pid.clone(), LocalSet::PowersOf(f.clone()));
    let to_stalk = |a: &RingElement| -> Result<FgRingIdeal> {
        FgRingIdeal::principal(loc.ring_local(), &loc.to_local(a))
    };
    // germs (f, ⟨a⟩ ⊆ R_f)
    let mut germs: Vec<(RingElement, FgRingIdeal, FgRingIdeal)> = Vec::new();
    for f in &dens {
        let rf = local_ring(f)?;
        for a in elems {
            let ideal = FgRingIdeal::principal(&rf, &rf.make_frac(a.clone(), pid.one()))?;
            germs.push((f.clone(), ideal, to_stalk(a)?));
        }
    }
    // compatibility with restrictions R_f → R_fg
    for (f, ideal, img) in &germs {
        for g in dens.iter().take(6) {
            let fg = pid.normalize(&pid.mul(f, g));
            let rfg = local_ring(&fg)?;
            let m = RingMorphism::canonical(ideal.ring(), &rfg)?;
            let restricted = fgid_functor(&m).apply(ideal)?;
            let (_, num) = restricted.base_generator().expect("principal");
            r.check(to_stalk(&num)? == *img, "compatible-with-restriction", || {
                format!("{} from D({}) to D({})", ideal.format(), pid.format(f), pid.format(&fg))
            });
        }
    }
    // injective on classes: equal images agree on a smaller basic open
    for (i, (f, a, img_a)) in germs.iter().enumerate() {
        for (g, b, img_b) in germs.iter().skip(i + 1).step_by(3) {
            if img_a != img_b {
                continue;
            }
            let (_, na) = a.base_generator().expect("principal");
            let (_, nb) = b.base_generator().expect("principal");
            let away = |x: &RingElement| {
                if pid.is_zero(x) {
                    pid.one()
                } else {
                    let kept = loc_part(&loc, &pid, x);
                    pid.exact_div(&pid.normalize(x), &kept)
                }
            };
            let h = pid.normalize(&pid.mul(&pid.mul(f, g), &pid.mul(&away(&na), &away(&nb))));
            let rh = local_ring(&h)?;
            let ra = fgid_functor(&RingMorphism::canonical(a.ring(), &rh)?).apply(a)?;
            let rb = fgid_functor(&RingMorphism::canonical(b.ring(), &rh)?).apply(b)?;
            r.check(ra == rb, "injective", || {
                format!("{} on D({}) and {} on D({})", a.format(), pid.format(f), b.format(), pid.format(g))
            });
        }
    }
    // surjective onto the sampled principal ideals of R_𝔭
    for a in elems {
        let target = FgRingIdeal::principal(loc.ring_local(), &loc.to_local(a))?;
        r.check(germs.iter().any(|(_, _, img)| *img == target), "surjective", || target.format());
    }
    r.note("germs", germs.len());
    Ok(r)
}

/// The part of `x` that stays a non-unit at the point: the power of its generator.
fn loc_part(loc: &LocalizedData, pid: &Pid, x: &RingElement) -> RingElement {
    let g = loc.point().prime.generator().expect("principal").clone();
    if pid.is_zero(&g) {
        return pid.one();
    }
    let k = pid.multiplicity(&g, x);
    pid.normalize(&pid.pow(&g, k))
}

/// A section `L/⟨f⟩ⁿ` of `Ñ` over `D(f)`, with `n` as small as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSection {
    pub sub: Submodule,
    pub den: RingElement,
    pub power: u32,
}

/// The sheaf `Ñ` on `Spec_k(fgId(R))` attached to `fgMod(Rⁿ)`: sections over `D(f)`
/// are the fractions of submodules by powers of `⟨f⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSheaf {
    module: FgModSemimodule,
}

pub fn module_sheaf_tilde(module: &FgModSemimodule) -> ModuleSheaf {
    ModuleSheaf { module: module.clone() }
}

fn scale(pid: &Pid, c: &RingElement, l: &Submodule) -> Result<Submodule> {
    let rows: Vec<Vec<RingElement>> = l.rows().iter().map(|row| row.iter().map(|x| pid.mul(c, x)).collect()).collect();
    Submodule::new(pid, l.rank(), &rows)
}

impl ModuleSheaf {
    pub fn pid(&self) -> &Pid {
        &self.module.pid
    }

    pub fn rank(&self) -> usize {
        self.module.rank
    }

    /// `L/⟨f⟩ⁿ` in normal form; over the empty open `D(0)` every section is zero.
    pub fn section(&self, sub: &Submodule, f: &RingElement, n: u32) -> Result<ModuleSection> {
        let pid = self.pid();
        if sub.rank() != self.rank() {
            return Err(Error::Domain(format!("submodule of rank {} in a module of rank {}", sub.rank(), self.rank())));
        }
        let f = pid.normalize(f);
        if pid.is_zero(&f) || sub.is_zero() {
            return Ok(ModuleSection {
                sub: Submodule::zero(pid, self.rank()),
                den: f,
                power: 0,
            });
        }
        let (mut l, mut n) = (sub.clone(), n);
        while n > 0 && l.rows().iter().flatten().all(|x| pid.divides(&f, x)) {
            let rows: Vec<Vec<RingElement>> = l.rows().iter().map(|row| row.iter().map(|x| pid.exact_div(x, &f)).collect()).collect();
            l = Submodule::new(pid, self.rank(), &rows)?;
            n -= 1;
        }
        if pid.is_unit(&f) {
            n = 0;
        }
        Ok(ModuleSection { sub: l, den: f, power: n })
    }

    /// Restriction from `D(f)` to `D(g) ⊆ D(f)`: `L/fⁿ = cL/gᵏ` with `gᵏ = c·fⁿ`.
    pub fn restrict(&self, s: &ModuleSection, g: &RingElement) -> Result<ModuleSection> {
        let pid = self.pid();
        let g = pid.normalize(g);
        if pid.is_zero(&g) {
            return self.section(&s.sub, &g, 0);
        }
        let fen = pid.pow(&s.den, s.power);
        let limit = 64 * (s.power + 1);
        let mut gk = pid.one();
        for k in 0..=limit {
            if pid.divides(&fen, &gk) {
                let c = pid.exact_div(&gk, &fen);
                return self.section(&scale(pid, &c, &s.sub)?, &g, k);
            }
            gk = pid.mul(&gk, &g);
        }
        Err(Error::Domain(format!("D({}) is not inside D({})", pid.format(&g), pid.format(&s.den))))
    }

    /// `(⟨a⟩/d)·(L/fⁿ)` for a section of the structure sheaf over the same `D(f)`.
    pub fn act(&self, t: &BasicOpenSections, scalar: &Frac<RingElement>, s: &ModuleSection) -> Result<ModuleSection> {
        let pid = self.pid();
        if !pid.associated(t.denominator(), &s.den) {
            return Err(Error::Domain("sections over different opens".into()));
        }
        // rewrite a/d as a'/fᵐ
        let mut m = 0u32;
        let mut fm = pid.one();
        while !pid.divides(&scalar.den, &fm) {
            fm = pid.mul(&fm, &s.den);
            m += 1;
            if m > 256 {
                return Err(Error::Domain("denominator is not a power of the open".into()));
            }
        }
        let a = pid.mul(&scalar.num, &pid.exact_div(&fm, &scalar.den));
        self.section(&scale(pid, &a, &s.sub)?, &s.den, s.power + m)
    }

    /// Equality of the images in `N_𝔭`: `L/s = L'/s'` iff `s'L = sL'`, since
    /// multiplying by a nonzero ideal is injective on submodules of `Rⁿ`.
    pub fn equal_at(&self, loc: &LocalizedData, s: &ModuleSection, t: &ModuleSection) -> Result<bool> {
        let pid = self.pid();
        for d in [&s.den, &t.den] {
            if s.power + t.power > 0 && !loc.inverts(d) {
                return Err(Error::Domain(format!("{} is not inverted at {}", pid.format(d), loc.point().format())));
            }
        }
        let a = scale(pid, &pid.pow(&t.den, t.power), &s.sub)?;
        let b = scale(pid, &pid.pow(&s.den, s.power), &t.sub)?;
        Ok(a == b)
    }

    pub fn format(&self, s: &ModuleSection) -> String {
        if s.power == 0 {
            s.sub.format()
        } else {
            format!("{}/<{}>^{}", s.sub.format(), self.pid().format(&s.den), s.power)
        }
    }
}

/// Restriction, scalar action and local properties of `Ñ` on sampled sections over `D(f)`.
pub fn module_sheaf_check(
    sheaf: &ModuleSheaf,
    spec: &TruncatedSpectrum,
    f: &RingElement,
    further: &[RingElement],
    subs: &[Submodule],
    scalars: &[RingElement],
) -> Result<Report> {
    let pid = sheaf.pid().clone();
    let mut r = Report::new("module-sheaf", format!("fgMod({}^{}) on D({})", pid.name(), sheaf.rank(), pid.format(f)));
    let t = structure_sections_on_basic_open(&pid.descriptor(), f)?;
    let mut sections = Vec::new();
    for l in subs {
        for n in 0..=2 {
            sections.push(sheaf.section(l, f, n)?);
        }
    }
    for g in further {
        let fg = pid.mul(f, g);
        let tfg = structure_sections_on_basic_open(&pid.descriptor(), &fg)?;
        for h in further {
            let fgh = pid.mul(&fg, h);
            for s in &sections {
                let two = sheaf.restrict(&sheaf.restrict(s, &fg)?, &fgh)?;
                let one = sheaf.restrict(s, &fgh)?;
                r.check(two == one, "restriction-composes", || sheaf.format(s));
            }
        }
        for s in &sections {
            for a in scalars {
                for n in 0..=1 {
                    let c = t.section(a, n)?;
                    let lhs = sheaf.restrict(&sheaf.act(&t, &c, s)?, &fg)?;
                    let rhs = sheaf.act(&tfg, &t.restrict(&tfg, &c)?, &sheaf.restrict(s, &fg)?)?;
                    r.check(lhs == rhs, "action-square", || format!("{} · {}", t.format(&c), sheaf.format(s)));
                }
            }
        }
    }
    let points: Vec<usize> = spec.d_ring(f).into_iter().collect();
    let locs: Vec<LocalizedData> = points
        .iter()
        .map(|&i| localize_at_prime(&spec.points()[i]))
        .collect::<Result<_>>()?;
    for (i, s) in sections.iter().enumerate() {
        for u in &sections[i + 1..] {
            let mut differ_everywhere = true;
            for loc in &locs {
                differ_everywhere &= !sheaf.equal_at(loc, s, u)?;
            }
            r.check((s == u) != differ_everywhere, "sections-are-local", || {
                format!("{} and {}", sheaf.format(s), sheaf.format(u))
            });
        }
        // a germ over D(f) and one over D(fg) agree at a point iff they agree on D(fg)
        for g in further {
            let fg = pid.mul(f, g);
            for u in sections.iter().step_by(2) {
                let w = sheaf.section(&u.sub, &fg, u.power)?;
                let agree = sheaf.restrict(s, &fg)? == w;
                for loc in locs.iter().filter(|l| l.inverts(&fg)) {
                    r.check(sheaf.equal_at(loc, s, &w)? == agree, "stalk-is-localization", || {
                        format!("{} and {} at {}", sheaf.format(s), sheaf.format(&w), loc.point().format())
                    });
                }
            }
        }
    }
    r.note("sections", sections.len());
    r.note("points", json!(points.len()));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::speck_truncated;

    fn z(n: i64) -> RingElement {
        RingElement::int(n)
    }

    fn sub(rows: &[[i64; 2]]) -> Submodule {
        let gens: Vec<Vec<RingElement>> = rows.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect();
        Submodule::new(&Pid::Integers, 2, &gens).unwrap()
    }

    #[test]
    fn whole_space_is_t() {
        let t = structure_sections_on_basic_open(&RingDescriptor::Integers, &z(1)).unwrap();
        assert_eq!(t.section(&z(6), 0).unwrap(), t.semiring().embed(&z(6)));
        assert!(t.section(&z(1), 1).is_ok());
        assert!(t.semiring().fraction(&z(1), &z(2)).is_err());
    }

    #[test]
    fn fractions_normalize() {
        let t = structure_sections_on_basic_open(&RingDescriptor::Integers, &z(6)).unwrap();
        let lhs = t.section(&z(4), 1).unwrap();
        let rhs = t.semiring().fraction(&z(2), &z(3)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(t.format(&lhs), "<2>/<3>");
    }

    #[test]
    fn empty_open_has_one_section() {
        let t = structure_sections_on_basic_open(&RingDescriptor::Integers, &z(0)).unwrap();
        assert!(t.is_empty_open());
        assert_eq!(t.section(&z(5), 3).unwrap(), t.semiring().zero());
        assert_eq!(t.semiring().one(), t.semiring().zero());
    }

    #[test]
    fn basic_open_restrictions_and_points() {
        let spec = speck_truncated(&RingDescriptor::Integers, 40).unwrap();
        let elems: Vec<RingElement> = (0..=12).map(z).collect();
        let r = basic_open_check(&spec, &z(6), &[z(5), z(7), z(1)], &elems).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        let r = basic_open_check(&spec, &z(1), &[z(2), z(3)], &elems).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn affine_stalks_over_z() {
        let elems: Vec<RingElement> = (0..=15).map(z).collect();
        for p in [0, 2, 3] {
            let pt = SpectrumPoint::new(crate::ring::int_ideal(p)).unwrap();
            let r = affine_stalk_check(&pt, &elems).unwrap();
            assert!(r.pass, "{p}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn section_one_zero_over_two() {
        let m = module_sheaf_tilde(&FgModSemimodule::new(Pid::Integers, 2));
        let s = m.section(&sub(&[[1, 0]]), &z(2), 1).unwrap();
        assert_eq!(s.power, 1);
        let doubled = m.section(&sub(&[[2, 0]]), &z(2), 2).unwrap();
        assert_eq!(s, doubled);
        let r = m.restrict(&s, &z(6)).unwrap();
        assert_eq!(r, m.section(&sub(&[[3, 0]]), &z(6), 1).unwrap());
    }

    #[test]
    fn zero_module_gives_zero_sheaf() {
        let m = module_sheaf_tilde(&FgModSemimodule::new(Pid::Integers, 0));
        let zero = Submodule::zero(&Pid::Integers, 0);
        let a = m.section(&zero, &z(2), 0).unwrap();
        let b = m.section(&zero, &z(2), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn module_sheaf_properties() {
        let m = module_sheaf_tilde(&FgModSemimodule::new(Pid::Integers, 2));
        let spec = speck_truncated(&RingDescriptor::Integers, 30).unwrap();
        let subs = [sub(&[[1, 0]]), sub(&[[2, 0], [0, 4]]), sub(&[[3, 1]]), sub(&[[6, 2], [0, 5]]), sub(&[])];
        let r = module_sheaf_check(&m, &spec, &z(2), &[z(3), z(5)], &subs, &[z(2), z(3), z(4)]).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }
}
