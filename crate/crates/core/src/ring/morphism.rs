use num_rational::BigRational;

use super::{
    ideal_canonicalize, EuclideanDomain, FgRingIdeal, LocalSet, Pid, RingDescriptor, RingElement,
};
use crate::error::{Error, Result};

/// The catalogue of ring morphisms with computable images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingMorphism {
    Identity(RingDescriptor),
    /// The structure map determined by the rings: reductions ℤ → ℤ/n,
    /// ℤ/n → ℤ/m for m | n, `K[x] → K[x]/(g)`, inclusions into localizations,
    /// and maps into the zero ring.
    Canonical {
        source: RingDescriptor,
        target: RingDescriptor,
    },
    /// A K-algebra map out of a polynomial ring (or its localization) sending
    /// the variables to `images`.
    Substitution {
        source: RingDescriptor,
        target: RingDescriptor,
        images: Vec<RingElement>,
    },
}

fn unsupported<T>(s: &RingDescriptor, t: &RingDescriptor) -> Result<T> {
    Err(Error::Domain(format!(
        "no catalogued morphism {} -> {}",
        s.name(),
        t.name()
    )))
}

impl RingMorphism {
    pub fn canonical(source: &RingDescriptor, target: &RingDescriptor) -> Result<Self> {
        use RingDescriptor as R;
        let ok = match (source, target) {
            (_, R::Zero) => true,
            (s, t) if s == t => true,
            (R::Integers, R::IntegersMod(_) | R::PrimeField(_) | R::Rationals) => true,
            (R::Integers, R::Localized { base: Pid::Integers, .. }) => true,
            (R::IntegersMod(n), R::IntegersMod(m)) => n % m == 0,
            (R::IntegersMod(n), R::PrimeField(p)) => n % p == 0,
            (R::UniPoly(r), R::PolyQuotient { ring, .. }) => r == ring,
            (R::UniPoly(r), R::Localized { base: Pid::UniPoly(b), .. }) => r == b,
            (R::PolyQuotient { ring: r1, modulus: g }, R::PolyQuotient { ring: r2, modulus: h }) => {
                r1 == r2 && r1.divides(h, g)
            }
            (R::Localized { base: b1, set: s1 }, R::Localized { base: b2, set: s2 }) => {
                b1 == b2 && set_inverted(b1, s1, s2)
            }
            _ => false,
        };
        if !ok {
            return unsupported(source, target);
        }
        Ok(RingMorphism::Canonical {
            source: source.clone(),
            target: target.clone(),
        })
    }

    pub fn substitution(
        source: &RingDescriptor,
        target: &RingDescriptor,
        images: Vec<RingElement>,
    ) -> Result<Self> {
        let nvars = source.var_names().len();
        if nvars == 0 || images.len() != nvars {
            return Err(Error::Domain(format!(
                "substitution from {} needs {nvars} images",
                source.name()
            )));
        }
        if let RingDescriptor::PolyQuotient { .. } = source {
            return Err(Error::Domain("substitution out of a quotient ring".into()));
        }
        for img in &images {
            target.check(img)?;
        }
        let m = RingMorphism::Substitution {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        // denominators of the source must stay invertible
        if let RingDescriptor::Localized { base, set } = source {
            let gen = match set {
                LocalSet::PowersOf(f) => Some(f.clone()),
                _ => None,
            };
            match gen {
                Some(f) => {
                    let img = m.apply(&source.make_frac(f, base.one()))?;
                    if !target.is_unit(&img) {
                        return Err(Error::Domain("substitution does not invert the denominators".into()));
                    }
                }
                None => return unsupported(source, target),
            }
        }
        Ok(m)
    }

    pub fn source(&self) -> &RingDescriptor {
        match self {
            RingMorphism::Identity(r) => r,
            RingMorphism::Canonical { source, .. } | RingMorphism::Substitution { source, .. } => source,
        }
    }

    pub fn target(&self) -> &RingDescriptor {
        match self {
            RingMorphism::Identity(r) => r,
            RingMorphism::Canonical { target, .. } | RingMorphism::Substitution { target, .. } => target,
        }
    }

    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        self.source().check(a)?;
        match self {
            RingMorphism::Identity(_) => Ok(a.clone()),
            RingMorphism::Canonical { source, target } => apply_canonical(source, target, a),
            RingMorphism::Substitution { source, target, images } => {
                apply_substitution(source, target, images, a)
            }
        }
    }

    /// Composite `other ∘ self` when both are substitutions or identities.
    pub fn then(&self, other: &RingMorphism) -> Result<RingMorphism> {
        if self.target() != other.source() {
            return Err(Error::Domain("morphisms are not composable".into()));
        }
        match (self, other) {
            (RingMorphism::Identity(_), m) | (m, RingMorphism::Identity(_)) => Ok(m.clone()),
            (RingMorphism::Substitution { source, images, .. }, _) => {
                let imgs = images.iter().map(|x| other.apply(x)).collect::<Result<Vec<_>>>()?;
                RingMorphism::substitution(source, other.target(), imgs)
            }
            _ => RingMorphism::canonical(self.source(), other.target()),
        }
    }
}

/// Whether every element of the saturation of `from` is inverted by `to`.
fn set_inverted(base: &Pid, from: &LocalSet, to: &LocalSet) -> bool {
    match from {
        LocalSet::PowersOf(f) => base.in_saturation(to, f),
        LocalSet::AvoidingPrime(q) => match to {
            LocalSet::AllNonzero => true,
            LocalSet::AvoidingPrime(q2) => base.associated(q, q2),
            LocalSet::PowersOf(f) => base.is_zero(f),
        },
        LocalSet::AllNonzero => matches!(to, LocalSet::AllNonzero) || matches!(to, LocalSet::PowersOf(f) if base.is_zero(f)),
    }
}

fn apply_canonical(
    source: &RingDescriptor,
    target: &RingDescriptor,
    a: &RingElement,
) -> Result<RingElement> {
    use RingDescriptor as R;
    if source == target {
        return Ok(a.clone());
    }
    match (source, target, a) {
        (_, R::Zero, _) => Ok(target.zero()),
        (R::Integers | R::IntegersMod(_), _, RingElement::Int(n)) => Ok(target.from_bigint(n)),
        (R::UniPoly(_) | R::PolyQuotient { .. }, R::PolyQuotient { ring, modulus }, RingElement::Poly(p)) => {
            Ok(RingElement::Poly(ring.div_rem(p, modulus).1))
        }
        (R::UniPoly(_), R::Localized { .. }, RingElement::Poly(_)) => {
            let base = match target {
                R::Localized { base, .. } => base,
                _ => unreachable!(),
            };
            Ok(target.make_frac(a.clone(), base.one()))
        }
        (R::Localized { .. }, R::Localized { .. }, RingElement::Frac(n, d)) => {
            Ok(target.make_frac((**n).clone(), (**d).clone()))
        }
        _ => unsupported(source, target),
    }
}

fn scalar(target: &RingDescriptor, c: &BigRational) -> Result<RingElement> {
    target.from_rational(c)
}

fn eval_poly(
    target: &RingDescriptor,
    coeffs: &[BigRational],
    img: &RingElement,
) -> Result<RingElement> {
    let mut acc = target.zero();
    for c in coeffs.iter().rev() {
        acc = target.add(&target.mul(&acc, img), &scalar(target, c)?);
    }
    Ok(acc)
}

fn apply_substitution(
    source: &RingDescriptor,
    target: &RingDescriptor,
    images: &[RingElement],
    a: &RingElement,
) -> Result<RingElement> {
    match (source, a) {
        (RingDescriptor::UniPoly(_), RingElement::Poly(p)) => eval_poly(target, p.coeffs(), &images[0]),
        (RingDescriptor::MultiPoly(_), RingElement::Multi(p)) => {
            let mut acc = target.zero();
            for (m, c) in p.0.terms() {
                let mut t = scalar(target, c)?;
                for (img, &e) in images.iter().zip(m) {
                    t = target.mul(&t, &target.pow(img, e));
                }
                acc = target.add(&acc, &t);
            }
            Ok(acc)
        }
        (RingDescriptor::Localized { base: Pid::UniPoly(_), .. }, RingElement::Frac(n, d)) => {
            let num = eval_poly(target, n.as_poly().unwrap().coeffs(), &images[0])?;
            let den = eval_poly(target, d.as_poly().unwrap().coeffs(), &images[0])?;
            let inv = target
                .inverse(&den)
                .ok_or_else(|| Error::Domain("denominator image is not a unit".into()))?;
            Ok(target.mul(&num, &inv))
        }
        _ => unsupported(source, target),
    }
}

/// Image ideal `⟨f(I)⟩`, computed from the canonical generators.
pub fn induced_ideal_map(f: &RingMorphism, i: &FgRingIdeal) -> Result<FgRingIdeal> {
    if i.ring() != f.source() {
        return Err(Error::Domain(format!(
            "ideal of {} given to a morphism out of {}",
            i.ring().name(),
            f.source().name()
        )));
    }
    let imgs = i
        .canonical()
        .iter()
        .map(|g| f.apply(g))
        .collect::<Result<Vec<_>>>()?;
    ideal_canonicalize(f.target(), &imgs)
}

/// Image ideal computed from the original (non-canonical) generators.
pub fn induced_ideal_map_from_generators(f: &RingMorphism, i: &FgRingIdeal) -> Result<FgRingIdeal> {
    let imgs = i
        .generators()
        .iter()
        .map(|g| f.apply(g))
        .collect::<Result<Vec<_>>>()?;
    ideal_canonicalize(f.target(), &imgs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FieldKind;

    #[test]
    fn reduction_mod_twelve() {
        let f = RingMorphism::canonical(&RingDescriptor::Integers, &RingDescriptor::IntegersMod(12)).unwrap();
        let i = FgRingIdeal::principal(&RingDescriptor::Integers, &RingElement::int(8)).unwrap();
        let img = induced_ideal_map(&f, &i).unwrap();
        assert_eq!(img.canonical(), &[RingElement::int(4)]);
    }

    #[test]
    fn localization_at_x() {
        let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
        let loc = RingDescriptor::parse("Q[x][1/x]").unwrap();
        let f = RingMorphism::canonical(&qx, &loc).unwrap();
        let i = FgRingIdeal::principal(&qx, &qx.parse_element("x^2*(x - 1)").unwrap()).unwrap();
        let img = induced_ideal_map(&f, &i).unwrap();
        let expected = FgRingIdeal::principal(&loc, &loc.parse_element("x - 1").unwrap()).unwrap();
        assert_eq!(img, expected);
    }

    #[test]
    fn shift_substitution() {
        let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
        let f = RingMorphism::substitution(&qx, &qx, vec![qx.parse_element("x + 1").unwrap()]).unwrap();
        let i = FgRingIdeal::principal(&qx, &qx.parse_element("x").unwrap()).unwrap();
        assert_eq!(
            induced_ideal_map(&f, &i).unwrap(),
            FgRingIdeal::principal(&qx, &qx.parse_element("x + 1").unwrap()).unwrap()
        );
    }

    #[test]
    fn laurent_substitution_inverts_variable() {
        let s = RingDescriptor::parse("F2[x][1/x]").unwrap();
        let t = RingDescriptor::parse("F2[y][1/y]").unwrap();
        let f = RingMorphism::substitution(&s, &t, vec![t.parse_element("y^-1").unwrap()]).unwrap();
        let g = RingMorphism::substitution(&t, &s, vec![s.parse_element("x^-1").unwrap()]).unwrap();
        let a = s.parse_element("x^2 + 1").unwrap();
        assert_eq!(g.apply(&f.apply(&a).unwrap()).unwrap(), a);
        assert_eq!(f.then(&g).unwrap().apply(&a).unwrap(), a);
    }

    #[test]
    fn unsupported_pairs_are_domain_errors() {
        let r = RingMorphism::canonical(&RingDescriptor::IntegersMod(6), &RingDescriptor::IntegersMod(4));
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = RingMorphism::canonical(&RingDescriptor::Rationals, &RingDescriptor::Integers);
        assert!(r.is_err());
    }

    #[test]
    fn image_is_presentation_independent() {
        let f = RingMorphism::canonical(&RingDescriptor::Integers, &RingDescriptor::IntegersMod(6)).unwrap();
        let i = ideal_canonicalize(&RingDescriptor::Integers, &[RingElement::int(4), RingElement::int(10)]).unwrap();
        assert_eq!(
            induced_ideal_map(&f, &i).unwrap(),
            induced_ideal_map_from_generators(&f, &i).unwrap()
        );
    }
}
