use crate::error::Result;
use crate::report::Report;
use crate::ring::{
    ideal_product, ideal_sum, induced_ideal_map, FgRingIdeal, RingDescriptor, RingElement, RingMorphism,
};
use crate::semiring::Semiring;

/// The semiring of finitely generated ideals of a ring, with sum and product of ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgIdSemiring {
    ring: RingDescriptor,
}

impl FgIdSemiring {
    pub fn new(ring: RingDescriptor) -> Self {
        FgIdSemiring { ring }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn principal(&self, a: &RingElement) -> Result<FgRingIdeal> {
        FgRingIdeal::principal(&self.ring, a)
    }
}

impl Semiring for FgIdSemiring {
    type Elem = FgRingIdeal;

    fn zero(&self) -> FgRingIdeal {
        FgRingIdeal::zero(&self.ring)
    }
    fn one(&self) -> FgRingIdeal {
        FgRingIdeal::unit(&self.ring)
    }
    fn add(&self, a: &FgRingIdeal, b: &FgRingIdeal) -> FgRingIdeal {
        ideal_sum(a, b).expect("ideals of the same ring")
    }
    fn mul(&self, a: &FgRingIdeal, b: &FgRingIdeal) -> FgRingIdeal {
        ideal_product(a, b).expect("ideals of the same ring")
    }
    fn contains(&self, a: &FgRingIdeal) -> bool {
        *a.ring() == self.ring
    }
    fn name(&self) -> String {
        format!("fgId({})", self.ring.name())
    }
}

/// The universal valuation `a ↦ ⟨a⟩`.
pub fn u_r(ring: &RingDescriptor, a: &RingElement) -> Result<FgRingIdeal> {
    FgRingIdeal::principal(ring, a)
}

/// `fgId(f)`: the map on finitely generated ideals induced by a ring morphism.
#[derive(Debug, Clone)]
pub struct FgIdMorphism {
    morphism: RingMorphism,
}

impl FgIdMorphism {
    pub fn source(&self) -> FgIdSemiring {
        FgIdSemiring::new(self.morphism.source().clone())
    }

    pub fn target(&self) -> FgIdSemiring {
        FgIdSemiring::new(self.morphism.target().clone())
    }

    pub fn morphism(&self) -> &RingMorphism {
        &self.morphism
    }

    /// The ideal generated by the images of the generators.
    pub fn apply(&self, i: &FgRingIdeal) -> Result<FgRingIdeal> {
        induced_ideal_map(&self.morphism, i)
    }

    /// Checks `fgId(f)(⟨a⟩) = ⟨f(a)⟩` on samples, and that sums and products are preserved.
    pub fn check_naturality(&self, samples: &[RingElement]) -> Result<Report> {
        let src = self.source();
        let tgt = self.target();
        let mut report = Report::new("fgid-naturality", src.name());
        for a in samples {
            let left = self.apply(&u_r(src.ring(), a)?)?;
            let right = u_r(tgt.ring(), &self.morphism.apply(a)?)?;
            report.check(left == right, "square-commutes", || {
                format!(
                    "a = {}: {} vs {}",
                    src.ring().format(a),
                    left.format(),
                    right.format()
                )
            });
        }
        for pair in samples.windows(2) {
            let i = u_r(src.ring(), &pair[0])?;
            let j = u_r(src.ring(), &pair[1])?;
            let (fi, fj) = (self.apply(&i)?, self.apply(&j)?);
            let sum = self.apply(&src.add(&i, &j))?;
            report.check(sum == tgt.add(&fi, &fj), "preserves-sum", || {
                format!("{} + {}", i.format(), j.format())
            });
            let prod = self.apply(&src.mul(&i, &j))?;
            report.check(prod == tgt.mul(&fi, &fj), "preserves-product", || {
                format!("{} * {}", i.format(), j.format())
            });
        }
        report.check(self.apply(&src.one())? == tgt.one(), "preserves-one", String::new);
        report.check(self.apply(&src.zero())? == tgt.zero(), "preserves-zero", String::new);
        Ok(report)
    }
}

/// The functor `fgId` on catalogued ring morphisms.
pub fn fgid_functor(f: &RingMorphism) -> FgIdMorphism {
    FgIdMorphism { morphism: f.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, FieldKind};
    use crate::semiring::{idempotent_on, simple_on};

    #[test]
    fn universal_valuation_normalizes() {
        assert_eq!(u_r(&RingDescriptor::Integers, &RingElement::int(-6)).unwrap(), int_ideal(6));
        assert_eq!(u_r(&RingDescriptor::Integers, &RingElement::int(0)).unwrap(), int_ideal(0));
        let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
        let got = u_r(&qx, &qx.parse_element("2*x^2 - 2").unwrap()).unwrap();
        let want = u_r(&qx, &qx.parse_element("x^2 - 1").unwrap()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.format(), want.format());
    }

    #[test]
    fn fgid_of_integers_is_simple_and_idempotent() {
        let s = FgIdSemiring::new(RingDescriptor::Integers);
        let samples: Vec<_> = (0..40).map(int_ideal).collect();
        assert!(idempotent_on(&s, &samples));
        assert!(simple_on(&s, &samples));
        assert_eq!(s.add(&int_ideal(4), &int_ideal(6)), int_ideal(2));
        assert_eq!(s.mul(&int_ideal(4), &int_ideal(6)), int_ideal(24));
    }

    #[test]
    fn reduction_mod_six() {
        let z6 = RingDescriptor::integers_mod(6).unwrap();
        let f = fgid_functor(&RingMorphism::canonical(&RingDescriptor::Integers, &z6).unwrap());
        let img = f.apply(&int_ideal(4)).unwrap();
        assert_eq!(img, FgRingIdeal::principal(&z6, &RingElement::int(2)).unwrap());
        let samples: Vec<_> = (-12..12).map(RingElement::int).collect();
        let report = f.check_naturality(&samples).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
    }

    #[test]
    fn shift_substitution() {
        let qx = RingDescriptor::uni_poly(FieldKind::Rationals, "x");
        let shift =
            RingMorphism::substitution(&qx, &qx, vec![qx.parse_element("x + 1").unwrap()]).unwrap();
        let f = fgid_functor(&shift);
        let x = u_r(&qx, &qx.var(0).unwrap()).unwrap();
        assert_eq!(f.apply(&x).unwrap(), u_r(&qx, &qx.parse_element("x + 1").unwrap()).unwrap());
        let id = fgid_functor(&RingMorphism::Identity(qx.clone()));
        assert_eq!(id.apply(&x).unwrap(), x);
    }
}
