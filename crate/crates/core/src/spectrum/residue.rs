use std::collections::HashMap;

use serde_json::{json, Value};

use super::points::SpectrumPoint;
use super::{element_size, small_elements};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{EuclideanDomain, FgRingIdeal, Pid, RingDescriptor};
use crate::semiring::{localize_semiring, FiniteSemiring, Frac, PidFractions, PidMultSet, Semiring};
use crate::trop::{fgid_carrier, FgIdSemiring, KIdealHandle};

/// `T/I` computed on a finite piece of `T = fgId(R)` closed under sums.
#[derive(Debug, Clone)]
pub struct TruncatedQuotient {
    pub semiring: FiniteSemiring,
    pub carrier: Vec<FgRingIdeal>,
    /// Class of each carrier element.
    pub projection: Vec<usize>,
}

impl TruncatedQuotient {
    pub fn class_of(&self, a: &FgRingIdeal) -> Option<usize> {
        self.carrier.iter().position(|c| c == a).map(|k| self.projection[k])
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The quotient of `fgId(R)` by the congruence `a ~ a + i` (`i ∈ h`), on a carrier
/// closed under sums. Products leaving the carrier are brought back by adding a
/// member of `h`, which does not change the class; operations are checked to be
/// well defined wherever the carrier allows.
pub fn truncated_quotient(carrier: &[FgRingIdeal], h: &KIdealHandle) -> Result<TruncatedQuotient> {
    let ring = h.ring().clone();
    let s = FgIdSemiring::new(ring.clone());
    let mut carrier: Vec<FgRingIdeal> = carrier.to_vec();
    carrier.sort();
    carrier.dedup();
    let index: HashMap<FgRingIdeal, usize> = carrier.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
    let members: Vec<usize> = (0..carrier.len()).filter(|&k| h.contains(&carrier[k])).collect();
    let n = carrier.len();
    let sum_index = |a: usize, b: usize| -> Result<usize> {
        index.get(&s.add(&carrier[a], &carrier[b])).copied().ok_or_else(|| {
            Error::Domain(format!(
                "carrier is not closed under sums at {} + {}",
                carrier[a].format(),
                carrier[b].format()
            ))
        })
    };
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for &i in &members {
            let b = sum_index(a, i)?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut class_id = HashMap::new();
    let mut reps = Vec::new();
    let mut projection = Vec::with_capacity(n);
    for a in 0..n {
        let root = find(&mut parent, a);
        let id = *class_id.entry(root).or_insert_with(|| {
            reps.push(a);
            reps.len() - 1
        });
        projection.push(id);
    }
    let class_of_product = |a: usize, b: usize| -> Result<Option<usize>> {
        let p = s.mul(&carrier[a], &carrier[b]);
        if let Some(&k) = index.get(&p) {
            return Ok(Some(projection[k]));
        }
        for &i in &members {
            if let Some(&k) = index.get(&s.add(&p, &carrier[i])) {
                return Ok(Some(projection[k]));
            }
        }
        Ok(None)
    };
    let m = reps.len();
    let mut add = vec![vec![0; m]; m];
    let mut mul = vec![vec![0; m]; m];
    for x in 0..m {
        for y in 0..m {
            add[x][y] = projection[sum_index(reps[x], reps[y])?];
            mul[x][y] = class_of_product(reps[x], reps[y])?.ok_or_else(|| {
                Error::Resource(format!(
                    "carrier too small for {} * {}",
                    carrier[reps[x]].format(),
                    carrier[reps[y]].format()
                ))
            })?;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (projection[a], projection[b]);
            let sum_ok = add[x][y] == projection[sum_index(a, b)?];
            let prod_ok = class_of_product(a, b)?.is_none_or(|c| c == mul[x][y]);
            if !sum_ok || !prod_ok {
                return Err(Error::Structural(format!(
                    "quotient operations are not well defined at ({}, {})",
                    carrier[a].format(),
                    carrier[b].format()
                )));
            }
        }
    }
    let zero = index
        .get(&s.zero())
        .ok_or_else(|| Error::Domain("carrier lacks the zero ideal".into()))?;
    let one = index
        .get(&s.one())
        .ok_or_else(|| Error::Domain("carrier lacks the unit ideal".into()))?;
    let labels = reps.iter().map(|&r| carrier[r].format()).collect();
    let semiring = FiniteSemiring::new(labels, add, mul, projection[*zero], projection[*one])?;
    Ok(TruncatedQuotient {
        semiring,
        carrier,
        projection,
    })
}

#[derive(Debug, Clone)]
pub enum ResidueKind {
    /// `Frac(fgId(D))` at the generic point of a PID that is not a field.
    Fractions(PidFractions<Pid>),
    /// The fraction semiring of a computed finite quotient `T/𝔭†`.
    Finite { semiring: FiniteSemiring, complete: bool },
}

/// `κ(𝔭) = Frac(T/𝔭†)`.
#[derive(Debug, Clone)]
pub struct ResidueSemifield {
    pub point: SpectrumPoint,
    pub kind: ResidueKind,
}

/// Computes the residue semifield at a point. Away from the generic point of an
/// infinite PID the quotient `T/𝔭†` is found on a carrier of ideals up to
/// `bound` (raised to the size of the prime), then localized at its nonzero classes.
pub fn residue_semifield(point: &SpectrumPoint, bound: u64) -> Result<ResidueSemifield> {
    let ring = point.ring();
    if let Some(pid) = ring.as_pid() {
        let g = point.prime.generator().expect("principal").clone();
        if point.prime.is_zero() && !matches!(pid, Pid::Field(_)) {
            return Ok(ResidueSemifield {
                point: point.clone(),
                kind: ResidueKind::Fractions(PidFractions::new(pid, PidMultSet::AllNonzero)),
            });
        }
        let bound = bound.max(element_size(&pid, &g)?);
        let (carrier, complete) = match ring {
            RingDescriptor::Integers | RingDescriptor::UniPoly(_) => {
                let elems = small_elements(&pid, bound)?;
                let carrier = elems
                    .iter()
                    .map(|a| FgRingIdeal::principal(ring, a))
                    .collect::<Result<Vec<_>>>()?;
                (carrier, false)
            }
            _ => fgid_carrier(ring, bound)?,
        };
        return finite_residue(point, &carrier, complete);
    }
    match ring {
        RingDescriptor::IntegersMod(_) | RingDescriptor::PolyQuotient { .. } => {
            let (carrier, complete) = fgid_carrier(ring, 0)?;
            finite_residue(point, &carrier, complete)
        }
        _ => Err(Error::Unsupported(format!("residue semifields of {}", ring.name()))),
    }
}

fn finite_residue(point: &SpectrumPoint, carrier: &[FgRingIdeal], complete: bool) -> Result<ResidueSemifield> {
    let q = truncated_quotient(carrier, &point.handle)?;
    let s = &q.semiring;
    let nonzero: Vec<usize> = s.elements().filter(|&x| x != s.zero_index()).collect();
    let loc = localize_semiring(s, &nonzero)?;
    Ok(ResidueSemifield {
        point: point.clone(),
        kind: ResidueKind::Finite {
            semiring: loc.semiring,
            complete,
        },
    })
}

impl ResidueSemifield {
    /// Number of elements, when finite.
    pub fn size(&self) -> Option<usize> {
        match &self.kind {
            ResidueKind::Fractions(_) => None,
            ResidueKind::Finite { semiring, .. } => Some(semiring.size()),
        }
    }

    /// `1 ≠ 0`, and every nonzero element is invertible: exhaustively on finite
    /// representations, on fractions of elements up to `bound` otherwise.
    pub fn semifield_check(&self, bound: u64) -> Result<Report> {
        let mut report = Report::new("residue-semifield", format!("{} at {}", self.point.ring().name(), self.point.format()));
        match &self.kind {
            ResidueKind::Finite { semiring: s, .. } => {
                report.check(s.zero_index() != s.one_index(), "nontrivial", String::new);
                report.check(s.check_semiring_axioms().is_ok(), "semiring-axioms", || {
                    format!("{:?}", s.check_semiring_axioms().violations)
                });
                for a in s.elements().filter(|&a| a != s.zero_index()) {
                    let inv = s.elements().any(|b| s.times(a, b) == s.one_index());
                    report.check(inv, "invertible", || s.label(a).to_string());
                }
            }
            ResidueKind::Fractions(f) => {
                report.check(f.zero() != f.one(), "nontrivial", String::new);
                let elems = small_elements(&f.domain, bound)?;
                let nonzero: Vec<_> = elems.iter().filter(|a| !f.domain.is_zero(a)).collect();
                for a in &nonzero {
                    for b in &nonzero {
                        let x = f.fraction(a, b)?;
                        let inv = f.fraction(b, a)?;
                        report.check(f.mul(&x, &inv) == f.one(), "invertible", || f.format(&x));
                    }
                }
            }
        }
        Ok(report)
    }

    /// Normal form of `⟨a⟩/⟨b⟩` in the fraction representation.
    pub fn fraction(&self, a: &crate::ring::RingElement, b: &crate::ring::RingElement) -> Result<Frac<crate::ring::RingElement>> {
        match &self.kind {
            ResidueKind::Fractions(f) => f.fraction(&f.domain.normalize(a), &f.domain.normalize(b)),
            ResidueKind::Finite { .. } => Err(Error::Domain("finite residue semifield has no fraction form".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            ResidueKind::Fractions(f) => json!({
                "point": self.point.format(),
                "kind": "fractions",
                "description": format!("Frac(fgId({}))", f.domain.name()),
            }),
            ResidueKind::Finite { semiring, complete } => json!({
                "point": self.point.format(),
                "kind": "finite",
                "complete": complete,
                "size": semiring.size(),
                "elements": semiring.labels(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, RingElement};
    use crate::trop::correspondence_forward;

    fn point(ring: &RingDescriptor, gen: &str) -> SpectrumPoint {
        SpectrumPoint::new(FgRingIdeal::principal(ring, &ring.parse_element(gen).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn quotient_of_integers_by_twelve_has_divisor_classes() {
        let carrier: Vec<_> = (0..=40).map(int_ideal).collect();
        let q = truncated_quotient(&carrier, &correspondence_forward(&int_ideal(12))).unwrap();
        assert_eq!(q.semiring.size(), 6);
        assert!(q.semiring.check_semiring_axioms().is_ok());
        assert_eq!(q.class_of(&int_ideal(8)), q.class_of(&int_ideal(4)));
        assert_eq!(q.class_of(&int_ideal(0)), q.class_of(&int_ideal(12)));
        assert_ne!(q.class_of(&int_ideal(2)), q.class_of(&int_ideal(4)));
    }

    #[test]
    fn residue_at_a_prime_is_boolean() {
        for p in ["2", "3", "7"] {
            let k = residue_semifield(&point(&RingDescriptor::Integers, p), 20).unwrap();
            assert_eq!(k.size(), Some(2), "{p}");
            let report = k.semifield_check(5).unwrap();
            assert!(report.pass, "{:?}", report.witnesses);
        }
        let f2x = RingDescriptor::parse("F2[x]").unwrap();
        let k = residue_semifield(&point(&f2x, "x^2 + x + 1"), 3).unwrap();
        assert_eq!(k.size(), Some(2));
        let z12 = RingDescriptor::integers_mod(12).unwrap();
        let k = residue_semifield(&point(&z12, "2"), 0).unwrap();
        assert_eq!(k.size(), Some(2));
    }

    #[test]
    fn generic_residue_is_positive_rationals() {
        let k = residue_semifield(&point(&RingDescriptor::Integers, "0"), 10).unwrap();
        assert_eq!(k.size(), None);
        let a = k.fraction(&RingElement::int(4), &RingElement::int(6)).unwrap();
        let b = k.fraction(&RingElement::int(-2), &RingElement::int(3)).unwrap();
        assert_eq!(a, b);
        assert!(k.semifield_check(8).unwrap().pass);
    }

    #[test]
    fn field_residue_is_boolean() {
        let k = residue_semifield(&point(&RingDescriptor::Rationals, "0"), 3).unwrap();
        assert_eq!(k.size(), Some(2));
    }
}
