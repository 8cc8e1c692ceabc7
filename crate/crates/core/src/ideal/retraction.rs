use super::{
    congruence_generated, enumerate_congruences, enumerate_ideals, enumerate_k_ideals, ideal_closure,
    is_down_closed, is_ideal, is_k_ideal, is_prime, is_continuous, subtractive_closure, Congruence,
    PosetSpace, Subset, Topology,
};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::semiring::{FiniteSemiring, Semiring};

/// The congruence generated by `{(a, 0) : a ∈ ideal}`.
pub fn map_c(s: &FiniteSemiring, ideal: Subset) -> Congruence {
    let zero = s.zero_index();
    let pairs: Vec<(usize, usize)> = ideal.iter().map(|a| (a, zero)).collect();
    congruence_generated(s, &pairs)
}

/// The class of 0.
pub fn map_r(s: &FiniteSemiring, cong: &Congruence) -> Subset {
    let zero = s.zero_index();
    Subset::from_elems(s.elements().filter(|&a| cong.related(a, zero)))
}

/// Subtractive closure of an ideal.
pub fn map_j(s: &FiniteSemiring, ideal: Subset) -> Subset {
    subtractive_closure(s, ideal).0
}

/// Inclusion of k-ideals among ideals.
pub fn map_i(kideal: Subset) -> Subset {
    kideal
}

fn inclusion_space(sets: &[Subset], topology: Topology) -> Result<PosetSpace> {
    PosetSpace::new(sets.len(), |a, b| sets[a].is_subset(sets[b]), topology)
}

fn position<T: PartialEq + std::fmt::Debug>(items: &[T], x: &T) -> Result<usize> {
    items
        .iter()
        .position(|y| y == x)
        .ok_or_else(|| Error::Structural(format!("{x:?} is missing from its enumeration")))
}

fn continuity(
    report: &mut Report,
    name: &str,
    map: &[usize],
    from: &PosetSpace,
    to: &PosetSpace,
    describe: impl Fn(usize) -> String,
) {
    let outcome = is_continuous(map, from, to);
    report.check(outcome.is_ok(), &format!("{name} continuous"), || {
        format!(
            "preimage of the subbasic closed set at {} is not closed",
            describe(outcome.unwrap_err())
        )
    });
}

/// Checks that `r` retracts `Cong(S)` onto `Id_k(S)` for the coarse lower topologies.
pub fn verify_retraction_congruences(s: &FiniteSemiring) -> Result<Report> {
    let mut report = Report::new("retraction-congruences", s.name());
    let kideals = enumerate_k_ideals(s)?;
    let congs = enumerate_congruences(s)?;
    let show = |i: Subset| format!("{:?}", i.labels(s));
    let mut c_map = Vec::with_capacity(kideals.len());
    for &i in &kideals {
        let c = map_c(s, i);
        report.check(c.is_congruence(s), "c(I) is a congruence", || show(i));
        report.check(map_r(s, &c) == i, "r(c(I)) = I", || show(i));
        c_map.push(position(&congs, &c)?);
    }
    let mut r_map = Vec::with_capacity(congs.len());
    for y in &congs {
        let r = map_r(s, y);
        report.check(is_k_ideal(s, r), "r(Y) is a k-ideal", || y.to_json(s).to_string());
        report.check(map_c(s, r).is_subset(y), "c(r(Y)) <= Y", || y.to_json(s).to_string());
        r_map.push(position(&kideals, &r)?);
    }
    let kspace = inclusion_space(&kideals, Topology::CoarseLower)?;
    let cspace = PosetSpace::new(congs.len(), |a, b| congs[a].is_subset(&congs[b]), Topology::CoarseLower)?;
    continuity(&mut report, "r", &r_map, &cspace, &kspace, |x| show(kideals[x]));
    continuity(&mut report, "c", &c_map, &kspace, &cspace, |x| congs[x].to_json(s).to_string());
    report.note("k_ideals", kideals.len());
    report.note("congruences", congs.len());
    Ok(report)
}

/// Checks that `j` retracts `Id(S)` onto `Id_k(S)` for the coarse upper topologies.
pub fn verify_retraction_ideals(s: &FiniteSemiring) -> Result<Report> {
    let mut report = Report::new("retraction-ideals", s.name());
    let ideals = enumerate_ideals(s)?;
    let kideals = enumerate_k_ideals(s)?;
    let show = |i: Subset| format!("{:?}", i.labels(s));
    let mut i_map = Vec::with_capacity(kideals.len());
    for &k in &kideals {
        report.check(map_j(s, map_i(k)) == k, "j(i(I)) = I", || show(k));
        i_map.push(position(&ideals, &map_i(k))?);
    }
    let mut j_map = Vec::with_capacity(ideals.len());
    for &i in &ideals {
        let j = map_j(s, i);
        report.check(i.is_subset(j), "I <= j(I)", || show(i));
        report.check(map_j(s, j) == j, "j(j(I)) = j(I)", || show(i));
        for &other in ideals.iter().filter(|o| i.is_subset(**o)) {
            report.check(j.is_subset(map_j(s, other)), "j monotone", || {
                format!("{} <= {}", show(i), show(other))
            });
        }
        j_map.push(position(&kideals, &j)?);
    }
    let ispace = inclusion_space(&ideals, Topology::CoarseUpper)?;
    let kspace = inclusion_space(&kideals, Topology::CoarseUpper)?;
    continuity(&mut report, "j", &j_map, &ispace, &kspace, |x| show(kideals[x]));
    continuity(&mut report, "i", &i_map, &kspace, &ispace, |x| show(ideals[x]));
    report.note("ideals", ideals.len());
    report.note("k_ideals", kideals.len());
    Ok(report)
}

/// On an idempotent semiring the k-ideals are exactly the downward closed ideals.
pub fn kideals_are_down_closed(s: &FiniteSemiring) -> Result<Report> {
    let mut report = Report::new("k-ideals-down-closed", s.name());
    if !s.is_idempotent() {
        return Err(Error::Domain(format!("{} is not idempotent", s.name())));
    }
    for i in enumerate_ideals(s)? {
        report.check(
            super::is_subtractive(s, i) == is_down_closed(s, i),
            "subtractive iff down-closed",
            || format!("{:?}", i.labels(s)),
        );
    }
    Ok(report)
}

/// `S/c(I)` together with the projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub semiring: FiniteSemiring,
    pub projection: Vec<usize>,
}

impl Quotient {
    pub fn image(&self, set: Subset) -> Subset {
        Subset::from_elems(set.iter().map(|a| self.projection[a]))
    }

    pub fn preimage(&self, set: Subset) -> Subset {
        Subset::from_elems(
            self.projection
                .iter()
                .enumerate()
                .filter(|(_, &p)| set.contains(p))
                .map(|(a, _)| a),
        )
    }
}

/// The quotient by the congruence generated by a k-ideal, with induced tables.
pub fn quotient_semiring(s: &FiniteSemiring, kideal: Subset) -> Result<Quotient> {
    if !is_k_ideal(s, kideal) {
        return Err(Error::Domain(format!("{:?} is not a k-ideal", kideal.labels(s))));
    }
    let cong = map_c(s, kideal);
    let blocks = cong.blocks();
    let reps: Vec<usize> = blocks.iter().map(|b| b.iter().next().expect("nonempty block")).collect();
    let m = blocks.len();
    let mut add = vec![vec![0; m]; m];
    let mut mul = vec![vec![0; m]; m];
    for x in 0..m {
        for y in 0..m {
            add[x][y] = cong.class_of(s.plus(reps[x], reps[y]));
            mul[x][y] = cong.class_of(s.times(reps[x], reps[y]));
        }
    }
    for a in s.elements() {
        for b in s.elements() {
            let (x, y) = (cong.class_of(a), cong.class_of(b));
            if add[x][y] != cong.class_of(s.plus(a, b)) || mul[x][y] != cong.class_of(s.times(a, b)) {
                return Err(Error::Structural(format!(
                    "quotient operations are not well defined at ({}, {})",
                    s.label(a),
                    s.label(b)
                )));
            }
        }
    }
    let labels = blocks
        .iter()
        .map(|b| b.labels(s).join("|"))
        .collect();
    let semiring = FiniteSemiring::new(
        labels,
        add,
        mul,
        cong.class_of(s.zero_index()),
        cong.class_of(s.one_index()),
    )?;
    Ok(Quotient {
        semiring,
        projection: cong.classes().to_vec(),
    })
}

/// Checks the bijection between k-ideals above `I` and k-ideals of `S/I`, and that it respects primes.
pub fn quotient_kideal_bijection_check(s: &FiniteSemiring, kideal: Subset) -> Result<Report> {
    let q = quotient_semiring(s, kideal)?;
    let mut report = Report::new("quotient-k-ideal-bijection", s.name());
    report.check(q.semiring.check_semiring_axioms().is_ok(), "quotient is a semiring", || {
        format!("{:?}", q.semiring.check_semiring_axioms().violations)
    });
    let above: Vec<Subset> = enumerate_k_ideals(s)?
        .into_iter()
        .filter(|j| kideal.is_subset(*j))
        .collect();
    let below = enumerate_k_ideals(&q.semiring)?;
    report.check(above.len() == below.len(), "equal counts", || {
        format!("{} above, {} in quotient", above.len(), below.len())
    });
    let show = |i: Subset| format!("{:?}", i.labels(s));
    for &j in &above {
        let image = q.image(j);
        report.check(below.contains(&image), "image is a k-ideal", || show(j));
        report.check(q.preimage(image) == j, "preimage of image", || show(j));
        report.check(is_prime(s, j) == is_prime(&q.semiring, image), "prime iff image prime", || {
            show(j)
        });
    }
    for &k in &below {
        let pre = q.preimage(k);
        report.check(above.contains(&pre), "preimage is a k-ideal above I", || {
            format!("{:?}", k.labels(&q.semiring))
        });
        report.check(q.image(pre) == k, "image of preimage", || format!("{:?}", k.labels(&q.semiring)));
    }
    report.note("k_ideals_above", above.len());
    Ok(report)
}

/// `Id_k(S)` as a semiring: sum and product are the subtractive closures of the ideal sum and product.
pub fn kideal_semiring(s: &FiniteSemiring) -> Result<(FiniteSemiring, Vec<Subset>)> {
    let kideals = enumerate_k_ideals(s)?;
    let index = |set: Subset| kideals.iter().position(|&k| k == set).expect("closure is a k-ideal");
    let close = |set: Subset| subtractive_closure(s, set).0;
    let product = |a: Subset, b: Subset| {
        let gens = Subset::from_elems(a.iter().flat_map(|x| b.iter().map(move |y| s.times(x, y))));
        close(ideal_closure(s, gens))
    };
    let labels = kideals.iter().map(|k| format!("{:?}", k.labels(s))).collect();
    let zero = index(close(Subset::empty()));
    let one = index(Subset::full(s.size()));
    let semiring = FiniteSemiring::from_fns(
        labels,
        |a, b| index(close(kideals[a].union(kideals[b]))),
        |a, b| index(product(kideals[a], kideals[b])),
        zero,
        one,
    )?;
    debug_assert!(kideals.iter().all(|&k| is_ideal(s, k)));
    Ok((semiring, kideals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::is_lo_semigroup;
    use crate::semiring::catalogue::{chain, corpus};
    use crate::semiring::Boolean;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elems(e.iter().copied())
    }

    #[test]
    fn maps_on_small_fixtures() {
        let b = Boolean::as_finite();
        assert_eq!(map_c(&b, set(&[0])), Congruence::identity(2));
        assert_eq!(map_c(&b, set(&[0, 1])), Congruence::total(2));
        let c = chain(3);
        let cong = Congruence::from_labels(&[0, 0, 1]);
        assert_eq!(map_c(&c, set(&[0, 1])), cong);
        assert_eq!(map_r(&c, &cong), set(&[0, 1]));
        assert_eq!(map_r(&c, &Congruence::identity(3)), set(&[0]));
        assert_eq!(map_r(&c, &Congruence::total(3)), set(&[0, 1, 2]));
    }

    #[test]
    fn boolean_retraction_is_bijective() {
        let b = Boolean::as_finite();
        let r = verify_retraction_congruences(&b).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        assert_eq!(r.details["congruences"], 2);
        assert_eq!(r.details["k_ideals"], 2);
    }

    #[test]
    fn corpus_passes_both_retractions() {
        for (name, s) in corpus() {
            let r = verify_retraction_congruences(&s).unwrap();
            assert!(r.pass, "{name}: {:?}", r.witnesses);
            let r = verify_retraction_ideals(&s).unwrap();
            assert!(r.pass, "{name}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn down_closure_characterizes_k_ideals() {
        for (name, s) in corpus().into_iter().filter(|(_, s)| s.is_idempotent()) {
            assert!(kideals_are_down_closed(&s).unwrap().pass, "{name}");
        }
    }

    #[test]
    fn quotients() {
        let b = Boolean::as_finite();
        assert_eq!(quotient_semiring(&b, set(&[0])).unwrap().semiring.size(), 2);
        assert_eq!(quotient_semiring(&b, set(&[0, 1])).unwrap().semiring.size(), 1);
        let c = chain(3);
        let q = quotient_semiring(&c, set(&[0, 1])).unwrap();
        assert_eq!(q.semiring.size(), 2);
        let r = quotient_kideal_bijection_check(&c, set(&[0, 1])).unwrap();
        assert!(r.pass);
        assert_eq!(r.details["k_ideals_above"], 2);
        assert!(quotient_semiring(&c, set(&[1])).is_err());
    }

    #[test]
    fn every_quotient_is_a_semiring_with_matching_k_ideals() {
        for (name, s) in corpus() {
            for k in enumerate_k_ideals(&s).unwrap() {
                let r = quotient_kideal_bijection_check(&s, k).unwrap();
                assert!(r.pass, "{name} / {k}: {:?}", r.witnesses);
            }
        }
    }

    #[test]
    fn k_ideals_of_chain_form_an_lo_semigroup() {
        let (t, kideals) = kideal_semiring(&chain(3)).unwrap();
        assert_eq!(kideals.len(), 3);
        assert!(t.check_semiring_axioms().is_ok());
        assert!(is_lo_semigroup(&t).holds());
    }
}
