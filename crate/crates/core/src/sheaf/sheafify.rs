use std::collections::{BTreeMap, HashMap, HashSet};

use super::presheaf::SemiringPresheaf;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::semiring::FiniteSemiring;

const MAX_FAMILIES: usize = 1 << 20;

/// The sheafification of a presheaf of finite semirings, with the canonical map into it.
#[derive(Debug, Clone)]
pub struct Sheafification {
    sheaf: SemiringPresheaf,
    /// `unit[u][s]`: the family of germs of the section `s` over `U`.
    unit: Vec<Vec<usize>>,
}

impl Sheafification {
    pub fn sheaf(&self) -> &SemiringPresheaf {
        &self.sheaf
    }

    pub fn unit(&self, u: usize, s: usize) -> usize {
        self.unit[u][s]
    }
}

fn product_size(sizes: &[usize]) -> Result<usize> {
    sizes.iter().try_fold(1usize, |acc, &n| {
        acc.checked_mul(n)
            .filter(|&t| t <= MAX_FAMILIES)
            .ok_or_else(|| Error::Resource("too many families to enumerate".into()))
    })
}

/// Mixed-radix decoding of `k` into one digit per entry of `sizes`.
fn decode(mut k: usize, sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .map(|&n| {
            let d = k % n;
            k /= n;
            d
        })
        .collect()
}

/// Sections over `U` are the families `(s_x)_{x ∈ U}` of germs that are locally given by
/// actual sections; sums and products are pointwise.
pub fn sheafify(p: &SemiringPresheaf) -> Result<Sheafification> {
    let site = p.site();
    let n_opens = site.opens().len();
    let pts_of: Vec<Vec<usize>> = (0..n_opens).map(|u| site.open(u).iter().collect()).collect();

    // germ vectors of actual sections over each open
    let represented: Vec<HashSet<Vec<usize>>> = (0..n_opens)
        .map(|v| {
            p.sections(v)
                .elements()
                .map(|t| pts_of[v].iter().map(|&q| p.germ(v, q, t)).collect())
                .collect()
        })
        .collect();

    let mut sections = Vec::new();
    let mut families_of: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut index_of: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for u in 0..n_opens {
        let pts = &pts_of[u];
        let sizes: Vec<usize> = pts.iter().map(|&x| p.stalk(x).size()).collect();
        let total = product_size(&sizes)?;
        let below: Vec<usize> = (0..n_opens).filter(|&v| site.open(v).is_subset(site.open(u))).collect();
        let mut fams = Vec::new();
        for k in 0..total {
            let fam = decode(k, &sizes);
            let at = |q: usize| fam[pts.iter().position(|&y| y == q).expect("point of U")];
            let local = pts.iter().all(|&x| {
                below.iter().any(|&v| {
                    site.open(v).contains(x) && represented[v].contains(&pts_of[v].iter().map(|&q| at(q)).collect::<Vec<_>>())
                })
            });
            if local {
                fams.push(fam);
            }
        }
        let index: HashMap<Vec<usize>, usize> = fams.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let lookup = |f: Vec<usize>| {
            index.get(&f).copied().ok_or_else(|| {
                Error::Structural(format!("pointwise operation leaves the sections over {}", site.open_label(u)))
            })
        };
        let op = |a: &[usize], b: &[usize], plus: bool| -> Vec<usize> {
            pts.iter()
                .enumerate()
                .map(|(i, &x)| {
                    let s = p.stalk(x);
                    if plus { s.plus(a[i], b[i]) } else { s.times(a[i], b[i]) }
                })
                .collect()
        };
        let m = fams.len();
        let mut add = vec![vec![0; m]; m];
        let mut mul = vec![vec![0; m]; m];
        for a in 0..m {
            for b in 0..m {
                add[a][b] = lookup(op(&fams[a], &fams[b], true))?;
                mul[a][b] = lookup(op(&fams[a], &fams[b], false))?;
            }
        }
        let zero = lookup(pts.iter().map(|&x| p.stalk(x).zero_index()).collect())?;
        let one = lookup(pts.iter().map(|&x| p.stalk(x).one_index()).collect())?;
        let labels = fams
            .iter()
            .map(|f| {
                let parts: Vec<&str> = pts.iter().zip(f).map(|(&x, &s)| p.stalk(x).label(s)).collect();
                format!("({})", parts.join(", "))
            })
            .collect();
        sections.push(FiniteSemiring::new(labels, add, mul, zero, one)?);
        families_of.push(fams);
        index_of.push(index);
    }

    let mut restrictions = BTreeMap::new();
    for (u, v) in site.inclusions() {
        let map = families_of[u]
            .iter()
            .map(|f| {
                let g: Vec<usize> = pts_of[v]
                    .iter()
                    .map(|q| f[pts_of[u].iter().position(|y| y == q).expect("V ⊆ U")])
                    .collect();
                index_of[v].get(&g).copied().ok_or_else(|| {
                    Error::Structural(format!("restriction to {} is not locally represented", site.open_label(v)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        restrictions.insert((u, v), map);
    }

    let unit = (0..n_opens)
        .map(|u| {
            p.sections(u)
                .elements()
                .map(|s| {
                    let g: Vec<usize> = pts_of[u].iter().map(|&x| p.germ(u, x, s)).collect();
                    index_of[u][&g]
                })
                .collect()
        })
        .collect();
    Ok(Sheafification {
        sheaf: SemiringPresheaf::new(site.clone(), sections, restrictions)?,
        unit,
    })
}

/// Locality and gluing for every covering of every open, by enumeration.
pub fn sheaf_axioms_check(p: &SemiringPresheaf) -> Result<Report> {
    let site = p.site();
    let mut r = Report::new("sheaf-axioms", site.name());
    let mut families = 0usize;
    for u in 0..site.opens().len() {
        for cover in site.coverings(u)? {
            let restrict_all = |s: usize| -> Vec<usize> { cover.iter().map(|&v| p.restrict(u, v, s)).collect() };
            let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
            for s in p.sections(u).elements() {
                if let Some(&t) = seen.get(&restrict_all(s)) {
                    r.fail(
                        "identity",
                        format!(
                            "{} and {} over {} agree on a covering",
                            p.sections(u).label(t),
                            p.sections(u).label(s),
                            site.open_label(u)
                        ),
                    );
                } else {
                    seen.insert(restrict_all(s), s);
                }
            }
            let sizes: Vec<usize> = cover.iter().map(|&v| p.sections(v).size()).collect();
            for k in 0..product_size(&sizes)? {
                let fam = decode(k, &sizes);
                let compatible = (0..cover.len()).all(|a| {
                    (a + 1..cover.len()).all(|b| {
                        let (va, vb) = (cover[a], cover[b]);
                        let w = site
                            .open_index(crate::ideal::Subset(site.open(va).0 & site.open(vb).0))
                            .expect("opens are closed under intersection");
                        p.restrict(va, w, fam[a]) == p.restrict(vb, w, fam[b])
                    })
                });
                if !compatible {
                    continue;
                }
                families += 1;
                r.check(seen.contains_key(&fam), "gluing", || {
                    let parts: Vec<String> = cover
                        .iter()
                        .zip(&fam)
                        .map(|(&v, &s)| format!("{}: {}", site.open_label(v), p.sections(v).label(s)))
                        .collect();
                    format!("no section over {} glues [{}]", site.open_label(u), parts.join("; "))
                });
            }
        }
    }
    r.note("compatible_families", families);
    Ok(r)
}

/// Sheafifies and checks that the result is a sheaf of semirings with morphic
/// restrictions, that the canonical map is a morphism, and that it is an
/// isomorphism when the input already is a sheaf.
pub fn sheafification_check(p: &SemiringPresheaf) -> Result<Report> {
    let site = p.site();
    let mut r = Report::new("sheafification", site.name());
    let sh = sheafify(p)?;
    let q = sh.sheaf();
    for u in 0..site.opens().len() {
        let ax = q.sections(u).check_semiring_axioms();
        r.check(ax.is_ok(), "semiring-axioms", || format!("sections over {}", site.open_label(u)));
    }
    r.absorb(sheaf_axioms_check(q)?);
    r.absorb(q.morphism_check());
    r.absorb(q.functoriality_check());
    for u in 0..site.opens().len() {
        let (s, t) = (p.sections(u), q.sections(u));
        let f = |a: usize| sh.unit(u, a);
        let ok = f(s.zero_index()) == t.zero_index()
            && f(s.one_index()) == t.one_index()
            && s.elements().all(|a| s.elements().all(|b| f(s.plus(a, b)) == t.plus(f(a), f(b)) && f(s.times(a, b)) == t.times(f(a), f(b))));
        r.check(ok, "unit-morphism", || format!("over {}", site.open_label(u)));
    }
    let input_is_sheaf = sheaf_axioms_check(p)?.pass;
    if input_is_sheaf {
        for u in 0..site.opens().len() {
            let mut hit: Vec<usize> = p.sections(u).elements().map(|a| sh.unit(u, a)).collect();
            hit.sort_unstable();
            hit.dedup();
            let bijective = hit.len() == p.sections(u).size() && hit.len() == q.sections(u).size();
            r.check(bijective, "sheaf-unchanged", || format!("over {}", site.open_label(u)));
        }
    }
    r.note("input_is_sheaf", input_is_sheaf);
    let sizes: BTreeMap<String, usize> = (0..site.opens().len())
        .map(|u| (site.open_label(u), q.sections(u).size()))
        .collect();
    r.note("section_sizes", serde_json::json!(sizes));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;
    use crate::sheaf::presheaf::{fixture_presheaves, phi_presheaf};
    use crate::sheaf::site::FiniteSite;

    fn boolean() -> FiniteSemiring {
        FiniteSemiring::from_fns(vec!["0".into(), "1".into()], |a, b| a | b, |a, b| a & b, 0, 1).unwrap()
    }

    #[test]
    fn constant_presheaf_gains_products() {
        let site = FiniteSite::discrete(2);
        let p = SemiringPresheaf::constant(site.clone(), boolean());
        assert!(!sheaf_axioms_check(&p).unwrap().pass);
        let sh = sheafify(&p).unwrap();
        let q = sh.sheaf();
        assert_eq!(q.sections(site.whole()).size(), 4);
        assert_eq!(q.sections(0).size(), 1);
        assert_eq!(q.sections(1).size(), 2);
        let r = sheafification_check(&p).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn sheaves_are_unchanged() {
        // fgId(Z/6) splits as fgId(Z/2) x fgId(Z/3)
        let (_, p) = fixture_presheaves().into_iter().find(|(n, _)| n.contains("Z/6")).unwrap();
        let phi = phi_presheaf(&p).unwrap();
        assert!(sheaf_axioms_check(phi.semirings()).unwrap().pass);
        let r = sheafification_check(phi.semirings()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        assert_eq!(r.details["input_is_sheaf"], true);
    }

    #[test]
    fn sheafified_phi_on_fixtures() {
        for (name, p) in fixture_presheaves() {
            let phi = phi_presheaf(&p).unwrap();
            let r = sheafification_check(phi.semirings()).unwrap();
            assert!(r.pass, "{name}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn discrete_constant_z2_becomes_boolean_square() {
        let (_, p) = fixture_presheaves().into_iter().find(|(n, _)| n == "discrete constant Z/2").unwrap();
        let phi = phi_presheaf(&p).unwrap();
        let sh = sheafify(phi.semirings()).unwrap();
        let whole = p.site().whole();
        let s = sh.sheaf().sections(whole);
        assert_eq!(s.size(), 4);
        assert!(s.check_semiring_axioms().is_ok());
        assert_eq!(s.label(s.one_index()), "(<1>, <1>)");
        let _ = s.zero();
    }
}
