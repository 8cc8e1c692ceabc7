use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{EuclideanDomain, FgRingIdeal, Pid, RingElement};

/// A finitely generated submodule of `Rⁿ` over a PID, stored by its Hermite normal form.
///
/// Rows are in echelon form with strictly increasing pivot columns, each
/// pivot unit-normal, and entries above a pivot reduced modulo it. Two
/// submodules are equal iff their rows are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    pid: Pid,
    rank: usize,
    rows: Vec<Vec<RingElement>>,
}

fn pivot(pid: &Pid, row: &[RingElement]) -> Option<usize> {
    row.iter().position(|x| !pid.is_zero(x))
}

fn scale_row(pid: &Pid, c: &RingElement, row: &[RingElement]) -> Vec<RingElement> {
    row.iter().map(|x| pid.mul(c, x)).collect()
}

fn combine(pid: &Pid, a: &RingElement, r: &[RingElement], b: &RingElement, s: &[RingElement]) -> Vec<RingElement> {
    r.iter()
        .zip(s)
        .map(|(x, y)| pid.add(&pid.mul(a, x), &pid.mul(b, y)))
        .collect()
}

/// Row-style Hermite normal form of the span of `gens`.
pub fn hermite_normal_form(pid: &Pid, rank: usize, gens: &[Vec<RingElement>]) -> Vec<Vec<RingElement>> {
    let mut pending: Vec<Vec<RingElement>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !pid.is_zero(x)))
        .cloned()
        .collect();
    let mut rows: Vec<Vec<RingElement>> = Vec::new();
    for col in 0..rank {
        let (mut active, rest): (Vec<_>, Vec<_>) = pending
            .into_iter()
            .partition(|r| pivot(pid, r) == Some(col));
        pending = rest;
        let Some(mut head) = active.pop() else {
            continue;
        };
        for other in active {
            let (x, y) = (head[col].clone(), other[col].clone());
            let (g, s, t) = pid.ext_gcd(&x, &y);
            let (xg, yg) = (pid.exact_div(&x, &g), pid.exact_div(&y, &g));
            let new_head = combine(pid, &s, &head, &t, &other);
            let reduced = combine(pid, &yg, &head, &pid.neg(&xg), &other);
            head = new_head;
            if reduced.iter().any(|e| !pid.is_zero(e)) {
                pending.push(reduced);
            }
        }
        let p = head[col].clone();
        let unit = pid.exact_div(&pid.normalize(&p), &p);
        head = scale_row(pid, &unit, &head);
        let p = head[col].clone();
        for row in rows.iter_mut() {
            let e = row[col].clone();
            let q = pid.exact_div(&pid.sub(&e, &pid.reduce_mod(&e, &p)), &p);
            *row = combine(pid, &pid.one(), row, &pid.neg(&q), &head);
        }
        rows.push(head);
    }
    rows
}

impl Submodule {
    pub fn new(pid: &Pid, rank: usize, gens: &[Vec<RingElement>]) -> Result<Self> {
        let base = pid.descriptor();
        for g in gens {
            if g.len() != rank {
                return Err(Error::Domain(format!(
                    "vector of length {} in a module of rank {rank}",
                    g.len()
                )));
            }
            for x in g {
                base.check(x)?;
            }
        }
        Ok(Submodule {
            pid: pid.clone(),
            rank,
            rows: hermite_normal_form(pid, rank, gens),
        })
    }

    pub fn zero(pid: &Pid, rank: usize) -> Self {
        Submodule {
            pid: pid.clone(),
            rank,
            rows: Vec::new(),
        }
    }

    /// The whole of `Rⁿ`.
    pub fn full(pid: &Pid, rank: usize) -> Self {
        let rows = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { pid.one() } else { pid.zero() }).collect())
            .collect();
        Submodule {
            pid: pid.clone(),
            rank,
            rows,
        }
    }

    pub fn pid(&self) -> &Pid {
        &self.pid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<RingElement>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn compatible(&self, other: &Submodule) -> Result<()> {
        if self.pid != other.pid || self.rank != other.rank {
            return Err(Error::Domain(format!(
                "submodules of {}^{} and {}^{}",
                self.pid.name(),
                self.rank,
                other.pid.name(),
                other.rank
            )));
        }
        Ok(())
    }

    /// Membership of a vector, by reduction against the echelon rows.
    pub fn contains(&self, v: &[RingElement]) -> bool {
        if v.len() != self.rank {
            return false;
        }
        let pid = &self.pid;
        let mut v = v.to_vec();
        for row in &self.rows {
            let col = pivot(pid, row).expect("nonzero row");
            if !pid.divides(&row[col], &v[col]) {
                return false;
            }
            let q = pid.exact_div(&v[col], &row[col]);
            v = combine(pid, &pid.one(), &v, &pid.neg(&q), row);
        }
        v.iter().all(|x| pid.is_zero(x))
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.pid == other.pid && self.rank == other.rank && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.compatible(other)?;
        let gens: Vec<_> = self.rows.iter().chain(&other.rows).cloned().collect();
        Submodule::new(&self.pid, self.rank, &gens)
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let es: Vec<String> = r.iter().map(|x| self.pid.format(x)).collect();
                format!("({})", es.join(","))
            })
            .collect();
        format!("span[{}]", rows.join(", "))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| self.pid.format(x)).collect())
            .collect();
        json!({ "ring": self.pid.name(), "rank": self.rank, "hnf": rows })
    }
}

/// `fgMod(Rⁿ)` as a semimodule over `fgId(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgModSemimodule {
    pub pid: Pid,
    pub rank: usize,
}

impl FgModSemimodule {
    pub fn new(pid: Pid, rank: usize) -> Self {
        FgModSemimodule { pid, rank }
    }

    pub fn zero(&self) -> Submodule {
        Submodule::zero(&self.pid, self.rank)
    }

    pub fn add(&self, a: &Submodule, b: &Submodule) -> Result<Submodule> {
        a.sum(b)
    }

    /// The cyclic submodule `R·m`.
    pub fn u_m(&self, m: &[RingElement]) -> Result<Submodule> {
        Submodule::new(&self.pid, self.rank, &[m.to_vec()])
    }

    pub fn act(&self, rho: &FgRingIdeal, nu: &Submodule) -> Result<Submodule> {
        module_action(rho, nu)
    }

    pub fn random_vector<R: Rng>(&self, rng: &mut R, size: i64) -> Vec<RingElement> {
        (0..self.rank).map(|_| self.pid.random(rng, size)).collect()
    }

    pub fn random_submodule<R: Rng>(&self, rng: &mut R, size: i64, max_gens: usize) -> Submodule {
        let k = rng.gen_range(0..=max_gens);
        let gens: Vec<_> = (0..k).map(|_| self.random_vector(rng, size)).collect();
        Submodule::new(&self.pid, self.rank, &gens).expect("random vectors lie in the module")
    }
}

/// `ρ·ν`: the span of all products of a generator of `ρ` with an HNF row of `ν`.
pub fn module_action(rho: &FgRingIdeal, nu: &Submodule) -> Result<Submodule> {
    module_action_with(rho.generators(), rho, nu)
}

/// As [`module_action`], with the products taken over an explicit presentation of `ρ`.
pub fn module_action_with(gens: &[RingElement], rho: &FgRingIdeal, nu: &Submodule) -> Result<Submodule> {
    if *rho.ring() != nu.pid.descriptor() {
        return Err(Error::Domain(format!(
            "ideal of {} acting on a module over {}",
            rho.ring().name(),
            nu.pid.name()
        )));
    }
    let prods: Vec<Vec<RingElement>> = gens
        .iter()
        .flat_map(|g| nu.rows.iter().map(move |r| scale_row(&nu.pid, g, r)))
        .collect();
    Submodule::new(&nu.pid, nu.rank, &prods)
}

/// Checks that `u_M` is a `u_R`-norm with constant `c`, and the strong equality `u_M(rm) = u_R(r)·u_M(m)`.
pub fn check_module_seminorm(
    module: &FgModSemimodule,
    scalars: &[RingElement],
    vectors: &[Vec<RingElement>],
    c: &FgRingIdeal,
) -> Result<Report> {
    let pid = &module.pid;
    let ring = pid.descriptor();
    let mut report = Report::new("module-seminorm", format!("fgMod({}^{})", pid.name(), module.rank));
    if c.is_zero() {
        return Err(Error::Domain("the seminorm constant must be nonzero".into()));
    }
    let zero_vec: Vec<RingElement> = (0..module.rank).map(|_| pid.zero()).collect();
    report.check(module.u_m(&zero_vec)?.is_zero(), "unit", || "u(0) is not zero".into());
    let mut strong = true;
    for m in vectors {
        let um = module.u_m(m)?;
        report.check(um.is_zero() == m.iter().all(|x| pid.is_zero(x)), "norm", || {
            format!("u({m:?}) = {}", um.format())
        });
        for r in scalars {
            let rm = scale_row(pid, r, m);
            let lhs = module.u_m(&rm)?;
            let ur = FgRingIdeal::principal(&ring, r)?;
            let scaled = module_action(&crate::ring::ideal_product(c, &ur)?, &um)?;
            report.check(lhs.is_subset(&scaled), "scalar-bound", || {
                format!("r = {}, m = {}", pid.format(r), um.format())
            });
            strong &= lhs == module_action(&ur, &um)?;
        }
        for n in vectors {
            let sum: Vec<RingElement> = m.iter().zip(n).map(|(x, y)| pid.add(x, y)).collect();
            let lhs = module.u_m(&sum)?;
            let rhs = um.sum(&module.u_m(n)?)?;
            report.check(lhs.is_subset(&rhs), "subadditivity", || {
                format!("{} vs {}", lhs.format(), rhs.format())
            });
        }
    }
    report.note("strong_equality", strong);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int_ideal, FieldKind, UniPolyRing};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vec<RingElement> {
        xs.iter().map(|&x| RingElement::int(x)).collect()
    }

    fn z2() -> FgModSemimodule {
        FgModSemimodule::new(Pid::Integers, 2)
    }

    #[test]
    fn cyclic_hnf() {
        let m = z2();
        assert_eq!(m.u_m(&v(&[2, 4])).unwrap().rows(), &[v(&[2, 4])]);
        assert_eq!(m.u_m(&v(&[-2, -4])).unwrap().rows(), &[v(&[2, 4])]);
        assert!(m.u_m(&v(&[0, 0])).unwrap().is_zero());
    }

    #[test]
    fn hnf_of_a_lattice() {
        let l = Submodule::new(&Pid::Integers, 2, &[v(&[2, 4]), v(&[3, 1])]).unwrap();
        // index 10 lattice: 2*1 - 4*3 = -10
        assert_eq!(l.rows(), &[v(&[1, 7]), v(&[0, 10])]);
        assert!(l.contains(&v(&[5, 5])));
        assert!(!l.contains(&v(&[1, 0])));
    }

    #[test]
    fn action_examples() {
        let m = z2();
        let full = Submodule::full(&Pid::Integers, 2);
        let doubled = module_action(&int_ideal(2), &full).unwrap();
        assert_eq!(doubled.rows(), &[v(&[2, 0]), v(&[0, 2])]);
        assert_eq!(module_action(&int_ideal(1), &doubled).unwrap(), doubled);
        let x = v(&[1, 1]);
        assert_eq!(
            m.u_m(&v(&[3, 3])).unwrap(),
            module_action(&int_ideal(3), &m.u_m(&x).unwrap()).unwrap()
        );
    }

    #[test]
    fn action_over_polynomials() {
        let r = UniPolyRing::new(FieldKind::Prime(5), "x");
        let pid = Pid::UniPoly(r.clone());
        let ring = pid.descriptor();
        let x = ring.var(0).unwrap();
        let one = ring.one();
        let l = Submodule::new(&pid, 2, &[vec![x.clone(), one.clone()]]).unwrap();
        let xi = FgRingIdeal::principal(&ring, &x).unwrap();
        let scaled = module_action(&xi, &l).unwrap();
        assert!(scaled.is_subset(&l));
        assert!(!l.is_subset(&scaled));
    }

    #[test]
    fn u_m_is_a_norm_with_unit_constant() {
        let m = z2();
        let scalars: Vec<_> = (-4..=4).map(RingElement::int).collect();
        let vectors = vec![v(&[0, 0]), v(&[2, 4]), v(&[1, -3]), v(&[6, 0])];
        let report = check_module_seminorm(&m, &scalars, &vectors, &int_ideal(1)).unwrap();
        assert!(report.pass, "{:?}", report.witnesses);
        assert_eq!(report.details["strong_equality"], true);
        assert!(check_module_seminorm(&m, &scalars, &vectors, &int_ideal(0)).is_err());
    }

    /// Oracle for a full-rank lattice in ℤ²: Cramer's rule must give integer coefficients.
    fn lattice_contains_oracle(g: [[i64; 2]; 2], p: [i64; 2]) -> bool {
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let a = p[0] * g[1][1] - p[1] * g[1][0];
        let b = g[0][0] * p[1] - g[0][1] * p[0];
        a % det == 0 && b % det == 0
    }

    proptest! {
        #[test]
        fn hnf_is_presentation_independent(a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6, k in -3i64..3) {
            let g1 = v(&[a, b]);
            let g2 = v(&[c, d]);
            let mixed = v(&[c + k * a, d + k * b]);
            let l1 = Submodule::new(&Pid::Integers, 2, &[g1.clone(), g2]).unwrap();
            let l2 = Submodule::new(&Pid::Integers, 2, &[mixed, g1]).unwrap();
            prop_assert_eq!(l1, l2);
        }

        #[test]
        fn membership_matches_oracle(a in -3i64..4, b in -3i64..4, c in -3i64..4, d in -3i64..4, x in -6i64..7, y in -6i64..7) {
            let det = a * d - b * c;
            prop_assume!(det.abs() >= 1);
            let l = Submodule::new(&Pid::Integers, 2, &[v(&[a, b]), v(&[c, d])]).unwrap();
            prop_assert_eq!(l.contains(&v(&[x, y])), lattice_contains_oracle([[a, b], [c, d]], [x, y]));
        }

        #[test]
        fn action_is_monotone(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = z2();
            let mu = m.random_submodule(&mut rng, 20, 2);
            let nu = mu.sum(&m.random_submodule(&mut rng, 20, 2)).unwrap();
            let rho = int_ideal(rng.gen_range(0..15));
            prop_assert!(mu.is_subset(&nu));
            prop_assert!(module_action(&rho, &mu).unwrap().is_subset(&module_action(&rho, &nu).unwrap()));
        }
    }
}
