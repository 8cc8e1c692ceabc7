use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::upoly::{format_term, join_terms};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Sparse polynomial over ℚ, terms sorted by decreasing monomial under the ring's order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MPoly {
    terms: Vec<(Monomial, BigRational)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.iter().sum()).max()
    }
}

/// ℚ[vars] with a fixed monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MPolyRing {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

impl MPolyRing {
    pub fn new(vars: Vec<String>, order: MonomialOrder) -> Self {
        MPolyRing { vars, order }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn from_map(&self, map: HashMap<Monomial, BigRational>) -> MPoly {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        MPoly { terms }
    }

    pub fn from_terms(&self, terms: Vec<(Monomial, BigRational)>) -> MPoly {
        let mut map: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), self.nvars(), "monomial arity");
            *map.entry(m).or_insert_with(BigRational::zero) += c;
        }
        self.from_map(map)
    }

    pub fn constant(&self, c: BigRational) -> MPoly {
        self.from_terms(vec![(vec![0; self.nvars()], c)])
    }

    pub fn one(&self) -> MPoly {
        self.constant(BigRational::one())
    }

    pub fn var(&self, i: usize) -> MPoly {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        self.from_terms(vec![(m, BigRational::one())])
    }

    pub fn contains(&self, a: &MPoly) -> bool {
        a.terms.iter().all(|(m, c)| m.len() == self.nvars() && !c.is_zero())
            && a
                .terms
                .windows(2)
                .all(|w| self.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater)
    }

    pub fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.order.cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.terms[i].1 + &b.terms[j].1;
                    if !c.is_zero() {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        MPoly { terms: out }
    }

    pub fn neg(&self, a: &MPoly) -> MPoly {
        MPoly {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.add(a, &self.neg(b))
    }

    /// `c·x^m·a`; multiplying by a monomial preserves term order.
    pub fn mul_term(&self, a: &MPoly, m: &[u32], c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: a
                .terms
                .iter()
                .map(|(am, ac)| (am.iter().zip(m).map(|(x, y)| x + y).collect(), ac * c))
                .collect(),
        }
    }

    pub fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut map: HashMap<Monomial, BigRational> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *map.entry(m).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        self.from_map(map)
    }

    pub fn pow(&self, a: &MPoly, n: u32) -> MPoly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn monic(&self, a: &MPoly) -> MPoly {
        match a.leading() {
            None => MPoly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip();
                MPoly {
                    terms: a.terms.iter().map(|(m, c)| (m.clone(), c * &inv)).collect(),
                }
            }
        }
    }

    /// Fully reduced remainder of `f` on division by `basis`.
    pub fn normal_form(&self, f: &MPoly, basis: &[MPoly]) -> MPoly {
        let mut p = f.clone();
        let mut rem: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((m, c)) = p.leading().cloned() {
            let divisor = basis
                .iter()
                .find(|g| divides(&g.leading().unwrap().0, &m));
            match divisor {
                Some(g) => {
                    let (gm, gc) = g.leading().unwrap();
                    let q: Monomial = m.iter().zip(gm).map(|(x, y)| x - y).collect();
                    p = self.sub(&p, &self.mul_term(g, &q, &(&c / gc)));
                }
                None => {
                    rem.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        MPoly { terms: rem }
    }

    pub fn s_poly(&self, f: &MPoly, g: &MPoly) -> MPoly {
        let (fm, fc) = f.leading().unwrap();
        let (gm, gc) = g.leading().unwrap();
        let l = lcm(fm, gm);
        let uf: Monomial = l.iter().zip(fm).map(|(x, y)| x - y).collect();
        let ug: Monomial = l.iter().zip(gm).map(|(x, y)| x - y).collect();
        self.sub(
            &self.mul_term(f, &uf, &fc.recip()),
            &self.mul_term(g, &ug, &gc.recip()),
        )
    }

    /// Reduced Gröbner basis by Buchberger's algorithm; `⟨0⟩` gives the empty basis.
    pub fn groebner(&self, gens: &[MPoly]) -> Vec<MPoly> {
        let mut basis: Vec<MPoly> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| self.monic(g))
            .collect();
        if basis.iter().any(|g| g.leading().is_some_and(|(m, _)| m.iter().all(|&e| e == 0))) {
            return vec![self.one()];
        }
        let mut pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .collect();
        let lm = |b: &[MPoly], i: usize| b[i].leading().unwrap().0.clone();
        while !pairs.is_empty() {
            // normal strategy: the pair with the smallest lcm first
            let pick = (0..pairs.len())
                .min_by(|&a, &b| {
                    let la = lcm(&lm(&basis, pairs[a].0), &lm(&basis, pairs[a].1));
                    let lb = lcm(&lm(&basis, pairs[b].0), &lm(&basis, pairs[b].1));
                    self.order.cmp(&la, &lb)
                })
                .unwrap();
            let (i, j) = pairs.swap_remove(pick);
            let (mi, mj) = (lm(&basis, i), lm(&basis, j));
            // coprime leading monomials: the S-polynomial reduces to zero
            if mi.iter().zip(&mj).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let l = lcm(&mi, &mj);
            let pending = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
            let chain = (0..basis.len())
                .any(|t| t != i && t != j && divides(&lm(&basis, t), &l) && !pending(i, t) && !pending(j, t));
            if chain {
                continue;
            }
            let s = self.s_poly(&basis[i], &basis[j]);
            let r = self.normal_form(&s, &basis);
            if let Some((m, _)) = r.leading() {
                if m.iter().all(|&e| e == 0) {
                    return vec![self.one()];
                }
                let k = basis.len();
                basis.push(self.monic(&r));
                pairs.extend((0..k).map(|i| (i, k)));
            }
        }
        self.reduce_basis(basis)
    }

    fn reduce_basis(&self, basis: Vec<MPoly>) -> Vec<MPoly> {
        let mut minimal: Vec<MPoly> = Vec::new();
        for (k, g) in basis.iter().enumerate() {
            let lm = &g.leading().unwrap().0;
            let redundant = basis.iter().enumerate().any(|(l, h)| {
                let hm = &h.leading().unwrap().0;
                l != k && divides(hm, lm) && (hm != lm || l < k)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut reduced: Vec<MPoly> = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<MPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, h)| h.clone())
                .collect();
            let g = &minimal[k];
            let (lm, lc) = g.leading().unwrap().clone();
            let tail = MPoly {
                terms: g.terms[1..].to_vec(),
            };
            let tail = self.normal_form(&tail, &others);
            let full = self.add(&MPoly { terms: vec![(lm, lc)] }, &tail);
            reduced.push(self.monic(&full));
        }
        reduced.sort_by(|a, b| self.order.cmp(&b.leading().unwrap().0, &a.leading().unwrap().0));
        reduced
    }

    pub fn is_reduced_groebner(&self, basis: &[MPoly]) -> bool {
        for (k, g) in basis.iter().enumerate() {
            let Some((_, lc)) = g.leading() else { return false };
            if !lc.is_one() {
                return false;
            }
            for (l, h) in basis.iter().enumerate() {
                if l == k {
                    continue;
                }
                let hm = &h.leading().unwrap().0;
                if g.terms.iter().any(|(m, _)| divides(hm, m)) {
                    return false;
                }
            }
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if !self.normal_form(&self.s_poly(&basis[i], &basis[j]), basis).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn eval(&self, a: &MPoly, point: &[BigRational]) -> BigRational {
        a.terms.iter().fold(BigRational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc + t
        })
    }

    /// Random polynomial with total degree at most `max_degree` and up to `max_terms` terms.
    pub fn random<R: Rng>(
        &self,
        rng: &mut R,
        max_degree: u32,
        max_terms: usize,
        coeff_bound: i64,
    ) -> MPoly {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| {
                let mut budget = rng.gen_range(0..=max_degree);
                let m: Monomial = (0..self.nvars())
                    .map(|_| {
                        let e = rng.gen_range(0..=budget);
                        budget -= e;
                        e
                    })
                    .collect();
                let c = rng.gen_range(-coeff_bound..=coeff_bound);
                (m, BigRational::from_integer(c.into()))
            })
            .collect();
        self.from_terms(terms)
    }

    pub fn format(&self, a: &MPoly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = a
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .zip(&self.vars)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                format_term(c, &mono.join("*"))
            })
            .collect();
        join_terms(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> MPolyRing {
        MPolyRing::new(vec!["x".into(), "y".into()], MonomialOrder::Grevlex)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(r: &MPolyRing, terms: &[(u32, u32, i64)]) -> MPoly {
        r.from_terms(terms.iter().map(|&(a, b, c)| (vec![a, b], q(c))).collect())
    }

    #[test]
    fn grevlex_order() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&[1, 1], &[2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[0, 3], &[2, 0]), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
    }

    #[test]
    fn product_of_variables() {
        let r = ring();
        let gb = r.groebner(&[r.mul(&r.var(0), &r.var(1))]);
        assert_eq!(gb, vec![poly(&r, &[(1, 1, 1)])]);
    }

    #[test]
    fn circle_and_diagonal() {
        let r = ring();
        let f = poly(&r, &[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let g = poly(&r, &[(1, 0, 1), (0, 1, -1)]);
        let gb = r.groebner(&[f, g]);
        assert!(r.is_reduced_groebner(&gb));
        let x_plus_y = poly(&r, &[(1, 0, 1), (0, 1, 1)]);
        assert!(!r.normal_form(&x_plus_y, &gb).is_zero());
        // oracle: at the common zero (1/√2, 1/√2), x + y = √2 ≠ 0; check y^2 - 1/2 lies in the ideal
        let y2 = r.from_terms(vec![
            (vec![0, 2], q(1)),
            (vec![0, 0], BigRational::new((-1).into(), 2.into())),
        ]);
        assert!(r.normal_form(&y2, &gb).is_zero());
    }

    #[test]
    fn unit_ideal_basis_is_one() {
        let r = ring();
        let gb = r.groebner(&[r.var(0), r.add(&r.var(0), &r.one())]);
        assert_eq!(gb, vec![r.one()]);
        assert!(r.groebner(&[MPoly::zero()]).is_empty());
    }

    #[test]
    fn lex_elimination() {
        let r = MPolyRing::new(vec!["x".into(), "y".into()], MonomialOrder::Lex);
        let f = poly(&r, &[(1, 0, 1), (0, 2, -1)]);
        let g = poly(&r, &[(1, 0, 1), (0, 1, -1)]);
        let gb = r.groebner(&[f, g]);
        assert!(r.is_reduced_groebner(&gb));
        // the basis contains a polynomial in y alone: y^2 - y
        assert!(gb.contains(&poly(&r, &[(0, 2, 1), (0, 1, -1)])));
    }
}
