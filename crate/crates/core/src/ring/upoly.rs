use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::FieldKind;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    fn trimmed(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }
}

/// The polynomial ring K[var] over a field K.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPolyRing {
    pub field: FieldKind,
    pub var: String,
}

impl UniPolyRing {
    pub fn new(field: FieldKind, var: impl Into<String>) -> Self {
        UniPolyRing {
            field,
            var: var.into(),
        }
    }

    /// Builds a polynomial from raw coefficients, reducing them into the field.
    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> Result<UPoly> {
        let cs = coeffs
            .iter()
            .map(|c| self.field.from_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::trimmed(cs))
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> UPoly {
        UPoly::trimmed(coeffs.iter().map(|&c| self.field.from_int(c)).collect())
    }

    pub fn constant(&self, c: BigRational) -> UPoly {
        UPoly::trimmed(vec![c])
    }

    pub fn x(&self) -> UPoly {
        UPoly::trimmed(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c·x^k`.
    pub fn monomial(&self, c: BigRational, k: usize) -> UPoly {
        let mut cs = vec![BigRational::zero(); k + 1];
        cs[k] = c;
        UPoly::trimmed(cs)
    }

    pub fn contains(&self, a: &UPoly) -> bool {
        a.coeffs.last().map_or(true, |c| !c.is_zero())
            && a.coeffs.iter().all(|c| self.field.contains(c))
    }

    pub fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        UPoly::trimmed(
            (0..n)
                .map(|i| self.field.add(&a.coeff(i), &b.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, a: &UPoly) -> UPoly {
        UPoly::trimmed(a.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &UPoly, c: &BigRational) -> UPoly {
        UPoly::trimmed(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        UPoly::trimmed(out)
    }

    pub fn pow(&self, a: &UPoly, n: u32) -> UPoly {
        let mut acc = UPoly::one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
        let db = b.degree().expect("polynomial division by zero");
        let lc_inv = self.field.inv(b.leading().unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (UPoly::zero(), a.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.field.mul(&r[k + db], &lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[k + j] = self.field.sub(&r[k + j], &self.field.mul(&c, bj));
            }
            q[k] = c;
        }
        r.truncate(db);
        (UPoly::trimmed(q), UPoly::trimmed(r))
    }

    pub fn monic(&self, a: &UPoly) -> UPoly {
        match a.leading() {
            None => UPoly::zero(),
            Some(lc) => self.scale(a, &self.field.inv(lc).unwrap()),
        }
    }

    pub fn gcd(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.div_rem(&x, &y).1;
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn divides(&self, a: &UPoly, b: &UPoly) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        self.div_rem(b, a).1.is_zero()
    }

    pub fn eval(&self, a: &UPoly, x: &BigRational) -> BigRational {
        a.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                self.field.add(&self.field.mul(&acc, x), c)
            })
    }

    pub fn derivative(&self, a: &UPoly) -> UPoly {
        UPoly::trimmed(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.field.mul(c, &self.field.from_int(i as i64)))
                .collect(),
        )
    }

    /// For `a = b(x^p)` over 𝔽_p, returns `c` with `c^p = a` (Frobenius is the identity on 𝔽_p).
    fn pth_root(&self, a: &UPoly) -> UPoly {
        let p = self.field.characteristic() as usize;
        UPoly::trimmed(a.coeffs.iter().step_by(p).cloned().collect())
    }

    /// Monic product of the distinct irreducible factors of a nonzero `a`.
    pub fn squarefree_part(&self, a: &UPoly) -> UPoly {
        if a.degree().unwrap_or(0) == 0 {
            return if a.is_zero() { UPoly::zero() } else { UPoly::one() };
        }
        let d = self.derivative(a);
        if d.is_zero() {
            return self.squarefree_part(&self.pth_root(a));
        }
        let c0 = self.gcd(a, &d);
        let w = self.monic(&self.div_rem(a, &c0).0);
        let mut c = c0;
        loop {
            let g = self.gcd(&c, &w);
            if g.degree() == Some(0) {
                break;
            }
            c = self.div_rem(&c, &g).0;
        }
        self.monic(&self.mul(&w, &self.squarefree_part(&c)))
    }

    /// All monic polynomials of exact degree `d` over a finite field, in a fixed order.
    pub fn monic_of_degree(&self, d: usize) -> Result<Vec<UPoly>> {
        let p = match self.field {
            FieldKind::Prime(p) => p,
            FieldKind::Rationals => {
                return Err(Error::Unsupported("enumeration over Q".into()))
            }
        };
        let count = (p as u128).checked_pow(d as u32).filter(|&c| c <= 1 << 20);
        let count = count.ok_or_else(|| {
            Error::Resource(format!("{p}^{d} monic polynomials of degree {d}"))
        })? as u64;
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut cs = Vec::with_capacity(d + 1);
            let mut r = idx;
            for _ in 0..d {
                cs.push(BigRational::from_integer((r % p).into()));
                r /= p;
            }
            cs.push(BigRational::one());
            out.push(UPoly::trimmed(cs));
        }
        Ok(out)
    }

    /// Monic irreducibles of degree `1..=max_degree` over a finite field, by sieving.
    pub fn monic_irreducibles(&self, max_degree: usize) -> Result<Vec<UPoly>> {
        let mut irr: Vec<UPoly> = Vec::new();
        for d in 1..=max_degree {
            for f in self.monic_of_degree(d)? {
                let reducible = irr
                    .iter()
                    .take_while(|g| 2 * g.degree().unwrap() <= d)
                    .any(|g| self.divides(g, &f));
                if !reducible {
                    irr.push(f);
                }
            }
        }
        Ok(irr)
    }

    /// Rational roots of a nonzero polynomial over ℚ.
    fn rational_roots(&self, a: &UPoly) -> Vec<BigRational> {
        let den_lcm = a
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = a
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut roots = Vec::new();
        let shift = ints.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            roots.push(BigRational::zero());
        }
        let ints = &ints[shift..];
        if ints.len() <= 1 {
            return roots;
        }
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let n = n.abs().to_u64().unwrap_or(0);
            (1..=n).filter(|d| n % d == 0).map(BigInt::from).collect()
        };
        for p in divisors(&ints[0]) {
            for q in divisors(ints.last().unwrap()) {
                for sign in [1i64, -1] {
                    let r = BigRational::new(&p * sign, q.clone());
                    if self.eval(a, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots
    }

    /// Irreducibility test: trial division over 𝔽_p; over ℚ only up to degree 3.
    pub fn is_irreducible(&self, a: &UPoly) -> Result<bool> {
        let d = match a.degree() {
            None | Some(0) => return Ok(false),
            Some(d) => d,
        };
        match self.field {
            FieldKind::Prime(_) => {
                let small = self.monic_irreducibles(d / 2)?;
                Ok(!small.iter().any(|g| self.divides(g, a)))
            }
            FieldKind::Rationals => match d {
                1 => Ok(true),
                2 | 3 => Ok(self.rational_roots(a).is_empty()),
                _ => Err(Error::Unsupported(format!(
                    "irreducibility over Q in degree {d}"
                ))),
            },
        }
    }

    /// Distinct monic irreducible factors of a nonzero polynomial.
    pub fn irreducible_factors(&self, a: &UPoly) -> Result<Vec<UPoly>> {
        let mut rest = self.squarefree_part(a);
        let mut out = Vec::new();
        match self.field {
            FieldKind::Prime(_) => {
                let mut d = 1;
                while rest.degree().unwrap_or(0) > 0 {
                    if 2 * d > rest.degree().unwrap() {
                        out.push(rest.clone());
                        break;
                    }
                    for g in self.monic_of_degree(d)? {
                        if self.is_irreducible(&g)? && self.divides(&g, &rest) {
                            rest = self.div_rem(&rest, &g).0;
                            out.push(g);
                        }
                    }
                    d += 1;
                }
            }
            FieldKind::Rationals => {
                for r in self.rational_roots(&rest) {
                    let lin = UPoly::trimmed(vec![-r, BigRational::one()]);
                    rest = self.div_rem(&rest, &lin).0;
                    out.push(lin);
                }
                match rest.degree().unwrap_or(0) {
                    0 => {}
                    1..=3 => out.push(self.monic(&rest)),
                    d => {
                        return Err(Error::Unsupported(format!(
                            "factoring a degree-{d} polynomial over Q"
                        )))
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Monic irreducibles over ℚ with integer coefficients of absolute value at most `height`
    /// and degree at most `max_degree` (capped at 3).
    pub fn rational_irreducible_catalogue(&self, max_degree: usize, height: i64) -> Vec<UPoly> {
        let mut out = Vec::new();
        for d in 1..=max_degree.min(3) {
            let width = (2 * height + 1) as usize;
            let count = width.pow(d as u32);
            for idx in 0..count {
                let mut cs = Vec::with_capacity(d + 1);
                let mut r = idx;
                for _ in 0..d {
                    cs.push(BigRational::from_integer(((r % width) as i64 - height).into()));
                    r /= width;
                }
                cs.push(BigRational::one());
                let f = UPoly::trimmed(cs);
                if self.is_irreducible(&f).unwrap_or(false) {
                    out.push(f);
                }
            }
        }
        out
    }

    pub fn random<R: Rng>(&self, rng: &mut R, max_degree: usize, coeff_bound: i64) -> UPoly {
        let d = rng.gen_range(0..=max_degree);
        UPoly::trimmed(
            (0..=d)
                .map(|_| self.field.random(rng, coeff_bound))
                .collect(),
        )
    }

    pub fn format(&self, a: &UPoly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, i),
            };
            terms.push(format_term(c, &mono));
        }
        join_terms(&terms)
    }
}

pub(crate) fn format_term(c: &BigRational, mono: &str) -> String {
    if mono.is_empty() {
        c.to_string()
    } else if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

pub(crate) fn join_terms(terms: &[String]) -> String {
    let mut s = String::new();
    for (k, t) in terms.iter().enumerate() {
        if k == 0 {
            s.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(t);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> UniPolyRing {
        UniPolyRing::new(FieldKind::Prime(2), "x")
    }

    fn qx() -> UniPolyRing {
        UniPolyRing::new(FieldKind::Rationals, "x")
    }

    #[test]
    fn division_identity() {
        let r = qx();
        let a = r.from_ints(&[-1, 0, 0, 1]);
        let b = r.from_ints(&[1, 2]);
        let (q, rem) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_x2m1_x3m1() {
        let r = qx();
        let g = r.gcd(&r.from_ints(&[-1, 0, 1]), &r.from_ints(&[-1, 0, 0, 1]));
        assert_eq!(g, r.from_ints(&[-1, 1]));
    }

    #[test]
    fn squarefree_parts() {
        let r = qx();
        let x = r.x();
        assert_eq!(r.squarefree_part(&r.pow(&x, 2)), x);
        let f = r.mul(&r.pow(&r.from_ints(&[-1, 1]), 3), &r.from_ints(&[1, 0, 1]));
        assert_eq!(
            r.squarefree_part(&f),
            r.mul(&r.from_ints(&[-1, 1]), &r.from_ints(&[1, 0, 1]))
        );
        // x^2 + 1 = (x + 1)^2 over F2, a p-th power
        let g = f2();
        assert_eq!(g.squarefree_part(&g.from_ints(&[1, 0, 1])), g.from_ints(&[1, 1]));
        // x^4 + x^2 = x^2 (x+1)^2
        assert_eq!(
            g.squarefree_part(&g.from_ints(&[0, 0, 1, 0, 1])),
            g.from_ints(&[0, 1, 1])
        );
    }

    #[test]
    fn irreducible_counts_over_f2() {
        // Gauss: 2, 1, 2, 3 irreducibles of degrees 1..4
        let r = f2();
        let irr = r.monic_irreducibles(4).unwrap();
        let count = |d| irr.iter().filter(|f| f.degree() == Some(d)).count();
        assert_eq!((count(1), count(2), count(3), count(4)), (2, 1, 2, 3));
    }

    #[test]
    fn rational_irreducibility() {
        let r = qx();
        assert!(r.is_irreducible(&r.from_ints(&[1, 0, 1])).unwrap());
        assert!(!r.is_irreducible(&r.from_ints(&[-1, 0, 1])).unwrap());
        assert!(r.is_irreducible(&r.from_ints(&[-2, 0, 0, 1])).unwrap());
        assert!(r.is_irreducible(&r.from_ints(&[1, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn factors_of_x2_plus_x_over_f2() {
        let r = f2();
        let f = r.from_ints(&[0, 1, 1]);
        assert_eq!(
            r.irreducible_factors(&f).unwrap(),
            vec![r.from_ints(&[0, 1]), r.from_ints(&[1, 1])]
        );
    }

    #[test]
    fn formatting() {
        let r = qx();
        let f = r
            .from_coeffs(vec![
                BigRational::from_integer(1.into()),
                BigRational::new((-3).into(), 2.into()),
                BigRational::from_integer(1.into()),
            ])
            .unwrap();
        assert_eq!(r.format(&f), "x^2 - 3/2*x + 1");
    }
}
