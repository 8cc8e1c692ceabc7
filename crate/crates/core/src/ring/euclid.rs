use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::FieldKind;
use super::upoly::{UPoly, UniPolyRing};

/// A Euclidean domain with a chosen unit-normal representative per associate class.
pub trait EuclideanDomain: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Division with remainder; `b` must be nonzero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// The unit-normal associate of `a` (nonnegative integer, monic polynomial, 1 in a field).
    fn normalize(&self, a: &Self::Elem) -> Self::Elem;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Canonical representative of `a` modulo the nonzero element `m`.
    fn reduce_mod(&self, a: &Self::Elem, m: &Self::Elem) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.div_rem(&x, &y).1;
            x = y;
            y = r;
        }
        self.normalize(&x)
    }

    /// Returns `(g, s, t)` with `g = s·a + t·b` and `g` unit-normal.
    fn ext_gcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !self.is_zero(&r1) {
            let (q, r) = self.div_rem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if self.is_zero(&r0) {
            return (r0, s0, t0);
        }
        let g = self.normalize(&r0);
        // r0 = u·g for a unit u; divide the cofactors by u
        let unit = self.exact_div(&r0, &g);
        let unit_inv = self.exact_div(&self.one(), &unit);
        (g, self.mul(&s0, &unit_inv), self.mul(&t0, &unit_inv))
    }

    fn lcm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let g = self.gcd(a, b);
        self.normalize(&self.mul(&self.exact_div(a, &g), b))
    }

    /// Whether `a` divides `b`.
    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.div_rem(b, a).1)
    }

    /// `a / b` when `b` divides `a`.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (q, r) = self.div_rem(a, b);
        debug_assert!(self.is_zero(&r), "inexact division");
        q
    }

    fn associated(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    /// Largest `k` with `p^k | a`, for nonzero `a` and a nonunit, nonzero `p`.
    fn multiplicity(&self, p: &Self::Elem, a: &Self::Elem) -> u32 {
        let mut k = 0;
        let mut x = a.clone();
        while !self.is_zero(&x) && self.divides(p, &x) {
            x = self.exact_div(&x, p);
            k += 1;
        }
        k
    }

    fn pow(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// The ring ℤ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IntegerRing;

impl EuclideanDomain for IntegerRing {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_mod_floor(b)
    }
    fn normalize(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn reduce_mod(&self, a: &BigInt, m: &BigInt) -> BigInt {
        a.mod_floor(&m.abs())
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        Integer::gcd(a, b)
    }
}

impl EuclideanDomain for FieldKind {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        FieldKind::add(self, a, b)
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        FieldKind::sub(self, a, b)
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        FieldKind::mul(self, a, b)
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        FieldKind::neg(self, a)
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        let inv = self.inv(b).expect("division by zero");
        (FieldKind::mul(self, a, &inv), BigRational::zero())
    }
    fn normalize(&self, a: &BigRational) -> BigRational {
        if a.is_zero() {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn reduce_mod(&self, _a: &BigRational, _m: &BigRational) -> BigRational {
        BigRational::zero()
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl EuclideanDomain for UniPolyRing {
    type Elem = UPoly;
    fn zero(&self) -> UPoly {
        UPoly::zero()
    }
    fn one(&self) -> UPoly {
        UPoly::one()
    }
    fn is_zero(&self, a: &UPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        UniPolyRing::add(self, a, b)
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        UniPolyRing::sub(self, a, b)
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        UniPolyRing::mul(self, a, b)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        UniPolyRing::neg(self, a)
    }
    fn div_rem(&self, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
        UniPolyRing::div_rem(self, a, b)
    }
    fn normalize(&self, a: &UPoly) -> UPoly {
        self.monic(a)
    }
    fn is_unit(&self, a: &UPoly) -> bool {
        a.degree() == Some(0)
    }
    fn reduce_mod(&self, a: &UPoly, m: &UPoly) -> UPoly {
        UniPolyRing::div_rem(self, a, m).1
    }
    fn format(&self, a: &UPoly) -> String {
        self.format(a)
    }
    fn pow(&self, a: &UPoly, n: u32) -> UPoly {
        UniPolyRing::pow(self, a, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn integer_gcd_lcm() {
        let r = IntegerRing;
        assert_eq!(r.gcd(&z(-12), &z(18)), z(6));
        assert_eq!(r.lcm(&z(4), &z(-6)), z(12));
        assert_eq!(r.gcd(&z(0), &z(0)), z(0));
        assert!(r.divides(&z(3), &z(-9)));
        assert!(!r.divides(&z(0), &z(9)));
        assert_eq!(r.multiplicity(&z(2), &z(48)), 4);
    }

    #[test]
    fn integer_ext_gcd_is_bezout() {
        let r = IntegerRing;
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (12, 0), (-4, -6)] {
            let (g, s, t) = r.ext_gcd(&z(a), &z(b));
            assert_eq!(&s * z(a) + &t * z(b), g);
            assert_eq!(g, r.gcd(&z(a), &z(b)));
        }
    }

    #[test]
    fn reduce_mod_is_nonnegative() {
        assert_eq!(IntegerRing.reduce_mod(&z(-7), &z(5)), z(3));
        assert_eq!(IntegerRing.reduce_mod(&z(7), &z(-5)), z(2));
    }
}
