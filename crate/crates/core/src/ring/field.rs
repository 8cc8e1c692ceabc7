use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field: ℚ or 𝔽_p.
///
/// Elements of 𝔽_p are stored as integer-valued rationals in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldKind {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(Error::Domain(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => *p,
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Prime(p) => format!("F{p}"),
        }
    }

    fn modp(&self, a: BigInt) -> BigRational {
        match self {
            FieldKind::Rationals => BigRational::from_integer(a),
            FieldKind::Prime(p) => BigRational::from_integer(a.mod_floor(&BigInt::from(*p))),
        }
    }

    /// Maps an arbitrary rational into the field; fails when a denominator vanishes mod p.
    pub fn from_rational(&self, a: &BigRational) -> Result<BigRational> {
        match self {
            FieldKind::Rationals => Ok(a.clone()),
            FieldKind::Prime(p) => {
                let p = BigInt::from(*p);
                let den = a.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::Domain(format!("{a} has no image mod {p}")));
                }
                let inv = den.modpow(&(&p - 2u32), &p);
                Ok(BigRational::from_integer((a.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_int(&self, a: i64) -> BigRational {
        self.modp(BigInt::from(a))
    }

    pub fn contains(&self, a: &BigRational) -> bool {
        match self {
            FieldKind::Rationals => true,
            FieldKind::Prime(p) => {
                a.is_integer() && !a.is_negative() && a.numer() < &BigInt::from(*p)
            }
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            FieldKind::Rationals => a + b,
            FieldKind::Prime(_) => self.modp(a.numer() + b.numer()),
        }
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            FieldKind::Rationals => a - b,
            FieldKind::Prime(_) => self.modp(a.numer() - b.numer()),
        }
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        match self {
            FieldKind::Rationals => -a,
            FieldKind::Prime(_) => self.modp(-a.numer()),
        }
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            FieldKind::Rationals => a * b,
            FieldKind::Prime(_) => self.modp(a.numer() * b.numer()),
        }
    }

    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            FieldKind::Rationals => Some(a.recip()),
            FieldKind::Prime(p) => {
                let p = BigInt::from(*p);
                Some(BigRational::from_integer(a.numer().modpow(&(&p - 2u32), &p)))
            }
        }
    }

    /// All elements, for a finite field.
    pub fn elements(&self) -> Option<Vec<BigRational>> {
        match self {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some((0..*p).map(|i| BigRational::from_integer(i.into())).collect()),
        }
    }

    /// A random element; rationals have numerator and denominator bounded by `bound`.
    pub fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> BigRational {
        match self {
            FieldKind::Rationals => {
                let n = rng.gen_range(-bound..=bound);
                let d = rng.gen_range(1..=bound.max(1));
                BigRational::new(n.into(), d.into())
            }
            FieldKind::Prime(p) => BigRational::from_integer(rng.gen_range(0..*p).into()),
        }
    }

    pub fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldKind::prime(7).unwrap();
        assert_eq!(f.add(&q(5, 1), &q(4, 1)), q(2, 1));
        assert_eq!(f.neg(&q(3, 1)), q(4, 1));
        assert_eq!(f.mul(&q(3, 1), &f.inv(&q(3, 1)).unwrap()), q(1, 1));
        assert_eq!(f.from_rational(&q(1, 2)).unwrap(), q(4, 1));
        assert!(f.from_rational(&q(1, 7)).is_err());
        assert!(FieldKind::prime(9).is_err());
    }

    #[test]
    fn rational_field_arithmetic() {
        let f = FieldKind::Rationals;
        assert_eq!(f.add(&q(1, 2), &q(1, 3)), q(5, 6));
        assert_eq!(f.inv(&q(-2, 3)).unwrap(), q(-3, 2));
        assert!(f.inv(&q(0, 1)).is_none());
    }
}
