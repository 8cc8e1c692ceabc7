//! Truncated prime spectra of `fgId(R)`, localization at primes, residue
//! semifields, radicals and the quotient diagram.

mod local;
mod points;
mod radical;
mod residue;

pub use local::{localize_at_prime, zeta_kernel_probe, LocalizedData};
pub use points::{natgcd_spectrum_check, speck_truncated, PointSet, SpectrumPoint, TruncatedSpectrum};
pub use radical::{
    divisors, is_radical, literal_radical_agrees, prime_factors, quotient_diagram_check, radical_cross_check,
    radical_handle,
};
pub use residue::{residue_semifield, truncated_quotient, ResidueKind, ResidueSemifield, TruncatedQuotient};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ring::{spec_truncated, EuclideanDomain, FieldKind, FgRingIdeal, Pid, RingElement};
use crate::trop::fgid_carrier;

/// Unit-normal elements of a PID up to `bound`: `0..=bound` for ℤ, monic
/// polynomials of degree `≤ bound` over a prime field, and over ℚ the products of
/// at most two catalogued irreducibles. Always contains 0 and 1 and is closed under gcd.
pub(crate) fn small_elements(pid: &Pid, bound: u64) -> Result<Vec<RingElement>> {
    let mut out: Vec<RingElement> = match pid {
        Pid::UniPoly(r) if r.field == FieldKind::Rationals => {
            let primes: Vec<RingElement> = spec_truncated(&pid.descriptor(), bound)?
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.generator().unwrap().clone())
                .collect();
            let mut v = vec![pid.zero(), pid.one()];
            for (i, p) in primes.iter().enumerate() {
                v.push(p.clone());
                for q in &primes[i..] {
                    v.push(pid.normalize(&pid.mul(p, q)));
                }
            }
            v
        }
        _ => fgid_carrier(&pid.descriptor(), bound)?
            .0
            .iter()
            .map(|i| i.generator().expect("principal").clone())
            .collect(),
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// A size for an element of ℤ or `K[x]`: absolute value or degree.
pub(crate) fn element_size(pid: &Pid, a: &RingElement) -> Result<u64> {
    match (pid, a) {
        (Pid::Integers, RingElement::Int(n)) => n
            .magnitude()
            .to_u64()
            .ok_or_else(|| Error::Resource(format!("{n} is too large to truncate at"))),
        (Pid::UniPoly(_), RingElement::Poly(p)) => Ok(p.degree().unwrap_or(0) as u64),
        _ => Ok(0),
    }
}

/// The canonical generator of a principal ideal of a PID.
pub(crate) fn pid_generator(i: &FgRingIdeal) -> Result<(Pid, RingElement)> {
    let pid = i
        .ring()
        .as_pid()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a principal ideal domain", i.ring().name())))?;
    let g = i.generator().expect("principal").clone();
    Ok((pid, g))
}
