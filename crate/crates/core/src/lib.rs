//! Exact computations with idempotent semirings of finitely generated ideals.
//!
//! The crate is organised bottom-up:
//!
//! * [`semiring`]: the semiring abstraction, finite table semirings, the Boolean
//!   and gcd semirings, and localization.
//! * [`ring`]: exact rings (ℤ, ℤ/n, prime fields, ℚ, univariate and
//!   multivariate polynomials, localizations) with canonical ideal forms.
//! * [`ideal`]: ideals, subtractive ideals and congruences of finite semirings,
//!   and the retraction maps between them.
//! * [`trop`]: the semiring `fgId(R)`, submodule semimodules, valuations and
//!   the subtractive-ideal correspondence.
//! * [`spectrum`]: truncated prime spectra, localization at primes, radicals.
//! * [`sheaf`]: presheaves on finite sites, stalks, sheafification and gluing.
//! * [`suite`]: seeded verification runs used by the command line and tests.

pub mod error;
pub mod ideal;
pub mod report;
pub mod ring;
pub mod semiring;
pub mod sheaf;
pub mod spectrum;
pub mod suite;
pub mod trop;

pub use error::{Error, Result};
pub use report::{Report, Witness};
