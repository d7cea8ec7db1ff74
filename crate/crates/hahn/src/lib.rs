//! Exact symbolic arithmetic for generalized power series with well-ordered
//! support over the nonpositive reals.
//!
//! The crate provides, bottom to top:
//!
//! * [`ordinal`] — Cantor normal forms below epsilon_0 with standard and
//!   Hessenberg (natural) arithmetic, shape classification, parsing/printing;
//! * [`exponent`] — the exact exponent field `Q(sqrt d : d squarefree)` with
//!   decidable order and Q-linear independence;
//! * [`coeff`] — coefficients in the rational function field `Q(X1, X2, ...)`;
//! * [`series`] — finitely presented series ("ladder families"): enumeration,
//!   ring operations, truncations, normal forms, and order types;
//! * [`valuation`] — the semivaluation `v_J`, degree valuations, critical
//!   points, big/residual point sets, and the congruence/bound checks;
//! * [`independence`] — randomness and hereditary-independence certification
//!   with replayable verdicts;
//! * [`certifier`] — the irreducibility/primality certifier emitting
//!   deterministic certificates;
//! * [`dsl`] — the textual series language used by the CLI.

pub mod certifier;
pub mod coeff;
pub mod dsl;
pub mod exponent;
pub mod independence;
pub mod ordinal;
pub mod primes;
pub mod series;
pub mod valuation;

pub use coeff::{Coeff, Var};
pub use exponent::Exponent;
pub use ordinal::Ordinal;
pub use series::{Family, Ladder, Series};
