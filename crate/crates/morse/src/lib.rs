//! Exact arithmetic for the Morse transformation on the 2-adic integers.
//!
//! The crate represents elements of Z_2 either as rationals with odd
//! denominator (every eventually periodic digit sequence) or as seeded
//! random bit streams, and builds on top of that:
//!
//! - [`morse_map`]: the adic Morse map `M`, its jump arithmetic `a_r`,
//!   the congruence formulas on the integers, and the inverse with the
//!   gluing `M(-1/3) = 0`, `M(-2/3) = -1`;
//! - [`substitution`]: the Morse substitution, the Thue-Morse word and
//!   the digit-differentiation operator conjugating `M` to the odometer;
//! - [`perms`]: the inductive family of Morse permutations `g_n` on
//!   `{2^n, ..., 2^{n+1}-1}` and their two broken-cycle linear orders;
//! - [`timesub`]: the time substitution `k -> t(k, x)` re-ordering
//!   odometer orbits into Morse orbits, with both an exact iteration
//!   oracle and the constructive nested-interval order builder;
//! - [`stats`]: Monte Carlo checks of the geometric law of the first
//!   repeat index and of the jump magnitudes;
//! - [`verify`]: the full self-check suite behind `morse verify`.

pub mod dyadic;
pub mod morse_map;
pub mod perms;
pub mod stats;
pub mod substitution;
pub mod timesub;
pub mod verify;

mod error;

pub use dyadic::{Dyadic, ExceptionalClass};
pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
