//! Exact arithmetic kernel.
//!
//! Everything the verifier trusts lives here: arbitrary-precision rationals,
//! a truncated Taylor sine/cosine with a proven error budget, directed
//! (floor/ceil) square roots on decimal grids, interval enclosures of pi and
//! of sine/cosine at rational points, and the real subfield of the 60th
//! cyclotomic field used for exact vertex congruence checks.

pub mod cyclo;
pub mod pi;
pub mod rat;
pub mod sqrt;
pub mod trig;

pub use rat::{kappa, pow10, rat, rat_int, rat_to_f64, Rat};
