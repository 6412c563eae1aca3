//! Rational enclosures of pi and of sine/cosine at rational points.
//!
//! The certificate grid only ever needs the fixed 20-digit bracket
//! [`pi_grid_bounds`]; the adaptive [`pi_bracket`] (Machin's formula with
//! bracketed arctangent tails) exists so that nothing about pi is taken on
//! trust, and so vertex coordinates can be enclosed to arbitrary precision.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::{pow10, rat_int, Rat};

static PI_GRID: LazyLock<(Rat, Rat)> = LazyLock::new(|| {
    let denom = pow10(20);
    let lo: BigInt = "314159265358979323846".parse().unwrap();
    let hi: BigInt = &lo + 1;
    (Rat::new(lo, denom.clone()), Rat::new(hi, denom))
});

/// Fixed rational bracket `lo < pi < hi` agreeing to 20 decimal digits.
/// All grid bounds derived from pi (initial boxes, band extents) use these
/// two constants so certificates are reproducible byte for byte.
pub fn pi_grid_bounds() -> (&'static Rat, &'static Rat) {
    (&PI_GRID.0, &PI_GRID.1)
}

/// Bracket of `atan(1/k)` with both endpoints within `tol` of the true value.
fn atan_inv_bracket(k: i64, tol: &Rat) -> (Rat, Rat) {
    assert!(k >= 2);
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut sum = Rat::zero();
    let mut kpow = BigInt::from(k);
    let mut j: u64 = 0;
    loop {
        let term = Rat::new(BigInt::one(), BigInt::from(2 * j + 1) * &kpow);
        // Alternating series with strictly decreasing terms: the tail after
        // dropping `term` is smaller than `term` in magnitude.
        if &term <= tol {
            return (&sum - &term, &sum + &term);
        }
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        kpow *= &k2;
        j += 1;
    }
}

/// Bracket of pi accurate to at least `digits` decimal digits, via
/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_bracket(digits: u32) -> (Rat, Rat) {
    let tol = Rat::new(BigInt::one(), pow10(digits + 4));
    let (lo5, hi5) = atan_inv_bracket(5, &tol);
    let (lo239, hi239) = atan_inv_bracket(239, &tol);
    let sixteen = rat_int(16);
    let four = rat_int(4);
    (&sixteen * &lo5 - &four * &hi239, &sixteen * &hi5 - &four * &lo239)
}

/// Largest admissible |x| for the series enclosures below.
fn assert_in_range(x: &Rat) {
    assert!(x.abs() <= rat_int(8), "series enclosure requires |x| <= 8");
}

/// Sine (odd == true) or cosine Taylor sum at `x` with a rigorous tail bound
/// of at most `10^-digits`; returns the bracket `(sum - r, sum + r)`.
fn series_bracket(x: &Rat, digits: u32, odd: bool) -> (Rat, Rat) {
    assert_in_range(x);
    let tol = Rat::new(BigInt::one(), pow10(digits));
    let x2 = x * x;
    let mut term = if odd { x.clone() } else { Rat::one() };
    let mut k: u64 = if odd { 1 } else { 0 };
    let mut sum = Rat::zero();
    let mut sign_plus = true;
    loop {
        if sign_plus {
            sum += &term;
        } else {
            sum -= &term;
        }
        // Next term of the same parity; its magnitude bounds the whole tail
        // up to the geometric factor 1/(1 - q) <= 2, valid once
        // q = x^2/((k+3)(k+4)) <= 64/(15*16) < 1/2, i.e. from k >= 12 on.
        term = &term * &x2 / rat_int(((k + 1) * (k + 2)) as i64);
        k += 2;
        sign_plus = !sign_plus;
        let tail = term.abs() * rat_int(2);
        if k >= 12 && tail <= tol {
            return (&sum - &tail, &sum + &tail);
        }
    }
}

/// Bracket of `sin(x)` for rational `x`, `|x| <= 8`.
pub fn sin_bracket(x: &Rat, digits: u32) -> (Rat, Rat) {
    series_bracket(x, digits, true)
}

/// Bracket of `cos(x)` for rational `x`, `|x| <= 8`.
pub fn cos_bracket(x: &Rat, digits: u32) -> (Rat, Rat) {
    series_bracket(x, digits, false)
}

/// Bracket of `sin(x)` over an interval `x in [lo, hi]`, using the Lipschitz
/// bound |sin'| <= 1 around the midpoint.
pub fn sin_bracket_interval(lo: &Rat, hi: &Rat, digits: u32) -> (Rat, Rat) {
    assert!(lo <= hi);
    let mid = (lo + hi) / rat_int(2);
    let half = (hi - lo) / rat_int(2);
    let (a, b) = sin_bracket(&mid, digits);
    (a - &half, b + &half)
}

/// Bracket of `cos(x)` over an interval `x in [lo, hi]`.
pub fn cos_bracket_interval(lo: &Rat, hi: &Rat, digits: u32) -> (Rat, Rat) {
    assert!(lo <= hi);
    let mid = (lo + hi) / rat_int(2);
    let half = (hi - lo) / rat_int(2);
    let (a, b) = cos_bracket(&mid, digits);
    (a - &half, b + &half)
}
