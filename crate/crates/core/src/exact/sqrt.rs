//! Directed square roots on decimal grids.
//!
//! For x > 0 there is a unique integer a with x*10^(2a) in [10^20, 10^22);
//! with b the integer square root of that scaled value, `sqrt_lower` returns
//! b/10^a and `sqrt_upper` its reciprocal construction 1/sqrt_lower(1/x).
//! Both functions bracket the true root with about ten significant digits,
//! and map perfect grid squares to exact values.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::rat::{pow10, QVec2, QVec3, Rat};

static WINDOW: LazyLock<(BigInt, BigInt)> = LazyLock::new(|| (pow10(20), pow10(22)));

/// floor(x * 10^(2a)) for the unique a landing in the window, returned with a.
fn scale_to_window(x: &Rat) -> (BigInt, i64) {
    let (lo, hi) = &*WINDOW;
    let num = x.numer();
    let den = x.denom();
    // First guess from bit lengths: log10 ~ bits * 0.30103.
    let log_est = (num.bits() as f64 - den.bits() as f64) * 0.301_03;
    let mut a = ((20.0 - log_est) / 2.0).ceil() as i64;
    loop {
        let z = if a >= 0 {
            (num * pow10(2 * a as u32)).div_floor(den)
        } else {
            num.div_floor(&(den * pow10(2 * (-a) as u32)))
        };
        if &z < lo {
            a += 1;
        } else if &z >= hi {
            a -= 1;
        } else {
            return (z, a);
        }
    }
}

/// Largest grid value b/10^a with (b/10^a)^2 <= x. Requires x >= 0.
pub fn sqrt_lower(x: &Rat) -> Rat {
    assert!(!x.is_negative(), "sqrt_lower needs x >= 0, got {x}");
    if x.is_zero() {
        return Rat::zero();
    }
    let (z, a) = scale_to_window(x);
    let b = z.sqrt();
    debug_assert!(&b * &b <= z);
    if a >= 0 {
        Rat::new(b, pow10(a as u32))
    } else {
        Rat::from(b * pow10((-a) as u32))
    }
}

/// Grid value with sqrt_upper(x)^2 >= x, dual to `sqrt_lower`. Requires x >= 0.
pub fn sqrt_upper(x: &Rat) -> Rat {
    assert!(!x.is_negative(), "sqrt_upper needs x >= 0, got {x}");
    if x.is_zero() {
        return Rat::zero();
    }
    sqrt_lower(&x.recip()).recip()
}

/// Lower bound on the Euclidean norm of a rational 2-vector.
pub fn norm2_lower(v: &QVec2) -> Rat {
    sqrt_lower(&(&v[0] * &v[0] + &v[1] * &v[1]))
}

/// Upper bound on the Euclidean norm of a rational 2-vector.
pub fn norm2_upper(v: &QVec2) -> Rat {
    sqrt_upper(&(&v[0] * &v[0] + &v[1] * &v[1]))
}

/// Lower bound on the Euclidean norm of a rational 3-vector.
pub fn norm3_lower(v: &QVec3) -> Rat {
    sqrt_lower(&(&v[0] * &v[0] + &v[1] * &v[1] + &v[2] * &v[2]))
}

/// Upper bound on the Euclidean norm of a rational 3-vector.
pub fn norm3_upper(v: &QVec3) -> Rat {
    sqrt_upper(&(&v[0] * &v[0] + &v[1] * &v[1] + &v[2] * &v[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, rat_int};

    #[test]
    fn square_root_of_two_matches_integer_root_oracle() {
        // Oracle: b = isqrt(2 * 10^20) checked by its defining inequalities.
        let b: BigInt = (BigInt::from(2) * pow10(20)).sqrt();
        assert!(&b * &b <= BigInt::from(2) * pow10(20));
        assert!((&b + 1) * (&b + 1) > BigInt::from(2) * pow10(20));
        assert_eq!(b, BigInt::from(14_142_135_623u64));
        assert_eq!(sqrt_lower(&rat_int(2)), Rat::new(b, pow10(10)));
    }

    #[test]
    fn perfect_squares_have_exact_lower_roots() {
        for n in [1i64, 4, 9, 100, 25_000_000] {
            let x = rat_int(n);
            let root = rat_int((n as f64).sqrt().round() as i64);
            assert_eq!(sqrt_lower(&x), root);
        }
        assert_eq!(sqrt_lower(&rat(1, 4)), rat(1, 2));
    }

    /// The upper root is exact only when the scaled reciprocal is itself a
    /// perfect square; 9 truncates (10^22/9 is not square) and lands one
    /// grid step high, which is correct behavior for an upper bound.
    #[test]
    fn upper_roots_are_exact_or_one_step_high() {
        for n in [1i64, 4, 100, 25_000_000] {
            let root = rat_int((n as f64).sqrt().round() as i64);
            assert_eq!(sqrt_upper(&rat_int(n)), root);
        }
        assert_eq!(sqrt_upper(&rat(1, 4)), rat(1, 2));
        let up9 = sqrt_upper(&rat_int(9));
        assert_eq!(up9, Rat::new(pow10(11), 33_333_333_333i64.into()));
        assert!(up9 > rat_int(3) && up9 < rat(3_000_000_001, 1_000_000_000));
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(sqrt_lower(&Rat::zero()), Rat::zero());
        assert_eq!(sqrt_upper(&Rat::zero()), Rat::zero());
    }

    #[test]
    fn brackets_the_true_root() {
        let samples = [
            rat(2, 1),
            rat(1, 2),
            rat(3, 7),
            rat(123_456_789, 1000),
            rat(1, 10_000_000_000),
            rat(99_999_999, 100_000_000),
            rat(7_777_777, 3),
        ];
        for x in samples {
            let lo = sqrt_lower(&x);
            let hi = sqrt_upper(&x);
            assert!(&lo * &lo <= x, "lower bound must not overshoot");
            assert!(&hi * &hi >= x, "upper bound must not undershoot");
            assert!(lo <= hi);
            // About ten significant digits: gap below 2e-9 of the value.
            assert!(&hi - &lo <= hi * rat(2, 1_000_000_000));
        }
    }

    #[test]
    fn pythagorean_norms_bracket_tightly() {
        let v: QVec2 = [rat_int(3), rat_int(4)];
        assert_eq!(norm2_lower(&v), rat_int(5));
        assert_eq!(norm2_upper(&v), rat_int(5));
        let w: QVec3 = [rat_int(1), rat_int(2), rat_int(2)];
        assert_eq!(norm3_lower(&w), rat_int(3));
        let hi = norm3_upper(&w);
        assert!(hi >= rat_int(3) && hi < rat(3_000_000_001, 1_000_000_000));
    }

    #[test]
    fn reciprocal_duality_is_exact() {
        let x = rat(17, 5);
        let via_recip = sqrt_lower(&x.recip()).recip();
        assert_eq!(sqrt_upper(&x), via_recip);
    }
}
