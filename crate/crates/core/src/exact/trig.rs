//! Truncated Taylor sine/cosine over the rationals and the projection
//! matrices built from them.
//!
//! `sin_q` is the degree-25 Taylor polynomial of sine, `cos_q` the degree-24
//! polynomial of cosine. On the working domain |x| <= 4 the alternating-series
//! tail gives |sin_q - sin| <= 4^27/27! and |cos_q - cos| <= 4^26/26!, both
//! below kappa/7; every matrix assembled from at most two trig factors per
//! entry then sits within kappa of its real counterpart in operator norm.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rat::{rat_int, QMat2, QMat23, QVec3, Rat};

/// 25! and the coefficients 25!/(2j+1)!, j = 0..=12.
static SIN_TABLE: LazyLock<(BigInt, [BigInt; 13])> = LazyLock::new(|| {
    let fact25 = factorial(25);
    let coeffs: Vec<BigInt> = (0..13).map(|j| &fact25 / factorial(2 * j + 1)).collect();
    (fact25, coeffs.try_into().unwrap())
});

/// 24! and the coefficients 24!/(2j)!, j = 0..=12.
static COS_TABLE: LazyLock<(BigInt, [BigInt; 13])> = LazyLock::new(|| {
    let fact24 = factorial(24);
    let coeffs: Vec<BigInt> = (0..13).map(|j| &fact24 / factorial(2 * j)).collect();
    (fact24, coeffs.try_into().unwrap())
});

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

fn assert_domain(x: &Rat) {
    assert!(
        x.abs() <= rat_int(4),
        "rational trig kernel requires |x| <= 4, got {x}"
    );
}

/// Integer Horner evaluation of sum_j (-1)^j c_j * p^(2j) * q^(24-2j).
fn alternating_horner(coeffs: &[BigInt; 13], p: &BigInt, q: &BigInt) -> BigInt {
    let p2 = p * p;
    let q2 = q * q;
    // Degree-12 coefficient first; (-1)^12 = +1.
    let mut acc = coeffs[12].clone();
    let mut qpow = BigInt::from(1);
    for j in (0..12).rev() {
        qpow *= &q2;
        let term = &coeffs[j as usize] * &qpow;
        acc = acc * &p2;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Degree-25 truncated Taylor sine at a rational point, |x| <= 4.
pub fn sin_q(x: &Rat) -> Rat {
    assert_domain(x);
    let (fact25, coeffs) = &*SIN_TABLE;
    let p = x.numer();
    let q = x.denom();
    let num = p * alternating_horner(coeffs, p, q);
    let den = fact25 * q.pow(25);
    Rat::new(num, den)
}

/// Degree-24 truncated Taylor cosine at a rational point, |x| <= 4.
pub fn cos_q(x: &Rat) -> Rat {
    assert_domain(x);
    let (fact24, coeffs) = &*COS_TABLE;
    let p = x.numer();
    let q = x.denom();
    let num = alternating_horner(coeffs, p, q);
    let den = fact24 * q.pow(24);
    Rat::new(num, den)
}

/// One angle's kernel sine and cosine, computed once and reused.
#[derive(Clone, Debug)]
pub struct TrigPair {
    pub sin: Rat,
    pub cos: Rat,
}

pub fn trig_q(x: &Rat) -> TrigPair {
    TrigPair { sin: sin_q(x), cos: cos_q(x) }
}

/// Plane rotation [[c, -s], [s, c]].
pub fn rot_q(a: &TrigPair) -> QMat2 {
    [
        [a.cos.clone(), -a.sin.clone()],
        [a.sin.clone(), a.cos.clone()],
    ]
}

/// Derivative of the plane rotation with respect to the angle.
pub fn rot_q_deriv(a: &TrigPair) -> QMat2 {
    [
        [-a.sin.clone(), -a.cos.clone()],
        [a.cos.clone(), -a.sin.clone()],
    ]
}

/// View direction (cos t sin f, sin t sin f, cos f).
pub fn dir_q(t: &TrigPair, f: &TrigPair) -> QVec3 {
    [&t.cos * &f.sin, &t.sin * &f.sin, f.cos.clone()]
}

/// Projection to the plane orthogonal to the view direction.
pub fn proj_q(t: &TrigPair, f: &TrigPair) -> QMat23 {
    [
        [-t.sin.clone(), t.cos.clone(), Rat::zero()],
        [-(&t.cos * &f.cos), -(&t.sin * &f.cos), f.sin.clone()],
    ]
}

/// Partial derivative of the projection in the azimuth angle.
pub fn proj_q_dtheta(t: &TrigPair, f: &TrigPair) -> QMat23 {
    [
        [-t.cos.clone(), -t.sin.clone(), Rat::zero()],
        [&t.sin * &f.cos, -(&t.cos * &f.cos), Rat::zero()],
    ]
}

/// Partial derivative of the projection in the polar angle.
pub fn proj_q_dphi(t: &TrigPair, f: &TrigPair) -> QMat23 {
    [
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [&t.cos * &f.sin, &t.sin * &f.sin, f.cos.clone()],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::pi::{cos_bracket, sin_bracket};
    use crate::exact::rat::{kappa, pow10, rat};
    use num_traits::{One, ToPrimitive};

    fn kappa_seventh() -> Rat {
        kappa() / rat_int(7)
    }

    #[test]
    fn zero_is_exact() {
        assert_eq!(sin_q(&Rat::zero()), Rat::zero());
        assert_eq!(cos_q(&Rat::zero()), Rat::one());
    }

    #[test]
    fn sine_is_odd_cosine_even_exactly() {
        for (n, d) in [(1i64, 3i64), (7, 2), (-4, 1), (355, 113)] {
            let x = rat(n, d);
            let neg = -x.clone();
            assert_eq!(sin_q(&neg), -sin_q(&x));
            assert_eq!(cos_q(&neg), cos_q(&x));
        }
    }

    /// Tail bounds quoted for the degree-25/24 truncation: 4^27/27! for sine
    /// and 4^26/26! for cosine, both strictly below kappa/7.
    #[test]
    fn taylor_tail_constants_fit_budget() {
        let pow26 = Rat::new(BigInt::from(4).pow(26), factorial(26));
        let pow27 = Rat::new(BigInt::from(4).pow(27), factorial(27));
        assert!(pow27 < pow26);
        assert!(pow26 < kappa_seventh());
    }

    #[test]
    fn accuracy_against_independent_series_oracle() {
        // Oracle: 40-digit bracket of the true sine/cosine from exact/pi.
        let budget = kappa_seventh();
        let mut probes: Vec<Rat> = vec![rat(4, 1), rat(-4, 1), rat(0, 1)];
        for k in 1..40 {
            probes.push(rat(8 * k - 160, 41));
        }
        for x in probes {
            let (slo, shi) = sin_bracket(&x, 40);
            let s = sin_q(&x);
            assert!((&s - &slo).abs() <= budget && (&s - &shi).abs() <= budget);
            let (clo, chi) = cos_bracket(&x, 40);
            let c = cos_q(&x);
            assert!((&c - &clo).abs() <= budget && (&c - &chi).abs() <= budget);
        }
    }

    #[test]
    fn double_precision_spot_values() {
        let x = rat(1, 1);
        assert!((sin_q(&x).to_f64().unwrap() - 1f64.sin()).abs() < 1e-11);
        assert!((cos_q(&x).to_f64().unwrap() - 1f64.cos()).abs() < 1e-11);
    }

    /// Pythagoras within kappa: entries of the rotation matrix are within
    /// kappa/7 of sine/cosine, so s^2 + c^2 stays within kappa of 1.
    #[test]
    fn rotation_norm_within_kappa_of_one() {
        for (n, d) in [(1i64, 1i64), (-3, 1), (22, 7), (-113, 36)] {
            let t = trig_q(&rat(n, d));
            let norm2 = &t.sin * &t.sin + &t.cos * &t.cos;
            assert!((norm2 - Rat::one()).abs() <= kappa().clone());
        }
    }

    #[test]
    #[should_panic(expected = "|x| <= 4")]
    fn domain_is_enforced() {
        let _ = sin_q(&rat(9, 2));
    }

    #[test]
    fn denominator_growth_is_bounded() {
        // Output denominator divides 25! * q^25: keeps leaf checks integral.
        let x = rat(3, 7);
        let s = sin_q(&x);
        let bound = factorial(25) * BigInt::from(7).pow(25);
        assert_eq!((bound % s.denom()), BigInt::zero());
        let _ = pow10(0);
    }
}
