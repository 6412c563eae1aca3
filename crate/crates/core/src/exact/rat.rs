//! Rational scalar type and small constructors.
//!
//! `Rat` is a reduced big-integer fraction; all kernel outputs are kept in
//! canonical form so equality and ordering are exact.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact scalar: arbitrary-precision rational in lowest terms.
pub type Rat = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// `10^k` as a big integer.
pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10u8).pow(k)
}

static KAPPA: LazyLock<Rat> = LazyLock::new(|| Rat::new(BigInt::from(1), pow10(10)));

///// Kernel accuracy budget `kappa = 10^-10`: every rational trig matrix is
/// within `kappa` (operator norm) of its real counterpart.
pub fn kappa() -> &'static Rat {
    &KAPPA
}

/// Nearest-double approximation, good to ~15 significant digits.
///
/// Scales by a power of two so numerator and denominator both fit in a
/// double before dividing; only used on the reporting/float side, never
/// inside an exact decision.
pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let (mut n, mut d) = (x.numer().abs(), x.denom().clone());
    // Keep both operands under 2^900 so the conversion cannot overflow.
    let shift = |v: &BigInt| (v.bits() as i64 - 900).max(0) as usize;
    let s = shift(&n).max(shift(&d));
    n >>= s;
    d >>= s;
    let q = n.to_f64().unwrap_or(f64::INFINITY) / d.to_f64().unwrap_or(f64::INFINITY);
    if neg {
        -q
    } else {
        q
    }
}

/// Exact 2-vector.
pub type QVec2 = [Rat; 2];
/// Exact 3-vector.
pub type QVec3 = [Rat; 3];
/// Exact 2x2 matrix (rows).
pub type QMat2 = [[Rat; 2]; 2];
/// Exact 2x3 matrix (rows).
pub type QMat23 = [[Rat; 3]; 2];

pub fn qdot2(a: &QVec2, b: &QVec2) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1]
}

pub fn qdot3(a: &QVec3, b: &QVec3) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn qsub2(a: &QVec2, b: &QVec2) -> QVec2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn qsub3(a: &QVec3, b: &QVec3) -> QVec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn qneg3(a: &QVec3) -> QVec3 {
    [-&a[0], -&a[1], -&a[2]]
}

pub fn qnorm2_sq(a: &QVec2) -> Rat {
    qdot2(a, a)
}

pub fn qnorm3_sq(a: &QVec3) -> Rat {
    qdot3(a, a)
}

/// `m * v` for a 2x3 matrix and a 3-vector.
pub fn qmatvec23(m: &QMat23, v: &QVec3) -> QVec2 {
    [qdot3(&m[0], v), qdot3(&m[1], v)]
}

/// `m * v` for a 2x2 matrix and a 2-vector.
pub fn qmatvec2(m: &QMat2, v: &QVec2) -> QVec2 {
    [qdot2(&m[0], v), qdot2(&m[1], v)]
}

/// `a * b` for 2x2 times 2x3.
pub fn qmatmul2_23(a: &QMat2, b: &QMat23) -> QMat23 {
    [
        [
            &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
            &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            &a[0][0] * &b[0][2] + &a[0][1] * &b[1][2],
        ],
        [
            &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
            &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            &a[1][0] * &b[0][2] + &a[1][1] * &b[1][2],
        ],
    ]
}

/// Row vector `w^t * m` for a 2-vector and a 2x3 matrix.
pub fn qrow_from_vec23(w: &QVec2, m: &QMat23) -> QVec3 {
    [
        &w[0] * &m[0][0] + &w[1] * &m[1][0],
        &w[0] * &m[0][1] + &w[1] * &m[1][1],
        &w[0] * &m[0][2] + &w[1] * &m[1][2],
    ]
}
