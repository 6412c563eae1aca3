//! Arithmetic in Q(zeta_60), the degree-16 cyclotomic field.
//!
//! Elements are rational-coefficient polynomials in zeta = e^(2 pi i/60),
//! reduced modulo the 60th cyclotomic polynomial
//! Phi_60(x) = x^16 + x^14 - x^10 - x^8 - x^6 + x^2 + 1.
//! Since {1, zeta, ..., zeta^15} is a Q-basis, structural equality of the
//! reduced coefficient vectors is exact field equality. The field contains
//! cos(2 pi k/15) = (zeta^(4k) + zeta^(-4k))/2 and the matching sines, which
//! is all the irrationality the 30-fold symmetric vertex orbits need, so
//! vertex congruence can be decided exactly.

use num_traits::{Signed, Zero};

use super::pi::{cos_bracket_interval, pi_bracket, sin_bracket_interval};
use super::rat::{rat_int, Rat};

const DEGREE: usize = 16;

/// Element of Q(zeta_60) in the power basis 1..zeta^15.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    coeffs: [Rat; 16],
}

fn zero_coeffs() -> [Rat; 16] {
    std::array::from_fn(|_| Rat::zero())
}

/// Rewrites zeta^d for d >= 16 using
/// zeta^16 = -zeta^14 + zeta^10 + zeta^8 + zeta^6 - zeta^2 - 1.
fn reduce(buf: &mut Vec<Rat>) -> [Rat; 16] {
    for d in (DEGREE..buf.len()).rev() {
        let c = std::mem::replace(&mut buf[d], Rat::zero());
        if c.is_zero() {
            continue;
        }
        buf[d - 2] -= &c;
        buf[d - 6] += &c;
        buf[d - 8] += &c;
        buf[d - 10] += &c;
        buf[d - 14] -= &c;
        buf[d - 16] -= &c;
    }
    let mut out = zero_coeffs();
    for (o, b) in out.iter_mut().zip(buf.iter()) {
        *o = b.clone();
    }
    out
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo { coeffs: zero_coeffs() }
    }

    pub fn one() -> Self {
        Cyclo::from_rat(Rat::from_integer(1.into()))
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut c = zero_coeffs();
        c[0] = r;
        Cyclo { coeffs: c }
    }

    /// zeta^k for any integer k (negative exponents wrap around).
    pub fn zeta_pow(k: i64) -> Self {
        let e = k.rem_euclid(60) as usize;
        let mut buf = vec![Rat::zero(); e + 1];
        buf[e] = Rat::from_integer(1.into());
        Cyclo { coeffs: reduce(&mut buf) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// The value as a rational if it lies in Q (all non-constant
    /// coefficients vanish).
    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeffs[1..].iter().all(Rat::is_zero).then(|| &self.coeffs[0])
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]);
        Cyclo { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = std::array::from_fn(|i| &self.coeffs[i] - &other.coeffs[i]);
        Cyclo { coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = std::array::from_fn(|i| -self.coeffs[i].clone());
        Cyclo { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut buf = vec![Rat::zero(); 2 * DEGREE - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                buf[i + j] += a * b;
            }
        }
        Cyclo { coeffs: reduce(&mut buf) }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let coeffs = std::array::from_fn(|i| &self.coeffs[i] * r);
        Cyclo { coeffs }
    }

    /// Numeric embedding zeta -> e^(2 pi i/60) at double precision,
    /// returned as (real, imaginary).
    pub fn embed_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = crate::exact::rat_to_f64(c);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 60.0;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }

    /// Rigorous rational bracket of the real part of the embedding.
    pub fn embed_real_bracket(&self, digits: u32) -> (Rat, Rat) {
        let (pl, ph) = pi_bracket(digits + 5);
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let al = &pl * rat_int(2 * j as i64) / rat_int(60);
            let ah = &ph * rat_int(2 * j as i64) / rat_int(60);
            let (cl, ch) = cos_bracket_interval(&al, &ah, digits + 3);
            if c.is_positive() {
                lo += c * &cl;
                hi += c * &ch;
            } else {
                lo += c * &ch;
                hi += c * &cl;
            }
        }
        (lo, hi)
    }

    /// Rigorous rational bracket of the imaginary part of the embedding.
    pub fn embed_imag_bracket(&self, digits: u32) -> (Rat, Rat) {
        let (pl, ph) = pi_bracket(digits + 5);
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let al = &pl * rat_int(2 * j as i64) / rat_int(60);
            let ah = &ph * rat_int(2 * j as i64) / rat_int(60);
            let (sl, sh) = sin_bracket_interval(&al, &ah, digits + 3);
            if c.is_positive() {
                lo += c * &sl;
                hi += c * &sh;
            } else {
                lo += c * &sh;
                hi += c * &sl;
            }
        }
        (lo, hi)
    }
}

/// cos(2 pi k/15) as an exact field element.
pub fn cos_2pi_k15(k: i64) -> Cyclo {
    let half = Rat::new(1.into(), 2.into());
    Cyclo::zeta_pow(4 * k).add(&Cyclo::zeta_pow(-4 * k)).scale(&half)
}

/// sin(2 pi k/15) as an exact field element: (zeta^4k - zeta^-4k) * zeta^45/2,
/// using 1/(2i) = zeta^45/2.
pub fn sin_2pi_k15(k: i64) -> Cyclo {
    let half = Rat::new(1.into(), 2.into());
    Cyclo::zeta_pow(4 * k)
        .sub(&Cyclo::zeta_pow(-4 * k))
        .mul(&Cyclo::zeta_pow(45))
        .scale(&half)
}

/// Exact 3-vector over the field.
pub type CVec3 = [Cyclo; 3];

pub fn cdot3(a: &CVec3, b: &CVec3) -> Cyclo {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub fn csub3(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

/// Determinant of the 3x3 matrix whose columns are the given vectors.
pub fn cdet3_cols(a: &CVec3, b: &CVec3, c: &CVec3) -> Cyclo {
    let m00 = &a[0];
    let m01 = &b[0];
    let m02 = &c[0];
    let m10 = &a[1];
    let m11 = &b[1];
    let m12 = &c[1];
    let m20 = &a[2];
    let m21 = &b[2];
    let m22 = &c[2];
    let t0 = m00.mul(&m11.mul(m22).sub(&m12.mul(m21)));
    let t1 = m01.mul(&m10.mul(m22).sub(&m12.mul(m20)));
    let t2 = m02.mul(&m10.mul(m21).sub(&m11.mul(m20)));
    t0.sub(&t1).add(&t2)
}
