//! Floating-point forms of the exclusion checks, used by the builder to
//! search for witnesses before anything is written to a tree.
//!
//! Same inequalities as the rational forms, including the 142/100 and
//! 224/100 stand-ins for sqrt(2) and sqrt(5), but evaluated in doubles and
//! without kappa terms. Every deciding comparison demands the relative
//! margin `FLOAT_SAFETY` so that a witness accepted here survives the exact
//! re-check, whose thresholds differ only at the kappa scale.

use crate::certtree::{GlobalWitness, LocalWitness, R_DENOM};
use crate::geom::{
    det3_cols, direction, dot2, dot3, matvec2, matvec23, norm2, norm3, projection,
    projection_dphi, projection_dtheta, rot2, rot2_deriv, sub2, sub3, Mat2x3, Vec2, Vec3,
};
use crate::solids::Polyhedron;

use super::rational::ConditionB;
use super::{Exclusion, Inconclusive, RegionCenter, Side};

/// Relative slack demanded on every float decision.
pub const FLOAT_SAFETY: f64 = 1e-6;

const SQRT2_HI: f64 = 1.42;
const SQRT5_HI: f64 = 2.24;

/// Strict `lhs > rhs` with relative safety margin.
fn clears(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + FLOAT_SAFETY * lhs.abs().max(rhs.abs()).max(1.0)
}

/// The two sides of the global inequality: returns `(G, max_P H_P)` without
/// any safety margin applied.
pub fn global_quantities_float(
    solid: &Polyhedron,
    c: &RegionCenter<f64>,
    w: &GlobalWitness,
) -> (f64, f64) {
    let s = solid.vertex_f64(w.s_index as usize);
    let wv: Vec2 = [w.wx as f64 / w.wden as f64, w.wy as f64 / w.wden as f64];
    debug_assert!((dot2(wv, wv) - 1.0).abs() < 1e-9);
    let eps = c.epsilon;

    let m1 = projection(c.theta1, c.phi1);
    let rot = rot2(c.alpha);
    let m1s = matvec23(m1, s);
    let wobble = dot2(matvec2(rot2_deriv(c.alpha), m1s), wv).abs()
        + dot2(matvec2(rot, matvec23(projection_dtheta(c.theta1, c.phi1), s)), wv).abs()
        + dot2(matvec2(rot, matvec23(projection_dphi(c.theta1, c.phi1), s)), wv).abs();
    let g = dot2(matvec2(rot, m1s), wv) - eps * wobble - 4.5 * eps * eps;

    let m2 = projection(c.theta2, c.phi2);
    let m2t = projection_dtheta(c.theta2, c.phi2);
    let m2f = projection_dphi(c.theta2, c.phi2);
    let mut hmax = f64::NEG_INFINITY;
    for &p in solid.vertices_f64() {
        let h = dot2(matvec23(m2, p), wv)
            + eps * (dot2(matvec23(m2t, p), wv).abs() + dot2(matvec23(m2f, p), wv).abs())
            + 2.0 * eps * eps;
        hmax = hmax.max(h);
    }
    (g, hmax)
}

pub fn global_check_float(
    solid: &Polyhedron,
    c: &RegionCenter<f64>,
    w: &GlobalWitness,
) -> Exclusion {
    let (g, hmax) = global_quantities_float(solid, c, w);
    if clears(g, hmax) {
        Exclusion::Excluded
    } else {
        Exclusion::Inconclusive(Inconclusive::GlobalGap)
    }
}

pub fn condition_a_float(x: Vec3, pts: [Vec3; 3], sigma: u8, eps: f64) -> bool {
    debug_assert!(sigma <= 1);
    let sign = if sigma == 0 { 1.0 } else { -1.0 };
    pts.iter().all(|&p| clears(sign * dot3(x, p), SQRT2_HI * eps))
}

pub fn spanning_float(m: Mat2x3, pts: [Vec3; 3], eps: f64) -> bool {
    let threshold = 2.0 * eps * (SQRT2_HI + eps);
    let proj = pts.map(|p| matvec23(m, p));
    (0..3).all(|i| {
        let a = proj[i];
        let b = proj[(i + 1) % 3];
        clears(a[0] * b[1] - a[1] * b[0], threshold)
    })
}

/// The ratio on the left of condition B for one vertex pair.
pub(crate) fn b_ratio(m2: Mat2x3, qi: Vec3, qj: Vec3, eps: f64) -> f64 {
    let mqi = matvec23(m2, qi);
    let d = sub3(qi, qj);
    let md = matvec23(m2, d);
    let num = dot2(mqi, md) - 2.0 * eps * norm3(d) * (SQRT2_HI + eps);
    let den = (norm2(mqi) + SQRT2_HI * eps) * (norm2(md) + 2.0 * SQRT2_HI * eps);
    num / den
}

/// Float condition B; `q_idx` identifies the triple inside `verts` so each
/// point skips itself in the vertex sweep.
pub fn condition_b_float(
    m2: Mat2x3,
    q_triple: [Vec3; 3],
    q_idx: [usize; 3],
    verts: &[Vec3],
    r: f64,
    delta: f64,
    eps: f64,
) -> ConditionB {
    debug_assert!(r > 0.0);
    for q in q_triple {
        if !clears(norm2(matvec23(m2, q)), r + SQRT2_HI * eps) {
            return ConditionB::MinNormBelowR;
        }
    }
    let rhs = (SQRT5_HI * eps + delta) / r;
    for i in 0..3 {
        for (j, &qj) in verts.iter().enumerate() {
            if j == q_idx[i] {
                continue;
            }
            if !clears(b_ratio(m2, q_triple[i], qj, eps), rhs) {
                return ConditionB::Violated { i: i as u8, j: j as u32 };
            }
        }
    }
    ConditionB::Holds
}

/// Float mirror of the exact local pipeline; congruence is checked
/// numerically since the builder only proposes triples that an exact check
/// will confirm later.
pub fn local_check_float(
    solid: &Polyhedron,
    c: &RegionCenter<f64>,
    wit: &LocalWitness,
) -> Exclusion {
    debug_assert!(wit.sigma_q <= 1 && wit.r_numer > 0);
    let verts = solid.vertices_f64();
    let p: [Vec3; 3] = wit.p.map(|i| verts[i as usize]);
    let q: [Vec3; 3] = wit.q.map(|i| verts[i as usize]);
    if !(gram_close(p, q) && det3_cols(q[0], q[1], q[2]).abs() > 1e-9) {
        return Exclusion::Inconclusive(Inconclusive::NotCongruent);
    }

    let eps = c.epsilon;
    if !condition_a_float(direction(c.theta1, c.phi1), p, 0, eps) {
        return Exclusion::Inconclusive(Inconclusive::ConditionA(Side::P));
    }
    if !condition_a_float(direction(c.theta2, c.phi2), q, wit.sigma_q, eps) {
        return Exclusion::Inconclusive(Inconclusive::ConditionA(Side::Q));
    }
    let m1 = projection(c.theta1, c.phi1);
    let m2 = projection(c.theta2, c.phi2);
    if !spanning_float(m1, p, eps) {
        return Exclusion::Inconclusive(Inconclusive::NotSpanning(Side::P));
    }
    if !spanning_float(m2, q, eps) {
        return Exclusion::Inconclusive(Inconclusive::NotSpanning(Side::Q));
    }

    let rot = rot2(c.alpha);
    let delta = (0..3)
        .map(|i| norm2(sub2(matvec2(rot, matvec23(m1, p[i])), matvec23(m2, q[i]))))
        .fold(0.0, f64::max)
        / 2.0;
    let r = wit.r_numer as f64 / R_DENOM as f64;
    let q_idx = wit.q.map(|v| v as usize);
    match condition_b_float(m2, q, q_idx, verts, r, delta, eps) {
        ConditionB::Holds => Exclusion::Excluded,
        ConditionB::MinNormBelowR => Exclusion::Inconclusive(Inconclusive::MinNormBelowR),
        ConditionB::Violated { i, j } => {
            Exclusion::Inconclusive(Inconclusive::ConditionB { i, j })
        }
    }
}

fn gram_close(p: [Vec3; 3], q: [Vec3; 3]) -> bool {
    for i in 0..3 {
        for j in i..3 {
            if (dot3(p[i], p[j]) - dot3(q[i], q[j])).abs() > 1e-9 {
                return false;
            }
        }
    }
    true
}
