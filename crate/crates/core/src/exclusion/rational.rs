//! Exact rational forms of the exclusion checks.
//!
//! Everything here works over `Rat` and the cyclotomic field only. The
//! irrational constants sqrt(2) and sqrt(5) enter the inequalities on their
//! harmful side, so they are replaced by the rational over-approximations
//! 142/100 and 224/100; all other slack is the kernel budget `kappa`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::array::from_fn;

use crate::certtree::{GlobalWitness, LocalWitness, R_DENOM};
use crate::exact::cyclo::{cdet3_cols, cdot3, CVec3};
use crate::exact::rat::{
    qdot2, qdot3, qmatvec2, qmatvec23, qrow_from_vec23, qsub2, qsub3, QMat23, QVec2, QVec3,
};
use crate::exact::sqrt::{norm2_lower, norm2_upper, norm3_upper};
use crate::exact::trig::{dir_q, proj_q, proj_q_dphi, proj_q_dtheta, rot_q, rot_q_deriv, trig_q};
use crate::exact::{kappa, rat, rat_int, Rat};
use crate::solids::Polyhedron;

use super::{CheckError, Exclusion, Inconclusive, RegionCenter, Side};

fn sqrt2_hi() -> Rat {
    rat(142, 100)
}

fn sqrt5_hi() -> Rat {
    rat(224, 100)
}

/// Truncated vertices prepared for exact leaf checks: the rational points
/// plus an integer image over one shared denominator, which the global
/// check's per-vertex maximum runs on.
#[derive(Clone, Debug)]
pub struct VertexSet {
    points: Vec<QVec3>,
    ints: Vec<[BigInt; 3]>,
    denom: BigInt,
}

impl VertexSet {
    pub fn new(points: Vec<QVec3>) -> Self {
        assert!(!points.is_empty(), "vertex set must be non-empty");
        let mut denom = BigInt::one();
        for p in &points {
            for c in p {
                denom = denom.lcm(c.denom());
            }
        }
        let ints = points
            .iter()
            .map(|p| from_fn(|c| (&p[c] * &denom).to_integer()))
            .collect();
        VertexSet { points, ints, denom }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[QVec3] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &QVec3 {
        &self.points[i]
    }
}

/// Midpoints must sit in the kernel domain and the half-width must be a
/// genuine width.
fn check_center(c: &RegionCenter<Rat>) -> Result<(), CheckError> {
    let four = rat_int(4);
    for m in c.mids() {
        if m.abs() > four {
            return Err(CheckError::CenterOutOfDomain);
        }
    }
    if !c.epsilon.is_positive() {
        return Err(CheckError::NonPositiveEpsilon);
    }
    Ok(())
}

fn idot(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// Exact global check: excluded iff
/// `G > max_P H_P` where
/// `G   = <R M1 S, w> - eps (|<R' M1 S, w>| + |<R M1^t S, w>| + |<R M1^f S, w>|)
///        - 9 eps^2 / 2 - 4 kappa (1 + 3 eps)` and
/// `H_P = <M2 P, w> + eps (|<M2^t P, w>| + |<M2^f P, w>|) + 2 eps^2 + 3 kappa (1 + 2 eps)`.
pub fn global_check_rational(
    verts: &VertexSet,
    c: &RegionCenter<Rat>,
    w: &GlobalWitness,
) -> Result<Exclusion, CheckError> {
    check_center(c)?;
    let (wx, wy, wd) = (w.wx as i128, w.wy as i128, w.wden as i128);
    if wd == 0 || wx * wx + wy * wy != wd * wd {
        return Err(CheckError::WitnessNotUnit);
    }
    let s = w.s_index as usize;
    if s >= verts.len() {
        return Err(CheckError::VertexIndex { index: w.s_index, n: verts.len() });
    }

    let t1 = trig_q(&c.theta1);
    let f1 = trig_q(&c.phi1);
    let t2 = trig_q(&c.theta2);
    let f2 = trig_q(&c.phi2);
    let al = trig_q(&c.alpha);
    let eps = &c.epsilon;
    let wq: QVec2 = [rat(w.wx, w.wden), rat(w.wy, w.wden)];

    let m1 = proj_q(&t1, &f1);
    let rot = rot_q(&al);
    let sv = verts.point(s);
    let m1s = qmatvec23(&m1, sv);
    let m1ts = qmatvec23(&proj_q_dtheta(&t1, &f1), sv);
    let m1fs = qmatvec23(&proj_q_dphi(&t1, &f1), sv);
    let wobble = qdot2(&qmatvec2(&rot_q_deriv(&al), &m1s), &wq).abs()
        + qdot2(&qmatvec2(&rot, &m1ts), &wq).abs()
        + qdot2(&qmatvec2(&rot, &m1fs), &wq).abs();
    let g = qdot2(&qmatvec2(&rot, &m1s), &wq)
        - eps * wobble
        - rat(9, 2) * eps * eps
        - rat_int(4) * kappa() * (rat_int(1) + rat_int(3) * eps);

    // max_P H_P: pull w back through M2 and its derivatives, put the three
    // row vectors over one integer denominator, and take the maximum of
    //   ed * <u, P> + en * (|<ut, P>| + |<uf, P>|)
    // over the pre-scaled integer vertices (eps = en/ed). Only the winner
    // returns to rational arithmetic.
    let u = qrow_from_vec23(&wq, &proj_q(&t2, &f2));
    let ut = qrow_from_vec23(&wq, &proj_q_dtheta(&t2, &f2));
    let uf = qrow_from_vec23(&wq, &proj_q_dphi(&t2, &f2));
    let mut dcom = BigInt::one();
    for v in [&u, &ut, &uf] {
        for entry in v {
            dcom = dcom.lcm(entry.denom());
        }
    }
    let iu: [BigInt; 3] = from_fn(|i| (&u[i] * &dcom).to_integer());
    let iut: [BigInt; 3] = from_fn(|i| (&ut[i] * &dcom).to_integer());
    let iuf: [BigInt; 3] = from_fn(|i| (&uf[i] * &dcom).to_integer());
    let (en, ed) = (eps.numer(), eps.denom());
    let mut best: Option<BigInt> = None;
    for p in &verts.ints {
        let k = idot(&iu, p) * ed + (idot(&iut, p).abs() + idot(&iuf, p).abs()) * en;
        if best.as_ref().is_none_or(|b| &k > b) {
            best = Some(k);
        }
    }
    let hmax = Rat::new(best.expect("non-empty"), &dcom * &verts.denom * ed)
        + rat_int(2) * eps * eps
        + rat_int(3) * kappa() * (rat_int(1) + rat_int(2) * eps);

    Ok(if g > hmax {
        Exclusion::Excluded
    } else {
        Exclusion::Inconclusive(Inconclusive::GlobalGap)
    })
}

/// Condition A: `(-1)^sigma <x, p_i> > sqrt(2) eps + 3 kappa` for all three
/// points, with sqrt(2) rounded up to 142/100.
pub fn condition_a(x: &QVec3, pts: [&QVec3; 3], sigma: u8, eps: &Rat) -> bool {
    debug_assert!(sigma <= 1);
    let threshold = sqrt2_hi() * eps + rat_int(3) * kappa();
    pts.iter().all(|p| {
        let d = qdot3(x, p);
        let signed = if sigma == 0 { d } else { -d };
        signed > threshold
    })
}

/// The three cyclic products `<R(pi/2) M p_i, M p_{i+1}>` must all exceed
/// `2 eps (sqrt(2) + eps) + 6 kappa`; `R(pi/2)` turns each product into the
/// plane cross product of the two projections.
pub fn eps_kappa_spanning(mq: &QMat23, pts: [&QVec3; 3], eps: &Rat) -> bool {
    let threshold = rat_int(2) * eps * (sqrt2_hi() + eps) + rat_int(6) * kappa();
    let proj: [QVec2; 3] = from_fn(|i| qmatvec23(mq, pts[i]));
    (0..3).all(|i| {
        let a = &proj[i];
        let b = &proj[(i + 1) % 3];
        &a[0] * &b[1] - &a[1] * &b[0] > threshold
    })
}

/// Outcome of condition B. `MinNormBelowR` is a failed precondition, not a
/// refuted inequality: the radius in the witness does not fit this region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionB {
    Holds,
    MinNormBelowR,
    Violated { i: u8, j: u32 },
}

/// Condition B: for every witness point `q_i` and every other vertex `q_j`,
/// ```text
/// <M2 qi, M2 (qi-qj)> - 10k - 2 eps (|qi-qj|+ + 2k)(sqrt2 + eps)
/// ------------------------------------------------------------- > (sqrt5 eps + delta) / r
/// (|M2 qi|+ + sqrt2 eps + 3k) (|M2 (qi-qj)|+ + 2 sqrt2 eps + 6k)
/// ```
/// provided `min_i |M2 qi|- > r + sqrt2 eps + 3k` holds first.
pub fn condition_b(
    m2: &QMat23,
    q_triple: [&QVec3; 3],
    verts: &VertexSet,
    r: &Rat,
    delta: &Rat,
    eps: &Rat,
) -> ConditionB {
    debug_assert!(r.is_positive() && eps.is_positive());
    let s2 = sqrt2_hi();
    let slack1 = &s2 * eps + rat_int(3) * kappa();
    let slack2 = rat_int(2) * &slack1;
    let mq: [QVec2; 3] = from_fn(|i| qmatvec23(m2, q_triple[i]));
    for v in &mq {
        if norm2_lower(v) <= r + &slack1 {
            return ConditionB::MinNormBelowR;
        }
    }
    let rhs = (sqrt5_hi() * eps + delta) / r;
    let ten_k = rat_int(10) * kappa();
    let two_k = rat_int(2) * kappa();
    let two_eps_s2e = rat_int(2) * eps * (&s2 + eps);
    for (i, qi) in q_triple.iter().enumerate() {
        let den_i = norm2_upper(&mq[i]) + &slack1;
        for (j, qj) in verts.points().iter().enumerate() {
            if *qi == qj {
                continue;
            }
            let d = qsub3(qi, qj);
            let md = qmatvec23(m2, &d);
            let num = qdot2(&mq[i], &md) - &ten_k - &two_eps_s2e * (norm3_upper(&d) + &two_k);
            let den = &den_i * (norm2_upper(&md) + &slack2);
            if num / den <= rhs {
                return ConditionB::Violated { i: i as u8, j: j as u32 };
            }
        }
    }
    ConditionB::Holds
}

/// Two vertex triples are congruent iff their Gram matrices agree exactly;
/// the Q triple must additionally be non-degenerate. Both computations run
/// in the cyclotomic field, so orbit vertices compare exactly.
pub fn congruent_exact(solid: &Polyhedron, p_idx: [usize; 3], q_idx: [usize; 3]) -> bool {
    let pc: [CVec3; 3] = from_fn(|i| solid.vertex_cyclo(p_idx[i]));
    let qc: [CVec3; 3] = from_fn(|i| solid.vertex_cyclo(q_idx[i]));
    for i in 0..3 {
        for j in i..3 {
            if cdot3(&pc[i], &pc[j]) != cdot3(&qc[i], &qc[j]) {
                return false;
            }
        }
    }
    !cdet3_cols(&qc[0], &qc[1], &qc[2]).is_zero()
}

/// Exact local check, in pipeline order: congruence, condition A on both
/// triples (the P side always at sign 0), spanning on both triples, then
/// `delta = max_i |R M1 p_i - M2 q_i|+ / 2 + 3 kappa` feeding condition B.
pub fn local_check_rational(
    solid: &Polyhedron,
    verts: &VertexSet,
    c: &RegionCenter<Rat>,
    wit: &LocalWitness,
) -> Result<Exclusion, CheckError> {
    check_center(c)?;
    if wit.sigma_q > 1 {
        return Err(CheckError::BadSigma(wit.sigma_q));
    }
    if wit.r_numer <= 0 {
        return Err(CheckError::NonPositiveR);
    }
    let n = verts.len();
    debug_assert_eq!(solid.n_vertices(), n);
    for &ix in wit.p.iter().chain(wit.q.iter()) {
        if ix as usize >= n {
            return Err(CheckError::VertexIndex { index: ix, n });
        }
    }

    let p_idx = wit.p.map(|v| v as usize);
    let q_idx = wit.q.map(|v| v as usize);
    if !congruent_exact(solid, p_idx, q_idx) {
        return Ok(Exclusion::Inconclusive(Inconclusive::NotCongruent));
    }

    let t1 = trig_q(&c.theta1);
    let f1 = trig_q(&c.phi1);
    let t2 = trig_q(&c.theta2);
    let f2 = trig_q(&c.phi2);
    let m1 = proj_q(&t1, &f1);
    let m2 = proj_q(&t2, &f2);
    let pv: [&QVec3; 3] = p_idx.map(|i| verts.point(i));
    let qv: [&QVec3; 3] = q_idx.map(|i| verts.point(i));
    let eps = &c.epsilon;

    if !condition_a(&dir_q(&t1, &f1), pv, 0, eps) {
        return Ok(Exclusion::Inconclusive(Inconclusive::ConditionA(Side::P)));
    }
    if !condition_a(&dir_q(&t2, &f2), qv, wit.sigma_q, eps) {
        return Ok(Exclusion::Inconclusive(Inconclusive::ConditionA(Side::Q)));
    }
    if !eps_kappa_spanning(&m1, pv, eps) {
        return Ok(Exclusion::Inconclusive(Inconclusive::NotSpanning(Side::P)));
    }
    if !eps_kappa_spanning(&m2, qv, eps) {
        return Ok(Exclusion::Inconclusive(Inconclusive::NotSpanning(Side::Q)));
    }

    let rot = rot_q(&trig_q(&c.alpha));
    let mut widest = Rat::zero();
    for i in 0..3 {
        let image = qmatvec2(&rot, &qmatvec23(&m1, pv[i]));
        let gap = norm2_upper(&qsub2(&image, &qmatvec23(&m2, qv[i])));
        if gap > widest {
            widest = gap;
        }
    }
    let delta = widest / rat_int(2) + rat_int(3) * kappa();

    let r = rat(wit.r_numer, R_DENOM);
    Ok(match condition_b(&m2, qv, verts, &r, &delta, eps) {
        ConditionB::Holds => Exclusion::Excluded,
        ConditionB::MinNormBelowR => Exclusion::Inconclusive(Inconclusive::MinNormBelowR),
        ConditionB::Violated { i, j } => {
            Exclusion::Inconclusive(Inconclusive::ConditionB { i, j })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::pow10;
    use crate::solids::octahedron;

    fn octa_verts() -> VertexSet {
        VertexSet::new(octahedron().truncated_vertices(16).unwrap())
    }

    /// Decimal truncations of pi/4, arctan sqrt(2) and pi - arctan sqrt(2).
    fn quarter_pi() -> Rat {
        Rat::new(785_398_163_397i64.into(), pow10(12))
    }

    fn atan_sqrt2() -> Rat {
        Rat::new(955_316_618_124i64.into(), pow10(12))
    }

    fn mirrored_phi() -> Rat {
        Rat::new(2_186_276_035_465i64.into(), pow10(12))
    }

    /// The worked global instance: view 1 straight down the z axis, view 2
    /// down the cube diagonal, witness vertex (0,1,0), w = (1,0).
    fn global_center(eps: Rat) -> RegionCenter<Rat> {
        RegionCenter::new(
            [Rat::zero(), Rat::zero(), quarter_pi(), atan_sqrt2(), Rat::zero()],
            eps,
        )
    }

    fn diag_center(eps: Rat) -> RegionCenter<Rat> {
        RegionCenter::new(
            [quarter_pi(), atan_sqrt2(), quarter_pi(), atan_sqrt2(), Rat::zero()],
            eps,
        )
    }

    const W_UNIT_X: GlobalWitness = GlobalWitness { s_index: 2, wx: 1, wy: 0, wden: 1 };

    #[test]
    fn global_excludes_the_worked_octahedron_instance() {
        // Closed forms at this center: G = 1 - 9 eps^2 / 2 (minus kappa dust)
        // and max H_P = sqrt(2)/2 (1 + eps) + 2 eps^2; they cross near 0.164.
        let verts = octa_verts();
        for (eps, want_excluded) in
            [(rat(1, 10), true), (rat(16, 100), true), (rat(17, 100), false), (rat(2, 10), false)]
        {
            let out = global_check_rational(&verts, &global_center(eps), &W_UNIT_X).unwrap();
            assert_eq!(out.is_excluded(), want_excluded);
        }
    }

    #[test]
    fn global_rejects_malformed_witnesses_and_centers() {
        let verts = octa_verts();
        let c = global_center(rat(1, 10));
        let bad_w = GlobalWitness { s_index: 2, wx: 1, wy: 1, wden: 1 };
        assert_eq!(
            global_check_rational(&verts, &c, &bad_w),
            Err(CheckError::WitnessNotUnit)
        );
        let bad_s = GlobalWitness { s_index: 6, ..W_UNIT_X };
        assert_eq!(
            global_check_rational(&verts, &c, &bad_s),
            Err(CheckError::VertexIndex { index: 6, n: 6 })
        );
        let mut far = global_center(rat(1, 10));
        far.theta1 = rat_int(5);
        assert_eq!(
            global_check_rational(&verts, &far, &W_UNIT_X),
            Err(CheckError::CenterOutOfDomain)
        );
        let flat = global_center(Rat::zero());
        assert_eq!(
            global_check_rational(&verts, &flat, &W_UNIT_X),
            Err(CheckError::NonPositiveEpsilon)
        );
    }

    #[test]
    fn global_exact_unit_vectors_on_other_denominators_work() {
        // A slightly tilted exact unit vector (9999, 200)/10001 still
        // separates the witness projection from the shadow at small eps.
        let verts = octa_verts();
        let w = GlobalWitness { s_index: 2, wx: 9999, wy: 200, wden: 10001 };
        let out = global_check_rational(&verts, &global_center(rat(1, 100)), &w).unwrap();
        assert!(out.is_excluded());
    }

    #[test]
    fn condition_a_thresholds_match_the_worked_values() {
        // <X, O_i> = 1/sqrt(3) = 0.5773... for all three points; the bound
        // 1.42 eps + 3 kappa crosses it between eps = 0.40 and eps = 0.41.
        let verts = octa_verts();
        let t = trig_q(&quarter_pi());
        let f = trig_q(&atan_sqrt2());
        let x = dir_q(&t, &f);
        let pts = [verts.point(0), verts.point(1), verts.point(2)];
        assert!(condition_a(&x, pts, 0, &rat(1, 20)));
        assert!(!condition_a(&x, pts, 1, &rat(1, 20)));
        assert!(condition_a(&x, pts, 0, &rat(40, 100)));
        assert!(!condition_a(&x, pts, 0, &rat(41, 100)));
    }

    #[test]
    fn spanning_thresholds_match_the_worked_values() {
        // Each cyclic product is 1/sqrt(3); the threshold 2 eps (1.42 + eps)
        // passes it a little below eps = 0.2.
        let verts = octa_verts();
        let t = trig_q(&quarter_pi());
        let f = trig_q(&atan_sqrt2());
        let m = proj_q(&t, &f);
        let pts = [verts.point(0), verts.point(1), verts.point(2)];
        assert!(eps_kappa_spanning(&m, pts, &rat(1, 20)));
        assert!(!eps_kappa_spanning(&m, pts, &rat(2, 10)));
        // Reversing the orientation flips every product negative.
        let rev = [verts.point(0), verts.point(2), verts.point(1)];
        assert!(!eps_kappa_spanning(&m, rev, &rat(1, 20)));
        // Collinear points span nothing at any tolerance.
        let a: QVec3 = [rat_int(1), Rat::zero(), Rat::zero()];
        let b: QVec3 = [rat(1, 2), Rat::zero(), Rat::zero()];
        let c: QVec3 = [rat(1, 4), Rat::zero(), Rat::zero()];
        assert!(!eps_kappa_spanning(&m, [&a, &b, &c], &rat(1, 1000)));
    }

    #[test]
    fn condition_b_on_the_diagonal_view() {
        let verts = octa_verts();
        let t = trig_q(&quarter_pi());
        let f = trig_q(&atan_sqrt2());
        let m2 = proj_q(&t, &f);
        let q = [verts.point(0), verts.point(1), verts.point(2)];
        // At eps = 0.048 every pair clears the bound with r = 0.7.
        assert_eq!(
            condition_b(&m2, q, &verts, &rat(7, 10), &Rat::zero(), &rat(48, 1000)),
            ConditionB::Holds
        );
        // At eps = 0.05 the quarter-turn neighbours O4, O5 fall short: the
        // left side reaches only ~0.147 against (2.24 * 0.05)/0.7 = 0.16.
        assert_eq!(
            condition_b(&m2, q, &verts, &rat(7, 10), &Rat::zero(), &rat(5, 100)),
            ConditionB::Violated { i: 0, j: 3 }
        );
        // r at or above the projected norm sqrt(6)/3 = 0.8165 can never
        // satisfy the lower-norm precondition.
        assert_eq!(
            condition_b(&m2, q, &verts, &rat(82, 100), &Rat::zero(), &rat(1, 1000)),
            ConditionB::MinNormBelowR
        );
    }

    #[test]
    fn congruence_is_exact_gram_equality_plus_nondegeneracy() {
        let octa = octahedron();
        assert!(congruent_exact(&octa, [0, 1, 2], [0, 1, 2]));
        // The mirrored triple (O1, O5, O4) has the same Gram matrix.
        assert!(congruent_exact(&octa, [0, 1, 2], [0, 4, 3]));
        // (O1, O2, O6) differs in an off-diagonal sign: <O1, O6> = -1.
        assert!(!congruent_exact(&octa, [0, 1, 2], [0, 1, 5]));
        // (O1, O2, O4) is its own Gram twin but degenerate (O4 = -O2).
        assert!(!congruent_exact(&octa, [0, 1, 3], [0, 1, 3]));
    }

    #[test]
    fn congruence_handles_orbit_vertices_exactly() {
        let nop = crate::solids::noperthedron();
        // Rotating every index one orbit step is an isometry.
        assert!(congruent_exact(&nop, [0, 15, 30], [1, 16, 31]));
        assert!(congruent_exact(&nop, [0, 15, 30], [14, 29, 44]));
        // Mixing steps breaks the Gram matrix.
        assert!(!congruent_exact(&nop, [0, 15, 30], [1, 16, 32]));
    }

    #[test]
    fn local_excludes_the_diagonal_octahedron_instance() {
        // The textbook local certificate, run at eps = 0.048: with P = Q and
        // alpha = 0 the two projections agree, so delta is just 3 kappa.
        let octa = octahedron();
        let verts = octa_verts();
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 1, 2], r_numer: 700, sigma_q: 0 };
        let out =
            local_check_rational(&octa, &verts, &diag_center(rat(48, 1000)), &wit).unwrap();
        assert_eq!(out, Exclusion::Excluded);
    }

    #[test]
    fn local_at_eps_one_twentieth_fails_condition_b_honestly() {
        // At eps = 1/20 and r = 0.7 the bound cannot be met: for Q1 = O1 and
        // the quarter-turn neighbour O4 the left side is ~0.147 < 0.16, and
        // no other r fares better. The region needs a slightly smaller box
        // (0.048 works, see above) before the local theorem applies.
        let octa = octahedron();
        let verts = octa_verts();
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 1, 2], r_numer: 700, sigma_q: 0 };
        let out = local_check_rational(&octa, &verts, &diag_center(rat(1, 20)), &wit).unwrap();
        assert_eq!(
            out,
            Exclusion::Inconclusive(Inconclusive::ConditionB { i: 0, j: 3 })
        );
    }

    #[test]
    fn local_excludes_the_mirrored_instance_with_sigma_one() {
        // Second view flipped through the equator: phi2 near pi - arctan
        // sqrt(2) makes <X2, Q_i> negative, so sigma_Q = 1, and the matching
        // triple is (O1, O5, O4).
        let octa = octahedron();
        let verts = octa_verts();
        let c = RegionCenter::new(
            [quarter_pi(), atan_sqrt2(), quarter_pi(), mirrored_phi(), Rat::zero()],
            rat(48, 1000),
        );
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 4, 3], r_numer: 700, sigma_q: 1 };
        let out = local_check_rational(&octa, &verts, &c, &wit).unwrap();
        assert_eq!(out, Exclusion::Excluded);
        // With sigma_Q = 0 the same witness fails condition A on the Q side.
        let wrong = LocalWitness { sigma_q: 0, ..wit };
        let out = local_check_rational(&octa, &verts, &c, &wrong).unwrap();
        assert_eq!(out, Exclusion::Inconclusive(Inconclusive::ConditionA(Side::Q)));
    }

    #[test]
    fn local_reports_each_failed_step_distinctly() {
        let octa = octahedron();
        let verts = octa_verts();
        let c = diag_center(rat(1, 100));
        // Non-congruent triples stop at the congruence gate.
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 1, 5], r_numer: 700, sigma_q: 0 };
        assert_eq!(
            local_check_rational(&octa, &verts, &c, &wit).unwrap(),
            Exclusion::Inconclusive(Inconclusive::NotCongruent)
        );
        // A reversed but congruent triple fails the spanning step.
        let wit = LocalWitness { p: [0, 2, 1], q: [0, 2, 1], r_numer: 700, sigma_q: 0 };
        assert_eq!(
            local_check_rational(&octa, &verts, &c, &wit).unwrap(),
            Exclusion::Inconclusive(Inconclusive::NotSpanning(Side::P))
        );
        // A view pointing away from the triple fails condition A.
        let away = RegionCenter::new(
            [Rat::zero(), Rat::zero(), quarter_pi(), atan_sqrt2(), Rat::zero()],
            rat(1, 100),
        );
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 1, 2], r_numer: 700, sigma_q: 0 };
        assert_eq!(
            local_check_rational(&octa, &verts, &away, &wit).unwrap(),
            Exclusion::Inconclusive(Inconclusive::ConditionA(Side::P))
        );
        // An oversized radius trips the norm precondition.
        let wit = LocalWitness { p: [0, 1, 2], q: [0, 1, 2], r_numer: 820, sigma_q: 0 };
        assert_eq!(
            local_check_rational(&octa, &verts, &diag_center(rat(1, 1000)), &wit).unwrap(),
            Exclusion::Inconclusive(Inconclusive::MinNormBelowR)
        );
    }

    #[test]
    fn local_rejects_malformed_witnesses() {
        let octa = octahedron();
        let verts = octa_verts();
        let c = diag_center(rat(1, 20));
        let base = LocalWitness { p: [0, 1, 2], q: [0, 1, 2], r_numer: 700, sigma_q: 0 };
        assert_eq!(
            local_check_rational(&octa, &verts, &c, &LocalWitness { sigma_q: 2, ..base }),
            Err(CheckError::BadSigma(2))
        );
        assert_eq!(
            local_check_rational(&octa, &verts, &c, &LocalWitness { r_numer: 0, ..base }),
            Err(CheckError::NonPositiveR)
        );
        assert_eq!(
            local_check_rational(&octa, &verts, &c, &LocalWitness { q: [0, 1, 9], ..base }),
            Err(CheckError::VertexIndex { index: 9, n: 6 })
        );
    }
}
