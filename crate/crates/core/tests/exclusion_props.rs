//! Property tests tying the exclusion checkers to the geometry they encode:
//! the exact checks are stricter than the float ones, neither side can
//! exclude a box around a known passage, and the two supporting lemmas about
//! positive spans hold on random data.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rupert_core::certtree::{GlobalWitness, LocalWitness};
use rupert_core::exact::{rat, Rat};
use rupert_core::exclusion::{
    condition_a_float, global_check_float, global_check_rational, global_quantities_float,
    local_check_float, local_check_rational, spanning_float, RegionCenter, VertexSet,
};
use rupert_core::geom::{det3_cols, direction, dot3, matvec3, projection, Vec3};
use rupert_core::solids::{
    noperthedron, octahedron, orbit_decompose, orbit_index, ruperthedron, Polyhedron,
};

/// Rational region center on the 1/10^4 grid, so float and exact runs see
/// the same box.
fn center_q(mid: [i32; 5], eps_numer: i32) -> RegionCenter<Rat> {
    RegionCenter::new(
        mid.map(|m| rat(m as i64, 10_000)),
        rat(eps_numer as i64, 10_000),
    )
}

/// Solve y = a*x1 + b*x2 + c*x3 by Cramer's rule.
fn positive_combination(x: [Vec3; 3], y: Vec3) -> Option<[f64; 3]> {
    let det = det3_cols(x[0], x[1], x[2]);
    if det.abs() < 1e-12 {
        return None;
    }
    Some([
        det3_cols(y, x[1], x[2]) / det,
        det3_cols(x[0], y, x[2]) / det,
        det3_cols(x[0], x[1], y) / det,
    ])
}

proptest! {
    /// Whenever the exact global check excludes, the float quantities agree
    /// at margin zero: G really dominates max H_P in doubles too.
    #[test]
    fn rational_global_exclusion_implies_float_exclusion(
        dth1 in -3000i32..3000,
        dph1 in -3000i32..3000,
        dth2 in -3000i32..3000,
        dph2 in -3000i32..3000,
        dal in -3000i32..3000,
        eps_numer in 10i32..2000,
        s_index in 0u32..6,
    ) {
        let octa = octahedron();
        let verts = VertexSet::new(octa.truncated_vertices(16).unwrap());
        // Jitter around the worked instance (0, 0, pi/4, arctan sqrt 2, 0).
        let mid = [dth1, dph1, 7854 + dth2, 9553 + dph2, dal];
        let cq = center_q(mid, eps_numer);
        let w = GlobalWitness { s_index, wx: 1, wy: 0, wden: 1 };
        if global_check_rational(&verts, &cq, &w).unwrap().is_excluded() {
            let (g, hmax) = global_quantities_float(&octa, &cq.to_f64(), &w);
            prop_assert!(g > hmax);
            prop_assert!(global_check_float(&octa, &cq.to_f64(), &w).is_excluded());
        }
    }
}

/// Index permutation of the orbit rotation by `shift` grid steps: an exact
/// isometry of an orbit solid, so shifted triples stay congruent.
fn orbit_shift(idx: u32, shift: usize) -> u32 {
    let (i, k, l) = orbit_decompose(idx as usize);
    orbit_index(i, (k + shift) % 15, l) as u32
}

/// Boxes around the known passage of the ruperthedron must never be
/// excluded, whatever witness is tried: both checkers are one-sided.
#[test]
fn no_witness_excludes_a_box_containing_the_known_passage() {
    let rup = ruperthedron();
    let verts = VertexSet::new(rup.truncated_vertices(16).unwrap());
    let solution = [0.29f64, 0.29, 0.02, 2.27, -1.02];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        // Half-width and an off-center shift that keeps the passage inside.
        let eps_numer = rng.random_range(10..2000);
        let eps = eps_numer as f64 / 10_000.0;
        let mid: [i32; 5] = solution.map(|x| {
            let slack = eps_numer - 5;
            let jitter = rng.random_range(-slack..=slack);
            (x * 10_000.0).round() as i32 + jitter
        });
        let cq = center_q(mid, eps_numer);
        let cf = cq.to_f64();
        for coord in 0..5 {
            assert!((cf.mids()[coord] - solution[coord]).abs() <= eps - 4e-4);
        }

        let s_index = rng.random_range(0..90u32);
        let w = GlobalWitness { s_index, wx: 3, wy: 4, wden: 5 };
        assert!(!global_check_float(&rup, &cf, &w).is_excluded());
        assert!(!global_check_rational(&verts, &cq, &w).unwrap().is_excluded());

        // Congruent-by-construction triples: a random triple against its
        // orbit rotation, possibly sign-flipped.
        let p: [u32; 3] = std::array::from_fn(|_| rng.random_range(0..90u32));
        let shift = rng.random_range(0..15usize);
        let q = p.map(|ix| orbit_shift(ix, shift));
        let wit = LocalWitness {
            p,
            q,
            r_numer: rng.random_range(1..1000),
            sigma_q: rng.random_range(0..2u8),
        };
        assert!(!local_check_float(&rup, &cf, &wit).is_excluded());
        assert!(!local_check_rational(&rup, &verts, &cq, &wit).unwrap().is_excluded());
    }
}

/// Where condition A and the spanning test hold at a box center, the true
/// viewing direction at any parameter inside the box stays inside the
/// positive span of the witness triple.
#[test]
fn condition_a_and_spanning_put_the_direction_in_the_positive_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases: [(Polyhedron, [usize; 3], f64, f64, f64); 2] = [
        (
            octahedron(),
            [0, 1, 2],
            std::f64::consts::FRAC_PI_4,
            2f64.sqrt().atan(),
            0.048,
        ),
        // Three rotations of the first orbit generator, 120 degrees apart,
        // seen from just inside their spherical triangle.
        (noperthedron(), [0, 5, 10], std::f64::consts::FRAC_PI_3, 0.25, 0.002),
    ];
    for (solid, idx, theta, phi, eps) in cases {
        let verts = solid.vertices_f64();
        let triple: [Vec3; 3] = idx.map(|i| verts[i]);
        assert!(condition_a_float(direction(theta, phi), triple, 0, eps));
        assert!(spanning_float(projection(theta, phi), triple, eps));
        for _ in 0..100 {
            let t = theta + rng.random_range(-eps..eps);
            let f = phi + rng.random_range(-eps..eps);
            let lambda = positive_combination(triple, direction(t, f))
                .expect("spanning triple is non-degenerate");
            for l in lambda {
                assert!(l > 0.0, "direction left the positive span: {lambda:?}");
            }
        }
    }
}

/// Two equal-norm vectors in the positive span of the same triple cannot be
/// strictly separated by that triple: some <V_i, Y> > <V_i, Z> fails.
#[test]
fn equal_norm_positive_span_vectors_cannot_strictly_dominate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rand_unit = |rng: &mut ChaCha8Rng| -> Vec3 {
        loop {
            let v: Vec3 = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n = dot3(v, v).sqrt();
            if n > 0.1 {
                return v.map(|x| x / n);
            }
        }
    };
    let mut tested = 0;
    while tested < 200 {
        let v: [Vec3; 3] = std::array::from_fn(|_| rand_unit(&mut rng));
        if det3_cols(v[0], v[1], v[2]).abs() < 1e-3 {
            continue;
        }
        let span_pt = |rng: &mut ChaCha8Rng| -> Vec3 {
            let lam: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.01..1.0));
            let m = [
                [v[0][0], v[1][0], v[2][0]],
                [v[0][1], v[1][1], v[2][1]],
                [v[0][2], v[1][2], v[2][2]],
            ];
            let y = matvec3(m, lam);
            let n = dot3(y, y).sqrt();
            y.map(|x| x / n)
        };
        let y = span_pt(&mut rng);
        let z = span_pt(&mut rng);
        let strict = (0..3).filter(|&i| dot3(v[i], y) > dot3(v[i], z)).count();
        assert!(strict < 3, "all three inequalities held for {v:?} {y:?} {z:?}");
        tested += 1;
    }
}
