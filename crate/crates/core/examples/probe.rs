//! Scratch diagnostics for band boxes that refuse to settle. Not shipped.

use rupert_core::builder::propose_local_witness;
use rupert_core::certtree::{LocalWitness, Region5, R_DENOM, REGION_DENOM};
use rupert_core::exclusion::{
    condition_a_float, condition_b_float, local_check_float, spanning_float, RegionCenter,
    FLOAT_SAFETY,
};
use rupert_core::geom::{direction, dot3, hull2, matvec23, norm2, projection, Vec2};
use rupert_core::solids::ruperthedron;

fn main() {
    let solid = ruperthedron();
    let verts = solid.vertices_f64();
    let w = 9216i64;
    for (i, j) in [(0i64, 2617i64), (0, 2618), (699, 2618)] {
        let region = Region5::new([
            (i * w - w, i * w + w),
            (j * w - w, j * w + w),
            (i * w - w, i * w + w),
            (j * w - w, j * w + w),
            (-w, w),
        ]);
        let c = RegionCenter::<f64>::from_region_n(&region, REGION_DENOM);
        let eps = c.epsilon;
        println!("== box ({i},{j}) phi2={:.7} eps={eps:.7}", c.phi2);
        let x2 = direction(c.theta2, c.phi2);
        let m2 = projection(c.theta2, c.phi2);
        let outer: Vec<Vec2> = verts.iter().map(|&v| matvec23(m2, v)).collect();
        let hull = hull2(&outer);
        println!("hull {} vertices", hull.len());
        let sqrt2_hi = 1.42f64;
        let a_threshold = sqrt2_hi * eps + FLOAT_SAFETY;
        let span_threshold = 2.0 * eps * (sqrt2_hi + eps) + FLOAT_SAFETY;
        for sigma in [0u8, 1] {
            let sign = if sigma == 0 { 1.0 } else { -1.0 };
            let cand: Vec<usize> = hull
                .iter()
                .copied()
                .filter(|&i| sign * dot3(x2, verts[i]) > a_threshold)
                .collect();
            println!(
                "sigma={sigma}: {} hull candidates pass A filter (depths {:?})",
                cand.len(),
                cand.iter().map(|&i| (dot3(x2, verts[i]) * 1e4).round() / 1e4).collect::<Vec<_>>()
            );
            let mut scored: Vec<(f64, [usize; 3])> = Vec::new();
            for ai in 0..cand.len() {
                for bi in ai + 1..cand.len() {
                    let pa = outer[cand[ai]];
                    let pb = outer[cand[bi]];
                    let cab = pa[0] * pb[1] - pa[1] * pb[0];
                    if cab <= span_threshold {
                        continue;
                    }
                    for ci in bi + 1..cand.len() {
                        let pc = outer[cand[ci]];
                        let cbc = pb[0] * pc[1] - pb[1] * pc[0];
                        let cca = pc[0] * pa[1] - pc[1] * pa[0];
                        let score = cab.min(cbc).min(cca);
                        if score > span_threshold {
                            scored.push((score, [cand[ai], cand[bi], cand[ci]]));
                        }
                    }
                }
            }
            scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
            println!("  {} spanning triples, top scores {:?}",
                scored.len(),
                scored.iter().take(5).map(|s| (s.0 * 1e3).round() / 1e3).collect::<Vec<_>>());
            for &(_, q_idx) in scored.iter().take(5) {
                let min_norm = q_idx
                    .iter()
                    .map(|&i| norm2(matvec23(m2, verts[i])))
                    .fold(f64::INFINITY, f64::min);
                let r_numer =
                    ((min_norm - sqrt2_hi * eps - FLOAT_SAFETY) * R_DENOM as f64).floor() as i64;
                println!("  triple {q_idx:?} min_norm={min_norm:.4} r_numer={r_numer}");
                if r_numer < 1 {
                    continue;
                }
                let wit = LocalWitness {
                    p: q_idx.map(|i| i as u32),
                    q: q_idx.map(|i| i as u32),
                    r_numer,
                    sigma_q: sigma,
                };
                println!("    q=p float check: {:?}", local_check_float(&solid, &c, &wit));
                let q_triple = q_idx.map(|i| verts[i]);
                let x1 = direction(c.theta1, c.phi1);
                println!(
                    "    A(p,sigma0)={} A(q,sigma{sigma})={} span={} B={:?}",
                    condition_a_float(x1, q_triple, 0, eps),
                    condition_a_float(x2, q_triple, sigma, eps),
                    spanning_float(m2, q_triple, eps),
                    condition_b_float(
                        m2,
                        q_triple,
                        q_idx,
                        &verts,
                        r_numer as f64 / R_DENOM as f64,
                        2.24 * eps / 2.0,
                        eps
                    )
                );
            }
        }
        let proposed = propose_local_witness(&solid, &c, FLOAT_SAFETY);
        println!("propose_local_witness -> {proposed:?}");
    }
}
