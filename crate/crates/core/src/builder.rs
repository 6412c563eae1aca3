//! Certificate-tree construction.
//!
//! Breadth-first over parameter boxes: for each region try a global witness,
//! then a local one, then split. All decisions use the float checkers (with
//! their built-in safety margin), so everything emitted here still has to
//! survive the exact verifier; the builder's only hard obligations are
//! structural (coverage, consecutive IDs) and that it fails loudly instead of
//! emitting a region it could not resolve.
//!
//! Decisions inside one level are independent and run in parallel; IDs are
//! assigned afterwards in level order. The output is therefore byte-identical
//! for every thread count.

use std::io::Write;

use rayon::prelude::*;

use crate::certtree::{
    CertNode, GlobalWitness, LocalWitness, NodeBody, Region5, TreeStats, TreeWriter,
    REGION_DENOM, R_DENOM,
};
use crate::exclusion::{global_check_float, local_check_float, RegionCenter};
use crate::geom::{
    direction, dot2, dot3, hull2, matvec2, matvec23, norm2, projection, projection_dphi,
    projection_dtheta, rot2, sub2, Vec2,
};
use crate::solids::{orbit_decompose, orbit_index, Polyhedron};

const SQRT2_HI: f64 = 1.42;
const SQRT5_HI: f64 = 2.24;

#[derive(Clone, Debug)]
pub struct BuildConfig {
    /// Grid denominator for all region bounds.
    pub denom: i64,
    /// Maximum node depth (root = 0); reaching it aborts the build.
    pub max_depth: u32,
    /// Float headroom demanded when proposing witnesses, on top of the
    /// checkers' own relative safety factor.
    pub margin: f64,
    /// Report progress per level on standard error.
    pub progress: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { denom: REGION_DENOM, max_depth: 40, margin: 1e-4, progress: false }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("depth limit {depth} reached with {unresolved} unresolved regions, first {first:?}")]
    DepthLimit { depth: u32, unresolved: u64, first: Region5 },
    #[error("region {0:?} has no witness and cannot be split further")]
    Unsplittable(Region5),
    #[error("root region is invalid or leaves the kernel domain [-4, 4]")]
    BadRoot,
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// One region's fate, decided independently of every other region.
enum Decision {
    Global(GlobalWitness),
    Local(LocalWitness),
    Split { code: u8, children: Vec<Region5> },
    Stuck,
}

/// Builds a certificate tree over `root`, streaming rows in ID order to
/// `emit`. Returns node counts.
pub fn build_tree_with<F>(
    solid: &Polyhedron,
    root: Region5,
    config: &BuildConfig,
    mut emit: F,
) -> Result<TreeStats, BuildError>
where
    F: FnMut(&CertNode) -> std::io::Result<()>,
{
    if config.denom < 1 || !root.is_valid() || !root.within_kernel_domain_n(config.denom) {
        return Err(BuildError::BadRoot);
    }
    let mut stats = TreeStats::default();
    let mut level = vec![root];
    let mut level_first_id: u64 = 0;
    for depth in 0u32.. {
        let decisions: Vec<Decision> =
            level.par_iter().map(|r| decide(solid, r, config)).collect();
        let child_base = level_first_id + level.len() as u64;
        let mut next_level: Vec<Region5> = Vec::new();
        for (i, (region, dec)) in level.iter().zip(decisions).enumerate() {
            let id = level_first_id + i as u64;
            let body = match dec {
                Decision::Global(w) => NodeBody::Global(w),
                Decision::Local(w) => NodeBody::Local(w),
                Decision::Split { code, children } => {
                    let b = NodeBody::Split {
                        nr_children: children.len() as u32,
                        id_first_child: child_base + next_level.len() as u64,
                        split: code,
                    };
                    next_level.extend(children);
                    b
                }
                Decision::Stuck => return Err(BuildError::Unsplittable(*region)),
            };
            let node = CertNode { id, region: *region, body };
            stats.absorb(&node);
            emit(&node)?;
        }
        if config.progress {
            eprintln!(
                "depth {depth}: {} regions, {} resolved so far ({} global, {} local)",
                level.len(),
                stats.leaves(),
                stats.global_leaves,
                stats.local_leaves
            );
        }
        if next_level.is_empty() {
            break;
        }
        if depth + 1 > config.max_depth {
            return Err(BuildError::DepthLimit {
                depth: config.max_depth,
                unresolved: next_level.len() as u64,
                first: next_level[0],
            });
        }
        level_first_id = child_base;
        level = next_level;
    }
    Ok(stats)
}

/// [`build_tree_with`] writing CSV rows to `writer`.
pub fn build_tree<W: Write>(
    solid: &Polyhedron,
    root: Region5,
    config: &BuildConfig,
    writer: &mut TreeWriter<W>,
) -> Result<TreeStats, BuildError> {
    build_tree_with(solid, root, config, |n| writer.write_node(n))
}

/// [`build_tree_with`] collecting nodes in memory; for tests and small runs.
pub fn build_tree_in_memory(
    solid: &Polyhedron,
    root: Region5,
    config: &BuildConfig,
) -> Result<(Vec<CertNode>, TreeStats), BuildError> {
    let mut nodes = Vec::new();
    let stats = build_tree_with(solid, root, config, |n| {
        nodes.push(n.clone());
        Ok(())
    })?;
    Ok((nodes, stats))
}

fn decide(solid: &Polyhedron, region: &Region5, config: &BuildConfig) -> Decision {
    let c = RegionCenter::<f64>::from_region_n(region, config.denom);
    if let Some(w) = propose_global_witness(solid, &c) {
        if global_check_float(solid, &c, &w).is_excluded() {
            return Decision::Global(w);
        }
    }
    if let Some(w) = propose_local_witness(solid, &c, config.margin) {
        return Decision::Local(w);
    }
    choose_split(solid, region, &c)
}

/// Global-witness heuristic: project both shadows at the center, find the
/// vertex of the rotated first shadow sticking farthest outside the hull of
/// the second, and take the violated hull edge's outward normal as `w`,
/// rationalized to an exact unit vector.
pub fn propose_global_witness(
    solid: &Polyhedron,
    c: &RegionCenter<f64>,
) -> Option<GlobalWitness> {
    let verts = solid.vertices_f64();
    let m1 = projection(c.theta1, c.phi1);
    let m2 = projection(c.theta2, c.phi2);
    let rot = rot2(c.alpha);
    let inner: Vec<Vec2> = verts.iter().map(|&v| matvec2(rot, matvec23(m1, v))).collect();
    let outer: Vec<Vec2> = verts.iter().map(|&v| matvec23(m2, v)).collect();
    let hull = hull2(&outer);
    if hull.len() < 3 {
        return None;
    }
    let mut best: Option<(f64, usize, Vec2)> = None;
    for e in 0..hull.len() {
        let a = outer[hull[e]];
        let b = outer[hull[(e + 1) % hull.len()]];
        let d = sub2(b, a);
        let len = norm2(d);
        if len < 1e-12 {
            continue;
        }
        let n = [d[1] / len, -d[0] / len];
        for (s, &p) in inner.iter().enumerate() {
            let viol = dot2(n, sub2(p, a));
            if best.map_or(viol > 0.0, |(v, _, _)| viol > v) {
                best = Some((viol, s, n));
            }
        }
    }
    let (_, s_index, normal) = best?;
    let (wx, wy, wden) = rationalize_direction(normal);
    Some(GlobalWitness { s_index: s_index as u32, wx, wy, wden })
}

/// Nearest exact rational unit vector to `n`: tangent-half-angle
/// parametrization around whichever of the x half-axes keeps |t| <= 1, with
/// t rounded onto the 2^-24 grid, so `wx^2 + wy^2 = wden^2` holds in i64.
fn rationalize_direction(n: Vec2) -> (i64, i64, i64) {
    const B: i64 = 1 << 24;
    let toward_pos_x = n[0] >= 0.0;
    let t = if toward_pos_x { n[1] / (1.0 + n[0]) } else { n[1] / (1.0 - n[0]) };
    let a = (t * B as f64).round().clamp(-(B as f64), B as f64) as i64;
    let g = gcd(a.unsigned_abs(), B as u64) as i64;
    let (a, b) = (a / g, B / g);
    let (mut wx, wy, wden) = (b * b - a * a, 2 * a * b, a * a + b * b);
    if !toward_pos_x {
        wx = -wx;
    }
    let g = gcd(gcd(wx.unsigned_abs(), wy.unsigned_abs()), wden as u64) as i64;
    (wx / g, wy / g, wden / g)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Local-witness heuristic. Q is the best origin-spanning triple of hull
/// vertices of the second shadow that clear condition A (with margin, and a
/// common sign which becomes sigma_Q); candidate P triples are, in order,
/// Q itself, the triple whose rotated first-shadow projections land nearest
/// the Q projections (the delta-minimizing pairing), and symmetry images of
/// Q with per-vertex antipode flips; r is the largest multiple of 1/1000
/// below the projected norm bound. The first combination that passes the
/// full float check wins.
pub fn propose_local_witness(
    solid: &Polyhedron,
    c: &RegionCenter<f64>,
    margin: f64,
) -> Option<LocalWitness> {
    let verts = solid.vertices_f64();
    let eps = c.epsilon;
    let x2 = direction(c.theta2, c.phi2);
    let m2 = projection(c.theta2, c.phi2);
    let outer: Vec<Vec2> = verts.iter().map(|&v| matvec23(m2, v)).collect();
    let hull = hull2(&outer);
    if hull.len() < 3 {
        return None;
    }
    let rot_inner: Vec<Vec2> = {
        let m1 = projection(c.theta1, c.phi1);
        let rot = rot2(c.alpha);
        verts.iter().map(|&v| matvec2(rot, matvec23(m1, v))).collect()
    };
    let maps = symmetry_index_maps(solid);
    let a_threshold = SQRT2_HI * eps + margin;
    let span_threshold = 2.0 * eps * (SQRT2_HI + eps) + margin;

    for sigma_q in [0u8, 1] {
        let sign = if sigma_q == 0 { 1.0 } else { -1.0 };
        // Hull order (counterclockwise) is preserved in the candidate list,
        // so every increasing index triple is counterclockwise too.
        let cand: Vec<usize> = hull
            .iter()
            .copied()
            .filter(|&i| sign * dot3(x2, verts[i]) > a_threshold)
            .collect();
        if cand.len() < 3 {
            continue;
        }
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
        for &(_, q_idx) in scored.iter().take(5) {
            let min_norm = q_idx
                .iter()
                .map(|&i| norm2(matvec23(m2, verts[i])))
                .fold(f64::INFINITY, f64::min);
            let r_numer =
                ((min_norm - SQRT2_HI * eps - margin) * R_DENOM as f64).floor() as i64;
            if r_numer < 1 {
                continue;
            }
            let r = r_numer as f64 / R_DENOM as f64;
            let q = q_idx.map(|i| i as u32);

            let mut p_candidates: Vec<[u32; 3]> = vec![q];
            p_candidates.push(std::array::from_fn(|i| {
                nearest_projected(&rot_inner, outer[q_idx[i]]) as u32
            }));
            for map in &maps {
                for flips in 0..8u32 {
                    p_candidates.push(std::array::from_fn(|i| {
                        let mapped = map[q_idx[i]];
                        if flips >> i & 1 == 0 {
                            mapped as u32
                        } else {
                            antipode(solid, mapped) as u32
                        }
                    }));
                }
            }
            let mut tried: Vec<[u32; 3]> = Vec::new();
            for p in p_candidates {
                if tried.contains(&p) {
                    continue;
                }
                tried.push(p);
                // Hopeless pairings die here: the condition-B ratio never
                // exceeds 1, so a right side at 1 or beyond cannot work.
                let delta_est = delta_float(solid, c, &p, &q);
                if (SQRT5_HI * eps + delta_est) / r >= 1.0 {
                    continue;
                }
                let wit = LocalWitness { p, q, r_numer, sigma_q };
                if local_check_float(solid, c, &wit).is_excluded() {
                    return Some(wit);
                }
            }
        }
    }
    None
}

/// Index of the projected point nearest to `target`.
fn nearest_projected(projected: &[Vec2], target: Vec2) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (i, &p) in projected.iter().enumerate() {
        let d = norm2(sub2(p, target));
        if d < best.0 {
            best = (d, i);
        }
    }
    best.1
}

/// Half the largest distance between paired projected witness points.
fn delta_float(solid: &Polyhedron, c: &RegionCenter<f64>, p: &[u32; 3], q: &[u32; 3]) -> f64 {
    let verts = solid.vertices_f64();
    let m1 = projection(c.theta1, c.phi1);
    let m2 = projection(c.theta2, c.phi2);
    let rot = rot2(c.alpha);
    (0..3)
        .map(|i| {
            let a = matvec2(rot, matvec23(m1, verts[p[i] as usize]));
            let b = matvec23(m2, verts[q[i] as usize]);
            norm2(sub2(a, b))
        })
        .fold(0.0, f64::max)
        / 2.0
}

/// Vertex index maps induced by the solid's symmetries: all 30 rotation/sign
/// images for orbit solids (identity first), identity plus the antipode map
/// otherwise.
fn symmetry_index_maps(solid: &Polyhedron) -> Vec<Vec<usize>> {
    if solid.is_orbit() {
        let mut maps = Vec::with_capacity(30);
        for l in 0..2 {
            for k in 0..15 {
                maps.push(
                    (0..90)
                        .map(|idx| {
                            let (i, kk, ll) = orbit_decompose(idx);
                            orbit_index(i, (kk + k) % 15, (ll + l) % 2)
                        })
                        .collect(),
                );
            }
        }
        maps
    } else {
        let n = solid.n_vertices();
        let id: Vec<usize> = (0..n).collect();
        let anti: Vec<usize> = (0..n).map(|i| antipode(solid, i)).collect();
        vec![id, anti]
    }
}

/// Index of `-v` for vertex `i`; point symmetry guarantees it exists.
fn antipode(solid: &Polyhedron, i: usize) -> usize {
    if solid.is_orbit() {
        let (gi, k, l) = orbit_decompose(i);
        return orbit_index(gi, k, 1 - l);
    }
    let verts = solid.vertices_f64();
    let v = verts[i];
    verts
        .iter()
        .position(|w| (0..3).all(|c| (w[c] + v[c]).abs() < 1e-12))
        .expect("point-symmetric vertex set")
}

/// Split policy. Boxes meeting the coincident-shadow manifold halve all five
/// dimensions at once (only the local theorem can finish them, and it needs
/// every coordinate tight); any other box halves a widest dimension, because
/// epsilon is the maximum half-width and narrowing anything else is free but
/// useless. Ties among widest dimensions break toward the coordinate whose
/// first-derivative penalty term is largest at the center.
fn choose_split(solid: &Polyhedron, region: &Region5, c: &RegionCenter<f64>) -> Decision {
    let wmax = region.max_width();
    if wmax < 2 {
        return Decision::Stuck;
    }
    let b = region.bounds;
    let overlaps = |x: (i64, i64), y: (i64, i64)| x.0 <= y.1 && y.0 <= x.1;
    let near_diagonal =
        overlaps(b[0], b[2]) && overlaps(b[1], b[3]) && b[4].0 <= 0 && 0 <= b[4].1;
    if near_diagonal && b.iter().all(|&(lo, hi)| hi - lo >= 2) {
        return Decision::Split { code: 6, children: region.split_all() };
    }
    let weights = derivative_weights(solid, c);
    let dim = (0..5)
        .filter(|&d| region.width(d) == wmax)
        .max_by(|&x, &y| weights[x].total_cmp(&weights[y]).then(y.cmp(&x)))
        .unwrap();
    Decision::Split { code: dim as u8 + 1, children: region.split_dim(dim, 2) }
}

/// Worst-case sensitivity of a projected vertex to each coordinate: the
/// largest norm of the derivative of its projected position at the center.
fn derivative_weights(solid: &Polyhedron, c: &RegionCenter<f64>) -> [f64; 5] {
    let mats = [
        projection_dtheta(c.theta1, c.phi1),
        projection_dphi(c.theta1, c.phi1),
        projection_dtheta(c.theta2, c.phi2),
        projection_dphi(c.theta2, c.phi2),
        projection(c.theta1, c.phi1),
    ];
    let mut w = [0.0f64; 5];
    for &v in solid.vertices_f64() {
        let by_coord = [
            norm2(matvec23(mats[0], v)),
            norm2(matvec23(mats[1], v)),
            norm2(matvec23(mats[2], v)),
            norm2(matvec23(mats[3], v)),
            // The alpha derivative is a rotation of the projected point, so
            // its norm is the projected norm itself.
            norm2(matvec23(mats[4], v)),
        ];
        // Coordinate order in weights: theta1, phi1, theta2, phi2, alpha.
        for (d, src) in [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)] {
            w[d] = w[d].max(by_coord[src]);
        }
    }
    w
}

/// Children for an explicit split code: 1-5 cut that dimension into `parts`
/// equal strips, 6 halves everything (32 children, `parts` ignored).
pub fn split_region(region: &Region5, code: u8, parts: u32) -> Option<Vec<Region5>> {
    match code {
        1..=5 => Some(region.split_dim(code as usize - 1, parts)),
        6 => Some(region.split_all()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certtree::check_integrity;
    use crate::solids::{octahedron, ruperthedron};

    /// Region around a point, all five widths equal, bounds on the grid.
    fn box_around(mid: [f64; 5], half_width_numer: i64) -> Region5 {
        Region5::new(std::array::from_fn(|d| {
            let m = (mid[d] * REGION_DENOM as f64).round() as i64;
            (m - half_width_numer, m + half_width_numer)
        }))
    }

    fn diag_phi() -> f64 {
        2f64.sqrt().atan()
    }

    #[test]
    fn global_proposal_matches_the_worked_instance() {
        // At (0, 0, pi/4, atan sqrt 2, 0) the third vertex of the first
        // shadow pokes out through the vertical hull edge of the second by
        // 1 - 1/sqrt(2): S = O3 with w = (1, 0). Point symmetry gives the
        // antipodal witness S = O5, w = (-1, 0) the same violation, so
        // either twin may win the float argmax.
        let octa = octahedron();
        let c = RegionCenter::new([0.0, 0.0, std::f64::consts::FRAC_PI_4, diag_phi(), 0.0], 0.1);
        let w = propose_global_witness(&octa, &c).unwrap();
        let twins = [
            GlobalWitness { s_index: 2, wx: 1, wy: 0, wden: 1 },
            GlobalWitness { s_index: 4, wx: -1, wy: 0, wden: 1 },
        ];
        assert!(twins.contains(&w), "got {w:?}");
        // Identical shadows leave nothing outside the hull.
        let c = RegionCenter::new([0.3, 0.8, 0.3, 0.8, 0.0], 0.1);
        assert!(propose_global_witness(&octa, &c).is_none());
    }

    #[test]
    fn rationalized_directions_are_exactly_unit() {
        for k in 0..64 {
            let ang = -3.2 + 0.1 * k as f64;
            let (wx, wy, wden) = rationalize_direction([ang.cos(), ang.sin()]);
            assert!(wden > 0);
            assert_eq!(
                (wx as i128) * (wx as i128) + (wy as i128) * (wy as i128),
                (wden as i128) * (wden as i128)
            );
            // Within the 2^-24 parametrization grid of the requested angle.
            let err = (wx as f64 / wden as f64 - ang.cos()).abs()
                + (wy as f64 / wden as f64 - ang.sin()).abs();
            assert!(err < 1e-6, "angle {ang}: err {err}");
        }
        assert_eq!(rationalize_direction([1.0, 0.0]), (1, 0, 1));
        assert_eq!(rationalize_direction([-1.0, 0.0]), (-1, 0, 1));
        assert_eq!(rationalize_direction([0.0, -1.0]), (0, -1, 1));
    }

    #[test]
    fn local_proposal_takes_the_diagonal_with_identity_pairing() {
        let octa = octahedron();
        let c = RegionCenter::new(
            [std::f64::consts::FRAC_PI_4, diag_phi(), std::f64::consts::FRAC_PI_4, diag_phi(), 0.0],
            0.024,
        );
        let wit = propose_local_witness(&octa, &c, 1e-4).unwrap();
        assert_eq!(wit.p, wit.q, "identity pairing wins on the diagonal");
        assert_eq!(wit.sigma_q, 0);
        // r = floor((sqrt(2/3) - 1.42 eps - margin) * 1000).
        assert_eq!(wit.r_numer, 782);
        assert!(local_check_float(&octa, &c, &wit).is_excluded());
    }

    #[test]
    fn local_proposal_handles_the_mirrored_view_with_a_crossed_pairing() {
        // phi2 = pi - phi1: condition A only holds with sigma_Q = 1, and the
        // matching P triple is not a rotation or antipode image of Q; the
        // nearest-projection pairing finds it with zero mismatch.
        let octa = octahedron();
        let c = RegionCenter::new(
            [
                std::f64::consts::FRAC_PI_4,
                diag_phi(),
                std::f64::consts::FRAC_PI_4,
                std::f64::consts::PI - diag_phi(),
                0.0,
            ],
            0.024,
        );
        let wit = propose_local_witness(&octa, &c, 1e-4).unwrap();
        assert_eq!(wit.sigma_q, 1);
        assert_eq!(wit.q, [4, 3, 0]);
        assert_eq!(wit.p, [1, 2, 0]);
        assert!(delta_float(&octa, &c, &wit.p, &wit.q) < 1e-9);
        assert!(local_check_float(&octa, &c, &wit).is_excluded());
    }

    #[test]
    fn far_view_has_no_local_witness() {
        let octa = octahedron();
        let c = RegionCenter::new([0.0, 0.0, 0.0, 1.3, -1.0], 0.02);
        assert!(propose_local_witness(&octa, &c, 1e-4).is_none());
    }

    #[test]
    fn single_global_leaf_when_a_vertex_is_far_outside() {
        let octa = octahedron();
        let root = box_around([0.0, 0.0, std::f64::consts::FRAC_PI_4, diag_phi(), 0.0], 76_800);
        let (nodes, stats) = build_tree_in_memory(&octa, root, &BuildConfig::default()).unwrap();
        assert_eq!(stats.total, 1);
        assert_eq!(stats.global_leaves, 1);
        assert!(matches!(nodes[0].body, NodeBody::Global(_)));
    }

    #[test]
    fn single_local_leaf_on_a_tight_diagonal_box() {
        let octa = octahedron();
        let root = box_around(
            [std::f64::consts::FRAC_PI_4, diag_phi(), std::f64::consts::FRAC_PI_4, diag_phi(), 0.0],
            368_640, // eps = 0.024
        );
        let (nodes, stats) = build_tree_in_memory(&octa, root, &BuildConfig::default()).unwrap();
        assert_eq!((stats.total, stats.local_leaves), (1, 1));
        assert!(matches!(nodes[0].body, NodeBody::Local(_)));
    }

    #[test]
    fn diagonal_box_splits_all_dimensions_and_passes_integrity() {
        let octa = octahedron();
        // eps = 0.096: too wide for the local theorem, so the root must do a
        // full split and the children must finish within a few levels.
        let root = box_around(
            [std::f64::consts::FRAC_PI_4, diag_phi(), std::f64::consts::FRAC_PI_4, diag_phi(), 0.0],
            1_474_560,
        );
        let (nodes, stats) = build_tree_in_memory(&octa, root, &BuildConfig::default()).unwrap();
        assert!(matches!(nodes[0].body, NodeBody::Split { split: 6, .. }));
        assert_eq!(stats.total, nodes.len() as u64);
        assert_eq!(stats.interior + stats.leaves(), stats.total, "conservation");
        let report = check_integrity(nodes.iter().cloned(), Some(root), Some(6));
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn off_diagonal_box_splits_one_dimension() {
        let octa = octahedron();
        // Wide in theta2 only, far from the diagonal; no witness at this
        // width, so the split must cut exactly the wide dimension.
        let mut root = box_around([0.2, 0.3, 1.8, 1.3, -1.0], 1000);
        root.bounds[2] = (root.bounds[2].0 - 2_000_000, root.bounds[2].1 + 2_000_000);
        let c = RegionCenter::<f64>::from_region(&root);
        match choose_split(&octa, &root, &c) {
            Decision::Split { code: 3, children } => {
                assert_eq!(children.len(), 2);
                assert_eq!(children[0].bounds[2].1, children[1].bounds[2].0);
            }
            _ => panic!("expected a theta2 split"),
        }
    }

    #[test]
    fn determinism_across_thread_counts() {
        let octa = octahedron();
        let root = box_around(
            [std::f64::consts::FRAC_PI_4, diag_phi(), std::f64::consts::FRAC_PI_4, diag_phi(), 0.0],
            1_474_560, // eps = 0.096: forces at least one full split
        );
        let run = |threads: usize| -> Vec<u8> {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                let mut w = TreeWriter::new(Vec::new()).unwrap();
                build_tree(&octa, root, &BuildConfig::default(), &mut w).unwrap();
                w.finish().unwrap()
            })
        };
        let once = run(1);
        assert_eq!(once, run(2));
        assert_eq!(once, run(4));
        assert!(once.len() > 100);
    }

    #[test]
    fn solution_point_region_is_never_claimed() {
        // A point box exactly at the known passage parameters: no witness
        // may exist, and a zero-width box cannot split, so the build must
        // stop with the unsplittable error rather than emit anything false.
        let rup = ruperthedron();
        let root = box_around([0.29, 0.29, 0.02, 2.27, -1.02], 0);
        match build_tree_in_memory(&rup, root, &BuildConfig::default()) {
            Err(BuildError::Unsplittable(r)) => assert_eq!(r, root),
            other => panic!("expected Unsplittable, got {other:?}"),
        }
    }

    #[test]
    fn depth_cap_fails_loudly_over_the_passage() {
        let rup = ruperthedron();
        let root = box_around([0.29, 0.29, 0.02, 2.27, -1.02], 15_360); // eps 1e-3
        let config = BuildConfig { max_depth: 2, ..BuildConfig::default() };
        match build_tree_in_memory(&rup, root, &config) {
            Err(BuildError::DepthLimit { depth: 2, unresolved, .. }) => assert!(unresolved > 0),
            other => panic!("expected DepthLimit, got {other:?}"),
        }
    }

    #[test]
    fn bad_roots_are_rejected() {
        let octa = octahedron();
        let out_of_domain = Region5::new([(0, 100 * REGION_DENOM); 5]);
        assert!(matches!(
            build_tree_in_memory(&octa, out_of_domain, &BuildConfig::default()),
            Err(BuildError::BadRoot)
        ));
        let backwards = Region5::new([(5, 4); 5]);
        assert!(matches!(
            build_tree_in_memory(&octa, backwards, &BuildConfig::default()),
            Err(BuildError::BadRoot)
        ));
    }

    #[test]
    fn split_region_codes() {
        let r = Region5::new([(0, 64); 5]);
        assert_eq!(split_region(&r, 3, 30).unwrap().len(), 30);
        assert_eq!(split_region(&r, 6, 2).unwrap().len(), 32);
        assert!(split_region(&r, 7, 2).is_none());
    }
}
