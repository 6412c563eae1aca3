//! The positive direction: finding, certifying and scaling Rupert passages.
//!
//! A passage claim is certified entirely in rational arithmetic: both shadows
//! go through the kappa-rational trig kernel, the outer hull is built with
//! exact comparisons, and every scaled inner vertex must clear every hull
//! edge by a buffer that dominates all kernel error. The search side is
//! plain floating point and only ever *proposes*; nothing it says is
//! believed until the exact pipeline agrees.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::exact::rat::{qmatvec2, qmatvec23, QVec2};
use crate::exact::sqrt::norm2_upper;
use crate::exact::trig::{proj_q, rot_q, trig_q};
use crate::exact::{kappa, rat, rat_int, Rat};
use crate::geom::{hull2, matvec2, matvec23, norm2, projection, rot2, sub2, Vec2};
use crate::solids::{Polyhedron, SolidError};

/// A claimed passage: the five view parameters and a scale the inner copy
/// passes at. `nu >= 1` means a genuine Rupert solution with that Nieuwland
/// lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct RupertSolution {
    pub theta1: Rat,
    pub phi1: Rat,
    pub theta2: Rat,
    pub phi2: Rat,
    pub alpha: Rat,
    pub nu: Rat,
}

impl RupertSolution {
    pub fn new(angles: [Rat; 5], nu: Rat) -> Self {
        let [theta1, phi1, theta2, phi2, alpha] = angles;
        RupertSolution { theta1, phi1, theta2, phi2, alpha, nu }
    }

    pub fn angles(&self) -> [&Rat; 5] {
        [&self.theta1, &self.phi1, &self.theta2, &self.phi2, &self.alpha]
    }

    pub fn angles_f64(&self) -> [f64; 5] {
        self.angles().map(crate::exact::rat_to_f64)
    }
}

/// The known passage of the 90-vertex Rupert solid, with its certified
/// scale bound.
pub fn ruperthedron_solution() -> RupertSolution {
    RupertSolution::new(
        [rat(29, 100), rat(29, 100), rat(2, 100), rat(227, 100), rat(-102, 100)],
        rat(1003, 1000),
    )
}

#[derive(Debug, thiserror::Error)]
pub enum SolutionError {
    #[error("angle outside the kernel domain [-4, 4]")]
    AngleOutOfDomain,
    #[error("scale must be positive")]
    BadScale,
    #[error("outer shadow hull is degenerate")]
    DegenerateHull,
    #[error("solid: {0}")]
    Solid(#[from] SolidError),
}

fn qcross(u: &QVec2, v: &QVec2) -> Rat {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Monotone-chain convex hull over exact rationals, counterclockwise,
/// collinear points dropped. Returns indices into `pts`.
fn hull_q(pts: &[QVec2]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| pts[i][0].cmp(&pts[j][0]).then_with(|| pts[i][1].cmp(&pts[j][1])));
    idx.dedup_by(|&mut i, &mut j| pts[i] == pts[j]);
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| -> Rat {
        qcross(
            &[&pts[a][0] - &pts[o][0], &pts[a][1] - &pts[o][1]],
            &[&pts[b][0] - &pts[o][0], &pts[b][1] - &pts[o][1]],
        )
    };
    let build = |order: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for i in order {
            while chain.len() >= 2
                && turn(chain[chain.len() - 2], chain[chain.len() - 1], i) <= Rat::zero()
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
        chain
    };
    let mut hull = build(&mut idx.iter().copied());
    hull.extend(build(&mut idx.iter().rev().copied()));
    hull
}

/// The containment constraints of one view configuration, reduced to linear
/// forms in the scale: inner vertex `p` clears hull edge `(a, b)` at scale
/// `nu` iff `nu * cross(b - a, p) + cross(a, b - a) > margin(edge)`. The
/// margin `100 kappa (1 + |b - a|_+)` dominates every kernel error on the
/// harmful side, so a pass is trustworthy and a miss is merely unproven.
struct Containment {
    /// (slope, offset - margin): the constraint is `nu * slope + offset > 0`.
    terms: Vec<(Rat, Rat)>,
}

impl Containment {
    fn prepare(solid: &Polyhedron, angles: [&Rat; 5]) -> Result<Containment, SolutionError> {
        let four = rat_int(4);
        if angles.iter().any(|a| a.abs() > four) {
            return Err(SolutionError::AngleOutOfDomain);
        }
        let verts = solid.truncated_vertices(16)?;
        let [t1, f1, t2, f2, al] = angles.map(trig_q);
        let m1 = proj_q(&t1, &f1);
        let m2 = proj_q(&t2, &f2);
        let rot = rot_q(&al);
        let inner: Vec<QVec2> =
            verts.iter().map(|v| qmatvec2(&rot, &qmatvec23(&m1, v))).collect();
        let outer: Vec<QVec2> = verts.iter().map(|v| qmatvec23(&m2, v)).collect();
        let hull = hull_q(&outer);
        if hull.len() < 3 {
            return Err(SolutionError::DegenerateHull);
        }
        let buffer = rat_int(100) * kappa();
        let mut terms = Vec::with_capacity(hull.len() * inner.len());
        for e in 0..hull.len() {
            let a = &outer[hull[e]];
            let b = &outer[hull[(e + 1) % hull.len()]];
            let d: QVec2 = [&b[0] - &a[0], &b[1] - &a[1]];
            let margin = &buffer * (rat_int(1) + norm2_upper(&d));
            let offset_base = qcross(a, &d) - margin;
            for p in &inner {
                terms.push((qcross(&d, p), offset_base.clone()));
            }
        }
        Ok(Containment { terms })
    }

    fn certifies(&self, nu: &Rat) -> bool {
        self.terms.iter().all(|(slope, offset)| nu * slope + offset > Rat::zero())
    }
}

/// Exact certification that the solid at `sol.nu` times its size passes
/// through the hole cut along the outer view. True only when strict
/// containment is certified past all kernel error.
pub fn certify_solution(solid: &Polyhedron, sol: &RupertSolution) -> Result<bool, SolutionError> {
    if !sol.nu.is_positive() {
        return Err(SolutionError::BadScale);
    }
    Ok(Containment::prepare(solid, sol.angles())?.certifies(&sol.nu))
}

const NU_GRID: i64 = 10_000;

/// Largest certified scale on the 1/10000 grid for this passage, found by
/// bisection in [1, 2]; `None` if even scale 1 fails. A result of exactly 2
/// means the search hit its cap, not an optimum.
pub fn nieuwland_lower(
    solid: &Polyhedron,
    sol: &RupertSolution,
) -> Result<Option<Rat>, SolutionError> {
    let pre = Containment::prepare(solid, sol.angles())?;
    if !pre.certifies(&rat_int(1)) {
        return Ok(None);
    }
    if pre.certifies(&rat_int(2)) {
        return Ok(Some(rat_int(2)));
    }
    let (mut lo, mut hi) = (NU_GRID, 2 * NU_GRID);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pre.certifies(&rat(mid, NU_GRID)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(rat(lo, NU_GRID)))
}

/// Float figure of merit for a parameter point. Below or at 1: the largest
/// clearance-per-length slack of the worst inner vertex (negative when the
/// inner shadow pokes out). Above 1: an estimate of the largest scale the
/// containment survives, capped at 8. Continuous enough to rank candidates.
pub fn passage_score(solid: &Polyhedron, angles: [f64; 5]) -> f64 {
    const CAP: f64 = 8.0;
    let verts = solid.vertices_f64();
    let m1 = projection(angles[0], angles[1]);
    let m2 = projection(angles[2], angles[3]);
    let rot = rot2(angles[4]);
    let outer: Vec<Vec2> = verts.iter().map(|&v| matvec23(m2, v)).collect();
    let hull = hull2(&outer);
    if hull.len() < 3 {
        return f64::NEG_INFINITY;
    }
    let inner: Vec<Vec2> = verts.iter().map(|&v| matvec2(rot, matvec23(m1, v))).collect();
    let mut slack = f64::INFINITY;
    let mut nu_bound = CAP;
    for e in 0..hull.len() {
        let a = outer[hull[e]];
        let b = outer[hull[(e + 1) % hull.len()]];
        let len = norm2(sub2(b, a));
        if len < 1e-15 {
            continue;
        }
        let d = sub2(b, a);
        let offset = a[0] * d[1] - a[1] * d[0];
        for &p in &inner {
            let slope = d[0] * p[1] - d[1] * p[0];
            slack = slack.min((slope + offset) / len);
            if slope < 0.0 {
                nu_bound = nu_bound.min(-offset / slope);
            }
        }
    }
    if slack <= 0.0 {
        slack.min(1.0)
    } else {
        nu_bound
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Grid ranges for theta1, phi1, theta2, phi2, alpha.
    pub ranges: [(f64, f64); 5],
    /// Grid steps per dimension.
    pub steps: [u32; 5],
    /// How many best grid cells get refined.
    pub seeds: usize,
    /// Coordinate-descent rounds per seed.
    pub descent_iters: u32,
    /// Required float scale estimate before exact certification is tried.
    pub min_score: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ranges: [
                (0.0, std::f64::consts::PI),
                (0.0, std::f64::consts::PI),
                (0.0, std::f64::consts::PI),
                (0.0, std::f64::consts::PI),
                (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            ],
            steps: [6, 6, 6, 6, 7],
            seeds: 10,
            descent_iters: 80,
            min_score: 1.0 + 1e-4,
        }
    }
}

fn descend(solid: &Polyhedron, start: [f64; 5], iters: u32) -> ([f64; 5], f64) {
    let mut x = start;
    let mut best = passage_score(solid, x);
    let mut step = 0.08;
    for _ in 0..iters {
        let mut improved = false;
        for d in 0..5 {
            for s in [step, -step] {
                let mut y = x;
                y[d] = (y[d] + s).clamp(-3.9, 3.9);
                let v = passage_score(solid, y);
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
    }
    (x, best)
}

/// Deterministic passage search: score a coarse grid in parallel, refine the
/// best cells by coordinate descent, snap the winners to the 1/10000 angle
/// grid and certify exactly. Returns the first certified solution with its
/// exact scale bound.
pub fn search_solution(
    solid: &Polyhedron,
    config: &SearchConfig,
) -> Result<Option<RupertSolution>, SolutionError> {
    let dims: Vec<Vec<f64>> = (0..5)
        .map(|d| {
            let (lo, hi) = config.ranges[d];
            let n = config.steps[d].max(1);
            (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect()
        })
        .collect();
    let total: usize = dims.iter().map(Vec::len).product();
    let mut cells: Vec<(f64, [f64; 5])> = (0..total)
        .into_par_iter()
        .map(|mut flat| {
            let angles: [f64; 5] = std::array::from_fn(|d| {
                let v = dims[d][flat % dims[d].len()];
                flat /= dims[d].len();
                v
            });
            (passage_score(solid, angles), angles)
        })
        .collect();
    cells.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.iter().partial_cmp(y.1.iter()).unwrap()));

    let mut refined: Vec<(f64, [f64; 5])> = cells
        .iter()
        .take(config.seeds)
        .map(|&(_, start)| {
            let (x, score) = descend(solid, start, config.descent_iters);
            (score, x)
        })
        .collect();
    refined.sort_by(|x, y| y.0.total_cmp(&x.0));

    for (score, x) in refined {
        if score < config.min_score {
            continue;
        }
        let angles: [Rat; 5] = std::array::from_fn(|d| {
            rat((x[d] * NU_GRID as f64).round() as i64, NU_GRID)
        });
        let candidate = RupertSolution::new(angles, rat_int(1));
        if let Some(nu) = nieuwland_lower(solid, &candidate)? {
            return Ok(Some(RupertSolution { nu, ..candidate }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Csv,
}

/// One shadow as plot-ready text. Layers: every projected vertex under
/// `outer`, the hull polyline under `hull`, and, when `alpha` is given, the
/// alpha-rotated shadow under `inner`. CSV and SVG are rendered from the
/// same records, so their coordinates match to the digit.
pub fn export_projection(
    solid: &Polyhedron,
    theta: f64,
    phi: f64,
    alpha: Option<f64>,
    format: ExportFormat,
) -> String {
    let m = projection(theta, phi);
    let outer: Vec<Vec2> = solid.vertices_f64().iter().map(|&v| matvec23(m, v)).collect();
    let hull = hull2(&outer);
    let mut records: Vec<(String, String, &'static str)> = Vec::new();
    let fmt = |v: f64| format!("{v:.12}");
    for p in &outer {
        records.push((fmt(p[0]), fmt(p[1]), "outer"));
    }
    for &i in &hull {
        records.push((fmt(outer[i][0]), fmt(outer[i][1]), "hull"));
    }
    if let Some(al) = alpha {
        let rot = rot2(al);
        for p in &outer {
            let q = matvec2(rot, *p);
            records.push((fmt(q[0]), fmt(q[1]), "inner"));
        }
    }
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("x,y,layer\n");
            for (x, y, layer) in &records {
                writeln!(out, "{x},{y},{layer}").unwrap();
            }
            out
        }
        ExportFormat::Svg => {
            let mut out = String::new();
            writeln!(
                out,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.3 -1.3 2.6 2.6\">"
            )
            .unwrap();
            writeln!(out, "<g transform=\"scale(1,-1)\">").unwrap();
            let polyline: Vec<String> = records
                .iter()
                .filter(|r| r.2 == "hull")
                .map(|(x, y, _)| format!("{x},{y}"))
                .collect();
            writeln!(
                out,
                "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.01\"/>",
                polyline.join(" ")
            )
            .unwrap();
            for (x, y, layer) in &records {
                if *layer == "hull" {
                    continue;
                }
                let color = if *layer == "inner" { "crimson" } else { "steelblue" };
                writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"0.015\" fill=\"{color}\"/>")
                    .unwrap();
            }
            writeln!(out, "</g>").unwrap();
            writeln!(out, "</svg>").unwrap();
            out
        }
    }
}
